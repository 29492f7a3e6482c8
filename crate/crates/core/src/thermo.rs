//! Heat, work and entropy bookkeeping for an erasure transformation.

use crate::closed_form::biased_qubit_heat;
use crate::erasure::{max_erasure_probability, ErasureOutcome, PhysicalContext};
use crate::error::{Error, Result};
use crate::quantum::{binary_entropy, eigh, shannon_entropy, CMatrix};
use crate::tol;

/// Full thermodynamic account of `ρ → ρ'`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoReport {
    /// `S(ρ_O) - S(ρ_O')`.
    pub ds: f64,
    /// `tr[H_R(ρ_R' - ρ_R(β))]`.
    pub dq: f64,
    /// `tr[H_O(ρ_O' - ρ_O)]`.
    pub dw: f64,
    /// Total energy change, computed on the joint state.
    pub de: f64,
    pub mutual_info: f64,
    /// `S(ρ_R'‖ρ_R(β))`; `+∞` on a support mismatch.
    pub rel_entropy_r: f64,
    pub p_erase: f64,
    /// Excess over the improved finite-reservoir bound; `None` for `d_R < 2`.
    pub dl: Option<f64>,
    /// `βΔQ - (ΔS + I + D)`; `None` when the relative entropy is infinite.
    pub landauer_residual: Option<f64>,
}

/// The post-transformation data the report needs, in the context's
/// product basis (object frame ⊗ reservoir energy basis).
#[derive(Debug, Clone, PartialEq)]
pub struct PostState {
    /// `ρ_O'` in the object frame.
    pub object: CMatrix,
    /// Diagonal of `ρ_R'`.
    pub reservoir_diag: Vec<f64>,
    /// Eigenvalues of `ρ_R'`.
    pub reservoir_eigenvalues: Vec<f64>,
    /// Eigenvalues of `ρ'`.
    pub joint_eigenvalues: Vec<f64>,
    /// `tr[(H_O + H_R)(ρ' - ρ)]`.
    pub energy_change: f64,
}

impl PostState {
    pub fn from_outcome(ctx: &PhysicalContext, out: &ErasureOutcome) -> Self {
        let d_r = ctx.d_r();
        let h = &ctx.frame().hamiltonian;
        let lam = ctx.reservoir_energies();
        let joint_energy = |pops: &[f64]| -> f64 {
            pops.iter()
                .enumerate()
                .map(|(k, p)| p * (h[(k / d_r, k / d_r)].re + lam[k % d_r]))
                .sum()
        };
        let mut de = joint_energy(&out.state.populations) - joint_energy(&ctx.joint_populations());
        if let Some((x, y, c)) = out.state.coherence {
            let (lx, mx) = (x / d_r, x % d_r);
            let (ly, my) = (y / d_r, y % d_r);
            if mx == my {
                de += 2.0 * (c * h[(ly, lx)]).re;
            }
        }
        Self {
            object: out.object.clone(),
            reservoir_diag: out.reservoir_diag.clone(),
            reservoir_eigenvalues: out.reservoir_eigenvalues(),
            joint_eigenvalues: out.state.eigenvalues(),
            energy_change: de,
        }
    }

    /// From a dense joint state in the label basis.
    pub fn from_dense(ctx: &PhysicalContext, rho: &CMatrix) -> Result<Self> {
        let (d_o, d_r) = (ctx.d_o(), ctx.d_r());
        if rho.nrows() != d_o * d_r {
            return Err(Error::DimensionMismatch {
                expected: d_o * d_r,
                found: rho.nrows(),
            });
        }
        let object = CMatrix::from_fn(d_o, d_o, |i, j| {
            (0..d_r).map(|m| rho[(i * d_r + m, j * d_r + m)]).sum()
        });
        let reservoir = CMatrix::from_fn(d_r, d_r, |i, j| {
            (0..d_o).map(|l| rho[(l * d_r + i, l * d_r + j)]).sum()
        });
        let reservoir_diag: Vec<f64> = (0..d_r).map(|m| reservoir[(m, m)].re).collect();
        let h = &ctx.frame().hamiltonian;
        let lam = ctx.reservoir_energies();
        let o0 = ctx.object_populations();
        let mut e_obj = 0.0;
        for i in 0..d_o {
            for j in 0..d_o {
                e_obj += (h[(i, j)] * object[(j, i)]).re;
            }
            e_obj -= h[(i, i)].re * o0[i];
        }
        let e_res: f64 = (0..d_r)
            .map(|m| lam[m] * (reservoir_diag[m] - ctx.reservoir_populations()[m]))
            .sum();
        Ok(Self {
            object,
            reservoir_eigenvalues: eigh(&reservoir).0,
            reservoir_diag,
            joint_eigenvalues: eigh(rho).0,
            energy_change: e_obj + e_res,
        })
    }
}

/// Computes the report for an outcome produced by `apply_plan`.
pub fn report(ctx: &PhysicalContext, out: &ErasureOutcome) -> ThermoReport {
    report_post_state(ctx, &PostState::from_outcome(ctx, out))
}

pub fn report_post_state(ctx: &PhysicalContext, post: &PostState) -> ThermoReport {
    let beta = ctx.beta();
    let o = ctx.object_populations();
    let lam = ctx.reservoir_energies();
    let r = ctx.reservoir_populations();
    let log_r = ctx.log_reservoir_populations();
    let h = &ctx.frame().hamiltonian;

    let s_o = shannon_entropy(o);
    let s_o1 = shannon_entropy(&eigh(&post.object).0);
    let s_r1 = shannon_entropy(&post.reservoir_eigenvalues);
    let s_joint1 = shannon_entropy(&post.joint_eigenvalues);

    let dq: f64 = post
        .reservoir_diag
        .iter()
        .zip(r)
        .zip(lam)
        .map(|((a, b), e)| (a - b) * e)
        .sum();
    let d_o = o.len();
    let mut dw = 0.0;
    for i in 0..d_o {
        for j in 0..d_o {
            dw += (h[(i, j)] * post.object[(j, i)]).re;
        }
        dw -= h[(i, i)].re * o[i];
    }

    let mut cross = 0.0;
    let mut infinite = false;
    for (m, &w) in post.reservoir_diag.iter().enumerate() {
        if r[m] < tol::SUPPORT && w > tol::SUPPORT_WEIGHT {
            infinite = true;
        }
        cross += w * log_r[m];
    }
    let rel = if infinite {
        f64::INFINITY
    } else {
        (-s_r1 - cross).max(0.0)
    };
    let mutual_info = (s_o1 + s_r1 - s_joint1).max(0.0);
    let ds = s_o - s_o1;
    let landauer_residual = rel
        .is_finite()
        .then_some(beta * dq - (ds + mutual_info + rel));
    let dl = landauer_excess(dq, ds, ctx.d_r(), beta).ok();
    ThermoReport {
        ds,
        dq,
        dw,
        de: post.energy_change,
        mutual_info,
        rel_entropy_r: rel,
        p_erase: post.object[(0, 0)].re,
        dl,
        landauer_residual,
    }
}

/// `ΔL = ΔQ - (ΔS + 2ΔS²/(ln²(d_R-1) + 4))/β`.
pub fn landauer_excess(dq: f64, ds: f64, d_r: usize, beta: f64) -> Result<f64> {
    if d_r < 2 {
        return Err(Error::param("the excess needs a reservoir of dimension ≥ 2"));
    }
    let l = ((d_r - 1) as f64).ln();
    Ok(dq - (ds + 2.0 * ds * ds / (l * l + 4.0)) / beta)
}

/// `βΔQ(q) - ΔS(q)` for fully erasing a qubit with populations `(q, 1-q)`
/// into an optimally tuned two-level reservoir.
pub fn qubit_landauer_gap(q: f64, beta: f64) -> Result<f64> {
    let dq = biased_qubit_heat(q, beta)?;
    Ok(beta * dq - binary_entropy(q))
}

/// Solves for the ladder gap `ω` at which a `d`-level ladder reservoir gives
/// the requested maximal erasure probability for the object populations.
pub fn ladder_gap_for_pmax(d: usize, beta: f64, object: &[f64], target: f64) -> Result<f64> {
    let pmax = |w: f64| -> Result<f64> {
        let e = (0..d).map(|m| w * m as f64).collect();
        Ok(max_erasure_probability(&PhysicalContext::diagonal(object, e, beta)?))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if !(target > pmax(1e-300)? && target < 1.0) {
        return Err(Error::param(format!("target probability {target} is not attainable")));
    }
    let mut guard = 0;
    while pmax(hi)? < target {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::Numerical("could not bracket the ladder gap".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pmax(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erasure::{apply_plan, build_plan, ErasurePlan, PlanMode};
    use crate::quantum::{haar_unitary, random_probabilities, DensityOperator, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_report_is_zero() {
        let ctx = PhysicalContext::diagonal(&[0.6, 0.4], vec![0.0, 1.0, 1.5], 1.2).unwrap();
        let r = report(&ctx, &apply_plan(&ctx, &ErasurePlan::identity(2, 3, PlanMode::MaxProb)).unwrap());
        for v in [r.ds, r.dq, r.dw, r.de, r.mutual_info, r.rel_entropy_r] {
            assert!(v.abs() < 1e-14, "{r:?}");
        }
        assert!(r.landauer_residual.unwrap().abs() < 1e-14);
    }

    #[test]
    fn cold_qubit_report() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1e6).unwrap();
        let r = report(&ctx, &apply_plan(&ctx, &build_plan(&ctx, PlanMode::PassiveOptimal)).unwrap());
        assert!((r.ds - 2f64.ln()).abs() < 1e-12);
        assert!((r.dq - 0.5).abs() < 1e-12);
        assert!(r.mutual_info.abs() < 1e-12);
        assert!(r.rel_entropy_r.is_infinite());
        assert!(r.landauer_residual.is_none());
    }

    #[test]
    fn landauer_identity_closes_on_random_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let d_o = rng.random_range(2..4);
            let d_r = rng.random_range(2..5);
            let o = random_probabilities(d_o, &mut rng);
            let e: Vec<f64> = (0..d_r).map(|_| rng.random::<f64>() * 3.0).collect();
            let ho: Vec<f64> = (0..d_o).map(|_| rng.random::<f64>()).collect();
            let ctx = PhysicalContext::new(
                crate::quantum::HermitianOperator::from_real_diagonal(&ho).unwrap(),
                DensityOperator::from_diagonal(&o).unwrap(),
                crate::erasure::Reservoir::from_energies(e).unwrap(),
                rng.random_range(0.1..4.0),
            )
            .unwrap();
            let mut images: Vec<usize> = (0..d_o * d_r).collect();
            for k in (1..images.len()).rev() {
                images.swap(k, rng.random_range(0..=k));
            }
            let plan = ErasurePlan::from_images(d_o, d_r, images, PlanMode::TradeoffStep).unwrap();
            let r = report(&ctx, &apply_plan(&ctx, &plan).unwrap());
            assert!(r.landauer_residual.unwrap().abs() < 1e-10);
            assert!((r.de - r.dw - r.dq).abs() < 1e-12);
            assert!(ctx.beta() * r.dq >= r.ds + r.mutual_info - 1e-10);
        }
    }

    #[test]
    fn dense_post_state_matches_labelled() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.3, 0.2], vec![0.0, 0.6, 1.0], 1.4).unwrap();
        let out = apply_plan(&ctx, &build_plan(&ctx, PlanMode::PassiveOptimal)).unwrap();
        let a = report(&ctx, &out);
        let post = PostState::from_dense(&ctx, &out.state.to_dense()).unwrap();
        let b = report_post_state(&ctx, &post);
        assert!((a.dq - b.dq).abs() < 1e-14);
        assert!((a.mutual_info - b.mutual_info).abs() < 1e-12);
        assert!((a.de - b.de).abs() < 1e-14);
    }

    #[test]
    fn random_unitary_satisfies_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ctx = PhysicalContext::diagonal(&[0.7, 0.3], vec![0.0, 1.0, 2.0], 0.8).unwrap();
        for _ in 0..20 {
            let u = haar_unitary(6, &mut rng);
            let rho0 = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                6,
                ctx.joint_populations().into_iter().map(|p| C64::new(p, 0.0)),
            ));
            let rho = &u * rho0 * u.adjoint();
            let r = report_post_state(&ctx, &PostState::from_dense(&ctx, &rho).unwrap());
            assert!(r.landauer_residual.unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn excess_examples() {
        assert_eq!(landauer_excess(0.0, 0.0, 4, 1.0).unwrap(), 0.0);
        assert!(landauer_excess(0.0, 0.0, 1, 1.0).is_err());
    }

    #[test]
    fn qubit_gap_examples() {
        assert!(qubit_landauer_gap(1.0, 1.0).unwrap().abs() < 1e-12);
        assert!((qubit_landauer_gap(0.5, 1.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-9);
        assert!((qubit_landauer_gap(0.75, 1.0).unwrap() - 0.2617).abs() < 1e-3);
        for k in 0..50 {
            let q = 0.5 + 0.5 * k as f64 / 50.0;
            assert!(qubit_landauer_gap(q, 2.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn ladder_gap_solver() {
        let target = 0.9;
        let w = ladder_gap_for_pmax(8, 1.0, &[0.5, 0.5], target).unwrap();
        let e = (0..8).map(|m| w * m as f64).collect();
        let p = max_erasure_probability(&PhysicalContext::diagonal(&[0.5, 0.5], e, 1.0).unwrap());
        assert!((p - target).abs() < 1e-10);
        assert!(ladder_gap_for_pmax(8, 1.0, &[0.5, 0.5], 1.0).is_err());
    }
}
