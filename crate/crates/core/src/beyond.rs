//! Erasure beyond the standard setting: with a correlated auxiliary system,
//! and of a subsystem of a globally thermal system.

use crate::error::{Error, Result};
use crate::quantum::{
    eigh, gibbs_populations, partial_trace, shannon_entropy, CMatrix, DensityOperator,
    HermitianOperator, Subsystem, C64,
};
use crate::tol;

/// Largest joint dimension for the thermal-subsystem optimiser.
pub const MAX_THERMAL_DIM: usize = 64;
/// Largest joint dimension for exhaustive assignment enumeration.
pub const MAX_ENUMERATED_DIM: usize = 8;

/// Orthonormal basis whose first vector is `target` (normalised), completed
/// by Gram–Schmidt over the computational basis.
pub fn basis_with_first(target: &[C64]) -> Result<CMatrix> {
    let d = target.len();
    let norm: f64 = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::param("target vector must be nonzero"));
    }
    let mut cols: Vec<Vec<C64>> = vec![target.iter().map(|z| z / norm).collect()];
    for e in 0..d {
        if cols.len() == d {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[e] = C64::new(1.0, 0.0);
        for c in &cols {
            let ov: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= ov * ci;
            }
        }
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    Ok(CMatrix::from_fn(d, d, |r, c| cols[c][r]))
}

/// Object `O` correlated with an auxiliary `A` (trivial Hamiltonian).
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryScenario {
    pub rho_oa: DensityOperator,
    pub d_o: usize,
    pub d_a: usize,
    pub target: Vec<C64>,
}

impl AuxiliaryScenario {
    pub fn new(rho_oa: DensityOperator, d_o: usize, d_a: usize, target: Vec<C64>) -> Result<Self> {
        if rho_oa.dim() != d_o * d_a {
            return Err(Error::DimensionMismatch {
                expected: d_o * d_a,
                found: rho_oa.dim(),
            });
        }
        if target.len() != d_o {
            return Err(Error::DimensionMismatch {
                expected: d_o,
                found: target.len(),
            });
        }
        basis_with_first(&target)?;
        Ok(Self {
            rho_oa,
            d_o,
            d_a,
            target,
        })
    }
}

/// A unitary on `O ⊗ A` that purifies `O` into the target.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryPlan {
    pub unitary: CMatrix,
    pub rank: usize,
    pub final_state: DensityOperator,
}

impl AuxiliaryPlan {
    pub fn object_marginal(&self, d_o: usize, d_a: usize) -> Result<DensityOperator> {
        partial_trace(&self.final_state, (d_o, d_a), Subsystem::A)
    }

    pub fn auxiliary_marginal(&self, d_o: usize, d_a: usize) -> Result<DensityOperator> {
        partial_trace(&self.final_state, (d_o, d_a), Subsystem::B)
    }

    /// No reservoir is involved.
    pub fn heat(&self) -> f64 {
        0.0
    }
}

fn numeric_rank(vals: &[f64]) -> usize {
    vals.iter().filter(|&&v| v > tol::RANK).count()
}

/// Full erasure of `O` using `A` alone, possible iff `rank ρ_OA ≤ d_A`.
///
/// Eigenvectors of `ρ_OA` with nonzero weight go to `|φ_1⟩ ⊗ |χ_n⟩`, where the
/// `|χ_n⟩` are eigenvectors of `ρ_A` in decreasing order; when the
/// correlations are classical this leaves `A` untouched.
pub fn auxiliary_full_erasure(s: &AuxiliaryScenario) -> Result<Option<AuxiliaryPlan>> {
    let (d_o, d_a) = (s.d_o, s.d_a);
    let n = d_o * d_a;
    let (vals, vecs) = eigh(s.rho_oa.matrix());
    let rank = numeric_rank(&vals);
    if rank > d_a {
        return Ok(None);
    }
    let rho_a = partial_trace(&s.rho_oa, (d_o, d_a), Subsystem::B)?;
    let (_, chi) = eigh(rho_a.matrix());
    let chi = CMatrix::from_fn(d_a, d_a, |r, c| chi[(r, d_a - 1 - c)]);
    let phi = basis_with_first(&s.target)?;
    // Targets, object-major: |φ_l⟩ ⊗ |χ_n⟩.
    let targets = phi.kronecker(&chi);
    let mut u = CMatrix::zeros(n, n);
    for k in 0..n {
        // k-th largest eigenvector goes to the k-th target.
        let v = vecs.column(n - 1 - k);
        let t = targets.column(k);
        u += t * v.adjoint();
    }
    let out = &u * s.rho_oa.matrix() * u.adjoint();
    let out = (&out + out.adjoint()) * C64::new(0.5, 0.0);
    Ok(Some(AuxiliaryPlan {
        unitary: u,
        rank,
        final_state: DensityOperator::new(out)?,
    }))
}

/// Whether the erasure plan leaves the auxiliary state unchanged.
pub fn classical_catalyst_check(s: &AuxiliaryScenario) -> Result<bool> {
    let Some(plan) = auxiliary_full_erasure(s)? else {
        return Ok(false);
    };
    let before = partial_trace(&s.rho_oa, (s.d_o, s.d_a), Subsystem::B)?;
    let after = plan.auxiliary_marginal(s.d_o, s.d_a)?;
    Ok((before.matrix() - after.matrix()).norm() < 1e-9)
}

/// The four two-qubit example states with weight `λ`: uncorrelated,
/// classically correlated, discordant and pure entangled.
pub fn example_auxiliary_states(lambda: f64) -> Result<[(&'static str, DensityOperator); 4]> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let ket = |v: [C64; 2]| CMatrix::from_column_slice(2, 1, &v);
    let e1 = ket([one, z]);
    let e2 = ket([z, one]);
    let s = 0.5f64.sqrt();
    let plus = ket([C64::new(s, 0.0), C64::new(s, 0.0)]);
    let proj = |v: &CMatrix| v * v.adjoint();
    let l = C64::new(lambda, 0.0);
    let lc = C64::new(1.0 - lambda, 0.0);
    let uc = (proj(&e1) * l + proj(&e2) * lc).kronecker(&proj(&e1));
    let cc = proj(&e1).kronecker(&proj(&e1)) * l + proj(&e2).kronecker(&proj(&e2)) * lc;
    let qd = proj(&e1).kronecker(&proj(&e1)) * l + proj(&e2).kronecker(&proj(&plus)) * lc;
    let psi = e1.kronecker(&e1) * C64::new(lambda.sqrt(), 0.0)
        + e2.kronecker(&e2) * C64::new((1.0 - lambda).sqrt(), 0.0);
    let pe = proj(&psi);
    Ok([
        ("uncorrelated", DensityOperator::new(uc)?),
        ("classically_correlated", DensityOperator::new(cc)?),
        ("quantum_discord", DensityOperator::new(qd)?),
        ("pure_entangled", DensityOperator::new(pe)?),
    ])
}

/// Object `O` as part of a system `O ⊗ K` in the global thermal state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSubsystemScenario {
    pub h: HermitianOperator,
    pub d_o: usize,
    pub d_k: usize,
    pub beta: f64,
    pub target: Vec<C64>,
}

impl ThermalSubsystemScenario {
    pub fn new(h: HermitianOperator, d_o: usize, d_k: usize, beta: f64, target: Vec<C64>) -> Result<Self> {
        if h.dim() != d_o * d_k {
            return Err(Error::DimensionMismatch {
                expected: d_o * d_k,
                found: h.dim(),
            });
        }
        if target.len() != d_o {
            return Err(Error::DimensionMismatch {
                expected: d_o,
                found: target.len(),
            });
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::param(format!("beta must be finite and positive, got {beta}")));
        }
        basis_with_first(&target)?;
        Ok(Self {
            h,
            d_o,
            d_k,
            beta,
            target,
        })
    }

    fn spectral(&self) -> (Vec<f64>, CMatrix, Vec<f64>) {
        let (e, x) = self.h.eigh();
        let p = gibbs_populations(&e, self.beta);
        (e, x, p)
    }

    /// Product target basis `|ψ_a⟩ ⊗ |j⟩`, with `|ψ_0⟩ = |Ψ⟩`.
    fn targets(&self) -> Result<CMatrix> {
        let b = basis_with_first(&self.target)?;
        Ok(b.kronecker(&CMatrix::identity(self.d_k, self.d_k)))
    }
}

/// A maximal-probability assignment of `H` eigenvectors to target vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalAssignment {
    /// `images[k]`: target index for the `k`-th eigenvector (ascending energy).
    pub images: Vec<usize>,
    pub heat: f64,
    /// `q^U_n = ⟨ξ_n|ρ'|ξ_n⟩` in ascending energy order.
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSubsystemResult {
    pub unitary: CMatrix,
    pub assignment: ThermalAssignment,
    pub p_max: f64,
    pub dq: f64,
    /// `(1/β) S(ρ'‖ρ(β))`, which equals `dq`.
    pub dq_relative_entropy: f64,
    pub ds: f64,
}

fn evaluate_assignment(
    images: &[usize],
    x: &CMatrix,
    t: &CMatrix,
    e: &[f64],
    p: &[f64],
) -> ThermalAssignment {
    let n = images.len();
    let u = assignment_unitary(images, x, t);
    // q_n = Σ_m p_m |⟨ξ_n|U|ξ_m⟩|²
    let ux = x.adjoint() * &u * x;
    let q: Vec<f64> = (0..n)
        .map(|a| (0..n).map(|m| p[m] * ux[(a, m)].norm_sqr()).sum())
        .collect();
    let heat = q.iter().zip(e).map(|(a, b)| a * b).sum::<f64>()
        - p.iter().zip(e).map(|(a, b)| a * b).sum::<f64>();
    ThermalAssignment {
        images: images.to_vec(),
        heat,
        q,
    }
}

fn assignment_unitary(images: &[usize], x: &CMatrix, t: &CMatrix) -> CMatrix {
    let n = images.len();
    let mut u = CMatrix::zeros(n, n);
    for (k, &i) in images.iter().enumerate() {
        u += t.column(i) * x.column(k).adjoint();
    }
    u
}

/// Maximises the probability of preparing `|Ψ⟩` and then minimises the
/// heat: the `d_K` most likely eigenvectors go into the `|Ψ⟩` block, the rest
/// into its complement, each block paired by the rearrangement rule (most
/// likely eigenvector to the target of lowest mean energy).
///
/// A `q` majorising every alternative need not exist when the eigenvectors of
/// `H` straddle the block, so it is only used to break ties.
pub fn thermal_subsystem_optimize(s: &ThermalSubsystemScenario) -> Result<ThermalSubsystemResult> {
    let n = s.d_o * s.d_k;
    if n > MAX_THERMAL_DIM {
        return Err(Error::GuardExceeded {
            what: "thermal subsystem dimension",
            limit: MAX_THERMAL_DIM,
            actual: n,
        });
    }
    let (e, x, p) = s.spectral();
    let t = s.targets()?;
    let h = s.h.matrix();
    let cost: Vec<f64> = (0..n)
        .map(|i| {
            let v = t.column(i);
            (v.adjoint() * h * v)[(0, 0)].re
        })
        .collect();
    let by_cost = |range: std::ops::Range<usize>| {
        let mut idx: Vec<usize> = range.collect();
        idx.sort_by(|&a, &b| cost[a].total_cmp(&cost[b]).then(a.cmp(&b)));
        idx
    };
    let mut images = by_cost(0..s.d_k);
    images.extend(by_cost(s.d_k..n));
    let mut assignment = evaluate_assignment(&images, &x, &t, &e, &p);
    if n <= MAX_ENUMERATED_DIM {
        // The greedy pairing already minimises the heat (it is linear in the
        // assignment); among equal-heat alternatives prefer the
        // lexicographically largest sorted q.
        for cand in block_permutations(s.d_k, n) {
            let a = evaluate_assignment(&cand, &x, &t, &e, &p);
            let tie = (a.heat - assignment.heat).abs() <= 1e-12 * (1.0 + assignment.heat.abs());
            if tie && lex_greater(&sorted_desc(&a.q), &sorted_desc(&assignment.q)) {
                assignment = a;
            }
        }
    }
    let u = assignment_unitary(&assignment.images, &x, &t);

    let rho = spectral_state(&x, &p);
    let rho_out = &u * &rho * u.adjoint();
    let rho_out = (&rho_out + rho_out.adjoint()) * C64::new(0.5, 0.0);
    let rho_in = DensityOperator::new(rho)?;
    let rho_out = DensityOperator::new(rho_out)?;
    let so = shannon_entropy(&partial_trace(&rho_in, (s.d_o, s.d_k), Subsystem::A)?.eigenvalues());
    let so1 = shannon_entropy(&partial_trace(&rho_out, (s.d_o, s.d_k), Subsystem::A)?.eigenvalues());

    // S(ρ'‖ρ) = q·ln(1/p) - S(ρ), with ln p taken from the energies.
    let log_z = {
        let e0 = e[0];
        let z: f64 = e.iter().map(|x| (-s.beta * (x - e0)).exp()).sum();
        z.ln() - s.beta * e0
    };
    let cross: f64 = assignment
        .q
        .iter()
        .zip(&e)
        .map(|(q, en)| q * (s.beta * en + log_z))
        .sum();
    let rel = cross - shannon_entropy(&p);

    Ok(ThermalSubsystemResult {
        unitary: u,
        p_max: p[..s.d_k].iter().sum(),
        dq: assignment.heat,
        dq_relative_entropy: rel / s.beta,
        ds: so - so1,
        assignment,
    })
}

fn spectral_state(x: &CMatrix, p: &[f64]) -> CMatrix {
    let n = p.len();
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        p.iter().map(|&v| C64::new(v, 0.0)),
    ));
    let m = x * d * x.adjoint();
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn lex_greater(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-13 {
            return x > y;
        }
    }
    false
}

fn block_permutations(d_k: usize, n: usize) -> Vec<Vec<usize>> {
    let block: Vec<usize> = (0..d_k).collect();
    let rest: Vec<usize> = (d_k..n).collect();
    let tails = permutations(&rest);
    permutations(&block)
        .into_iter()
        .flat_map(|a| tails.iter().map(move |b| a.iter().chain(b).copied().collect()))
        .collect()
}

/// Every maximal-probability assignment (permutations inside the `|Ψ⟩`
/// block and inside its complement).
pub fn enumerate_assignments(s: &ThermalSubsystemScenario) -> Result<Vec<ThermalAssignment>> {
    let n = s.d_o * s.d_k;
    if n > MAX_ENUMERATED_DIM {
        return Err(Error::GuardExceeded {
            what: "assignment enumeration dimension",
            limit: MAX_ENUMERATED_DIM,
            actual: n,
        });
    }
    let (e, x, p) = s.spectral();
    let t = s.targets()?;
    Ok(block_permutations(s.d_k, n)
        .iter()
        .map(|images| evaluate_assignment(images, &x, &t, &e, &p))
        .collect())
}

/// The two-qubit example Hamiltonian with eigenvalues `(0, 1, 2, 3)` and
/// eigenvectors mixing `|11⟩, |22⟩` (weight `γ₊`) and `|12⟩, |21⟩` (`γ₋`).
pub fn correlated_example_hamiltonian(gamma_plus: f64, gamma_minus: f64) -> Result<HermitianOperator> {
    for g in [gamma_plus, gamma_minus] {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::param(format!("gamma must lie in [0, 1], got {g}")));
        }
    }
    let x = correlated_example_eigenvectors(gamma_plus, gamma_minus);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        (0..4).map(|k| C64::new(k as f64, 0.0)).collect(),
    ));
    let h = &x * d * x.adjoint();
    HermitianOperator::from_nearly_hermitian(h, 1e-12)
}

/// Columns `ξ_1 … ξ_4` in the basis `|11⟩, |12⟩, |21⟩, |22⟩`.
pub fn correlated_example_eigenvectors(gamma_plus: f64, gamma_minus: f64) -> CMatrix {
    let (a, b) = (gamma_plus.sqrt(), (1.0 - gamma_plus).sqrt());
    let (c, d) = (gamma_minus.sqrt(), (1.0 - gamma_minus).sqrt());
    let cols = [
        [a, 0.0, 0.0, b],
        [b, 0.0, 0.0, -a],
        [0.0, c, d, 0.0],
        [0.0, d, -c, 0.0],
    ];
    CMatrix::from_fn(4, 4, |r, k| C64::new(cols[k][r], 0.0))
}

/// Whether every eigenvector of `H` touching the `|Ψ⟩ ⊗ |φ_j⟩` block lies
/// entirely inside it.
pub fn hamiltonian_alignment_check(s: &ThermalSubsystemScenario) -> Result<bool> {
    let (_, x) = s.h.eigh();
    let t = s.targets()?;
    let n = s.d_o * s.d_k;
    for k in 0..n {
        let v = x.column(k);
        let w: f64 = (0..s.d_k).map(|j| (t.column(j).adjoint() * v)[(0, 0)].norm_sqr()).sum();
        if w > 1e-10 && w < 1.0 - 1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}
