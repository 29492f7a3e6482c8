//! Brute-force checks of the optimality claims on small instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::erasure::{
    apply_plan, build_plan, max_erasure_probability, ErasurePlan, PhysicalContext, PlanMode,
};
use crate::error::{Error, Result};
use crate::quantum::{haar_unitary, CMatrix, C64};
use crate::thermo::{report, report_post_state, PostState};

/// Largest joint dimension enumerated exhaustively.
pub const MAX_ENUMERATION: usize = 8;
/// Largest joint dimension for Haar sampling.
pub const MAX_SAMPLING: usize = 6;
/// Probabilities within this of the optimum count as optimal.
const PROB_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MaxProb,
    MinHeat,
    MaxProbThenMinHeat,
}

/// Optimum found by enumeration, with one permutation achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub p_erase: f64,
    pub heat: f64,
    pub witness: ErasurePlan,
}

struct Evaluator {
    d_r: usize,
    p: Vec<f64>,
    lam: Vec<f64>,
    r: Vec<f64>,
}

impl Evaluator {
    fn new(ctx: &PhysicalContext) -> Self {
        Self {
            d_r: ctx.d_r(),
            p: ctx.joint_populations(),
            lam: ctx.reservoir_energies().to_vec(),
            r: ctx.reservoir_populations().to_vec(),
        }
    }

    /// `(p(φ_1), ΔQ)` for `images`, summed in the same order as the core.
    fn eval(&self, images: &[usize]) -> (f64, f64) {
        let n = images.len();
        let mut out = vec![0.0; n];
        for (k, &i) in images.iter().enumerate() {
            out[i] = self.p[k];
        }
        let p1: f64 = out[..self.d_r].iter().sum();
        let mut res = vec![0.0; self.d_r];
        for (k, v) in out.iter().enumerate() {
            res[k % self.d_r] += v;
        }
        let heat = res
            .iter()
            .zip(&self.r)
            .zip(&self.lam)
            .map(|((a, b), e)| (a - b) * e)
            .sum();
        (p1, heat)
    }
}

fn guard(ctx: &PhysicalContext, limit: usize) -> Result<usize> {
    let n = ctx.d_o() * ctx.d_r();
    if n > limit {
        return Err(Error::GuardExceeded {
            what: "oracle joint dimension",
            limit,
            actual: n,
        });
    }
    Ok(n)
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Best `(key, permutation)` within one block of the search.
type Candidate = ((f64, f64), Vec<usize>);

/// Visits every permutation, in parallel blocks keyed by the first image,
/// and reduces with `better` in a fixed order (ties keep the earliest).
fn search<F>(n: usize, eval: &Evaluator, score: F) -> Option<(f64, f64, Vec<usize>)>
where
    F: Fn(f64, f64) -> Option<(f64, f64)> + Sync,
{
    let better = |a: &(f64, f64), b: &(f64, f64)| b.0 < a.0 || (b.0 == a.0 && b.1 < a.1);
    let blocks: Vec<Option<Candidate>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<usize> = (0..n).filter(|&x| x != first).collect();
            let mut best: Option<((f64, f64), Vec<usize>)> = None;
            loop {
                let mut images = Vec::with_capacity(n);
                images.push(first);
                images.extend_from_slice(&rest);
                let (p, q) = eval.eval(&images);
                if let Some(key) = score(p, q) {
                    if best.as_ref().is_none_or(|(k, _)| better(k, &key)) {
                        best = Some((key, images));
                    }
                }
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            best
        })
        .collect();
    let mut best: Option<((f64, f64), Vec<usize>)> = None;
    for b in blocks.into_iter().flatten() {
        if best.as_ref().is_none_or(|(k, _)| better(k, &b.0)) {
            best = Some(b);
        }
    }
    best.map(|(_, images)| {
        let (p, q) = eval.eval(&images);
        (p, q, images)
    })
}

fn witness(ctx: &PhysicalContext, images: Vec<usize>) -> ErasurePlan {
    ErasurePlan::from_images(ctx.d_o(), ctx.d_r(), images, PlanMode::TradeoffStep)
        .expect("enumerated permutation")
}

/// Exhaustive optimum over all permutations of the labelled populations.
pub fn brute_force_best(ctx: &PhysicalContext, objective: Objective) -> Result<OracleResult> {
    let n = guard(ctx, MAX_ENUMERATION)?;
    let ev = Evaluator::new(ctx);
    let found = match objective {
        Objective::MaxProb => search(n, &ev, |p, _| Some((-p, 0.0))),
        Objective::MinHeat => search(n, &ev, |_, q| Some((q, 0.0))),
        Objective::MaxProbThenMinHeat => {
            let (pm, _, _) = search(n, &ev, |p, _| Some((-p, 0.0))).expect("non-empty");
            search(n, &ev, |p, q| (p >= pm - PROB_TIE).then_some((q, -p)))
        }
    };
    let (p_erase, heat, images) = found.expect("non-empty search");
    Ok(OracleResult {
        p_erase,
        heat,
        witness: witness(ctx, images),
    })
}

/// Minimal heat over all permutations with error at most `delta`.
pub fn tradeoff_floor(ctx: &PhysicalContext, delta: f64) -> Result<f64> {
    let n = guard(ctx, MAX_ENUMERATION)?;
    let ev = Evaluator::new(ctx);
    let p_min = max_erasure_probability(ctx) - delta - PROB_TIE;
    let (_, q, _) = search(n, &ev, |p, q| (p >= p_min).then_some((q, -p)))
        .ok_or_else(|| Error::param(format!("no permutation reaches error {delta}")))?;
    Ok(q)
}

/// Haar-random unitaries never beat the permutation optimum: no sample
/// exceeds `p_max`, and none at `p_max` dissipates less than the optimal plan.
pub fn random_unitary_bound_check(ctx: &PhysicalContext, samples: usize, seed: u64) -> Result<bool> {
    let n = guard(ctx, MAX_SAMPLING)?;
    let p_max = max_erasure_probability(ctx);
    let optimal_heat = report(ctx, &apply_plan(ctx, &build_plan(ctx, PlanMode::MaxProbMinHeat))?).dq;
    let rho0 = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        ctx.joint_populations().into_iter().map(|p| C64::new(p, 0.0)),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let u = haar_unitary(n, &mut rng);
        let rho = &u * &rho0 * u.adjoint();
        let r = report_post_state(ctx, &PostState::from_dense(ctx, &rho)?);
        if r.p_erase > p_max + 1e-9 {
            return Ok(false);
        }
        if (r.p_erase - p_max).abs() < 1e-6 && r.dq < optimal_heat - 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erasure::tradeoff_curve;

    fn qubit() -> PhysicalContext {
        PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1.0).unwrap()
    }

    #[test]
    fn permutations_enumerated() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn qubit_oracle() {
        let ctx = qubit();
        let r = brute_force_best(&ctx, Objective::MaxProb).unwrap();
        assert!((r.p_erase - 0.731_058_578_6).abs() < 1e-9);
        assert!((r.p_erase - max_erasure_probability(&ctx)).abs() < 1e-15);
        let r = brute_force_best(&ctx, Objective::MaxProbThenMinHeat).unwrap();
        let plan = report(&ctx, &apply_plan(&ctx, &build_plan(&ctx, PlanMode::MaxProbMinHeat)).unwrap());
        assert!((r.heat - plan.dq).abs() < 1e-12);
    }

    #[test]
    fn min_heat_witness_follows_block_rule() {
        let ctx = PhysicalContext::diagonal(&[0.7, 0.3], vec![0.0, 0.5, 1.2], 0.9).unwrap();
        let r = brute_force_best(&ctx, Objective::MinHeat).unwrap();
        let plan = report(&ctx, &apply_plan(&ctx, &build_plan(&ctx, PlanMode::MinHeat)).unwrap());
        assert!((r.heat - plan.dq).abs() < 1e-12);
        // Each reservoir level receives the next d_O largest entries.
        let out = apply_plan(&ctx, &r.witness).unwrap();
        let mut levels = out.reservoir_diag.clone();
        let spec = crate::erasure::joint_ordered_spectrum(&ctx);
        for (m, lv) in levels.iter_mut().enumerate() {
            let want: f64 = spec.values[2 * m..2 * m + 2].iter().sum();
            assert!((*lv - want).abs() < 1e-12);
        }
    }

    #[test]
    fn floor_endpoints() {
        let ctx = qubit();
        let c = tradeoff_curve(&ctx);
        let top = c.points()[0].delta;
        assert!(tradeoff_floor(&ctx, top).unwrap().abs() < 1e-15);
        let full = brute_force_best(&ctx, Objective::MaxProbThenMinHeat).unwrap();
        assert_eq!(tradeoff_floor(&ctx, 0.0).unwrap(), full.heat);
        for pt in c.points() {
            assert!((tradeoff_floor(&ctx, pt.delta).unwrap() - pt.heat).abs() < 1e-12);
        }
    }

    #[test]
    fn random_unitaries_do_not_win() {
        let ctx = qubit();
        assert!(random_unitary_bound_check(&ctx, 1000, 1).unwrap());
        assert!(random_unitary_bound_check(&ctx, 0, 1).unwrap());
        let flat = PhysicalContext::diagonal(&[0.5, 0.5], vec![1.0, 1.0], 1.0).unwrap();
        let best = brute_force_best(&flat, Objective::MaxProbThenMinHeat).unwrap();
        assert_eq!(best.heat, 0.0);
        assert!(random_unitary_bound_check(&flat, 200, 2).unwrap());
    }

    #[test]
    fn guards() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0, 2.0, 3.0, 4.0], 1.0).unwrap();
        assert!(matches!(
            brute_force_best(&ctx, Objective::MaxProb),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(random_unitary_bound_check(&ctx, 1, 0).is_err());
    }
}
