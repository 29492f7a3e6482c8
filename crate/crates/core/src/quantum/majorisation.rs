use super::operator::eigh;
use super::{CMatrix, DensityOperator, HermitianOperator};
use crate::error::{Error, Result};
use crate::tol;

/// Variant of the majorisation preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorisationMode {
    /// `a ≺ b`: partial sums of `a↓` never exceed those of `b↓`, equal totals.
    Strong,
    /// `a ≺_w b`: partial sums of `a↓` never exceed those of `b↓`.
    WeakBelow,
    /// `a ≺^w b`: partial sums of `a↑` are never below those of `b↑`.
    WeakAbove,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Whether `a` is majorised by `b` in the given mode.
pub fn majorised_by(a: &[f64], b: &[f64], mode: MajorisationMode) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let below = |a: &[f64], b: &[f64]| {
        let (a, b) = (sorted_desc(a), sorted_desc(b));
        let (mut sa, mut sb) = (0.0, 0.0);
        a.iter().zip(&b).all(|(x, y)| {
            sa += x;
            sb += y;
            sa <= sb + tol::DEGENERACY
        })
    };
    Ok(match mode {
        MajorisationMode::WeakBelow => below(a, b),
        MajorisationMode::WeakAbove => {
            let (mut a, mut b) = (a.to_vec(), b.to_vec());
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            let (mut sa, mut sb) = (0.0, 0.0);
            a.iter().zip(&b).all(|(x, y)| {
                sa += x;
                sb += y;
                sa + tol::DEGENERACY >= sb
            })
        }
        MajorisationMode::Strong => {
            let ta: f64 = a.iter().sum();
            let tb: f64 = b.iter().sum();
            (ta - tb).abs() <= tol::TRACE && below(a, b)
        }
    })
}

/// Checks `a↓·b↑ ≤ a·b ≤ a↓·b↓`.
pub fn rearrangement_bounds_check(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let ad = sorted_desc(a);
    let bd = sorted_desc(b);
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    let upper = dot(&ad, &bd);
    let bu: Vec<f64> = bd.iter().rev().copied().collect();
    let lower = dot(&ad, &bu);
    let mid = dot(a, b);
    let slack = tol::DEGENERACY * (1.0 + upper.abs().max(lower.abs()));
    Ok(lower <= mid + slack && mid <= upper + slack)
}

fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// Groups of (near-)degenerate levels in an ascending spectrum.
pub(crate) fn degenerate_groups(energies: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=energies.len() {
        let split = k == energies.len()
            || energies[k] - energies[k - 1] > tol::DEGENERACY * (1.0 + energies[k].abs());
        if split {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Whether `ρ` is passive with respect to `H`: it commutes with `H` and its
/// populations do not increase with energy. Orderings inside a degenerate
/// level are irrelevant.
pub fn is_passive(rho: &DensityOperator, h: &HermitianOperator) -> Result<bool> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    if commutator_norm(rho.matrix(), h.matrix()) > tol::COMMUTE {
        return Ok(false);
    }
    let (e, v) = h.eigh();
    let r = v.adjoint() * rho.matrix() * &v;
    let mut prev_min = f64::INFINITY;
    for g in degenerate_groups(&e) {
        let n = g.len();
        let block = CMatrix::from_fn(n, n, |i, j| r[(g.start + i, g.start + j)]);
        let (pops, _) = eigh(&block);
        let (lo, hi) = (pops[0], pops[n - 1]);
        if hi > prev_min + tol::DEGENERACY {
            return Ok(false);
        }
        prev_min = lo;
    }
    Ok(true)
}

/// Populations of the passive rearrangement: eigenvalues of `ρ` sorted
/// non-increasing, to be paired with energies sorted non-decreasing.
pub fn passive_populations(rho: &DensityOperator) -> Vec<f64> {
    let mut p = rho.eigenvalues();
    p.reverse();
    p
}

/// Ergotropy `tr[Hρ] - tr[Hρ^passive]`.
pub fn max_extractable_work(rho: &DensityOperator, h: &HermitianOperator) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    let (e, _) = h.eigh();
    let p = passive_populations(rho);
    let passive: f64 = e.iter().zip(&p).map(|(x, y)| x * y).sum();
    Ok(h.expectation(rho.matrix()) - passive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{gibbs_state, haar_unitary, random_probabilities};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn majorisation_examples() {
        let a = [0.2, 0.5, 0.3];
        assert!(majorised_by(&a, &a, MajorisationMode::Strong).unwrap());
        assert!(majorised_by(&[0.5, 0.5], &[1.0, 0.0], MajorisationMode::Strong).unwrap());
        assert!(!majorised_by(&[1.0, 0.0], &[0.5, 0.5], MajorisationMode::Strong).unwrap());
        assert!(majorised_by(&[0.5, 0.3, 0.2], &[0.6, 0.2, 0.2], MajorisationMode::Strong).unwrap());
        assert!(majorised_by(&[0.1, 0.1], &[0.5, 0.5], MajorisationMode::WeakBelow).unwrap());
        assert!(!majorised_by(&[0.1, 0.1], &[0.5, 0.5], MajorisationMode::Strong).unwrap());
        assert!(majorised_by(&[0.5, 0.5], &[0.1, 0.1], MajorisationMode::WeakAbove).unwrap());
        assert!(majorised_by(&[1.0], &[1.0, 0.0], MajorisationMode::Strong).is_err());
    }

    #[test]
    fn passivity_examples() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        assert!(is_passive(&gibbs_state(&h, 0.8).unwrap(), &h).unwrap());
        let inv = DensityOperator::from_diagonal(&[0.3, 0.7]).unwrap();
        assert!(!is_passive(&inv, &h).unwrap());
        let flat = HermitianOperator::zeros(2).unwrap();
        assert!(is_passive(&inv, &flat).unwrap());
    }

    #[test]
    fn ergotropy_examples() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let g = gibbs_state(&h, 1.3).unwrap();
        assert!(max_extractable_work(&g, &h).unwrap().abs() < 1e-12);
        let e = DensityOperator::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!((max_extractable_work(&e, &h).unwrap() - 1.0).abs() < 1e-12);
        let h3 = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let r = DensityOperator::from_diagonal(&[0.2, 0.3, 0.5]).unwrap();
        assert!((max_extractable_work(&r, &h3).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_examples() {
        assert!(rearrangement_bounds_check(&[1.0, 0.0], &[1.0, 0.0]).unwrap());
        assert!(rearrangement_bounds_check(&[2.0, 1.0], &[3.0, 5.0]).unwrap());
    }

    #[test]
    fn gibbs_states_are_passive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..7 {
            let u = haar_unitary(d, &mut rng);
            let e = random_probabilities(d, &mut rng);
            let h = HermitianOperator::from_real_diagonal(&e).unwrap();
            let m = &u * h.matrix() * u.adjoint();
            let h = HermitianOperator::from_nearly_hermitian(m, 1e-10).unwrap();
            for beta in [0.1, 1.0, 10.0] {
                let g = gibbs_state(&h, beta).unwrap();
                assert!(is_passive(&g, &h).unwrap());
            }
        }
    }

    #[test]
    fn ky_fan_diagonal_majorised_by_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for d in 2..8 {
            let e: Vec<f64> = random_probabilities(d, &mut rng)
                .iter()
                .map(|x| 3.0 * x - 0.5)
                .collect();
            let h = HermitianOperator::from_real_diagonal(&e).unwrap();
            for _ in 0..10 {
                let v = haar_unitary(d, &mut rng);
                let m = v.adjoint() * h.matrix() * &v;
                let diag: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
                assert!(majorised_by(&diag, &e, MajorisationMode::Strong).unwrap());
            }
        }
    }

    fn prob_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1e-3f64..1.0, n).prop_map(|v| {
            let s: f64 = v.iter().sum::<f64>();
            v.into_iter().map(|x| x / s).collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rearrangement_holds(a in prop::collection::vec(-5.0f64..5.0, 8),
                               b in prop::collection::vec(-5.0f64..5.0, 8)) {
            prop_assert!(rearrangement_bounds_check(&a, &b).unwrap());
        }
    }

    proptest! {
        #[test]
        fn strong_implies_weak(a in prob_vec(5), b in prob_vec(5)) {
            if majorised_by(&a, &b, MajorisationMode::Strong).unwrap() {
                prop_assert!(majorised_by(&a, &b, MajorisationMode::WeakBelow).unwrap());
                prop_assert!(majorised_by(&a, &b, MajorisationMode::WeakAbove).unwrap());
            }
        }

        #[test]
        fn majorised_vectors_order_inner_products(
            a2 in prob_vec(4), b2 in prob_vec(4),
            t in prop::collection::vec(0.0f64..1.0, 2)
        ) {
            // T-transforms of a2/b2 towards uniform give a1 ≺ a2, b1 ≺ b2.
            let mix = |v: &[f64], s: f64| -> Vec<f64> {
                let u = 1.0 / v.len() as f64;
                v.iter().map(|x| (1.0 - s) * x + s * u).collect()
            };
            let a1 = mix(&a2, t[0]);
            let b1 = mix(&b2, t[1]);
            prop_assert!(majorised_by(&a1, &a2, MajorisationMode::Strong).unwrap());
            prop_assert!(majorised_by(&b1, &b2, MajorisationMode::Strong).unwrap());
            let dd = |x: &[f64], y: &[f64]| {
                let (x, y) = (sorted_desc(x), sorted_desc(y));
                x.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>()
            };
            prop_assert!(dd(&a1, &b1) <= dd(&a2, &b2) + 1e-12);
        }
    }
}
