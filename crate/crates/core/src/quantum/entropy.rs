use super::operator::{eigh, partial_trace_matrix, Subsystem};
use super::DensityOperator;
use crate::error::{Error, Result};
use crate::tol;

/// `-Σ p ln p` with `0 ln 0 = 0`; entries below the log clamp count as zero.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    let s: f64 = p
        .iter()
        .filter(|&&x| x > tol::LOG_CLAMP)
        .map(|&x| -x * x.ln())
        .sum();
    s.max(0.0)
}

/// Binary entropy `h(q) = -q ln q - (1-q) ln(1-q)`.
pub fn binary_entropy(q: f64) -> f64 {
    shannon_entropy(&[q, 1.0 - q])
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

pub fn min_entropy(rho: &DensityOperator) -> f64 {
    let vals = rho.eigenvalues();
    let top = vals[vals.len() - 1];
    (-top.ln()).max(0.0)
}

/// `S(ρ‖σ) = tr[ρ(ln ρ - ln σ)]`, or `+∞` when the support of `ρ` is not
/// contained in that of `σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: rho.dim(),
        });
    }
    let (q, b) = eigh(sigma.matrix());
    // ⟨b_j|ρ|b_j⟩
    let rb = b.adjoint() * rho.matrix() * &b;
    let mut cross = 0.0;
    for (j, &qj) in q.iter().enumerate() {
        let w = rb[(j, j)].re;
        if qj < tol::SUPPORT {
            if w > tol::SUPPORT_WEIGHT {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += w * qj.ln();
    }
    let s = -von_neumann_entropy(rho) - cross;
    Ok(s.max(0.0))
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) - S(ρ)`.
pub fn mutual_information(rho: &DensityOperator, dims: (usize, usize)) -> Result<f64> {
    let expected = dims.0 * dims.1;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    let a = partial_trace_matrix(rho.matrix(), dims, Subsystem::A);
    let b = partial_trace_matrix(rho.matrix(), dims, Subsystem::B);
    let sa = shannon_entropy(&eigh(&a).0);
    let sb = shannon_entropy(&eigh(&b).0);
    Ok((sa + sb - von_neumann_entropy(rho)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_density, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn entropy_examples() {
        let pure = DensityOperator::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        let mixed = DensityOperator::maximally_mixed(5).unwrap();
        assert!((von_neumann_entropy(&mixed) - 5f64.ln()).abs() < 1e-12);
        let g = DensityOperator::from_diagonal(&[0.73106, 0.26894]).unwrap();
        assert!((von_neumann_entropy(&g) - 0.58220).abs() < 1e-4);
    }

    #[test]
    fn min_entropy_examples() {
        let pure = DensityOperator::from_diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(min_entropy(&pure), 0.0);
        let mixed = DensityOperator::maximally_mixed(4).unwrap();
        assert!((min_entropy(&mixed) - 4f64.ln()).abs() < 1e-12);
        let r = DensityOperator::from_diagonal(&[0.7, 0.3]).unwrap();
        assert!((min_entropy(&r) - 0.356_674_943_9).abs() < 1e-9);
    }

    #[test]
    fn relative_entropy_examples() {
        let g = DensityOperator::from_diagonal(&[0.731_058_578_6, 0.268_941_421_4]).unwrap();
        assert!(relative_entropy(&g, &g).unwrap() < 1e-12);
        let ground = DensityOperator::from_diagonal(&[1.0, 0.0]).unwrap();
        let d = relative_entropy(&ground, &g).unwrap();
        assert!((d - 0.313_261_687_5).abs() < 1e-8);
        let excited = DensityOperator::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!(relative_entropy(&ground, &excited).unwrap().is_infinite());
    }

    #[test]
    fn mutual_information_examples() {
        let a = DensityOperator::from_diagonal(&[0.4, 0.6]).unwrap();
        let b = DensityOperator::from_diagonal(&[0.1, 0.9]).unwrap();
        assert!(mutual_information(&a.tensor(&b), (2, 2)).unwrap() < 1e-10);

        let s = 0.5f64.sqrt();
        let z = C64::new(0.0, 0.0);
        let bell = DensityOperator::pure(&[C64::new(s, 0.0), z, z, C64::new(s, 0.0)]).unwrap();
        let i = mutual_information(&bell, (2, 2)).unwrap();
        assert!((i - 2.0 * 2f64.ln()).abs() < 1e-10);

        let cc = DensityOperator::from_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&cc, (2, 2)).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn klein_inequality_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..6 {
            for _ in 0..20 {
                let r = random_density(d, d, &mut rng);
                let s = random_density(d, d, &mut rng);
                let v = relative_entropy(&r, &s).unwrap();
                assert!(v >= 0.0);
                let dist = (r.matrix() - s.matrix()).norm();
                assert!(v > 0.0 || dist < 1e-8);
                assert!(relative_entropy(&r, &r).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn mutual_information_nonnegative_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let r = random_density(6, 3, &mut rng);
            assert!(mutual_information(&r, (2, 3)).unwrap() >= -1e-10);
            let tr = partial_trace_matrix(r.matrix(), (2, 3), Subsystem::A).trace();
            assert!((tr.re - 1.0).abs() < 1e-12);
        }
    }
}
