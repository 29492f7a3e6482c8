use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{CMatrix, DensityOperator, C64};

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-random unitary via QR of a complex Ginibre matrix, with the phases
/// of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = gaussian_matrix(d, d, rng);
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > 0.0 { rjj / n } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random density operator of the given rank (Ginibre construction).
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = gaussian_matrix(d, rank.clamp(1, d), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m / C64::new(tr, 0.0);
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityOperator::new(m).expect("Ginibre state is a valid density operator")
}

/// Uniformly random point on the probability simplex.
pub fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::unitarity_defect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(5, &mut a);
        assert!(unitarity_defect(&u) < 1e-12);
        assert_eq!(u, haar_unitary(5, &mut b));
    }

    #[test]
    fn random_density_has_requested_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = random_density(4, 2, &mut rng);
        let v = r.eigenvalues();
        assert!(v[0].abs() < 1e-10 && v[1].abs() < 1e-10 && v[2] > 1e-6);
    }
}
