use nalgebra::{DMatrix, SymmetricEigen};

use super::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidOperator(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidOperator("dimension must be at least 1".into()));
    }
    Ok(m.nrows())
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn is_offdiagonal_zero(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == C64::new(0.0, 0.0)))
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in ascending order
/// and the matching orthonormal eigenvectors as columns.
///
/// Exactly diagonal input takes a shortcut (stable sort, permutation
/// eigenvectors), which keeps large diagonal reservoirs cheap and makes the
/// basis choice deterministic under degeneracy.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if is_offdiagonal_zero(m) {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| m[(a, a)].re.total_cmp(&m[(b, b)].re));
        let values = idx.iter().map(|&i| m[(i, i)].re).collect();
        let mut vecs = CMatrix::zeros(n, n);
        for (col, &i) in idx.iter().enumerate() {
            vecs[(i, col)] = C64::new(1.0, 0.0);
        }
        return (values, vecs);
    }
    let real = m.iter().all(|z| z.im == 0.0);
    let (vals, vecs): (Vec<f64>, CMatrix) = if real {
        let r = DMatrix::from_fn(n, n, |i, j| m[(i, j)].re);
        let eig = SymmetricEigen::new(r);
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| C64::new(x, 0.0)),
        )
    } else {
        let eig = SymmetricEigen::new(m.clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let values = idx.iter().map(|&i| vals[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| vecs[(r, idx[c])]);
    (values, vectors)
}

/// A Hermitian operator (Hamiltonian) on a finite-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > tol::HERMITIAN {
            return Err(Error::InvalidOperator(format!(
                "not Hermitian (max |A - A†| = {defect:e})"
            )));
        }
        Ok(Self { m })
    }

    /// Accepts a matrix that is Hermitian up to rounding and projects it onto
    /// the Hermitian part. Used for operators assembled from decompositions.
    pub(crate) fn from_nearly_hermitian(m: CMatrix, slack: f64) -> Result<Self> {
        check_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > slack {
            return Err(Error::InvalidOperator(format!(
                "not Hermitian (max |A - A†| = {defect:e})"
            )));
        }
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self { m: h })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidOperator("dimension must be at least 1".into()));
        }
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidOperator("non-finite diagonal entry".into()));
        }
        let n = diag.len();
        Ok(Self {
            m: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        })
    }

    pub fn zeros(d: usize) -> Result<Self> {
        Self::from_real_diagonal(&vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn is_diagonal(&self) -> bool {
        is_offdiagonal_zero(&self.m)
    }

    /// Eigenvalues (ascending) and eigenvectors.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        eigh(&self.m)
    }

    /// `tr[H ρ]`.
    pub fn expectation(&self, rho: &CMatrix) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.m[(i, j)] * rho[(j, i)]).re;
            }
        }
        acc
    }

    /// Operator (spectral) norm.
    pub fn spectral_norm(&self) -> f64 {
        let (vals, _) = self.eigh();
        vals.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    m: CMatrix,
}

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_psd_tolerance(m, tol::PSD)
    }

    pub(crate) fn with_psd_tolerance(m: CMatrix, psd_tol: f64) -> Result<Self> {
        check_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > tol::HERMITIAN {
            return Err(Error::InvalidOperator(format!(
                "density operator not Hermitian (max |A - A†| = {defect:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidOperator(format!(
                "trace is {tr}, expected 1"
            )));
        }
        let (vals, _) = eigh(&m);
        if vals[0] < -psd_tol {
            return Err(Error::Positivity(vals[0]));
        }
        Ok(Self { m })
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        let n = p.len();
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(p[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::new(m)
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidOperator("dimension must be at least 1".into()));
        }
        Self::from_diagonal(&vec![1.0 / d as f64; d])
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) nonzero vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidOperator("zero state vector".into()));
        }
        let n = psi.len();
        let m = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.m).0
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            m: tensor_product(&self.m, &other.m),
        }
    }
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Which factor of a bipartite system to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub(crate) fn partial_trace_matrix(m: &CMatrix, (da, db): (usize, usize), keep: Subsystem) -> CMatrix {
    match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    }
}

/// Reduced state of one factor of a bipartite `d_A · d_B` system.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityOperator> {
    let expected = dims.0 * dims.1;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    Ok(DensityOperator {
        m: partial_trace_matrix(rho.matrix(), dims, keep),
    })
}

/// Boltzmann weights `e^{-βE}/Z` for a list of energies, with the lowest
/// energy factored out so nothing overflows.
pub fn gibbs_populations(energies: &[f64], beta: f64) -> Vec<f64> {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Thermal state `e^{-βH}/tr[e^{-βH}]`.
pub fn gibbs_state(h: &HermitianOperator, beta: f64) -> Result<DensityOperator> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::param(format!("beta must be finite and positive, got {beta}")));
    }
    let (vals, vecs) = h.eigh();
    let p = gibbs_populations(&vals, beta);
    let n = h.dim();
    let mut m = CMatrix::zeros(n, n);
    for (k, pk) in p.iter().enumerate() {
        if *pk == 0.0 {
            continue;
        }
        let v = vecs.column(k);
        m += (v * v.adjoint()) * C64::new(*pk, 0.0);
    }
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityOperator::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> CMatrix {
        HermitianOperator::from_real_diagonal(v).unwrap().into_matrix()
    }

    fn sz() -> CMatrix {
        diag(&[1.0, -1.0])
    }

    #[test]
    fn gibbs_examples() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let g = gibbs_state(&h, 1e-12).unwrap();
        assert!((g.matrix()[(0, 0)].re - 0.5).abs() < 1e-10);
        let g = gibbs_state(&h, 1.0).unwrap();
        assert!((g.matrix()[(0, 0)].re - 0.731_058_578_6).abs() < 1e-9);
        assert!((g.matrix()[(1, 1)].re - 0.268_941_421_4).abs() < 1e-9);
        let g = gibbs_state(&h, 1e6).unwrap();
        assert!((g.matrix()[(0, 0)].re - 1.0).abs() < 1e-10);
        assert!(gibbs_state(&h, 0.0).is_err());
        assert!(gibbs_state(&h, f64::NAN).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::InvalidOperator(_))
        ));
    }

    #[test]
    fn gibbs_of_dense_hamiltonian_is_diagonal_in_eigenbasis() {
        let mut m = sz();
        m[(0, 1)] = C64::new(0.3, -0.4);
        m[(1, 0)] = C64::new(0.3, 0.4);
        let h = HermitianOperator::new(m).unwrap();
        let g = gibbs_state(&h, 0.7).unwrap();
        let (_, v) = h.eigh();
        let d = v.adjoint() * g.matrix() * &v;
        assert!(d[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn tensor_examples() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(tensor_product(&i2, &i2), CMatrix::identity(4, 4));
        let p = tensor_product(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]));
        assert_eq!(p, diag(&[0.0, 1.0, 0.0, 0.0]));
        let lhs = tensor_product(&sz(), &i2) * tensor_product(&i2, &sz());
        assert_eq!(lhs, tensor_product(&sz(), &sz()));
    }

    #[test]
    fn partial_trace_examples() {
        let a = DensityOperator::from_diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityOperator::from_diagonal(&[0.2, 0.5, 0.3]).unwrap();
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, (2, 3), Subsystem::A).unwrap();
        assert!((ra.matrix() - a.matrix()).norm() < 1e-14);
        let rb = partial_trace(&ab, (2, 3), Subsystem::B).unwrap();
        assert!((rb.matrix() - b.matrix()).norm() < 1e-14);

        let s = 0.5f64.sqrt();
        let z = C64::new(0.0, 0.0);
        let bell = DensityOperator::pure(&[C64::new(s, 0.0), z, z, C64::new(s, 0.0)]).unwrap();
        let ra = partial_trace(&bell, (2, 2), Subsystem::A).unwrap();
        assert!((ra.matrix() - CMatrix::identity(2, 2) * C64::new(0.5, 0.0)).norm() < 1e-14);

        assert!(matches!(
            partial_trace(&bell, (2, 3), Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::from_diagonal(&[0.5, 0.6]).is_err());
        assert!(matches!(
            DensityOperator::from_diagonal(&[1.2, -0.2]),
            Err(Error::Positivity(_))
        ));
        assert!(DensityOperator::maximally_mixed(3).is_ok());
    }

    #[test]
    fn eigh_diagonal_shortcut_is_stable() {
        let (v, u) = eigh(&diag(&[1.0, 0.0, 1.0, 0.0]));
        assert_eq!(v, vec![0.0, 0.0, 1.0, 1.0]);
        assert_eq!(u[(1, 0)].re, 1.0);
        assert_eq!(u[(3, 1)].re, 1.0);
        assert_eq!(u[(0, 2)].re, 1.0);
    }
}
