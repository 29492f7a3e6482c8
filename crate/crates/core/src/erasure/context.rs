use crate::error::{Error, Result};
use crate::quantum::{eigh, CMatrix, DensityOperator, HermitianOperator, C64};
use crate::tol;

/// A reservoir described by its spectrum (ascending), optionally with the
/// eigenbasis it was diagonalised in.
#[derive(Debug, Clone, PartialEq)]
pub struct Reservoir {
    energies: Vec<f64>,
    eigenvectors: Option<CMatrix>,
}

impl Reservoir {
    pub fn from_hamiltonian(h: &HermitianOperator) -> Self {
        let (energies, vecs) = h.eigh();
        Self {
            energies,
            eigenvectors: Some(vecs),
        }
    }

    /// Spectrum-only reservoir; no dense operator is ever formed.
    pub fn from_energies(mut energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::param("reservoir needs at least one level"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::param("reservoir energies must be finite"));
        }
        energies.sort_by(f64::total_cmp);
        Ok(Self {
            energies,
            eigenvectors: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn eigenvectors(&self) -> Option<&CMatrix> {
        self.eigenvectors.as_ref()
    }

    pub fn norm(&self) -> f64 {
        self.energies
            .iter()
            .fold(0.0f64, |a, e| a.max(e.abs()))
    }

    /// Diagonal Hamiltonian in its own eigenbasis.
    pub fn energy_basis_hamiltonian(&self) -> Result<HermitianOperator> {
        HermitianOperator::from_real_diagonal(&self.energies)
    }
}

/// Orthonormal object basis `{|φ_l⟩}` diagonalising `ρ_O`, ordered by
/// non-increasing population. Ties are broken by ascending object energy so
/// that, inside a degenerate population, `H_O` is also diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectFrame {
    pub vectors: CMatrix,
    pub populations: Vec<f64>,
    /// `H_O` expressed in the frame.
    pub hamiltonian: CMatrix,
}

impl ObjectFrame {
    fn build(h: &HermitianOperator, rho: &DensityOperator) -> Self {
        let d = rho.dim();
        if h.is_diagonal() && is_diag(rho.matrix()) {
            let mut idx: Vec<usize> = (0..d).collect();
            let o = |i: usize| rho.matrix()[(i, i)].re;
            let e = |i: usize| h.matrix()[(i, i)].re;
            idx.sort_by(|&a, &b| {
                o(b).total_cmp(&o(a))
                    .then(e(a).total_cmp(&e(b)))
                    .then(a.cmp(&b))
            });
            let mut vectors = CMatrix::zeros(d, d);
            for (col, &i) in idx.iter().enumerate() {
                vectors[(i, col)] = C64::new(1.0, 0.0);
            }
            return Self::finish(h, vectors, idx.iter().map(|&i| o(i).max(0.0)).collect());
        }

        let (vals, vecs) = eigh(rho.matrix());
        // Descending populations; rotate inside degenerate groups to
        // diagonalise H_O there.
        let order: Vec<usize> = (0..d).rev().collect();
        let mut vectors = CMatrix::zeros(d, d);
        let mut pops = Vec::with_capacity(d);
        let mut k = 0;
        while k < d {
            let mut end = k + 1;
            while end < d && (vals[order[k]] - vals[order[end]]).abs() <= tol::DEGENERACY {
                end += 1;
            }
            let g = end - k;
            let basis = CMatrix::from_fn(d, g, |r, c| vecs[(r, order[k + c])]);
            let proj = basis.adjoint() * h.matrix() * &basis;
            let proj = (&proj + proj.adjoint()) * C64::new(0.5, 0.0);
            let (_, rot) = eigh(&proj);
            let rotated = &basis * rot;
            for c in 0..g {
                vectors.set_column(k + c, &rotated.column(c));
                pops.push(vals[order[k + c]].max(0.0));
            }
            k = end;
        }
        Self::finish(h, vectors, pops)
    }

    fn finish(h: &HermitianOperator, vectors: CMatrix, mut populations: Vec<f64>) -> Self {
        let s: f64 = populations.iter().sum();
        populations.iter_mut().for_each(|p| *p /= s);
        let hf = vectors.adjoint() * h.matrix() * &vectors;
        let hamiltonian = (&hf + hf.adjoint()) * C64::new(0.5, 0.0);
        Self {
            vectors,
            populations,
            hamiltonian,
        }
    }

    /// Diagonal object energies `⟨φ_l|H_O|φ_l⟩`.
    pub fn energies(&self) -> Vec<f64> {
        (0..self.populations.len())
            .map(|l| self.hamiltonian[(l, l)].re)
            .collect()
    }
}

fn is_diag(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == C64::new(0.0, 0.0)))
}

/// The tuple `(H_O, ρ_O, H_R, β)` defining an erasure problem.
///
/// The joint initial state `ρ_O ⊗ e^{-βH_R}/Z` is diagonal in the product of
/// the object frame and the reservoir energy basis, so everything downstream
/// works on labelled probability vectors.
#[derive(Debug, Clone)]
pub struct PhysicalContext {
    h_o: HermitianOperator,
    rho_o: DensityOperator,
    reservoir: Reservoir,
    beta: f64,
    frame: ObjectFrame,
    r: Vec<f64>,
    log_r: Vec<f64>,
}

impl PhysicalContext {
    pub fn new(
        h_o: HermitianOperator,
        rho_o: DensityOperator,
        reservoir: Reservoir,
        beta: f64,
    ) -> Result<Self> {
        if h_o.dim() != rho_o.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho_o.dim(),
                found: h_o.dim(),
            });
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::param(format!("beta must be finite and positive, got {beta}")));
        }
        let e = reservoir.energies();
        let e0 = e[0];
        let w: Vec<f64> = e.iter().map(|x| -beta * (x - e0)).collect();
        let log_z = {
            let s: f64 = w.iter().map(|x| x.exp()).sum();
            s.ln()
        };
        let log_r: Vec<f64> = w.iter().map(|x| x - log_z).collect();
        let r = log_r.iter().map(|x| x.exp()).collect();
        let frame = ObjectFrame::build(&h_o, &rho_o);
        Ok(Self {
            h_o,
            rho_o,
            reservoir,
            beta,
            frame,
            r,
            log_r,
        })
    }

    pub fn from_hamiltonians(
        h_o: HermitianOperator,
        rho_o: DensityOperator,
        h_r: &HermitianOperator,
        beta: f64,
    ) -> Result<Self> {
        Self::new(h_o, rho_o, Reservoir::from_hamiltonian(h_r), beta)
    }

    /// Object with trivial Hamiltonian and the given populations.
    pub fn diagonal(object: &[f64], reservoir_energies: Vec<f64>, beta: f64) -> Result<Self> {
        Self::new(
            HermitianOperator::zeros(object.len())?,
            DensityOperator::from_diagonal(object)?,
            Reservoir::from_energies(reservoir_energies)?,
            beta,
        )
    }

    pub fn d_o(&self) -> usize {
        self.rho_o.dim()
    }

    pub fn d_r(&self) -> usize {
        self.reservoir.dim()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h_o(&self) -> &HermitianOperator {
        &self.h_o
    }

    pub fn rho_o(&self) -> &DensityOperator {
        &self.rho_o
    }

    pub fn reservoir(&self) -> &Reservoir {
        &self.reservoir
    }

    pub fn frame(&self) -> &ObjectFrame {
        &self.frame
    }

    /// `o↓`, object populations in frame order.
    pub fn object_populations(&self) -> &[f64] {
        &self.frame.populations
    }

    /// Target pure state `|φ_1⟩` in the computational basis.
    pub fn target(&self) -> Vec<C64> {
        self.frame.vectors.column(0).iter().copied().collect()
    }

    /// `H_O` in the frame, as an operator.
    pub fn frame_hamiltonian(&self) -> HermitianOperator {
        HermitianOperator::new(self.frame.hamiltonian.clone())
            .expect("frame Hamiltonian is symmetrised")
    }

    /// Reservoir energies, ascending.
    pub fn reservoir_energies(&self) -> &[f64] {
        self.reservoir.energies()
    }

    /// Gibbs populations `r_m`, aligned with the ascending energies.
    pub fn reservoir_populations(&self) -> &[f64] {
        &self.r
    }

    /// `ln r_m`, computed from the energies so it stays finite when `r_m`
    /// underflows.
    pub fn log_reservoir_populations(&self) -> &[f64] {
        &self.log_r
    }

    /// Initial joint populations indexed by label `l·d_R + m`.
    pub fn joint_populations(&self) -> Vec<f64> {
        let o = self.object_populations();
        let mut v = Vec::with_capacity(self.d_o() * self.d_r());
        for &ol in o {
            for &rm in &self.r {
                v.push(ol * rm);
            }
        }
        v
    }

    /// Reservoir thermal state in its energy basis.
    pub fn reservoir_gibbs(&self) -> Result<DensityOperator> {
        DensityOperator::from_diagonal(&self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        let h = HermitianOperator::zeros(2).unwrap();
        let rho = DensityOperator::maximally_mixed(3).unwrap();
        let res = Reservoir::from_energies(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            PhysicalContext::new(h.clone(), rho, res.clone(), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        assert!(PhysicalContext::new(h.clone(), rho.clone(), res.clone(), 0.0).is_err());
        assert!(PhysicalContext::new(h, rho, res, f64::INFINITY).is_err());
        assert!(Reservoir::from_energies(vec![]).is_err());
    }

    #[test]
    fn frame_sorts_populations_and_breaks_ties_by_energy() {
        let h = HermitianOperator::from_real_diagonal(&[2.0, 1.0, 0.0]).unwrap();
        let rho = DensityOperator::from_diagonal(&[0.25, 0.5, 0.25]).unwrap();
        let ctx = PhysicalContext::new(h, rho, Reservoir::from_energies(vec![0.0]).unwrap(), 1.0)
            .unwrap();
        assert_eq!(ctx.object_populations(), &[0.5, 0.25, 0.25]);
        assert_eq!(ctx.frame().energies(), vec![1.0, 0.0, 2.0]);
        assert_eq!(ctx.target()[1], C64::new(1.0, 0.0));
    }

    #[test]
    fn frame_of_non_diagonal_state() {
        let s = 0.5f64.sqrt();
        let rho = DensityOperator::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let ctx = PhysicalContext::new(h, rho, Reservoir::from_energies(vec![0.0, 1.0]).unwrap(), 1.0)
            .unwrap();
        assert!((ctx.object_populations()[0] - 1.0).abs() < 1e-12);
        let e = ctx.frame().energies();
        assert!((e[0] - 0.5).abs() < 1e-12 && (e[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn log_populations_survive_underflow() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], 1e6).unwrap();
        assert_eq!(ctx.reservoir_populations()[1], 0.0);
        assert_eq!(ctx.log_reservoir_populations()[1], -1e6);
    }
}
