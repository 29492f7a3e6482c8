//! Energy-conserving Markovian dephasing and the noisy erasure experiments.

use nalgebra::Schur;
use rayon::prelude::*;

use crate::erasure::{tradeoff_curve, ErasurePlan, PhysicalContext};
use crate::error::{Error, Result};
use crate::quantum::{eigh, unitarity_defect, CMatrix, DensityOperator, HermitianOperator, C64};
use crate::thermo::{report_post_state, PostState, ThermoReport};

/// Hard cap on the joint dimension for dephased erasure.
pub const MAX_DEPHASED_DIM: usize = 128;
/// Largest Hilbert dimension for which the dense `d² × d²` matrix is formed.
pub const MAX_DENSE_SUPEROPERATOR: usize = 64;
/// Positivity tolerance after evolution.
pub const EVOLVE_PSD: f64 = 1e-7;

/// Branch used when taking the logarithm of a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Eigenphases in `(-π, π]`.
    Principal,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        "principal"
    }
}

/// A Lindblad generator acting on column-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum Superoperator {
    /// `i[ρ,H] + Γ Σ_n (P_n ρ P_n - ½{ρ,P_n})`, held in the eigenbasis of
    /// `H` where it is diagonal.
    Dephasing {
        basis: CMatrix,
        energies: Vec<f64>,
        gamma: f64,
    },
    /// Arbitrary `d² × d²` generator.
    Dense { d: usize, matrix: CMatrix },
}

/// Dephasing generator for `H`, using its computed eigenbasis.
pub fn dephasing_liouvillian(h: &HermitianOperator, gamma: f64) -> Result<Superoperator> {
    let (energies, basis) = h.eigh();
    dephasing_liouvillian_in_basis(basis, energies, gamma)
}

/// Dephasing generator with an explicitly chosen eigenbasis (columns) and
/// eigenvalues. Useful when the degenerate-subspace basis matters.
pub fn dephasing_liouvillian_in_basis(
    basis: CMatrix,
    energies: Vec<f64>,
    gamma: f64,
) -> Result<Superoperator> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::param(format!("dephasing rate must be non-negative, got {gamma}")));
    }
    if basis.nrows() != basis.ncols() || basis.nrows() != energies.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.nrows(),
            found: energies.len(),
        });
    }
    if unitarity_defect(&basis) > 1e-10 {
        return Err(Error::InvalidOperator("dephasing basis is not orthonormal".into()));
    }
    Ok(Superoperator::Dephasing {
        basis,
        energies,
        gamma,
    })
}

impl Superoperator {
    pub fn from_matrix(d: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != d * d || matrix.ncols() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: matrix.nrows(),
            });
        }
        Ok(Superoperator::Dense { d, matrix })
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        match self {
            Superoperator::Dephasing { energies, .. } => energies.len(),
            Superoperator::Dense { d, .. } => *d,
        }
    }

    /// The `d² × d²` matrix (column-stacking convention), assembled directly
    /// from the Lindblad form.
    pub fn matrix(&self) -> Result<CMatrix> {
        let d = self.dim();
        if d > MAX_DENSE_SUPEROPERATOR {
            return Err(Error::GuardExceeded {
                what: "dense superoperator dimension",
                limit: MAX_DENSE_SUPEROPERATOR,
                actual: d,
            });
        }
        match self {
            Superoperator::Dense { matrix, .. } => Ok(matrix.clone()),
            Superoperator::Dephasing {
                basis,
                energies,
                gamma,
            } => {
                let i = C64::new(0.0, 1.0);
                let id = CMatrix::identity(d, d);
                let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    d,
                    energies.iter().map(|&e| C64::new(e, 0.0)),
                ));
                let h = basis * diag * basis.adjoint();
                // vec(AXB) = (Bᵀ ⊗ A) vec(X)
                let mut l = (h.transpose().kronecker(&id) - id.kronecker(&h)) * i;
                for n in 0..d {
                    let v = basis.column(n);
                    let p = v * v.adjoint();
                    let pt = p.transpose();
                    l += (pt.kronecker(&p)
                        - (pt.kronecker(&id) + id.kronecker(&p)) * C64::new(0.5, 0.0))
                        * C64::new(*gamma, 0.0);
                }
                Ok(l)
            }
        }
    }

    /// `L(ρ)`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let d = self.dim();
        check_dim(d, rho)?;
        match self {
            Superoperator::Dephasing {
                basis,
                energies,
                gamma,
            } => {
                let mut t = basis.adjoint() * rho * basis;
                for n in 0..d {
                    for m in 0..d {
                        let off = if n == m { 0.0 } else { *gamma };
                        t[(n, m)] *= C64::new(-off, -(energies[n] - energies[m]));
                    }
                }
                Ok(basis * t * basis.adjoint())
            }
            Superoperator::Dense { matrix, .. } => Ok(unvec(&(matrix * vec(rho)), d)),
        }
    }

    /// `e^{τL}(ρ)` without validation of the result.
    pub fn propagate(&self, rho: &CMatrix, tau: f64) -> Result<CMatrix> {
        let d = self.dim();
        check_dim(d, rho)?;
        match self {
            Superoperator::Dephasing {
                basis,
                energies,
                gamma,
            } => {
                let mut t = basis.adjoint() * rho * basis;
                for n in 0..d {
                    for m in 0..d {
                        let off = if n == m { 0.0 } else { *gamma };
                        let phase = -(energies[n] - energies[m]) * tau;
                        t[(n, m)] *= C64::from_polar((-off * tau).exp(), phase);
                    }
                }
                Ok(basis * t * basis.adjoint())
            }
            Superoperator::Dense { matrix, .. } => {
                // Scaling-and-squaring Padé.
                let prop = (matrix * C64::new(tau, 0.0)).exp();
                Ok(unvec(&(prop * vec(rho)), d))
            }
        }
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ e^{τL}(|i⟩⟨j|)`.
    pub fn choi(&self, tau: f64) -> Result<CMatrix> {
        let d = self.dim();
        let mut c = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let mut e = CMatrix::zeros(d, d);
                e[(i, j)] = C64::new(1.0, 0.0);
                let out = self.propagate(&e, tau)?;
                for a in 0..d {
                    for b in 0..d {
                        c[(i * d + a, j * d + b)] = out[(a, b)];
                    }
                }
            }
        }
        Ok(c)
    }
}

fn check_dim(d: usize, rho: &CMatrix) -> Result<()> {
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.nrows(),
        });
    }
    Ok(())
}

fn vec(m: &CMatrix) -> nalgebra::DVector<C64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

fn unvec(v: &nalgebra::DVector<C64>, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// `e^{τL}(ρ)`, checked for trace and positivity.
pub fn evolve(rho: &DensityOperator, l: &Superoperator, tau: f64) -> Result<DensityOperator> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::param(format!("evolution time must be non-negative, got {tau}")));
    }
    let out = l.propagate(rho.matrix(), tau)?;
    let out = (&out + out.adjoint()) * C64::new(0.5, 0.0);
    let tr = out.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::Numerical(format!("trace drifted to {tr}")));
    }
    DensityOperator::with_psd_tolerance(out, EVOLVE_PSD)
}

/// A Hamiltonian `H_1` with `e^{-iτH_1} = U`, together with the eigenbasis it
/// was built in.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub hamiltonian: HermitianOperator,
    pub eigenvectors: CMatrix,
    pub eigenvalues: Vec<f64>,
    pub branch: Branch,
}

impl Generator {
    fn from_spectral(vectors: CMatrix, eigenvalues: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            eigenvalues.iter().map(|&e| C64::new(e, 0.0)),
        ));
        let h = &vectors * diag * vectors.adjoint();
        Ok(Self {
            hamiltonian: HermitianOperator::from_nearly_hermitian(h, 1e-9)?,
            eigenvectors: vectors,
            eigenvalues,
            branch: Branch::Principal,
        })
    }

    /// `e^{-iτH_1}`.
    pub fn unitary(&self, tau: f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * tau)),
        ));
        &self.eigenvectors * diag * self.eigenvectors.adjoint()
    }

    pub fn liouvillian(&self, gamma: f64) -> Result<Superoperator> {
        dephasing_liouvillian_in_basis(self.eigenvectors.clone(), self.eigenvalues.clone(), gamma)
    }
}

/// `θ = -arg λ` folded into `(-π, π]`.
fn principal_phase(z: C64) -> f64 {
    let th = -z.arg();
    if th <= -std::f64::consts::PI {
        th + 2.0 * std::f64::consts::PI
    } else {
        th
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("tau must be positive, got {tau}")))
    }
}

/// Principal-branch generator of an arbitrary unitary, via its Schur form.
pub fn generator_for_unitary(u: &CMatrix, tau: f64) -> Result<Generator> {
    check_tau(tau)?;
    if u.nrows() != u.ncols() {
        return Err(Error::InvalidOperator("unitary must be square".into()));
    }
    if unitarity_defect(u) > 1e-10 {
        return Err(Error::InvalidOperator("matrix is not unitary".into()));
    }
    let n = u.nrows();
    let (q, t) = Schur::new(u.clone()).unpack();
    let mut off = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            off = off.max(t[(i, j)].norm());
        }
    }
    if off > 1e-8 {
        return Err(Error::Numerical(format!(
            "Schur form of a unitary is not diagonal (off-diagonal {off:e})"
        )));
    }
    let theta: Vec<f64> = (0..n).map(|k| principal_phase(t[(k, k)]) / tau).collect();
    Generator::from_spectral(q, theta)
}

/// Generator of a plan. Pure permutations use the cycle Fourier basis, which
/// is exact; plans with an entangling stage fall back to the Schur route.
pub fn generator_for_plan(plan: &ErasurePlan, tau: f64) -> Result<Generator> {
    check_tau(tau)?;
    if plan.stage().is_some() {
        return generator_for_unitary(&plan.realize()?, tau);
    }
    let n = plan.images().len();
    if n > crate::erasure::MAX_DENSE_PLAN {
        return Err(Error::GuardExceeded {
            what: "dense plan dimension",
            limit: crate::erasure::MAX_DENSE_PLAN,
            actual: n,
        });
    }
    let mut vecs = CMatrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    let mut col = 0;
    for cyc in plan.cycles() {
        let k = cyc.len();
        let norm = 1.0 / (k as f64).sqrt();
        for j in 0..k {
            // U v = e^{2πij/k} v for v = Σ_t e^{-2πijt/k} |c_t⟩ / √k
            for (t, &c) in cyc.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((j * t) % k) as f64 / k as f64;
                vecs[(c, col)] = C64::from_polar(norm, ang);
            }
            let theta = if 2 * j < k {
                -2.0 * std::f64::consts::PI * j as f64 / k as f64
            } else if 2 * j == k {
                std::f64::consts::PI
            } else {
                2.0 * std::f64::consts::PI * (k - j) as f64 / k as f64
            };
            vals.push(theta / tau);
            col += 1;
        }
    }
    Generator::from_spectral(vecs, vals)
}

/// Result of a noisy erasure run.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasedOutcome {
    pub p_erase: f64,
    pub dq: f64,
    pub report: ThermoReport,
    /// `|tr ρ(τ) - 1|`.
    pub trace_error: f64,
    /// `|tr[H_1 ρ(τ)] - tr[H_1 ρ(0)]|`.
    pub energy_drift: f64,
    /// `‖e^{τL}(I/d) - I/d‖`.
    pub unitality_error: f64,
    pub branch: Branch,
}

/// Evolves `ρ_O ⊗ ρ_R(β)` for time `τ` under the dephasing generator built
/// from the erasure unitary at the end of the sequential swap algorithm.
pub fn dephased_erasure(ctx: &PhysicalContext, gamma: f64, tau: f64) -> Result<DephasedOutcome> {
    let n = ctx.d_o() * ctx.d_r();
    if n > MAX_DEPHASED_DIM {
        return Err(Error::GuardExceeded {
            what: "dephased erasure dimension",
            limit: MAX_DEPHASED_DIM,
            actual: n,
        });
    }
    let plan = tradeoff_curve(ctx).final_plan();
    let gen = generator_for_plan(&plan, tau)?;
    let l = gen.liouvillian(gamma)?;
    let rho0 = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        ctx.joint_populations().into_iter().map(|p| C64::new(p, 0.0)),
    ));
    let rho0 = DensityOperator::new(rho0)?;
    let rho = evolve(&rho0, &l, tau)?;
    let h1 = &gen.hamiltonian;
    let energy_drift = (h1.expectation(rho.matrix()) - h1.expectation(rho0.matrix())).abs();
    let trace_error = (rho.matrix().trace().re - 1.0).abs();
    let mixed = CMatrix::identity(n, n) / C64::new(n as f64, 0.0);
    let unitality_error = (l.propagate(&mixed, tau)? - &mixed).norm();
    let post = PostState::from_dense(ctx, rho.matrix())?;
    let report = report_post_state(ctx, &post);
    Ok(DephasedOutcome {
        p_erase: report.p_erase,
        dq: report.dq,
        report,
        trace_error,
        energy_drift,
        unitality_error,
        branch: gen.branch,
    })
}

/// One row of the dimension sweep behind the power-of-two conjecture.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjecturePoint {
    pub d: usize,
    pub p_erase: f64,
    pub dq: f64,
}

/// Ladder reservoirs of dimension `dims` erasing a maximally mixed qubit.
pub fn conjecture_sweep(
    dims: &[usize],
    beta: f64,
    omega: f64,
    gamma: f64,
    tau: f64,
) -> Result<Vec<ConjecturePoint>> {
    dims.par_iter()
        .map(|&d| {
            let e = (0..d).map(|m| omega * m as f64).collect();
            let ctx = PhysicalContext::diagonal(&[0.5, 0.5], e, beta)?;
            let out = dephased_erasure(&ctx, gamma, tau)?;
            Ok(ConjecturePoint {
                d,
                p_erase: out.p_erase,
                dq: out.dq,
            })
        })
        .collect()
}

/// For each power-of-two dimension in the sweep, whether its heat is lower
/// than at every larger dimension in the sweep.
pub fn conjecture_pattern(points: &[ConjecturePoint]) -> Vec<(usize, bool)> {
    points
        .iter()
        .filter(|p| p.d >= 4 && p.d.is_power_of_two())
        .map(|p| {
            let ok = points.iter().filter(|q| q.d > p.d).all(|q| p.dq < q.dq);
            (p.d, ok)
        })
        .collect()
}

/// Smallest eigenvalue of the Choi matrix of `e^{τL}`.
pub fn choi_min_eigenvalue(l: &Superoperator, tau: f64) -> Result<f64> {
    let c = l.choi(tau)?;
    let c = (&c + c.adjoint()) * C64::new(0.5, 0.0);
    Ok(eigh(&c).0[0])
}
