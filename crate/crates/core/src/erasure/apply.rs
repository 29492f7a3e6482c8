use super::plan::ErasurePlan;
use super::PhysicalContext;
use crate::error::{Error, Result};
use crate::quantum::{eigh, CMatrix, DensityOperator, C64};

/// Joint state after a plan: labelled populations plus at most one coherence
/// `ρ'[x][y]` from the entangling stage.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub d_o: usize,
    pub d_r: usize,
    pub populations: Vec<f64>,
    pub coherence: Option<(usize, usize, C64)>,
}

impl JointState {
    /// Eigenvalues of the joint state (unsorted).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v = self.populations.clone();
        if let Some((x, y, c)) = self.coherence {
            let (l1, l2) = two_level_eigenvalues(v[x], v[y], c);
            v[x] = l1;
            v[y] = l2;
        }
        v
    }

    /// Dense matrix in the label basis.
    pub fn to_dense(&self) -> CMatrix {
        let n = self.populations.len();
        let mut m = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.populations.iter().map(|&p| C64::new(p, 0.0)),
        ));
        if let Some((x, y, c)) = self.coherence {
            m[(x, y)] = c;
            m[(y, x)] = c.conj();
        }
        m
    }
}

pub(crate) fn two_level_eigenvalues(a: f64, b: f64, c: C64) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let half = (0.25 * (a - b) * (a - b) + c.norm_sqr()).sqrt();
    (mean + half, mean - half)
}

/// Result of applying a plan to `ρ_O ⊗ ρ_R(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasureOutcome {
    pub state: JointState,
    /// `ρ_O'` in the object frame.
    pub object: CMatrix,
    /// Diagonal of `ρ_R'` in the reservoir energy basis.
    pub reservoir_diag: Vec<f64>,
    /// The single possible off-diagonal element of `ρ_R'`.
    pub reservoir_coherence: Option<(usize, usize, C64)>,
    /// `⟨φ_1|ρ_O'|φ_1⟩`.
    pub p_erase: f64,
}

impl ErasureOutcome {
    pub fn object_marginal(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.object.clone())
    }

    /// `ρ_O'` expressed in the computational basis of the object.
    pub fn object_marginal_computational(&self, ctx: &PhysicalContext) -> Result<DensityOperator> {
        let f = &ctx.frame().vectors;
        let m = f * &self.object * f.adjoint();
        DensityOperator::new((&m + m.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Eigenvalues of `ρ_O'`.
    pub fn object_eigenvalues(&self) -> Vec<f64> {
        eigh(&self.object).0
    }

    /// Eigenvalues of `ρ_R'`.
    pub fn reservoir_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.reservoir_diag.clone();
        if let Some((i, j, c)) = self.reservoir_coherence {
            let (a, b) = two_level_eigenvalues(v[i], v[j], c);
            v[i] = a;
            v[j] = b;
        }
        v
    }

    pub fn joint_density(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.state.to_dense())
    }
}

/// `ρ' = U ρ U†` for a plan, computed on the labelled probability vector.
pub fn apply_plan(ctx: &PhysicalContext, plan: &ErasurePlan) -> Result<ErasureOutcome> {
    let (d_o, d_r) = plan.dims();
    if d_o != ctx.d_o() {
        return Err(Error::DimensionMismatch {
            expected: ctx.d_o(),
            found: d_o,
        });
    }
    if d_r != ctx.d_r() {
        return Err(Error::DimensionMismatch {
            expected: ctx.d_r(),
            found: d_r,
        });
    }
    let mut pops = plan.permute(&ctx.joint_populations());
    let mut coherence = None;
    if let Some(st) = plan.stage() {
        let (a, b) = (pops[st.x], pops[st.y]);
        let g = st.gamma;
        pops[st.x] = (1.0 - g) * a + g * b;
        pops[st.y] = g * a + (1.0 - g) * b;
        let c = (a - b) * (g * (1.0 - g)).sqrt();
        if c != 0.0 {
            coherence = Some((st.x, st.y, C64::new(c, 0.0)));
        }
    }
    let state = JointState {
        d_o,
        d_r,
        populations: pops,
        coherence,
    };
    Ok(outcome_from_state(state))
}

pub(crate) fn outcome_from_state(state: JointState) -> ErasureOutcome {
    let (d_o, d_r) = (state.d_o, state.d_r);
    let mut object = CMatrix::zeros(d_o, d_o);
    let mut reservoir_diag = vec![0.0; d_r];
    for (k, &p) in state.populations.iter().enumerate() {
        object[(k / d_r, k / d_r)] += C64::new(p, 0.0);
        reservoir_diag[k % d_r] += p;
    }
    let mut reservoir_coherence = None;
    if let Some((x, y, c)) = state.coherence {
        let (lx, mx) = (x / d_r, x % d_r);
        let (ly, my) = (y / d_r, y % d_r);
        if mx == my {
            object[(lx, ly)] += c;
            object[(ly, lx)] += c.conj();
        }
        if lx == ly {
            reservoir_coherence = Some((mx, my, c));
        }
    }
    let p_erase = object[(0, 0)].re;
    ErasureOutcome {
        state,
        object,
        reservoir_diag,
        reservoir_coherence,
        p_erase,
    }
}
