use super::spectrum::{joint_ordered_spectrum, Label};
use super::PhysicalContext;
use crate::error::{Error, Result};
use crate::quantum::{CMatrix, C64};

/// Largest joint dimension for which a plan is realised as a dense matrix.
pub const MAX_DENSE_PLAN: usize = 1024;

/// Which optimality rule produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanMode {
    /// Maximises the erasure probability only.
    MaxProb,
    /// Minimises the dissipated heat only.
    MinHeat,
    /// Maximal probability, then minimal heat.
    MaxProbMinHeat,
    /// As `MaxProbMinHeat`, with the object left passive (minimal work).
    PassiveOptimal,
    /// A point on the sequential-swap tradeoff.
    TradeoffStep,
}

impl PlanMode {
    pub fn name(&self) -> &'static str {
        match self {
            PlanMode::MaxProb => "max_prob",
            PlanMode::MinHeat => "min_heat",
            PlanMode::MaxProbMinHeat => "max_prob_min_heat",
            PlanMode::PassiveOptimal => "passive_optimal",
            PlanMode::TradeoffStep => "tradeoff_step",
        }
    }
}

impl std::str::FromStr for PlanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "max_prob" => PlanMode::MaxProb,
            "min_heat" => PlanMode::MinHeat,
            "max_prob_min_heat" => PlanMode::MaxProbMinHeat,
            "passive_optimal" => PlanMode::PassiveOptimal,
            "tradeoff_step" => PlanMode::TradeoffStep,
            other => return Err(Error::param(format!("unknown plan mode `{other}`"))),
        })
    }
}

/// Partial swap `SW_γ` between two labels, applied after the permutation:
/// `|x⟩ → √(1-γ)|x⟩ + √γ|y⟩`, `|y⟩ → √γ|x⟩ - √(1-γ)|y⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglingStage {
    pub x: usize,
    pub y: usize,
    pub gamma: f64,
}

/// A joint unitary given as a product-basis permutation (`U|k⟩ = |images[k]⟩`)
/// optionally followed by one entangling swap.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasurePlan {
    d_o: usize,
    d_r: usize,
    images: Vec<usize>,
    stage: Option<EntanglingStage>,
    mode: PlanMode,
}

impl ErasurePlan {
    pub fn identity(d_o: usize, d_r: usize, mode: PlanMode) -> Self {
        Self {
            d_o,
            d_r,
            images: (0..d_o * d_r).collect(),
            stage: None,
            mode,
        }
    }

    pub fn from_images(d_o: usize, d_r: usize, images: Vec<usize>, mode: PlanMode) -> Result<Self> {
        let n = d_o * d_r;
        if images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: images.len(),
            });
        }
        let mut seen = vec![false; n];
        for &k in &images {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::param("plan images are not a permutation"));
            }
        }
        Ok(Self {
            d_o,
            d_r,
            images,
            stage: None,
            mode,
        })
    }

    pub fn with_stage(mut self, stage: EntanglingStage) -> Result<Self> {
        let n = self.images.len();
        if stage.x >= n || stage.y >= n || stage.x == stage.y {
            return Err(Error::param("entangling stage needs two distinct labels"));
        }
        if !(0.0..=1.0).contains(&stage.gamma) {
            return Err(Error::param(format!("gamma must lie in [0, 1], got {}", stage.gamma)));
        }
        self.stage = Some(stage);
        Ok(self)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_o, self.d_r)
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn stage(&self) -> Option<&EntanglingStage> {
        self.stage.as_ref()
    }

    pub fn mode(&self) -> PlanMode {
        self.mode
    }

    pub fn is_identity(&self) -> bool {
        self.stage.is_none() && self.images.iter().enumerate().all(|(k, &i)| k == i)
    }


    /// Cycles of the permutation, each listed as `c, U c, U² c, …`.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.images[s];
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Permuted populations (the entangling stage is ignored).
    pub fn permute(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; p.len()];
        for (k, &i) in self.images.iter().enumerate() {
            out[i] = p[k];
        }
        out
    }

    /// Dense unitary in the product label basis.
    pub fn realize(&self) -> Result<CMatrix> {
        let n = self.images.len();
        if n > MAX_DENSE_PLAN {
            return Err(Error::GuardExceeded {
                what: "dense plan dimension",
                limit: MAX_DENSE_PLAN,
                actual: n,
            });
        }
        let mut u = CMatrix::zeros(n, n);
        for (k, &i) in self.images.iter().enumerate() {
            u[(i, k)] = C64::new(1.0, 0.0);
        }
        if let Some(st) = self.stage {
            let mut sw = CMatrix::identity(n, n);
            let s = (1.0 - st.gamma).sqrt();
            let t = st.gamma.sqrt();
            sw[(st.x, st.x)] = C64::new(s, 0.0);
            sw[(st.y, st.x)] = C64::new(t, 0.0);
            sw[(st.x, st.y)] = C64::new(t, 0.0);
            sw[(st.y, st.y)] = C64::new(-s, 0.0);
            u = sw * u;
        }
        Ok(u)
    }

    /// The plan as a unitary on the user's computational basis
    /// `(F ⊗ B) U (F ⊗ B)†`, where `F` is the object frame and `B` the
    /// reservoir eigenbasis. Needs a reservoir built from a Hamiltonian.
    pub fn realize_in_computational_basis(&self, ctx: &PhysicalContext) -> Result<CMatrix> {
        let b = ctx.reservoir().eigenvectors().ok_or_else(|| {
            Error::param("reservoir was given by its spectrum only; no basis to map into")
        })?;
        let u = self.realize()?;
        let w = ctx.frame().vectors.kronecker(b);
        Ok(&w * u * w.adjoint())
    }
}

/// Target slot for each entry of `p↓`, per optimality rule.
fn target_slots(ctx: &PhysicalContext, mode: PlanMode) -> Vec<Label> {
    let (d_o, d_r) = (ctx.d_o(), ctx.d_r());
    let n = d_o * d_r;
    match mode {
        PlanMode::MinHeat => (0..n).map(|k| Label::new(k % d_o, k / d_o)).collect(),
        PlanMode::MaxProb => (0..n)
            .map(|k| {
                if k < d_r {
                    Label::new(0, k)
                } else {
                    let j = k - d_r;
                    Label::new(1 + j / d_r, j % d_r)
                }
            })
            .collect(),
        PlanMode::MaxProbMinHeat | PlanMode::PassiveOptimal | PlanMode::TradeoffStep => {
            let rows: Vec<usize> = if mode == PlanMode::PassiveOptimal {
                let e = ctx.frame().energies();
                let mut r: Vec<usize> = (1..d_o).collect();
                r.sort_by(|&a, &b| e[a].total_cmp(&e[b]).then(a.cmp(&b)));
                r
            } else {
                (1..d_o).collect()
            };
            (0..n)
                .map(|k| {
                    if k < d_r {
                        Label::new(0, k)
                    } else {
                        let j = k - d_r;
                        Label::new(rows[j % (d_o - 1)], j / (d_o - 1))
                    }
                })
                .collect()
        }
    }
}

/// Builds the optimal permutation for `mode`.
///
/// Entries of equal probability are interchangeable; inside each such group
/// labels that are already in an admissible slot stay put, so an input that is
/// already optimal yields the identity.
pub fn build_plan(ctx: &PhysicalContext, mode: PlanMode) -> ErasurePlan {
    let (d_o, d_r) = (ctx.d_o(), ctx.d_r());
    let mode = if mode == PlanMode::TradeoffStep {
        PlanMode::MaxProbMinHeat
    } else {
        mode
    };
    if d_o == 1 {
        return ErasurePlan::identity(d_o, d_r, mode);
    }
    let spec = joint_ordered_spectrum(ctx);
    let slots = target_slots(ctx, mode);
    let n = spec.len();
    let mut images = vec![usize::MAX; n];
    let scale = spec.values[0].max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (spec.values[start] - spec.values[end]).abs() <= 1e-14 * scale {
            end += 1;
        }
        let src: Vec<usize> = spec.labels[start..end].iter().map(|l| l.index(d_r)).collect();
        let dst: Vec<usize> = slots[start..end].iter().map(|l| l.index(d_r)).collect();
        let mut free_dst: Vec<usize> = Vec::new();
        for &t in &dst {
            if src.contains(&t) {
                images[t] = t;
            } else {
                free_dst.push(t);
            }
        }
        let free_src = src.iter().filter(|s| !dst.contains(s));
        for (s, t) in free_src.zip(free_dst) {
            images[*s] = t;
        }
        start = end;
    }
    ErasurePlan::from_images(d_o, d_r, images, mode).expect("slot assignment is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::unitarity_defect;

    fn qubit_ctx(beta: f64) -> PhysicalContext {
        PhysicalContext::diagonal(&[0.5, 0.5], vec![0.0, 1.0], beta).unwrap()
    }

    #[test]
    fn qubit_passive_optimal_is_a_swap() {
        let p = build_plan(&qubit_ctx(1.0), PlanMode::PassiveOptimal);
        // |φ_1 ξ_2⟩ (label 1) ↔ |φ_2 ξ_1⟩ (label 2)
        assert_eq!(p.images(), &[0, 2, 1, 3]);
    }

    #[test]
    fn optimal_input_gives_identity() {
        let ctx = PhysicalContext::diagonal(&[1.0, 0.0, 0.0], vec![0.0, 1.0, 2.0], 1.0).unwrap();
        for mode in [PlanMode::MaxProbMinHeat, PlanMode::PassiveOptimal, PlanMode::MaxProb] {
            assert!(build_plan(&ctx, mode).is_identity(), "{mode:?}");
        }
        let ctx = PhysicalContext::diagonal(&[0.6, 0.4], vec![1.0, 1.0], 1.0).unwrap();
        assert!(build_plan(&ctx, PlanMode::PassiveOptimal).is_identity());
    }

    #[test]
    fn realized_plans_are_unitary() {
        let ctx = PhysicalContext::diagonal(&[0.5, 0.3, 0.2], vec![0.0, 0.4, 1.1], 1.3).unwrap();
        for mode in [
            PlanMode::MaxProb,
            PlanMode::MinHeat,
            PlanMode::MaxProbMinHeat,
            PlanMode::PassiveOptimal,
        ] {
            let u = build_plan(&ctx, mode).realize().unwrap();
            assert!(unitarity_defect(&u) < 1e-12);
        }
        let p = ErasurePlan::identity(3, 3, PlanMode::TradeoffStep)
            .with_stage(EntanglingStage { x: 1, y: 5, gamma: 0.3 })
            .unwrap();
        assert!(unitarity_defect(&p.realize().unwrap()) < 1e-12);
    }

    #[test]
    fn invalid_plans_rejected() {
        assert!(ErasurePlan::from_images(1, 2, vec![0, 0], PlanMode::MaxProb).is_err());
        assert!(ErasurePlan::from_images(1, 2, vec![0], PlanMode::MaxProb).is_err());
        let id = ErasurePlan::identity(2, 2, PlanMode::MaxProb);
        assert!(id.clone().with_stage(EntanglingStage { x: 0, y: 1, gamma: 1.5 }).is_err());
        assert!(id.with_stage(EntanglingStage { x: 1, y: 1, gamma: 0.5 }).is_err());
    }

    #[test]
    fn cycles_cover_all_labels() {
        let p = ErasurePlan::from_images(2, 2, vec![1, 2, 0, 3], PlanMode::MaxProb).unwrap();
        assert_eq!(p.cycles(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [
            PlanMode::MaxProb,
            PlanMode::MinHeat,
            PlanMode::MaxProbMinHeat,
            PlanMode::PassiveOptimal,
            PlanMode::TradeoffStep,
        ] {
            assert_eq!(m.name().parse::<PlanMode>().unwrap(), m);
        }
        assert!("nope".parse::<PlanMode>().is_err());
    }
}
