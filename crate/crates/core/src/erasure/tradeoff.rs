use super::plan::{EntanglingStage, ErasurePlan, PlanMode};
use super::spectrum::max_erasure_probability;
use super::PhysicalContext;
use crate::error::{Error, Result};
use crate::tol;

/// One point of the error/heat tradeoff.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    /// Erasure error `δ = p_max - p(φ_1|ρ_O')`.
    pub delta: f64,
    pub heat: f64,
    pub work: f64,
    pub p_erase: f64,
    /// Diagonal of `ρ_O'` in the object frame.
    pub object_populations: Vec<f64>,
}

impl TradeoffPoint {
    /// Object populations are non-increasing along the frame order.
    pub fn object_is_ordered(&self) -> bool {
        self.object_populations
            .windows(2)
            .all(|w| w[1] <= w[0] + tol::DEGENERACY)
    }
}

/// Output of the sequential swap algorithm. Point `j` is reached after the
/// first `j` swaps; plans are rebuilt on demand from the swap list.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffCurve {
    d_o: usize,
    d_r: usize,
    p_max: f64,
    points: Vec<TradeoffPoint>,
    swaps: Vec<(usize, usize)>,
}

/// Error values this close to zero are snapped to exactly zero.
const DELTA_SNAP: f64 = 1e-14;

/// Runs the sequential swap algorithm: for each reservoir level `i ≥ 2`,
/// sweep `m` from the top level down and `l` from the last object state up to
/// the second, swapping `|φ_1 ξ_i⟩ ↔ |φ_l ξ_m⟩` whenever the former holds
/// strictly less probability.
pub fn tradeoff_curve(ctx: &PhysicalContext) -> TradeoffCurve {
    let (d_o, d_r) = (ctx.d_o(), ctx.d_r());
    let p_max = max_erasure_probability(ctx);
    let lam = ctx.reservoir_energies();
    let e = ctx.frame().energies();
    let mut p = ctx.joint_populations();
    let mut obj = ctx.object_populations().to_vec();
    let mut heat = 0.0;
    let mut work = 0.0;
    let snap = |d: f64| if d.abs() < DELTA_SNAP { 0.0 } else { d };

    let mut points = vec![TradeoffPoint {
        delta: snap(p_max - obj[0]),
        heat,
        work,
        p_erase: obj[0],
        object_populations: obj.clone(),
    }];
    let mut swaps = Vec::new();
    for i in 1..d_r {
        let x = i;
        for m in (0..d_r).rev() {
            for l in (1..d_o).rev() {
                let y = l * d_r + m;
                if p[x] < p[y] {
                    let dv = p[y] - p[x];
                    p.swap(x, y);
                    heat += dv * (lam[i] - lam[m]);
                    work += dv * (e[0] - e[l]);
                    obj[0] += dv;
                    obj[l] -= dv;
                    swaps.push((x, y));
                    points.push(TradeoffPoint {
                        delta: snap(p_max - obj[0]),
                        heat,
                        work,
                        p_erase: obj[0],
                        object_populations: obj.clone(),
                    });
                }
            }
        }
    }
    TradeoffCurve {
        d_o,
        d_r,
        p_max,
        points,
        swaps,
    }
}

impl TradeoffCurve {
    pub fn points(&self) -> &[TradeoffPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Executed swaps as `(x, y)` label pairs.
    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    /// Permutation reached at point `j`.
    pub fn plan(&self, j: usize) -> ErasurePlan {
        let n = self.d_o * self.d_r;
        let mut origin: Vec<usize> = (0..n).collect();
        for &(x, y) in &self.swaps[..j.min(self.swaps.len())] {
            origin.swap(x, y);
        }
        let mut images = vec![0; n];
        for (pos, &src) in origin.iter().enumerate() {
            images[src] = pos;
        }
        ErasurePlan::from_images(self.d_o, self.d_r, images, PlanMode::TradeoffStep)
            .expect("swap sequence is a permutation")
    }

    pub fn final_plan(&self) -> ErasurePlan {
        self.plan(self.swaps.len())
    }

    /// Plan achieving exactly the requested error: the last discrete point
    /// with error ≥ `delta`, followed by a partial swap on the next pair.
    pub fn plan_for_error(&self, ctx: &PhysicalContext, delta: f64) -> Result<ErasurePlan> {
        let top = self.points[0].delta;
        if !(delta.is_finite() && delta >= -1e-12 && delta <= top + 1e-12) {
            return Err(Error::param(format!(
                "requested error {delta} outside [0, {top}]"
            )));
        }
        let delta = delta.clamp(0.0, top);
        // Largest j with δ_j ≥ delta.
        let j = self.points.iter().rposition(|pt| pt.delta >= delta).unwrap_or(0);
        let pt = &self.points[j];
        if pt.delta == delta || j == self.swaps.len() {
            return Ok(self.plan(j));
        }
        let plan = self.plan(j);
        let pops = plan.permute(&ctx.joint_populations());
        let (x, y) = self.swaps[j];
        let (a, b) = (pops[x], pops[y]);
        let gamma = ((pt.delta - delta) / (b - a)).clamp(0.0, 1.0);
        plan.with_stage(EntanglingStage { x, y, gamma })
    }
}

/// Convenience wrapper: builds the curve and interpolates.
pub fn plan_for_error(ctx: &PhysicalContext, delta: f64) -> Result<ErasurePlan> {
    tradeoff_curve(ctx).plan_for_error(ctx, delta)
}
