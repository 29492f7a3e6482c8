//! The optimisation core: maximal erasure probability, optimal permutations
//! and the sequential-swap tradeoff between erasure error and heat.

mod apply;
mod context;
mod plan;
mod spectrum;
mod tradeoff;

pub use apply::{apply_plan, ErasureOutcome, JointState};
pub use context::{ObjectFrame, PhysicalContext, Reservoir};
pub use plan::{build_plan, EntanglingStage, ErasurePlan, PlanMode, MAX_DENSE_PLAN};
pub use spectrum::{
    joint_ordered_spectrum, max_erasure_probability, nontrivial_erasure_possible, Label,
    OrderedSpectrum,
};
pub use tradeoff::{plan_for_error, tradeoff_curve, TradeoffCurve, TradeoffPoint};
