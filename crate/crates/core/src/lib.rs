//! Optimal quantum information erasure against a finite thermal reservoir.
//!
//! Given an object state, a reservoir Hamiltonian and an inverse temperature,
//! this crate builds the unitaries that maximise the probability of preparing
//! the object in a pure state while dissipating the least heat, traces the
//! error/heat tradeoff produced by sequential two-level swaps, and does the
//! full energy and entropy bookkeeping for the resulting transformation.
//!
//! Everything works in natural units (`k_B = ħ = 1`) with entropies in nats.
//!
//! Module map:
//!
//! - [`quantum`]: dense operators, entropies, majorisation and passivity.
//! - [`reservoirs`]: ladder and spin-chain Hamiltonians.
//! - [`erasure`]: the optimisation core (plans, tradeoff curve).
//! - [`thermo`]: heat/work/entropy accounting.
//! - [`dynamics`]: energy-conserving dephasing evolution.
//! - [`closed_form`]: analytic limits used as calculators and oracles.
//! - [`beyond`]: erasure with an auxiliary system or inside a thermal system.
//! - [`oracle`]: brute-force verification on small instances.
//! - [`cli`]: the scenario runner behind the `erasure` binary.

pub mod beyond;
pub mod cli;
pub mod closed_form;
pub mod dynamics;
pub mod erasure;
mod error;
pub mod oracle;
pub mod quantum;
pub mod reservoirs;
pub mod thermo;
pub mod tol;

pub use error::{Error, Result};
pub use erasure::{
    ErasureOutcome, ErasurePlan, Label, OrderedSpectrum, PhysicalContext, PlanMode, Reservoir,
    TradeoffCurve, TradeoffPoint,
};
pub use quantum::{CMatrix, DensityOperator, HermitianOperator, C64};
pub use thermo::ThermoReport;
