//! Analytic limits: harmonic-oscillator reservoirs, the continuum double
//! limits, and the biased qubit.

use crate::erasure::{apply_plan, build_plan, max_erasure_probability, PhysicalContext, PlanMode};
use crate::error::{Error, Result};
use crate::thermo::report;

/// Width of the `q → ½` limit branch.
const HALF_BRANCH: f64 = 1e-8;

/// `g(x) = coth x - 1/x`, accurate near zero.
fn coth_minus_inv(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0
    } else {
        1.0 / x.tanh() - 1.0 / x
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite and positive, got {v}")))
    }
}

/// Minimal heat for erasing a maximally mixed qudit into a harmonic
/// oscillator: `ω(d_O-1)/2 · coth(βω/2)`.
pub fn ho_limit_heat(d_o: usize, omega: f64, beta: f64) -> Result<f64> {
    positive("omega", omega)?;
    positive("beta", beta)?;
    if d_o == 0 {
        return Err(Error::param("object dimension must be at least 1"));
    }
    let x = 0.5 * beta * omega;
    // ω/2 coth(x) = (1/β)(1 + x g(x))
    Ok((d_o as f64 - 1.0) / beta * (1.0 + x * coth_minus_inv(x)))
}

/// Heat for fully erasing a qubit with populations `(q, 1-q)`:
/// `2q(1-q) ln(q/(1-q)) / (β(2q-1))`, with the limits `1/β` at `q = ½`
/// and `0` at `q = 1`.
pub fn biased_qubit_heat(q: f64, beta: f64) -> Result<f64> {
    positive("beta", beta)?;
    if !(0.5..=1.0).contains(&q) {
        return Err(Error::param(format!("q must lie in [1/2, 1], got {q}")));
    }
    if q - 0.5 < HALF_BRANCH {
        return Ok(1.0 / beta);
    }
    if q == 1.0 {
        return Ok(0.0);
    }
    Ok(2.0 * q * (1.0 - q) * (q / (1.0 - q)).ln() / (beta * (2.0 * q - 1.0)))
}

/// Energy width `Ω` with `q/(1-q) = e^{βΩ}`.
pub fn biased_qubit_width(q: f64, beta: f64) -> Result<f64> {
    positive("beta", beta)?;
    if !(0.5..1.0).contains(&q) {
        return Err(Error::param(format!("q must lie in [1/2, 1), got {q}")));
    }
    Ok((q / (1.0 - q)).ln() / beta)
}

/// Reservoir whose spectrum fills `[0, ‖H‖]` densely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumSpec {
    pub d_o: usize,
    pub norm_h: f64,
    pub beta: f64,
}

impl ContinuumSpec {
    pub fn new(d_o: usize, norm_h: f64, beta: f64) -> Result<Self> {
        if d_o == 0 {
            return Err(Error::param("object dimension must be at least 1"));
        }
        positive("norm", norm_h)?;
        positive("beta", beta)?;
        Ok(Self { d_o, norm_h, beta })
    }
}

/// `1 / Σ_{j<d_O} e^{-βj‖H‖/d_O}`.
pub fn continuum_pmax(spec: ContinuumSpec) -> f64 {
    let step = spec.beta * spec.norm_h / spec.d_o as f64;
    let z: f64 = (0..spec.d_o).map(|j| (-step * j as f64).exp()).sum();
    1.0 / z
}

/// `(d_O-1)/β + (‖H‖/2)[coth(β‖H‖/2) - coth(β‖H‖/(2d_O))]`, evaluated as
/// `(‖H‖/2)[g(β‖H‖/2) - g(β‖H‖/(2d_O))]` with `g(x) = coth x - 1/x` so the
/// small-norm limit does not cancel catastrophically.
pub fn continuum_heat(spec: ContinuumSpec) -> f64 {
    let a = 0.5 * spec.beta * spec.norm_h;
    0.5 * spec.norm_h * (coth_minus_inv(a) - coth_minus_inv(a / spec.d_o as f64))
}

/// How the ladder is scaled as its dimension grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DoubleLimit {
    /// `d = 2^k`, `ω = ‖H‖/(d-1)`.
    ConstantNorm { norm: f64 },
    /// `d = 2^n + 1`, `ω = ω̄/n`.
    GrowingNorm { omega_bar: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleLimitRow {
    pub step: usize,
    pub d: usize,
    pub omega: f64,
    pub p_max: f64,
    pub dq: f64,
    pub dl: f64,
}

/// Walks the ladder towards a continuum, erasing a maximally mixed qudit
/// with the passive optimal plan at each step.
pub fn double_limit_sweep(
    mode: DoubleLimit,
    steps: usize,
    d_o: usize,
    beta: f64,
) -> Result<Vec<DoubleLimitRow>> {
    if steps == 0 {
        return Err(Error::param("steps must be at least 1"));
    }
    if steps > 12 {
        return Err(Error::GuardExceeded {
            what: "double-limit steps",
            limit: 12,
            actual: steps,
        });
    }
    positive("beta", beta)?;
    let object = vec![1.0 / d_o as f64; d_o];
    (1..=steps)
        .map(|k| {
            let (d, omega) = match mode {
                DoubleLimit::ConstantNorm { norm } => {
                    positive("norm", norm)?;
                    let d = 1usize << k;
                    (d, norm / (d as f64 - 1.0))
                }
                DoubleLimit::GrowingNorm { omega_bar } => {
                    positive("omega_bar", omega_bar)?;
                    ((1usize << k) + 1, omega_bar / k as f64)
                }
            };
            let e = (0..d).map(|m| omega * m as f64).collect();
            let ctx = PhysicalContext::diagonal(&object, e, beta)?;
            let r = report(&ctx, &apply_plan(&ctx, &build_plan(&ctx, PlanMode::PassiveOptimal))?);
            Ok(DoubleLimitRow {
                step: k,
                d,
                omega,
                p_max: max_erasure_probability(&ctx),
                dq: r.dq,
                dl: r.dl.expect("d ≥ 2"),
            })
        })
        .collect()
}

/// Ladder dimension whose discarded Gibbs tail is below `tail`.
pub fn truncation_dimension(d_o: usize, omega: f64, beta: f64, tail: f64) -> usize {
    (d_o as f64 * (1.0 / tail).ln() / (beta * omega)).ceil() as usize + d_o
}
