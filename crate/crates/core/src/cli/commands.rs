use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{BeyondConfig, ClosedFormConfig, Config, DoubleLimitMode, ReservoirConfig};
use crate::beyond::{
    auxiliary_full_erasure, classical_catalyst_check, correlated_example_hamiltonian,
    example_auxiliary_states, hamiltonian_alignment_check, thermal_subsystem_optimize,
    AuxiliaryScenario, ThermalSubsystemScenario,
};
use crate::closed_form::{
    biased_qubit_heat, biased_qubit_width, continuum_heat, continuum_pmax, double_limit_sweep,
    ho_limit_heat, ContinuumSpec, DoubleLimit,
};
use crate::dynamics::dephased_erasure;
use crate::erasure::{
    apply_plan, build_plan, max_erasure_probability, plan_for_error, tradeoff_curve,
    PhysicalContext, PlanMode,
};
use crate::error::{Error, Result};
use crate::oracle::{brute_force_best, random_unitary_bound_check, Objective};
use crate::quantum::{random_probabilities, C64};
use crate::thermo::{ladder_gap_for_pmax, qubit_landauer_gap, report, ThermoReport};

/// In-memory CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// 17 significant digits, scientific notation.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

fn report_fields(r: &ThermoReport) -> Vec<String> {
    vec![
        num(r.p_erase),
        num(r.dq),
        num(r.dw),
        num(r.ds),
        num(r.mutual_info),
        num(r.rel_entropy_r),
        opt(r.dl),
        opt(r.landauer_residual),
    ]
}

const REPORT_COLUMNS: [&str; 8] = [
    "p_erase",
    "dQ",
    "dW",
    "dS",
    "mutual_info",
    "rel_entropy_R",
    "dL",
    "landauer_residual",
];

fn with_report(lead: &[&'static str]) -> Vec<&'static str> {
    lead.iter().chain(REPORT_COLUMNS.iter()).copied().collect()
}

fn run_plan(ctx: &PhysicalContext, mode: PlanMode, delta: Option<f64>) -> Result<ThermoReport> {
    let plan = match delta {
        Some(d) => plan_for_error(ctx, d)?,
        None => build_plan(ctx, mode),
    };
    Ok(report(ctx, &apply_plan(ctx, &plan)?))
}

pub fn optimize(cfg: &Config) -> Result<Table> {
    let ctx = cfg.context()?;
    let mode = cfg.plan_mode()?;
    let r = run_plan(&ctx, mode, cfg.process.delta)?;
    let mut t = Table::new(&with_report(&["mode", "d_O", "d_R", "beta", "p_max"]));
    let name = if cfg.process.delta.is_some() { "tradeoff_step" } else { mode.name() };
    let mut row = vec![
        name.to_string(),
        ctx.d_o().to_string(),
        ctx.d_r().to_string(),
        num(ctx.beta()),
        num(max_erasure_probability(&ctx)),
    ];
    row.extend(report_fields(&r));
    t.push(row);
    Ok(t)
}

pub fn tradeoff(cfg: &Config) -> Result<Table> {
    let ctx = cfg.context()?;
    let curve = tradeoff_curve(&ctx);
    let mut t = Table::new(&["step", "delta", "dQ", "dW", "p_erase"]);
    for (j, p) in curve.points().iter().enumerate() {
        t.push(vec![j.to_string(), num(p.delta), num(p.heat), num(p.work), num(p.p_erase)]);
    }
    Ok(t)
}

pub fn sweep(cfg: &Config) -> Result<Table> {
    let base = cfg.reservoir()?;
    let sw = cfg.sweep.clone().unwrap_or_default();
    let betas = sw.betas.unwrap_or_else(|| vec![cfg.process.beta]);
    let sizes = sw.sizes.unwrap_or_else(|| vec![base.size()]);
    let mode = cfg.plan_mode()?;
    let grid: Vec<(usize, f64)> = sizes
        .iter()
        .flat_map(|&s| betas.iter().map(move |&b| (s, b)))
        .collect();
    let rows: Result<Vec<Vec<String>>> = grid
        .par_iter()
        .map(|&(size, beta)| {
            let res = if size == base.size() { base.clone() } else { base.resized(size)? };
            let ctx = cfg.context_with(&res, beta)?;
            let p_max = max_erasure_probability(&ctx);
            let r = run_plan(&ctx, mode, None)?;
            let mut row = vec![size.to_string(), ctx.d_r().to_string(), num(beta), num(p_max)];
            row.extend(report_fields(&r));
            if sw.match_ladder {
                let obj = ctx.object_populations().to_vec();
                let omega = ladder_gap_for_pmax(ctx.d_r(), beta, &obj, p_max)?;
                let lad = cfg.context_with(&ReservoirConfig::Ladder { d: ctx.d_r(), omega }, beta)?;
                let lr = run_plan(&lad, mode, None)?;
                row.extend([num(omega), num(lr.p_erase), opt(lr.dl)]);
            }
            Ok(row)
        })
        .collect();
    let mut head = with_report(&["size", "d_R", "beta", "p_max"]);
    if sw.match_ladder {
        head.extend(["ladder_omega", "ladder_p_erase", "ladder_dL"]);
    }
    let mut t = Table::new(&head);
    for r in rows? {
        t.push(r);
    }
    Ok(t)
}

pub fn dephase(cfg: &Config) -> Result<Table> {
    let dc = cfg
        .dephase
        .clone()
        .ok_or_else(|| Error::param("missing [dephase] section"))?;
    let base = cfg.reservoir()?;
    let dims = dc.dims.clone().unwrap_or_else(|| vec![base.size()]);
    let grid: Vec<(f64, usize)> = dc
        .gammas
        .iter()
        .flat_map(|&g| dims.iter().map(move |&d| (g, d)))
        .collect();
    let outs: Result<Vec<_>> = grid
        .par_iter()
        .map(|&(gamma, d)| {
            let res = if d == base.size() { base.clone() } else { base.resized(d)? };
            let ctx = cfg.context_with(&res, cfg.process.beta)?;
            Ok((gamma, ctx.d_r(), dephased_erasure(&ctx, gamma, dc.tau)?))
        })
        .collect();
    let outs = outs?;
    let mut t = Table::new(&[
        "gamma",
        "d_R",
        "tau",
        "p_erase",
        "dQ",
        "trace_error",
        "energy_drift",
        "unitality_error",
        "branch",
        "below_all_larger_d",
    ]);
    for (gamma, d, o) in &outs {
        // Marked for powers of two (d ≥ 4): heat below every larger d at this Γ.
        let mark = if *d >= 4 && d.is_power_of_two() {
            flag(
                outs.iter()
                    .filter(|(g, e, _)| g == gamma && e > d)
                    .all(|(_, _, q)| o.dq < q.dq),
            )
        } else {
            String::new()
        };
        t.push(vec![
            num(*gamma),
            d.to_string(),
            num(dc.tau),
            num(o.p_erase),
            num(o.dq),
            num(o.trace_error),
            num(o.energy_drift),
            num(o.unitality_error),
            o.branch.name().into(),
            mark,
        ]);
    }
    Ok(t)
}

pub fn closedform(cfg: &Config) -> Result<Table> {
    let c = cfg
        .closedform
        .as_ref()
        .ok_or_else(|| Error::param("missing [closedform] section"))?;
    Ok(match c {
        ClosedFormConfig::BiasedQubit { qs, beta } => {
            let mut t = Table::new(&["q", "beta", "dQ", "omega", "landauer_gap"]);
            for &q in qs {
                // The width diverges for a pure state.
                let width = if q == 1.0 { f64::INFINITY } else { biased_qubit_width(q, *beta)? };
                t.push(vec![
                    num(q),
                    num(*beta),
                    num(biased_qubit_heat(q, *beta)?),
                    num(width),
                    num(qubit_landauer_gap(q, *beta)?),
                ]);
            }
            t
        }
        ClosedFormConfig::HoLimit { d_o, omega, beta } => {
            let mut t = Table::new(&["d_O", "omega", "beta", "dQ"]);
            for &d in d_o {
                t.push(vec![d.to_string(), num(*omega), num(*beta), num(ho_limit_heat(d, *omega, *beta)?)]);
            }
            t
        }
        ClosedFormConfig::Continuum { d_o, norm, betas } => {
            let mut t = Table::new(&["d_O", "norm_H", "beta", "p_max", "dQ"]);
            for &b in betas {
                let s = ContinuumSpec::new(*d_o, *norm, b)?;
                t.push(vec![d_o.to_string(), num(*norm), num(b), num(continuum_pmax(s)), num(continuum_heat(s))]);
            }
            t
        }
        ClosedFormConfig::DoubleLimit {
            mode,
            scale,
            steps,
            d_o,
            beta,
        } => {
            let m = match mode {
                DoubleLimitMode::ConstantNorm => DoubleLimit::ConstantNorm { norm: *scale },
                DoubleLimitMode::GrowingNorm => DoubleLimit::GrowingNorm { omega_bar: *scale },
            };
            let mut t = Table::new(&["step", "d_R", "omega", "p_max", "dQ", "dL"]);
            for r in double_limit_sweep(m, *steps, *d_o, *beta)? {
                t.push(vec![r.step.to_string(), r.d.to_string(), num(r.omega), num(r.p_max), num(r.dq), num(r.dl)]);
            }
            t
        }
    })
}

fn qubit_target() -> Vec<C64> {
    vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
}

pub fn beyond(cfg: &Config) -> Result<Table> {
    let b = cfg
        .beyond
        .as_ref()
        .ok_or_else(|| Error::param("missing [beyond] section"))?;
    Ok(match *b {
        BeyondConfig::Auxiliary { lambda } => {
            let mut t = Table::new(&["state", "rank", "feasible", "target_weight", "dQ", "auxiliary_unchanged"]);
            for (name, rho) in example_auxiliary_states(lambda)? {
                let s = AuxiliaryScenario::new(rho, 2, 2, qubit_target())?;
                let plan = auxiliary_full_erasure(&s)?;
                let (rank, weight, heat) = match &plan {
                    Some(p) => (p.rank, p.object_marginal(2, 2)?.matrix()[(0, 0)].re, p.heat()),
                    None => (0, f64::NAN, f64::NAN),
                };
                t.push(vec![
                    name.into(),
                    rank.to_string(),
                    flag(plan.is_some()),
                    num(weight),
                    num(heat),
                    flag(classical_catalyst_check(&s)?),
                ]);
            }
            t
        }
        BeyondConfig::Correlated {
            gamma_plus,
            gamma_minus,
            beta_min,
            beta_max,
            points,
        } => {
            if !(beta_min > 0.0 && beta_max >= beta_min && points >= 1) {
                return Err(Error::param("need 0 < beta_min ≤ beta_max and points ≥ 1"));
            }
            let h = correlated_example_hamiltonian(gamma_plus, gamma_minus)?;
            let ratio = beta_max / beta_min;
            let betas: Vec<f64> = (0..points)
                .map(|k| {
                    let f = if points == 1 { 0.0 } else { k as f64 / (points - 1) as f64 };
                    beta_min * ratio.powf(f)
                })
                .collect();
            let mut t = Table::new(&["beta", "p_max", "dQ", "dS", "dQ_minus_dS_over_beta", "aligned"]);
            for beta in betas {
                let s = ThermalSubsystemScenario::new(h.clone(), 2, 2, beta, qubit_target())?;
                let r = thermal_subsystem_optimize(&s)?;
                t.push(vec![
                    num(beta),
                    num(r.p_max),
                    num(r.dq),
                    num(r.ds),
                    num(r.dq - r.ds / beta),
                    flag(hamiltonian_alignment_check(&s)?),
                ]);
            }
            t
        }
    })
}

pub fn oracle(cfg: &Config, seed: u64) -> Result<Table> {
    let oc = cfg.oracle.clone().unwrap_or_default();
    if oc.dims.is_empty() {
        return Err(Error::param("oracle.dims must not be empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (d_O, d_R, object populations, reservoir energies, β, sampling seed)
    type Spec = (usize, usize, Vec<f64>, Vec<f64>, f64, u64);
    let specs: Vec<Spec> = (0..oc.contexts)
        .map(|i| {
            let [d_o, d_r] = oc.dims[i % oc.dims.len()];
            let obj = random_probabilities(d_o, &mut rng);
            let mut e: Vec<f64> = (0..d_r).map(|_| rng.random_range(0.0..2.0)).collect();
            e.sort_by(f64::total_cmp);
            let beta = rng.random_range(0.2..3.0);
            (d_o, d_r, obj, e, beta, rng.random())
        })
        .collect();
    let rows: Result<Vec<Vec<Vec<String>>>> = specs
        .par_iter()
        .enumerate()
        .map(|(i, (d_o, d_r, obj, e, beta, sub))| {
            let ctx = PhysicalContext::diagonal(obj, e.clone(), *beta)?;
            let unitary = if oc.unitary_samples > 0 && d_o * d_r <= crate::oracle::MAX_SAMPLING {
                flag(random_unitary_bound_check(&ctx, oc.unitary_samples, *sub)?)
            } else {
                String::new()
            };
            let mut out = Vec::new();
            for (objective, mode, name) in [
                (Objective::MaxProb, PlanMode::MaxProb, "max_prob"),
                (Objective::MinHeat, PlanMode::MinHeat, "min_heat"),
                (Objective::MaxProbThenMinHeat, PlanMode::MaxProbMinHeat, "max_prob_min_heat"),
            ] {
                let best = brute_force_best(&ctx, objective)?;
                let r = report(&ctx, &apply_plan(&ctx, &build_plan(&ctx, mode))?);
                let ok = match objective {
                    Objective::MaxProb => (r.p_erase - best.p_erase).abs() <= 1e-12,
                    Objective::MinHeat => (r.dq - best.heat).abs() <= 1e-12,
                    Objective::MaxProbThenMinHeat => {
                        (r.p_erase - best.p_erase).abs() <= 1e-12 && (r.dq - best.heat).abs() <= 1e-12
                    }
                };
                out.push(vec![
                    i.to_string(),
                    d_o.to_string(),
                    d_r.to_string(),
                    num(*beta),
                    name.into(),
                    num(r.p_erase),
                    num(best.p_erase),
                    num(r.dq),
                    num(best.heat),
                    flag(ok),
                    unitary.clone(),
                ]);
            }
            Ok(out)
        })
        .collect();
    let mut t = Table::new(&[
        "context",
        "d_O",
        "d_R",
        "beta",
        "objective",
        "plan_p",
        "oracle_p",
        "plan_dQ",
        "oracle_dQ",
        "match",
        "unitary_check",
    ]);
    for r in rows?.into_iter().flatten() {
        t.push(r);
    }
    Ok(t)
}
