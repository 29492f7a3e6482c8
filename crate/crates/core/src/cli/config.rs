//! TOML configuration for the command-line runner.

use serde::Deserialize;

use crate::erasure::{PhysicalContext, PlanMode, Reservoir};
use crate::error::{Error, Result};
use crate::quantum::{CMatrix, DensityOperator, HermitianOperator, C64};
use crate::reservoirs::{spin_chain_spectrum, LadderSpec, SpinChainSpec};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub object: Option<ObjectConfig>,
    pub reservoir: Option<ReservoirConfig>,
    #[serde(default)]
    pub process: ProcessConfig,
    pub sweep: Option<SweepConfig>,
    pub dephase: Option<DephaseConfig>,
    pub closedform: Option<ClosedFormConfig>,
    pub beyond: Option<BeyondConfig>,
    pub oracle: Option<OracleConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectConfig {
    MaximallyMixed {
        dim: usize,
        #[serde(default)]
        hamiltonian: Option<Vec<f64>>,
    },
    Diagonal {
        populations: Vec<f64>,
        #[serde(default)]
        hamiltonian: Option<Vec<f64>>,
    },
    Explicit {
        real: Vec<Vec<f64>>,
        #[serde(default)]
        imag: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        hamiltonian: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReservoirConfig {
    Ladder { d: usize, omega: f64 },
    SpinChain { n: usize, theta: f64, j: f64 },
    Explicit { energies: Vec<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessConfig {
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "default_mode")]
    pub mode: String,
    /// Target erasure error; selects a point on the tradeoff curve.
    pub delta: Option<f64>,
}

impl Default for ProcessConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            mode: default_mode(),
            delta: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_mode() -> String {
    "max_prob_min_heat".into()
}

/// Grid over inverse temperature and reservoir size (`d` for ladders,
/// `n` for spin chains); unset axes fall back to the base configuration.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub betas: Option<Vec<f64>>,
    pub sizes: Option<Vec<usize>>,
    /// Also solve for the ladder of the same dimension and `p_max`.
    #[serde(default)]
    pub match_ladder: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephaseConfig {
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    #[serde(default = "one")]
    pub tau: f64,
    /// Ladder dimensions to sweep; defaults to the configured reservoir.
    pub dims: Option<Vec<usize>>,
}

fn default_gammas() -> Vec<f64> {
    vec![1.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "table", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClosedFormConfig {
    BiasedQubit { qs: Vec<f64>, beta: f64 },
    HoLimit { d_o: Vec<usize>, omega: f64, beta: f64 },
    Continuum { d_o: usize, norm: f64, betas: Vec<f64> },
    DoubleLimit {
        mode: DoubleLimitMode,
        #[serde(default = "one")]
        scale: f64,
        steps: usize,
        #[serde(default = "two")]
        d_o: usize,
        beta: f64,
    },
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleLimitMode {
    ConstantNorm,
    GrowingNorm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case", deny_unknown_fields)]
pub enum BeyondConfig {
    Auxiliary {
        #[serde(default = "default_lambda")]
        lambda: f64,
    },
    Correlated {
        gamma_plus: f64,
        gamma_minus: f64,
        #[serde(default = "default_beta_min")]
        beta_min: f64,
        #[serde(default = "default_beta_max")]
        beta_max: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
}

fn default_lambda() -> f64 {
    0.7
}
fn default_beta_min() -> f64 {
    0.01
}
fn default_beta_max() -> f64 {
    20.0
}
fn default_points() -> usize {
    40
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_contexts")]
    pub contexts: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<[usize; 2]>,
    #[serde(default)]
    pub unitary_samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            contexts: default_contexts(),
            dims: default_dims(),
            unitary_samples: 0,
        }
    }
}

fn default_contexts() -> usize {
    20
}

fn default_dims() -> Vec<[usize; 2]> {
    vec![[2, 2], [2, 3], [3, 2], [2, 4], [4, 2]]
}

/// Parses a configuration, reporting the offending key path on failure.
pub fn parse(text: &str) -> std::result::Result<Config, String> {
    let de = toml::Deserializer::parse(text).map_err(|e| e.to_string())?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        format!("{path}: {}", e.into_inner().message())
    })
}

impl Config {
    pub fn plan_mode(&self) -> Result<PlanMode> {
        self.process.mode.parse()
    }

    pub fn object(&self) -> Result<&ObjectConfig> {
        self.object.as_ref().ok_or_else(|| Error::param("missing [object] section"))
    }

    pub fn reservoir(&self) -> Result<&ReservoirConfig> {
        self.reservoir
            .as_ref()
            .ok_or_else(|| Error::param("missing [reservoir] section"))
    }

    pub fn context(&self) -> Result<PhysicalContext> {
        self.context_with(self.reservoir()?, self.process.beta)
    }

    pub fn context_with(&self, res: &ReservoirConfig, beta: f64) -> Result<PhysicalContext> {
        let (h, rho) = self.object()?.build()?;
        PhysicalContext::new(h, rho, res.build()?, beta)
    }
}

impl ObjectConfig {
    pub fn build(&self) -> Result<(HermitianOperator, DensityOperator)> {
        let (rho, ham) = match self {
            ObjectConfig::MaximallyMixed { dim, hamiltonian } => {
                (DensityOperator::maximally_mixed(*dim)?, hamiltonian)
            }
            ObjectConfig::Diagonal {
                populations,
                hamiltonian,
            } => (DensityOperator::from_diagonal(populations)?, hamiltonian),
            ObjectConfig::Explicit {
                real,
                imag,
                hamiltonian,
            } => {
                let d = real.len();
                let square = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
                if d == 0 || !square(real) || !imag.as_ref().is_none_or(square) {
                    return Err(Error::param("explicit object matrix must be square"));
                }
                let m = CMatrix::from_fn(d, d, |r, c| {
                    C64::new(real[r][c], imag.as_ref().map_or(0.0, |i| i[r][c]))
                });
                (DensityOperator::new(m)?, hamiltonian)
            }
        };
        let h = match ham {
            Some(e) if e.len() != rho.dim() => {
                return Err(Error::DimensionMismatch {
                    expected: rho.dim(),
                    found: e.len(),
                })
            }
            Some(e) => HermitianOperator::from_real_diagonal(e)?,
            None => HermitianOperator::zeros(rho.dim())?,
        };
        Ok((h, rho))
    }

    pub fn dim(&self) -> usize {
        match self {
            ObjectConfig::MaximallyMixed { dim, .. } => *dim,
            ObjectConfig::Diagonal { populations, .. } => populations.len(),
            ObjectConfig::Explicit { real, .. } => real.len(),
        }
    }
}

impl ReservoirConfig {
    pub fn build(&self) -> Result<Reservoir> {
        match *self {
            ReservoirConfig::Ladder { d, omega } => {
                Reservoir::from_energies(LadderSpec::new(d, omega)?.energies())
            }
            ReservoirConfig::SpinChain { n, theta, j } => {
                Reservoir::from_energies(spin_chain_spectrum(SpinChainSpec::new(n, theta, j)?)?)
            }
            ReservoirConfig::Explicit { ref energies } => Reservoir::from_energies(energies.clone()),
        }
    }

    /// The same family with a different size parameter.
    pub fn resized(&self, size: usize) -> Result<ReservoirConfig> {
        Ok(match *self {
            ReservoirConfig::Ladder { omega, .. } => ReservoirConfig::Ladder { d: size, omega },
            ReservoirConfig::SpinChain { theta, j, .. } => ReservoirConfig::SpinChain { n: size, theta, j },
            ReservoirConfig::Explicit { .. } => {
                return Err(Error::param("an explicit reservoir cannot be resized"))
            }
        })
    }

    pub fn size(&self) -> usize {
        match *self {
            ReservoirConfig::Ladder { d, .. } => d,
            ReservoirConfig::SpinChain { n, .. } => n,
            ReservoirConfig::Explicit { ref energies } => energies.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let c = parse(
            r#"
            [object]
            kind = "maximally_mixed"
            dim = 2
            [reservoir]
            kind = "ladder"
            d = 2
            omega = 1.0
            [process]
            beta = 1e6
            "#,
        )
        .unwrap();
        let ctx = c.context().unwrap();
        assert_eq!((ctx.d_o(), ctx.d_r()), (2, 2));
        assert_eq!(c.plan_mode().unwrap(), PlanMode::MaxProbMinHeat);
    }

    #[test]
    fn reports_key_path() {
        let e = parse("[reservoir]\nkind = \"ladder\"\nd = \"two\"\nomega = 1.0\n").unwrap_err();
        assert!(e.starts_with("reservoir"), "{e}");
        let e = parse("[process]\nbeta = 1.0\nbogus = 3\n").unwrap_err();
        assert!(e.contains("process") || e.contains("bogus"), "{e}");
    }

    #[test]
    fn explicit_object() {
        let c = parse(
            "[object]\nkind = \"explicit\"\nreal = [[0.5, 0.2], [0.2, 0.5]]\nhamiltonian = [0.0, 1.0]\n",
        )
        .unwrap();
        let (h, rho) = c.object().unwrap().build().unwrap();
        assert_eq!((h.dim(), rho.dim()), (2, 2));
        assert!(parse("[object]\nkind = \"explicit\"\nreal = [[1.0, 0.0]]\n")
            .unwrap()
            .object()
            .unwrap()
            .build()
            .is_err());
    }
}
