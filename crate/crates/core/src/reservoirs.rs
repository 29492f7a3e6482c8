//! Reservoir and object Hamiltonians: the uniform ladder and the Heisenberg
//! chain in a linear field gradient.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::quantum::{CMatrix, HermitianOperator, C64};

/// Largest chain for which the dense Hamiltonian is built.
pub const MAX_DENSE_CHAIN: usize = 14;
/// Largest ladder for which a dense operator is materialised.
pub const MAX_DENSE_LADDER: usize = 4096;

/// Uniformly spaced spectrum `0, ω, 2ω, …, (d-1)ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderSpec {
    pub d: usize,
    pub omega: f64,
}

impl LadderSpec {
    pub fn new(d: usize, omega: f64) -> Result<Self> {
        let s = Self { d, omega };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::param("ladder dimension must be at least 1"));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::param(format!("ladder gap must be positive, got {}", self.omega)));
        }
        Ok(())
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.d).map(|m| self.omega * m as f64).collect()
    }

    pub fn norm(&self) -> f64 {
        self.omega * (self.d as f64 - 1.0)
    }
}

pub fn ladder_hamiltonian(spec: LadderSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    if spec.d > MAX_DENSE_LADDER {
        return Err(Error::GuardExceeded {
            what: "dense ladder dimension",
            limit: MAX_DENSE_LADDER,
            actual: spec.d,
        });
    }
    HermitianOperator::from_real_diagonal(&spec.energies())
}

/// `Σ_k (kΘ) σ_z^k + J Σ_k σ^k·σ^{k+1}` on `N` spins, sites numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainSpec {
    pub n: usize,
    pub theta: f64,
    pub j: f64,
}

impl SpinChainSpec {
    pub fn new(n: usize, theta: f64, j: f64) -> Result<Self> {
        let s = Self { n, theta, j };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("chain length must be at least 1"));
        }
        if !self.theta.is_finite() || !self.j.is_finite() {
            return Err(Error::param("chain couplings must be finite"));
        }
        if self.n > MAX_DENSE_CHAIN {
            return Err(Error::GuardExceeded {
                what: "spin chain length",
                limit: MAX_DENSE_CHAIN,
                actual: self.n,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    // Site k (1-based) is bit N-k of the basis index, so site 1 is the
    // leftmost Kronecker factor. Bit value 0 is spin up (σ_z = +1).
    fn z(&self, state: usize, k: usize) -> f64 {
        if state >> (self.n - k) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn diagonal(&self, state: usize) -> f64 {
        let mut e = 0.0;
        for k in 1..=self.n {
            e += k as f64 * self.theta * self.z(state, k);
        }
        for k in 1..self.n {
            e += self.j * self.z(state, k) * self.z(state, k + 1);
        }
        e
    }

    /// Off-diagonal flips: σxσx + σyσy exchanges antiparallel neighbours
    /// with amplitude 2.
    fn flips(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        (1..self.n).filter_map(move |k| {
            let a = self.n - k;
            let b = self.n - k - 1;
            if (state >> a & 1) != (state >> b & 1) {
                Some(state ^ (1 << a) ^ (1 << b))
            } else {
                None
            }
        })
    }
}

pub fn spin_chain_hamiltonian(spec: SpinChainSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    let d = spec.dim();
    let mut m = CMatrix::zeros(d, d);
    for s in 0..d {
        m[(s, s)] = C64::new(spec.diagonal(s), 0.0);
        for t in spec.flips(s) {
            m[(t, s)] += C64::new(2.0 * spec.j, 0.0);
        }
    }
    HermitianOperator::new(m)
}

/// Spectrum of the chain (ascending), assembled from the fixed-magnetisation
/// blocks. Avoids the full `2^N` diagonalisation.
pub fn spin_chain_spectrum(spec: SpinChainSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let d = spec.dim();
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); spec.n + 1];
    for s in 0..d {
        sectors[s.count_ones() as usize].push(s);
    }
    let mut out = Vec::with_capacity(d);
    for states in sectors {
        let n = states.len();
        let pos = |s: usize| states.binary_search(&s).expect("flip stays in sector");
        let mut block = DMatrix::<f64>::zeros(n, n);
        for (i, &s) in states.iter().enumerate() {
            block[(i, i)] = spec.diagonal(s);
            for t in spec.flips(s) {
                block[(pos(t), i)] += 2.0 * spec.j;
            }
        }
        out.extend(SymmetricEigen::new(block).eigenvalues.iter().copied());
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Total magnetisation `Σ_k σ_z^k`.
pub fn total_magnetisation(n: usize) -> Result<HermitianOperator> {
    let spec = SpinChainSpec::new(n, 1.0, 0.0)?;
    let diag: Vec<f64> = (0..spec.dim())
        .map(|s| (1..=n).map(|k| spec.z(s, k)).sum())
        .collect();
    HermitianOperator::from_real_diagonal(&diag)
}

pub fn zero_hamiltonian(d: usize) -> Result<HermitianOperator> {
    HermitianOperator::zeros(d)
}
