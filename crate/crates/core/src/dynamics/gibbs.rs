//! Exact stationary distribution of log-linear learning,
//! `μ(a|β) ∝ exp(β·Φ̂(a))`, by exhaustive enumeration.

use std::sync::Arc;

use serde::Serialize;

use crate::enumerate::{check_enumerable, walk_range, PotentialLevels};
use crate::equilibrium::DEGENERACY_TOLERANCE;
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::graph::Graph;

/// Largest `N` for which [`gibbs_exact`] also returns the per-state table.
pub const PER_STATE_MAX_N: usize = 16;

/// Width of the final bisection bracket in [`beta_min`].
pub const BETA_MIN_WIDTH: f64 = 1e-6;

const BETA_BRACKET_LIMIT: f64 = 1e12;

/// Streaming `log Σ exp(xᵢ)` with a running maximum.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        self.max + self.scaled.ln()
    }
}

/// Which consensus profile carries the maximum potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimalProfile {
    /// `θ > N/(2K)`: everyone inactive.
    Zeros,
    /// `θ < N/(2K)`: everyone active.
    Ones,
    /// `θ = N/(2K)`: the two consensus profiles tie.
    Both,
}

impl OptimalProfile {
    pub fn of(spec: &GameSpec) -> Self {
        let gap = spec.theta() - spec.threshold();
        if gap.abs() <= DEGENERACY_TOLERANCE {
            Self::Both
        } else if gap > 0.0 {
            Self::Zeros
        } else {
            Self::Ones
        }
    }

    pub fn contains(self, ones: usize, n: usize) -> bool {
        match self {
            Self::Zeros => ones == 0,
            Self::Ones => ones == n,
            Self::Both => ones == 0 || ones == n,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsTable {
    pub beta: f64,
    /// `log Σ_a exp(β·Φ̂(a))`.
    pub log_partition: f64,
    pub consensus_mass_0: f64,
    pub consensus_mass_1: f64,
    /// `E^μ[Φ̂]`.
    pub expected_potential: f64,
    /// `μ(a|β)` indexed by the profile's integer encoding, for `N ≤ 16`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<f64>>,
}

/// A game together with its `(m, q)` histogram, answering Gibbs queries at
/// any `β` without re-enumerating.
#[derive(Debug, Clone)]
pub struct GibbsModel {
    spec: GameSpec,
    levels: PotentialLevels,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    Ok(())
}

impl GibbsModel {
    pub fn new(spec: GameSpec) -> Result<Self> {
        let levels = PotentialLevels::enumerate(spec.graph())?;
        Ok(Self { spec, levels })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn optimal_profile(&self) -> OptimalProfile {
        OptimalProfile::of(&self.spec)
    }

    pub fn log_partition(&self, beta: f64) -> f64 {
        let mut lse = LogSumExp::default();
        for (m, q, count) in self.levels.iter() {
            lse.push((count as f64).ln() + beta * self.spec.normalized_from_counts(m, q));
        }
        lse.value()
    }

    /// Consensus masses, expected potential and partition function at `beta`.
    pub fn table(&self, beta: f64) -> Result<GibbsTable> {
        check_beta(beta)?;
        let log_z = self.log_partition(beta);
        let expected_potential = self
            .levels
            .iter()
            .map(|(m, q, count)| {
                let phi = self.spec.normalized_from_counts(m, q);
                count as f64 * phi * (beta * phi - log_z).exp()
            })
            .sum();
        let n = self.spec.n();
        let ones_phi = self
            .spec
            .normalized_from_counts(n, (n * self.spec.k()) as u64);
        Ok(GibbsTable {
            beta,
            log_partition: log_z,
            consensus_mass_0: (-log_z).exp(),
            consensus_mass_1: (beta * ones_phi - log_z).exp(),
            expected_potential,
            states: None,
        })
    }

    /// `μ(a*|β)`; on the threshold, the combined mass of both consensus profiles.
    pub fn optimal_mass(&self, beta: f64) -> f64 {
        let log_z = self.log_partition(beta);
        let n = self.spec.n();
        let ones_phi = self
            .spec
            .normalized_from_counts(n, (n * self.spec.k()) as u64);
        let zeros = (-log_z).exp();
        let ones = (beta * ones_phi - log_z).exp();
        match self.optimal_profile() {
            OptimalProfile::Zeros => zeros,
            OptimalProfile::Ones => ones,
            OptimalProfile::Both => zeros + ones,
        }
    }

    /// Smallest `β` with `μ(a*|β) ≥ 1 − δ`, to within [`BETA_MIN_WIDTH`].
    ///
    /// The returned value satisfies the target and `β − BETA_MIN_WIDTH` does
    /// not (or it is 0).
    pub fn beta_min(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        if self.optimal_profile() == OptimalProfile::Both {
            return Err(Error::DegenerateTheta {
                theta: self.spec.theta(),
                threshold: self.spec.threshold(),
            });
        }
        let target = 1.0 - delta;
        if self.optimal_mass(0.0) >= target {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.optimal_mass(hi) < target {
            lo = hi;
            hi *= 2.0;
            if hi > BETA_BRACKET_LIMIT {
                return Err(Error::InvalidParameter(format!(
                    "mass 1 - {delta} not reached for beta up to {BETA_BRACKET_LIMIT:e}"
                )));
            }
        }
        while hi - lo > BETA_MIN_WIDTH {
            let mid = 0.5 * (lo + hi);
            if self.optimal_mass(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Exact Gibbs table; includes per-state masses for `N ≤ 16`.
pub fn gibbs_exact(spec: &GameSpec, beta: f64) -> Result<GibbsTable> {
    check_beta(beta)?;
    check_enumerable(spec.n())?;
    let model = GibbsModel::new(spec.clone())?;
    let mut table = model.table(beta)?;
    let n = spec.n();
    if n <= PER_STATE_MAX_N {
        let mut states = vec![0.0; 1 << n];
        let log_z = table.log_partition;
        walk_range(spec.graph(), 0..1 << n, |w| {
            let phi = spec.normalized_from_counts(w.ones(), w.quadratic());
            states[w.state() as usize] = (beta * phi - log_z).exp();
        });
        table.states = Some(states);
    }
    Ok(table)
}

/// `E^μ[Φ̂]` at `beta`.
pub fn expected_potential(spec: &GameSpec, beta: f64) -> Result<f64> {
    check_enumerable(spec.n())?;
    Ok(GibbsModel::new(spec.clone())?
        .table(beta)?
        .expected_potential)
}

/// See [`GibbsModel::beta_min`].
pub fn beta_min(spec: &GameSpec, delta: f64) -> Result<f64> {
    GibbsModel::new(spec.clone())?.beta_min(delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalMass {
    pub value: f64,
    pub optimal: OptimalProfile,
    pub degenerate: bool,
}

/// `g(β, K) = μ_K(a*|β)` on the canonical circulant graph of degree `k`.
pub fn g_of_beta_k(n: usize, k: usize, theta: f64, beta: f64) -> Result<OptimalMass> {
    check_beta(beta)?;
    let graph = Graph::circulant(n, k)?;
    let model = GibbsModel::new(GameSpec::new(Arc::new(graph), theta)?)?;
    let optimal = model.optimal_profile();
    Ok(OptimalMass {
        value: model.optimal_mass(beta),
        optimal,
        degenerate: optimal == OptimalProfile::Both,
    })
}
