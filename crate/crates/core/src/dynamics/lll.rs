//! Asynchronous log-linear learning.
//!
//! Each step picks one agent uniformly at random; it plays 1 with probability
//! `exp(β·Uᵢ(1)) / (exp(β·Uᵢ(0)) + exp(β·Uᵢ(1)))` against the current actions
//! of its neighbours, and everyone else keeps their action.
//!
//! Replica `r` of a run with master seed `s` draws from the ChaCha8 stream
//! `r` of the generator keyed by `s`, so replicas are independent and any one
//! of them can be reproduced alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gibbs::OptimalProfile;
use crate::enumerate::check_enumerable;
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::profile::ActionProfile;

/// Largest `N` for which simulations record a full empirical distribution.
pub const EMPIRICAL_MAX_N: usize = 16;

/// Largest `N` accepted by [`transition_matrix`].
pub const TRANSITION_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    UniformRandom,
    Fixed(ActionProfile),
}

#[derive(Debug, Clone)]
pub struct LllConfig {
    pub beta: f64,
    pub steps: u64,
    pub seed: u64,
    pub replicas: usize,
    pub initial: InitialProfile,
    /// Steps discarded before recording; `None` means 1% of `steps`, at least
    /// 10⁴, and never more than half the run.
    pub burn_in: Option<u64>,
}

impl LllConfig {
    pub fn new(beta: f64, steps: u64, seed: u64) -> Self {
        Self {
            beta,
            steps,
            seed,
            replicas: 1,
            initial: InitialProfile::UniformRandom,
            burn_in: None,
        }
    }

    pub fn with_replicas(mut self, replicas: usize) -> Self {
        self.replicas = replicas;
        self
    }

    pub fn with_initial(mut self, initial: InitialProfile) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = Some(burn_in);
        self
    }

    pub fn effective_burn_in(&self) -> u64 {
        self.burn_in
            .unwrap_or_else(|| (self.steps / 100).max(10_000).min(self.steps / 2))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be >= 1".into()));
        }
        if self.replicas == 0 {
            return Err(Error::InvalidParameter("replicas must be >= 1".into()));
        }
        if self.effective_burn_in() >= self.steps {
            return Err(Error::InvalidParameter(
                "burn-in must be shorter than the run".into(),
            ));
        }
        if let InitialProfile::Fixed(a) = &self.initial {
            if a.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: a.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStats {
    /// Fraction of recorded steps spent at the optimal profile (either
    /// consensus profile when `θ = N/(2K)`).
    pub visit_fraction_at_astar: f64,
    pub optimal: OptimalProfile,
    /// Last profile of each replica.
    pub final_profiles: Vec<ActionProfile>,
    /// Visits per profile over all replicas, indexed by integer encoding;
    /// only for `N ≤ 16`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_distribution: Option<Vec<u64>>,
    /// Recorded steps per replica.
    pub recorded_steps: u64,
    pub burn_in: u64,
    pub replicas: usize,
}

impl TrajectoryStats {
    pub fn empirical_probabilities(&self) -> Option<Vec<f64>> {
        let counts = self.empirical_distribution.as_ref()?;
        let total: u64 = counts.iter().sum();
        Some(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }
}

/// Total variation distance `½ Σ |p − q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Probability that agent `i`, on revising, plays 1.
pub fn revision_probability(spec: &GameSpec, a: &ActionProfile, i: usize, beta: f64) -> f64 {
    let k = spec.k() as f64;
    let active = spec.graph().active_neighbors(a, i) as f64;
    let logit_one = beta * (active / k - spec.activation_cost());
    let logit_zero = 0.0;
    let top = logit_one.max(logit_zero);
    let w1 = (logit_one - top).exp();
    let w0 = (logit_zero - top).exp();
    w1 / (w0 + w1)
}

/// One asynchronous revision; returns the agent that revised.
pub fn lll_step<R: Rng + ?Sized>(
    spec: &GameSpec,
    a: &mut ActionProfile,
    beta: f64,
    rng: &mut R,
) -> usize {
    let i = rng.random_range(0..spec.n());
    let p1 = revision_probability(spec, a, i, beta);
    a.set(i, rng.random::<f64>() < p1);
    i
}

/// Generator for replica `replica` of a run seeded with `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

struct ReplicaRun {
    at_optimum: u64,
    counts: Option<Vec<u64>>,
    last: ActionProfile,
}

fn run_replica(
    spec: &GameSpec,
    cfg: &LllConfig,
    replica: usize,
    optimal: OptimalProfile,
) -> ReplicaRun {
    let n = spec.n();
    let mut rng = replica_rng(cfg.seed, replica as u64);
    let mut a = match &cfg.initial {
        InitialProfile::Fixed(p) => p.clone(),
        InitialProfile::UniformRandom => {
            let bits: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
            ActionProfile::from_bools(&bits)
        }
    };
    let mut counts = (n <= EMPIRICAL_MAX_N).then(|| vec![0u64; 1 << n]);
    let mut at_optimum = 0;
    let burn_in = cfg.effective_burn_in();
    for t in 0..cfg.steps {
        lll_step(spec, &mut a, cfg.beta, &mut rng);
        if t < burn_in {
            continue;
        }
        if optimal.contains(a.ones_count(), n) {
            at_optimum += 1;
        }
        if let Some(c) = counts.as_mut() {
            c[a.index().expect("n <= 16") as usize] += 1;
        }
    }
    ReplicaRun {
        at_optimum,
        counts,
        last: a,
    }
}

/// Runs `cfg.replicas` independent chains. Output depends only on `spec`
/// and `cfg`.
pub fn simulate(spec: &GameSpec, cfg: &LllConfig) -> Result<TrajectoryStats> {
    cfg.validate(spec.n())?;
    let optimal = OptimalProfile::of(spec);
    let runs: Vec<ReplicaRun> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| run_replica(spec, cfg, r, optimal))
        .collect();
    let burn_in = cfg.effective_burn_in();
    let recorded_steps = cfg.steps - burn_in;
    let at_optimum: u64 = runs.iter().map(|r| r.at_optimum).sum();
    let empirical_distribution = runs.iter().map(|r| r.counts.clone()).reduce(|a, b| {
        let (mut a, b) = (a?, b?);
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        Some(a)
    });
    Ok(TrajectoryStats {
        visit_fraction_at_astar: at_optimum as f64 / (recorded_steps * cfg.replicas as u64) as f64,
        optimal,
        final_profiles: runs.into_iter().map(|r| r.last).collect(),
        empirical_distribution: empirical_distribution.flatten(),
        recorded_steps,
        burn_in,
        replicas: cfg.replicas,
    })
}

/// Dense row-major transition matrix of the learning chain over all `2^N`
/// profiles (row = current profile, by integer encoding).
pub fn transition_matrix(spec: &GameSpec, beta: f64) -> Result<Vec<f64>> {
    let n = spec.n();
    check_enumerable(n)?;
    if n > TRANSITION_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: TRANSITION_MAX_N,
        });
    }
    let size = 1usize << n;
    let mut p = vec![0.0; size * size];
    let pick = 1.0 / n as f64;
    for s in 0..size {
        let a = ActionProfile::from_index(n, s as u64);
        for i in 0..n {
            let p1 = revision_probability(spec, &a, i, beta);
            let with_one = s | (1 << i);
            let with_zero = s & !(1 << i);
            p[s * size + with_one] += pick * p1;
            p[s * size + with_zero] += pick * (1.0 - p1);
        }
    }
    Ok(p)
}
