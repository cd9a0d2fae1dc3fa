//! Brute-force Nash equilibria and potential maximizers, and the spectral
//! relaxation check for the maximizer characterisation.

use serde::Serialize;

use crate::enumerate::{check_enumerable, fold_profiles, GrayWalker};
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::profile::ActionProfile;

/// Profiles within this distance of the maximum potential count as maximizers.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// A unilateral deviation must gain more than this to break an equilibrium.
pub const NASH_TOLERANCE: f64 = 1e-12;

/// Distance from `N/(2K)` under which `θ` is treated as the threshold itself.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Agreement required between the relaxed and the binary optimum.
pub const RELAXATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub n: usize,
    pub k: usize,
    pub theta: f64,
    pub nash_profiles: Vec<ActionProfile>,
    pub maximizer_profiles: Vec<ActionProfile>,
    pub max_potential: f64,
    pub theta_threshold: f64,
    /// `θ` equals `N/(2K)`, so both consensus profiles tie.
    pub degenerate: bool,
}

impl EquilibriumReport {
    pub fn maximizers_are_nash(&self) -> bool {
        self.maximizer_profiles
            .iter()
            .all(|m| self.nash_profiles.contains(m))
    }

    /// Equilibria that do not maximize the potential.
    pub fn non_maximizing_nash(&self) -> Vec<&ActionProfile> {
        self.nash_profiles
            .iter()
            .filter(|p| !self.maximizer_profiles.contains(p))
            .collect()
    }
}

pub fn is_degenerate(spec: &GameSpec) -> bool {
    (spec.theta() - spec.threshold()).abs() <= DEGENERACY_TOLERANCE
}

fn is_nash(spec: &GameSpec, w: &GrayWalker<'_>) -> bool {
    let k = spec.k() as f64;
    let cost = spec.activation_cost();
    (0..spec.n()).all(|i| {
        let gain_if_active = f64::from(w.active_neighbors(i)) / k - cost;
        let deviation_gain = if w.is_active(i) {
            -gain_if_active
        } else {
            gain_if_active
        };
        deviation_gain <= NASH_TOLERANCE
    })
}

fn potential_at(spec: &GameSpec, w: &GrayWalker<'_>) -> f64 {
    spec.theta() * spec.k() as f64 / 2.0 + spec.normalized_from_counts(w.ones(), w.quadratic())
}

fn to_profiles(n: usize, mut states: Vec<u64>) -> Vec<ActionProfile> {
    states.sort_unstable();
    states
        .into_iter()
        .map(|s| ActionProfile::from_index(n, s))
        .collect()
}

/// Every pure Nash equilibrium, ordered by integer encoding.
pub fn enumerate_nash(spec: &GameSpec) -> Result<Vec<ActionProfile>> {
    let states = fold_profiles(
        spec.graph(),
        Vec::new,
        |acc, w| {
            if is_nash(spec, w) {
                acc.push(w.state());
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    Ok(to_profiles(spec.n(), states))
}

#[derive(Debug, Clone)]
struct Best {
    value: f64,
    states: Vec<(u64, f64)>,
}

impl Best {
    fn empty() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            states: Vec::new(),
        }
    }

    fn offer(&mut self, state: u64, value: f64) {
        if value > self.value {
            self.value = value;
            self.states.retain(|&(_, v)| v >= value - TIE_TOLERANCE);
        }
        if value >= self.value - TIE_TOLERANCE {
            self.states.push((state, value));
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (s, v) in other.states {
            self.offer(s, v);
        }
        self
    }
}

/// Exact argmax of the potential together with all Nash equilibria.
pub fn enumerate_maximizers(spec: &GameSpec) -> Result<EquilibriumReport> {
    let (best, nash) = fold_profiles(
        spec.graph(),
        || (Best::empty(), Vec::new()),
        |(best, nash), w| {
            best.offer(w.state(), potential_at(spec, w));
            if is_nash(spec, w) {
                nash.push(w.state());
            }
        },
        |(b1, mut n1), (b2, n2)| {
            n1.extend(n2);
            (b1.merge(b2), n1)
        },
    )?;
    let n = spec.n();
    Ok(EquilibriumReport {
        n,
        k: spec.k(),
        theta: spec.theta(),
        nash_profiles: to_profiles(n, nash),
        maximizer_profiles: to_profiles(n, best.states.iter().map(|s| s.0).collect()),
        max_potential: best.value,
        theta_threshold: spec.threshold(),
        degenerate: is_degenerate(spec),
    })
}

/// Maximum potential over all binary profiles.
pub fn max_potential(spec: &GameSpec) -> Result<f64> {
    fold_profiles(
        spec.graph(),
        || f64::NEG_INFINITY,
        |best, w| *best = best.max(potential_at(spec, w)),
        f64::max,
    )
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RelaxationReport {
    pub lambda_1: f64,
    /// `θK/2 + N·max(0, λ₁/(2K) − Kθ/N)`: the optimum over the ball `‖c‖² ≤ N`.
    pub relaxed_optimum: f64,
    pub binary_optimum: f64,
    pub exact: bool,
}

/// Compares the spherical relaxation of the potential maximization with the
/// brute-force binary optimum.
pub fn verify_relaxation(spec: &GameSpec) -> Result<RelaxationReport> {
    check_enumerable(spec.n())?;
    let spectrum = spec.graph().spectrum()?;
    if spectrum.multiplicity_of_top > 1 {
        return Err(Error::Disconnected);
    }
    let lambda_1 = spectrum.largest();
    let n = spec.n() as f64;
    let k = spec.k() as f64;
    let leading = lambda_1 / (2.0 * k) - spec.activation_cost();
    let relaxed_optimum = spec.theta() * k / 2.0 + leading.max(0.0) * n;
    let binary_optimum = max_potential(spec)?;
    Ok(RelaxationReport {
        lambda_1,
        relaxed_optimum,
        binary_optimum,
        exact: (relaxed_optimum - binary_optimum).abs() <= RELAXATION_TOLERANCE,
    })
}
