//! Payoffs, utilities and the exact potential of the networked coordination
//! game on a K-regular graph.
//!
//! An active agent pays `θ/N` per neighbour and earns `1/K` from every active
//! neighbour. On a regular graph the game has the exact potential
//!
//! ```text
//! Φ(a) = θK/2 − (θK/N)·Σ aᵢ + aᵀAa/(2K)
//! ```
//!
//! and [`GameSpec::normalized_potential`] drops the constant `θK/2`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::ActionProfile;

/// Payoffs of one pairwise interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BimatrixOutcome {
    pub payoff_i: f64,
    pub payoff_j: f64,
}

#[derive(Debug, Clone)]
pub struct GameSpec {
    graph: Arc<Graph>,
    theta: f64,
}

#[inline]
fn bit(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl GameSpec {
    /// `theta` is the task difficulty; any finite value is accepted.
    pub fn new(graph: impl Into<Arc<Graph>>, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be finite, got {theta}"
            )));
        }
        Ok(Self {
            graph: graph.into(),
            theta,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// `N/(2K)`: below it the all-ones profile maximizes the potential, above
    /// it the all-zeros profile does.
    pub fn threshold(&self) -> f64 {
        self.n() as f64 / (2.0 * self.k() as f64)
    }

    /// Per-neighbour cost `θ/N`.
    fn unit_cost(&self) -> f64 {
        self.theta / self.n() as f64
    }

    /// `Kθ/N`, the marginal potential cost of one more active agent.
    pub(crate) fn activation_cost(&self) -> f64 {
        self.k() as f64 * self.theta / self.n() as f64
    }

    /// `V(aᵢ, aⱼ) = aᵢ(aⱼ/K − θ/N)`.
    pub fn pairwise_payoff(&self, a_i: bool, a_j: bool) -> f64 {
        bit(a_i) * (bit(a_j) / self.k() as f64 - self.unit_cost())
    }

    pub fn bimatrix(&self, a_i: bool, a_j: bool) -> BimatrixOutcome {
        BimatrixOutcome {
            payoff_i: self.pairwise_payoff(a_i, a_j),
            payoff_j: self.pairwise_payoff(a_j, a_i),
        }
    }

    /// Pairwise potential `φ(aᵢ, aⱼ) = aᵢaⱼ/K + (1 − aᵢ − aⱼ)θ/N`.
    pub fn pairwise_potential(&self, a_i: bool, a_j: bool) -> f64 {
        bit(a_i) * bit(a_j) / self.k() as f64 + (1.0 - bit(a_i) - bit(a_j)) * self.unit_cost()
    }

    fn check_vertex(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: i,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `Uᵢ(a) = aᵢ(#active neighbours/K − Kθ/N)`.
    pub fn utility(&self, a: &ActionProfile, i: usize) -> Result<f64> {
        self.graph.check_profile(a)?;
        self.check_vertex(i)?;
        Ok(self.utility_unchecked(a, i))
    }

    #[inline]
    pub(crate) fn utility_unchecked(&self, a: &ActionProfile, i: usize) -> f64 {
        if !a.get(i) {
            return 0.0;
        }
        let active = self.graph.active_neighbors(a, i) as f64;
        active / self.k() as f64 - self.activation_cost()
    }

    /// `Uᵢ(a) = Σ_{j∈𝒩ᵢ} V(aᵢ, aⱼ)`, summed edge by edge.
    pub fn utility_pairwise(&self, a: &ActionProfile, i: usize) -> Result<f64> {
        self.graph.check_profile(a)?;
        self.check_vertex(i)?;
        Ok(self
            .graph
            .neighbors(i)
            .iter()
            .map(|&j| self.pairwise_payoff(a.get(i), a.get(j)))
            .sum())
    }

    /// Potential from the closed form in `m = ‖a‖₁` and `q = aᵀAa`.
    pub fn potential(&self, a: &ActionProfile) -> Result<f64> {
        let q = self.graph.quadratic_form(a)?;
        Ok(self.theta * self.k() as f64 / 2.0 + self.normalized_from_counts(a.ones_count(), q))
    }

    /// `Φ(a) = ½ Σᵢ Σ_{j∈𝒩ᵢ} φ(aᵢ, aⱼ)`.
    pub fn potential_pairwise(&self, a: &ActionProfile) -> Result<f64> {
        self.graph.check_profile(a)?;
        let mut total = 0.0;
        for i in 0..self.n() {
            for &j in self.graph.neighbors(i) {
                total += self.pairwise_potential(a.get(i), a.get(j));
            }
        }
        Ok(0.5 * total)
    }

    /// `Φ̂(a) = −(Kθ/N)Σ aᵢ + aᵀAa/(2K)`; the potential without its constant.
    pub fn normalized_potential(&self, a: &ActionProfile) -> Result<f64> {
        let q = self.graph.quadratic_form(a)?;
        Ok(self.normalized_from_counts(a.ones_count(), q))
    }

    #[inline]
    pub(crate) fn normalized_from_counts(&self, ones: usize, quadratic: u64) -> f64 {
        -self.activation_cost() * ones as f64 + quadratic as f64 / (2.0 * self.k() as f64)
    }

    /// `(ΔU, ΔΦ)` for agent `i` switching its action in `a`, each measured as
    /// new minus old. The two agree for an exact potential.
    pub fn potential_difference_check(&self, a: &ActionProfile, i: usize) -> Result<(f64, f64)> {
        self.graph.check_profile(a)?;
        self.check_vertex(i)?;
        let b = a.flipped(i);
        let du = self.utility_pairwise(&b, i)? - self.utility_pairwise(a, i)?;
        let dphi = self.potential(&b)? - self.potential(a)?;
        Ok((du, dphi))
    }

    /// Pure equilibria of the two-player game between agents of degrees
    /// `deg_i` and `deg_j` in this network.
    pub fn bimatrix_nash_set(&self, deg_i: usize, deg_j: usize) -> Vec<(bool, bool)> {
        bimatrix_nash_set(self.n(), self.theta, deg_i, deg_j)
    }
}

/// Pure equilibria of the pairwise game with `M = N / max(deg_i, deg_j)`:
/// `{(0,0)}` above `M`, both consensus pairs on `[0, M]`, `{(1,1)}` below 0.
pub fn bimatrix_nash_set(n: usize, theta: f64, deg_i: usize, deg_j: usize) -> Vec<(bool, bool)> {
    assert!(deg_i >= 1 && deg_j >= 1, "degrees must be positive");
    let m = n as f64 / deg_i.max(deg_j) as f64;
    if theta > m {
        vec![(false, false)]
    } else if theta >= 0.0 {
        vec![(false, false), (true, true)]
    } else {
        vec![(true, true)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cycle4(theta: f64) -> GameSpec {
        GameSpec::new(Graph::circulant(4, 2).unwrap(), theta).unwrap()
    }

    fn p(s: &str) -> ActionProfile {
        s.parse().unwrap()
    }

    #[test]
    fn pairwise_payoff_examples() {
        let g = GameSpec::new(Graph::circulant(20, 10).unwrap(), 5.1).unwrap();
        assert_eq!(g.pairwise_payoff(false, true), 0.0);
        assert!((g.pairwise_payoff(true, true) - (-0.155)).abs() < 1e-15);
        let g = GameSpec::new(Graph::circulant(20, 4).unwrap(), 3.0).unwrap();
        assert!((g.pairwise_payoff(true, false) - (-0.15)).abs() < 1e-15);
    }

    #[test]
    fn utility_examples() {
        let g = cycle4(1.0);
        assert_eq!(g.utility(&p("0111"), 0).unwrap(), 0.0);
        assert!((g.utility(&p("1111"), 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((g.utility(&p("1000"), 0).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(
            g.utility(&p("1000"), 4),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            g.utility(&p("100"), 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    /// Brute-force pure equilibria of the 2×2 game with general degrees.
    fn nash_oracle(n: usize, theta: f64, di: usize, dj: usize) -> Vec<(bool, bool)> {
        let v = |a: bool, b: bool, d: usize| bit(a) * (bit(b) / d as f64 - theta / n as f64);
        let mut out = Vec::new();
        for (ai, aj) in [(false, false), (true, true), (true, false), (false, true)] {
            let i_ok = v(ai, aj, di) >= v(!ai, aj, di) - 1e-12;
            let j_ok = v(aj, ai, dj) >= v(!aj, ai, dj) - 1e-12;
            if i_ok && j_ok {
                out.push((ai, aj));
            }
        }
        out
    }

    #[test]
    fn nash_set_branches() {
        assert_eq!(bimatrix_nash_set(20, 5.1, 10, 10), vec![(false, false)]);
        assert_eq!(
            bimatrix_nash_set(20, 1.0, 10, 10),
            vec![(false, false), (true, true)]
        );
        assert_eq!(bimatrix_nash_set(20, -1.0, 10, 10), vec![(true, true)]);
        assert_eq!(bimatrix_nash_set(20, 0.0, 10, 10).len(), 2);
        assert_eq!(bimatrix_nash_set(20, 2.0, 10, 10).len(), 2);
    }

    #[test]
    fn nash_set_matches_brute_force() {
        for &(n, di, dj) in &[(20, 10, 10), (20, 4, 10), (7, 2, 3), (12, 5, 1)] {
            let m = n as f64 / di.max(dj) as f64;
            for theta in [-3.0, -0.5, 0.0, 0.3, m - 0.01, m, m + 0.01, 2.0 * m + 1.0] {
                let mut want = nash_oracle(n, theta, di, dj);
                let mut got = bimatrix_nash_set(n, theta, di, dj);
                want.sort();
                got.sort();
                assert_eq!(got, want, "n={n} θ={theta} deg=({di},{dj})");
            }
        }
    }

    #[test]
    fn potential_examples() {
        let g = cycle4(1.0);
        assert!((g.potential(&p("1100")).unwrap() - 0.5).abs() < 1e-15);
        assert!((g.normalized_potential(&p("1100")).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(g.normalized_potential(&p("0000")).unwrap(), 0.0);
        let g = GameSpec::new(Graph::circulant(20, 10).unwrap(), 5.1).unwrap();
        let zeros = ActionProfile::zeros(20);
        let ones = ActionProfile::ones(20);
        assert!((g.potential(&zeros).unwrap() - 10.0 * 5.1 / 2.0).abs() < 1e-12);
        assert!((g.potential(&ones).unwrap() - (20.0 - 51.0) / 2.0).abs() < 1e-12);
        assert!((g.normalized_potential(&ones).unwrap() - (10.0 - 51.0)).abs() < 1e-12);
    }

    #[test]
    fn flip_example_and_antisymmetry() {
        let g = cycle4(1.0);
        let (du, dphi) = g.potential_difference_check(&p("0000"), 0).unwrap();
        assert!((du + 0.5).abs() < 1e-15);
        assert!((dphi + 0.5).abs() < 1e-15);
        let (back_u, back_phi) = g.potential_difference_check(&p("1000"), 0).unwrap();
        assert_eq!(back_u, -du);
        assert_eq!(back_phi, -dphi);
    }

    #[test]
    fn phi_is_symmetric() {
        let g = cycle4(0.7);
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(g.pairwise_potential(a, b), g.pairwise_potential(b, a));
            }
        }
    }

    #[test]
    fn pairwise_potential_is_a_potential_of_the_bimatrix() {
        let g = cycle4(1.7);
        for aj in [false, true] {
            let dv = g.pairwise_payoff(true, aj) - g.pairwise_payoff(false, aj);
            let dphi = g.pairwise_potential(true, aj) - g.pairwise_potential(false, aj);
            assert!((dv - dphi).abs() < 1e-15);
        }
    }

    #[test]
    fn two_forms_agree_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 1000 {
            let n = rng.random_range(3..=12);
            let k = rng.random_range(2..n);
            let Ok(graph) = Graph::circulant(n, k) else {
                continue;
            };
            let theta = rng.random_range(-10.0..10.0);
            let g = GameSpec::new(graph, theta).unwrap();
            let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let a = ActionProfile::from_bools(&bits);
            let closed = g.potential(&a).unwrap();
            let summed = g.potential_pairwise(&a).unwrap();
            assert!((closed - summed).abs() <= 1e-12, "{closed} vs {summed}");
            for i in 0..n {
                let u1 = g.utility(&a, i).unwrap();
                let u2 = g.utility_pairwise(&a, i).unwrap();
                assert!((u1 - u2).abs() <= 1e-12);
            }
            done += 1;
        }
    }

    proptest! {
        #[test]
        fn exact_potential_identity(n in 3usize..=12, k in 2usize..=11, theta in -20.0f64..20.0, index in any::<u64>(), i in 0usize..12) {
            prop_assume!(k < n && (n * k) % 2 == 0 && i < n);
            let g = GameSpec::new(Graph::circulant(n, k).unwrap(), theta).unwrap();
            let a = ActionProfile::from_index(n, index);
            let (du, dphi) = g.potential_difference_check(&a, i).unwrap();
            prop_assert!((du - dphi).abs() <= 1e-12);
        }
    }
}
