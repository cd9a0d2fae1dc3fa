//! Exhaustive Gray-code walks over `{0,1}^N`.
//!
//! Consecutive Gray codes differ in one bit, so the walk keeps `m = ‖a‖₁`,
//! `q = aᵀAa` and every agent's active-neighbour count current in `O(K)` per
//! step. The potential depends on a profile only through `(m, q)`, which makes
//! both quantities exact integers and lets a whole Gibbs distribution be
//! summarised by a histogram over them.
//!
//! The index space is cut into contiguous blocks walked in parallel; each
//! block rebuilds its starting state from scratch and results are merged in
//! block order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::ActionProfile;

/// Largest `N` accepted by exhaustive enumeration.
pub const MAX_ENUMERATION_N: usize = 24;

const MIN_BLOCK_BITS: u32 = 12;
const MAX_BLOCKS: u64 = 256;

pub fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(())
}

#[inline]
pub fn gray_code(t: u64) -> u64 {
    t ^ (t >> 1)
}

/// Walk state: the current profile as an integer plus its sufficient statistics.
#[derive(Debug, Clone)]
pub struct GrayWalker<'g> {
    graph: &'g Graph,
    state: u64,
    ones: usize,
    quadratic: u64,
    active: Vec<u32>,
}

impl<'g> GrayWalker<'g> {
    /// Walker positioned at profile `state` (agent `i` is bit `i`).
    pub fn at(graph: &'g Graph, state: u64) -> Self {
        let n = graph.n();
        let active: Vec<u32> = (0..n)
            .map(|i| {
                graph
                    .neighbors(i)
                    .iter()
                    .filter(|&&j| (state >> j) & 1 == 1)
                    .count() as u32
            })
            .collect();
        let quadratic = (0..n)
            .filter(|&i| (state >> i) & 1 == 1)
            .map(|i| u64::from(active[i]))
            .sum();
        Self {
            graph,
            state,
            ones: state.count_ones() as usize,
            quadratic,
            active,
        }
    }

    pub fn flip(&mut self, i: usize) {
        let c = u64::from(self.active[i]);
        self.state ^= 1 << i;
        if (self.state >> i) & 1 == 1 {
            self.ones += 1;
            self.quadratic += 2 * c;
            for &j in self.graph.neighbors(i) {
                self.active[j] += 1;
            }
        } else {
            self.ones -= 1;
            self.quadratic -= 2 * c;
            for &j in self.graph.neighbors(i) {
                self.active[j] -= 1;
            }
        }
    }

    #[inline]
    pub fn state(&self) -> u64 {
        self.state
    }

    #[inline]
    pub fn ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn quadratic(&self) -> u64 {
        self.quadratic
    }

    #[inline]
    pub fn is_active(&self, i: usize) -> bool {
        (self.state >> i) & 1 == 1
    }

    /// Active neighbours of agent `i`.
    #[inline]
    pub fn active_neighbors(&self, i: usize) -> u32 {
        self.active[i]
    }

    pub fn profile(&self) -> ActionProfile {
        ActionProfile::from_index(self.graph.n(), self.state)
    }
}

/// Visits the Gray codes with indices in `range`, in order.
pub fn walk_range<F>(graph: &Graph, range: std::ops::Range<u64>, mut visit: F)
where
    F: FnMut(&GrayWalker<'_>),
{
    if range.is_empty() {
        return;
    }
    let mut w = GrayWalker::at(graph, gray_code(range.start));
    visit(&w);
    for t in range.start + 1..range.end {
        w.flip(t.trailing_zeros() as usize);
        visit(&w);
    }
}

fn blocks(n: usize) -> Vec<std::ops::Range<u64>> {
    let total = 1u64 << n;
    let count = if n as u32 <= MIN_BLOCK_BITS {
        1
    } else {
        (total >> MIN_BLOCK_BITS).min(MAX_BLOCKS)
    };
    let size = total / count;
    (0..count).map(|b| b * size..(b + 1) * size).collect()
}

/// Folds over every profile of `graph` in parallel blocks. Each block starts
/// from `init()`; partial results are combined left to right in block order,
/// so the output does not depend on thread scheduling.
pub fn fold_profiles<T, I, V, M>(graph: &Graph, init: I, visit: V, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &GrayWalker<'_>) + Sync,
    M: Fn(T, T) -> T,
{
    check_enumerable(graph.n())?;
    let partials: Vec<T> = blocks(graph.n())
        .into_par_iter()
        .map(|range| {
            let mut acc = init();
            walk_range(graph, range, |w| visit(&mut acc, w));
            acc
        })
        .collect();
    Ok(partials
        .into_iter()
        .reduce(merge)
        .expect("at least one block"))
}

/// Number of profiles at each `(m, q)` pair, with `m = ‖a‖₁` and `q = aᵀAa`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialLevels {
    n: usize,
    k: usize,
    /// `(m, q, count)` with non-zero counts, sorted by `(m, q)`.
    levels: Vec<(usize, u64, u64)>,
}

impl PotentialLevels {
    pub fn enumerate(graph: &Graph) -> Result<Self> {
        let n = graph.n();
        let stride = n * graph.k() / 2 + 1;
        let counts = fold_profiles(
            graph,
            || vec![0u64; (n + 1) * stride],
            |acc, w| acc[w.ones() * stride + (w.quadratic() / 2) as usize] += 1,
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )?;
        let levels = counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(idx, c)| (idx / stride, 2 * (idx % stride) as u64, c))
            .collect();
        Ok(Self {
            n,
            k: graph.k(),
            levels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        self.levels.iter().copied()
    }

    pub fn total(&self) -> u64 {
        self.levels.iter().map(|l| l.2).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn gray_walk_visits_every_profile_once() {
        let g = Graph::circulant(10, 3).unwrap();
        let mut seen = vec![0u8; 1 << 10];
        walk_range(&g, 0..1 << 10, |w| {
            seen[w.state() as usize] += 1;
            let p = w.profile();
            assert_eq!(w.ones(), p.ones_count());
            assert_eq!(w.quadratic(), g.quadratic_form(&p).unwrap());
            for i in 0..10 {
                assert_eq!(w.active_neighbors(i) as usize, g.active_neighbors(&p, i));
            }
        });
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn blocks_cover_index_space() {
        for n in [1, 5, 12, 13, 20, 24] {
            let b = blocks(n);
            assert_eq!(b[0].start, 0);
            assert_eq!(b.last().unwrap().end, 1 << n);
            assert!(b.windows(2).all(|w| w[0].end == w[1].start));
        }
    }

    #[test]
    fn parallel_fold_matches_sequential_walk() {
        let g = named::petersen();
        let par = fold_profiles(
            &g,
            || 0u64,
            |s, w| *s += w.quadratic() * w.state(),
            |a, b| a + b,
        )
        .unwrap();
        let mut seq = 0u64;
        for s in 0..1u64 << 10 {
            let p = ActionProfile::from_index(10, s);
            seq += g.quadratic_form(&p).unwrap() * s;
        }
        assert_eq!(par, seq);
    }

    #[test]
    fn levels_sum_to_state_count() {
        let g = Graph::circulant(14, 4).unwrap();
        let lv = PotentialLevels::enumerate(&g).unwrap();
        assert_eq!(lv.total(), 1 << 14);
        assert_eq!(lv.iter().next(), Some((0, 0, 1)));
        assert_eq!(lv.iter().last(), Some((14, 56, 1)));
        // m = 1: a single agent has no active neighbours.
        assert!(lv.iter().filter(|l| l.0 == 1).eq([(1, 0, 14)]));
    }

    #[test]
    fn too_large_is_rejected() {
        let g = Graph::circulant(26, 2).unwrap();
        assert!(matches!(
            PotentialLevels::enumerate(&g),
            Err(Error::TooLarge { n: 26, max: 24 })
        ));
    }
}
