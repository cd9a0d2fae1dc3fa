//! Undirected K-regular graphs.
//!
//! Graphs are immutable once built. The canonical family is the circulant
//! graph with consecutive offsets `±1, …, ±⌊k/2⌋`, plus the antipodal offset
//! `n/2` when `k` is odd. Degree augmentation adds a perfect matching (even
//! `n`) or a 2-factor (odd `n`) drawn from the complement, so the old edge set
//! is always a subset of the new one.

mod augment;
pub mod named;
mod spectrum;

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::ActionProfile;

pub use spectrum::{symmetric_eigenvalues, Spectrum, EIGEN_TOLERANCE, TIE_TOLERANCE};

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    k: usize,
    adjacency: Vec<Vec<usize>>,
    spectrum: OnceLock<Spectrum>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

/// Checks that a `k`-regular graph on `n` vertices can exist.
pub fn check_feasible(n: usize, k: usize) -> Result<()> {
    if n < 3 || k < 2 || k > n - 1 {
        return Err(Error::InfeasibleDegree {
            n,
            k,
            reason: "K must lie in {2, ..., N-1}",
        });
    }
    if !(n * k).is_multiple_of(2) {
        return Err(Error::InfeasibleDegree {
            n,
            k,
            reason: "N*K must be even",
        });
    }
    Ok(())
}

impl Graph {
    /// Canonical connected circulant graph of degree `k` on `n` vertices.
    pub fn circulant(n: usize, k: usize) -> Result<Self> {
        check_feasible(n, k)?;
        let mut offsets: Vec<usize> = (1..=k / 2).collect();
        if k % 2 == 1 {
            offsets.push(n / 2);
        }
        let mut adjacency = vec![Vec::with_capacity(k); n];
        for (i, nbrs) in adjacency.iter_mut().enumerate() {
            for &d in &offsets {
                nbrs.push((i + d) % n);
                if 2 * d != n {
                    nbrs.push((i + n - d) % n);
                }
            }
        }
        Self::from_adjacency(n, adjacency)
    }

    /// Builds a graph from an undirected edge list, checking that it is simple
    /// and regular. Connectivity is not required.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph(format!(
                "need at least 2 vertices, got {n}"
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at {i}")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        Self::from_adjacency(n, adjacency)
    }

    fn from_adjacency(n: usize, mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for (i, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("repeated edge at vertex {i}")));
            }
        }
        let k = adjacency[0].len();
        if let Some(i) = adjacency.iter().position(|nb| nb.len() != k) {
            return Err(Error::InvalidGraph(format!(
                "not regular: vertex 0 has degree {k}, vertex {i} has degree {}",
                adjacency[i].len()
            )));
        }
        if k == 0 {
            return Err(Error::InvalidGraph("degree 0".into()));
        }
        Ok(Self {
            n,
            k,
            adjacency,
            spectrum: OnceLock::new(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Common degree `K`.
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.k / 2
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Breadth-first search from vertex 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.n
    }

    /// Dense row-major adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (i, j) in self.edges() {
            a[i * self.n + j] = 1.0;
            a[j * self.n + i] = 1.0;
        }
        a
    }

    /// Adjacency eigenvalues; computed once and cached.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let s = Spectrum::of(self)?;
        Ok(self.spectrum.get_or_init(|| s))
    }

    /// Number of active neighbours of `i` in `a`.
    #[inline]
    pub fn active_neighbors(&self, a: &ActionProfile, i: usize) -> usize {
        self.adjacency[i].iter().filter(|&&j| a.get(j)).count()
    }

    pub(crate) fn check_profile(&self, a: &ActionProfile) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        Ok(())
    }

    /// `aᵀAa`: ordered pairs of adjacent active agents. Always even and at
    /// most `‖a‖₁·K`.
    pub fn quadratic_form(&self, a: &ActionProfile) -> Result<u64> {
        self.check_profile(a)?;
        let total = (0..self.n)
            .filter(|&i| a.get(i))
            .map(|i| self.active_neighbors(a, i) as u64)
            .sum();
        Ok(total)
    }

    /// Adds a perfect matching (even `n`, degree `k+1`) or a 2-factor
    /// (odd `n`, degree `k+2`) taken from the complement.
    pub fn augment_degree(&self) -> Result<Self> {
        let step = if self.n.is_multiple_of(2) { 1 } else { 2 };
        if self.k + step > self.n - 1 {
            return Err(Error::DegreeSaturated {
                n: self.n,
                k: self.k,
            });
        }
        let added = if step == 1 {
            augment::perfect_matching(self)?
        } else {
            augment::two_factor(self)?
        };
        let mut adjacency = self.adjacency.clone();
        for (i, j) in added {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let g = Self::from_adjacency(self.n, adjacency)?;
        debug_assert_eq!(g.k, self.k + step);
        Ok(g)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            k: self.k,
            edges: self.edges().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        Self::try_from(file)
    }
}

/// On-disk graph: `{"n": 4, "k": 2, "edges": [[0,1],[0,3],[1,2],[2,3]]}` with
/// `i < j` and edges sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(file.n, &edges)?;
        if g.k != file.k {
            return Err(Error::InvalidGraph(format!(
                "declared degree {} but edges give degree {}",
                file.k, g.k
            )));
        }
        Ok(g)
    }
}
