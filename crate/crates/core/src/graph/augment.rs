//! Edge sets that raise the degree of a regular graph by one (perfect
//! matching, even `n`) or two (2-factor, odd `n`) without touching the
//! existing edges.
//!
//! Structured candidates are tried first so that augmenting a circulant graph
//! stays within a recognisable family; general constructions are the
//! fallback.

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;

use super::Graph;
use crate::error::{Error, Result};

type Edges = Vec<(usize, usize)>;

fn disjoint(g: &Graph, edges: &[(usize, usize)]) -> bool {
    edges.iter().all(|&(i, j)| !g.has_edge(i, j))
}

/// Search budget, in visited partial plans, for [`perfect_matching`].
const PLAN_BUDGET: usize = 20_000;

/// Dense symmetric adjacency used while planning matchings.
#[derive(Clone)]
struct Dense {
    n: usize,
    adj: Vec<bool>,
    degree: usize,
}

impl Dense {
    fn of(g: &Graph) -> Self {
        let n = g.n();
        let mut adj = vec![false; n * n];
        for (i, j) in g.edges() {
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        Self {
            n,
            adj,
            degree: g.k(),
        }
    }

    fn has(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    fn disjoint(&self, edges: &[(usize, usize)]) -> bool {
        edges.iter().all(|&(i, j)| !self.has(i, j))
    }

    fn with(&self, edges: &[(usize, usize)]) -> Self {
        let mut next = self.clone();
        for &(i, j) in edges {
            next.adj[i * self.n + j] = true;
            next.adj[j * self.n + i] = true;
        }
        next.degree += 1;
        next
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Matchings built from circulant structure: the antipodal offset, then for
/// each offset `d` whose cycles `c, c+d, c+2d, …` have even length, the two
/// alternating halves of those cycles.
fn structured_matchings(n: usize) -> Vec<Edges> {
    let half = n / 2;
    let mut out = vec![(0..half).map(|i| (i, i + half)).collect::<Edges>()];
    for d in 1..half {
        let cycles = gcd(n, d);
        let len = n / cycles;
        if len % 2 == 1 {
            continue;
        }
        for phase in 0..2 {
            let m: Edges = (0..cycles)
                .flat_map(|c| {
                    (0..len / 2).map(move |j| {
                        let u = (c + (2 * j + phase) * d) % n;
                        (u, (u + d) % n)
                    })
                })
                .collect();
            out.push(m);
        }
    }
    out
}

fn general_matching(g: &Dense) -> Option<Edges> {
    let n = g.n;
    let mut h = UnGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| h.add_node(())).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !g.has(i, j) {
                h.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let matching = maximum_matching(&h);
    matching.is_perfect().then(|| {
        matching
            .edges()
            .map(|(a, b)| (a.index(), b.index()))
            .collect()
    })
}

/// First matching that keeps a full chain of augmentations up to degree
/// `n - 1` open, searched depth first. `None` when no chain was found.
fn plan(g: &Dense, structured: &[Edges], budget: &mut usize) -> Option<Option<Edges>> {
    if g.degree + 1 >= g.n {
        return Some(None);
    }
    let mut candidates: Vec<&Edges> = structured.iter().filter(|m| g.disjoint(m)).collect();
    let fallback = general_matching(g);
    if let Some(m) = &fallback {
        if !candidates.contains(&m) {
            candidates.push(m);
        }
    }
    for m in candidates {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if plan(&g.with(m), structured, budget).is_some() {
            return Some(Some(m.clone()));
        }
    }
    None
}

pub(super) fn perfect_matching(g: &Graph) -> Result<Edges> {
    let dense = Dense::of(g);
    let structured = structured_matchings(g.n());
    let mut budget = PLAN_BUDGET;
    if let Some(Some(m)) = plan(&dense, &structured, &mut budget) {
        return Ok(m);
    }
    // No complete chain found within budget: take any matching that fits now.
    structured
        .into_iter()
        .find(|m| dense.disjoint(m))
        .or_else(|| general_matching(&dense))
        .ok_or(Error::AugmentationNotFound("perfect matching"))
}

pub(super) fn two_factor(g: &Graph) -> Result<Edges> {
    let n = g.n();
    for d in 1..=(n - 1) / 2 {
        let cycle: Edges = (0..n).map(|i| (i, (i + d) % n)).collect();
        if disjoint(g, &cycle) {
            return Ok(cycle);
        }
    }
    petersen_two_factor(g)
}

/// Petersen's construction: the complement of a K-regular graph on odd `n`
/// has even degree, so orienting it along Euler circuits gives equal in- and
/// out-degrees, and a perfect matching between out-ends and in-ends of that
/// regular bipartite graph is a spanning union of cycles.
fn petersen_two_factor(g: &Graph) -> Result<Edges> {
    let n = g.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut edge_count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                adj[i].push((j, edge_count));
                adj[j].push((i, edge_count));
                edge_count += 1;
            }
        }
    }
    if adj.iter().any(|a| a.len() % 2 == 1 || a.is_empty()) {
        return Err(Error::AugmentationNotFound("2-factor"));
    }

    // Hierholzer, orienting each edge in traversal order.
    let mut used = vec![false; edge_count];
    let mut cursor = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for start in 0..n {
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&v) = stack.last() {
            while cursor[v] < adj[v].len() && used[adj[v][cursor[v]].1] {
                cursor[v] += 1;
            }
            if let Some(&(w, e)) = adj[v].get(cursor[v]) {
                used[e] = true;
                stack.push(w);
            } else {
                circuit.push(v);
                stack.pop();
            }
        }
        for w in circuit.windows(2) {
            out[w[0]].push(w[1]);
        }
    }

    // Kuhn's augmenting paths on the out/in bipartite graph.
    let mut mate_of_in: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut visited = vec![false; n];
        if !augment_path(u, &out, &mut mate_of_in, &mut visited) {
            return Err(Error::AugmentationNotFound("2-factor"));
        }
    }
    Ok(mate_of_in
        .iter()
        .enumerate()
        .map(|(v, u)| (u.expect("perfect bipartite matching"), v))
        .collect())
}

fn augment_path(
    u: usize,
    out: &[Vec<usize>],
    mate_of_in: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &v in &out[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let free = match mate_of_in[v] {
            None => true,
            Some(w) => augment_path(w, out, mate_of_in, visited),
        };
        if free {
            mate_of_in[v] = Some(u);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_construction_on_circulant() {
        // Bypass the offset shortcut to exercise the general path.
        let g = Graph::circulant(9, 2).unwrap();
        let f = petersen_two_factor(&g).unwrap();
        assert_eq!(f.len(), 9);
        let mut deg = [0; 9];
        for &(i, j) in &f {
            assert_ne!(i, j);
            assert!(!g.has_edge(i, j));
            deg[i] += 1;
            deg[j] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));
        let mut sorted: Vec<_> = f.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
    }

    #[test]
    fn matching_fallback_on_dense_even_graph() {
        let mut g = Graph::circulant(10, 3).unwrap();
        while g.k() < 9 {
            let m = perfect_matching(&g).unwrap();
            assert_eq!(m.len(), 5);
            let mut covered = [false; 10];
            for (i, j) in m {
                assert!(!covered[i] && !covered[j]);
                covered[i] = true;
                covered[j] = true;
            }
            g = g.augment_degree().unwrap();
        }
    }
}
