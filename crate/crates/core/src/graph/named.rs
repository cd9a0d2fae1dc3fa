//! A few well-known regular graphs outside the circulant family.

use super::Graph;

/// Petersen graph: 10 vertices, 3-regular, girth 5.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("petersen graph")
}

/// 3-cube: 8 vertices, 3-regular, bipartite.
pub fn cube() -> Graph {
    let mut edges = Vec::with_capacity(12);
    for v in 0..8usize {
        for b in 0..3 {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    Graph::from_edges(8, &edges).expect("cube graph")
}

/// Triangular prism: 6 vertices, 3-regular.
pub fn prism() -> Graph {
    Graph::from_edges(
        6,
        &[
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    )
    .expect("prism graph")
}

/// Two disjoint triangles; regular but disconnected.
pub fn two_triangles() -> Graph {
    Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).expect("two triangles")
}
