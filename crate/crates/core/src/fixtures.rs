//! Small named graphs used by tests, examples and the CLI.

use rand::Rng;

use crate::graph::Graph;

/// Two triangles `{0,1,2}` and `{3,4,5}` joined by the bridge `2–3`.
pub fn barbell() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
}

/// Nine vertices and ten edges with minimum conductance 1/9 at `{0,1,2,3}`.
///
/// Vertices `0..=3` (v1..v4) form a 4-cycle; `3–4` is the bridge; the other
/// side is `4–5, 4–6, 6–7, 6–8, 7–8`. The order
/// `[5, 7, 8, 6, 4, 0, 1, 2, 3]` (v6, v8, v9, v7, v5, v1, v2, v3, v4) is a
/// degeneracy ordering.
pub fn nine_vertex_example() -> Graph {
    Graph::from_edges(
        9,
        [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (3, 4),
            (4, 5),
            (4, 6),
            (6, 7),
            (6, 8),
            (7, 8),
        ],
    )
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Vertex 0 joined to `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

/// Dense-loop G(n, p); fine for the small graphs tests need.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// A uniformly random connected labeled graph on `n` vertices, by
/// rejection over edge subsets (edge probability 1/2).
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Graph {
    loop {
        let g = random_graph(rng, n, 0.5);
        if g.is_connected() {
            return g;
        }
    }
}

/// The graph on `n` vertices whose edges are the set bits of `mask`, in
/// lexicographic `(u, v)` pair order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(
        n,
        pairs
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect::<Vec<_>>(),
    )
}
