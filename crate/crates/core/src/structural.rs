//! Structural score functions: degeneracy ordering (`pcon_core`) and
//! greedy degree-ratio peeling (`pcon_de`).

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::Graph;
use crate::peel::{peel_sweep, ClusterResult, Objective, ScoreOrdering};

/// A degeneracy ordering `u_1..u_n`: each `u_i` has minimum degree in the
/// subgraph induced by `{u_i, .., u_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    pub order: Vec<usize>,
    pub core_numbers: Vec<usize>,
}

/// Bucket-queue core decomposition in `O(m + n)`.
///
/// Ties among minimum-degree vertices are broken first-in first-out: buckets
/// start filled in ascending id order, and a vertex whose degree drops is
/// appended behind the vertices already waiting in its new bucket (neighbors
/// are visited in ascending id order). So the path `0–1–2` yields `[0, 2, 1]`.
pub fn degeneracy_ordering(g: &Graph) -> DegeneracyOrdering {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<VecDeque<u32>> = vec![VecDeque::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v]].push_back(v as u32);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut core_numbers = vec![0usize; n];
    let mut current = 0usize;
    let mut k = 0usize;

    while order.len() < n {
        // A stale entry is one whose vertex left this bucket or the graph.
        let v = loop {
            match buckets[current].pop_front() {
                Some(v) if !removed[v as usize] && degree[v as usize] == current => {
                    break v as usize
                }
                Some(_) => {}
                None => current += 1,
            }
        };
        removed[v] = true;
        k = k.max(current);
        core_numbers[v] = k;
        order.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push_back(w as u32);
            }
        }
        current = current.saturating_sub(1);
    }
    DegeneracyOrdering {
        order,
        core_numbers,
    }
}

/// Peels in reverse degeneracy order (the tail `u_n` goes first) and keeps
/// the min-conductance survivor.
pub fn pcon_core(g: &Graph) -> ClusterResult {
    let mut order = degeneracy_ordering(g).order;
    order.reverse();
    let ordering = ScoreOrdering::new(order, "pcon_core").expect("degeneracy order is a permutation");
    peel_sweep(g, &ordering, Objective::MinConductance)
}

/// `d_S(u) / d(u)` as an exact pair, ordered by value then vertex id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RatioKey {
    live: u32,
    degree: u32,
    vertex: u32,
}

impl Ord for RatioKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.live as u64 * other.degree as u64)
            .cmp(&(other.live as u64 * self.degree as u64))
            .then(self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for RatioKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-priority queue over live vertices keyed by degree ratio
/// `Dr_S(u) = d_S(u) / d(u)`.
///
/// Binary heap with lazy deletion: a decrement pushes a fresh entry and the
/// old one is skipped when it surfaces.
#[derive(Debug)]
pub struct DegreeRatioQueue {
    heap: BinaryHeap<Reverse<RatioKey>>,
    live: Vec<u32>,
    degree: Vec<u32>,
    alive: Vec<bool>,
}

impl DegreeRatioQueue {
    /// Every vertex at ratio 1 (or 0/0 for isolated vertices, which sort first).
    pub fn new(g: &Graph) -> DegreeRatioQueue {
        let n = g.vertex_count();
        let degree: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
        let heap = (0..n)
            .map(|v| {
                Reverse(RatioKey {
                    live: degree[v],
                    degree: degree[v].max(1),
                    vertex: v as u32,
                })
            })
            .collect();
        DegreeRatioQueue {
            heap,
            live: degree.clone(),
            degree,
            alive: vec![true; n],
        }
    }

    /// Removes and returns the live vertex of smallest ratio (smallest id on ties).
    pub fn pop_min(&mut self) -> Option<usize> {
        while let Some(Reverse(key)) = self.heap.pop() {
            let v = key.vertex as usize;
            if self.alive[v] && key.live == self.live[v] {
                self.alive[v] = false;
                return Some(v);
            }
        }
        None
    }

    /// `Dr(v) -= 1/d(v)`.
    pub fn decrement(&mut self, v: usize) {
        debug_assert!(self.alive[v] && self.live[v] > 0);
        self.live[v] -= 1;
        self.heap.push(Reverse(RatioKey {
            live: self.live[v],
            degree: self.degree[v].max(1),
            vertex: v as u32,
        }));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.alive[v]
    }

    /// Current `(d_S(v), d(v))`.
    pub fn ratio(&self, v: usize) -> (usize, usize) {
        (self.live[v] as usize, self.degree[v] as usize)
    }

    /// Heap entries, including stale ones.
    pub fn heap_len(&self) -> usize {
        self.heap.len()
    }
}

/// The removal order of greedy min-degree-ratio peeling.
pub fn degree_ratio_ordering(g: &Graph) -> ScoreOrdering {
    let mut queue = DegreeRatioQueue::new(g);
    let mut order = Vec::with_capacity(g.vertex_count());
    while let Some(u) = queue.pop_min() {
        order.push(u);
        for &v in g.neighbors(u) {
            if queue.contains(v as usize) {
                queue.decrement(v as usize);
            }
        }
    }
    ScoreOrdering::new(order, "pcon_de").expect("queue yields each vertex once")
}

/// Greedy degree-ratio peeling keeping the max-`g` survivor with
/// `vol(S) <= m`. Its conductance is within `1/2 + φ*/2`.
pub fn pcon_de(g: &Graph) -> ClusterResult {
    peel_sweep(g, &degree_ratio_ordering(g), Objective::MaxG)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{barbell, complete, nine_vertex_example, path, star};
    use crate::ratio::Ratio;

    #[test]
    fn path_order_uses_fifo_buckets() {
        assert_eq!(degeneracy_ordering(&path(3)).order, vec![0, 2, 1]);
    }

    #[test]
    fn triangle_order() {
        assert_eq!(degeneracy_ordering(&complete(3)).order, vec![0, 1, 2]);
    }

    #[test]
    fn core_numbers() {
        let d = degeneracy_ordering(&barbell());
        assert_eq!(d.core_numbers, vec![2; 6]);
        let d = degeneracy_ordering(&complete(5));
        assert_eq!(d.core_numbers, vec![4; 5]);
        let d = degeneracy_ordering(&star(4));
        assert_eq!(d.core_numbers, vec![1; 5]);
    }

    #[test]
    fn pcon_core_barbell() {
        let r = pcon_core(&barbell());
        assert_eq!(r.conductance, Ratio::new(1, 7));
        assert!(r.members == vec![0, 1, 2] || r.members == vec![3, 4, 5]);
    }

    #[test]
    fn pcon_core_k4_takes_two_vertex_suffix() {
        let r = pcon_core(&complete(4));
        assert_eq!(r.members.len(), 2);
        assert_eq!(r.conductance, Ratio::new(2, 3));
    }

    #[test]
    fn pcon_core_star_is_degenerate() {
        let r = pcon_core(&star(5));
        assert_eq!(r.conductance, Ratio::ONE);
        assert!(r.degenerate);
        assert!(r.volume <= 5);
    }

    #[test]
    fn pcon_de_barbell() {
        let r = pcon_de(&barbell());
        assert_eq!(r.members, vec![3, 4, 5]);
        assert_eq!(r.conductance, Ratio::new(1, 7));
        assert_eq!(r.g_value, Ratio::new(3, 7));
    }

    #[test]
    fn pcon_de_regular_graph_starts_at_smallest_id() {
        let ord = degree_ratio_ordering(&complete(5));
        assert_eq!(ord.order()[0], 0);
    }

    #[test]
    fn pcon_de_nine_vertex_graph() {
        // All ratios start at 1, so the 4-cycle (smallest ids) is peeled first.
        let r = pcon_de(&nine_vertex_example());
        assert_eq!(r.conductance, Ratio::new(1, 7));
        assert_eq!(r.members, vec![6, 7, 8]);
        // within 1/2 + (1/9)/2
        assert!(r.conductance <= Ratio::new(10, 18));
    }

    #[test]
    fn queue_tracks_ratio() {
        let g = barbell();
        let mut q = DegreeRatioQueue::new(&g);
        assert_eq!(q.pop_min(), Some(0));
        q.decrement(1);
        q.decrement(2);
        assert_eq!(q.ratio(2), (2, 3));
        assert_eq!(q.pop_min(), Some(1));
        assert!(!q.contains(1));
    }
}
