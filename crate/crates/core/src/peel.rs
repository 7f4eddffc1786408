//! The peeling framework.
//!
//! A score function only has to produce a removal order ([`ScoreOrdering`]).
//! [`peel_sweep`] then removes vertices in that order while keeping the cut
//! and volume of the surviving set up to date, and returns the surviving set
//! with the best objective among those with `vol(S) <= m`.
//!
//! All comparisons are exact: conductance and `g` are [`Ratio`]s.

use std::fmt;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::{induced_degree, Graph};
use crate::ratio::Ratio;

/// `|E(S, S̄)| / min(vol(S), 2m - vol(S))`, with `φ(V) = 1`.
///
/// # Panics
/// If `set` is empty, has repeats, or holds out-of-range vertices.
pub fn conductance(g: &Graph, set: &[usize]) -> Ratio {
    assert!(!set.is_empty(), "conductance of the empty set is undefined");
    let mask = g.membership(set);
    let (cut, vol) = cut_and_volume(g, &mask);
    conductance_from_parts(cut, vol, g.total_volume())
}

pub(crate) fn conductance_from_parts(cut: u64, vol: u64, total: u64) -> Ratio {
    let den = vol.min(total - vol);
    if den == 0 {
        // S = V (or a set of isolated vertices, which a connected graph lacks).
        return Ratio::ONE;
    }
    Ratio::new(cut, den)
}

/// `Σ_{u∈S} d_S(u) / (2 Σ_{u∈S} d(u))`.
///
/// # Panics
/// If `set` is empty.
pub fn g_value(g: &Graph, set: &[usize]) -> Ratio {
    assert!(!set.is_empty(), "g of the empty set is undefined");
    let mask = g.membership(set);
    let (cut, vol) = cut_and_volume(g, &mask);
    g_from_parts(cut, vol)
}

pub(crate) fn g_from_parts(cut: u64, vol: u64) -> Ratio {
    if vol == 0 {
        return Ratio::ZERO;
    }
    Ratio::new(vol - cut, 2 * vol)
}

/// Cut size and volume of a membership mask, from scratch.
pub fn cut_and_volume(g: &Graph, mask: &[bool]) -> (u64, u64) {
    let mut cut = 0u64;
    let mut vol = 0u64;
    for u in (0..g.vertex_count()).filter(|&u| mask[u]) {
        vol += g.degree(u) as u64;
        cut += g.neighbors(u).iter().filter(|&&v| !mask[v as usize]).count() as u64;
    }
    (cut, vol)
}

/// A removal order: `order[0]` is removed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreOrdering {
    order: Vec<usize>,
    method: String,
}

impl ScoreOrdering {
    /// Fails unless `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>, method: impl Into<String>) -> Result<ScoreOrdering> {
        let mut seen = vec![false; order.len()];
        for &v in &order {
            if v >= order.len() {
                return Err(Error::InvalidOrdering(format!("vertex {v} out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidOrdering(format!("vertex {v} appears twice")));
            }
        }
        Ok(ScoreOrdering {
            order,
            method: method.into(),
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reversed(&self) -> ScoreOrdering {
        let mut order = self.order.clone();
        order.reverse();
        ScoreOrdering {
            order,
            method: self.method.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MinConductance,
    MaxG,
}

/// The surviving set `S` during a peel, with its cut, volume and the
/// induced degree `d_S(u)` of every member.
#[derive(Debug, Clone)]
pub struct PeelState {
    in_set: Vec<bool>,
    live_degree: Vec<u32>,
    size: usize,
    cut: u64,
    vol: u64,
    touches: u64,
}

impl PeelState {
    /// Starts at `S = V`.
    pub fn new(g: &Graph) -> PeelState {
        let n = g.vertex_count();
        PeelState {
            in_set: vec![true; n],
            live_degree: (0..n).map(|v| g.degree(v) as u32).collect(),
            size: n,
            cut: 0,
            vol: g.total_volume(),
            touches: 0,
        }
    }

    /// Removes `u` from `S`.
    ///
    /// # Panics
    /// If `u` has already been removed.
    pub fn remove(&mut self, g: &Graph, u: usize) {
        assert!(self.in_set[u], "vertex {u} removed twice");
        let d = g.degree(u) as u64;
        let ds = self.live_degree[u] as u64;
        self.cut = self.cut + 2 * ds - d;
        self.vol -= d;
        self.in_set[u] = false;
        self.size -= 1;
        for &v in g.neighbors(u) {
            let v = v as usize;
            if self.in_set[v] {
                self.live_degree[v] -= 1;
            }
        }
        self.touches += 1 + d;
    }

    pub fn contains(&self, u: usize) -> bool {
        self.in_set[u]
    }

    pub fn cut(&self) -> u64 {
        self.cut
    }

    pub fn volume(&self) -> u64 {
        self.vol
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `d_S(u)`; meaningful only while `u ∈ S`.
    pub fn live_degree(&self, u: usize) -> usize {
        self.live_degree[u] as usize
    }

    /// Vertex and adjacency-entry visits so far.
    pub fn work(&self) -> u64 {
        self.touches
    }

    pub fn membership(&self) -> &[bool] {
        &self.in_set
    }

    pub fn conductance(&self, g: &Graph) -> Ratio {
        conductance_from_parts(self.cut, self.vol, g.total_volume())
    }

    pub fn g_value(&self) -> Ratio {
        g_from_parts(self.cut, self.vol)
    }

    #[cfg(test)]
    pub(crate) fn corrupt_cut(&mut self, delta: i64) {
        self.cut = (self.cut as i64 + delta) as u64;
    }
}

/// True iff the incrementally maintained cut, volume and live degrees agree
/// with a from-scratch recomputation.
pub fn recompute_check(g: &Graph, state: &PeelState) -> bool {
    let mask = state.membership();
    let (cut, vol) = cut_and_volume(g, mask);
    if cut != state.cut() || vol != state.volume() {
        return false;
    }
    if mask.iter().filter(|&&b| b).count() != state.size() {
        return false;
    }
    (0..g.vertex_count())
        .filter(|&u| mask[u])
        .all(|u| induced_degree(g, mask, u) == state.live_degree(u))
}

/// The chosen cluster and how it scored.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    /// Members, ascending.
    pub members: Vec<usize>,
    pub cut: u64,
    pub volume: u64,
    pub conductance: Ratio,
    pub g_value: Ratio,
    pub method: String,
    pub params: String,
    /// Set when no eligible state beat the `φ(V) = 1` convention.
    pub degenerate: bool,
    /// Adjacency visits spent by the sweep.
    pub sweep_work: u64,
    pub wall_time: Option<Duration>,
    pub peak_memory: Option<usize>,
}

impl ClusterResult {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn from_parts(
        mut members: Vec<usize>,
        cut: u64,
        vol: u64,
        total: u64,
        method: &str,
        work: u64,
    ) -> ClusterResult {
        members.sort_unstable();
        let conductance = conductance_from_parts(cut, vol, total);
        ClusterResult {
            members,
            cut,
            volume: vol,
            conductance,
            g_value: g_from_parts(cut, vol),
            method: method.to_string(),
            params: String::new(),
            degenerate: conductance == Ratio::ONE,
            sweep_work: work,
            wall_time: None,
            peak_memory: None,
        }
    }

    pub fn with_params(mut self, params: impl Into<String>) -> ClusterResult {
        self.params = params.into();
        self
    }
}

impl fmt::Display for ClusterResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: |S|={} vol={} cut={} phi={} ({:.6})",
            self.method,
            self.members.len(),
            self.volume,
            self.cut,
            self.conductance,
            self.conductance.to_f64()
        )
    }
}

/// Peels vertices in `ordering` and returns the best surviving set with
/// `vol(S) <= m`.
///
/// The incumbent starts at `V` with `φ = 1`; a state replaces it only on
/// strict improvement, so the earliest optimum along the sweep wins. The
/// empty terminal state is never a candidate. If nothing beats `φ(V) = 1`
/// the first eligible state is returned with `degenerate` set.
///
/// # Panics
/// If the ordering does not cover the graph's vertices.
pub fn peel_sweep(g: &Graph, ordering: &ScoreOrdering, objective: Objective) -> ClusterResult {
    let n = g.vertex_count();
    assert_eq!(ordering.len(), n, "ordering length differs from vertex count");
    let m = g.edge_count() as u64;
    let total = g.total_volume();

    let mut state = PeelState::new(g);
    // Index into `order` of the first survivor, with the state's cut and vol.
    let mut best: Option<(usize, u64, u64)> = None;
    let order = ordering.order();
    for (i, &u) in order.iter().enumerate().take(n.saturating_sub(1)) {
        state.remove(g, u);
        if state.volume() > m {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, cut, vol)) => match objective {
                Objective::MinConductance => {
                    state.conductance(g) < conductance_from_parts(cut, vol, total)
                }
                Objective::MaxG => state.g_value() > g_from_parts(cut, vol),
            },
        };
        if better {
            best = Some((i + 1, state.cut(), state.volume()));
        }
    }

    match best {
        Some((start, cut, vol)) => ClusterResult::from_parts(
            order[start..].to_vec(),
            cut,
            vol,
            total,
            ordering.method(),
            state.work(),
        ),
        // Only reachable when n == 1: nothing but V itself.
        None => {
            let mut r = ClusterResult::from_parts(
                order.to_vec(),
                0,
                total,
                total,
                ordering.method(),
                state.work(),
            );
            r.degenerate = true;
            r
        }
    }
}

/// Sweeps an order from both ends and keeps the better result, so every
/// prefix cut of `ascending` is considered through its smaller-volume side.
/// Ties go to the prefix side.
pub fn two_sided_sweep(g: &Graph, ascending: &ScoreOrdering) -> ClusterResult {
    // Removing the tail first leaves prefixes as survivors.
    let prefixes = peel_sweep(g, &ascending.reversed(), Objective::MinConductance);
    let suffixes = peel_sweep(g, ascending, Objective::MinConductance);
    if suffixes.conductance < prefixes.conductance {
        suffixes
    } else {
        prefixes
    }
}

/// Grows `S` by adding `order` one vertex at a time and returns the
/// min-conductance prefix with `vol(S) <= m`; earliest wins ties.
/// The order may cover only part of the graph.
pub fn grow_sweep(g: &Graph, order: &[usize], method: &str) -> Result<ClusterResult> {
    let m = g.edge_count() as u64;
    let total = g.total_volume();
    let mut in_set = vec![false; g.vertex_count()];
    let (mut cut, mut vol) = (0u64, 0u64);
    let mut work = 0u64;
    let mut best: Option<(usize, u64, u64)> = None;
    for (i, &u) in order.iter().enumerate() {
        assert!(!in_set[u], "vertex {u} added twice");
        let d = g.degree(u) as u64;
        let inside = g.neighbors(u).iter().filter(|&&v| in_set[v as usize]).count() as u64;
        work += 1 + d;
        cut = cut + d - 2 * inside;
        vol += d;
        in_set[u] = true;
        if vol > m {
            continue;
        }
        let phi = conductance_from_parts(cut, vol, total);
        if best.is_none_or(|(_, c, v)| phi < conductance_from_parts(c, v, total)) {
            best = Some((i + 1, cut, vol));
        }
    }
    let (len, cut, vol) = best.ok_or(Error::NoCandidate)?;
    Ok(ClusterResult::from_parts(order[..len].to_vec(), cut, vol, total, method, work))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{barbell, random_graph};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn barbell_triangle_conductance() {
        let g = barbell();
        assert_eq!(conductance(&g, &[0, 1, 2]), Ratio::new(1, 7));
        assert_eq!(conductance(&g, &[3, 4, 5]), Ratio::new(1, 7));
        assert_eq!(conductance(&g, &(0..6).collect::<Vec<_>>()), Ratio::ONE);
    }

    #[test]
    fn g_value_cases() {
        let g = barbell();
        let tri = [0, 1, 2];
        assert_eq!(g_value(&g, &tri), Ratio::new(3, 7));
        // Lemma 1 cross-check: (1 - 1/7) / 2
        assert_eq!(g_value(&g, &tri), Ratio::new(6, 14));
        assert_eq!(g_value(&g, &(0..6).collect::<Vec<_>>()), Ratio::new(1, 2));
        assert_eq!(g_value(&g, &[4]), Ratio::ZERO);
    }

    #[test]
    #[should_panic(expected = "empty set")]
    fn conductance_of_empty_set_panics() {
        conductance(&barbell(), &[]);
    }

    #[test]
    fn ordering_must_be_permutation() {
        assert!(ScoreOrdering::new(vec![0, 2, 1], "t").is_ok());
        assert!(ScoreOrdering::new(vec![0, 0, 1], "t").is_err());
        assert!(ScoreOrdering::new(vec![0, 3, 1], "t").is_err());
    }

    #[test]
    fn sweep_finds_triangle_removed_last() {
        let g = barbell();
        let ord = ScoreOrdering::new(vec![5, 4, 3, 2, 1, 0], "t").unwrap();
        let r = peel_sweep(&g, &ord, Objective::MinConductance);
        assert_eq!(r.members, vec![0, 1, 2]);
        assert_eq!(r.conductance, Ratio::new(1, 7));
        assert!(!r.degenerate);
        let r = peel_sweep(&g, &ord, Objective::MaxG);
        assert_eq!(r.members, vec![0, 1, 2]);
    }

    #[test]
    fn sweep_on_single_edge() {
        // Only candidate: the singleton left after the first removal.
        let g = Graph::from_edges(2, [(0, 1)]);
        let ord = ScoreOrdering::new(vec![1, 0], "t").unwrap();
        let r = peel_sweep(&g, &ord, Objective::MinConductance);
        assert_eq!(r.members, vec![0]);
        assert_eq!(r.conductance, Ratio::ONE);
        assert!(r.degenerate);
        assert!(r.volume <= 1);
    }

    #[test]
    fn removing_vertex_with_no_live_neighbors_drops_cut_by_degree() {
        let g = barbell();
        let mut s = PeelState::new(&g);
        s.remove(&g, 0);
        s.remove(&g, 1);
        // vertex 2 now has only its bridge neighbour inside S
        s.remove(&g, 3);
        let before = s.cut();
        assert_eq!(s.live_degree(2), 0);
        s.remove(&g, 2);
        assert_eq!(s.cut(), before - g.degree(2) as u64);
    }

    #[test]
    fn recompute_check_detects_corruption() {
        let g = barbell();
        let mut s = PeelState::new(&g);
        assert!(recompute_check(&g, &s));
        assert_eq!((s.cut(), s.volume()), (0, 14));
        s.remove(&g, 2);
        assert!(recompute_check(&g, &s));
        s.corrupt_cut(1);
        assert!(!recompute_check(&g, &s));
    }

    #[test]
    fn random_removals_stay_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_graph(&mut rng, 120, 0.05);
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.shuffle(&mut rng);
        let mut s = PeelState::new(&g);
        for &u in order.iter().take(100) {
            s.remove(&g, u);
            assert!(recompute_check(&g, &s));
        }
    }

    #[test]
    fn sweep_work_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_graph(&mut rng, 200, 0.1);
        let ord = ScoreOrdering::new((0..200).collect(), "t").unwrap();
        let r = peel_sweep(&g, &ord, Objective::MinConductance);
        let bound = (g.vertex_count() + g.total_volume() as usize) as u64;
        assert!(r.sweep_work <= bound, "{} > {}", r.sweep_work, bound);
    }

    #[test]
    fn grow_sweep_singleton_and_addition_rule() {
        let g = barbell();
        let r = grow_sweep(&g, &[4], "t").unwrap();
        assert_eq!(r.members, vec![4]);
        let r = grow_sweep(&g, &[0, 1, 2, 3], "t").unwrap();
        assert_eq!(r.members, vec![0, 1, 2]);
        assert_eq!(r.conductance, Ratio::new(1, 7));
    }
}
