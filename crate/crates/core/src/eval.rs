//! Cluster quality: normalized mutual information against ground truth and
//! an exhaustive minimum-conductance oracle for small graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::generators::GroundTruth;
use crate::graph::Graph;
use crate::peel::{conductance_from_parts, g_from_parts};
use crate::ratio::Ratio;

/// Largest graph the oracle will enumerate.
pub const ORACLE_MAX_VERTICES: usize = 20;

/// A label per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Partition {
        Partition { labels }
    }

    /// `{S, V \ S}` as labels 1 and 0.
    pub fn binary(n: usize, set: &[usize]) -> Partition {
        let mut labels = vec![0; n];
        for &v in set {
            labels[v] = 1;
        }
        Partition { labels }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `I(a; b) / sqrt(H(a) H(b))` with natural logs; 0 when either side has a
/// single cluster.
///
/// # Panics
/// If the partitions cover different numbers of vertices.
pub fn nmi(a: &Partition, b: &Partition) -> f64 {
    assert_eq!(a.len(), b.len(), "partitions must label the same vertices");
    if a.is_empty() {
        return 0.0;
    }
    let n = a.len() as f64;
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut ca: HashMap<usize, usize> = HashMap::new();
    let mut cb: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.labels.iter().zip(&b.labels) {
        *joint.entry((x, y)).or_default() += 1;
        *ca.entry(x).or_default() += 1;
        *cb.entry(y).or_default() += 1;
    }
    let ha = entropy(ca.values().copied(), n);
    let hb = entropy(cb.values().copied(), n);
    if ha <= 0.0 || hb <= 0.0 {
        return 0.0;
    }
    let mut mi = 0.0;
    for (&(x, y), &c) in &joint {
        let pxy = c as f64 / n;
        mi += pxy * (c as f64 * n / (ca[&x] as f64 * cb[&y] as f64)).ln();
    }
    (mi / (ha * hb).sqrt()).clamp(0.0, 1.0)
}

/// NMI of `{s, V \ s}` against `{C, V \ C}`, where `C` is the ground-truth
/// community with the highest Jaccard overlap with `s` (lowest index on ties).
pub fn score_detected_cluster(set: &[usize], truth: &GroundTruth) -> Result<f64> {
    if truth.community_count() == 0 {
        return Err(Error::param("ground truth has no communities"));
    }
    if set.is_empty() {
        return Err(Error::param("detected cluster is empty"));
    }
    let n = truth.vertex_count();
    let best = best_jaccard_community(set, truth);
    Ok(nmi(
        &Partition::binary(n, set),
        &Partition::binary(n, &truth.communities()[best]),
    ))
}

/// Index of the community maximizing `|S ∩ C| / |S ∪ C|`.
pub fn best_jaccard_community(set: &[usize], truth: &GroundTruth) -> usize {
    let mut overlap = vec![0usize; truth.community_count()];
    for &v in set {
        if let Some(l) = truth.label(v) {
            overlap[l] += 1;
        }
    }
    let mut best = 0;
    let mut best_score = (0u64, 1u64);
    for (c, members) in truth.communities().iter().enumerate() {
        let inter = overlap[c] as u64;
        let union = (set.len() + members.len()) as u64 - inter;
        // inter/union > best.0/best.1
        if inter * best_score.1 > best_score.0 * union {
            best = c;
            best_score = (inter, union);
        }
    }
    best
}

/// Exact optima over all proper nonempty subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Minimum-conductance set among those with `vol(S) <= m`, ascending.
    pub min_conductance_set: Vec<usize>,
    pub min_conductance: Ratio,
    /// Maximum-`g` set, ascending.
    pub max_g_set: Vec<usize>,
    pub max_g: Ratio,
}

fn members_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Walks all `2^n - 2` proper nonempty subsets in Gray-code order, updating
/// cut and volume by one vertex per step. Ties keep the numerically smallest
/// membership mask.
pub fn brute_force_optimum(g: &Graph) -> Result<OracleResult> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::OracleTooLarge(n));
    }
    if n < 2 {
        return Err(Error::param("oracle needs at least two vertices"));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let total = g.total_volume();
    let m = g.edge_count() as u64;
    let full = (1u32 << n) - 1;

    let mut best_phi: Option<(Ratio, u32)> = None;
    let mut best_g: Option<(Ratio, u32)> = None;
    let (mut mask, mut cut, mut vol) = (0u32, 0i64, 0u64);
    for i in 1u32..(1u32 << n) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let inside = (nbr[v] & mask).count_ones() as i64;
        let d = g.degree(v) as i64;
        if mask & bit == 0 {
            cut += d - 2 * inside;
            vol += d as u64;
        } else {
            cut -= d - 2 * inside;
            vol -= d as u64;
        }
        mask ^= bit;
        if mask == full {
            continue;
        }
        let c = cut as u64;
        let better = |cur: &Option<(Ratio, u32)>, value: Ratio, minimize: bool| match cur {
            None => true,
            Some((b, bm)) => {
                if minimize {
                    value < *b || (value == *b && mask < *bm)
                } else {
                    value > *b || (value == *b && mask < *bm)
                }
            }
        };
        if vol <= m {
            let phi = conductance_from_parts(c, vol, total);
            if better(&best_phi, phi, true) {
                best_phi = Some((phi, mask));
            }
        }
        let gv = g_from_parts(c, vol);
        if better(&best_g, gv, false) {
            best_g = Some((gv, mask));
        }
    }
    let (phi, phi_mask) = best_phi.expect("a set or its complement has vol <= m");
    let (gv, g_mask) = best_g.expect("n >= 2");
    Ok(OracleResult {
        min_conductance_set: members_of(phi_mask),
        min_conductance: phi,
        max_g_set: members_of(g_mask),
        max_g: gv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{barbell, nine_vertex_example, path};
    use crate::peel::{conductance, g_value};

    fn part(labels: &[usize]) -> Partition {
        Partition::new(labels.to_vec())
    }

    #[test]
    fn nmi_identical_up_to_relabel() {
        assert!((nmi(&part(&[0, 0, 1, 1, 2]), &part(&[5, 5, 3, 3, 9])) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_trivial_partition_is_zero() {
        assert_eq!(nmi(&part(&[0, 0, 1, 1]), &part(&[7, 7, 7, 7])), 0.0);
    }

    #[test]
    fn nmi_independent_is_zero() {
        assert!(nmi(&part(&[0, 0, 1, 1]), &part(&[0, 1, 0, 1])).abs() < 1e-12);
    }

    #[test]
    fn nmi_hand_computed() {
        // a = {0,1,2},{3}; b = {0,1},{2,3}
        let a = part(&[0, 0, 0, 1]);
        let b = part(&[0, 0, 1, 1]);
        let ln = f64::ln;
        let ha = -(0.75 * ln(0.75) + 0.25 * ln(0.25));
        let hb = ln(2.0);
        let mi = 0.5 * ln(0.5 / (0.75 * 0.5)) + 0.25 * ln(0.25 / (0.75 * 0.5)) + 0.25 * ln(0.25 / (0.25 * 0.5));
        let expected = mi / (ha * hb).sqrt();
        assert!((nmi(&a, &b) - expected).abs() < 1e-12);
        assert!((nmi(&b, &a) - expected).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn nmi_size_mismatch_panics() {
        nmi(&part(&[0, 1]), &part(&[0, 1, 1]));
    }

    #[test]
    fn detected_cluster_exact_match() {
        let truth = GroundTruth::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert!((score_detected_cluster(&[3, 4, 5], &truth).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(best_jaccard_community(&[3, 4], &truth), 1);
        assert!(score_detected_cluster(&[], &truth).is_err());
    }

    #[test]
    fn oracle_barbell() {
        let r = brute_force_optimum(&barbell()).unwrap();
        assert_eq!(r.min_conductance, Ratio::new(1, 7));
        assert_eq!(r.min_conductance_set, vec![0, 1, 2]);
        assert_eq!(r.max_g, Ratio::new(3, 7));
    }

    #[test]
    fn oracle_k2() {
        let r = brute_force_optimum(&Graph::from_edges(2, [(0, 1)])).unwrap();
        assert_eq!(r.min_conductance, Ratio::ONE);
        assert_eq!(r.min_conductance_set.len(), 1);
    }

    #[test]
    fn oracle_nine_vertex_graph() {
        let g = nine_vertex_example();
        let r = brute_force_optimum(&g).unwrap();
        assert_eq!(r.min_conductance, Ratio::new(1, 9));
        assert_eq!(conductance(&g, &r.min_conductance_set), r.min_conductance);
        assert_eq!(g_value(&g, &r.max_g_set), r.max_g);
    }

    #[test]
    fn oracle_refuses_large_graphs() {
        assert!(matches!(brute_force_optimum(&path(21)), Err(Error::OracleTooLarge(21))));
        assert!(brute_force_optimum(&path(20)).is_ok());
    }
}
