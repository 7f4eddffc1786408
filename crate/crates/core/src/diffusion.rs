//! Seeded graph diffusions and the degree-normalized sweep over their support.
//!
//! All three diffusions keep their state in [`SparseVec`], which iterates in
//! insertion order, so results are bit-for-bit reproducible.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::peel::{grow_sweep, ClusterResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusionKind {
    TruncatedWalk,
    PersonalizedPageRank,
    HeatKernel,
}

impl fmt::Display for DiffusionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiffusionKind::TruncatedWalk => "trw",
            DiffusionKind::PersonalizedPageRank => "ppr",
            DiffusionKind::HeatKernel => "hk",
        })
    }
}

/// Diffusion parameters. `eps = None` means `1/m` for the graph at hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub alpha: f64,
    pub eps: Option<f64>,
    pub t: f64,
    pub n_iters: usize,
}

impl Default for DiffusionParams {
    fn default() -> Self {
        DiffusionParams {
            alpha: 0.01,
            eps: None,
            t: 10.0,
            n_iters: 10,
        }
    }
}

impl DiffusionParams {
    pub fn eps_for(&self, g: &Graph) -> f64 {
        self.eps.unwrap_or(1.0 / g.edge_count().max(1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if let Some(eps) = self.eps {
            if !(eps > 0.0) {
                return Err(Error::param(format!("eps must be positive, got {eps}")));
            }
        }
        if !(self.t > 0.0) {
            return Err(Error::param(format!("t must be positive, got {}", self.t)));
        }
        if self.n_iters == 0 {
            return Err(Error::param("iteration count must be at least 1"));
        }
        Ok(())
    }
}

/// Sparse vector with insertion-ordered iteration.
#[derive(Debug, Clone, Default)]
pub struct SparseVec {
    slot: HashMap<u32, usize>,
    entries: Vec<(u32, f64)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec::default()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.slot.get(&(v as u32)).map_or(0.0, |&i| self.entries[i].1)
    }

    pub fn add(&mut self, v: usize, x: f64) -> f64 {
        let entries = &mut self.entries;
        let i = *self.slot.entry(v as u32).or_insert_with(|| {
            entries.push((v as u32, 0.0));
            entries.len() - 1
        });
        self.entries[i].1 += x;
        self.entries[i].1
    }

    pub fn set(&mut self, v: usize, x: f64) {
        match self.slot.get(&(v as u32)) {
            Some(&i) => self.entries[i].1 = x,
            None => {
                self.add(v, x);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|&(v, x)| (v as usize, x))
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A probability distribution with sparse support.
#[derive(Debug, Clone)]
pub struct SparseDist {
    /// Strictly positive masses, ascending by vertex.
    pub mass: Vec<(usize, f64)>,
    pub kind: DiffusionKind,
    pub seed_vertex: usize,
    pub params: String,
    /// Leftover residual mass (push methods); zero for the truncated walk.
    pub residual_mass: f64,
    /// Largest `r(u) / d(u)` left at termination.
    pub max_residual_ratio: f64,
    /// Adjacency entries visited.
    pub work: u64,
}

impl SparseDist {
    fn from_sparse(v: &SparseVec, kind: DiffusionKind, q: usize, params: String) -> SparseDist {
        let mut mass: Vec<(usize, f64)> = v.iter().filter(|&(_, x)| x > 0.0).collect();
        mass.sort_unstable_by_key(|e| e.0);
        SparseDist {
            mass,
            kind,
            seed_vertex: q,
            params,
            residual_mass: 0.0,
            max_residual_ratio: 0.0,
            work: 0,
        }
    }

    pub fn support(&self) -> usize {
        self.mass.len()
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().map(|e| e.1).sum()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.mass
            .binary_search_by_key(&v, |e| e.0)
            .map_or(0.0, |i| self.mass[i].1)
    }
}

fn check_vertex(g: &Graph, q: usize) -> Result<()> {
    if q >= g.vertex_count() {
        return Err(Error::param(format!("seed vertex {q} out of range")));
    }
    Ok(())
}

/// The truncation operator on one entry: `value` survives iff
/// `value >= degree·eps`.
pub fn truncate(value: f64, degree: usize, eps: f64) -> f64 {
    if value >= degree as f64 * eps {
        value
    } else {
        0.0
    }
}

/// `Z_0 = χ_q`, `Z_i = Tr(Z_{i-1} P)` with `P = D^{-1} A`; entries below
/// `d(u)·eps` are zeroed after every step. Returns `Z_N`.
pub fn truncated_random_walk(g: &Graph, q: usize, eps: f64, n_iters: usize) -> Result<SparseDist> {
    check_vertex(g, q)?;
    if !(eps >= 0.0) {
        return Err(Error::param("eps must be non-negative"));
    }
    let mut z = SparseVec::new();
    z.add(q, 1.0);
    let mut work = 0u64;
    for _ in 0..n_iters {
        let mut next = SparseVec::new();
        for (u, x) in z.iter() {
            let d = g.degree(u);
            if d == 0 {
                continue;
            }
            let share = x / d as f64;
            for &v in g.neighbors(u) {
                next.add(v as usize, share);
            }
            work += d as u64;
        }
        let mut kept = SparseVec::new();
        for (u, x) in next.iter() {
            let x = truncate(x, g.degree(u), eps);
            if x > 0.0 {
                kept.add(u, x);
            }
        }
        z = kept;
    }
    let mut dist = SparseDist::from_sparse(
        &z,
        DiffusionKind::TruncatedWalk,
        q,
        format!("q={q},eps={eps},iters={n_iters}"),
    );
    dist.work = work;
    Ok(dist)
}

/// Push approximation of the α-discount walk's stopping distribution.
///
/// Pushing `u` moves `α·r(u)` into the estimate and spreads `(1-α)·r(u)`
/// evenly over `N(u)`. Vertices are served FIFO; on return every residual
/// satisfies `r(u) < eps·d(u)`, and estimate plus residual mass is 1.
pub fn ppr_push(g: &Graph, q: usize, alpha: f64, eps: f64) -> Result<SparseDist> {
    check_vertex(g, q)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(eps > 0.0) {
        return Err(Error::param(format!("eps must be positive, got {eps}")));
    }
    let mut p = SparseVec::new();
    let mut r = SparseVec::new();
    let mut queued: HashSet<u32> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut work = 0u64;
    r.add(q, 1.0);
    if 1.0 >= eps * g.degree(q) as f64 && g.degree(q) > 0 {
        queue.push_back(q);
        queued.insert(q as u32);
    }
    while let Some(u) = queue.pop_front() {
        queued.remove(&(u as u32));
        let ru = r.get(u);
        let d = g.degree(u);
        p.add(u, alpha * ru);
        r.set(u, 0.0);
        let share = (1.0 - alpha) * ru / d as f64;
        for &v in g.neighbors(u) {
            let v = v as usize;
            let rv = r.add(v, share);
            if rv >= eps * g.degree(v) as f64 && queued.insert(v as u32) {
                queue.push_back(v);
            }
        }
        work += 1 + d as u64;
    }
    let mut dist = SparseDist::from_sparse(
        &p,
        DiffusionKind::PersonalizedPageRank,
        q,
        format!("q={q},alpha={alpha},eps={eps}"),
    );
    dist.residual_mass = r.sum();
    dist.max_residual_ratio = r
        .iter()
        .map(|(u, x)| x / g.degree(u).max(1) as f64)
        .fold(0.0, f64::max);
    dist.work = work;
    Ok(dist)
}

/// Poisson weights `η(k) = e^{-t} t^k / k!` for `k = 0..=k_max`.
pub fn poisson_weights(t: f64, k_max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(k_max + 1);
    let mut cur = (-t).exp();
    for k in 0..=k_max {
        if k > 0 {
            cur *= t / k as f64;
        }
        w.push(cur);
    }
    w
}

/// Smallest `K` with Poisson tail `Σ_{k>K} η(k) < tail`.
pub fn taylor_order(t: f64, tail: f64) -> usize {
    let mut cdf = 0.0;
    let mut term = (-t).exp();
    let mut k = 0usize;
    loop {
        cdf += term;
        if 1.0 - cdf < tail || k >= 10_000 {
            return k;
        }
        k += 1;
        term *= t / k as f64;
    }
}

/// Heat-kernel relaxation.
///
/// Residual entries `r(v, j)` carry mass that has taken `j` walk steps,
/// already weighted by `η(j)`. Processing `(v, j)` adds it to the estimate and
/// pushes `r·t/(j+1)` over `N(v)` into stage `j + 1`; stage `K` is absorbed
/// directly. `(v, j)` is processed once `r(v, j) >= eps·d(v) / (K·ψ_j)`,
/// where `ψ_j = Σ_{i=0}^{K-j} j! t^i / (i+j)!` weighs what that residual
/// would still contribute. `K` cuts the Poisson tail below `eps/2`.
pub fn hk_relax(g: &Graph, q: usize, t: f64, eps: f64) -> Result<SparseDist> {
    check_vertex(g, q)?;
    if !(t > 0.0) {
        return Err(Error::param(format!("t must be positive, got {t}")));
    }
    if !(eps > 0.0) {
        return Err(Error::param(format!("eps must be positive, got {eps}")));
    }
    let k_max = taylor_order(t, eps / 2.0).max(1);
    let mut psi = vec![1.0; k_max + 1];
    for j in (0..k_max).rev() {
        psi[j] = 1.0 + t / (j + 1) as f64 * psi[j + 1];
    }
    let threshold = |v: usize, j: usize| eps * g.degree(v) as f64 / (k_max as f64 * psi[j]);

    let mut x = SparseVec::new();
    let mut r: HashMap<(u32, u32), f64> = HashMap::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut work = 0u64;
    r.insert((q as u32, 0), (-t).exp());
    queue.push_back((q, 0));

    while let Some((v, j)) = queue.pop_front() {
        let rvj = r.remove(&(v as u32, j as u32)).unwrap_or(0.0);
        x.add(v, rvj);
        let d = g.degree(v);
        if d == 0 {
            continue;
        }
        let share = rvj * t / ((j + 1) as f64 * d as f64);
        work += 1 + d as u64;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if j + 1 == k_max {
                x.add(u, share);
                continue;
            }
            let key = (u as u32, (j + 1) as u32);
            let before = r.get(&key).copied().unwrap_or(0.0);
            let after = before + share;
            r.insert(key, after);
            let th = threshold(u, j + 1);
            if before < th && after >= th {
                queue.push_back((u, j + 1));
            }
        }
    }

    let mut dist = SparseDist::from_sparse(
        &x,
        DiffusionKind::HeatKernel,
        q,
        format!("q={q},t={t},eps={eps},K={k_max}"),
    );
    dist.residual_mass = r.values().sum();
    dist.max_residual_ratio = r
        .iter()
        .map(|(&(v, _), &m)| m / g.degree(v as usize).max(1) as f64)
        .fold(0.0, f64::max);
    dist.work = work;
    Ok(dist)
}

/// Order of the sweep: support vertices by descending `π(u)/d(u)`, ties by id.
pub fn sweep_order(g: &Graph, pi: &SparseDist) -> Vec<usize> {
    let mut ranked: Vec<(usize, f64)> = pi
        .mass
        .iter()
        .map(|&(u, x)| (u, x / g.degree(u).max(1) as f64))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.into_iter().map(|e| e.0).collect()
}

/// Min-conductance prefix with `vol <= m` of the degree-normalized order.
pub fn diffusion_sweep(g: &Graph, pi: &SparseDist) -> Result<ClusterResult> {
    if pi.mass.is_empty() {
        return Err(Error::NoCandidate);
    }
    let order = sweep_order(g, pi);
    Ok(grow_sweep(g, &order, &pi.kind.to_string())?.with_params(pi.params.clone()))
}

/// Runs the diffusion from `q` and sweeps it. An empty support (nothing
/// survived truncation) yields the singleton `{q}`, whose conductance is 1.
pub fn local_cluster(
    g: &Graph,
    kind: DiffusionKind,
    q: usize,
    params: &DiffusionParams,
) -> Result<ClusterResult> {
    params.validate()?;
    let eps = params.eps_for(g);
    let pi = match kind {
        DiffusionKind::TruncatedWalk => truncated_random_walk(g, q, eps, params.n_iters)?,
        DiffusionKind::PersonalizedPageRank => ppr_push(g, q, params.alpha, eps)?,
        DiffusionKind::HeatKernel => hk_relax(g, q, params.t, eps)?,
    };
    match diffusion_sweep(g, &pi) {
        Ok(r) => Ok(r),
        Err(Error::NoCandidate) => {
            let mut r = grow_sweep(g, &[q], &kind.to_string())?.with_params(pi.params);
            r.degenerate = true;
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{barbell, complete};
    use crate::ratio::Ratio;

    fn k2() -> Graph {
        Graph::from_edges(2, [(0, 1)])
    }

    #[test]
    fn truncate_entry() {
        assert_eq!(truncate(0.5, 10, 0.01), 0.5);
        assert_eq!(truncate(0.05, 10, 0.01), 0.0);
    }

    #[test]
    fn truncation_threshold() {
        // star with 10 leaves: centre degree 10
        let g = crate::fixtures::star(10);
        // one step from a leaf puts all mass (1.0) on the centre: kept at 1.0 >= 10·0.01
        let z = truncated_random_walk(&g, 1, 0.01, 1).unwrap();
        assert_eq!(z.get(0), 1.0);
        // two steps: each leaf gets 0.1 >= 1·0.05; with eps 0.2 they are zeroed
        let z = truncated_random_walk(&g, 1, 0.05, 2).unwrap();
        assert_eq!(z.support(), 10);
        let z = truncated_random_walk(&g, 1, 0.2, 2).unwrap();
        assert_eq!(z.support(), 0);
    }

    #[test]
    fn truncated_walk_on_k2_returns_home() {
        let z = truncated_random_walk(&k2(), 0, 0.0, 2).unwrap();
        assert_eq!(z.mass, vec![(0, 1.0)]);
    }

    #[test]
    fn ppr_k2_closed_form() {
        let eps = 1e-9;
        let p = ppr_push(&k2(), 0, 0.5, eps).unwrap();
        let vol = 2.0;
        assert!((p.get(0) - 2.0 / 3.0).abs() <= eps * vol);
        assert!((p.get(1) - 1.0 / 3.0).abs() <= eps * vol);
    }

    #[test]
    fn ppr_mass_conservation_and_residual_bound() {
        let g = barbell();
        let eps = 1e-4;
        let p = ppr_push(&g, 0, 0.15, eps).unwrap();
        assert!((p.total() + p.residual_mass - 1.0).abs() < 1e-10);
        assert!(p.max_residual_ratio < eps);
        assert!(p.total() <= 1.0 + 1e-12);
    }

    #[test]
    fn ppr_high_alpha_stays_home() {
        let p = ppr_push(&complete(5), 2, 0.99, 1e-12).unwrap();
        assert!(p.get(2) >= 0.99);
    }

    #[test]
    fn ppr_rejects_bad_params() {
        assert!(ppr_push(&k2(), 0, 1.0, 1e-3).is_err());
        assert!(ppr_push(&k2(), 0, 0.5, 0.0).is_err());
        assert!(ppr_push(&k2(), 5, 0.5, 1e-3).is_err());
    }

    #[test]
    fn poisson_weights_normalize() {
        let w = poisson_weights(3.0, 60);
        let s: f64 = w.iter().sum();
        assert!(s <= 1.0 + 1e-15 && s > 1.0 - 1e-12);
        let k = taylor_order(10.0, 1e-6);
        let tail = 1.0 - poisson_weights(10.0, k).iter().sum::<f64>();
        assert!(tail < 1e-6);
    }

    #[test]
    fn hk_small_t_stays_home() {
        let h = hk_relax(&complete(4), 1, 1e-6, 1e-8).unwrap();
        assert!(h.get(1) >= 1.0 - 1e-5);
    }

    #[test]
    fn hk_mass_at_most_one() {
        let h = hk_relax(&barbell(), 0, 5.0, 1e-6).unwrap();
        assert!(h.total() <= 1.0 + 1e-12);
    }

    #[test]
    fn sweep_recovers_seed_triangle() {
        let g = barbell();
        let p = ppr_push(&g, 0, 0.5, 1e-6).unwrap();
        let r = diffusion_sweep(&g, &p).unwrap();
        assert_eq!(r.members, vec![0, 1, 2]);
        assert_eq!(r.conductance, Ratio::new(1, 7));
    }

    #[test]
    fn sweep_of_point_mass() {
        let g = barbell();
        let pi = SparseDist::from_sparse(
            &{
                let mut s = SparseVec::new();
                s.add(4, 1.0);
                s
            },
            DiffusionKind::PersonalizedPageRank,
            4,
            String::new(),
        );
        let r = diffusion_sweep(&g, &pi).unwrap();
        assert_eq!(r.members, vec![4]);
    }

    #[test]
    fn uniform_distribution_sweeps_by_ascending_degree() {
        let g = barbell();
        let mut s = SparseVec::new();
        for v in 0..6 {
            s.add(v, 1.0 / 6.0);
        }
        let pi = SparseDist::from_sparse(&s, DiffusionKind::HeatKernel, 0, String::new());
        assert_eq!(sweep_order(&g, &pi), vec![0, 1, 4, 5, 2, 3]);
    }

    #[test]
    fn empty_support_falls_back_to_seed() {
        let g = barbell();
        let params = DiffusionParams {
            eps: Some(10.0),
            ..DiffusionParams::default()
        };
        let r = local_cluster(&g, DiffusionKind::PersonalizedPageRank, 2, &params).unwrap();
        assert_eq!(r.members, vec![2]);
        assert!(r.degenerate);
        assert!(diffusion_sweep(&g, &ppr_push(&g, 2, 0.5, 10.0).unwrap()).is_err());
    }
}
