//! Synthetic graph generators: Erdős–Rényi, Barabási–Albert, Watts–Strogatz,
//! Holme–Kim powerlaw-cluster, and a planted partition with mixing `μ`.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with the
//! spec's `seed` through `seed_from_u64`. Outputs are deterministic per
//! `(spec, seed)`.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{largest_connected_component, Graph, RelabelMap};

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// `G(n, p)`.
    ErdosRenyi { p: f64 },
    /// `G(n, M)`: exactly `edges` distinct edges.
    ErdosRenyiEdges { edges: usize },
    /// `G(n, p)` with `p = d / (n - 1)`, for size sweeps at fixed mean degree.
    ErdosRenyiDegree { d: f64 },
    /// Preferential attachment, `k` edges per new vertex.
    BarabasiAlbert { k: usize },
    /// Ring where each vertex joins its `k` nearest neighbors, rewired with probability `beta`.
    WattsStrogatz { k: usize, beta: f64 },
    /// Preferential attachment with triad-formation probability `p_triangle`.
    PowerlawCluster { k: usize, p_triangle: f64 },
    /// `communities` blocks; expected intra-degree `k_in`, expected fraction
    /// `mu` of each vertex's edges leaving its block.
    Planted { communities: usize, k_in: f64, mu: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub model: Model,
    pub seed: u64,
}

/// Community label per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<Option<usize>>,
    communities: Vec<Vec<usize>>,
}

impl GroundTruth {
    /// From a full labeling; labels are compacted to `0..c` in order of first use.
    pub fn from_labels(raw: &[usize]) -> GroundTruth {
        let mut remap = std::collections::HashMap::new();
        let labels: Vec<Option<usize>> = raw
            .iter()
            .map(|l| {
                let next = remap.len();
                Some(*remap.entry(*l).or_insert(next))
            })
            .collect();
        GroundTruth::from_optional_labels(labels)
    }

    fn from_optional_labels(labels: Vec<Option<usize>>) -> GroundTruth {
        let c = labels.iter().flatten().max().map_or(0, |m| m + 1);
        let mut communities = vec![Vec::new(); c];
        for (v, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                communities[*l].push(v);
            }
        }
        GroundTruth {
            labels,
            communities,
        }
    }

    pub fn label(&self, v: usize) -> Option<usize> {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Restricts to the vertices of a relabeled subgraph; `map` gives the
    /// original id of each new dense id, which must be an old dense id here.
    pub fn restrict(&self, map: &RelabelMap) -> GroundTruth {
        let labels = map
            .originals()
            .iter()
            .map(|&o| self.labels[o as usize])
            .collect::<Vec<_>>();
        let raw: Vec<Option<usize>> = labels;
        // compact
        let mut remap = std::collections::HashMap::new();
        let compact = raw
            .iter()
            .map(|l| {
                l.map(|l| {
                    let next = remap.len();
                    *remap.entry(l).or_insert(next)
                })
            })
            .collect();
        GroundTruth::from_optional_labels(compact)
    }

    /// Label per vertex when every vertex has one.
    pub fn partition(&self) -> Option<Vec<usize>> {
        self.labels.iter().copied().collect()
    }
}

impl Model {
    fn name(&self) -> &'static str {
        match self {
            Model::ErdosRenyi { .. } | Model::ErdosRenyiEdges { .. } | Model::ErdosRenyiDegree { .. } => {
                "er"
            }
            Model::BarabasiAlbert { .. } => "ba",
            Model::WattsStrogatz { .. } => "ws",
            Model::PowerlawCluster { .. } => "plc",
            Model::Planted { .. } => "planted",
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={}", self.model.name(), self.n)?;
        match &self.model {
            Model::ErdosRenyi { p } => write!(f, ",p={p}"),
            Model::ErdosRenyiEdges { edges } => write!(f, ",m={edges}"),
            Model::ErdosRenyiDegree { d } => write!(f, ",d={d}"),
            Model::BarabasiAlbert { k } => write!(f, ",k={k}"),
            Model::WattsStrogatz { k, beta } => write!(f, ",k={k},beta={beta}"),
            Model::PowerlawCluster { k, p_triangle } => write!(f, ",k={k},p={p_triangle}"),
            Model::Planted {
                communities,
                k_in,
                mu,
            } => write!(f, ",c={communities},k_in={k_in},mu={mu}"),
        }
    }
}

/// Parses `model:key=value,...`, e.g. `er:n=1000,p=0.01` or
/// `planted:n=2000,c=4,k_in=12,mu=0.2`. The seed defaults to 0.
impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenSpec> {
        let (model, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::param(format!("generator spec {s:?} lacks 'model:'")))?;
        let mut kv = std::collections::HashMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::param(format!("expected key=value, got {part:?}")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |key: &str| -> Result<&str> {
            kv.get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::param(format!("generator spec {s:?} needs {key}=")))
        };
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::param(format!("bad value {v:?} for {key}")))
        }
        let n: usize = num("n", get("n")?)?;
        let seed: u64 = match kv.get("seed") {
            Some(v) => num("seed", v)?,
            None => 0,
        };
        let model = match model.trim().to_ascii_lowercase().as_str() {
            "er" => match (kv.get("p"), kv.get("m"), kv.get("d")) {
                (Some(p), _, _) => Model::ErdosRenyi { p: num("p", p)? },
                (None, Some(m), _) => Model::ErdosRenyiEdges { edges: num("m", m)? },
                (None, None, Some(d)) => Model::ErdosRenyiDegree { d: num("d", d)? },
                _ => return Err(Error::param("er needs p=, m= or d=")),
            },
            "ba" => Model::BarabasiAlbert { k: num("k", get("k")?)? },
            "ws" => Model::WattsStrogatz {
                k: num("k", get("k")?)?,
                beta: num("beta", get("beta")?)?,
            },
            "plc" => Model::PowerlawCluster {
                k: num("k", get("k")?)?,
                p_triangle: num("p", get("p")?)?,
            },
            "planted" => Model::Planted {
                communities: num("c", get("c")?)?,
                k_in: num("k_in", get("k_in")?)?,
                mu: num("mu", get("mu")?)?,
            },
            other => return Err(Error::param(format!("unknown generator model {other:?}"))),
        };
        Ok(GenSpec { n, model, seed })
    }
}

impl GenSpec {
    pub fn new(n: usize, model: Model, seed: u64) -> GenSpec {
        GenSpec { n, model, seed }
    }

    pub fn with_seed(&self, seed: u64) -> GenSpec {
        GenSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::param("n must be at least 2"));
        }
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must lie in [0, 1], got {p}")))
            }
        };
        match self.model {
            Model::ErdosRenyi { p } => prob("p", p),
            Model::ErdosRenyiDegree { d } => prob("d / (n - 1)", d / (n - 1) as f64),
            Model::ErdosRenyiEdges { edges } => {
                if edges as u128 > n as u128 * (n as u128 - 1) / 2 {
                    Err(Error::param("more edges than vertex pairs"))
                } else {
                    Ok(())
                }
            }
            Model::BarabasiAlbert { k } | Model::PowerlawCluster { k, .. } if k == 0 || k >= n => {
                Err(Error::param(format!("attachment count k={k} must satisfy 1 <= k < n")))
            }
            Model::BarabasiAlbert { .. } => Ok(()),
            Model::PowerlawCluster { p_triangle, .. } => prob("p", p_triangle),
            Model::WattsStrogatz { k, beta } => {
                if k == 0 || k % 2 == 1 || k >= n {
                    Err(Error::param(format!("ring degree k={k} must be even with 2 <= k < n")))
                } else {
                    prob("beta", beta)
                }
            }
            Model::Planted {
                communities,
                k_in,
                mu,
            } => {
                if communities == 0 || communities > n {
                    return Err(Error::param("community count must lie in 1..=n"));
                }
                if !(0.0..1.0).contains(&mu) {
                    return Err(Error::param(format!("mu must lie in [0, 1), got {mu}")));
                }
                let size = n / communities;
                if !(k_in > 0.0) || k_in > (size.max(2) - 1) as f64 {
                    return Err(Error::param("k_in must be positive and below the community size"));
                }
                if communities > 1 {
                    let k_out = k_in * mu / (1.0 - mu);
                    if k_out > (n - size) as f64 {
                        return Err(Error::param("mu too large for the graph size"));
                    }
                } else if mu > 0.0 {
                    return Err(Error::param("mu > 0 needs at least two communities"));
                }
                Ok(())
            }
        }
    }
}

/// Generates the graph (and ground truth for the planted model). Isolated
/// vertices may remain; callers take the largest component before use.
pub fn generate(spec: &GenSpec) -> Result<(Graph, Option<GroundTruth>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let out = match spec.model {
        Model::ErdosRenyi { p } => (Graph::from_edges(n, gnp(&mut rng, n, p)), None),
        Model::ErdosRenyiEdges { edges } => (Graph::from_edges(n, gnm(&mut rng, n, edges)), None),
        Model::ErdosRenyiDegree { d } => {
            (Graph::from_edges(n, gnp(&mut rng, n, d / (n - 1) as f64)), None)
        }
        Model::BarabasiAlbert { k } => (barabasi_albert(&mut rng, n, k), None),
        Model::WattsStrogatz { k, beta } => (watts_strogatz(&mut rng, n, k, beta), None),
        Model::PowerlawCluster { k, p_triangle } => (powerlaw_cluster(&mut rng, n, k, p_triangle), None),
        Model::Planted {
            communities,
            k_in,
            mu,
        } => {
            let (g, labels) = planted(&mut rng, n, communities, k_in, mu);
            (g, Some(GroundTruth::from_labels(&labels)))
        }
    };
    Ok(out)
}

/// [`generate`] reduced to the largest connected component. The map sends
/// each kept vertex to its generated id.
pub fn generate_lcc(spec: &GenSpec) -> Result<(Graph, RelabelMap, Option<GroundTruth>)> {
    let (g, truth) = generate(spec)?;
    let (lcc, map) = largest_connected_component(&g, &RelabelMap::identity(g.vertex_count()))?;
    let truth = truth.map(|t| t.restrict(&map));
    Ok((lcc, map, truth))
}

/// Skips geometrically distributed gaps over the pair index space.
fn geometric_skip<R: Rng>(rng: &mut R, p: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    (u.ln() / (1.0 - p).ln()).floor() as u64
}

fn gnp<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if p <= 0.0 {
        return edges;
    }
    // Batagelj–Brandes walk over pairs (v, w) with w < v.
    let (mut v, mut w) = (1u64, u64::MAX);
    let n = n as u64;
    while v < n {
        w = w.wrapping_add(1).wrapping_add(geometric_skip(rng, p));
        while w >= v && v < n {
            w -= v;
            v += 1;
        }
        if v < n {
            edges.push((v as usize, w as usize));
        }
    }
    edges
}

fn gnm<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<(usize, usize)> {
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    edges
}

/// Starts from a `(k+1)`-clique; each later vertex links to `k` distinct
/// targets drawn proportional to degree.
fn barabasi_albert<R: Rng>(rng: &mut R, n: usize, k: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * k);
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * k);
    let seed = (k + 1).min(n);
    for u in 0..seed {
        for v in u + 1..seed {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut chosen = Vec::with_capacity(k);
    for v in seed..n {
        chosen.clear();
        while chosen.len() < k {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    Graph::from_edges(n, edges)
}

fn watts_strogatz<R: Rng>(rng: &mut R, n: usize, k: usize, beta: f64) -> Graph {
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    if beta > 0.0 {
        for j in 1..=k / 2 {
            for u in 0..n {
                let v = (u + j) % n;
                if rng.gen::<f64>() >= beta || !adj[u].contains(&v) {
                    continue;
                }
                if adj[u].len() >= n - 1 {
                    continue;
                }
                let w = loop {
                    let w = rng.gen_range(0..n);
                    if w != u && !adj[u].contains(&w) {
                        break w;
                    }
                };
                adj[u].remove(&v);
                adj[v].remove(&u);
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
    }
    let mut edges = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        let mut sorted: Vec<usize> = nbrs.iter().copied().filter(|&v| v > u).collect();
        sorted.sort_unstable();
        edges.extend(sorted.into_iter().map(|v| (u, v)));
    }
    Graph::from_edges(n, edges)
}

/// Holme–Kim: preferential attachment where, after each attachment, a
/// triad-closing edge to a neighbor of the last target follows with
/// probability `p_triangle`.
fn powerlaw_cluster<R: Rng>(rng: &mut R, n: usize, k: usize, p_triangle: f64) -> Graph {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * k);
    let seed = (k + 1).min(n);
    let link = |adj: &mut Vec<Vec<usize>>, endpoints: &mut Vec<usize>, u: usize, v: usize| {
        adj[u].push(v);
        adj[v].push(u);
        endpoints.extend([u, v]);
    };
    for u in 0..seed {
        for v in u + 1..seed {
            link(&mut adj, &mut endpoints, u, v);
        }
    }
    for v in seed..n {
        let mut added = 0;
        let mut last: Option<usize> = None;
        while added < k {
            let triad = last.filter(|_| rng.gen::<f64>() < p_triangle).and_then(|t| {
                let options: Vec<usize> = adj[t]
                    .iter()
                    .copied()
                    .filter(|&w| w != v && !adj[v].contains(&w))
                    .collect();
                options.choose(rng).copied()
            });
            let target = match triad {
                Some(w) => w,
                None => loop {
                    let t = endpoints[rng.gen_range(0..endpoints.len())];
                    if t != v && !adj[v].contains(&t) {
                        break t;
                    }
                },
            };
            link(&mut adj, &mut endpoints, v, target);
            if triad.is_none() {
                last = Some(target);
            }
            added += 1;
        }
    }
    let edges: Vec<(usize, usize)> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect();
    Graph::from_edges(n, edges)
}

/// Block model: contiguous blocks of near-equal size; intra-block pairs
/// linked with probability `k_in / (size - 1)`, inter-block pairs with
/// probability `k_out / (n - size)` where `k_out = k_in·μ / (1 - μ)`.
fn planted<R: Rng>(rng: &mut R, n: usize, c: usize, k_in: f64, mu: f64) -> (Graph, Vec<usize>) {
    let base = n / c;
    let extra = n % c;
    let mut labels = Vec::with_capacity(n);
    let mut starts = Vec::with_capacity(c + 1);
    for b in 0..c {
        starts.push(labels.len());
        let size = base + usize::from(b < extra);
        labels.extend(std::iter::repeat_n(b, size));
    }
    starts.push(n);

    let size_of = |b: usize| starts[b + 1] - starts[b];
    let mut edges = Vec::new();
    for (b, &start) in starts[..c].iter().enumerate() {
        let s = size_of(b);
        if s >= 2 {
            let p_in = (k_in / (s - 1) as f64).min(1.0);
            for (u, v) in gnp(rng, s, p_in) {
                edges.push((start + u, start + v));
            }
        }
    }
    if c > 1 && mu > 0.0 {
        let k_out = k_in * mu / (1.0 - mu);
        for a in 0..c {
            let p_out = (k_out / (n - size_of(a)) as f64).min(1.0);
            for b in a + 1..c {
                for (u, v) in bipartite(rng, size_of(a), size_of(b), p_out) {
                    edges.push((starts[a] + u, starts[b] + v));
                }
            }
        }
    }
    (Graph::from_edges(n, edges), labels)
}

fn bipartite<R: Rng>(rng: &mut R, left: usize, right: usize, p: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if p <= 0.0 {
        return out;
    }
    let total = (left * right) as u64;
    let mut idx = geometric_skip(rng, p);
    while idx < total {
        out.push(((idx / right as u64) as usize, (idx % right as u64) as usize));
        idx += 1 + geometric_skip(rng, p);
    }
    out
}

/// Ground truth in the SNAP `*.cmty` layout: one community per line,
/// whitespace-separated vertex ids. A vertex listed twice keeps its first
/// community. Ids are translated through `map`; unknown ids are skipped.
pub fn parse_communities<R: BufRead>(reader: R, map: &RelabelMap) -> Result<GroundTruth> {
    let mut labels = vec![None; map.len()];
    let mut next = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut any = false;
        for tok in t.split_whitespace() {
            let id: u64 = tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("vertex id {tok:?} is not a non-negative integer"),
            })?;
            if let Some(v) = map.dense(id) {
                if labels[v].is_none() {
                    labels[v] = Some(next);
                    any = true;
                }
            }
        }
        if any {
            next += 1;
        }
    }
    if next == 0 {
        return Err(Error::param("ground truth has no community on this graph"));
    }
    Ok(GroundTruth::from_optional_labels(labels))
}

/// LFR-style label file: one `vertex community` pair per line.
pub fn parse_labels<R: BufRead>(reader: R, map: &RelabelMap) -> Result<GroundTruth> {
    let mut labels = vec![None; map.len()];
    let mut remap = std::collections::HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut toks = t.split_whitespace();
        let mut next_num = || -> Result<u64> {
            let tok = toks.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected 'vertex community'".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("{tok:?} is not a non-negative integer"),
            })
        };
        let (v, c) = (next_num()?, next_num()?);
        if let Some(v) = map.dense(v) {
            let next = remap.len();
            labels[v].get_or_insert(*remap.entry(c).or_insert(next));
        }
    }
    if remap.is_empty() {
        return Err(Error::param("label file has no vertex of this graph"));
    }
    Ok(GroundTruth::from_optional_labels(labels))
}

/// Reads either layout: two-column lines are taken as `vertex community`
/// pairs only when the file name ends in `.labels` or `.dat`.
pub fn read_ground_truth(path: impl AsRef<Path>, map: &RelabelMap) -> Result<GroundTruth> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if ext == "labels" || ext == "dat" {
        parse_labels(reader, map)
    } else {
        parse_communities(reader, map)
    }
}

pub fn write_communities<W: Write>(truth: &GroundTruth, map: &RelabelMap, mut out: W) -> Result<()> {
    for community in truth.communities() {
        let line: Vec<String> = community.iter().map(|&v| map.original(v).to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Fraction of edges whose endpoints carry different labels.
pub fn cross_edge_fraction(g: &Graph, truth: &GroundTruth) -> f64 {
    let m = g.edge_count();
    if m == 0 {
        return 0.0;
    }
    let cross = g.edges().filter(|&(u, v)| truth.label(u) != truth.label(v)).count();
    cross as f64 / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str, seed: u64) -> GenSpec {
        s.parse::<GenSpec>().unwrap().with_seed(seed)
    }

    #[test]
    fn er_p1_is_complete() {
        let (g, _) = generate(&spec("er:n=4,p=1", 3)).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn er_density_roughly_right() {
        let (g, _) = generate(&spec("er:n=2000,p=0.005", 1)).unwrap();
        let expected = 0.005 * 2000.0 * 1999.0 / 2.0;
        assert!((g.edge_count() as f64 - expected).abs() < 0.1 * expected);
        let (g, _) = generate(&spec("er:n=100,m=250", 1)).unwrap();
        assert_eq!(g.edge_count(), 250);
    }

    #[test]
    fn ws_beta0_is_ring() {
        let (g, _) = generate(&spec("ws:n=6,k=2,beta=0", 9)).unwrap();
        assert_eq!(g, crate::fixtures::cycle(6));
    }

    #[test]
    fn ws_rewiring_keeps_edge_count() {
        let (g, _) = generate(&spec("ws:n=200,k=6,beta=0.3", 9)).unwrap();
        assert_eq!(g.edge_count(), 600);
    }

    #[test]
    fn ba_edge_count() {
        let (g, _) = generate(&spec("ba:n=500,k=3", 2)).unwrap();
        assert_eq!(g.edge_count(), 6 + (500 - 4) * 3);
        assert!(g.is_connected());
    }

    #[test]
    fn plc_has_triangles_and_right_size() {
        let (g, _) = generate(&spec("plc:n=500,k=3,p=0.8", 2)).unwrap();
        assert_eq!(g.edge_count(), 6 + (500 - 4) * 3);
        assert!(g.is_connected());
    }

    #[test]
    fn infeasible_params() {
        assert!(generate(&spec("ba:n=5,k=5", 0)).is_err());
        assert!(generate(&spec("ws:n=10,k=3,beta=0.1", 0)).is_err());
        assert!(generate(&spec("er:n=10,p=1.5", 0)).is_err());
        assert!(generate(&spec("planted:n=100,c=2,k_in=8,mu=1", 0)).is_err());
        assert!("zz:n=3".parse::<GenSpec>().is_err());
        assert!("er:p=0.1".parse::<GenSpec>().is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&spec("planted:n=300,c=3,k_in=6,mu=0.2", 5)).unwrap();
        let b = generate(&spec("planted:n=300,c=3,k_in=6,mu=0.2", 5)).unwrap();
        assert_eq!(a, b);
        let c = generate(&spec("planted:n=300,c=3,k_in=6,mu=0.2", 6)).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn planted_mixing_matches_mu() {
        let mut total = 0.0;
        for seed in 0..20 {
            let (g, truth) = generate(&spec("planted:n=100,c=2,k_in=8,mu=0.1", 42 + seed)).unwrap();
            total += cross_edge_fraction(&g, &truth.unwrap());
        }
        let mean = total / 20.0;
        assert!((mean - 0.1).abs() <= 0.3 * 0.1, "mean cross fraction {mean}");
    }

    #[test]
    fn spec_display_round_trips() {
        let s = spec("planted:n=300,c=3,k_in=6,mu=0.2", 0);
        assert_eq!(s.to_string().parse::<GenSpec>().unwrap(), s);
    }

    #[test]
    fn community_file_round_trip() {
        let truth = GroundTruth::from_labels(&[0, 0, 1, 1, 2]);
        let map = RelabelMap::from_originals(vec![10, 11, 12, 13, 14]);
        let mut buf = Vec::new();
        write_communities(&truth, &map, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "10 11\n12 13\n14\n");
        assert_eq!(parse_communities(buf.as_slice(), &map).unwrap(), truth);
        let labels = "10 5\n11 5\n12 7\n13 7\n14 9\n";
        assert_eq!(parse_labels(labels.as_bytes(), &map).unwrap(), truth);
    }
}
