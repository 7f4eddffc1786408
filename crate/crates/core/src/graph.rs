//! Immutable undirected simple graphs in offset/target (CSR) layout.
//!
//! Every other module reads this structure. Vertices are dense ids `0..n`;
//! the ids that appeared in the input file are kept in a [`RelabelMap`].

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds a simple graph on `n` vertices. Self-loops are dropped and
    /// parallel edges (in either orientation) collapse to one.
    ///
    /// # Panics
    /// If an endpoint is `>= n` or `n` does not fit in `u32`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        assert!(n <= u32::MAX as usize, "vertex count exceeds u32 range");
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u == v {
                continue;
            }
            pairs.push((u as u32, v as u32));
            pairs.push((v as u32, u as u32));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, v)| v).collect();
        Graph { offsets, targets }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbors of `v`, strictly ascending.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Sum of all degrees, `2m`.
    pub fn total_volume(&self) -> u64 {
        self.targets.len() as u64
    }

    pub fn volume(&self, set: &[usize]) -> u64 {
        set.iter().map(|&v| self.degree(v) as u64).sum()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(move |&v| (u, v as usize))
                .filter(|&(u, v)| u < v)
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && component_labels(self).1 == 1
    }

    /// Approximate heap footprint of the adjacency arrays.
    pub fn heap_bytes(&self) -> usize {
        self.offsets.len() * std::mem::size_of::<usize>() + self.targets.len() * 4
    }

    /// Builds a membership mask for `set`.
    ///
    /// # Panics
    /// On out-of-range or repeated vertices.
    pub fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in set {
            assert!(v < mask.len(), "vertex {v} out of range");
            assert!(!mask[v], "vertex {v} listed twice");
            mask[v] = true;
        }
        mask
    }
}

/// Bijection between dense ids and the ids found in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabelMap {
    original: Vec<u64>,
    dense: HashMap<u64, usize>,
}

impl RelabelMap {
    pub fn identity(n: usize) -> RelabelMap {
        RelabelMap::from_originals((0..n as u64).collect())
    }

    /// # Panics
    /// If `original` contains duplicates.
    pub fn from_originals(original: Vec<u64>) -> RelabelMap {
        let dense: HashMap<u64, usize> =
            original.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        assert_eq!(dense.len(), original.len(), "relabel map is not injective");
        RelabelMap { original, dense }
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn original(&self, dense: usize) -> u64 {
        self.original[dense]
    }

    pub fn dense(&self, original: u64) -> Option<usize> {
        self.dense.get(&original).copied()
    }

    pub fn originals(&self) -> &[u64] {
        &self.original
    }
}

/// Reads a SNAP-style edge list: `#` comment lines, then one `u v` pair of
/// non-negative integers per line. Ids are relabeled densely in order of
/// first appearance.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Graph, RelabelMap)> {
    let mut originals: Vec<u64> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |id: u64| -> usize {
        *index.entry(id).or_insert_with(|| {
            originals.push(id);
            originals.len() - 1
        })
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {what} vertex id"),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("{what} vertex id {tok:?} is not a non-negative integer"),
            })
        };
        let u = next_id("source")?;
        let v = next_id("target")?;
        if u == v {
            continue;
        }
        edges.push((intern(u), intern(v)));
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = Graph::from_edges(originals.len(), edges);
    Ok((graph, RelabelMap::from_originals(originals)))
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<(Graph, RelabelMap)> {
    parse_edge_list(BufReader::new(File::open(path)?))
}

/// Writes each edge once as `u v` using original ids.
pub fn write_edge_list<W: Write>(g: &Graph, labels: &RelabelMap, mut out: W) -> Result<()> {
    writeln!(out, "# n={} m={}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", labels.original(u), labels.original(v))?;
    }
    Ok(())
}

/// Connected-component label per vertex and the component count.
/// Components are numbered by their smallest dense vertex id.
pub fn component_labels(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let v = v as usize;
                if label[v] == usize::MAX {
                    label[v] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Induced subgraph on the largest connected component.
///
/// Ties between equally sized components go to the one holding the smallest
/// original id. Isolated vertices never win unless the graph has no edges.
/// The returned map translates new dense ids straight to original ids.
pub fn largest_connected_component(g: &Graph, labels: &RelabelMap) -> Result<(Graph, RelabelMap)> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (comp, count) = component_labels(g);
    let mut size = vec![0usize; count];
    let mut min_original = vec![u64::MAX; count];
    for v in 0..g.vertex_count() {
        size[comp[v]] += 1;
        min_original[comp[v]] = min_original[comp[v]].min(labels.original(v));
    }
    let best = (0..count)
        .min_by(|&a, &b| size[b].cmp(&size[a]).then(min_original[a].cmp(&min_original[b])))
        .expect("non-empty graph has a component");

    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| comp[v] == best).collect();
    if keep.len() == g.vertex_count() {
        return Ok((g.clone(), labels.clone()));
    }
    Ok(induced_subgraph(g, labels, &keep))
}

/// Induced subgraph on `keep` (ascending dense ids), relabeled in that order.
pub fn induced_subgraph(g: &Graph, labels: &RelabelMap, keep: &[usize]) -> (Graph, RelabelMap) {
    let mut new_id = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        new_id[v] = i;
    }
    let edges = keep.iter().flat_map(|&u| {
        let new_id = &new_id;
        g.neighbors(u)
            .iter()
            .filter(move |&&v| new_id[v as usize] != usize::MAX && (u as u32) < v)
            .map(move |&v| (new_id[u], new_id[v as usize]))
    });
    let sub = Graph::from_edges(keep.len(), edges.collect::<Vec<_>>());
    let map = RelabelMap::from_originals(keep.iter().map(|&v| labels.original(v)).collect());
    (sub, map)
}

/// `|N(u) ∩ set|`, recomputed from scratch.
///
/// # Panics
/// If `u` is not a member of `set`.
pub fn induced_degree(g: &Graph, set: &[bool], u: usize) -> usize {
    assert!(set[u], "vertex {u} is not in the set");
    g.neighbors(u).iter().filter(|&&v| set[v as usize]).count()
}

const CACHE_MAGIC: &[u8; 8] = b"PCONCSR\0";
const CACHE_VERSION: u32 = 1;

/// Writes the binary cache: magic, version (u32), n, m (u64), offsets
/// (n + 1 × u64), targets (2m × u32), original ids (n × u64). Little endian.
pub fn save_cache<W: Write>(g: &Graph, labels: &RelabelMap, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&(g.vertex_count() as u64).to_le_bytes())?;
    out.write_all(&(g.edge_count() as u64).to_le_bytes())?;
    for &o in &g.offsets {
        out.write_all(&(o as u64).to_le_bytes())?;
    }
    for &t in &g.targets {
        out.write_all(&t.to_le_bytes())?;
    }
    for &id in labels.originals() {
        out.write_all(&id.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_cache<R: Read>(input: R) -> Result<(Graph, RelabelMap)> {
    let mut input = BufReader::new(input);
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::BadCache("wrong magic bytes".into()));
    }
    let version = read_u32(&mut input)?;
    if version != CACHE_VERSION {
        return Err(Error::BadCache(format!("unsupported version {version}")));
    }
    let n = read_u64(&mut input)? as usize;
    let m = read_u64(&mut input)? as usize;
    let mut offsets = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        offsets.push(read_u64(&mut input)? as usize);
    }
    let mut targets = Vec::with_capacity(2 * m);
    for _ in 0..2 * m {
        targets.push(read_u32(&mut input)?);
    }
    let mut originals = Vec::with_capacity(n);
    for _ in 0..n {
        originals.push(read_u64(&mut input)?);
    }
    if offsets.first() != Some(&0) || offsets.last() != Some(&(2 * m)) {
        return Err(Error::BadCache("offsets do not span the target array".into()));
    }
    if offsets.windows(2).any(|w| w[0] > w[1]) || targets.iter().any(|&t| t as usize >= n) {
        return Err(Error::BadCache("corrupt adjacency".into()));
    }
    let graph = Graph { offsets, targets };
    Ok((graph, RelabelMap::from_originals(originals)))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<(Graph, RelabelMap)> {
        parse_edge_list(text.as_bytes())
    }

    #[test]
    fn path_of_three() {
        let (g, _) = parse("0 1\n1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let d: Vec<_> = (0..3).map(|v| g.degree(v)).collect();
        assert_eq!(d, vec![1, 2, 1]);
    }

    #[test]
    fn duplicates_and_reversed_edges_collapse() {
        let (g, _) = parse("0 1\n1 0\n0 1\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn self_loop_dropped_and_ids_relabeled() {
        let (g, map) = parse("5 5\n5 6\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(map.original(0), 5);
        assert_eq!(map.original(1), 6);
        assert_eq!(map.dense(6), Some(1));
    }

    #[test]
    fn comments_and_tabs() {
        let (g, _) = parse("# FromNodeId\tToNodeId\n3\t4\n\n4\t7\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse("0 -1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("7\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse("# nothing\n"), Err(Error::EmptyGraph)));
        assert!(matches!(parse("3 3\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn lcc_tie_breaks_on_smallest_original_id() {
        let (g, map) = parse("3 4\n4 5\n5 3\n0 1\n1 2\n2 0\n").unwrap();
        let (lcc, lmap) = largest_connected_component(&g, &map).unwrap();
        assert_eq!(lcc.vertex_count(), 3);
        let mut ids = lmap.originals().to_vec();
        ids.sort();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn lcc_picks_triangle_over_edge() {
        let (g, map) = parse("10 11\n0 1\n1 2\n2 0\n").unwrap();
        let (lcc, lmap) = largest_connected_component(&g, &map).unwrap();
        assert_eq!((lcc.vertex_count(), lcc.edge_count()), (3, 3));
        assert!(lmap.dense(10).is_none());
        assert!(lcc.is_connected());
    }

    #[test]
    fn lcc_of_connected_graph_is_identity() {
        let (g, map) = parse("0 1\n1 2\n2 3\n").unwrap();
        let (lcc, lmap) = largest_connected_component(&g, &map).unwrap();
        assert_eq!(lcc, g);
        assert_eq!(lmap, map);
    }

    #[test]
    fn lcc_drops_isolated_vertices() {
        let g = Graph::from_edges(5, [(1, 2), (2, 3)]);
        let (lcc, map) = largest_connected_component(&g, &RelabelMap::identity(5)).unwrap();
        assert_eq!(lcc.vertex_count(), 3);
        assert_eq!(map.originals(), &[1, 2, 3]);
    }

    #[test]
    fn induced_degree_cases() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(induced_degree(&tri, &[true, true, false], 0), 1);
        for u in 0..3 {
            assert_eq!(induced_degree(&tri, &[true; 3], u), tri.degree(u));
        }
        let barbell = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let one_triangle = barbell.membership(&[0, 1, 2]);
        assert_eq!(induced_degree(&barbell, &one_triangle, 2), 2);
    }

    #[test]
    #[should_panic(expected = "not in the set")]
    fn induced_degree_outside_set_panics() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        induced_degree(&tri, &[true, true, false], 2);
    }

    #[test]
    fn cache_round_trip_and_rejects_garbage() {
        let (g, map) = parse("9 4\n4 2\n2 9\n2 100\n").unwrap();
        let mut buf = Vec::new();
        save_cache(&g, &map, &mut buf).unwrap();
        let (g2, map2) = load_cache(buf.as_slice()).unwrap();
        assert_eq!(g, g2);
        assert_eq!(map, map2);

        buf[0] = b'X';
        assert!(matches!(load_cache(buf.as_slice()), Err(Error::BadCache(_))));
    }

    #[test]
    fn serialize_then_parse_is_idempotent() {
        let (g, map) = parse("1 2\n2 3\n3 1\n3 8\n").unwrap();
        let mut text = Vec::new();
        write_edge_list(&g, &map, &mut text).unwrap();
        let (g2, map2) = parse_edge_list(text.as_slice()).unwrap();
        let original_edges = |g: &Graph, m: &RelabelMap| {
            let mut e: Vec<(u64, u64)> = g
                .edges()
                .map(|(u, v)| {
                    let (a, b) = (m.original(u), m.original(v));
                    (a.min(b), a.max(b))
                })
                .collect();
            e.sort();
            e
        };
        assert_eq!(original_edges(&g, &map), original_edges(&g2, &map2));
    }
}
