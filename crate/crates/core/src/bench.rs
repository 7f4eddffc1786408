//! Benchmark harness: load or generate a graph, run a method, time it,
//! account its working memory, score it, and write CSV.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffusion::{local_cluster, DiffusionKind, DiffusionParams};
use crate::error::{Error, Result};
use crate::eval::score_detected_cluster;
use crate::generators::{generate_lcc, read_ground_truth, GenSpec, GroundTruth};
use crate::graph::{largest_connected_component, read_edge_list_file, Graph, RelabelMap};
use crate::mem;
use crate::peel::ClusterResult;
use crate::spectral;
use crate::structural::{pcon_core, pcon_de};

pub const CSV_HEADER: [&str; 10] = [
    "dataset",
    "method",
    "params",
    "seed",
    "time_s",
    "mem_bytes",
    "conductance",
    "size",
    "volume",
    "nmi",
];

/// Seed vertices per diffusion run unless overridden.
pub const DEFAULT_SEED_VERTICES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PconCore,
    PconDe,
    AscSweep,
    Trw,
    Ppr,
    Hk,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::PconCore,
        Method::PconDe,
        Method::AscSweep,
        Method::Trw,
        Method::Ppr,
        Method::Hk,
    ];

    pub fn diffusion(self) -> Option<DiffusionKind> {
        match self {
            Method::Trw => Some(DiffusionKind::TruncatedWalk),
            Method::Ppr => Some(DiffusionKind::PersonalizedPageRank),
            Method::Hk => Some(DiffusionKind::HeatKernel),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::PconCore => "pcon_core",
            Method::PconDe => "pcon_de",
            Method::AscSweep => "asc_sweep",
            Method::Trw => "trw",
            Method::Ppr => "ppr",
            Method::Hk => "hk",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    pub diffusion: DiffusionParams,
    /// Power-iteration stopping tolerance for `asc_sweep`.
    pub asc_eps: f64,
    pub asc_max_iters: usize,
}

impl Default for MethodParams {
    fn default() -> Self {
        MethodParams {
            diffusion: DiffusionParams::default(),
            asc_eps: spectral::DEFAULT_EPS,
            asc_max_iters: spectral::DEFAULT_MAX_ITERS,
        }
    }
}

/// One row of benchmark output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub dataset: String,
    pub method: String,
    pub params: String,
    pub seed: u64,
    pub time_s: f64,
    pub mem_bytes: Option<usize>,
    pub conductance: f64,
    pub size: usize,
    pub volume: u64,
    pub nmi: Option<f64>,
    /// Seconds since the Unix epoch; not written to CSV.
    pub timestamp: u64,
    /// Cluster members as original vertex ids; not written to CSV.
    pub members: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Gen(GenSpec),
}

/// A graph reduced to its largest component, ready for runs.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graph: Graph,
    pub map: RelabelMap,
    pub truth: Option<GroundTruth>,
}

impl Dataset {
    pub fn from_graph(name: impl Into<String>, graph: Graph) -> Result<Dataset> {
        let (graph, map) = largest_connected_component(&graph, &RelabelMap::identity(graph.vertex_count()))?;
        Ok(Dataset {
            name: name.into(),
            graph,
            map,
            truth: None,
        })
    }

    /// `truth` must be indexed by this dataset's dense ids.
    pub fn with_truth(mut self, truth: GroundTruth) -> Dataset {
        self.truth = Some(truth);
        self
    }
}

/// Loads an edge list or runs a generator, then keeps the largest component.
/// A ground-truth file, if given, replaces any generated truth.
pub fn load_dataset(source: &GraphSource, truth: Option<&Path>) -> Result<Dataset> {
    let mut ds = match source {
        GraphSource::File(path) => {
            let (g, map) = read_edge_list_file(path)?;
            let (graph, map) = largest_connected_component(&g, &map)?;
            let name = path
                .file_stem()
                .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
            Dataset {
                name,
                graph,
                map,
                truth: None,
            }
        }
        GraphSource::Gen(spec) => {
            let (graph, map, truth) = generate_lcc(spec)?;
            Dataset {
                name: format!("{spec},seed={}", spec.seed),
                graph,
                map,
                truth,
            }
        }
    };
    if let Some(path) = truth {
        ds.truth = Some(read_ground_truth(path, &ds.map)?);
    }
    Ok(ds)
}

/// `count` distinct vertices drawn uniformly with ChaCha8 from `rng_seed`.
pub fn seed_vertices(n: usize, count: usize, rng_seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rand::seq::index::sample(&mut rng, n, count.min(n)).into_vec()
}

/// Runs one method once. `q` is the diffusion seed vertex (dense id).
/// The clock and the memory counter cover scoring and sweep only.
pub fn run_once(
    ds: &Dataset,
    method: Method,
    params: &MethodParams,
    rng_seed: u64,
    q: Option<usize>,
) -> Result<RunRecord> {
    let g = &ds.graph;
    let start = Instant::now();
    let (result, mem_bytes) = mem::measure(|| -> Result<ClusterResult> {
        match (method, method.diffusion()) {
            (Method::PconCore, _) => Ok(pcon_core(g)),
            (Method::PconDe, _) => Ok(pcon_de(g)),
            (Method::AscSweep, _) => spectral::asc_sweep(g, params.asc_eps, params.asc_max_iters, rng_seed),
            (_, Some(kind)) => {
                let q = q.ok_or_else(|| Error::param("diffusion run without a seed vertex"))?;
                local_cluster(g, kind, q, &params.diffusion)
            }
            (_, None) => unreachable!(),
        }
    });
    let elapsed = start.elapsed();
    let result = result?;

    let params_text = match q {
        Some(q) => {
            let rest = result.params.split_once(',').map_or("", |(_, r)| r);
            format!("q={},{rest}", ds.map.original(q))
        }
        None => result.params.clone(),
    };
    let nmi = match &ds.truth {
        Some(t) => Some(score_detected_cluster(&result.members, t)?),
        None => None,
    };
    Ok(RunRecord {
        dataset: ds.name.clone(),
        method: method.to_string(),
        params: params_text,
        seed: rng_seed,
        time_s: elapsed.as_secs_f64(),
        mem_bytes,
        conductance: result.conductance.to_f64(),
        size: result.size(),
        volume: result.volume,
        nmi,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        members: result.members.iter().map(|&v| ds.map.original(v)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub params: MethodParams,
    /// Seed vertices for diffusion methods.
    pub seed_vertices: usize,
    pub rng_seed: u64,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(method: Method) -> RunConfig {
        RunConfig {
            method,
            params: MethodParams::default(),
            seed_vertices: DEFAULT_SEED_VERTICES,
            rng_seed: 0,
            workers: 1,
        }
    }
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers <= 1 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// One record for a global method, one per seed vertex for a diffusion.
/// Rows come back in seed-vertex order whatever the worker count.
pub fn run(ds: &Dataset, cfg: &RunConfig) -> Result<Vec<RunRecord>> {
    if cfg.method.diffusion().is_none() {
        return Ok(vec![run_once(ds, cfg.method, &cfg.params, cfg.rng_seed, None)?]);
    }
    if cfg.seed_vertices == 0 {
        return Err(Error::param("diffusion methods need at least one seed vertex"));
    }
    cfg.params.diffusion.validate()?;
    let seeds = seed_vertices(ds.graph.vertex_count(), cfg.seed_vertices, cfg.rng_seed);
    in_pool(cfg.workers, || {
        seeds
            .par_iter()
            .map(|&q| run_once(ds, cfg.method, &cfg.params, cfg.rng_seed, Some(q)))
            .collect::<Result<Vec<_>>>()
    })?
}

/// `{10, 100, ..., 10^6} / m`.
pub fn eps_grid(m: usize) -> Vec<f64> {
    (1..=6).map(|k| 10f64.powi(k) / m as f64).collect()
}

/// Mean over records of one configuration; memory is the maximum.
pub fn summarize(records: &[RunRecord], params: String) -> Option<RunRecord> {
    let first = records.first()?;
    let k = records.len() as f64;
    let mean = |f: &dyn Fn(&RunRecord) -> f64| records.iter().map(f).sum::<f64>() / k;
    let nmi = records
        .iter()
        .map(|r| r.nmi)
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.iter().sum::<f64>() / k);
    Some(RunRecord {
        dataset: first.dataset.clone(),
        method: first.method.clone(),
        params,
        seed: first.seed,
        time_s: mean(&|r| r.time_s),
        mem_bytes: records.iter().map(|r| r.mem_bytes).max().flatten(),
        conductance: mean(&|r| r.conductance),
        size: mean(&|r| r.size as f64).round() as usize,
        volume: mean(&|r| r.volume as f64).round() as u64,
        nmi,
        timestamp: first.timestamp,
        members: Vec::new(),
    })
}

/// Runs a diffusion method at each `eps` and reports one seed-averaged row
/// per value.
pub fn eps_sweep(ds: &Dataset, cfg: &RunConfig, grid: &[f64]) -> Result<Vec<RunRecord>> {
    if cfg.method.diffusion().is_none() {
        return Err(Error::param(format!("{} has no eps to sweep", cfg.method)));
    }
    let mut out = Vec::with_capacity(grid.len());
    for &eps in grid {
        let mut c = *cfg;
        c.params.diffusion.eps = Some(eps);
        let records = run(ds, &c)?;
        let d = &c.params.diffusion;
        let detail = match cfg.method {
            Method::Ppr => format!("alpha={}", d.alpha),
            Method::Hk => format!("t={}", d.t),
            _ => format!("iters={}", d.n_iters),
        };
        let params = format!("eps={eps},{detail},seeds={},agg=mean", records.len());
        out.extend(summarize(&records, params));
    }
    Ok(out)
}

/// Least-squares line through `(x, y)` as `(slope, intercept, r²)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    /// Median-time record per size.
    pub records: Vec<RunRecord>,
    /// `m + n` per size, after the largest-component reduction.
    pub work: Vec<u64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl fmt::Display for ScalingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, w) in self.records.iter().zip(&self.work) {
            writeln!(f, "m+n={w:>10}  time={:.6}s  phi={:.6}", r.time_s, r.conductance)?;
        }
        write!(f, "log-log slope {:.3}, R^2 {:.4}", self.slope, self.r_squared)
    }
}

/// Generates `template` at each size, times `method` (median of `reps`
/// after one warm-up run), and fits `ln(time)` against `ln(m + n)`.
pub fn scaling_bench(
    template: &GenSpec,
    sizes: &[usize],
    method: Method,
    params: &MethodParams,
    reps: usize,
) -> Result<ScalingReport> {
    if sizes.len() < 3 {
        return Err(Error::param("scaling needs at least three sizes"));
    }
    if let Some(&s) = sizes.iter().find(|&&s| s < 1000) {
        return Err(Error::param(format!("size {s} is below the 1000-vertex minimum")));
    }
    let reps = reps.max(1);
    let mut records = Vec::new();
    let mut work = Vec::new();
    for &n in sizes {
        let spec = GenSpec {
            n,
            ..template.clone()
        };
        let ds = load_dataset(&GraphSource::Gen(spec), None)?;
        let q = method.diffusion().map(|_| seed_vertices(ds.graph.vertex_count(), 1, template.seed)[0]);
        // untimed warm-up
        run_once(&ds, method, params, template.seed, q)?;
        let mut runs = (0..reps)
            .map(|_| run_once(&ds, method, params, template.seed, q))
            .collect::<Result<Vec<_>>>()?;
        runs.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
        records.push(runs.swap_remove(reps / 2));
        work.push((ds.graph.vertex_count() + ds.graph.edge_count()) as u64);
    }
    let xs: Vec<f64> = work.iter().map(|&w| (w as f64).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.time_s.max(1e-9).ln()).collect();
    let (slope, intercept, r_squared) = fit_line(&xs, &ys);
    Ok(ScalingReport {
        records,
        work,
        slope,
        intercept,
        r_squared,
    })
}

/// Positional decimal with 17 significant digits, so parsing recovers the
/// exact `f64`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes the header and one row per record, in order. Fields containing
/// commas, quotes or newlines are quoted.
pub fn emit_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.dataset.clone(),
            r.method.clone(),
            r.params.clone(),
            r.seed.to_string(),
            format_float(r.time_s),
            r.mem_bytes.map_or_else(String::new, |b| b.to_string()),
            format_float(r.conductance),
            r.size.to_string(),
            r.volume.to_string(),
            r.nmi.map_or_else(String::new, format_float),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    emit_csv(records, BufWriter::new(File::create(path)?))
}

/// Parses rows written by [`emit_csv`]; `timestamp` and `members` come back empty.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected CSV header".into(),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let bad = |field: &str| Error::Parse {
            line,
            message: format!("bad {field}"),
        };
        fn opt<T: FromStr>(s: &str) -> std::result::Result<Option<T>, ()> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| ())
            }
        }
        out.push(RunRecord {
            dataset: row[0].to_string(),
            method: row[1].to_string(),
            params: row[2].to_string(),
            seed: row[3].parse().map_err(|_| bad("seed"))?,
            time_s: row[4].parse().map_err(|_| bad("time_s"))?,
            mem_bytes: opt(&row[5]).map_err(|_| bad("mem_bytes"))?,
            conductance: row[6].parse().map_err(|_| bad("conductance"))?,
            size: row[7].parse().map_err(|_| bad("size"))?,
            volume: row[8].parse().map_err(|_| bad("volume"))?,
            nmi: opt(&row[9]).map_err(|_| bad("nmi"))?,
            timestamp: 0,
            members: Vec::new(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::barbell;

    fn barbell_ds() -> Dataset {
        Dataset::from_graph("barbell", barbell()).unwrap()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!(matches!("louvain".parse::<Method>(), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn pcon_core_on_barbell() {
        let rec = run(&barbell_ds(), &RunConfig::new(Method::PconCore)).unwrap();
        assert_eq!(rec.len(), 1);
        assert!((rec[0].conductance - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(rec[0].size, 3);
    }

    #[test]
    fn diffusion_gives_one_row_per_seed_vertex() {
        let mut cfg = RunConfig::new(Method::Ppr);
        cfg.seed_vertices = 4;
        let rows = run(&barbell_ds(), &cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.params.starts_with("q=")));
        let mut cfg6 = cfg;
        cfg6.seed_vertices = 50;
        assert_eq!(run(&barbell_ds(), &cfg6).unwrap().len(), 6);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let ds = Dataset::from_graph("er", crate::fixtures::random_graph(&mut ChaCha8Rng::seed_from_u64(3), 80, 0.08)).unwrap();
        let mut cfg = RunConfig::new(Method::Hk);
        cfg.seed_vertices = 8;
        let a = run(&ds, &cfg).unwrap();
        cfg.workers = 3;
        let b = run(&ds, &cfg).unwrap();
        let key = |r: &[RunRecord]| r.iter().map(|x| (x.params.clone(), x.members.clone())).collect::<Vec<_>>();
        assert_eq!(key(&a), key(&b));
    }

    #[test]
    fn eps_grid_spans_six_decades() {
        let grid = eps_grid(100);
        assert_eq!(grid.len(), 6);
        assert!((grid[0] - 0.1).abs() < 1e-15);
        assert!((grid[5] - 1e4).abs() < 1e-9);
    }

    #[test]
    fn scaling_rejects_short_size_lists() {
        let spec: GenSpec = "er:n=1000,d=5".parse().unwrap();
        let p = MethodParams::default();
        assert!(scaling_bench(&spec, &[1000, 2000], Method::PconCore, &p, 1).is_err());
        assert!(scaling_bench(&spec, &[500, 2000, 4000], Method::PconCore, &p, 1).is_err());
    }

    #[test]
    fn line_fit() {
        let (s, b, r2) = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((s - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(1.0 / 7.0), "0.14285714285714285");
        assert_eq!(format_float(1.0), "1.0000000000000000");
        for x in [1.0 / 3.0, 2.5e-9, 12345.678, 1e300, 5e-324] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    fn record(params: &str) -> RunRecord {
        RunRecord {
            dataset: "d".into(),
            method: "ppr".into(),
            params: params.into(),
            seed: 7,
            time_s: 0.1 + 0.2,
            mem_bytes: Some(4096),
            conductance: 1.0 / 7.0,
            size: 3,
            volume: 7,
            nmi: None,
            timestamp: 0,
            members: Vec::new(),
        }
    }

    #[test]
    fn csv_header_only_and_quoting() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "dataset,method,params,seed,time_s,mem_bytes,conductance,size,volume,nmi\n"
        );
        let mut buf = Vec::new();
        emit_csv(&[record("alpha=0.01,eps=0.001")], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"alpha=0.01,eps=0.001\""));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, vec![record("alpha=0.01,eps=0.001")]);
    }
}
