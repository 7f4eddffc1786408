use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcon::bench::{eps_grid, emit_csv, load_dataset, scaling_bench, RunRecord};
use pcon::config::ExperimentConfig;
use pcon::eval::{brute_force_optimum, nmi, Partition};
use pcon::generators::{generate_lcc, read_ground_truth, write_communities, GenSpec};
use pcon::graph::{read_edge_list_file, write_edge_list};
use pcon::{Error, RelabelMap, Result};

#[global_allocator]
static ALLOC: pcon::mem::TrackingAllocator = pcon::mem::TrackingAllocator;

#[derive(Parser)]
#[command(name = "pcon", version, about = "Conductance-based graph clustering by peeling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one method and write a CSV row per run.
    Run(RunArgs),
    /// Sweep a diffusion's eps over {10, ..., 10^6}/m.
    Sweep(RunArgs),
    /// Time a method across generated graph sizes and fit a log-log slope.
    Scale(ScaleArgs),
    /// Generate a graph (largest component) as an edge list.
    Gen(GenArgs),
    /// Exhaustive minimum conductance for graphs of at most 20 vertices.
    Oracle(OracleArgs),
    /// NMI between two partition files.
    Nmi(NmiArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generator spec such as `planted:n=2000,c=4,k_in=12,mu=0.2`.
    #[arg(long)]
    gen: Option<String>,
    /// Ground-truth communities (one per line) or a `.labels`/`.dat` file.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    /// Seed vertices per diffusion run.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long = "rng-seed", alias = "seed")]
    rng_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let base = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        Ok(base.overlay(ExperimentConfig {
            graph: self.graph.clone(),
            gen: self.gen.clone(),
            truth: self.truth.clone(),
            method: self.method.clone(),
            alpha: self.alpha,
            eps: self.eps,
            t: self.t,
            iters: self.iters,
            seeds: self.seeds,
            rng_seed: self.rng_seed,
            out: self.out.clone(),
            workers: self.workers,
            ..Default::default()
        }))
    }
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generator template; `n` is replaced by each size.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated vertex counts, at least three, each >= 1000.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Repetitions per size; the median time is kept.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long = "rng-seed", alias = "seed")]
    rng_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    gen: String,
    #[arg(long = "rng-seed", alias = "seed")]
    rng_seed: Option<u64>,
    /// Edge list destination; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write ground-truth communities (planted model only).
    #[arg(long)]
    truth_out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct NmiArgs {
    /// First partition file.
    a: PathBuf,
    /// Second partition file.
    b: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownMethod(_) => 2,
        Error::Io(_) | Error::Parse { .. } | Error::Csv(_) | Error::BadCache(_) | Error::Config(_) => 3,
        _ => 4,
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_records(records: &[RunRecord], out: Option<&Path>) -> Result<()> {
    emit_csv(records, output(out)?)
}

fn cmd_run(args: &RunArgs, sweep: bool) -> Result<()> {
    let cfg = args.config()?;
    let run = cfg.run_config()?;
    let ds = load_dataset(&cfg.source()?, cfg.truth.as_deref())?;
    let records = if sweep {
        pcon::bench::eps_sweep(&ds, &run, &eps_grid(ds.graph.edge_count()))?
    } else {
        pcon::bench::run(&ds, &run)?
    };
    write_records(&records, cfg.out.as_deref())
}

fn cmd_scale(args: &ScaleArgs) -> Result<()> {
    let base = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let cfg = base.overlay(ExperimentConfig {
        gen: args.gen.clone(),
        method: args.method.clone(),
        sizes: args.sizes.clone(),
        reps: args.reps,
        rng_seed: args.rng_seed,
        out: args.out.clone(),
        ..Default::default()
    });
    let mut template: GenSpec = cfg.gen.as_deref().unwrap_or("er:n=1000,d=10").parse()?;
    template.seed = cfg.rng_seed.unwrap_or(template.seed);
    let method = cfg.method()?;
    let sizes = cfg.sizes.clone().unwrap_or_else(|| (14..=17).map(|k| 1 << k).collect());
    let report = scaling_bench(&template, &sizes, method, &cfg.method_params(method)?, cfg.reps.unwrap_or(3))?;
    eprintln!("{report}");
    write_records(&report.records, cfg.out.as_deref())
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let mut spec: GenSpec = args.gen.parse()?;
    if let Some(s) = args.rng_seed {
        spec.seed = s;
    }
    let (g, map, truth) = generate_lcc(&spec)?;
    write_edge_list(&g, &map, output(args.out.as_deref())?)?;
    if let Some(path) = &args.truth_out {
        let truth = truth.ok_or_else(|| Error::param("only the planted model has ground truth"))?;
        write_communities(&truth, &map, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let (g, map) = read_edge_list_file(&args.graph)?;
    let r = brute_force_optimum(&g)?;
    let ids = |set: &[usize]| set.iter().map(|&v| map.original(v).to_string()).collect::<Vec<_>>().join(" ");
    let mut out = io::stdout().lock();
    writeln!(out, "phi* = {} ({})", r.min_conductance, r.min_conductance.to_f64())?;
    writeln!(out, "S*   = {}", ids(&r.min_conductance_set))?;
    writeln!(out, "g    = {} ({})", r.max_g, r.max_g.to_f64())?;
    writeln!(out, "S~   = {}", ids(&r.max_g_set))?;
    Ok(())
}

fn vertex_ids(path: &Path) -> Result<BTreeSet<u64>> {
    let labels = matches!(path.extension().and_then(|e| e.to_str()), Some("labels" | "dat"));
    let mut ids = BTreeSet::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let toks = t.split_whitespace();
        for tok in if labels { toks.take(1) } else { toks.take(usize::MAX) } {
            if let Ok(id) = tok.parse() {
                ids.insert(id);
            }
        }
    }
    Ok(ids)
}

fn cmd_nmi(args: &NmiArgs) -> Result<()> {
    let ids = vertex_ids(&args.a)?;
    if ids != vertex_ids(&args.b)? {
        return Err(Error::param("the two partitions cover different vertex sets"));
    }
    let map = RelabelMap::from_originals(ids.into_iter().collect());
    let part = |p: &Path| -> Result<Partition> {
        read_ground_truth(p, &map)?
            .partition()
            .map(Partition::new)
            .ok_or_else(|| Error::param(format!("{} leaves vertices unlabeled", p.display())))
    };
    println!("{}", nmi(&part(&args.a)?, &part(&args.b)?));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, false),
        Command::Sweep(a) => cmd_run(a, true),
        Command::Scale(a) => cmd_scale(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Nmi(a) => cmd_nmi(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pcon: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
