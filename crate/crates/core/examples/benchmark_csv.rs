//! Runs every method on one dataset and prints the CSV rows, then a small
//! scaling fit.

use pcon::bench::{emit_csv, load_dataset, run, scaling_bench, GraphSource, Method, MethodParams, RunConfig};

fn main() -> pcon::Result<()> {
    let source = GraphSource::Gen("planted:n=2000,c=4,k_in=12,mu=0.2".parse()?);
    let ds = load_dataset(&source, None)?;
    let mut rows = Vec::new();
    for method in Method::ALL {
        let mut cfg = RunConfig::new(method);
        cfg.seed_vertices = 3;
        rows.extend(run(&ds, &cfg)?);
    }
    emit_csv(&rows, std::io::stdout().lock())?;

    let report = scaling_bench(&"er:n=1000,d=8".parse()?, &[2000, 4000, 8000, 16000], Method::PconCore, &MethodParams::default(), 3)?;
    eprintln!("{report}");
    Ok(())
}
