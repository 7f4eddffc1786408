//! Every generator family, plus the planted partition written to disk.
//!
//! cargo run --example generate_graphs [out-dir]

use std::fs::File;
use std::path::PathBuf;

use pcon::generators::{cross_edge_fraction, generate, write_communities, GenSpec};
use pcon::graph::{write_edge_list, RelabelMap};

fn main() -> pcon::Result<()> {
    for s in [
        "er:n=1000,p=0.01",
        "er:n=1000,m=5000",
        "er:n=1000,d=8",
        "ba:n=1000,k=3",
        "ws:n=1000,k=6,beta=0.1",
        "plc:n=1000,k=3,p=0.5",
    ] {
        let (g, _) = generate(&s.parse::<GenSpec>()?.with_seed(1))?;
        println!("{s:<24} n={} m={} connected={}", g.vertex_count(), g.edge_count(), g.is_connected());
    }

    let spec: GenSpec = "planted:n=1000,c=5,k_in=10,mu=0.25,seed=2".parse()?;
    let (g, truth) = generate(&spec)?;
    let truth = truth.expect("planted");
    println!("{spec}: observed mixing {:.3}", cross_edge_fraction(&g, &truth));

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        write_edge_list(&g, &RelabelMap::identity(g.vertex_count()), File::create(dir.join("planted.txt"))?)?;
        write_communities(&truth, &RelabelMap::identity(g.vertex_count()), File::create(dir.join("planted.cmty"))?)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
