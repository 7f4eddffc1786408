//! Truncated walk, PageRank push and heat-kernel relax from one seed vertex.

use pcon::diffusion::{local_cluster, DiffusionKind, DiffusionParams};
use pcon::generators::{generate_lcc, GenSpec};

fn main() -> pcon::Result<()> {
    let spec: GenSpec = "planted:n=3000,c=6,k_in=12,mu=0.15,seed=5".parse()?;
    let (g, _, truth) = generate_lcc(&spec)?;
    let truth = truth.expect("planted graphs carry communities");
    let q = 0;
    println!("seed vertex {q} in community {:?}", truth.label(q));

    let params = DiffusionParams { eps: Some(1e-5), ..DiffusionParams::default() };
    for kind in [DiffusionKind::TruncatedWalk, DiffusionKind::PersonalizedPageRank, DiffusionKind::HeatKernel] {
        let r = local_cluster(&g, kind, q, &params)?;
        let inside = r.members.iter().filter(|&&v| truth.label(v) == truth.label(q)).count();
        println!("{r}  [{inside}/{} in the seed's community]", r.size());
    }
    Ok(())
}
