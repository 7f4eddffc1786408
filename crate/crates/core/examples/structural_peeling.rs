//! Degeneracy and degree-ratio peeling on the barbell and a random graph.

use pcon::fixtures::barbell;
use pcon::generators::{generate_lcc, GenSpec};
use pcon::structural::{degeneracy_ordering, pcon_core, pcon_de};

fn main() -> pcon::Result<()> {
    let g = barbell();
    let d = degeneracy_ordering(&g);
    println!("barbell order {:?} cores {:?}", d.order, d.core_numbers);
    println!("{}", pcon_core(&g));
    println!("{}", pcon_de(&g));

    let spec: GenSpec = "plc:n=5000,k=3,p=0.3,seed=7".parse()?;
    let (g, _, _) = generate_lcc(&spec)?;
    println!("{spec}: n={} m={}", g.vertex_count(), g.edge_count());
    for r in [pcon_core(&g), pcon_de(&g)] {
        println!("  {r} g={}", r.g_value);
    }
    Ok(())
}
