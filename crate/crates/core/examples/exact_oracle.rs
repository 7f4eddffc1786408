//! Brute-force optimum on small graphs next to what the heuristics find.

use pcon::eval::brute_force_optimum;
use pcon::fixtures::{barbell, nine_vertex_example};
use pcon::structural::{pcon_core, pcon_de};
use pcon::Graph;

fn main() -> pcon::Result<()> {
    let spider = Graph::from_edges(5, vec![(0, 1), (0, 4), (1, 2), (1, 3)]);
    for (name, g) in [("barbell", barbell()), ("nine-vertex", nine_vertex_example()), ("spider", spider)] {
        let o = brute_force_optimum(&g)?;
        println!("{name}");
        println!("  optimum   phi={} S={:?}", o.min_conductance, o.min_conductance_set);
        println!("  max g     g={} S={:?}", o.max_g, o.max_g_set);
        println!("  pcon_core phi={}", pcon_core(&g).conductance);
        println!("  pcon_de   phi={}", pcon_de(&g).conductance);
    }
    Ok(())
}
