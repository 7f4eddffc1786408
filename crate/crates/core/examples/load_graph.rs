//! Parses a SNAP-style edge list, keeps the largest component and caches it.
//!
//! cargo run --example load_graph [path]

use std::io::Cursor;

use pcon::graph::{largest_connected_component, load_cache, parse_edge_list, read_edge_list_file, save_cache};

const SAMPLE: &str = "# comment lines are skipped
100 200
200 300
300 100
300 300
400 500
";

fn main() -> pcon::Result<()> {
    let (g, map) = match std::env::args().nth(1) {
        Some(path) => read_edge_list_file(path)?,
        None => parse_edge_list(Cursor::new(SAMPLE))?,
    };
    println!("parsed: n={} m={}", g.vertex_count(), g.edge_count());

    let (lcc, lcc_map) = largest_connected_component(&g, &map)?;
    println!("lcc: n={} m={} ids={:?}", lcc.vertex_count(), lcc.edge_count(), lcc_map.originals());

    let mut buf = Vec::new();
    save_cache(&lcc, &lcc_map, &mut buf)?;
    let (back, _) = load_cache(buf.as_slice())?;
    println!("cache: {} bytes, same graph: {}", buf.len(), back == lcc);
    Ok(())
}
