//! NMI between partitions and of a detected cluster against planted truth.

use pcon::eval::{best_jaccard_community, nmi, score_detected_cluster, Partition};
use pcon::generators::{generate_lcc, GenSpec};
use pcon::structural::pcon_de;

fn main() -> pcon::Result<()> {
    let a = Partition::new(vec![0, 0, 0, 1, 1, 1]);
    let b = Partition::new(vec![0, 0, 1, 1, 2, 2]);
    println!("nmi(a, a) = {:.4}, nmi(a, b) = {:.4}", nmi(&a, &a), nmi(&a, &b));

    for mu in [0.1, 0.3, 0.5] {
        let spec: GenSpec = format!("planted:n=4000,c=8,k_in=16,mu={mu},seed=9").parse()?;
        let (g, _, truth) = generate_lcc(&spec)?;
        let truth = truth.expect("planted");
        let r = pcon_de(&g);
        let best = best_jaccard_community(&r.members, &truth);
        let score = score_detected_cluster(&r.members, &truth)?;
        println!("mu={mu}: |S|={} phi={:.4} best community {best:?} nmi={score:.4}", r.size(), r.conductance.to_f64());
    }
    Ok(())
}
