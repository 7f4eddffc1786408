//! Approximate Fiedler vector by power iteration, then a sweep cut.

use pcon::generators::{generate_lcc, GenSpec};
use pcon::spectral::{approx_fiedler, spectral_sweep, DEFAULT_EPS, DEFAULT_MAX_ITERS};

fn main() -> pcon::Result<()> {
    let spec: GenSpec = "ws:n=2000,k=6,beta=0.05,seed=3".parse()?;
    let (g, _, _) = generate_lcc(&spec)?;
    let v = approx_fiedler(&g, DEFAULT_EPS, DEFAULT_MAX_ITERS, 1)?;
    println!(
        "lambda2 ~ {:.6} after {} iterations (residual {:.2e})",
        v.lambda2_estimate, v.iterations, v.residual
    );
    let r = spectral_sweep(&g, &v);
    let phi = r.conductance.to_f64();
    println!("{r}");
    println!(
        "lambda2/2 = {:.6} <= phi = {phi:.6} <= sqrt(2 lambda2) = {:.6}",
        v.lambda2_estimate / 2.0,
        (2.0 * v.lambda2_estimate).sqrt()
    );
    Ok(())
}
