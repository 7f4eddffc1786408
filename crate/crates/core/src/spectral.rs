//! Approximate Fiedler vector by deflated power iteration, and its sweep.
//!
//! Iterates the lazy operator `M = (I + D^{-1/2} A D^{-1/2}) / 2`, whose
//! spectrum lies in `[0, 1]`. Its top eigenvector `D^{1/2} 1` is projected out
//! every step, so the iterate converges to the eigenvector of `1 - λ2/2`,
//! i.e. the Fiedler vector of the normalized Laplacian.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::peel::{two_sided_sweep, ClusterResult, ScoreOrdering};

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 1000;

#[derive(Debug, Clone)]
pub struct SpectralVector {
    /// Sweep coordinates `D^{-1/2} z`.
    pub x: Vec<f64>,
    /// Unit vector `z` orthogonal to `D^{1/2} 1`.
    pub embedding: Vec<f64>,
    /// Rayleigh quotient of `z` under the normalized Laplacian.
    pub lambda2_estimate: f64,
    pub iterations: usize,
    /// Sine of the angle between the last two iterates.
    pub residual: f64,
}

pub fn approx_fiedler(g: &Graph, eps: f64, max_iters: usize, seed: u64) -> Result<SpectralVector> {
    if !(eps > 0.0) {
        return Err(Error::param("eps must be positive"));
    }
    if g.vertex_count() < 2 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let sqrt_deg: Vec<f64> = (0..n).map(|v| (g.degree(v) as f64).sqrt()).collect();
    let top_norm = (g.total_volume() as f64).sqrt();
    let top: Vec<f64> = sqrt_deg.iter().map(|s| s / top_norm).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut z, &top);
    if normalize(&mut z) == 0.0 {
        z = (0..n).map(|v| if v == 0 { 1.0 } else { 0.0 }).collect();
        deflate(&mut z, &top);
        normalize(&mut z);
    }

    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        apply_lazy(g, &sqrt_deg, &z, &mut next);
        deflate(&mut next, &top);
        if normalize(&mut next) == 0.0 {
            // z was (numerically) in the kernel of M; any unit vector there is exact.
            residual = 0.0;
            break;
        }
        let cos = dot(&z, &next).abs().min(1.0);
        residual = (1.0 - cos * cos).max(0.0).sqrt();
        std::mem::swap(&mut z, &mut next);
        if residual < eps {
            break;
        }
    }

    // λ = 1 - zᵀ N z with N = D^{-1/2} A D^{-1/2}; lazy M z = (z + N z) / 2.
    apply_lazy(g, &sqrt_deg, &z, &mut next);
    let mz = dot(&z, &next);
    let lambda2_estimate = (2.0 - 2.0 * mz).clamp(0.0, 2.0);
    let x = z.iter().zip(&sqrt_deg).map(|(zi, s)| zi / s).collect();
    Ok(SpectralVector {
        x,
        embedding: z,
        lambda2_estimate,
        iterations,
        residual,
    })
}

fn apply_lazy(g: &Graph, sqrt_deg: &[f64], z: &[f64], out: &mut [f64]) {
    for u in 0..z.len() {
        let mut acc = 0.0;
        for &v in g.neighbors(u) {
            acc += z[v as usize] / sqrt_deg[v as usize];
        }
        out[u] = 0.5 * (z[u] + acc / sqrt_deg[u]);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn deflate(v: &mut [f64], unit: &[f64]) {
    let c = dot(v, unit);
    for (vi, ui) in v.iter_mut().zip(unit) {
        *vi -= c * ui;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Vertices by ascending value, ties by id.
pub fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

/// Sweeps prefixes of ascending `values` and returns the min-conductance
/// prefix cut, reported on its side with `vol <= m`.
///
/// # Panics
/// If `values` does not have one entry per vertex.
pub fn spectral_sweep_values(g: &Graph, values: &[f64], method: &str) -> ClusterResult {
    assert_eq!(values.len(), g.vertex_count(), "one value per vertex required");
    let ordering = ScoreOrdering::new(ascending_order(values), method).expect("sorted indices");
    two_sided_sweep(g, &ordering)
}

pub fn spectral_sweep(g: &Graph, x: &SpectralVector) -> ClusterResult {
    spectral_sweep_values(g, &x.x, "asc_sweep")
}

/// Fiedler approximation followed by its sweep.
pub fn asc_sweep(g: &Graph, eps: f64, max_iters: usize, seed: u64) -> Result<ClusterResult> {
    let vector = approx_fiedler(g, eps, max_iters, seed)?;
    Ok(spectral_sweep(g, &vector).with_params(format!(
        "eps={eps},iters={},lambda2={:.6}",
        vector.iterations, vector.lambda2_estimate
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{barbell, complete, path};
    use crate::ratio::Ratio;

    #[test]
    fn path3_lambda2_is_one() {
        let v = approx_fiedler(&path(3), 1e-10, 5000, 1).unwrap();
        assert!((v.lambda2_estimate - 1.0).abs() < 1e-4, "{}", v.lambda2_estimate);
    }

    #[test]
    fn k4_lambda2_is_four_thirds() {
        let v = approx_fiedler(&complete(4), 1e-10, 5000, 3).unwrap();
        assert!((v.lambda2_estimate - 4.0 / 3.0).abs() < 1e-4, "{}", v.lambda2_estimate);
    }

    #[test]
    fn embedding_is_unit_and_orthogonal_to_top() {
        let g = barbell();
        let v = approx_fiedler(&g, 1e-8, 1000, 11).unwrap();
        let norm: f64 = v.embedding.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-8);
        let top: f64 = (0..6).map(|u| v.embedding[u] * (g.degree(u) as f64).sqrt()).sum();
        assert!(top.abs() < 1e-8);
        assert!((0.0..=2.0).contains(&v.lambda2_estimate));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = barbell();
        let a = approx_fiedler(&g, 1e-6, 50, 7).unwrap();
        let b = approx_fiedler(&g, 1e-6, 50, 7).unwrap();
        assert_eq!(a.x, b.x);
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(matches!(approx_fiedler(&g, 1e-6, 10, 0), Err(Error::Disconnected)));
        assert!(approx_fiedler(&barbell(), 0.0, 10, 0).is_err());
    }

    #[test]
    fn barbell_sweep_finds_triangle() {
        let r = asc_sweep(&barbell(), 1e-8, 1000, 2).unwrap();
        assert_eq!(r.conductance, Ratio::new(1, 7));
    }

    #[test]
    fn constant_vector_sweeps_id_prefixes() {
        let g = barbell();
        let r = spectral_sweep_values(&g, &[0.5; 6], "const");
        assert_eq!(r.members, vec![0, 1, 2]);
        assert!(r.volume <= g.edge_count() as u64);
    }
}
