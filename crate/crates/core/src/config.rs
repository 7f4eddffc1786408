//! Experiment settings from a TOML file, overlaid by command-line flags.
//!
//! ```toml
//! gen = "planted:n=2000,c=4,k_in=12,mu=0.2"
//! method = "ppr"
//! alpha = 0.01
//! seeds = 50
//! rng_seed = 1
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::bench::{GraphSource, Method, MethodParams, RunConfig, DEFAULT_SEED_VERTICES};
use crate::error::{Error, Result};
use crate::generators::GenSpec;

/// Every field is optional; unset fields fall back to defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: Option<PathBuf>,
    pub gen: Option<String>,
    pub truth: Option<PathBuf>,
    pub method: Option<String>,
    pub alpha: Option<f64>,
    pub eps: Option<f64>,
    pub t: Option<f64>,
    pub iters: Option<usize>,
    pub seeds: Option<usize>,
    pub rng_seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub reps: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: ExperimentConfig) -> ExperimentConfig {
        let base = self;
        overlay!(base, top; graph, gen, truth, method, alpha, eps, t, iters, seeds,
                 rng_seed, out, workers, sizes, reps)
    }

    /// Exactly one of `graph` or `gen`. A generator without its own `seed=`
    /// takes `rng_seed`.
    pub fn source(&self) -> Result<GraphSource> {
        match (&self.graph, &self.gen) {
            (Some(p), None) => Ok(GraphSource::File(p.clone())),
            (None, Some(spec)) => {
                let mut parsed: GenSpec = spec.parse()?;
                if !spec.contains("seed=") {
                    parsed.seed = self.rng_seed.unwrap_or(0);
                }
                Ok(GraphSource::Gen(parsed))
            }
            (Some(_), Some(_)) => Err(Error::param("give either a graph file or a generator, not both")),
            (None, None) => Err(Error::param("a graph file or a generator spec is required")),
        }
    }

    pub fn method(&self) -> Result<Method> {
        self.method
            .as_deref()
            .ok_or_else(|| Error::param("a method is required"))?
            .parse()
    }

    /// `eps` and `iters` go to whichever method is chosen: the power
    /// iteration for `asc_sweep`, the diffusion otherwise.
    pub fn method_params(&self, method: Method) -> Result<MethodParams> {
        let mut p = MethodParams::default();
        if let Some(a) = self.alpha {
            p.diffusion.alpha = a;
        }
        if let Some(t) = self.t {
            p.diffusion.t = t;
        }
        if method == Method::AscSweep {
            if let Some(e) = self.eps {
                if !(e > 0.0) {
                    return Err(Error::param("eps must be positive"));
                }
                p.asc_eps = e;
            }
            if let Some(i) = self.iters {
                p.asc_max_iters = i;
            }
        } else {
            p.diffusion.eps = self.eps;
            if let Some(i) = self.iters {
                p.diffusion.n_iters = i;
            }
        }
        if method.diffusion().is_some() {
            p.diffusion.validate()?;
        }
        Ok(p)
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let method = self.method()?;
        let workers = self.workers.unwrap_or(1);
        if workers == 0 {
            return Err(Error::param("workers must be at least 1"));
        }
        Ok(RunConfig {
            method,
            params: self.method_params(method)?,
            seed_vertices: self.seeds.unwrap_or(DEFAULT_SEED_VERTICES),
            rng_seed: self.rng_seed.unwrap_or(0),
            workers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ExperimentConfig::from_toml_str("method = \"ppr\"\nalpha = 0.1\nseeds = 5\n").unwrap();
        let flags = ExperimentConfig {
            alpha: Some(0.2),
            gen: Some("er:n=50,p=0.1".into()),
            ..Default::default()
        };
        let cfg = file.overlay(flags);
        let run = cfg.run_config().unwrap();
        assert_eq!(run.method, Method::Ppr);
        assert_eq!(run.params.diffusion.alpha, 0.2);
        assert_eq!(run.seed_vertices, 5);
        assert!(matches!(cfg.source().unwrap(), GraphSource::Gen(_)));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::from_toml_str("colour = 1").is_err());
        let cfg = ExperimentConfig {
            method: Some("ppr".into()),
            alpha: Some(1.5),
            ..Default::default()
        };
        assert!(cfg.run_config().is_err());
        assert!(ExperimentConfig::default().source().is_err());
    }
}
