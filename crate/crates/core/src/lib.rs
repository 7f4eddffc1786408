//! Conductance-based graph clustering by peeling.
//!
//! A score function orders the vertices, the vertices are removed in that
//! order, and the best intermediate set by conductance is kept. Structural
//! scores ([`structural::pcon_core`], [`structural::pcon_de`]), an
//! approximate Fiedler vector ([`spectral::asc_sweep`]) and three seeded
//! diffusions ([`diffusion::local_cluster`]) share the same sweep machinery in
//! [`peel`].
//!
//! ```
//! use pcon::fixtures::barbell;
//! use pcon::ratio::Ratio;
//! use pcon::structural::pcon_de;
//!
//! let r = pcon_de(&barbell());
//! assert_eq!(r.conductance, Ratio::new(1, 7));
//! ```

pub mod bench;
pub mod config;
pub mod diffusion;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod generators;
pub mod graph;
pub mod mem;
pub mod peel;
pub mod ratio;
pub mod spectral;
pub mod structural;

pub use error::{Error, Result};
pub use graph::{Graph, RelabelMap};
pub use peel::{conductance, ClusterResult};
pub use ratio::Ratio;
