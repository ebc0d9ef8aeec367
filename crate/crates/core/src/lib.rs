//! Two independent continuous-time random walkers on a graph, one infected and
//! one susceptible, and the time they spend on the same vertex.
//!
//! The crate is split along the pipeline:
//!
//! * [`graph`]: immutable CSR graphs and their exact stationary analytics
//!   (`π`, `Σπ²`, degree sums, the coincidence-time bounds).
//! * [`generators`]: complete, circulant, random regular, `G(n,p)` and the
//!   expected-degree (Chung-Lu) model with its power-law weight sequence.
//! * [`moments`]: closed-form and asymptotic moments of the degree sum `D` and
//!   the two-star count `D₂`, Chebyshev certificates, scaling predictions and a
//!   Monte Carlo ensemble oracle.
//! * [`walk`]: event-driven simulation of the walker pair and Monte Carlo
//!   estimators of the coincidence time and infection probability.
//!
//! Every random quantity is driven by [`rng::derive_seed`] so that results are
//! reproducible independently of thread count.

pub mod error;
pub mod generators;
pub mod graph;
pub mod moments;
pub mod rng;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use generators::{Family, GenSpec, MaxDegreeRule, WeightSequence};
pub use graph::{DegreeStatistics, Graph, StationaryDistribution, Vertex};
pub use moments::{ClosedFormMoments, EnsembleStats, Regime, ScalingPrediction};
pub use walk::{CoincidenceResult, MCEstimate, SimConfig};
