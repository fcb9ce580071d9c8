//! Growth rates of ballistic deposition on finite graphs.
//!
//! Particles rain onto the vertices of a finite connected graph; a particle
//! landing on vertex x settles at height `1 + max` over the closed
//! neighbourhood of x, so columns stick to their tallest neighbour. Heights
//! grow linearly in time and the library is about the growth rate `gamma`:
//! its exact values where the model is solvable, certified series and
//! integral evaluations for stars, spectral upper and chain lower bounds,
//! Monte Carlo estimation with confidence intervals, and the fluctuation
//! (central limit) behaviour around the linear trend.
//!
//! The runnable examples are the best starting point, one per capability:
//!
//! - `exact_gamma`: closed-form rates for the solvable family, checked
//!   against truncated-chain solves.
//! - `star_series`: series vs integral evaluation of star growth rates.
//! - `surface_chain`: the normalized-surface Markov chain of a small graph,
//!   its stationary solve, growth rate and fluctuation variance.
//! - `monte_carlo`: replicated simulation with confidence intervals.
//! - `clt_demo`: standardized fluctuation samples and normality checks.
//! - `spectral_bounds`: eigenvalue upper bound and chain lower bounds.
//! - `nn_model`: the nearest-neighbour variant on complete graphs, exact
//!   rationals and asymptotics.
//! - `coupling`: monotonicity of growth under subgraph embeddings, shown by
//!   coupled runs.
//! - `graph_reductions`: merging equivalent vertices and cloning them back.
//!
//! A thin CLI (`bdep`) exposes the same operations as subcommands.

pub mod bounds;
pub mod chain;
pub mod error;
pub mod graph;
pub mod sim;
pub mod solvable;
pub mod star;
pub mod stats;
pub mod surface;

pub use error::{Error, Result};
pub use graph::{Graph, GraphMetrics};
