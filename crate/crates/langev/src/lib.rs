//! Agent-based simulator of generational language transmission with
//! parent-oriented teacher selection, plus analysis tools that detect
//! emergent language communities and fit the power law relating community
//! count to imitation-set size.
//!
//! Agents speak proto-languages given by M×S association matrices. Each
//! generation is replaced by children who learn by sampling a teacher's code
//! Q times per meaning. Teachers are chosen by one of four strategies:
//! fitness-proportional from the whole population (`base`), or drawn from an
//! imitation set of R candidates around the parent that is language-closest
//! (`model_a`), ring-closest (`model_b`), or uniform (`model_c`). Restricting
//! teachers to small imitation sets makes distinct language subcommunities
//! emerge; an adapted k-means over mutual comprehension finds them, and the
//! optimum community count K* follows K* ∝ r^(-gamma) in the relative set
//! size r = R/N.
//!
//! ## Examples
//!
//! One runnable example per capability:
//!
//! - **`baseline`** - uniform codes and the 1/M comprehension floor
//! - **`single_run`** - one seeded realization: trajectory, steady state, communities
//! - **`strategies`** - the four teacher-selection strategies compared
//! - **`subcommunities`** - community detection on a settled population
//! - **`power_law`** - sweep over r and fit of the K* exponent
//!
//! ```bash
//! cargo run --release -p langev --example baseline
//! cargo run --release -p langev --example single_run
//! cargo run --release -p langev --example strategies
//! cargo run --release -p langev --example subcommunities
//! cargo run --release -p langev --example power_law
//! ```
//!
//! The `langev` binary exposes the same machinery as `run`, `sweep`,
//! `cluster`, and `fit` subcommands.
//!
//! ## Quick start
//!
//! ```
//! use langev::{ClusterOptions, ModelParams, Strategy, run_realization};
//!
//! let params = ModelParams {
//!     n: 12,
//!     strategy: Strategy::ModelB,
//!     r_rel: 0.25,
//!     generations: 5,
//!     seed: 7,
//!     ..ModelParams::default()
//! };
//! let result = run_realization(&params, &ClusterOptions::default()).unwrap();
//! assert_eq!(result.w_trajectory.len(), 6);
//! assert!(result.k_star >= 1);
//! ```

pub mod clustering;
pub mod commands;
pub mod config;
mod error;
pub mod evolution;
pub mod experiments;
pub mod language;
pub mod output;
pub mod seed;

pub use clustering::{
    avg_inter, avg_within, brute_force_best, find_optimum, inter_community, kmeans_language,
    ClusteringResult, KmeansOptions, OptimumResult, Partition,
};
pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
pub use evolution::{
    build_imitation_set, fitness, init_population, learn_from_teacher, select_base_teacher,
    select_teacher, step_generation, ModelParams, Population, Strategy,
};
pub use experiments::{
    fit_power_law, run_realization, run_sweep, steady_state_generation, ClusterOptions,
    PowerLawFit, RealizationResult, SweepRow, SweepSpec, SweepSummary,
};
pub use language::{
    comprehension, derive_decoding, derive_encoding, mutual_comprehension, overall_comprehension,
    random_baseline, within_community_comprehension, Agent, AssociationMatrix, ComprehensionCache,
    DecodingMatrix, EncodingMatrix,
};
