//! Experiment engine: the simulation loop, metrics, multi-run aggregation,
//! configuration and CSV emission.

mod batch;
mod config;
mod metrics;
mod output;
mod simulation;

#[cfg(feature = "parallel")]
pub use batch::run_batch_parallel;
pub use batch::{run_batch, run_batch_sequential, run_one};
pub use config::{EnvConfig, EnvSetup, ExperimentConfig};
pub use metrics::{aggregate, avg_reward, exploration_pct, mean_std, optimal_avg_reward, AggregateSeries, Series};
pub use output::{format_sig9, manifest, version, write_csv, CSV_HEADER};
pub use simulation::{run_simulation, run_streams, CycleRecord, RunFailure, RunTrace, Tracked};
