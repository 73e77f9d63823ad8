use super::config::{EnvSetup, ExperimentConfig};
use super::simulation::{run_simulation, RunTrace};
use crate::agents::{build_agent, TrueEnv};
use crate::env::{ChainEnv, Gridworld};
use crate::error::Error;

/// Builds fresh agent and environment for run `i` and simulates it.
pub fn run_one(cfg: &ExperimentConfig, setup: &EnvSetup, run: usize) -> Result<RunTrace, Error> {
    let seed = cfg.run_seed(run);
    match setup {
        EnvSetup::Grid(spec) => {
            let mut env = Gridworld::new(spec.clone());
            let mut agent = build_agent(&cfg.agent, TrueEnv::Grid(&env))?;
            run_simulation(agent.as_mut(), &mut env, cfg.cycles, seed, run)
        }
        EnvSetup::Chain(spec) => {
            let mut env = ChainEnv::new(*spec)?;
            let mut agent = build_agent(&cfg.agent, TrueEnv::Chain(&env))?;
            run_simulation(agent.as_mut(), &mut env, cfg.cycles, seed, run)
        }
    }
}

/// Runs every configured run one after another.
pub fn run_batch_sequential(cfg: &ExperimentConfig, setup: &EnvSetup) -> Result<Vec<RunTrace>, Error> {
    (0..cfg.runs).map(|i| run_one(cfg, setup, i)).collect()
}

/// Runs every configured run on the rayon pool. Each run owns its agent,
/// environment and random streams, so results equal the sequential ones.
#[cfg(feature = "parallel")]
pub fn run_batch_parallel(cfg: &ExperimentConfig, setup: &EnvSetup) -> Result<Vec<RunTrace>, Error> {
    use rayon::prelude::*;
    (0..cfg.runs).into_par_iter().map(|i| run_one(cfg, setup, i)).collect()
}

/// Runs the batch, in parallel when the `parallel` feature is enabled.
pub fn run_batch(cfg: &ExperimentConfig, setup: &EnvSetup) -> Result<Vec<RunTrace>, Error> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(cfg, setup)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(cfg, setup)
    }
}
