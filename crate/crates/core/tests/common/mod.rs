#![allow(dead_code)]

use grl::agents::{Agent, AgentConfig, AgentKind};
use grl::common::{Action, Percept, RngStream};
use grl::env::{ChainSpec, Environment, GridSpec, Gridworld};
use grl::error::{EnvError, ModelError};
use grl::models::Model;
use grl::harness::{run_batch, run_streams, EnvConfig, EnvSetup, ExperimentConfig, RunTrace};
use std::path::PathBuf;
use std::sync::Arc;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Arc<GridSpec> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    Arc::new(GridSpec::parse(&text).expect("fixture parses"))
}

pub fn grid_experiment(agent: AgentConfig, grid: &str, runs: usize, cycles: u32, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        agent,
        env: EnvConfig::Gridworld { grid_file: fixture_path(grid), theta: None },
        runs,
        cycles,
        seed,
    }
}

pub fn chain_experiment(agent: AgentConfig, chain: ChainSpec, runs: usize, cycles: u32, seed: u64) -> ExperimentConfig {
    ExperimentConfig { agent, env: EnvConfig::Chain { chain }, runs, cycles, seed }
}

pub fn run(cfg: &ExperimentConfig) -> Vec<RunTrace> {
    let setup: EnvSetup = cfg.environment().expect("environment resolves");
    run_batch(cfg, &setup).expect("batch runs")
}

pub fn agent(kind: AgentKind) -> AgentConfig {
    AgentConfig::new(kind)
}

/// Per-cycle view of a gridworld run: the percept the agent saw, the action
/// it took and the environment after acting.
pub struct Step<'a> {
    pub t: u32,
    pub percept: Percept,
    pub action: Action,
    pub env: &'a Gridworld,
}

/// The simulation loop with the same stream layout as the harness, exposing
/// the environment at every cycle.
pub fn drive<A: Agent + ?Sized>(
    agent: &mut A,
    env: &mut Gridworld,
    cycles: u32,
    seed: u64,
    mut visit: impl FnMut(&A, Step<'_>),
) {
    let (mut env_rng, agent_rng) = run_streams(seed);
    let mut last = None;
    for t in 1..=cycles {
        let percept = env.generate_percept(&mut env_rng);
        agent.update(last, &percept).expect("agent update");
        let mut rng = agent_rng.substream(u64::from(t));
        let action = agent.select_action(&mut rng).expect("agent acts");
        env.perform(action).expect("legal action");
        visit(agent, Step { t, percept, action, env });
        last = Some(action);
    }
}

/// Mean and population standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
}

/// Final average reward of each run, computed from the raw rewards.
pub fn final_avg_rewards(traces: &[RunTrace]) -> Vec<f64> {
    traces.iter().map(|tr| tr.rewards().sum::<f64>() / tr.len() as f64).collect()
}

/// Final explored percentage of each run, from the raw record.
pub fn final_explored(traces: &[RunTrace]) -> Vec<f64> {
    traces
        .iter()
        .map(|tr| {
            let last = tr.records.last().expect("non-empty trace");
            100.0 * last.explored_tiles.expect("grid run") as f64 / tr.reachable_tiles.expect("grid run") as f64
        })
        .collect()
}

/// Depth-one bandit: arm `a` pays 1 with probability `means[a]`, else 0.
#[derive(Clone, Debug, Hash)]
pub struct TwoArm {
    /// Payout rates in percent, so the state stays hashable.
    pub means: [u64; 2],
    pub arm: Option<usize>,
}

impl TwoArm {
    pub fn new(means: [u64; 2]) -> Self {
        Self { means, arm: None }
    }

    fn mean(&self) -> f64 {
        self.arm.map_or(0.0, |a| self.means[a] as f64 / 100.0)
    }
}

impl Environment for TwoArm {
    type Snapshot = Option<usize>;

    fn num_actions(&self) -> usize {
        2
    }

    fn reward_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn perform(&mut self, action: Action) -> Result<(), EnvError> {
        self.arm = Some(action.0);
        Ok(())
    }

    fn generate_percept(&mut self, rng: &mut RngStream) -> Percept {
        Percept::new(0, f64::from(u8::from(rng.bernoulli(self.mean()))))
    }

    fn conditional_probability(&self, e: &Percept) -> f64 {
        if e.reward == 1.0 {
            self.mean()
        } else {
            1.0 - self.mean()
        }
    }

    fn snapshot(&self) -> Option<usize> {
        self.arm
    }

    fn restore(&mut self, s: &Option<usize>) -> Result<(), EnvError> {
        self.arm = *s;
        Ok(())
    }
}

impl Model for TwoArm {
    fn update(&mut self, _: &Percept) -> Result<(), ModelError> {
        Ok(())
    }
    fn entropy(&self) -> f64 {
        0.0
    }
    fn max_entropy(&self) -> f64 {
        0.0
    }
}
