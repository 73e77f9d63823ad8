use crate::agents::Agent;
use crate::common::{Action, RngStream};
use crate::env::{ChainEnv, Environment, Gridworld, Pos};
use crate::error::{ConfigError, Error, ModelError};
use std::collections::HashSet;

/// Environments that can report the agent's tile for the exploration metric.
pub trait Tracked: Environment {
    fn position(&self) -> Option<Pos> {
        None
    }

    /// Number of tiles reachable from the start.
    fn reachable_tiles(&self) -> Option<usize> {
        None
    }
}

impl Tracked for Gridworld {
    fn position(&self) -> Option<Pos> {
        Some(Gridworld::position(self))
    }

    fn reachable_tiles(&self) -> Option<usize> {
        Some(self.spec().reachable_count())
    }
}

impl Tracked for ChainEnv {}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleRecord {
    pub t: u32,
    /// Action emitted at this cycle, after seeing the percept.
    pub action: Action,
    pub observation: u32,
    pub reward: f64,
    pub cumulative_reward: f64,
    pub cumulative_info_gain: f64,
    /// Distinct tiles occupied so far, for grid environments.
    pub explored_tiles: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub run: usize,
    pub seed: u64,
    pub records: Vec<CycleRecord>,
    /// Reachable tile count of the grid, if any.
    pub reachable_tiles: Option<usize>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn rewards(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.reward)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("run {} aborted at cycle {cycle}: {source}", .trace.run)]
pub struct RunFailure {
    pub cycle: u32,
    #[source]
    pub source: ModelError,
    /// Cycles completed before the failure.
    pub trace: RunTrace,
}

/// Seeds of the two independent streams a run draws from.
pub fn run_streams(seed: u64) -> (RngStream, RngStream) {
    let root = RngStream::new(seed);
    (root.substream(0), root.substream(1))
}

/// The agent-environment loop: each cycle the environment emits a percept,
/// the agent updates on it and acts, and the environment applies the action.
pub fn run_simulation<E: Tracked>(
    agent: &mut dyn Agent,
    env: &mut E,
    cycles: u32,
    seed: u64,
    run: usize,
) -> Result<RunTrace, Error> {
    if cycles == 0 {
        return Err(ConfigError::Invalid("a run needs at least one cycle".into()).into());
    }
    let (mut env_rng, agent_rng) = run_streams(seed);
    let mut trace = RunTrace { run, seed, records: Vec::with_capacity(cycles as usize), reachable_tiles: env.reachable_tiles() };
    let mut visited = HashSet::new();
    let mut last: Option<Action> = None;
    let mut cumulative_reward = 0.0;
    let mut cumulative_info_gain = 0.0;
    let fail = |cycle, source, trace| Error::Run(Box::new(RunFailure { cycle, source, trace }));

    for t in 1..=cycles {
        let percept = env.generate_percept(&mut env_rng);
        if let Some(p) = env.position() {
            visited.insert(p);
        }
        if let Err(e) = agent.update(last, &percept) {
            return Err(fail(t, e, trace));
        }
        let mut rng = agent_rng.substream(u64::from(t));
        let action = match agent.select_action(&mut rng) {
            Ok(a) => a,
            Err(e) => return Err(fail(t, e, trace)),
        };
        if let Err(e) = env.perform(action) {
            return Err(fail(t, e.into(), trace));
        }
        cumulative_reward += percept.reward;
        cumulative_info_gain += agent.last_info_gain();
        trace.records.push(CycleRecord {
            t,
            action,
            observation: percept.observation,
            reward: percept.reward,
            cumulative_reward,
            cumulative_info_gain,
            explored_tiles: env.position().map(|_| visited.len()),
        });
        last = Some(action);
    }
    Ok(trace)
}
