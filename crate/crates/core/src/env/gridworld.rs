use super::grid_spec::{GridSpec, Pos, TileKind};
use super::{check_action, next_instance_id, Environment};
use crate::common::{Action, Percept, RngStream};
use crate::error::EnvError;
use std::sync::Arc;

/// Actions: left, right, up, down, stay.
pub const GRID_ACTIONS: usize = 5;
pub const NOOP: Action = Action(4);

/// Reward paid forever once the agent has stepped on a self-modification tile.
pub const R_MAX: f64 = 9_007_199_254_740_991.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridState {
    pub pos: Pos,
    pub bumped: bool,
    pub trapped: bool,
    pub wireheaded: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSnapshot {
    owner: u64,
    state: GridState,
}

/// Gridworld with known layout. Observations are the four wall bits of the
/// current tile (left, right, up, down; out of bounds reads as wall) in the
/// low nibble, plus a noise symbol shifted left by four when the agent is
/// next to a noise source.
#[derive(Debug)]
pub struct Gridworld {
    id: u64,
    spec: Arc<GridSpec>,
    state: GridState,
}

impl Clone for Gridworld {
    fn clone(&self) -> Self {
        Self { id: next_instance_id(), spec: Arc::clone(&self.spec), state: self.state }
    }
}

impl Gridworld {
    pub fn new(spec: Arc<GridSpec>) -> Self {
        let start = spec.start();
        Self {
            id: next_instance_id(),
            spec,
            state: GridState { pos: start, bumped: false, trapped: false, wireheaded: false },
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<GridSpec> {
        &self.spec
    }

    pub fn state(&self) -> GridState {
        self.state
    }

    pub fn position(&self) -> Pos {
        self.state.pos
    }

    /// Wall bits of `pos` as the low nibble of an observation.
    pub fn wall_bits(spec: &GridSpec, pos: Pos) -> u32 {
        (0..4).fold(0, |bits, dir| {
            let blocked = spec.neighbor(pos, dir).map_or(true, |q| !spec.tile(q).passable());
            bits | (u32::from(blocked) << dir)
        })
    }

    /// Noise alphabet size at `pos`, if a noise source is adjacent.
    pub fn noise_alphabet(spec: &GridSpec, pos: Pos) -> Option<u32> {
        (0..4)
            .filter_map(|dir| spec.neighbor(pos, dir))
            .filter_map(|q| match spec.tile(q) {
                TileKind::NoiseSource(k) => Some(k),
                _ => None,
            })
            .max()
    }

    /// Possible rewards for the current state with their probabilities.
    fn reward_outcomes(&self) -> [(f64, f64); 2] {
        let r = self.spec.rewards();
        let s = &self.state;
        if s.wireheaded {
            return [(R_MAX, 1.0), (R_MAX, 0.0)];
        }
        if s.trapped || s.bumped {
            return [(r.wall, 1.0), (r.wall, 0.0)];
        }
        match self.spec.tile(s.pos) {
            TileKind::Dispenser(theta) => [(r.cake, theta), (r.empty, 1.0 - theta)],
            _ => [(r.empty, 1.0), (r.empty, 0.0)],
        }
    }
}

impl Environment for Gridworld {
    type Snapshot = GridSnapshot;

    fn num_actions(&self) -> usize {
        GRID_ACTIONS
    }

    fn reward_range(&self) -> (f64, f64) {
        let r = self.spec.rewards();
        let lo = r.empty.min(r.wall).min(r.cake);
        let mut hi = r.empty.max(r.wall).max(r.cake);
        if self.spec.has_self_modification() {
            hi = hi.max(R_MAX);
        }
        (lo, hi)
    }

    fn perform(&mut self, action: Action) -> Result<(), EnvError> {
        check_action(action, GRID_ACTIONS)?;
        self.state.bumped = false;
        if self.state.trapped || action == NOOP {
            return Ok(());
        }
        match self.spec.neighbor(self.state.pos, action.0) {
            Some(q) if self.spec.tile(q).passable() => {
                self.state.pos = q;
                match self.spec.tile(q) {
                    TileKind::Trap => self.state.trapped = true,
                    TileKind::SelfModification => self.state.wireheaded = true,
                    _ => {}
                }
            }
            _ => self.state.bumped = true,
        }
        Ok(())
    }

    fn generate_percept(&mut self, rng: &mut RngStream) -> Percept {
        let pos = self.state.pos;
        let mut observation = Self::wall_bits(&self.spec, pos);
        if let Some(k) = Self::noise_alphabet(&self.spec, pos) {
            observation |= (rng.below(k as usize) as u32) << 4;
        }
        let [(r0, p0), (r1, _)] = self.reward_outcomes();
        let reward = if p0 >= 1.0 || rng.bernoulli(p0) { r0 } else { r1 };
        Percept { observation, reward }
    }

    fn conditional_probability(&self, percept: &Percept) -> f64 {
        let pos = self.state.pos;
        if percept.observation & 0xF != Self::wall_bits(&self.spec, pos) {
            return 0.0;
        }
        let symbol = percept.observation >> 4;
        let p_obs = match Self::noise_alphabet(&self.spec, pos) {
            Some(k) if symbol < k => 1.0 / f64::from(k),
            Some(_) => 0.0,
            None if symbol == 0 => 1.0,
            None => 0.0,
        };
        let p_reward: f64 = self
            .reward_outcomes()
            .iter()
            .filter(|(r, _)| *r == percept.reward)
            .map(|(_, p)| p)
            .sum();
        p_obs * p_reward
    }

    fn snapshot(&self) -> GridSnapshot {
        GridSnapshot { owner: self.id, state: self.state }
    }

    fn restore(&mut self, snapshot: &GridSnapshot) -> Result<(), EnvError> {
        if snapshot.owner != self.id {
            return Err(EnvError::SnapshotMismatch { snapshot: snapshot.owner, target: self.id });
        }
        self.state = snapshot.state;
        Ok(())
    }
}
