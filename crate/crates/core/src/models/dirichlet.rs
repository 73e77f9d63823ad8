use super::Model;
use crate::common::{entropy_bits, Action, Percept, RngStream};
use crate::env::{next_instance_id, Environment, GridSpec, Pos, Rewards, GRID_ACTIONS, NOOP};
use crate::error::{EnvError, ModelError};

/// Categories of the per-tile Dirichlet, in count-vector order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileClass {
    Empty = 0,
    Dispenser = 1,
    Wall = 2,
    Trap = 3,
}

const WALL: [f64; 4] = [0.0, 0.0, 1.0, 0.0];
const LAPLACE: [f64; 4] = [1.0, 1.0, 0.0, 0.0];

/// Factorized gridworld model: an independent Dirichlet over tile classes
/// per tile, a Haldane (all-zero) prior, and the believed agent position.
/// Percept probabilities use the Dirichlet means.
#[derive(Debug)]
pub struct DirichletGridModel {
    id: u64,
    size: usize,
    rewards: Rewards,
    alpha: Vec<[f64; 4]>,
    pos: Pos,
    bumped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletSnapshot {
    owner: u64,
    alpha: Vec<[f64; 4]>,
    pos: Pos,
    bumped: bool,
}

impl Clone for DirichletGridModel {
    fn clone(&self) -> Self {
        Self {
            id: next_instance_id(),
            size: self.size,
            rewards: self.rewards,
            alpha: self.alpha.clone(),
            pos: self.pos,
            bumped: self.bumped,
        }
    }
}

impl DirichletGridModel {
    /// Fresh model for an N x N world with the given reward values and start.
    pub fn new(size: usize, rewards: Rewards, start: Pos) -> Self {
        Self {
            id: next_instance_id(),
            size,
            rewards,
            alpha: vec![[0.0; 4]; size * size],
            pos: start,
            bumped: false,
        }
    }

    /// Fresh model sharing size, rewards and start with `grid`.
    pub fn for_grid(grid: &GridSpec) -> Self {
        Self::new(grid.size(), grid.rewards(), grid.start())
    }

    pub fn counts(&self, pos: Pos) -> [f64; 4] {
        self.alpha[self.index(pos)]
    }

    pub fn position(&self) -> Pos {
        self.pos
    }

    /// Dirichlet mean of `pos`; an all-zero count vector reads as uniform.
    pub fn mean(&self, pos: Pos) -> [f64; 4] {
        mean_of(&self.alpha[self.index(pos)])
    }

    fn index(&self, pos: Pos) -> usize {
        pos.row * self.size + pos.col
    }

    fn neighbor(&self, pos: Pos, dir: usize) -> Option<Pos> {
        let n = self.size;
        match dir {
            0 if pos.col > 0 => Some(Pos::new(pos.row, pos.col - 1)),
            1 if pos.col + 1 < n => Some(Pos::new(pos.row, pos.col + 1)),
            2 if pos.row > 0 => Some(Pos::new(pos.row - 1, pos.col)),
            3 if pos.row + 1 < n => Some(Pos::new(pos.row + 1, pos.col)),
            _ => None,
        }
    }

    fn is_known_wall(&self, pos: Pos) -> bool {
        self.alpha[self.index(pos)] == WALL
    }

    /// Probability of wall bit `dir` being set at the believed position.
    fn wall_bit_probability(&self, dir: usize) -> f64 {
        match self.neighbor(self.pos, dir) {
            None => 1.0,
            Some(q) => self.mean(q)[TileClass::Wall as usize],
        }
    }

    fn cake_probability(&self) -> f64 {
        self.mean(self.pos)[TileClass::Dispenser as usize]
    }

    /// Per-tile mean dispenser probabilities, normalized over the grid.
    pub fn dispenser_distribution(&self) -> Vec<f64> {
        let q: Vec<f64> = self.alpha.iter().map(|a| mean_of(a)[TileClass::Dispenser as usize]).collect();
        let total: f64 = q.iter().sum();
        if total > 0.0 {
            q.iter().map(|x| x / total).collect()
        } else {
            q
        }
    }
}

fn mean_of(alpha: &[f64; 4]) -> [f64; 4] {
    let total: f64 = alpha.iter().sum();
    if total > 0.0 {
        alpha.map(|a| a / total)
    } else {
        [0.25; 4]
    }
}

impl Environment for DirichletGridModel {
    type Snapshot = DirichletSnapshot;

    fn num_actions(&self) -> usize {
        GRID_ACTIONS
    }

    fn reward_range(&self) -> (f64, f64) {
        let r = self.rewards;
        (r.empty.min(r.wall).min(r.cake), r.empty.max(r.wall).max(r.cake))
    }

    fn perform(&mut self, action: Action) -> Result<(), EnvError> {
        crate::env::check_action(action, GRID_ACTIONS)?;
        self.bumped = false;
        if action == NOOP {
            return Ok(());
        }
        match self.neighbor(self.pos, action.0) {
            Some(q) if !self.is_known_wall(q) => self.pos = q,
            _ => self.bumped = true,
        }
        Ok(())
    }

    fn generate_percept(&mut self, rng: &mut RngStream) -> Percept {
        let mut observation = 0;
        for dir in 0..4 {
            if rng.bernoulli(self.wall_bit_probability(dir)) {
                observation |= 1 << dir;
            }
        }
        let reward = if self.bumped {
            self.rewards.wall
        } else if rng.bernoulli(self.cake_probability()) {
            self.rewards.cake
        } else {
            self.rewards.empty
        };
        Percept { observation, reward }
    }

    fn conditional_probability(&self, percept: &Percept) -> f64 {
        if percept.observation >> 4 != 0 {
            return 0.0;
        }
        let mut p = 1.0;
        for dir in 0..4 {
            let wall = self.wall_bit_probability(dir);
            p *= if percept.observation >> dir & 1 == 1 { wall } else { 1.0 - wall };
        }
        let r = self.rewards;
        let p_reward = if self.bumped {
            f64::from(u8::from(percept.reward == r.wall))
        } else if percept.reward == r.cake {
            self.cake_probability()
        } else if percept.reward == r.empty {
            1.0 - self.cake_probability()
        } else {
            0.0
        };
        p * p_reward
    }

    fn snapshot(&self) -> DirichletSnapshot {
        DirichletSnapshot { owner: self.id, alpha: self.alpha.clone(), pos: self.pos, bumped: self.bumped }
    }

    fn restore(&mut self, snapshot: &DirichletSnapshot) -> Result<(), EnvError> {
        if snapshot.owner != self.id {
            return Err(EnvError::SnapshotMismatch { snapshot: snapshot.owner, target: self.id });
        }
        self.alpha.copy_from_slice(&snapshot.alpha);
        self.pos = snapshot.pos;
        self.bumped = snapshot.bumped;
        Ok(())
    }
}

impl Model for DirichletGridModel {
    fn update(&mut self, percept: &Percept) -> Result<(), ModelError> {
        let here = self.index(self.pos);
        if self.alpha[here] == [0.0; 4] {
            self.alpha[here] = LAPLACE;
        }
        if !self.bumped {
            if percept.reward == self.rewards.cake {
                self.alpha[here][TileClass::Dispenser as usize] += 1.0;
            } else if percept.reward == self.rewards.empty {
                self.alpha[here][TileClass::Empty as usize] += 1.0;
            }
        }
        for dir in 0..4 {
            if let Some(q) = self.neighbor(self.pos, dir) {
                let i = self.index(q);
                if percept.observation >> dir & 1 == 1 {
                    self.alpha[i] = WALL;
                } else if self.alpha[i] == [0.0; 4] {
                    self.alpha[i] = LAPLACE;
                }
            }
        }
        Ok(())
    }

    fn entropy(&self) -> f64 {
        let q = self.dispenser_distribution();
        if q.iter().all(|x| *x == 0.0) {
            log::warn!("no tile can hold a dispenser; entropy surrogate is 0");
            return 0.0;
        }
        entropy_bits(&q)
    }

    fn max_entropy(&self) -> f64 {
        ((self.size * self.size) as f64).log2()
    }
}
