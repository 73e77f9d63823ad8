use crate::common::RngStream;
use crate::error::ConfigError;
use std::collections::VecDeque;
use std::fmt::Write as _;

pub const DEFAULT_NOISE_ALPHABET: u32 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TileKind {
    Empty,
    Wall,
    Dispenser(f64),
    Trap,
    /// Impassable tile that emits a uniform symbol over `alphabet` values
    /// into the observation of any agent standing next to it.
    NoiseSource(u32),
    SelfModification,
}

impl TileKind {
    /// Whether the agent can step onto the tile.
    pub fn passable(self) -> bool {
        !matches!(self, TileKind::Wall | TileKind::NoiseSource(_))
    }

    fn symbol(self) -> char {
        match self {
            TileKind::Empty => '.',
            TileKind::Wall => '#',
            TileKind::Dispenser(_) => 'D',
            TileKind::Trap => 'T',
            TileKind::NoiseSource(_) => 'N',
            TileKind::SelfModification => 'M',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rewards {
    pub empty: f64,
    pub wall: f64,
    pub cake: f64,
}

impl Default for Rewards {
    fn default() -> Self {
        Self { empty: -1.0, wall: -5.0, cake: 100.0 }
    }
}

/// Static layout of an N x N gridworld. The agent always starts at `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    size: usize,
    tiles: Vec<TileKind>,
    rewards: Rewards,
    start: Pos,
}

impl GridSpec {
    /// Builds and validates a layout: the start tile is passable, at least
    /// one dispenser exists and the best dispenser is reachable.
    pub fn new(size: usize, tiles: Vec<TileKind>, rewards: Rewards) -> Result<Self, ConfigError> {
        let spec = Self::unchecked(size, tiles, rewards)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Layout without the solvability checks; used for agent-side
    /// hypotheses that need not describe a playable world.
    pub fn unchecked(size: usize, tiles: Vec<TileKind>, rewards: Rewards) -> Result<Self, ConfigError> {
        if size < 2 {
            return Err(ConfigError::Invalid(format!("grid size {size} < 2")));
        }
        if tiles.len() != size * size {
            return Err(ConfigError::Invalid(format!(
                "expected {} tiles for a {size}x{size} grid, got {}",
                size * size,
                tiles.len()
            )));
        }
        for tile in &tiles {
            match *tile {
                TileKind::Dispenser(theta) if !(theta > 0.0 && theta <= 1.0) => {
                    return Err(ConfigError::Invalid(format!("dispenser theta {theta} outside (0, 1]")));
                }
                TileKind::NoiseSource(k) if k < 2 => {
                    return Err(ConfigError::Invalid(format!("noise alphabet {k} < 2")));
                }
                _ => {}
            }
        }
        Ok(Self { size, tiles, rewards, start: Pos::new(0, 0) })
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !self.tile(self.start).passable() {
            return Err(ConfigError::Invalid("start tile is not passable".into()));
        }
        if self.best_dispenser().is_none() {
            return Err(ConfigError::Invalid("grid has no dispenser".into()));
        }
        if self.best_dispenser_distance().is_none() {
            return Err(ConfigError::Invalid("best dispenser unreachable from start".into()));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rewards(&self) -> Rewards {
        self.rewards
    }

    pub fn start(&self) -> Pos {
        self.start
    }

    pub fn tiles(&self) -> &[TileKind] {
        &self.tiles
    }

    pub fn index(&self, pos: Pos) -> usize {
        pos.row * self.size + pos.col
    }

    pub fn pos(&self, index: usize) -> Pos {
        Pos::new(index / self.size, index % self.size)
    }

    pub fn tile(&self, pos: Pos) -> TileKind {
        self.tiles[self.index(pos)]
    }

    pub fn set_tile(&mut self, pos: Pos, kind: TileKind) {
        let i = self.index(pos);
        self.tiles[i] = kind;
    }

    /// Neighbor in direction `dir` (0 left, 1 right, 2 up, 3 down), if in bounds.
    pub fn neighbor(&self, pos: Pos, dir: usize) -> Option<Pos> {
        let n = self.size;
        match dir {
            0 if pos.col > 0 => Some(Pos::new(pos.row, pos.col - 1)),
            1 if pos.col + 1 < n => Some(Pos::new(pos.row, pos.col + 1)),
            2 if pos.row > 0 => Some(Pos::new(pos.row - 1, pos.col)),
            3 if pos.row + 1 < n => Some(Pos::new(pos.row + 1, pos.col)),
            _ => None,
        }
    }

    /// Highest-theta dispenser; ties go to the lowest row-major index.
    pub fn best_dispenser(&self) -> Option<(Pos, f64)> {
        let mut best: Option<(Pos, f64)> = None;
        for (i, tile) in self.tiles.iter().enumerate() {
            if let TileKind::Dispenser(theta) = *tile {
                if best.map_or(true, |(_, b)| theta > b) {
                    best = Some((self.pos(i), theta));
                }
            }
        }
        best
    }

    /// Breadth-first distances from `from` over passable tiles. Traps are
    /// reachable but never left.
    pub fn bfs_distances(&self, from: Pos) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.tiles.len()];
        if !self.tile(from).passable() {
            return dist;
        }
        let mut queue = VecDeque::new();
        dist[self.index(from)] = Some(0);
        queue.push_back(from);
        while let Some(p) = queue.pop_front() {
            if self.tile(p) == TileKind::Trap && p != from {
                continue;
            }
            let d = dist[self.index(p)].unwrap();
            for dir in 0..4 {
                if let Some(q) = self.neighbor(p, dir) {
                    let qi = self.index(q);
                    if dist[qi].is_none() && self.tile(q).passable() {
                        dist[qi] = Some(d + 1);
                        queue.push_back(q);
                    }
                }
            }
        }
        dist
    }

    /// Number of tiles reachable from the start, the start included.
    pub fn reachable_count(&self) -> usize {
        self.bfs_distances(self.start).iter().filter(|d| d.is_some()).count()
    }

    /// BFS step count from the start to the best dispenser.
    pub fn best_dispenser_distance(&self) -> Option<usize> {
        let (pos, _) = self.best_dispenser()?;
        self.bfs_distances(self.start)[self.index(pos)]
    }

    /// Copy with every dispenser replaced by an empty tile.
    pub fn without_dispensers(&self) -> GridSpec {
        let mut base = self.clone();
        for tile in &mut base.tiles {
            if matches!(tile, TileKind::Dispenser(_)) {
                *tile = TileKind::Empty;
            }
        }
        base
    }

    /// Copy with every dispenser's payout probability set to `theta`.
    pub fn with_theta(&self, theta: f64) -> Result<GridSpec, ConfigError> {
        let mut out = self.clone();
        for tile in &mut out.tiles {
            if let TileKind::Dispenser(t) = tile {
                *t = theta;
            }
        }
        GridSpec::new(out.size, out.tiles, out.rewards)
    }

    pub fn has_self_modification(&self) -> bool {
        self.tiles.iter().any(|t| *t == TileKind::SelfModification)
    }

    /// Parses the text grid format:
    ///
    /// ```text
    /// N=3 theta=0.75 rewards=-1,-5,100
    /// ..#
    /// .#.
    /// ..D
    /// ```
    ///
    /// An optional `noise=<k>` header field sets the noise alphabet size.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines
            .next()
            .ok_or(ConfigError::GridParse { line: 1, message: "empty grid file".into() })?;
        let perr = |line: usize, message: String| ConfigError::GridParse { line, message };

        let mut size = None;
        let mut theta = None;
        let mut rewards = None;
        let mut noise = DEFAULT_NOISE_ALPHABET;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| perr(header_line, format!("malformed header field `{field}`")))?;
            match key {
                "N" => {
                    size = Some(value.parse::<usize>().map_err(|e| perr(header_line, format!("N: {e}")))?)
                }
                "theta" => {
                    theta = Some(value.parse::<f64>().map_err(|e| perr(header_line, format!("theta: {e}")))?)
                }
                "rewards" => {
                    let parts: Vec<f64> = value
                        .split(',')
                        .map(|p| p.parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| perr(header_line, format!("rewards: {e}")))?;
                    if parts.len() != 3 {
                        return Err(perr(header_line, "rewards needs r_empty,r_wall,r_cake".into()));
                    }
                    rewards = Some(Rewards { empty: parts[0], wall: parts[1], cake: parts[2] });
                }
                "noise" => {
                    noise = value.parse::<u32>().map_err(|e| perr(header_line, format!("noise: {e}")))?
                }
                other => return Err(perr(header_line, format!("unknown header field `{other}`"))),
            }
        }
        let size = size.ok_or_else(|| perr(header_line, "missing N".into()))?;
        let theta = theta.ok_or_else(|| perr(header_line, "missing theta".into()))?;
        let rewards = rewards.ok_or_else(|| perr(header_line, "missing rewards".into()))?;

        let mut tiles = Vec::with_capacity(size * size);
        let mut rows = 0;
        for (line_no, row) in lines {
            rows += 1;
            if rows > size {
                return Err(perr(line_no, format!("more than {size} rows")));
            }
            let chars: Vec<char> = row.chars().collect();
            if chars.len() != size {
                return Err(perr(line_no, format!("row has {} tiles, expected {size}", chars.len())));
            }
            for c in chars {
                tiles.push(match c {
                    '.' => TileKind::Empty,
                    '#' => TileKind::Wall,
                    'D' => TileKind::Dispenser(theta),
                    'T' => TileKind::Trap,
                    'N' => TileKind::NoiseSource(noise),
                    'M' => TileKind::SelfModification,
                    other => return Err(perr(line_no, format!("unknown tile `{other}`"))),
                });
            }
        }
        if rows != size {
            return Err(perr(header_line, format!("expected {size} rows, found {rows}")));
        }
        GridSpec::new(size, tiles, rewards)
    }

    /// Inverse of [`GridSpec::parse`]. The header carries a single theta,
    /// taken from the best dispenser.
    pub fn to_text(&self) -> String {
        let theta = self.best_dispenser().map_or(1.0, |(_, t)| t);
        let r = self.rewards;
        let mut out = format!("N={} theta={} rewards={},{},{}", self.size, theta, r.empty, r.wall, r.cake);
        let noise = self.tiles.iter().find_map(|t| match t {
            TileKind::NoiseSource(k) => Some(*k),
            _ => None,
        });
        if let Some(k) = noise.filter(|k| *k != DEFAULT_NOISE_ALPHABET) {
            let _ = write!(out, " noise={k}");
        }
        out.push('\n');
        for row in self.tiles.chunks(self.size) {
            out.extend(row.iter().map(|t| t.symbol()));
            out.push('\n');
        }
        out
    }
}

/// Per-tile class probabilities for random layouts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TileProbabilities {
    pub empty: f64,
    pub wall: f64,
    pub dispenser: f64,
    pub trap: f64,
}

impl Default for TileProbabilities {
    fn default() -> Self {
        Self { empty: 0.76, wall: 0.2, dispenser: 0.02, trap: 0.02 }
    }
}

/// Samples tiles independently, keeping the start empty, until the grid has
/// a dispenser and its best dispenser is reachable.
pub fn build_random_grid(
    size: usize,
    probs: TileProbabilities,
    theta: f64,
    rewards: Rewards,
    seed: u64,
) -> Result<GridSpec, ConfigError> {
    if size < 2 {
        return Err(ConfigError::Invalid(format!("grid size {size} < 2")));
    }
    let weights = [probs.empty, probs.wall, probs.dispenser, probs.trap];
    if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(ConfigError::Invalid("tile probabilities must be non-negative and sum to 1".into()));
    }
    let mut rng = RngStream::new(seed);
    for _ in 0..100_000 {
        let mut tiles: Vec<TileKind> = (0..size * size)
            .map(|_| match crate::common::sample_categorical(&weights, &mut rng).unwrap() {
                0 => TileKind::Empty,
                1 => TileKind::Wall,
                2 => TileKind::Dispenser(theta),
                _ => TileKind::Trap,
            })
            .collect();
        tiles[0] = TileKind::Empty;
        if let Ok(spec) = GridSpec::new(size, tiles, rewards) {
            return Ok(spec);
        }
    }
    Err(ConfigError::Invalid("could not sample a solvable grid".into()))
}
