use super::MixtureModel;
use crate::env::{GridSpec, Gridworld, TileKind};
use crate::error::ConfigError;
use std::sync::Arc;

/// Mixture over dispenser locations.
pub type DispenserClass = MixtureModel<Gridworld>;

/// One hypothesis per passable tile of `grid` with its dispensers removed,
/// that tile holding a dispenser of payout probability `theta`. Hypotheses
/// are in row-major order from (0,0) under a uniform prior.
pub fn build_dispenser_class(grid: &GridSpec, theta: f64) -> Result<DispenserClass, ConfigError> {
    let base = grid.without_dispensers();
    let hypotheses = dispenser_hypotheses(&base, theta)?;
    if hypotheses.len() < 2 {
        return Err(ConfigError::Invalid(format!(
            "dispenser class needs at least two legal positions, found {}",
            hypotheses.len()
        )));
    }
    MixtureModel::uniform(hypotheses.into_iter().map(|g| Gridworld::new(Arc::new(g))).collect())
}

fn dispenser_hypotheses(base: &GridSpec, theta: f64) -> Result<Vec<GridSpec>, ConfigError> {
    let mut out = Vec::new();
    for (i, tile) in base.tiles().iter().enumerate() {
        if tile.passable() {
            let mut g = base.clone();
            g.set_tile(base.pos(i), TileKind::Dispenser(theta));
            out.push(GridSpec::unchecked(g.size(), g.tiles().to_vec(), g.rewards())?);
        }
    }
    Ok(out)
}

/// Worlds without a dispenser in which one passable neighbor of the start
/// is a trap; one world per such neighbor.
pub fn trap_hypotheses(grid: &GridSpec) -> Vec<GridSpec> {
    let base = grid.without_dispensers();
    (0..4)
        .filter_map(|dir| base.neighbor(base.start(), dir))
        .filter(|p| base.tile(*p).passable())
        .map(|p| {
            let mut g = base.clone();
            g.set_tile(p, TileKind::Trap);
            g
        })
        .collect()
}

/// Appends `traps` to `class`, giving them total prior mass `mass` split
/// evenly; the class hypotheses share `1 - mass` evenly.
pub fn build_dogmatic_prior(
    class: &DispenserClass,
    traps: Vec<GridSpec>,
    mass: f64,
) -> Result<DispenserClass, ConfigError> {
    if !(mass > 0.0 && mass < 1.0) {
        return Err(ConfigError::Invalid(format!("dogmatic mass {mass} outside (0, 1)")));
    }
    if traps.is_empty() {
        return Err(ConfigError::Invalid("no trap hypotheses: the start has no open neighbor".into()));
    }
    let n = class.len() as f64;
    let k = traps.len() as f64;
    let mut hypotheses: Vec<Gridworld> = class.hypotheses().to_vec();
    let mut weights = vec![(1.0 - mass) / n; class.len()];
    for t in traps {
        hypotheses.push(Gridworld::new(Arc::new(t)));
        weights.push(mass / k);
    }
    MixtureModel::new(hypotheses, weights)
}
