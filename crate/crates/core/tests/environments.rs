mod common;

use common::fixture;
use grl::common::{Action, Percept, RngStream};
use grl::env::{
    build_random_grid, ChainEnv, ChainSpec, Environment, GridSpec, Gridworld, Pos, Rewards, TileKind,
    TileProbabilities, CHAIN_JUMP, CHAIN_RESET, GRID_ACTIONS, R_MAX,
};
use grl::error::EnvError;
use proptest::prelude::*;
use std::collections::VecDeque;
use std::sync::Arc;

fn world(text: &str) -> Gridworld {
    Gridworld::new(Arc::new(GridSpec::parse(text).unwrap()))
}

fn walk(w: &mut Gridworld, actions: &[usize]) {
    for &a in actions {
        w.perform(Action(a)).unwrap();
    }
}

/// Every percept the gridworld can emit: 4 wall bits, an optional noise
/// symbol, and one of the reward values.
fn percept_space(spec: &GridSpec, alphabet: u32) -> Vec<Percept> {
    let r = spec.rewards();
    let mut out = Vec::new();
    for symbol in 0..alphabet.max(1) {
        for bits in 0..16 {
            for reward in [r.empty, r.wall, r.cake, R_MAX] {
                out.push(Percept::new(bits | symbol << 4, reward));
            }
        }
    }
    out
}

const ROOM: &str = "N=5 theta=0.75 rewards=-1,-5,100\n.#...\n.....\n..T..\n.....\n....D\n";

#[test]
fn bumping_a_wall_costs_the_wall_penalty() {
    let mut w = world(ROOM);
    let mut rng = RngStream::new(0);
    w.perform(Action(1)).unwrap();
    assert_eq!(w.position(), Pos::new(0, 0));
    assert_eq!(w.generate_percept(&mut rng).reward, -5.0);
}

#[test]
fn moving_onto_an_empty_tile_costs_the_empty_penalty() {
    let mut w = world(ROOM);
    let mut rng = RngStream::new(0);
    walk(&mut w, &[3, 1, 1, 1, 3]);
    assert_eq!(w.position(), Pos::new(2, 3));
    w.perform(Action(1)).unwrap();
    assert_eq!(w.position(), Pos::new(2, 4));
    assert_eq!(w.generate_percept(&mut rng).reward, -1.0);
}

#[test]
fn traps_absorb_and_pay_the_wall_penalty_forever() {
    let mut w = world(ROOM);
    let mut rng = RngStream::new(0);
    walk(&mut w, &[3, 3, 1, 1]);
    assert_eq!(w.position(), Pos::new(2, 2));
    assert!(w.state().trapped);
    for t in 0..50 {
        w.perform(Action(t % GRID_ACTIONS)).unwrap();
        assert_eq!(w.position(), Pos::new(2, 2));
        assert_eq!(w.generate_percept(&mut rng).reward, -5.0);
    }
}

#[test]
fn observation_encodes_adjacent_walls() {
    let w = world("N=3 theta=1 rewards=-1,-5,100\n...\n#..\n..D\n");
    // At (0,0): left and up are out of bounds, right is open, down is a wall.
    let e = w.clone().generate_percept(&mut RngStream::new(0));
    assert_eq!(e.observation, 0b1101);
    assert_eq!(e.reward, -1.0);
    assert_eq!(w.conditional_probability(&e), 1.0);
    assert_eq!(w.conditional_probability(&Percept::new(0b1100, -1.0)), 0.0);
}

#[test]
fn dispenser_pays_at_its_rate() {
    let mut w = world("N=2 theta=0.75 rewards=-1,-5,100\nD.\n..\n");
    let mut rng = RngStream::new(42);
    let n = 10_000;
    let cakes = (0..n).filter(|_| w.generate_percept(&mut rng).reward == 100.0).count();
    let freq = cakes as f64 / n as f64;
    assert!((freq - 0.75).abs() <= 0.02, "{freq}");
    assert_eq!(w.conditional_probability(&Percept::new(0b0101, 100.0)), 0.75);
    assert_eq!(w.conditional_probability(&Percept::new(0b0101, -1.0)), 0.25);
}

#[test]
fn noise_symbols_are_uniform() {
    let mut w = world("N=3 theta=1 noise=4 rewards=-1,-5,100\n.N.\n...\n..D\n");
    let mut rng = RngStream::new(7);
    let n = 8000;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        let e = w.generate_percept(&mut rng);
        assert_eq!(e.observation & 0xF, 0b0111);
        counts[(e.observation >> 4) as usize] += 1;
    }
    let expected = n as f64 / 4.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 99.9th percentile of chi-squared with 3 degrees of freedom.
    assert!(chi2 < 16.27, "chi2 = {chi2}, counts {counts:?}");
    assert_eq!(w.conditional_probability(&Percept::new(0b0111 | 3 << 4, -1.0)), 0.25);
    assert_eq!(w.conditional_probability(&Percept::new(0b0111 | 4 << 4, -1.0)), 0.0);
}

#[test]
fn wireheading_pays_the_maximum_forever() {
    let mut w = world("N=3 theta=1 rewards=-1,-5,100\n.M.\n...\n..D\n");
    let mut rng = RngStream::new(0);
    w.perform(Action(1)).unwrap();
    for a in [3, 1, 3, 4, 0] {
        assert_eq!(w.generate_percept(&mut rng).reward, R_MAX);
        w.perform(Action(a)).unwrap();
    }
    assert_eq!(w.generate_percept(&mut rng).reward, R_MAX);
    assert_eq!(R_MAX, (2f64).powi(53) - 1.0);
}

#[test]
fn percept_probabilities_sum_to_one_everywhere() {
    for name in ["standard.grid", "noise.grid", "wirehead.grid"] {
        let spec = fixture(name);
        let alphabet = spec
            .tiles()
            .iter()
            .filter_map(|t| if let TileKind::NoiseSource(k) = t { Some(*k) } else { None })
            .max()
            .unwrap_or(1);
        let space = percept_space(&spec, alphabet);
        let mut w = Gridworld::new(Arc::clone(&spec));
        let mut rng = RngStream::new(3);
        for _ in 0..60 {
            let total: f64 = space.iter().map(|e| w.conditional_probability(e)).sum();
            assert!((total - 1.0).abs() < 1e-12, "{name} at {:?}: {total}", w.position());
            w.perform(Action(rng.below(GRID_ACTIONS))).unwrap();
        }
    }
}

#[test]
fn snapshots_restore_exact_state() {
    let mut w = world(ROOM);
    let space = percept_space(w.spec(), 1);
    let before: Vec<f64> = space.iter().map(|e| w.conditional_probability(e)).collect();
    let snap = w.snapshot();
    walk(&mut w, &[3, 3, 1, 1, 0]);
    assert!(w.state().trapped);
    w.restore(&snap).unwrap();
    let after: Vec<f64> = space.iter().map(|e| w.conditional_probability(e)).collect();
    assert_eq!(before, after);

    // Trapped state survives a round trip.
    walk(&mut w, &[3, 3, 1, 1]);
    let trapped = w.snapshot();
    w.restore(&snap).unwrap();
    w.restore(&trapped).unwrap();
    assert!(w.state().trapped);
}

#[test]
fn nested_snapshots() {
    let mut w = world(ROOM);
    let outer = w.snapshot();
    w.perform(Action(3)).unwrap();
    let middle = w.snapshot();
    w.perform(Action(3)).unwrap();
    let inner = w.snapshot();
    w.perform(Action(1)).unwrap();
    w.restore(&inner).unwrap();
    assert_eq!(w.position(), Pos::new(2, 0));
    w.restore(&middle).unwrap();
    assert_eq!(w.position(), Pos::new(1, 0));
    w.restore(&middle).unwrap();
    assert_eq!(w.position(), Pos::new(1, 0));
    w.restore(&outer).unwrap();
    assert_eq!(w.position(), Pos::new(0, 0));
}

#[test]
fn snapshots_are_tied_to_their_instance() {
    let w = world(ROOM);
    let mut other = world(ROOM);
    assert!(matches!(other.restore(&w.snapshot()), Err(EnvError::SnapshotMismatch { .. })));
    let c = ChainEnv::new(ChainSpec::default()).unwrap();
    let mut d = c.clone();
    assert!(d.restore(&c.snapshot()).is_err());
}

#[test]
fn invalid_actions_are_rejected() {
    let mut w = world(ROOM);
    assert!(w.perform(Action(GRID_ACTIONS)).is_err());
    let mut c = ChainEnv::new(ChainSpec::default()).unwrap();
    assert!(c.perform(Action(2)).is_err());
}

fn paper_chain() -> ChainSpec {
    ChainSpec { n: 6, r0: 0.0, ri: 4.0, rb: 1000.0 }
}

#[test]
fn chain_transitions() {
    let spec = paper_chain();
    assert_eq!(spec.step(0, CHAIN_RESET), (0, 4.0));
    assert_eq!(spec.step(2, CHAIN_JUMP), (3, 0.0));
    assert_eq!(spec.step(5, CHAIN_JUMP), (6, 1000.0));
    assert_eq!(spec.step(6, CHAIN_JUMP), (1, 0.0));
    assert_eq!(spec.step(4, CHAIN_RESET), (0, 4.0));
}

#[test]
fn chain_is_fully_observable() {
    let mut c = ChainEnv::new(paper_chain()).unwrap();
    let mut rng = RngStream::new(0);
    assert_eq!(c.generate_percept(&mut rng), Percept::new(0, 0.0));
    c.perform(CHAIN_JUMP).unwrap();
    c.perform(CHAIN_JUMP).unwrap();
    let e = c.generate_percept(&mut rng);
    assert_eq!(e, Percept::new(2, 0.0));
    assert_eq!(c.conditional_probability(&e), 1.0);
    assert_eq!(c.conditional_probability(&Percept::new(2, 4.0)), 0.0);
}

proptest! {
    #[test]
    fn jumping_6k_times_collects_k_big_rewards(k in 1usize..40) {
        let mut c = ChainEnv::new(paper_chain()).unwrap();
        let mut rng = RngStream::new(0);
        let mut total = 0.0;
        for _ in 0..6 * k {
            c.perform(CHAIN_JUMP).unwrap();
            total += c.generate_percept(&mut rng).reward;
        }
        prop_assert_eq!(total, k as f64 * 1000.0);
    }

    #[test]
    fn restore_of_snapshot_is_identity(actions in proptest::collection::vec(0usize..GRID_ACTIONS, 0..30)) {
        let mut w = world(ROOM);
        walk(&mut w, &actions);
        let state = w.state();
        let snap = w.snapshot();
        w.restore(&snap).unwrap();
        prop_assert_eq!(w.state(), state);
        walk(&mut w, &actions);
        w.restore(&snap).unwrap();
        prop_assert_eq!(w.state(), state);
    }

    #[test]
    fn position_stays_on_passable_tiles(actions in proptest::collection::vec(0usize..GRID_ACTIONS, 0..60)) {
        let spec = fixture("standard.grid");
        let mut w = Gridworld::new(Arc::clone(&spec));
        for a in actions {
            w.perform(Action(a)).unwrap();
            prop_assert!(spec.tile(w.position()).passable());
            if w.state().trapped {
                prop_assert_eq!(spec.tile(w.position()), TileKind::Trap);
            }
        }
    }

    #[test]
    fn random_grids_are_solvable(seed in 0u64..500, size in 2usize..12) {
        let spec = build_random_grid(size, TileProbabilities::default(), 0.75, Rewards::default(), seed).unwrap();
        prop_assert_eq!(&spec, &build_random_grid(size, TileProbabilities::default(), 0.75, Rewards::default(), seed).unwrap());
        prop_assert_eq!(spec.start(), Pos::new(0, 0));
        prop_assert!(spec.tile(spec.start()).passable());
        let (goal, _) = spec.best_dispenser().unwrap();
        prop_assert!(oracle_reachable(&spec, goal));
    }
}

/// Independent breadth-first search over passable tiles, not expanding traps.
fn oracle_reachable(spec: &GridSpec, goal: Pos) -> bool {
    let n = spec.size();
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([spec.start()]);
    seen[0] = true;
    while let Some(p) = queue.pop_front() {
        if p == goal {
            return true;
        }
        if spec.tile(p) == TileKind::Trap {
            continue;
        }
        let (r, c) = (p.row as i64, p.col as i64);
        for (rr, cc) in [(r, c - 1), (r, c + 1), (r - 1, c), (r + 1, c)] {
            if rr < 0 || cc < 0 || rr >= n as i64 || cc >= n as i64 {
                continue;
            }
            let q = Pos::new(rr as usize, cc as usize);
            if spec.tile(q).passable() && !seen[q.row * n + q.col] {
                seen[q.row * n + q.col] = true;
                queue.push_back(q);
            }
        }
    }
    false
}

#[test]
fn fixture_dispenser_distance_matches_independent_search() {
    let spec = fixture("standard.grid");
    let (goal, theta) = spec.best_dispenser().unwrap();
    assert_eq!((goal, theta), (Pos::new(1, 9), 0.75));
    assert!(oracle_reachable(&spec, goal));
    assert_eq!(spec.best_dispenser_distance(), Some(10));
    assert_eq!(spec.reachable_count(), 66);
}
