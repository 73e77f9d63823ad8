mod common;

use common::{drive, fixture};
use grl::agents::{
    build_agent, utility_shannon, utility_square, Agent, AgentConfig, AgentKind, BayesAgent, BayesExpAgent, MdlAgent,
    ModelKind, PriorKind, QLearning, ThompsonAgent, TrueEnv, Utility,
};
use grl::common::{Action, Percept, RngStream};
use grl::env::{ChainEnv, ChainSpec, Environment, GridSpec, Gridworld};
use grl::models::{build_dispenser_class, info_gain, MixtureModel, Model};
use grl::planners::PlannerConfig;
use proptest::prelude::*;
use std::sync::Arc;

fn small_grid() -> Arc<GridSpec> {
    Arc::new(GridSpec::parse("N=3 theta=0.75 rewards=-1,-5,100\n...\n.#.\n..D\n").unwrap())
}

/// The truth plus a rival that already carries no weight.
fn point_mass(truth: &Gridworld) -> MixtureModel<Gridworld> {
    let class = build_dispenser_class(truth.spec(), 0.75).unwrap();
    let other = class.hypotheses().iter().find(|h| h.spec().tiles() != truth.spec().tiles()).unwrap().clone();
    MixtureModel::new(vec![truth.clone(), other], vec![1.0, 0.0]).unwrap()
}

fn quick(horizon: u32, samples: u32) -> PlannerConfig {
    PlannerConfig { horizon, samples, ..PlannerConfig::default() }
}

#[test]
fn utility_closed_forms() {
    assert_eq!(utility_square(0.25), -0.25);
    assert_eq!(utility_shannon(0.25), 2.0);
    assert_eq!(utility_shannon(0.5), 1.0);
}

#[test]
fn deterministic_truth_yields_no_curiosity() {
    // The chain is deterministic: every percept has probability 1.
    let mut chain = ChainEnv::new(ChainSpec { n: 6, r0: 0.0, ri: 4.0, rb: 1000.0 }).unwrap();
    let mut rng = RngStream::new(0);
    for a in [1, 1, 0, 1, 1, 1, 1, 1, 1] {
        let saved = chain.snapshot();
        let (_, sq) = Utility::Square.step(&mut chain, Action(a), &mut rng).unwrap();
        chain.restore(&saved).unwrap();
        let (_, sh) = Utility::Shannon.step(&mut chain, Action(a), &mut rng).unwrap();
        chain.restore(&saved).unwrap();
        let (_, kl) = Utility::KullbackLeibler.step(&mut chain, Action(a), &mut rng).unwrap();
        assert_eq!((sq, sh, kl), (-1.0, 0.0, 0.0));
    }
}

#[test]
fn degenerate_mixture_acts_like_the_informed_agent() {
    let spec = fixture("standard.grid");
    let truth = Gridworld::new(Arc::clone(&spec));
    let mixture = point_mass(&truth);

    let mut informed = BayesAgent::new(truth.clone(), Utility::Reward, quick(6, 100)).unwrap();
    let mut bayes = BayesAgent::new(mixture, Utility::Reward, quick(6, 100)).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    drive(&mut informed, &mut truth.clone(), 40, 9, |_, s| a.push(s.action));
    drive(&mut bayes, &mut truth.clone(), 40, 9, |_, s| b.push(s.action));
    assert_eq!(a, b);
}

#[test]
fn info_gain_is_reported_per_update() {
    let spec = fixture("standard.grid");
    let mut agent = BayesAgent::new(build_dispenser_class(&spec, 0.75).unwrap(), Utility::Reward, quick(4, 60)).unwrap();
    let mut env = Gridworld::new(Arc::clone(&spec));
    let mut before = agent.model().weights().to_vec();
    let mut total = 0.0;
    drive(&mut agent, &mut env, 40, 5, |agent, _| {
        let after = agent.model().weights().to_vec();
        let expected = info_gain(&before, &after);
        assert!((agent.last_info_gain() - expected).abs() < 1e-9);
        total += expected;
        before = after;
    });
    let prior = agent.model().max_entropy();
    assert!((total - (prior - agent.model().entropy())).abs() < 1e-9);
}

#[test]
fn kl_agent_wanders_once_nothing_is_left_to_learn() {
    let spec = fixture("standard.grid");
    let truth = Gridworld::new(Arc::clone(&spec));
    let mixture = point_mass(&truth);
    let mut agent = BayesAgent::new(mixture, Utility::KullbackLeibler, quick(3, 40)).unwrap();
    let mut counts = [0u32; 5];
    drive(&mut agent, &mut truth.clone(), 2000, 3, |_, s| counts[s.action.0] += 1);
    let expected = 2000.0 / 5.0;
    let chi2: f64 = counts.iter().map(|&c| (f64::from(c) - expected).powi(2) / expected).sum();
    // 99.9% quantile of chi-square with 4 degrees of freedom.
    assert!(chi2 < 18.47, "{counts:?} chi2={chi2}");
}

#[test]
fn dogmatic_prior_keeps_the_agent_home() {
    let spec = fixture("standard.grid");
    let env = Gridworld::new(Arc::clone(&spec));
    let mut cfg = AgentConfig::new(AgentKind::Aixi);
    cfg.prior = PriorKind::Dogmatic;
    cfg.samples = 300;
    let mut agent = build_agent(&cfg, TrueEnv::Grid(&env)).unwrap();
    drive(&mut agent, &mut env.clone(), 20, 1, |_, s| {
        assert_eq!(s.env.position(), spec.start(), "left the start at cycle {}", s.t);
    });
}

#[test]
fn thompson_commits_to_unfalsified_samples() {
    let spec = fixture("standard.grid");
    let horizon = 4;
    let mut agent = ThompsonAgent::new(build_dispenser_class(&spec, 0.75).unwrap(), quick(horizon, 60)).unwrap();
    let mut env = Gridworld::new(Arc::clone(&spec));
    drive(&mut agent, &mut env, 120, 11, |agent, _| {
        let drawn = *agent.plan_log().last().unwrap();
        assert!(agent.mixture().weights()[drawn] > 0.0);
    });

    // A sample is kept for `horizon` actions unless the data rule it out.
    let log = agent.plan_log();
    let mut start = 0;
    let final_weights = agent.mixture().weights();
    for i in 1..=log.len() {
        if i == log.len() || log[i] != log[start] {
            let run = (i - start) as u32;
            if i < log.len() && run % horizon != 0 {
                assert_eq!(final_weights[log[start]], 0.0, "dropped {} after {run}", log[start]);
            }
            start = i;
        }
    }
}

#[test]
fn mdl_follows_the_first_surviving_hypothesis() {
    let spec = fixture("standard.grid");
    let mut agent = MdlAgent::new(build_dispenser_class(&spec, 0.75).unwrap(), quick(4, 60)).unwrap();
    let mut env = Gridworld::new(Arc::clone(&spec));
    drive(&mut agent, &mut env, 60, 2, |agent, _| {
        let first = agent.mixture().weights().iter().position(|&w| w > 0.0).unwrap();
        assert_eq!(*agent.plan_log().last().unwrap(), first);
    });
}

#[test]
fn bayesexp_explores_first_under_a_small_threshold() {
    let spec = small_grid();
    let env = Gridworld::new(Arc::clone(&spec));
    let class = build_dispenser_class(&spec, 0.75).unwrap();
    let mut agent = BayesExpAgent::new(class, quick(6, 200), Some(0.01)).unwrap();
    assert!((agent.epsilon(4) - 0.005).abs() < 1e-15);
    drive(&mut agent, &mut env.clone(), 1, 0, |_, _| {});
    assert_eq!(agent.exploration_log(), &[true]);
}

#[test]
fn bayesexp_exploits_when_nothing_is_uncertain() {
    let spec = small_grid();
    let env = Gridworld::new(Arc::clone(&spec));
    let mixture = point_mass(&env);
    let mut agent = BayesExpAgent::new(mixture, quick(4, 50), Some(0.01)).unwrap();
    drive(&mut agent, &mut env.clone(), 10, 0, |_, _| {});
    assert!(agent.exploration_log().iter().all(|&e| !e));
}

#[test]
fn q_learning_backs_up_observed_rewards() {
    let mut q = QLearning::new(5, 0.9, 0.0, 0.99, 100.0).unwrap();
    let s = Percept::new(3, -1.0);
    q.update(None, &s).unwrap();
    assert!(q.table().is_empty());
    q.update(Some(Action(1)), &s).unwrap();
    assert!((q.table().get(&s, Action(1)) - 98.2).abs() < 1e-12);
    // Greedy now avoids the action that disappointed.
    let mut rng = RngStream::new(0);
    for _ in 0..50 {
        assert_ne!(q.select_action(&mut rng).unwrap(), Action(1));
    }
}

#[test]
fn every_agent_builds_on_the_grid() {
    let env = Gridworld::new(fixture("standard.grid"));
    for kind in AgentKind::ALL {
        assert!(build_agent(&AgentConfig::new(kind), TrueEnv::Grid(&env)).is_ok(), "{kind}");
    }
}

#[test]
fn unsupported_combinations_are_rejected() {
    let grid = Gridworld::new(fixture("standard.grid"));
    let chain = ChainEnv::new(ChainSpec { n: 6, r0: 0.0, ri: 4.0, rb: 1000.0 }).unwrap();
    let with = |kind, model| {
        let mut cfg = AgentConfig::new(kind);
        cfg.model = model;
        cfg
    };
    assert!(build_agent(&with(AgentKind::Aimu, Some(ModelKind::Loc)), TrueEnv::Grid(&grid)).is_err());
    assert!(build_agent(&with(AgentKind::Aimu, Some(ModelKind::Dirichlet)), TrueEnv::Grid(&grid)).is_err());
    assert!(build_agent(&with(AgentKind::Mdl, Some(ModelKind::Dirichlet)), TrueEnv::Grid(&grid)).is_err());
    assert!(build_agent(&with(AgentKind::Thompson, Some(ModelKind::Truth)), TrueEnv::Grid(&grid)).is_err());
    assert!(build_agent(&with(AgentKind::Kl, None), TrueEnv::Chain(&chain)).is_err());
    assert!(build_agent(&with(AgentKind::Aixi, Some(ModelKind::Truth)), TrueEnv::Chain(&chain)).is_ok());
    assert!(build_agent(&with(AgentKind::Qlearn, None), TrueEnv::Chain(&chain)).is_ok());

    let mut bad = AgentConfig::new(AgentKind::Aixi);
    bad.horizon = 0;
    assert!(build_agent(&bad, TrueEnv::Grid(&grid)).is_err());
    let mut bad = AgentConfig::new(AgentKind::Qlearn);
    bad.q_alpha = 1.5;
    assert!(build_agent(&bad, TrueEnv::Grid(&grid)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_step_size_backup_hits_the_target(r in -10f64..10.0, gamma in 0f64..1.0, init in -50f64..50.0) {
        let mut q = QLearning::new(2, 1.0, 0.0, gamma, init).unwrap();
        let s = Percept::new(0, 0.0);
        let next = Percept::new(1, r);
        q.update(None, &s).unwrap();
        q.update(Some(Action(0)), &next).unwrap();
        prop_assert!((q.table().get(&s, Action(0)) - (r + gamma * init)).abs() < 1e-9);
    }

    #[test]
    fn square_and_shannon_are_monotone(p in 1e-6f64..1.0, q in 1e-6f64..1.0) {
        prop_assume!(p < q);
        prop_assert!(utility_square(p) > utility_square(q));
        prop_assert!(utility_shannon(p) > utility_shannon(q));
        prop_assert!((utility_shannon(p) + p.log2()).abs() < 1e-12);
    }
}
