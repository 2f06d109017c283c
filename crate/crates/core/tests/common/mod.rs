//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls the solver, grid or strategy code: beliefs are dense
//! vectors updated directly from the transition lists.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use popta::pomdp::{Choice, Pomdp, TargetSpec};
use popta::solver::{Direction, ObjectiveKind, ObjectiveSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

/// A random instance together with its objective.
pub struct Instance {
    pub model: Pomdp,
    pub objective: ObjectiveSpec,
}

fn distribution(rng: &mut ChaCha8Rng, targets: &[usize]) -> Vec<(usize, f64)> {
    let weights: Vec<f64> = targets.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut out: Vec<(usize, f64)> = targets.iter().zip(&weights).map(|(&t, w)| (t, w / total)).collect();
    let head: f64 = out[..out.len() - 1].iter().map(|e| e.1).sum();
    out.last_mut().unwrap().1 = 1.0 - head;
    out
}

fn pick_distinct(rng: &mut ChaCha8Rng, pool: &[usize], max: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=max.min(pool.len()));
    let mut left = pool.to_vec();
    let mut out = Vec::new();
    for _ in 0..k {
        out.push(left.swap_remove(rng.gen_range(0..left.len())));
    }
    out.sort_unstable();
    out
}

fn nonempty_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn objective_for(rng: &mut ChaCha8Rng) -> (ObjectiveKind, Direction) {
    match rng.gen_range(0..4) {
        0 => (ObjectiveKind::Probability, Direction::Max),
        1 => (ObjectiveKind::Probability, Direction::Min),
        2 => (ObjectiveKind::Reward, Direction::Min),
        _ => (ObjectiveKind::Reward, Direction::Max),
    }
}

/// Random POMDP whose transitions only go forward in state order, so every
/// run ends in an absorbing state within `inner + 1` steps.
///
/// Layout: state 0 is the initial state with its own observation, then up to
/// five inner states sharing at most three observations, then `goal` and
/// (for probabilities) `fail`, both without actions.
pub fn random_acyclic(rng: &mut ChaCha8Rng) -> Instance {
    let (kind, direction) = objective_for(rng);
    let with_fail = kind == ObjectiveKind::Probability;
    let inner = rng.gen_range(2..=if with_fail { 5 } else { 6 });
    let inner_obs = rng.gen_range(1..=3usize);
    let num_actions = rng.gen_range(1..=3usize);

    let goal = inner + 1;
    let fail = goal + 1;
    let n = if with_fail { fail + 1 } else { goal + 1 };

    let mut observations = vec!["init".to_string()];
    observations.extend((0..inner_obs).map(|o| format!("o{o}")));
    observations.push("goal".into());
    let goal_obs = observations.len() - 1;
    if with_fail {
        observations.push("fail".into());
    }

    let mut obs = vec![0; n];
    for s in 1..=inner {
        obs[s] = 1 + rng.gen_range(0..inner_obs);
    }
    obs[goal] = goal_obs;
    if with_fail {
        obs[fail] = goal_obs + 1;
    }

    let class_actions: Vec<Vec<usize>> = (0..observations.len()).map(|_| nonempty_subset(rng, num_actions)).collect();
    let mut choices = vec![Vec::new(); n];
    for s in 0..=inner {
        let mut pool: Vec<usize> = (s + 1..=inner).collect();
        pool.push(goal);
        if with_fail {
            pool.push(fail);
        }
        for &a in &class_actions[obs[s]] {
            let succ = pick_distinct(rng, &pool, 3);
            choices[s].push(Choice {
                action: a,
                successors: distribution(rng, &succ),
                reward: if kind == ObjectiveKind::Reward { rng.gen_range(0.0..3.0) } else { 0.0 },
            });
        }
    }

    let states = (0..n).map(|s| format!("s{s}")).collect();
    let actions = (0..num_actions).map(|a| format!("a{a}")).collect();
    let model = Pomdp::new(states, 0, actions, observations, obs, choices).expect("well-formed");
    assert!(model.validate().is_valid(), "{}", model.validate());
    let target = TargetSpec::new(&model, [goal_obs]).unwrap();
    Instance { model, objective: ObjectiveSpec::new(kind, direction, target) }
}

/// Random MDP with cycles, each state its own observation. Every action
/// leaves for an absorbing state with probability at least 0.2.
pub fn random_mdp(rng: &mut ChaCha8Rng) -> Instance {
    let (kind, direction) = objective_for(rng);
    let with_fail = kind == ObjectiveKind::Probability;
    let inner = rng.gen_range(2..=6usize);
    let num_actions = rng.gen_range(1..=3usize);
    let goal = inner;
    let fail = inner + 1;
    let n = if with_fail { inner + 2 } else { inner + 1 };

    let mut choices = vec![Vec::new(); n];
    let all_inner: Vec<usize> = (0..inner).collect();
    for s in 0..inner {
        for a in nonempty_subset(rng, num_actions) {
            let exit = rng.gen_range(0.2..0.9);
            let targets = pick_distinct(rng, &all_inner, 3);
            let mut succ: Vec<(usize, f64)> = distribution(rng, &targets)
                .into_iter()
                .map(|(t, p)| (t, p * (1.0 - exit)))
                .collect();
            if with_fail {
                let g = rng.gen_range(0.0..1.0);
                succ.push((goal, exit * g));
                succ.push((fail, exit * (1.0 - g)));
            } else {
                succ.push((goal, exit));
            }
            choices[s].push(Choice {
                action: a,
                successors: succ,
                reward: if kind == ObjectiveKind::Reward { rng.gen_range(0.0..3.0) } else { 0.0 },
            });
        }
    }
    let states: Vec<String> = (0..n).map(|s| format!("s{s}")).collect();
    let observations = states.iter().map(|s| format!("o_{s}")).collect();
    let actions = (0..num_actions).map(|a| format!("a{a}")).collect();
    let model = Pomdp::new(states, 0, actions, observations, (0..n).collect(), choices).expect("well-formed");
    assert!(model.validate().is_valid(), "{}", model.validate());
    let target = TargetSpec::new(&model, [goal]).unwrap();
    Instance { model, objective: ObjectiveSpec::new(kind, direction, target) }
}

/// Classical value iteration on the underlying MDP.
pub fn mdp_value_iteration(model: &Pomdp, obj: &ObjectiveSpec) -> Vec<f64> {
    let n = model.num_states();
    let is_target = |s: usize| obj.target.contains(model.obs(s));
    let mut v: Vec<f64> = (0..n).map(|s| if is_target(s) && obj.kind == ObjectiveKind::Probability { 1.0 } else { 0.0 }).collect();
    for _ in 0..1_000_000 {
        let mut delta: f64 = 0.0;
        for s in 0..n {
            if is_target(s) || model.choices(s).is_empty() {
                continue;
            }
            let vals = model.choices(s).iter().map(|c| {
                c.reward + c.successors.iter().map(|&(t, p)| p * v[t]).sum::<f64>()
            });
            let best = match obj.direction {
                Direction::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                Direction::Min => vals.fold(f64::INFINITY, f64::min),
            };
            delta = delta.max((best - v[s]).abs());
            v[s] = best;
        }
        if delta < 1e-14 {
            break;
        }
    }
    v
}

/// States that can reach the target in the transition graph.
fn can_reach_target(model: &Pomdp, obj: &ObjectiveSpec) -> Vec<bool> {
    let n = model.num_states();
    let mut reach: Vec<bool> = (0..n).map(|s| obj.target.contains(model.obs(s))).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !reach[s] && model.choices(s).iter().any(|c| c.successors.iter().any(|&(t, p)| p > 0.0 && reach[t])) {
                reach[s] = true;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// Result of the exhaustive search: the optimal value over deterministic
/// observation-history strategies of at most `horizon` steps, and the
/// largest probability mass still undecided when the horizon ran out.
#[derive(Debug, Clone, Copy)]
pub struct Exhaustive {
    pub value: f64,
    pub unresolved: f64,
}

/// Exhaustive search over deterministic strategies that map observation
/// histories to actions. Subtrees after different observations are chosen
/// independently, so the optimum over all such strategies decomposes into a
/// recursion over the belief tree.
pub fn exhaustive_optimum(model: &Pomdp, obj: &ObjectiveSpec, horizon: usize) -> Exhaustive {
    let reach = can_reach_target(model, obj);
    let mut b = vec![0.0; model.num_states()];
    b[model.initial()] = 1.0;
    search(model, obj, &reach, &b, model.obs(model.initial()), horizon)
}

fn search(model: &Pomdp, obj: &ObjectiveSpec, reach: &[bool], b: &[f64], o: usize, depth: usize) -> Exhaustive {
    let prob = obj.kind == ObjectiveKind::Probability;
    if obj.target.contains(o) {
        return Exhaustive { value: if prob { 1.0 } else { 0.0 }, unresolved: 0.0 };
    }
    let support: Vec<usize> = (0..b.len()).filter(|&s| b[s] > 0.0).collect();
    if prob && support.iter().all(|&s| !reach[s]) {
        return Exhaustive { value: 0.0, unresolved: 0.0 };
    }
    let actions: BTreeSet<usize> = support.iter().flat_map(|&s| model.choices(s).iter().map(|c| c.action)).collect();
    if actions.is_empty() {
        return Exhaustive { value: 0.0, unresolved: 0.0 };
    }
    if depth == 0 {
        return Exhaustive { value: 0.0, unresolved: 1.0 };
    }
    let mut best: Option<f64> = None;
    let mut unresolved: f64 = 0.0;
    for a in actions {
        let mut reward = 0.0;
        let mut next: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for &s in &support {
            let c = model.choice(s, a).expect("actions agree within a class");
            reward += b[s] * c.reward;
            for &(t, p) in &c.successors {
                next.entry(model.obs(t)).or_insert_with(|| vec![0.0; b.len()])[t] += b[s] * p;
            }
        }
        let mut value = reward;
        let mut open = 0.0;
        for (o2, mass) in next {
            let total: f64 = mass.iter().sum();
            if total <= 0.0 {
                continue;
            }
            let nb: Vec<f64> = mass.iter().map(|m| m / total).collect();
            let sub = search(model, obj, reach, &nb, o2, depth - 1);
            value += total * sub.value;
            open += total * sub.unresolved;
        }
        unresolved = unresolved.max(open);
        best = Some(match (best, obj.direction) {
            (None, _) => value,
            (Some(v), Direction::Max) => v.max(value),
            (Some(v), Direction::Min) => v.min(value),
        });
    }
    Exhaustive { value: best.unwrap(), unresolved }
}
