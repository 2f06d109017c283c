mod common;

use popta::pomdp::{Belief, Choice, Pomdp, TargetSpec};
use popta::solver::{Direction, Engine, ObjectiveKind, ObjectiveSpec, SolverConfig};
use popta::strategy::{run_resolution, StrategyConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tight(engine: Engine) -> SolverConfig {
    SolverConfig { eps: 1e-12, max_iters: Some(100_000), engine, ..SolverConfig::default() }
}

/// Dense Bayes filter: `b'(t) ∝ Σ_s b(s) P(s, a, t)` restricted to `obs(t) = o`.
fn dense_update(model: &Pomdp, b: &[f64], a: usize, o: usize) -> (f64, Vec<f64>) {
    let mut next = vec![0.0; model.num_states()];
    for (s, &p) in b.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for &(t, q) in &model.choice(s, a).unwrap().successors {
            if model.obs(t) == o {
                next[t] += p * q;
            }
        }
    }
    let total: f64 = next.iter().sum();
    if total > 0.0 {
        next.iter_mut().for_each(|x| *x /= total);
    }
    (total, next)
}

#[test]
fn belief_updates_match_dense_bayes_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for _ in 0..200 {
        let inst = common::random_acyclic(&mut rng);
        let m = &inst.model;
        for o in 0..m.num_observations() {
            let class = m.class(o);
            let actions = m.class_actions(o);
            if class.is_empty() || actions.is_empty() {
                continue;
            }
            let mut dense = vec![0.0; m.num_states()];
            let raw: Vec<f64> = class.iter().map(|_| rng.gen_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            for (&s, r) in class.iter().zip(&raw) {
                dense[s] = r / total;
            }
            let b = Belief::from_dense(m, o, &raw.iter().map(|r| r / total).collect::<Vec<_>>());
            for &a in &actions {
                let probs = m.obs_probability(&b, a).unwrap();
                let mass: f64 = probs.iter().map(|p| p.1).sum();
                assert!((mass - 1.0).abs() < 1e-12);
                for (o2, p) in probs {
                    let (q, expect) = dense_update(m, &dense, a, o2);
                    assert!((p - q).abs() < 1e-12);
                    // `dense` lists the class members only
                    let got = m.belief_update(&b, a, o2).unwrap().dense(m);
                    let want: Vec<f64> = m.class(o2).iter().map(|&t| expect[t]).collect();
                    assert_eq!(got.len(), want.len());
                    for (x, y) in got.iter().zip(&want) {
                        assert!((x - y).abs() < 1e-12, "{got:?} vs {want:?}");
                    }
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 500);
}

#[test]
fn second_engine_respects_the_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let inst = common::random_acyclic(&mut rng);
        let opt = common::exhaustive_optimum(&inst.model, &inst.objective, 10).value;
        for m in [1, 2, 3, 6] {
            let (row, _, _) = run_resolution(&inst.model, &inst.objective, m, &tight(Engine::J2), &StrategyConfig::default()).unwrap();
            let (s, g) = (row.strategy_value, row.grid_value);
            match inst.objective.direction {
                Direction::Max => assert!(s <= opt + 1e-9 && opt <= g + 1e-9, "#{i} M={m}: {s} {opt} {g}"),
                Direction::Min => assert!(g <= opt + 1e-9 && opt <= s + 1e-9, "#{i} M={m}: {s} {opt} {g}"),
            }
        }
    }
}

#[test]
fn grid_value_tightens_to_optimum_on_small_classes() {
    // with at most two states per class, fine grids are almost exact
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = 0;
    while seen < 30 {
        let inst = common::random_acyclic(&mut rng);
        if inst.model.max_class_size() > 2 {
            continue;
        }
        seen += 1;
        let opt = common::exhaustive_optimum(&inst.model, &inst.objective, 10).value;
        let (row, _, _) = run_resolution(&inst.model, &inst.objective, 64, &tight(Engine::J1), &StrategyConfig::default()).unwrap();
        let scale = opt.abs().max(1.0);
        assert!((row.grid_value - opt).abs() <= 0.1 * scale, "{} vs {opt}", row.grid_value);
    }
}

#[test]
fn unreached_class_members_are_still_solved() {
    // s1 shares o1 with the reachable s3 but is never reached itself; grid
    // beliefs over o1 still put mass on s1, whose successor class o0 must be
    // covered.
    let choice = |action, successors: Vec<(usize, f64)>| Choice { action, successors, reward: 0.0 };
    let model = Pomdp::new(
        (0..6).map(|s| format!("s{s}")).collect(),
        0,
        vec!["a0".into(), "a1".into()],
        vec!["init".into(), "o0".into(), "o1".into(), "goal".into(), "fail".into()],
        vec![0, 2, 1, 2, 3, 4],
        vec![
            vec![choice(0, vec![(3, 1.0)])],
            vec![choice(1, vec![(2, 1.0)])],
            vec![choice(1, vec![(3, 0.68), (4, 0.32)])],
            vec![choice(1, vec![(4, 1.0)])],
            vec![],
            vec![],
        ],
    )
    .unwrap();
    let obj = ObjectiveSpec::new(ObjectiveKind::Probability, Direction::Min, TargetSpec::new(&model, [3]).unwrap());
    for engine in [Engine::J1, Engine::J2] {
        let (row, _, _) = run_resolution(&model, &obj, 1, &tight(engine), &StrategyConfig::default()).unwrap();
        assert!((row.strategy_value - 1.0).abs() < 1e-12);
    }
}

#[test]
fn document_round_trip_preserves_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let inst = common::random_acyclic(&mut rng);
        let text = inst.model.to_json();
        let back = Pomdp::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let a = common::exhaustive_optimum(&inst.model, &inst.objective, 10).value;
        let obj = ObjectiveSpec::new(inst.objective.kind, inst.objective.direction, TargetSpec::new(&back, inst.objective.target.observations().iter().copied()).unwrap());
        let b = common::exhaustive_optimum(&back, &obj, 10).value;
        assert!((a - b).abs() < 1e-12);
    }
}
