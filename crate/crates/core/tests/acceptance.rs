//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//! Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use popta::grid::{enumerate_grid, grid_count, triangulate, GridSpec};
use popta::logic::{parse_property, Mode};
use popta::pipeline::{self, LoadedModel};
use popta::solver::{Direction, Engine, SolverConfig};
use popta::strategy::{self, run_resolution, RefineConfig, StrategyConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VALUE_TOL: f64 = 1e-6;
const NRP_TOL: f64 = 1e-3;
const GAP_TARGET: f64 = 1e-3;
const PUMP_SLACK: f64 = 1e-3;
const RECON_TOL: f64 = 1e-9;
const WEIGHT_SUM_TOL: f64 = 1e-12;
const SANDWICH_SLACK: f64 = 1e-9;
const MDP_TOL: f64 = 1e-6;

type Check = Result<String, String>;

fn load(name: &str, consts: &[(&str, &str)]) -> LoadedModel {
    let overrides: BTreeMap<String, String> = consts.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    pipeline::load_model(&common::models_dir().join(name), &overrides).expect("bundled model loads")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {:.1}s, limit {}s", e.as_secs_f64(), limit.as_secs()))
}

fn example_1() -> Check {
    let t = Instant::now();
    let model = load("fig1a.poptam", &[]);
    let prop = parse_property("Pmax=? [ F o5 ]").unwrap();
    let (prep, out) = pipeline::run(&model, &prop, Mode::Verify, &RefineConfig::default(), |_| {}).map_err(|e| e.to_string())?;
    let r = &out.report;
    ensure((r.lower - 0.5).abs() <= VALUE_TOL && (r.upper - 0.5).abs() <= VALUE_TOL, || {
        format!("bounds [{}, {}]", r.lower, r.upper)
    })?;
    let brute = common::exhaustive_optimum(&prep.pomdp, &prep.objective, 40);
    ensure(brute.unresolved == 0.0 && (brute.value - 0.5).abs() <= 1e-12, || format!("exhaustive search gave {brute:?}"))?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("bounds [{:.6}, {:.6}], exhaustive {:.6}", r.lower, r.upper, brute.value))
}

fn example_2() -> Check {
    let t = Instant::now();
    let model = load("fig1b.poptam", &[]);
    let prop = parse_property("Rmin=? [ F o3 ]").unwrap();
    let (prep, out) = pipeline::run(&model, &prop, Mode::Synthesize, &RefineConfig::default(), |_| {}).map_err(|e| e.to_string())?;
    let r = &out.report;
    ensure((r.lower - 0.5).abs() <= VALUE_TOL && (r.upper - 0.5).abs() <= VALUE_TOL, || {
        format!("bounds [{}, {}]", r.lower, r.upper)
    })?;
    let exact = strategy::evaluate(&out.strategy, &prep.objective).map_err(|e| e.to_string())?;
    ensure((exact - 0.5).abs() <= VALUE_TOL, || format!("strategy evaluates to {exact}"))?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("bounds [{:.6}, {:.6}], strategy {:.6}", r.lower, r.upper, exact))
}

fn nrp_basic() -> Check {
    let prop = parse_property("Pmax=? [ F unfair ]").unwrap();

    let t = Instant::now();
    let model = load("nrp-basic.poptam", &[("K", "4")]);
    let (_, out) = pipeline::run(&model, &prop, Mode::Verify, &RefineConfig::default(), |_| {}).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(60))?;
    let hist = &out.report.history;
    let m8 = hist.iter().find(|r| r.resolution == 8).ok_or("K=4: no row for M=8")?;
    ensure((m8.lower - 0.25).abs() <= NRP_TOL, || format!("K=4, M=8: lower {}", m8.lower))?;
    let closed = hist.iter().find(|r| r.upper - r.lower <= GAP_TARGET).ok_or("K=4: gap never closed")?;
    ensure(closed.resolution <= 24, || format!("K=4: gap closed only at M={}", closed.resolution))?;

    let t = Instant::now();
    let model = load("nrp-basic.poptam", &[("K", "8")]);
    let cfg = RefineConfig { schedule: vec![2, 4, 8], ..RefineConfig::default() };
    let (_, out8) = pipeline::run(&model, &prop, Mode::Verify, &cfg, |_| {}).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(60))?;
    let r = &out8.report;
    ensure((r.lower - 0.125).abs() <= NRP_TOL, || format!("K=8: lower {}", r.lower))?;
    Ok(format!(
        "K=4: M=8 [{:.4}, {:.4}], gap closed at M={}; K=8: [{:.4}, {:.4}] at M={}",
        m8.lower, m8.upper, closed.resolution, r.lower, r.upper, r.resolution
    ))
}

fn pump_lite() -> Check {
    let prop = parse_property("Pmax=? [ F guess ]").unwrap();
    let mut worst: f64 = 0.0;
    for h in ["1", "2", "3"] {
        for n in ["1", "2", "3", "4"] {
            let model = load("pump-lite.poptam", &[("N", n), ("h0", h), ("h1", h)]);
            let (_, out) = pipeline::run(&model, &prop, Mode::Verify, &RefineConfig::default(), |_| {}).map_err(|e| e.to_string())?;
            let up = out.report.upper;
            ensure(up <= 0.5 + PUMP_SLACK, || format!("N={n}, h={h}: upper {up}"))?;
            worst = worst.max(up);
        }
    }
    Ok(format!("largest upper bound {worst:.6} over N in 1..4, h0 = h1 in 1..3"))
}

fn grid_identities() -> Check {
    let t = Instant::now();
    for n in 1..=6 {
        for m in 1..=10 {
            let spec = GridSpec::new(n, m).unwrap();
            let count = grid_count(spec).unwrap();
            let listed = enumerate_grid(spec).unwrap();
            ensure(count == listed.len() as u64, || format!("N={n} M={m}: count {count} vs {} listed", listed.len()))?;
            for g in &listed {
                let w = triangulate(&g.belief(), spec).unwrap();
                let e = w.entries();
                ensure(e.len() == 1 && &e[0].0 == g && (e[0].1 - 1.0).abs() <= WEIGHT_SUM_TOL, || {
                    format!("grid point {:?} triangulates to {e:?}", g.counts())
                })?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_recon: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=10);
        let raw: Vec<f64> = (0..n).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
        let total: f64 = raw.iter().sum();
        let b: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let w = triangulate(&b, GridSpec::new(n, m).unwrap()).unwrap();
        let recon = w.reconstruct();
        let err = recon.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let sum: f64 = w.entries().iter().map(|e| e.1).sum();
        worst_recon = worst_recon.max(err);
        worst_sum = worst_sum.max((sum - 1.0).abs());
    }
    ensure(worst_recon <= RECON_TOL, || format!("reconstruction error {worst_recon:e}"))?;
    ensure(worst_sum <= WEIGHT_SUM_TOL, || format!("weight sum error {worst_sum:e}"))?;
    within(t, Duration::from_secs(10))?;
    Ok(format!("max reconstruction error {worst_recon:.1e}, max weight-sum error {worst_sum:.1e}"))
}

fn tight_solver(engine: Engine) -> SolverConfig {
    SolverConfig { eps: 1e-12, max_iters: Some(100_000), engine, ..SolverConfig::default() }
}

fn oracle_sandwich() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checks = 0;
    for i in 0..200 {
        let inst = common::random_acyclic(&mut rng);
        let brute = common::exhaustive_optimum(&inst.model, &inst.objective, 10);
        ensure(brute.unresolved == 0.0, || format!("instance {i} is not acyclic within 10 steps"))?;
        for m in [1, 2, 4, 8] {
            let (row, _, _) = run_resolution(&inst.model, &inst.objective, m, &tight_solver(Engine::J1), &StrategyConfig::default())
                .map_err(|e| format!("instance {i}, M={m}: {e}"))?;
            let (s, o, g) = (row.strategy_value, brute.value, row.grid_value);
            let ok = match inst.objective.direction {
                Direction::Max => s <= o + SANDWICH_SLACK && o <= g + SANDWICH_SLACK,
                Direction::Min => g <= o + SANDWICH_SLACK && o <= s + SANDWICH_SLACK,
            };
            ensure(ok, || {
                format!("instance {i}, M={m}, {:?}: strategy {s}, optimum {o}, grid {g}", inst.objective.direction)
            })?;
            checks += 1;
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{checks} (instance, M) pairs sandwiched"))
}

fn fully_observable() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let inst = common::random_mdp(&mut rng);
        let reference = common::mdp_value_iteration(&inst.model, &inst.objective)[inst.model.initial()];
        for engine in [Engine::J1, Engine::J2] {
            for m in [1, 2, 4, 8] {
                let (row, _, _) = run_resolution(&inst.model, &inst.objective, m, &tight_solver(engine), &StrategyConfig::default())
                    .map_err(|e| format!("MDP {i}, {engine}, M={m}: {e}"))?;
                for (what, v) in [("grid", row.grid_value), ("strategy", row.strategy_value)] {
                    let d = (v - reference).abs();
                    ensure(d <= MDP_TOL, || format!("MDP {i}, {engine}, M={m}: {what} {v} vs {reference}"))?;
                    worst = worst.max(d);
                }
            }
        }
    }
    Ok(format!("max deviation from value iteration {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("example 1: fig1a Pmax=? [F o5] = 0.5", example_1),
        ("example 2: fig1b Rmin=? [F o3] = 0.5", example_2),
        ("nrp-basic: 1/K for K = 4, 8", nrp_basic),
        ("pump-lite: guess probability <= 0.5 when h0 = h1", pump_lite),
        ("grid identities", grid_identities),
        ("oracle sandwich on 200 random POMDPs", oracle_sandwich),
        ("fully observable degeneration on 100 MDPs", fully_observable),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!(
        "N/A   dense-time equality and the full pump/scheduler table rows: not computable here; \
         covered by the digital-clock regressions above"
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
