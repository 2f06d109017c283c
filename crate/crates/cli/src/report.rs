use std::path::Path;

use serde::Serialize;

use popta::logic::{Mode, Property, Verdict};
use popta::pipeline::{LoadedModel, ModelStats, Prepared};
use popta::strategy::{BoundsReport, ResolutionRow};

/// Machine-readable result of a `verify` or `synth` run.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub mode: &'static str,
    pub property: String,
    pub model: ModelStats,
    pub bounds: BoundsReport,
    pub verdict: Option<Verdict>,
    /// For synthesis with a threshold: does the strategy meet it.
    pub strategy_satisfies: Option<bool>,
    pub warnings: Vec<String>,
}

impl Summary {
    pub fn new(
        mode: Mode,
        prop: &Property,
        prepared: &Prepared,
        bounds: &BoundsReport,
        verdict: Option<Verdict>,
        satisfied: Option<bool>,
    ) -> Self {
        Summary {
            mode: match mode {
                Mode::Verify => "verify",
                Mode::Synthesize => "synth",
            },
            property: prop.to_string(),
            model: prepared.stats.clone(),
            bounds: bounds.clone(),
            verdict,
            strategy_satisfies: satisfied,
            warnings: prepared.warnings.iter().map(|w| w.to_string()).collect(),
        }
    }
}

pub fn print_header(path: &Path, model: &LoadedModel, prop: &Property, prepared: &Prepared) {
    let kind = match model {
        LoadedModel::Popta(_) => "POPTA (digital clocks)",
        LoadedModel::Pomdp(_) => "POMDP",
    };
    let s = &prepared.stats;
    println!("Model:    {} [{kind}]", path.display());
    println!("Property: {prop}");
    println!("States: {}  Num. obs: {}  Num. hidd.: {}  Transitions: {}", s.states, s.observations, s.hidden, s.transitions);
    println!();
    println!("{:>4} {:>10} {:>7} {:>8} {:>14} {:>14} {:>9}", "M", "points", "iters", "nodes", "lower", "upper", "time(s)");
}

pub fn print_row(row: &ResolutionRow) {
    let iters = if row.converged { row.iterations.to_string() } else { format!("{}*", row.iterations) };
    println!(
        "{:>4} {:>10} {:>7} {:>8} {:>14.6} {:>14.6} {:>9.3}",
        row.resolution, row.grid_points, iters, row.strategy_nodes, row.lower, row.upper, row.seconds
    );
}

pub fn print_summary(s: &Summary, quiet: bool) {
    let b = &s.bounds;
    if !quiet {
        println!();
        if b.history.iter().any(|r| !r.converged) {
            println!("* value iteration hit its sweep cap before converging");
        }
        if let Some(why) = &b.stopped {
            println!("stopped early: {why}");
        }
    }
    let result = format!("[{:.6}, {:.6}]", b.lower, b.upper);
    match (s.mode, s.verdict, s.strategy_satisfies) {
        ("synth", _, Some(ok)) => println!(
            "Result: {result}  strategy value {:.6}  {}",
            b.strategy_value,
            if ok { "meets threshold" } else { "misses threshold" }
        ),
        ("synth", _, None) => println!("Result: {result}  strategy value {:.6}", b.strategy_value),
        (_, Some(v), _) => println!("Result: {result}  {v}"),
        (_, None, _) => println!("Result: {result}"),
    }
}
