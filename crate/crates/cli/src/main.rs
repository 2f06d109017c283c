mod args;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use popta::logic::{self, Mode, Property, Verdict};
use popta::pipeline::{self, LoadedModel, PipelineError, Prepared};
use popta::popta::{digitalize, DEFAULT_STATE_LIMIT};
use popta::solver;
use popta::strategy::{self, RefineConfig, RefineOutcome};

use args::{Cli, Command, RunArgs};

const EXIT_OK: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = if e.is_capacity() { EXIT_CAPACITY } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let result = match &cli.command {
        Command::Verify(run) => cmd_run(run, Mode::Verify),
        Command::Synth(run) => cmd_run(run, Mode::Synthesize),
        Command::Export(ex) => cmd_export(ex),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn overrides(consts: &[String]) -> Result<BTreeMap<String, String>, Failure> {
    let mut map = BTreeMap::new();
    for c in consts {
        let (k, v) = c
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("--const expects NAME=VALUE, got `{c}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// The property argument is either the property text or a file holding it.
fn read_property(arg: &str) -> Result<Property, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {arg}: {e}")))?
    } else {
        arg.to_string()
    };
    logic::parse_property(text.trim()).map_err(|e| Failure::input(e.to_string()))
}

fn refine_config(run: &RunArgs) -> Result<RefineConfig, Failure> {
    let mut cfg = RefineConfig::default();
    if let Some(s) = &run.resolution_schedule {
        cfg.schedule = s.clone();
    }
    if cfg.schedule.is_empty() || cfg.schedule.contains(&0) {
        return Err(Failure::input("resolution schedule must list positive resolutions"));
    }
    if cfg.schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::input("resolution schedule must be strictly increasing"));
    }
    if !(run.gap > 0.0) {
        return Err(Failure::input("--gap must be positive"));
    }
    if !(run.eps > 0.0) {
        return Err(Failure::input("--eps must be positive"));
    }
    if !(run.dedup_tol >= 0.0) {
        return Err(Failure::input("--dedup-tol must be non-negative"));
    }
    cfg.gap = run.gap;
    cfg.solver.eps = run.eps;
    cfg.solver.max_iters = run.max_iters;
    cfg.solver.engine = run.engine;
    cfg.strategy.node_budget = run.node_budget;
    cfg.strategy.dedup_tol = run.dedup_tol;
    Ok(cfg)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn load(model: &Path, consts: &[String]) -> Result<LoadedModel, Failure> {
    Ok(pipeline::load_model(model, &overrides(consts)?)?)
}

fn cmd_run(run: &RunArgs, mode: Mode) -> Result<u8, Failure> {
    let cfg = refine_config(run)?;
    let prop = read_property(&run.property)?;
    let model = load(&run.model, &run.consts)?;
    let prepared = pipeline::prepare(&model, &prop, mode, DEFAULT_STATE_LIMIT)?;
    for w in &prepared.warnings {
        eprintln!("warning: {w}");
    }

    let human = !run.json && !run.quiet;
    if human {
        report::print_header(&run.model, &model, &prop, &prepared);
    }
    let outcome = strategy::refine(&prepared.pomdp, &prepared.objective, &cfg, |row| {
        if human {
            report::print_row(row);
        }
    })
    .map_err(PipelineError::from)?;

    export_artifacts(run, &prepared, &outcome)?;

    let b = &outcome.report;
    let verdict = prop.verdict(b.lower, b.upper);
    let satisfied = match mode {
        Mode::Synthesize => prop.satisfied_by(b.strategy_value),
        Mode::Verify => None,
    };
    let code = match (mode, verdict, satisfied) {
        (_, None, _) => EXIT_OK,
        (Mode::Verify, Some(Verdict::Holds), _) => EXIT_OK,
        (Mode::Verify, Some(Verdict::Fails), _) => EXIT_FAILS,
        (Mode::Verify, Some(Verdict::Unknown), _) => EXIT_UNKNOWN,
        (Mode::Synthesize, _, Some(true)) => EXIT_OK,
        (Mode::Synthesize, Some(Verdict::Fails), _) => EXIT_FAILS,
        (Mode::Synthesize, _, _) => EXIT_UNKNOWN,
    };

    let summary = report::Summary::new(mode, &prop, &prepared, b, verdict, satisfied);
    if run.json {
        println!("{}", serde_json::to_string_pretty(&summary).expect("report serialises"));
    } else {
        report::print_summary(&summary, run.quiet);
    }
    Ok(code)
}

fn export_artifacts(run: &RunArgs, prepared: &Prepared, outcome: &RefineOutcome) -> Result<(), Failure> {
    if let Some(path) = &run.export_strategy {
        let doc = outcome.strategy.to_document(&prepared.pomdp, outcome.report.strategy_value);
        write_json(path, &doc)?;
    }
    if let Some(path) = &run.export_values {
        write_json(path, &outcome.table.to_document(&prepared.pomdp))?;
    }
    if let Some(path) = &run.export_pomdp {
        write_json(path, &prepared.pomdp.to_document())?;
    }
    if let Some(path) = &run.export_legend {
        write_legend(path, prepared)?;
    }
    Ok(())
}

fn write_legend(path: &PathBuf, prepared: &Prepared) -> Result<(), Failure> {
    match &prepared.digital {
        Some((p, d)) => write_json(path, &d.legend(p)),
        None => Err(Failure::input("a state legend exists only for POPTA models")),
    }
}

fn cmd_export(ex: &args::ExportArgs) -> Result<u8, Failure> {
    let model = load(&ex.model, &ex.consts)?;
    if ex.export_pomdp.is_none() && ex.export_legend.is_none() && ex.export_values.is_none() {
        return Err(Failure::input("nothing to export; pass --export-pomdp, --export-legend or --export-values"));
    }
    let Some(prop) = &ex.property else {
        if ex.export_values.is_some() {
            return Err(Failure::input("--export-values needs a property"));
        }
        // the plain digital semantics, without any property transformation
        match &model {
            LoadedModel::Popta(p) => {
                let d = digitalize(p).map_err(PipelineError::from)?;
                for w in &d.reset_warnings {
                    eprintln!("warning: {w}");
                }
                if let Some(path) = &ex.export_pomdp {
                    write_json(path, &d.pomdp.to_document())?;
                }
                if let Some(path) = &ex.export_legend {
                    write_json(path, &d.legend(p))?;
                }
            }
            LoadedModel::Pomdp(lp) => {
                if ex.export_legend.is_some() {
                    return Err(Failure::input("a state legend exists only for POPTA models"));
                }
                if let Some(path) = &ex.export_pomdp {
                    write_json(path, &lp.pomdp.to_document())?;
                }
            }
        }
        return Ok(EXIT_OK);
    };
    let prop = read_property(prop)?;
    let prepared = pipeline::prepare(&model, &prop, Mode::Verify, DEFAULT_STATE_LIMIT)?;
    for w in &prepared.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &ex.export_pomdp {
        write_json(path, &prepared.pomdp.to_document())?;
    }
    if let Some(path) = &ex.export_legend {
        write_legend(path, &prepared)?;
    }
    if let Some(path) = &ex.export_values {
        if ex.resolution == 0 {
            return Err(Failure::input("--resolution must be positive"));
        }
        let cfg = solver::SolverConfig { engine: ex.engine, ..solver::SolverConfig::default() };
        let table = solver::solve(&prepared.pomdp, &prepared.objective, ex.resolution, &cfg)
            .map_err(|e| PipelineError::from(strategy::StrategyError::from(e)))?;
        write_json(path, &table.to_document(&prepared.pomdp))?;
    }
    Ok(EXIT_OK)
}
