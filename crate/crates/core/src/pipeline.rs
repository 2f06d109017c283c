//! Model loading and preparation: property reduction, digital clocks and
//! target construction, ready for refinement.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::format::{self, ElabOptions, ElaboratedModel, FormatError};
use crate::logic::{self, LabelledPomdp, LogicError, Mode, Property};
use crate::pomdp::{DocumentError, Pomdp};
use crate::popta::{self, DigitalError, DigitalModel, Popta, Restriction};
use crate::solver::ObjectiveSpec;
use crate::strategy::{self, RefineConfig, RefineOutcome, ResolutionRow, StrategyError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Digital(#[from] DigitalError),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

impl PipelineError {
    pub fn is_capacity(&self) -> bool {
        match self {
            PipelineError::Format(FormatError::Capacity(_)) => true,
            PipelineError::Digital(DigitalError::Capacity(_)) => true,
            PipelineError::Logic(LogicError::BoundTooLarge { .. }) => true,
            PipelineError::Strategy(e) => e.is_capacity(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum LoadedModel {
    Popta(Popta),
    Pomdp(LabelledPomdp),
}

/// Loads a `.poptam` source or a POMDP JSON document (by `.json` extension).
pub fn load_model(path: &Path, overrides: &BTreeMap<String, String>) -> Result<LoadedModel, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| PipelineError::Io { path: path.display().to_string(), source })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let pomdp = Pomdp::from_json(&text)?;
        let report = pomdp.validate();
        if let Some(v) = report.violations.first() {
            return Err(PipelineError::Invalid(v.to_string()));
        }
        return Ok(LoadedModel::Pomdp(LabelledPomdp::plain(pomdp)));
    }
    load_source(&text, overrides)
}

pub fn load_source(text: &str, overrides: &BTreeMap<String, String>) -> Result<LoadedModel, PipelineError> {
    let doc = format::parse_model(text)?;
    let opts = ElabOptions { overrides: overrides.clone(), ..ElabOptions::default() };
    Ok(match format::elaborate(&doc, &opts)? {
        ElaboratedModel::Popta(p) => LoadedModel::Popta(p),
        ElaboratedModel::Pomdp(p) => LoadedModel::Pomdp(p),
    })
}

/// Size figures of the model actually solved.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ModelStats {
    pub states: usize,
    pub observations: usize,
    /// Largest observation class.
    pub hidden: usize,
    pub transitions: usize,
}

impl ModelStats {
    pub fn of(m: &Pomdp) -> Self {
        ModelStats {
            states: m.num_states(),
            observations: m.num_observations(),
            hidden: m.max_class_size(),
            transitions: m.num_transitions(),
        }
    }
}

/// A POMDP and objective ready for the solver.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub pomdp: Pomdp,
    pub objective: ObjectiveSpec,
    /// Transformed POPTA and its digital semantics, for POPTA inputs.
    pub digital: Option<(Popta, DigitalModel)>,
    pub warnings: Vec<Restriction>,
    pub stats: ModelStats,
}

pub fn prepare(
    model: &LoadedModel,
    prop: &Property,
    mode: Mode,
    state_limit: usize,
) -> Result<Prepared, PipelineError> {
    match model {
        LoadedModel::Pomdp(lp) => {
            let (pomdp, objective) = logic::reduce_pomdp(lp, prop, mode)?;
            let stats = ModelStats::of(&pomdp);
            Ok(Prepared { pomdp, objective, digital: None, warnings: Vec::new(), stats })
        }
        LoadedModel::Popta(p) => {
            let red = logic::reduce(p, prop, mode)?;
            let digital = popta::digitalize_with_limit(&red.popta, state_limit)?;
            let (pomdp, objective) = red.objective(&digital)?;
            let stats = ModelStats::of(&pomdp);
            let warnings = digital.reset_warnings.clone();
            Ok(Prepared { pomdp, objective, digital: Some((red.popta, digital)), warnings, stats })
        }
    }
}

/// Prepares and refines in one call.
pub fn run(
    model: &LoadedModel,
    prop: &Property,
    mode: Mode,
    cfg: &RefineConfig,
    on_row: impl FnMut(&ResolutionRow),
) -> Result<(Prepared, RefineOutcome), PipelineError> {
    let prepared = prepare(model, prop, mode, popta::DEFAULT_STATE_LIMIT)?;
    let outcome = strategy::refine(&prepared.pomdp, &prepared.objective, cfg, on_row)?;
    Ok((prepared, outcome))
}
