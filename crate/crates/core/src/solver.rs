//! Approximate value iteration over the belief MDP restricted to a Lovejoy
//! grid. The result bounds the optimal value from the optimistic side: above
//! for maximisation, below for minimisation.
//!
//! Two engines are provided. `J1` stores values on grid points and
//! interpolates the values of successor beliefs. `J2` stores values on the
//! successor beliefs `g^{a,o}` of grid points and applies the triangulation
//! to the current belief instead.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{GridError, GridSpec, IndexedGrid};
use crate::pomdp::{Belief, BeliefError, Pomdp, TargetSpec};

/// Actions whose backed-up values differ by less than this are ties.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Probability,
    Reward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    /// True if `a` is strictly better than `b` by more than [`TIE_EPS`].
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Max => a > b + TIE_EPS,
            Direction::Min => a < b - TIE_EPS,
        }
    }

    fn pick(self, a: f64, b: f64) -> f64 {
        match self {
            Direction::Max => a.max(b),
            Direction::Min => a.min(b),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Min => "min",
            Direction::Max => "max",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub direction: Direction,
    pub target: TargetSpec,
}

impl ObjectiveSpec {
    pub fn new(kind: ObjectiveKind, direction: Direction, target: TargetSpec) -> Self {
        ObjectiveSpec { kind, direction, target }
    }

    /// Value pinned on target beliefs.
    pub fn target_value(&self) -> f64 {
        match self.kind {
            ObjectiveKind::Probability => 1.0,
            ObjectiveKind::Reward => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Which side of the optimum the grid value lies on.
pub fn bound_side(obj: &ObjectiveSpec) -> BoundSide {
    match obj.direction {
        Direction::Max => BoundSide::Upper,
        Direction::Min => BoundSide::Lower,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    J1,
    J2,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "j1" => Ok(Engine::J1),
            "j2" => Ok(Engine::J2),
            other => Err(format!("unknown engine `{other}` (expected j1 or j2)")),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::J1 => "j1",
            Engine::J2 => "j2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub eps: f64,
    /// Defaults to `10·M·|S|` when absent.
    pub max_iters: Option<usize>,
    pub engine: Engine,
    /// Cap on the total number of grid points over all classes.
    pub grid_limit: u64,
    /// Cap on the number of precomputed interpolation terms.
    pub term_limit: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps: 1e-6,
            max_iters: None,
            engine: Engine::J1,
            grid_limit: 20_000_000,
            term_limit: 200_000_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(
        "expected reward may be infinite: from state `{state}` the target can be avoided forever with positive probability"
    )]
    DivergingValue { state: String },
    #[error("{what} needs {needed} entries, above the limit of {limit}")]
    Capacity { what: &'static str, needed: u64, limit: u64 },
    #[error("observation `{0}` is not covered by the value table")]
    UncoveredClass(String),
}

impl SolverError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, SolverError::Capacity { .. } | SolverError::Grid(GridError::Capacity { .. }))
    }
}

/// Checks that every strategy reaches the target with probability one, so
/// that expected cumulative rewards are finite.
///
/// States without enabled actions count as absorbing non-target states.
pub fn check_reward_prerequisite(model: &Pomdp, target: &TargetSpec) -> Result<(), SolverError> {
    let n = model.num_states();
    let is_target = |s: usize| target.contains(model.obs(s));

    // States from which some strategy avoids the target surely.
    let mut avoid: Vec<bool> = (0..n).map(|s| !is_target(s)).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !avoid[s] || model.choices(s).is_empty() {
                continue;
            }
            let stays = model
                .choices(s)
                .iter()
                .any(|c| c.successors.iter().all(|&(t, p)| p == 0.0 || avoid[t]));
            if !stays {
                avoid[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Forward search from the initial state through non-target states.
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([model.initial()]);
    seen[model.initial()] = true;
    while let Some(s) = queue.pop_front() {
        if avoid[s] {
            let w = avoiding_cycle(model, &avoid, s);
            return Err(SolverError::DivergingValue { state: model.state_name(w).to_string() });
        }
        if is_target(s) {
            continue;
        }
        for c in model.choices(s) {
            for &(t, p) in &c.successors {
                if p > 0.0 && !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(())
}

/// Follows target-avoiding choices from `s` until a dead state or a repeated
/// state is found.
fn avoiding_cycle(model: &Pomdp, avoid: &[bool], mut s: usize) -> usize {
    let mut visited = vec![false; model.num_states()];
    loop {
        if visited[s] {
            return s;
        }
        visited[s] = true;
        let stay = model
            .choices(s)
            .iter()
            .find(|c| c.successors.iter().all(|&(t, p)| p == 0.0 || avoid[t]));
        let Some(c) = stay else { return s };
        match c.successors.iter().find(|e| e.1 > 0.0) {
            Some(&(t, _)) => s = t,
            None => return s,
        }
    }
}

/// Observation classes reachable from the initial state without passing
/// through a target class.
fn reachable_classes(model: &Pomdp, target: &TargetSpec) -> BTreeSet<usize> {
    let n = model.num_states();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([model.initial()]);
    seen[model.initial()] = true;
    let mut classes = BTreeSet::new();
    while let Some(s) = queue.pop_front() {
        let o = model.obs(s);
        if target.contains(o) {
            continue;
        }
        // grid beliefs cover the whole class, so every member is live
        if classes.insert(o) {
            for &m in model.class(o) {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
        for c in model.choices(s) {
            for &(t, _) in &c.successors {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    classes
}

/// Sparse Bellman system: each row optimises over options, each option is a
/// constant plus a weighted sum of current values.
#[derive(Debug, Default)]
struct System {
    row_start: Vec<usize>,
    opt_const: Vec<f64>,
    opt_start: Vec<usize>,
    term_idx: Vec<u32>,
    term_w: Vec<f64>,
}

struct RowBuild {
    options: Vec<(f64, Vec<(u32, f64)>)>,
}

impl System {
    fn assemble(rows: Vec<RowBuild>, limit: u64) -> Result<System, SolverError> {
        let needed: u64 =
            rows.iter().flat_map(|r| r.options.iter()).map(|o| o.1.len() as u64).sum();
        if needed > limit {
            return Err(SolverError::Capacity { what: "value iteration cache", needed, limit });
        }
        let mut sys = System {
            row_start: Vec::with_capacity(rows.len() + 1),
            term_idx: Vec::with_capacity(needed as usize),
            term_w: Vec::with_capacity(needed as usize),
            ..Default::default()
        };
        sys.row_start.push(0);
        sys.opt_start.push(0);
        for row in rows {
            for (c, terms) in row.options {
                sys.opt_const.push(c);
                for (i, w) in terms {
                    sys.term_idx.push(i);
                    sys.term_w.push(w);
                }
                sys.opt_start.push(sys.term_idx.len());
            }
            sys.row_start.push(sys.opt_const.len());
        }
        Ok(sys)
    }

    fn rows(&self) -> usize {
        self.row_start.len() - 1
    }

    fn eval_row(&self, r: usize, values: &[f64], dir: Direction) -> f64 {
        let (lo, hi) = (self.row_start[r], self.row_start[r + 1]);
        if lo == hi {
            return 0.0;
        }
        let mut best: Option<f64> = None;
        for o in lo..hi {
            let mut v = self.opt_const[o];
            for t in self.opt_start[o]..self.opt_start[o + 1] {
                v += self.term_w[t] * values[self.term_idx[t] as usize];
            }
            best = Some(match best {
                None => v,
                Some(b) => dir.pick(b, v),
            });
        }
        best.unwrap_or(0.0)
    }

    /// Synchronous sweeps from zero until the sup-norm change drops to `eps`.
    fn solve(&self, dir: Direction, eps: f64, max_iters: usize) -> (Vec<f64>, usize, f64) {
        let mut current = vec![0.0; self.rows()];
        let mut next = vec![0.0; self.rows()];
        let mut residual = f64::INFINITY;
        let mut iters = 0;
        while iters < max_iters {
            next.par_iter_mut().enumerate().for_each(|(r, slot)| {
                *slot = self.eval_row(r, &current, dir);
            });
            residual = current
                .par_iter()
                .zip(next.par_iter())
                .map(|(a, b)| (a - b).abs())
                .reduce(|| 0.0, f64::max);
            std::mem::swap(&mut current, &mut next);
            iters += 1;
            if residual <= eps {
                break;
            }
        }
        if self.rows() == 0 {
            residual = 0.0;
        }
        (current, iters, residual)
    }
}

/// Grid for one observation class, placed at `offset` in the global arrays.
#[derive(Debug, Clone)]
struct ClassGrid {
    grid: IndexedGrid,
    offset: usize,
    actions: Vec<usize>,
}

/// Reference to a successor value: a solved unknown or the pinned target value.
const PINNED: u32 = u32::MAX;

/// Per grid point and action slot, the observation outcomes of `g`.
#[derive(Debug, Clone, Default)]
struct DualData {
    /// Offsets into `succ`, indexed by `point_slot[g] + slot`.
    slot_start: Vec<usize>,
    point_slot: Vec<usize>,
    succ: Vec<(f64, u32)>,
    node_values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ValueTable {
    engine: Engine,
    objective: ObjectiveSpec,
    resolution: u32,
    classes: Vec<Option<ClassGrid>>,
    /// Value of every grid point; for `J2` these are the induced values.
    values: Vec<f64>,
    dual: Option<DualData>,
    iterations: usize,
    residual: f64,
    converged: bool,
}

fn grid_belief(model: &Pomdp, obs: usize, grid: &IndexedGrid, i: usize) -> Belief {
    Belief::from_dense(model, obs, &grid.belief(i))
}

fn build_class_grids(
    model: &Pomdp,
    obj: &ObjectiveSpec,
    resolution: u32,
    limit: u64,
) -> Result<(Vec<Option<ClassGrid>>, usize), SolverError> {
    let reach = reachable_classes(model, &obj.target);
    let mut needed: u64 = 0;
    for &o in &reach {
        let spec = GridSpec::new(model.class(o).len(), resolution)?;
        needed = needed.saturating_add(crate::grid::grid_count(spec)?);
    }
    if needed > limit {
        return Err(SolverError::Capacity { what: "grid", needed, limit });
    }
    let mut classes = vec![None; model.num_observations()];
    let mut offset = 0;
    for &o in &reach {
        let spec = GridSpec::new(model.class(o).len(), resolution)?;
        let grid = IndexedGrid::new(spec, limit)?;
        let len = grid.len();
        classes[o] = Some(ClassGrid { grid, offset, actions: model.class_actions(o) });
        offset += len;
    }
    Ok((classes, offset))
}

/// Global index of every grid point, paired with its class.
fn point_list(classes: &[Option<ClassGrid>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (o, c) in classes.iter().enumerate() {
        if let Some(c) = c {
            out.extend((0..c.grid.len()).map(|i| (o, i)));
        }
    }
    out
}

fn corners_in(
    model: &Pomdp,
    classes: &[Option<ClassGrid>],
    b: &Belief,
) -> Result<Vec<(usize, f64)>, SolverError> {
    let o = b.observation();
    let cg = classes[o]
        .as_ref()
        .ok_or_else(|| SolverError::UncoveredClass(model.observation_name(o).to_string()))?;
    Ok(cg.grid.corners(&b.dense(model))?.into_iter().map(|(i, w)| (cg.offset + i, w)).collect())
}

fn default_iters(cfg: &SolverConfig, model: &Pomdp, resolution: u32) -> usize {
    cfg.max_iters.unwrap_or(10 * resolution as usize * model.num_states()).max(1)
}

/// Runs the engine selected in `cfg`.
pub fn solve(
    model: &Pomdp,
    obj: &ObjectiveSpec,
    resolution: u32,
    cfg: &SolverConfig,
) -> Result<ValueTable, SolverError> {
    match cfg.engine {
        Engine::J1 => value_iteration(model, obj, resolution, cfg),
        Engine::J2 => value_iteration_dual(model, obj, resolution, cfg),
    }
}

/// Grid-point value iteration with interpolated continuation values.
pub fn value_iteration(
    model: &Pomdp,
    obj: &ObjectiveSpec,
    resolution: u32,
    cfg: &SolverConfig,
) -> Result<ValueTable, SolverError> {
    if obj.kind == ObjectiveKind::Reward {
        check_reward_prerequisite(model, &obj.target)?;
    }
    let (classes, _) = build_class_grids(model, obj, resolution, cfg.grid_limit)?;
    let points = point_list(&classes);
    let pinned = obj.target_value();

    let rows: Vec<RowBuild> = points
        .par_iter()
        .map(|&(o, i)| -> Result<RowBuild, SolverError> {
            let cg = classes[o].as_ref().expect("listed class");
            let b = grid_belief(model, o, &cg.grid, i);
            let mut options = Vec::with_capacity(cg.actions.len());
            for &a in &cg.actions {
                let mut c = match obj.kind {
                    ObjectiveKind::Reward => model.belief_reward(&b, a)?,
                    ObjectiveKind::Probability => 0.0,
                };
                let mut terms = Vec::new();
                for succ in model.successors(&b, a)? {
                    if obj.target.contains(succ.observation) {
                        c += succ.prob * pinned;
                        continue;
                    }
                    for (j, w) in corners_in(model, &classes, &succ.belief)? {
                        terms.push((j as u32, succ.prob * w));
                    }
                }
                options.push((c, terms));
            }
            Ok(RowBuild { options })
        })
        .collect::<Result<_, _>>()?;

    let system = System::assemble(rows, cfg.term_limit)?;
    let max_iters = default_iters(cfg, model, resolution);
    let (values, iterations, residual) = system.solve(obj.direction, cfg.eps, max_iters);
    Ok(ValueTable {
        engine: Engine::J1,
        objective: obj.clone(),
        resolution,
        classes,
        values,
        dual: None,
        iterations,
        residual,
        converged: residual <= cfg.eps,
    })
}

/// Value iteration over the successor beliefs of grid points, with the
/// triangulation applied to the current belief.
pub fn value_iteration_dual(
    model: &Pomdp,
    obj: &ObjectiveSpec,
    resolution: u32,
    cfg: &SolverConfig,
) -> Result<ValueTable, SolverError> {
    if obj.kind == ObjectiveKind::Reward {
        check_reward_prerequisite(model, &obj.target)?;
    }
    let (classes, _) = build_class_grids(model, obj, resolution, cfg.grid_limit)?;
    let points = point_list(&classes);
    let pinned = obj.target_value();

    // Observation outcomes of every (grid point, action); each non-target
    // outcome becomes an unknown of the system.
    let outcomes: Vec<Vec<Vec<(f64, Option<Belief>)>>> = points
        .par_iter()
        .map(|&(o, i)| -> Result<_, SolverError> {
            let cg = classes[o].as_ref().expect("listed class");
            let b = grid_belief(model, o, &cg.grid, i);
            cg.actions
                .iter()
                .map(|&a| -> Result<_, SolverError> {
                    Ok(model
                        .successors(&b, a)?
                        .into_iter()
                        .map(|s| {
                            let keep = (!obj.target.contains(s.observation)).then_some(s.belief);
                            (s.prob, keep)
                        })
                        .collect())
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let mut dual = DualData::default();
    let mut nodes: Vec<Belief> = Vec::new();
    for per_point in outcomes {
        dual.point_slot.push(dual.slot_start.len());
        for per_action in per_point {
            dual.slot_start.push(dual.succ.len());
            for (p, belief) in per_action {
                match belief {
                    None => dual.succ.push((p, PINNED)),
                    Some(b) => {
                        dual.succ.push((p, nodes.len() as u32));
                        nodes.push(b);
                    }
                }
            }
        }
    }
    dual.slot_start.push(dual.succ.len());
    if nodes.len() as u64 >= PINNED as u64 {
        return Err(SolverError::Capacity { what: "successor beliefs", needed: nodes.len() as u64, limit: PINNED as u64 });
    }

    let rows: Vec<RowBuild> = nodes
        .par_iter()
        .map(|h| -> Result<RowBuild, SolverError> {
            let corners = corners_in(model, &classes, h)?;
            let cg = classes[h.observation()].as_ref().expect("covered");
            let mut options = Vec::with_capacity(cg.actions.len());
            for (slot, &a) in cg.actions.iter().enumerate() {
                let mut c = match obj.kind {
                    ObjectiveKind::Reward => model.belief_reward(h, a)?,
                    ObjectiveKind::Probability => 0.0,
                };
                let mut terms = Vec::new();
                for &(g, lambda) in &corners {
                    for &(p, node) in dual.outcomes(g, slot) {
                        if node == PINNED {
                            c += lambda * p * pinned;
                        } else {
                            terms.push((node, lambda * p));
                        }
                    }
                }
                options.push((c, terms));
            }
            Ok(RowBuild { options })
        })
        .collect::<Result<_, _>>()?;

    let system = System::assemble(rows, cfg.term_limit)?;
    let max_iters = default_iters(cfg, model, resolution);
    let (node_values, iterations, residual) = system.solve(obj.direction, cfg.eps, max_iters);
    dual.node_values = node_values;

    let mut table = ValueTable {
        engine: Engine::J2,
        objective: obj.clone(),
        resolution,
        classes,
        values: Vec::new(),
        dual: Some(dual),
        iterations,
        residual,
        converged: residual <= cfg.eps,
    };
    let induced: Vec<f64> = points
        .iter()
        .map(|&(o, i)| {
            let cg = table.classes[o].as_ref().expect("listed class");
            let b = grid_belief(model, o, &cg.grid, i);
            table.value_at(model, &b)
        })
        .collect::<Result<_, _>>()?;
    table.values = induced;
    Ok(table)
}

impl DualData {
    fn outcomes(&self, point: usize, slot: usize) -> &[(f64, u32)] {
        let k = self.point_slot[point] + slot;
        &self.succ[self.slot_start[k]..self.slot_start[k + 1]]
    }
}

impl ValueTable {
    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn objective(&self) -> &ObjectiveSpec {
        &self.objective
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Total number of grid points over all covered classes.
    pub fn num_grid_points(&self) -> usize {
        self.classes.iter().flatten().map(|c| c.grid.len()).sum()
    }

    /// Approximate value of an arbitrary belief under the table's engine.
    pub fn value_at(&self, model: &Pomdp, b: &Belief) -> Result<f64, SolverError> {
        let o = b.observation();
        if self.objective.target.contains(o) {
            return Ok(self.objective.target_value());
        }
        let cg = self.classes[o]
            .as_ref()
            .ok_or_else(|| SolverError::UncoveredClass(model.observation_name(o).to_string()))?;
        let corners = corners_in(model, &self.classes, b)?;
        let Some(dual) = &self.dual else {
            return Ok(corners.iter().map(|&(g, w)| w * self.values[g]).sum());
        };
        let pinned = self.objective.target_value();
        let mut best: Option<f64> = None;
        for (slot, &a) in cg.actions.iter().enumerate() {
            let mut v = match self.objective.kind {
                ObjectiveKind::Reward => model.belief_reward(b, a)?,
                ObjectiveKind::Probability => 0.0,
            };
            for &(g, lambda) in &corners {
                for &(p, node) in dual.outcomes(g, slot) {
                    let cont = if node == PINNED { pinned } else { dual.node_values[node as usize] };
                    v += lambda * p * cont;
                }
            }
            best = Some(match best {
                None => v,
                Some(x) => self.objective.direction.pick(x, v),
            });
        }
        Ok(best.unwrap_or(0.0))
    }

    /// Value of the optimal one-step lookahead for action `a` from `b`,
    /// using the table for continuation values.
    pub fn q_value(&self, model: &Pomdp, b: &Belief, a: usize) -> Result<f64, SolverError> {
        let mut v = match self.objective.kind {
            ObjectiveKind::Reward => model.belief_reward(b, a)?,
            ObjectiveKind::Probability => 0.0,
        };
        for s in model.successors(b, a)? {
            v += s.prob * self.value_at(model, &s.belief)?;
        }
        Ok(v)
    }

    pub fn to_document(&self, model: &Pomdp) -> ValueTableDocument {
        let classes = self
            .classes
            .iter()
            .enumerate()
            .filter_map(|(o, c)| c.as_ref().map(|c| (o, c)))
            .map(|(o, c)| ClassValues {
                observation: model.observation_name(o).to_string(),
                states: model.class(o).iter().map(|&s| model.state_name(s).to_string()).collect(),
                points: (0..c.grid.len())
                    .map(|i| PointValue { counts: c.grid.point(i).to_vec(), value: self.values[c.offset + i] })
                    .collect(),
            })
            .collect();
        ValueTableDocument {
            engine: self.engine,
            resolution: self.resolution,
            iterations: self.iterations,
            residual: self.residual,
            converged: self.converged,
            classes,
        }
    }
}

/// Serialised value table: per observation class, the value of each grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueTableDocument {
    pub engine: Engine,
    pub resolution: u32,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub classes: Vec<ClassValues>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassValues {
    pub observation: String,
    pub states: Vec<String>,
    pub points: Vec<PointValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointValue {
    pub counts: Vec<u32>,
    pub value: f64,
}
