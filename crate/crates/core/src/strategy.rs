//! Finite-memory strategies read off a value table, their exact evaluation
//! on the induced Markov chain, and the resolution refinement loop.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pomdp::{Belief, BeliefError, Pomdp, DEDUP_TOL};
use crate::solver::{
    self, bound_side, BoundSide, Direction, ObjectiveKind, ObjectiveSpec, SolverConfig, SolverError,
    ValueTable, TIE_EPS,
};

/// Strongly connected components up to this size are solved by dense
/// elimination; larger ones by Gauss–Seidel.
pub const DIRECT_SOLVE_LIMIT: usize = 500;

/// Residual at which Gauss–Seidel stops.
pub const GS_TOL: f64 = 1e-10;

const GS_MAX_SWEEPS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("strategy exploration exceeded the node budget of {0}")]
    Truncated(usize),
    #[error("the strategy reaches node {node} from which the target is never reached; expected reward is infinite")]
    InfiniteReward { node: usize },
    #[error("linear solve did not reach residual {GS_TOL} within {GS_MAX_SWEEPS} sweeps")]
    NotConverged,
    #[error("resolution schedule is empty")]
    EmptySchedule,
}

impl StrategyError {
    pub fn is_capacity(&self) -> bool {
        match self {
            StrategyError::Solver(e) => e.is_capacity(),
            StrategyError::Truncated(_) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub node_budget: usize,
    pub dedup_tol: f64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig { node_budget: 1_000_000, dedup_tol: DEDUP_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub observation: usize,
    pub prob: f64,
    pub node: usize,
}

/// Belief-based strategy. Node 0 is the initial belief; nodes without a
/// choice are targets or dead ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefStrategy {
    nodes: Vec<Belief>,
    choice: Vec<Option<usize>>,
    edges: Vec<Vec<Edge>>,
    /// Reward of the chosen action at each node.
    rewards: Vec<f64>,
    targets: Vec<bool>,
}

impl BeliefStrategy {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Belief {
        &self.nodes[i]
    }

    pub fn choice(&self, i: usize) -> Option<usize> {
        self.choice[i]
    }

    pub fn edges(&self, i: usize) -> &[Edge] {
        &self.edges[i]
    }

    pub fn is_target(&self, i: usize) -> bool {
        self.targets[i]
    }

    pub fn to_document(&self, model: &Pomdp, value: f64) -> StrategyDocument {
        let nodes = (0..self.len())
            .map(|i| NodeEntry {
                id: i,
                observation: model.observation_name(self.nodes[i].observation()).to_string(),
                belief: self.nodes[i]
                    .support()
                    .iter()
                    .map(|&(s, p)| BeliefEntry { state: model.state_name(s).to_string(), prob: p })
                    .collect(),
                target: self.targets[i],
                action: self.choice[i].map(|a| model.action_name(a).to_string()),
                edges: self.edges[i]
                    .iter()
                    .map(|e| EdgeEntry {
                        observation: model.observation_name(e.observation).to_string(),
                        prob: e.prob,
                        node: e.node,
                    })
                    .collect(),
            })
            .collect();
        StrategyDocument { initial: 0, value, nodes }
    }
}

/// Serialised strategy: replaying it needs only the observation sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyDocument {
    pub initial: usize,
    pub value: f64,
    pub nodes: Vec<NodeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: usize,
    pub observation: String,
    pub belief: Vec<BeliefEntry>,
    pub target: bool,
    pub action: Option<String>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefEntry {
    pub state: String,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub observation: String,
    pub prob: f64,
    pub node: usize,
}

/// Lookup of explored beliefs up to L∞ tolerance.
struct NodeIndex {
    tol: f64,
    bucket_width: f64,
    buckets: HashMap<(usize, i64), Vec<usize>>,
}

impl NodeIndex {
    fn new(tol: f64) -> Self {
        NodeIndex { tol, bucket_width: (tol * 1e3).max(1e-12), buckets: HashMap::new() }
    }

    /// Weighted coordinate sum; beliefs within `tol` of each other land in
    /// the same or an adjacent bucket.
    fn key(&self, b: &Belief) -> i64 {
        let h: f64 = b.support().iter().map(|&(s, p)| p * weight(s)).sum();
        (h / self.bucket_width).floor() as i64
    }

    fn find(&self, nodes: &[Belief], b: &Belief) -> Option<usize> {
        let k = self.key(b);
        for kk in [k - 1, k, k + 1] {
            if let Some(list) = self.buckets.get(&(b.observation(), kk)) {
                if let Some(&i) = list.iter().find(|&&i| nodes[i].linf_distance(b) <= self.tol) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn insert(&mut self, b: &Belief, id: usize) {
        let k = self.key(b);
        self.buckets.entry((b.observation(), k)).or_default().push(id);
    }
}

fn weight(s: usize) -> f64 {
    // fractional parts of multiples of the golden ratio, kept away from zero
    0.5 + 0.5 * ((s as f64 + 1.0) * 0.618_033_988_749_895).fract()
}

struct Expansion {
    choice: Option<usize>,
    reward: f64,
    successors: Vec<(usize, f64, Belief)>,
}

fn expand(
    model: &Pomdp,
    table: &ValueTable,
    obj: &ObjectiveSpec,
    b: &Belief,
) -> Result<Expansion, StrategyError> {
    let none = Expansion { choice: None, reward: 0.0, successors: Vec::new() };
    if obj.target.contains(b.observation()) {
        return Ok(none);
    }
    let actions = model.class_actions(b.observation());
    if actions.is_empty() {
        return Ok(none);
    }
    let q: Vec<f64> =
        actions.iter().map(|&a| table.q_value(model, b, a)).collect::<Result<_, _>>()?;
    let opt = q.iter().copied().fold(q[0], |acc, v| match obj.direction {
        Direction::Max => acc.max(v),
        Direction::Min => acc.min(v),
    });
    let tied: Vec<usize> =
        actions.iter().zip(&q).filter(|(_, &v)| (v - opt).abs() <= TIE_EPS).map(|(&a, _)| a).collect();
    let mut pick = None;
    for &a in &tied {
        let succ = model.successors(b, a)?;
        // under maximisation a tied action that leaves the belief unchanged
        // would stall forever, so prefer one that moves
        let stalls = obj.direction == Direction::Max
            && succ.len() == 1
            && succ[0].observation == b.observation()
            && succ[0].belief.linf_distance(b) <= TIE_EPS;
        if pick.is_none() || !stalls {
            pick = Some((a, succ, stalls));
        }
        if !stalls {
            break;
        }
    }
    let (a, succ, _) = pick.expect("at least one tied action");
    let successors = succ.into_iter().map(|s| (s.observation, s.prob, s.belief)).collect();
    Ok(Expansion { choice: Some(a), reward: model.belief_reward(b, a)?, successors })
}

/// Breadth-first exploration of the beliefs reached when acting greedily
/// with respect to `table`.
pub fn synthesize(
    model: &Pomdp,
    table: &ValueTable,
    obj: &ObjectiveSpec,
    cfg: &StrategyConfig,
) -> Result<BeliefStrategy, StrategyError> {
    let init = Belief::initial(model);
    let mut index = NodeIndex::new(cfg.dedup_tol);
    index.insert(&init, 0);
    let mut strat = BeliefStrategy {
        nodes: vec![init],
        choice: vec![None],
        edges: vec![Vec::new()],
        rewards: vec![0.0],
        targets: vec![false],
    };
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let expansions: Vec<Expansion> = frontier
            .par_iter()
            .map(|&n| expand(model, table, obj, &strat.nodes[n]))
            .collect::<Result<_, _>>()?;
        let mut next = Vec::new();
        for (&n, exp) in frontier.iter().zip(expansions) {
            strat.targets[n] = obj.target.contains(strat.nodes[n].observation());
            strat.choice[n] = exp.choice;
            strat.rewards[n] = exp.reward;
            let mut edges = Vec::with_capacity(exp.successors.len());
            for (o, p, b) in exp.successors {
                let id = match index.find(&strat.nodes, &b) {
                    Some(id) => id,
                    None => {
                        if strat.nodes.len() >= cfg.node_budget {
                            return Err(StrategyError::Truncated(cfg.node_budget));
                        }
                        let id = strat.nodes.len();
                        index.insert(&b, id);
                        strat.nodes.push(b);
                        strat.choice.push(None);
                        strat.edges.push(Vec::new());
                        strat.rewards.push(0.0);
                        strat.targets.push(false);
                        next.push(id);
                        id
                    }
                };
                edges.push(Edge { observation: o, prob: p, node: id });
            }
            strat.edges[n] = edges;
        }
        frontier = next;
    }
    Ok(strat)
}

/// Exact value of the strategy on its induced Markov chain.
pub fn evaluate(strat: &BeliefStrategy, obj: &ObjectiveSpec) -> Result<f64, StrategyError> {
    Ok(evaluate_all(strat, obj)?[0])
}

/// Values of every node of the induced chain.
pub fn evaluate_all(strat: &BeliefStrategy, obj: &ObjectiveSpec) -> Result<Vec<f64>, StrategyError> {
    let n = strat.len();
    // nodes that reach a target with positive probability
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, edges) in strat.edges.iter().enumerate() {
        for e in edges {
            if e.prob > 0.0 {
                preds[e.node].push(i);
            }
        }
    }
    let mut live = strat.targets.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&i| live[i]).collect();
    while let Some(i) = stack.pop() {
        for &p in &preds[i] {
            if !live[p] {
                live[p] = true;
                stack.push(p);
            }
        }
    }
    if obj.kind == ObjectiveKind::Reward {
        // every node is reachable from the root by construction
        if let Some(bad) = (0..n).find(|&i| !live[i]) {
            return Err(StrategyError::InfiniteReward { node: bad });
        }
    }

    let pinned = obj.target_value();
    let mut x = vec![0.0; n];
    let mut solved = vec![false; n];
    for i in 0..n {
        if strat.targets[i] {
            x[i] = pinned;
            solved[i] = true;
        } else if !live[i] {
            solved[i] = true;
        }
    }
    let reward = |i: usize| if obj.kind == ObjectiveKind::Reward { strat.rewards[i] } else { 0.0 };

    // Components come out of Tarjan's algorithm in reverse topological order,
    // so every successor outside a component is already solved.
    for comp in tarjan(&strat.edges) {
        let comp: Vec<usize> = comp.into_iter().filter(|&i| !solved[i]).collect();
        if comp.is_empty() {
            continue;
        }
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let m = comp.len();
        // (I − P_cc) x_c = r_c + P_out x_out
        let mut rhs = vec![0.0; m];
        let mut inner: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for (k, &i) in comp.iter().enumerate() {
            rhs[k] = reward(i);
            for e in &strat.edges[i] {
                match local.get(&e.node) {
                    Some(&j) => inner[k].push((j, e.prob)),
                    None => rhs[k] += e.prob * x[e.node],
                }
            }
        }
        let sol = if m <= DIRECT_SOLVE_LIMIT { dense_solve(&inner, &rhs) } else { gauss_seidel(&inner, &rhs)? };
        for (k, &i) in comp.iter().enumerate() {
            x[i] = sol[k];
            solved[i] = true;
        }
    }
    Ok(x)
}

/// Solves `(I − A) x = rhs` by Gaussian elimination with partial pivoting.
fn dense_solve(inner: &[Vec<(usize, f64)>], rhs: &[f64]) -> Vec<f64> {
    let m = rhs.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for k in 0..m {
        a[k][k] = 1.0;
        for &(j, p) in &inner[k] {
            a[k][j] -= p;
        }
        a[k][m] = rhs[k];
    }
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())
            .unwrap_or(col);
        a.swap(col, piv);
        let d = a[col][col];
        if d.abs() < 1e-300 {
            continue;
        }
        for r in col + 1..m {
            let f = a[r][col] / d;
            if f != 0.0 {
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let mut s = a[r][m];
        for c in r + 1..m {
            s -= a[r][c] * x[c];
        }
        x[r] = if a[r][r].abs() < 1e-300 { 0.0 } else { s / a[r][r] };
    }
    x
}

fn gauss_seidel(inner: &[Vec<(usize, f64)>], rhs: &[f64]) -> Result<Vec<f64>, StrategyError> {
    let m = rhs.len();
    let mut x = vec![0.0; m];
    for _ in 0..GS_MAX_SWEEPS {
        let mut delta: f64 = 0.0;
        for k in 0..m {
            let mut s = rhs[k];
            let mut diag = 1.0;
            for &(j, p) in &inner[k] {
                if j == k {
                    diag -= p;
                } else {
                    s += p * x[j];
                }
            }
            let v = s / diag;
            delta = delta.max((v - x[k]).abs());
            x[k] = v;
        }
        if delta <= GS_TOL {
            return Ok(x);
        }
    }
    Err(StrategyError::NotConverged)
}

/// Iterative Tarjan; components are returned in reverse topological order.
fn tarjan(edges: &[Vec<Edge>]) -> Vec<Vec<usize>> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = call.last() {
            if pos < edges[v].len() {
                let w = edges[v][pos].node;
                call.last_mut().expect("non-empty").1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineConfig {
    pub schedule: Vec<u32>,
    pub gap: f64,
    pub solver: SolverConfig,
    pub strategy: StrategyConfig,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            schedule: vec![2, 4, 8, 12, 16, 24, 32, 40],
            gap: 1e-3,
            solver: SolverConfig::default(),
            strategy: StrategyConfig::default(),
        }
    }
}

/// Outcome at one resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionRow {
    pub resolution: u32,
    pub grid_points: usize,
    pub iterations: usize,
    pub converged: bool,
    pub strategy_nodes: usize,
    pub grid_value: f64,
    pub strategy_value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Wall time in seconds; not serialised so reports stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub kind: ObjectiveKind,
    pub direction: Direction,
    pub grid_side: BoundSide,
    pub lower: f64,
    pub upper: f64,
    pub resolution: u32,
    pub grid_value: f64,
    pub strategy_value: f64,
    pub converged: bool,
    pub gap_met: bool,
    /// Why refinement stopped before the schedule ended, if it did.
    pub stopped: Option<String>,
    pub history: Vec<ResolutionRow>,
}

/// Final report together with the artefacts of the last resolution.
#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub report: BoundsReport,
    pub table: ValueTable,
    pub strategy: BeliefStrategy,
}

/// Value table, strategy and bounds at a single resolution.
pub fn run_resolution(
    model: &Pomdp,
    obj: &ObjectiveSpec,
    resolution: u32,
    solver_cfg: &SolverConfig,
    strategy_cfg: &StrategyConfig,
) -> Result<(ResolutionRow, ValueTable, BeliefStrategy), StrategyError> {
    let start = Instant::now();
    let table = solver::solve(model, obj, resolution, solver_cfg)?;
    let grid_value = table.value_at(model, &Belief::initial(model))?;
    let strategy = synthesize(model, &table, obj, strategy_cfg)?;
    let strategy_value = evaluate(&strategy, obj)?;
    // The strategy value is achievable, so it also bounds the optimum; a grid
    // value stopped short of its fixed point must not cross it.
    let (lower, upper) = match bound_side(obj) {
        BoundSide::Upper => (strategy_value, grid_value.max(strategy_value)),
        BoundSide::Lower => (grid_value.min(strategy_value), strategy_value),
    };
    let row = ResolutionRow {
        resolution,
        grid_points: table.num_grid_points(),
        iterations: table.iterations(),
        converged: table.converged(),
        strategy_nodes: strategy.len(),
        grid_value,
        strategy_value,
        lower,
        upper,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((row, table, strategy))
}

/// Runs the grid solve and strategy evaluation for each resolution of the
/// schedule until the bounds are within `gap`. `on_row` sees every row as it
/// is produced.
pub fn refine(
    model: &Pomdp,
    obj: &ObjectiveSpec,
    cfg: &RefineConfig,
    mut on_row: impl FnMut(&ResolutionRow),
) -> Result<RefineOutcome, StrategyError> {
    if cfg.schedule.is_empty() {
        return Err(StrategyError::EmptySchedule);
    }
    let mut history = Vec::new();
    let mut last: Option<(ValueTable, BeliefStrategy)> = None;
    let mut stopped = None;
    for &m in &cfg.schedule {
        match run_resolution(model, obj, m, &cfg.solver, &cfg.strategy) {
            Ok((row, table, strategy)) => {
                on_row(&row);
                let done = row.upper - row.lower <= cfg.gap;
                history.push(row);
                last = Some((table, strategy));
                if done {
                    break;
                }
            }
            Err(e) if e.is_capacity() && last.is_some() => {
                stopped = Some(format!("resolution {m}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let (table, strategy) = last.expect("at least one resolution completed");
    let row = history.last().expect("non-empty history");
    let report = BoundsReport {
        kind: obj.kind,
        direction: obj.direction,
        grid_side: bound_side(obj),
        lower: row.lower,
        upper: row.upper,
        resolution: row.resolution,
        grid_value: row.grid_value,
        strategy_value: row.strategy_value,
        converged: row.converged,
        gap_met: row.upper - row.lower <= cfg.gap,
        stopped,
        history,
    };
    Ok(RefineOutcome { report, table, strategy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pomdp::{Choice, TargetSpec};
    use crate::solver::value_iteration;

    fn choice(action: usize, successors: &[(usize, f64)], reward: f64) -> Choice {
        Choice { action, successors: successors.to_vec(), reward }
    }

    fn guessing_game() -> Pomdp {
        Pomdp::new(
            (0..5).map(|i| format!("s{i}")).collect(),
            0,
            vec!["go".into(), "g0".into(), "g1".into(), "stay".into()],
            vec!["init".into(), "mid".into(), "win".into(), "lose".into()],
            vec![0, 1, 1, 2, 3],
            vec![
                vec![choice(0, &[(1, 0.5), (2, 0.5)], 1.0)],
                vec![choice(1, &[(3, 1.0)], 1.0), choice(2, &[(4, 1.0)], 0.0)],
                vec![choice(1, &[(4, 1.0)], 0.0), choice(2, &[(3, 1.0)], 2.0)],
                vec![choice(3, &[(3, 1.0)], 0.0)],
                vec![choice(3, &[(4, 1.0)], 0.0)],
            ],
        )
        .unwrap()
    }

    fn objective(m: &Pomdp, kind: ObjectiveKind, dir: Direction, target: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::new(kind, dir, TargetSpec::new(m, target.iter().copied()).unwrap())
    }

    #[test]
    fn target_initial_belief_gives_single_node() {
        let m = guessing_game();
        let obj = objective(&m, ObjectiveKind::Probability, Direction::Max, &[0]);
        let t = value_iteration(&m, &obj, 2, &SolverConfig::default()).unwrap();
        let s = synthesize(&m, &t, &obj, &StrategyConfig::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.choice(0), None);
        assert_eq!(evaluate(&s, &obj).unwrap(), 1.0);
        let r = objective(&m, ObjectiveKind::Reward, Direction::Min, &[0]);
        assert_eq!(evaluate(&s, &r).unwrap(), 0.0);
    }

    #[test]
    fn ties_pick_smallest_action() {
        let m = guessing_game();
        let obj = objective(&m, ObjectiveKind::Probability, Direction::Max, &[2]);
        let t = value_iteration(&m, &obj, 2, &SolverConfig::default()).unwrap();
        let s = synthesize(&m, &t, &obj, &StrategyConfig::default()).unwrap();
        // go, then the uniform belief where g0 and g1 tie
        assert_eq!(s.choice(0), Some(0));
        assert_eq!(s.choice(1), Some(1));
        assert!((evaluate(&s, &obj).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(s, synthesize(&m, &t, &obj, &StrategyConfig::default()).unwrap());
    }

    #[test]
    fn node_budget_is_enforced() {
        let m = guessing_game();
        let obj = objective(&m, ObjectiveKind::Probability, Direction::Max, &[2]);
        let t = value_iteration(&m, &obj, 2, &SolverConfig::default()).unwrap();
        let cfg = StrategyConfig { node_budget: 2, ..Default::default() };
        assert_eq!(synthesize(&m, &t, &obj, &cfg), Err(StrategyError::Truncated(2)));
    }

    #[test]
    fn min_reward_strategy() {
        let m = guessing_game();
        let obj = objective(&m, ObjectiveKind::Reward, Direction::Min, &[2, 3]);
        let out = refine(&m, &obj, &RefineConfig::default(), |_| {}).unwrap();
        assert!((out.report.lower - 1.5).abs() < 1e-9);
        assert!((out.report.upper - 1.5).abs() < 1e-9);
        assert_eq!(out.report.history.len(), 1);
        assert!(out.report.gap_met);
    }

    fn chain(edges: Vec<Vec<(usize, f64)>>, targets: Vec<bool>, rewards: Vec<f64>) -> BeliefStrategy {
        let n = edges.len();
        let m = guessing_game();
        BeliefStrategy {
            nodes: vec![Belief::initial(&m); n],
            choice: vec![Some(0); n],
            edges: edges
                .into_iter()
                .map(|l| l.into_iter().map(|(node, prob)| Edge { observation: 0, prob, node }).collect())
                .collect(),
            rewards,
            targets,
        }
    }

    #[test]
    fn cyclic_chain_is_solved_exactly() {
        // 0 -> {0: .5, 1: .5}; 1 -> {0: .5, target: .5}
        let s = chain(
            vec![vec![(0, 0.5), (1, 0.5)], vec![(0, 0.5), (2, 0.5)], vec![]],
            vec![false, false, true],
            vec![1.0, 1.0, 0.0],
        );
        let m = guessing_game();
        let reach = objective(&m, ObjectiveKind::Probability, Direction::Max, &[2]);
        assert!((evaluate(&s, &reach).unwrap() - 1.0).abs() < 1e-12);
        let rew = objective(&m, ObjectiveKind::Reward, Direction::Min, &[2]);
        // x0 = 1 + .5 x0 + .5 x1, x1 = 1 + .5 x0  =>  x0 = 6
        assert!((evaluate(&s, &rew).unwrap() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn trapped_chain_has_infinite_reward() {
        let s = chain(
            vec![vec![(1, 0.5), (2, 0.5)], vec![(1, 1.0)], vec![]],
            vec![false, false, true],
            vec![0.0, 1.0, 0.0],
        );
        let m = guessing_game();
        let reach = objective(&m, ObjectiveKind::Probability, Direction::Max, &[2]);
        assert!((evaluate(&s, &reach).unwrap() - 0.5).abs() < 1e-12);
        let rew = objective(&m, ObjectiveKind::Reward, Direction::Min, &[2]);
        assert_eq!(evaluate(&s, &rew), Err(StrategyError::InfiniteReward { node: 1 }));
    }

    #[test]
    fn gauss_seidel_agrees_with_elimination() {
        let inner = vec![vec![(0, 0.3), (1, 0.3)], vec![(0, 0.2), (2, 0.5)], vec![(1, 0.9)]];
        let rhs = vec![1.0, 0.5, 0.1];
        let a = dense_solve(&inner, &rhs);
        let b = gauss_seidel(&inner, &rhs).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-8);
        }
    }
}
