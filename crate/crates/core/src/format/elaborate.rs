//! Expansion of a parsed document into an explicit POPTA or POMDP.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::ast::*;
use super::{FormatError, Pos};
use crate::logic::LabelledPomdp;
use crate::pomdp::{Choice, Pomdp};
use crate::popta::{ActionEdge, Branch, ClockAtom, ClockConstraint, ClockRel, Location, Popta};

pub const DEFAULT_STATE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone)]
pub struct ElabOptions {
    /// `--const NAME=VALUE` overrides, as source text.
    pub overrides: BTreeMap<String, String>,
    pub state_limit: usize,
}

impl Default for ElabOptions {
    fn default() -> Self {
        ElabOptions { overrides: BTreeMap::new(), state_limit: DEFAULT_STATE_LIMIT }
    }
}

#[derive(Debug, Clone)]
pub enum ElaboratedModel {
    Popta(Popta),
    Pomdp(LabelledPomdp),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Loc(usize),
}

impl Value {
    fn num(self) -> Option<f64> {
        match self {
            Value::Int(n) => Some(n as f64),
            Value::Float(x) => Some(x),
            _ => None,
        }
    }

    fn type_name(self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Float(_) => "double",
            Value::Bool(_) => "bool",
            Value::Loc(_) => "location",
        }
    }
}

struct Env {
    consts: HashMap<String, Value>,
    vars: HashMap<String, usize>,
    locs: HashMap<String, usize>,
    clocks: HashMap<String, usize>,
}

/// A discrete state: location index and variable values.
type State = (usize, Vec<i64>);

fn err(pos: Option<Pos>, msg: impl Into<String>) -> FormatError {
    FormatError::elab(pos, msg)
}

fn expr_pos(e: &Expr) -> Option<Pos> {
    e.mentions(&|_| true).map(|(_, s)| s.0)
}

impl Env {
    fn eval(&self, e: &Expr, st: Option<&State>) -> Result<Value, FormatError> {
        Ok(match e {
            Expr::Int(n) => Value::Int(*n),
            Expr::Float(x) => Value::Float(*x),
            Expr::Bool(b) => Value::Bool(*b),
            Expr::Ident(n, span) => {
                let pos = Some(span.0);
                if let Some(v) = self.consts.get(n) {
                    *v
                } else if let Some(&i) = self.vars.get(n) {
                    match st {
                        Some(s) => Value::Int(s.1[i]),
                        None => return Err(err(pos, format!("variable `{n}` used in a constant context"))),
                    }
                } else if n == "loc" {
                    match st {
                        Some(s) => Value::Loc(s.0),
                        None => return Err(err(pos, "`loc` used in a constant context")),
                    }
                } else if let Some(&l) = self.locs.get(n) {
                    Value::Loc(l)
                } else if self.clocks.contains_key(n) {
                    return Err(err(pos, format!("clock `{n}` may only appear in a top-level clock comparison")));
                } else {
                    return Err(err(pos, format!("`{n}` has no value")));
                }
            }
            Expr::Unary(UnOp::Not, inner) => match self.eval(inner, st)? {
                Value::Bool(b) => Value::Bool(!b),
                v => return Err(err(expr_pos(inner), format!("`!` applied to {}", v.type_name()))),
            },
            Expr::Unary(UnOp::Neg, inner) => match self.eval(inner, st)? {
                Value::Int(n) => Value::Int(-n),
                Value::Float(x) => Value::Float(-x),
                v => return Err(err(expr_pos(inner), format!("`-` applied to {}", v.type_name()))),
            },
            Expr::Binary(op, l, r) => {
                let pos = expr_pos(e);
                let a = self.eval(l, st)?;
                // short-circuit so guards like `i < N & arr_i` stay cheap
                match (op, a) {
                    (BinOp::And, Value::Bool(false)) => return Ok(Value::Bool(false)),
                    (BinOp::Or, Value::Bool(true)) => return Ok(Value::Bool(true)),
                    _ => {}
                }
                let b = self.eval(r, st)?;
                binary(*op, a, b).ok_or_else(|| {
                    err(pos, format!("`{}` cannot combine {} and {}", op.symbol(), a.type_name(), b.type_name()))
                })??
            }
        })
    }

    fn eval_bool(&self, e: &Expr, st: Option<&State>) -> Result<bool, FormatError> {
        match self.eval(e, st)? {
            Value::Bool(b) => Ok(b),
            v => Err(err(expr_pos(e), format!("expected a condition, found {}", v.type_name()))),
        }
    }

    fn eval_int(&self, e: &Expr, st: Option<&State>) -> Result<i64, FormatError> {
        match self.eval(e, st)? {
            Value::Int(n) => Ok(n),
            Value::Float(x) if x.fract() == 0.0 && x.abs() < 9e15 => Ok(x as i64),
            v => Err(err(expr_pos(e), format!("expected an integer, found {}", v.type_name()))),
        }
    }

    fn eval_num(&self, e: &Expr, st: Option<&State>) -> Result<f64, FormatError> {
        let v = self.eval(e, st)?;
        v.num().ok_or_else(|| err(expr_pos(e), format!("expected a number, found {}", v.type_name())))
    }

    fn mentions_clock(&self, e: &Expr) -> bool {
        e.mentions(&|n| self.clocks.contains_key(n)).is_some()
    }
}

fn binary(op: BinOp, a: Value, b: Value) -> Option<Result<Value, FormatError>> {
    use Value::*;
    let overflow = || Some(Err(err(None, "integer overflow")));
    Some(Ok(match (op, a, b) {
        (BinOp::And, Bool(x), Bool(y)) => Bool(x && y),
        (BinOp::Or, Bool(x), Bool(y)) => Bool(x || y),
        (BinOp::Eq, Bool(x), Bool(y)) => Bool(x == y),
        (BinOp::Neq, Bool(x), Bool(y)) => Bool(x != y),
        (BinOp::Eq, Loc(x), Loc(y)) => Bool(x == y),
        (BinOp::Neq, Loc(x), Loc(y)) => Bool(x != y),
        (BinOp::Add, Int(x), Int(y)) => match x.checked_add(y) {
            Some(v) => Int(v),
            None => return overflow(),
        },
        (BinOp::Sub, Int(x), Int(y)) => match x.checked_sub(y) {
            Some(v) => Int(v),
            None => return overflow(),
        },
        (BinOp::Mul, Int(x), Int(y)) => match x.checked_mul(y) {
            Some(v) => Int(v),
            None => return overflow(),
        },
        (BinOp::Eq, Int(x), Int(y)) => Bool(x == y),
        (BinOp::Neq, Int(x), Int(y)) => Bool(x != y),
        (BinOp::Lt, Int(x), Int(y)) => Bool(x < y),
        (BinOp::Le, Int(x), Int(y)) => Bool(x <= y),
        (BinOp::Gt, Int(x), Int(y)) => Bool(x > y),
        (BinOp::Ge, Int(x), Int(y)) => Bool(x >= y),
        (op, a, b) => {
            let (x, y) = (a.num()?, b.num()?);
            match op {
                BinOp::Add => Float(x + y),
                BinOp::Sub => Float(x - y),
                BinOp::Mul => Float(x * y),
                BinOp::Div => {
                    if y == 0.0 {
                        return Some(Err(err(None, "division by zero")));
                    }
                    Float(x / y)
                }
                BinOp::Eq => Bool(x == y),
                BinOp::Neq => Bool(x != y),
                BinOp::Lt => Bool(x < y),
                BinOp::Le => Bool(x <= y),
                BinOp::Gt => Bool(x > y),
                BinOp::Ge => Bool(x >= y),
                BinOp::And | BinOp::Or => return None,
            }
        }
    }))
}

/// Clock comparison `x ~ e` with `e` free of clocks.
#[derive(Debug, Clone)]
struct ClockCmp {
    clock: usize,
    /// `None` for equality.
    rel: Option<ClockRel>,
    bound: Expr,
}

/// A guard split into discrete conjuncts and clock comparisons.
#[derive(Debug, Clone, Default)]
struct Guard {
    discrete: Vec<Expr>,
    clocks: Vec<ClockCmp>,
}

impl Env {
    fn split(&self, e: &Expr, allow_discrete: bool) -> Result<Guard, FormatError> {
        let mut g = Guard::default();
        for c in e.conjuncts() {
            if !self.mentions_clock(c) {
                if allow_discrete {
                    g.discrete.push(c.clone());
                } else if *c != Expr::Bool(true) {
                    return Err(err(expr_pos(c), "invariants may only contain clock comparisons"));
                }
                continue;
            }
            let pos = expr_pos(c);
            let Expr::Binary(op, l, r) = c else {
                return Err(err(pos, "clock constraints may only appear as top-level conjuncts"));
            };
            if !op.is_comparison() {
                return Err(err(pos, "clock constraints may only appear as top-level conjuncts"));
            }
            let clock_of = |e: &Expr| match e {
                Expr::Ident(n, _) => self.clocks.get(n).copied(),
                _ => None,
            };
            let (clock, bound, flipped) = match (clock_of(l), clock_of(r)) {
                (Some(_), Some(_)) => return Err(err(pos, "comparisons between two clocks are not supported")),
                (Some(x), None) if !self.mentions_clock(r) => (x, (**r).clone(), false),
                (None, Some(x)) if !self.mentions_clock(l) => (x, (**l).clone(), true),
                _ => return Err(err(pos, "clocks may only be compared directly against constants")),
            };
            let rel = match (op, flipped) {
                (BinOp::Eq, _) => None,
                (BinOp::Le, false) | (BinOp::Ge, true) => Some(ClockRel::Le),
                (BinOp::Ge, false) | (BinOp::Le, true) => Some(ClockRel::Ge),
                (BinOp::Lt | BinOp::Gt, _) => {
                    return Err(err(pos, "strict clock comparisons are not allowed (constraints must be closed)"))
                }
                _ => return Err(err(pos, "`!=` on clocks is not allowed")),
            };
            g.clocks.push(ClockCmp { clock, rel, bound });
        }
        Ok(g)
    }

    fn discrete_holds(&self, g: &Guard, st: &State) -> Result<bool, FormatError> {
        for d in &g.discrete {
            if !self.eval_bool(d, Some(st))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn clock_constraint(&self, g: &Guard, st: &State) -> Result<ClockConstraint, FormatError> {
        let mut atoms = Vec::new();
        for c in &g.clocks {
            let n = self.eval_int(&c.bound, Some(st))?;
            let bound = u32::try_from(n)
                .map_err(|_| err(expr_pos(&c.bound), format!("clock bound {n} must be a non-negative integer")))?;
            match c.rel {
                Some(rel) => atoms.push(ClockAtom { clock: c.clock, rel, bound }),
                None => {
                    atoms.push(ClockAtom { clock: c.clock, rel: ClockRel::Le, bound });
                    atoms.push(ClockAtom { clock: c.clock, rel: ClockRel::Ge, bound });
                }
            }
        }
        Ok(ClockConstraint::new(atoms))
    }
}

struct VarDecl {
    name: String,
    observable: bool,
    lo: i64,
    hi: i64,
}

struct LocDecl {
    name: String,
    observe: String,
    invariant: Guard,
}

struct Command {
    action: usize,
    guard: Guard,
    rhs: Rhs,
    pos: Pos,
}

/// Expands a checked document (see [`super::parse_model`]).
pub fn elaborate(doc: &ModelDocument, opts: &ElabOptions) -> Result<ElaboratedModel, FormatError> {
    let mut env = Env { consts: HashMap::new(), vars: HashMap::new(), locs: HashMap::new(), clocks: HashMap::new() };
    let mut declared_consts = BTreeSet::new();

    for item in &doc.items {
        if let Item::Const { name, ty, value, span } = item {
            declared_consts.insert(name.clone());
            let v = match (opts.overrides.get(name), value) {
                (Some(text), _) => parse_override(name, *ty, text)?,
                (None, Some(e)) => env.eval(e, None)?,
                (None, None) => {
                    return Err(err(Some(span.0), format!("constant `{name}` has no value; pass --const {name}=..")))
                }
            };
            let v = match (ty, v) {
                (ConstType::Int, Value::Int(_)) | (ConstType::Double, Value::Float(_)) => v,
                (ConstType::Double, Value::Int(n)) => Value::Float(n as f64),
                (ConstType::Int, Value::Float(x)) if x.fract() == 0.0 => Value::Int(x as i64),
                _ => return Err(err(Some(span.0), format!("constant `{name}` has the wrong type"))),
            };
            env.consts.insert(name.clone(), v);
        }
    }
    if let Some(bad) = opts.overrides.keys().find(|k| !declared_consts.contains(*k)) {
        return Err(err(None, format!("--const names unknown constant `{bad}`")));
    }

    let mut clocks = Vec::new();
    let mut clock_bounds = Vec::new();
    let mut vars: Vec<VarDecl> = Vec::new();
    let mut init_vals = Vec::new();
    let mut actions: Vec<String> = Vec::new();
    let mut loc_items = Vec::new();
    for item in &doc.items {
        match item {
            Item::Clock { name, bound, .. } => {
                env.clocks.insert(name.clone(), clocks.len());
                clocks.push(name.clone());
                let b = match bound {
                    Some(e) => {
                        let n = env.eval_int(e, None)?;
                        Some(u32::try_from(n).map_err(|_| err(expr_pos(e), "clock bound must be non-negative"))?)
                    }
                    None => None,
                };
                clock_bounds.push(b);
            }
            Item::Var { name, visibility, lo, hi, init, span } => {
                let (lo, hi, v0) = (env.eval_int(lo, None)?, env.eval_int(hi, None)?, env.eval_int(init, None)?);
                if lo > hi || v0 < lo || v0 > hi {
                    return Err(err(Some(span.0), format!("`{name}`: initial value {v0} outside [{lo}..{hi}]")));
                }
                env.vars.insert(name.clone(), vars.len());
                vars.push(VarDecl { name: name.clone(), observable: *visibility == Visibility::Observable, lo, hi });
                init_vals.push(v0);
            }
            Item::Actions { names } => actions.extend(names.iter().map(|(n, _)| n.clone())),
            Item::Location { .. } => loc_items.push(item),
            _ => {}
        }
    }

    let mut locs = Vec::new();
    let mut init_loc = 0;
    for item in &loc_items {
        if let Item::Location { name, observe, init, invariant, .. } = item {
            env.locs.insert(name.clone(), locs.len());
            if *init {
                init_loc = locs.len();
            }
            let invariant = match invariant {
                Some(e) => env.split(e, false)?,
                None => Guard::default(),
            };
            locs.push(LocDecl { name: name.clone(), observe: observe.clone(), invariant });
        }
    }
    let implicit = locs.is_empty();
    if implicit {
        locs.push(LocDecl { name: String::new(), observe: String::new(), invariant: Guard::default() });
    }

    let action_index: HashMap<&str, usize> = actions.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let mut invariants = Vec::new();
    let mut commands = Vec::new();
    let mut rewards = Vec::new();
    let mut labels = Vec::new();
    for item in &doc.items {
        match item {
            Item::Invariant { cond, clocks: cc, .. } => {
                if env.mentions_clock(cond) {
                    return Err(err(expr_pos(cond), "invariant conditions may not mention clocks"));
                }
                invariants.push((cond, env.split(cc, false)?));
            }
            Item::Command { action, guard, rhs, span } => {
                commands.push(Command {
                    action: action_index[action.as_str()],
                    guard: env.split(guard, true)?,
                    rhs: rhs.clone(),
                    pos: span.0,
                });
            }
            Item::Reward { action, cond, value, span } => {
                if env.mentions_clock(cond) || env.mentions_clock(value) {
                    return Err(err(Some(span.0), "rewards may not depend on clocks"));
                }
                rewards.push((action.as_ref().map(|a| action_index[a.as_str()]), cond, value));
            }
            Item::Label { name, cond, span } => {
                if env.mentions_clock(cond) {
                    return Err(err(Some(span.0), "labels may not depend on clocks"));
                }
                labels.push((name, cond, span.0));
            }
            _ => {}
        }
    }

    // explore discrete states
    let assign = |vals: &[i64], only_observable: bool| -> String {
        let parts: Vec<String> = vars
            .iter()
            .zip(vals)
            .filter(|(v, _)| !only_observable || v.observable)
            .map(|(v, x)| format!("{}={x}", v.name))
            .collect();
        if parts.is_empty() {
            String::new()
        } else {
            format!("[{}]", parts.join(","))
        }
    };
    let start: State = (init_loc, init_vals);
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    states.push(start.clone());
    queue.push_back(0usize);

    let mut observations: Vec<String> = Vec::new();
    let mut bases: Vec<String> = Vec::new();
    let mut obs_index: HashMap<String, usize> = HashMap::new();
    let mut locations: Vec<Location> = Vec::new();

    while let Some(si) = queue.pop_front() {
        let st = states[si].clone();
        let decl = &locs[st.0];
        let state_name = format!("{}{}", decl.name, assign(&st.1, false));
        let obs_name = format!("{}{}", decl.observe, assign(&st.1, true));
        let observation = *obs_index.entry(obs_name.clone()).or_insert_with(|| {
            observations.push(obs_name.clone());
            bases.push(decl.observe.clone());
            observations.len() - 1
        });

        let mut invariant = env.clock_constraint(&decl.invariant, &st)?;
        for (cond, cc) in &invariants {
            if env.eval_bool(cond, Some(&st))? {
                invariant = invariant.and(&env.clock_constraint(cc, &st)?);
            }
        }
        let mut rate = 0.0;
        for (a, cond, value) in &rewards {
            if a.is_none() && env.eval_bool(cond, Some(&st))? {
                rate += env.eval_num(value, Some(&st))?;
            }
        }

        let mut edges = Vec::new();
        for a in 0..actions.len() {
            let mut enabled = None;
            for c in commands.iter().filter(|c| c.action == a) {
                if env.discrete_holds(&c.guard, &st)? {
                    if let Some(prev) = enabled.replace(c) {
                        return Err(err(
                            Some(c.pos),
                            format!(
                                "commands at {} and {} both enable `{}` in state {state_name}",
                                prev.pos, c.pos, actions[a]
                            ),
                        ));
                    }
                }
            }
            let Some(cmd) = enabled else { continue };
            let guard = env.clock_constraint(&cmd.guard, &st)?;
            let mut outcomes: Vec<(f64, Vec<(usize, i64)>, Vec<&Update>)> = Vec::new();
            match &cmd.rhs {
                Rhs::Branches(bs) => {
                    for b in bs {
                        let p = match &b.prob {
                            Some(e) => env.eval_num(e, Some(&st))?,
                            None if bs.len() == 1 => 1.0,
                            None => return Err(err(Some(cmd.pos), "every branch of a split command needs a probability")),
                        };
                        outcomes.push((p, Vec::new(), b.updates.iter().collect()));
                    }
                }
                Rhs::Uniform { var, lo, hi, updates, span } => {
                    let (lo, hi) = (env.eval_int(lo, Some(&st))?, env.eval_int(hi, Some(&st))?);
                    if lo > hi {
                        return Err(err(Some(span.0), format!("empty uniform range [{lo}..{hi}]")));
                    }
                    let n = (hi - lo + 1) as f64;
                    let vi = env.vars[var];
                    for v in lo..=hi {
                        outcomes.push((1.0 / n, vec![(vi, v)], updates.iter().collect()));
                    }
                }
            }
            let mut sum = 0.0;
            let mut branches = Vec::new();
            for (p, fixed, ups) in outcomes {
                if p < 0.0 || !p.is_finite() {
                    return Err(err(Some(cmd.pos), format!("invalid probability {p} in state {state_name}")));
                }
                sum += p;
                if p == 0.0 {
                    continue;
                }
                let mut next = st.clone();
                let mut resets = Vec::new();
                for (vi, v) in &fixed {
                    next.1[*vi] = *v;
                }
                for u in ups {
                    let upos = Some(u.span.0);
                    if u.var == "loc" {
                        match env.eval(&u.value, Some(&st))? {
                            Value::Loc(l) if !implicit => next.0 = l,
                            _ => return Err(err(upos, "`loc` must be assigned a location name")),
                        }
                    } else if let Some(&x) = env.clocks.get(&u.var) {
                        if env.eval_int(&u.value, Some(&st))? != 0 {
                            return Err(err(upos, format!("clock `{}` may only be reset to 0", u.var)));
                        }
                        resets.push(x);
                    } else {
                        let vi = env.vars[&u.var];
                        let v = env.eval_int(&u.value, Some(&st))?;
                        let d = &vars[vi];
                        if v < d.lo || v > d.hi {
                            return Err(err(
                                upos,
                                format!("`{}` takes value {v} outside [{}..{}] from state {state_name}", d.name, d.lo, d.hi),
                            ));
                        }
                        next.1[vi] = v;
                    }
                }
                resets.sort_unstable();
                resets.dedup();
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        if states.len() >= opts.state_limit {
                            return Err(FormatError::Capacity(opts.state_limit));
                        }
                        let t = states.len();
                        index.insert(next.clone(), t);
                        states.push(next);
                        queue.push_back(t);
                        t
                    }
                };
                branches.push(Branch { prob: p, resets, target });
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(err(
                    Some(cmd.pos),
                    format!("probabilities of `{}` sum to {sum} in state {state_name}", actions[a]),
                ));
            }
            let mut reward = 0.0;
            for (ra, cond, value) in &rewards {
                if *ra == Some(a) && env.eval_bool(cond, Some(&st))? {
                    reward += env.eval_num(value, Some(&st))?;
                }
            }
            edges.push(ActionEdge { action: a, guard, branches, reward });
        }
        debug_assert_eq!(locations.len(), si);
        locations.push(Location { name: state_name, observation, invariant, rate, edges });
    }

    let mut label_sets = BTreeMap::new();
    for (name, cond, pos) in labels {
        let mut per_obs: HashMap<usize, bool> = HashMap::new();
        for (si, st) in states.iter().enumerate() {
            let v = env.eval_bool(cond, Some(st))?;
            let o = locations[si].observation;
            if *per_obs.entry(o).or_insert(v) != v {
                return Err(err(
                    Some(pos),
                    format!("label \"{name}\" differs between states observed as {}", observations[o]),
                ));
            }
        }
        let set: BTreeSet<usize> = per_obs.into_iter().filter(|&(_, v)| v).map(|(o, _)| o).collect();
        label_sets.insert(name.clone(), set);
    }

    let popta = Popta {
        clocks,
        clock_bounds,
        actions,
        observations,
        observation_bases: bases,
        labels: label_sets,
        locations,
        initial: 0,
    };
    match doc.kind {
        ModelKind::Popta => Ok(ElaboratedModel::Popta(popta)),
        ModelKind::Pomdp => Ok(ElaboratedModel::Pomdp(to_pomdp(popta)?)),
    }
}

fn parse_override(name: &str, ty: ConstType, text: &str) -> Result<Value, FormatError> {
    let t = text.trim();
    let bad = || err(None, format!("--const {name}={text}: not a valid value"));
    match ty {
        ConstType::Int => t.parse::<i64>().map(Value::Int).map_err(|_| bad()),
        ConstType::Double => t.parse::<f64>().ok().filter(|x| x.is_finite()).map(Value::Float).ok_or_else(bad),
    }
}

/// Reads a clock-free model as a POMDP; location reward rates are charged
/// on every action.
fn to_pomdp(p: Popta) -> Result<LabelledPomdp, FormatError> {
    let mut states = Vec::new();
    let mut obs = Vec::new();
    let mut choices = Vec::new();
    for l in &p.locations {
        states.push(l.name.clone());
        obs.push(l.observation);
        let list = l
            .edges
            .iter()
            .map(|e| {
                let mut succ: BTreeMap<usize, f64> = BTreeMap::new();
                for b in &e.branches {
                    *succ.entry(b.target).or_insert(0.0) += b.prob;
                }
                Choice { action: e.action, successors: succ.into_iter().collect(), reward: e.reward + l.rate }
            })
            .collect();
        choices.push(list);
    }
    let pomdp = Pomdp::new(states, p.initial, p.actions, p.observations, obs, choices)
        .map_err(|e| err(None, e.to_string()))?;
    let report = pomdp.validate();
    if let Some(v) = report.violations.first() {
        return Err(err(None, format!("elaborated POMDP is invalid: {v}")));
    }
    Ok(LabelledPomdp { pomdp, labels: p.labels, bases: p.observation_bases })
}
