//! Properties over observations and clocks, and their reduction to
//! reachability or expected reward objectives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::lexer::{tokenize, Cursor, Tok};
use crate::format::{Pos, SyntaxError};
use crate::pomdp::{Pomdp, TargetSpec};
use crate::popta::{ActionEdge, Branch, ClockAtom, ClockConstraint, ClockRel, DigitalModel, Location, Popta};
use crate::solver::{Direction, ObjectiveKind, ObjectiveSpec};

/// Action used to make avoided observation classes absorbing.
pub const ABSORB_ACTION: &str = "__absorb";
pub const HORIZON_ACTION: &str = "__horizon";
pub const DONE_LOCATION: &str = "__done";

/// A POMDP with named sets of observations.
#[derive(Debug, Clone)]
pub struct LabelledPomdp {
    pub pomdp: Pomdp,
    pub labels: BTreeMap<String, BTreeSet<usize>>,
    /// Control part of each observation name.
    pub bases: Vec<String>,
}

impl LabelledPomdp {
    /// Wraps a model without labels. The base of an observation is its name
    /// up to the first `@`, so exported digital models keep their control
    /// observation names.
    pub fn plain(pomdp: Pomdp) -> Self {
        let bases = pomdp
            .observation_names()
            .iter()
            .map(|o| o.split('@').next().unwrap_or(o).to_string())
            .collect();
        LabelledPomdp { pomdp, labels: BTreeMap::new(), bases }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    P,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Lt => "<",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Query {
    Bound(Cmp, f64),
    Min,
    Max,
}

/// State formula over observations and clocks.
#[derive(Debug, Clone, PartialEq)]
pub enum Cond {
    True,
    Name { name: String, negated: bool, pos: Pos },
    /// `None` relation means equality.
    Clock { clock: String, rel: Option<ClockRel>, bound: u32, pos: Pos },
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Eventually { goal: Cond, bound: Option<u32> },
    Until { hold: Cond, goal: Cond, bound: Option<u32> },
    Cumulative(u32),
    Instantaneous(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Property {
    pub op: Operator,
    pub query: Query,
    pub body: Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Verify,
    Synthesize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error("property syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: `{name}` is not a label, observation or clock of the model")]
    UnknownName { name: String, pos: Pos },
    #[error("{0} is not supported on a model without clocks")]
    Unsupported(String),
    #[error("time bound {bound} exceeds the limit of {limit}")]
    BoundTooLarge { bound: u32, limit: u32 },
    #[error("target set: {0}")]
    Target(String),
}

/// Largest accepted time bound in a property.
pub const MAX_TIME_BOUND: u32 = 100_000;

// ---------------------------------------------------------------------------
// parsing

pub fn parse_property(text: &str) -> Result<Property, LogicError> {
    let mut c = Cursor::new(tokenize(text)?);
    let pos = c.pos();
    let (head, _) = c.ident()?;
    let (op, opt) = match head.as_str() {
        "P" => (Operator::P, None),
        "R" => (Operator::R, None),
        "Pmax" => (Operator::P, Some(Query::Max)),
        "Pmin" => (Operator::P, Some(Query::Min)),
        "Rmax" => (Operator::R, Some(Query::Max)),
        "Rmin" => (Operator::R, Some(Query::Min)),
        _ => return Err(SyntaxError::new(pos, "expected P, R, Pmax=?, Pmin=?, Rmax=? or Rmin=?").into()),
    };
    let query = match opt {
        Some(q) => {
            c.expect(&Tok::Query)?;
            q
        }
        None => {
            let cmp = match c.next().tok {
                Tok::Ge => Cmp::Ge,
                Tok::Gt => Cmp::Gt,
                Tok::Le => Cmp::Le,
                Tok::Lt => Cmp::Lt,
                Tok::Ident(s) if s == "min" || s == "max" => {
                    c.expect(&Tok::Query)?;
                    let q = if s == "min" { Query::Min } else { Query::Max };
                    return finish(&mut c, op, q);
                }
                _ => return Err(SyntaxError::new(pos, "expected a comparison or min=?/max=? after the operator").into()),
            };
            let at = c.pos();
            let p = number(&mut c)?;
            if p < 0.0 || (op == Operator::P && p > 1.0) {
                return Err(SyntaxError::new(at, format!("threshold {p} out of range")).into());
            }
            Query::Bound(cmp, p)
        }
    };
    finish(&mut c, op, query)
}

fn finish(c: &mut Cursor, op: Operator, query: Query) -> Result<Property, LogicError> {
    c.expect(&Tok::LBracket)?;
    let body = body(c, op)?;
    c.expect(&Tok::RBracket)?;
    if c.peek() != &Tok::Eof {
        return Err(c.unexpected("end of property").into());
    }
    Ok(Property { op, query, body })
}

fn number(c: &mut Cursor) -> Result<f64, SyntaxError> {
    match c.next().tok {
        Tok::Int(n) => Ok(n as f64),
        Tok::Float(x) => Ok(x),
        _ => Err(SyntaxError::new(c.pos(), "expected a number")),
    }
}

fn time_bound(c: &mut Cursor) -> Result<u32, LogicError> {
    let pos = c.pos();
    match c.next().tok {
        Tok::Int(n) => {
            let n = u32::try_from(n).unwrap_or(u32::MAX);
            if n > MAX_TIME_BOUND {
                return Err(LogicError::BoundTooLarge { bound: n, limit: MAX_TIME_BOUND });
            }
            Ok(n)
        }
        _ => Err(SyntaxError::new(pos, "expected a non-negative integer time bound").into()),
    }
}

fn body(c: &mut Cursor, op: Operator) -> Result<Body, LogicError> {
    let pos = c.pos();
    let reward_only = |what: &str| -> LogicError {
        SyntaxError::new(pos, format!("`{what}` is only allowed inside R[...]")).into()
    };
    if c.is_keyword("C") && matches!(c.peek_at(1), Tok::Le) {
        if op != Operator::R {
            return Err(reward_only("C<=t"));
        }
        c.next();
        c.next();
        return Ok(Body::Cumulative(time_bound(c)?));
    }
    if c.is_keyword("I") && matches!(c.peek_at(1), Tok::Assign) {
        if op != Operator::R {
            return Err(reward_only("I=t"));
        }
        c.next();
        c.next();
        return Ok(Body::Instantaneous(time_bound(c)?));
    }
    if c.eat_keyword("F") {
        let bound = if c.eat(&Tok::Le) { Some(time_bound(c)?) } else { None };
        if bound.is_some() && op == Operator::R {
            return Err(SyntaxError::new(pos, "R[...] takes F, C<=t or I=t").into());
        }
        return Ok(Body::Eventually { goal: cond(c)?, bound });
    }
    let hold = cond(c)?;
    if !c.eat_keyword("U") {
        return Err(c.unexpected("`U`").into());
    }
    if op == Operator::R {
        return Err(SyntaxError::new(pos, "R[...] takes F, C<=t or I=t").into());
    }
    let bound = if c.eat(&Tok::Le) { Some(time_bound(c)?) } else { None };
    Ok(Body::Until { hold, goal: cond(c)?, bound })
}

fn cond(c: &mut Cursor) -> Result<Cond, SyntaxError> {
    let mut lhs = conj(c)?;
    while c.eat(&Tok::Or) {
        lhs = Cond::Or(Box::new(lhs), Box::new(conj(c)?));
    }
    Ok(lhs)
}

fn conj(c: &mut Cursor) -> Result<Cond, SyntaxError> {
    let mut lhs = atom(c)?;
    while c.eat(&Tok::And) {
        lhs = Cond::And(Box::new(lhs), Box::new(atom(c)?));
    }
    Ok(lhs)
}

fn is_operator(name: &str) -> bool {
    matches!(name, "P" | "R" | "Pmax" | "Pmin" | "Rmax" | "Rmin")
}

fn atom(c: &mut Cursor) -> Result<Cond, SyntaxError> {
    let pos = c.pos();
    if c.eat(&Tok::LParen) {
        let inner = cond(c)?;
        c.expect(&Tok::RParen)?;
        return Ok(inner);
    }
    if c.eat(&Tok::Not) {
        return match c.next().tok {
            Tok::Ident(name) if name != "true" && name != "false" => Ok(Cond::Name { name, negated: true, pos }),
            Tok::Str(name) => Ok(Cond::Name { name, negated: true, pos }),
            _ => Err(SyntaxError::new(pos, "negation is only allowed directly on an observation or label name")),
        };
    }
    match c.next().tok {
        Tok::Ident(s) if s == "true" => Ok(Cond::True),
        Tok::Ident(s) if is_operator(&s) && matches!(c.peek(), Tok::Ge | Tok::Gt | Tok::Le | Tok::Lt | Tok::Query) => {
            Err(SyntaxError::new(pos, "nested P/R operators are not supported"))
        }
        Tok::Ident(s) if is_operator(&s) && (c.is_keyword("min") || c.is_keyword("max")) => {
            Err(SyntaxError::new(pos, "nested P/R operators are not supported"))
        }
        Tok::Ident(name) => {
            let rel = match c.peek() {
                Tok::Le => Some(ClockRel::Le),
                Tok::Ge => Some(ClockRel::Ge),
                Tok::Assign | Tok::EqEq => None,
                Tok::Lt | Tok::Gt => {
                    return Err(SyntaxError::new(c.pos(), "strict clock comparisons are not allowed"));
                }
                _ => return Ok(Cond::Name { name, negated: false, pos }),
            };
            c.next();
            let at = c.pos();
            let bound = match c.next().tok {
                Tok::Int(n) => u32::try_from(n).map_err(|_| SyntaxError::new(at, "clock bound too large"))?,
                _ => return Err(SyntaxError::new(at, "clocks may only be compared with integer constants")),
            };
            Ok(Cond::Clock { clock: name, rel, bound, pos })
        }
        Tok::Str(name) => Ok(Cond::Name { name, negated: false, pos }),
        _ => Err(SyntaxError::new(pos, "expected an observation, label, clock constraint or `true`")),
    }
}

// ---------------------------------------------------------------------------
// printing

fn fmt_name(name: &str) -> String {
    let plain = name.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
        && name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
        && !matches!(name, "true" | "false" | "F" | "U" | "C" | "I")
        && !is_operator(name);
    if plain {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

impl Cond {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        match self {
            Cond::True => f.write_str("true"),
            Cond::Name { name, negated, .. } => {
                write!(f, "{}{}", if *negated { "!" } else { "" }, fmt_name(name))
            }
            Cond::Clock { clock, rel, bound, .. } => {
                let op = match rel {
                    Some(ClockRel::Le) => "<=",
                    Some(ClockRel::Ge) => ">=",
                    None => "=",
                };
                write!(f, "{clock}{op}{bound}")
            }
            Cond::And(l, r) | Cond::Or(l, r) => {
                let (p, sym) = if matches!(self, Cond::And(..)) { (2, " & ") } else { (1, " | ") };
                if p < parent {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, p)?;
                f.write_str(sym)?;
                r.fmt_prec(f, p + 1)?;
                if p < parent {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Operator::P => "P",
            Operator::R => "R",
        };
        match self.query {
            Query::Bound(cmp, p) => write!(f, "{op}{}{p}", cmp.symbol())?,
            Query::Min => write!(f, "{op}min=?")?,
            Query::Max => write!(f, "{op}max=?")?,
        }
        let bound = |b: &Option<u32>| b.map(|t| format!("<={t}")).unwrap_or_default();
        match &self.body {
            Body::Eventually { goal, bound: b } => write!(f, " [ F{} {goal} ]", bound(b)),
            Body::Until { hold, goal, bound: b } => {
                // `U` binds weaker than `|`, so operands print without parentheses
                write!(f, " [ {hold} U{} {goal} ]", bound(b))
            }
            Body::Cumulative(t) => write!(f, " [ C<={t} ]"),
            Body::Instantaneous(t) => write!(f, " [ I={t} ]"),
        }
    }
}

// ---------------------------------------------------------------------------
// semantics

impl Property {
    pub fn kind(&self) -> ObjectiveKind {
        match self.op {
            Operator::P => ObjectiveKind::Probability,
            Operator::R => ObjectiveKind::Reward,
        }
    }

    /// Optimisation direction: verification of a lower threshold needs the
    /// minimum over strategies, synthesis for it the maximum.
    pub fn direction(&self, mode: Mode) -> Direction {
        match (self.query, mode) {
            (Query::Min, _) => Direction::Min,
            (Query::Max, _) => Direction::Max,
            (Query::Bound(Cmp::Ge | Cmp::Gt, _), Mode::Verify) => Direction::Min,
            (Query::Bound(Cmp::Le | Cmp::Lt, _), Mode::Verify) => Direction::Max,
            (Query::Bound(Cmp::Ge | Cmp::Gt, _), Mode::Synthesize) => Direction::Max,
            (Query::Bound(Cmp::Le | Cmp::Lt, _), Mode::Synthesize) => Direction::Min,
        }
    }

    pub fn threshold(&self) -> Option<(Cmp, f64)> {
        match self.query {
            Query::Bound(c, p) => Some((c, p)),
            _ => None,
        }
    }

    /// Answer for a threshold query given bounds on the optimum; `None` for
    /// numeric queries.
    pub fn verdict(&self, lower: f64, upper: f64) -> Option<Verdict> {
        let (cmp, p) = self.threshold()?;
        let (holds, fails) = match cmp {
            Cmp::Ge => (lower >= p, upper < p),
            Cmp::Gt => (lower > p, upper <= p),
            Cmp::Le => (upper <= p, lower > p),
            Cmp::Lt => (upper < p, lower >= p),
        };
        Some(if holds {
            Verdict::Holds
        } else if fails {
            Verdict::Fails
        } else {
            Verdict::Unknown
        })
    }

    /// Whether a value achieved by a concrete strategy meets the threshold.
    pub fn satisfied_by(&self, value: f64) -> Option<bool> {
        let (cmp, p) = self.threshold()?;
        Some(match cmp {
            Cmp::Ge => value >= p,
            Cmp::Gt => value > p,
            Cmp::Le => value <= p,
            Cmp::Lt => value < p,
        })
    }
}

/// Resolved state predicate over `(observation, clock valuation)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Pred {
    True,
    Obs(BTreeSet<usize>),
    Clock(ClockAtom),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn holds(&self, obs: usize, valuation: &[u32]) -> bool {
        match self {
            Pred::True => true,
            Pred::Obs(set) => set.contains(&obs),
            Pred::Clock(a) => a.holds(valuation),
            Pred::Not(p) => !p.holds(obs, valuation),
            Pred::And(l, r) => l.holds(obs, valuation) && r.holds(obs, valuation),
            Pred::Or(l, r) => l.holds(obs, valuation) || r.holds(obs, valuation),
        }
    }

    fn and(self, other: Pred) -> Pred {
        Pred::And(Box::new(self), Box::new(other))
    }

    fn not(self) -> Pred {
        Pred::Not(Box::new(self))
    }
}

/// Name lookup: labels first, then observation base names, then full names.
fn resolve_name(
    name: &str,
    labels: &BTreeMap<String, BTreeSet<usize>>,
    bases: &[String],
    full: &[String],
) -> Option<BTreeSet<usize>> {
    if let Some(set) = labels.get(name) {
        return Some(set.clone());
    }
    let by_base: BTreeSet<usize> = bases.iter().enumerate().filter(|(_, b)| *b == name).map(|(i, _)| i).collect();
    if !by_base.is_empty() {
        return Some(by_base);
    }
    full.iter().position(|o| o == name).map(|i| BTreeSet::from([i]))
}

fn resolve(
    cond: &Cond,
    labels: &BTreeMap<String, BTreeSet<usize>>,
    bases: &[String],
    full: &[String],
    clocks: Option<&[String]>,
) -> Result<Pred, LogicError> {
    Ok(match cond {
        Cond::True => Pred::True,
        Cond::Name { name, negated, pos } => {
            let set = resolve_name(name, labels, bases, full)
                .ok_or_else(|| LogicError::UnknownName { name: name.clone(), pos: *pos })?;
            if *negated {
                Pred::Obs(set).not()
            } else {
                Pred::Obs(set)
            }
        }
        Cond::Clock { clock, rel, bound, pos } => {
            let Some(clocks) = clocks else {
                return Err(LogicError::Unsupported("a clock constraint".into()));
            };
            let x = clocks
                .iter()
                .position(|c| c == clock)
                .ok_or_else(|| LogicError::UnknownName { name: clock.clone(), pos: *pos })?;
            let atom = |rel| Pred::Clock(ClockAtom { clock: x, rel, bound: *bound });
            match rel {
                Some(r) => atom(*r),
                None => atom(ClockRel::Le).and(atom(ClockRel::Ge)),
            }
        }
        Cond::And(l, r) => resolve(l, labels, bases, full, clocks)?.and(resolve(r, labels, bases, full, clocks)?),
        Cond::Or(l, r) => Pred::Or(
            Box::new(resolve(l, labels, bases, full, clocks)?),
            Box::new(resolve(r, labels, bases, full, clocks)?),
        ),
    })
}

/// A property reduced to a reachability or reward objective on a
/// transformed POPTA.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub popta: Popta,
    pub kind: ObjectiveKind,
    pub direction: Direction,
    pub target: Pred,
    /// Classes made absorbing (and never targets) after digitalisation.
    pub avoid: Option<Pred>,
}

fn fresh_name(taken: &[String], stem: &str) -> String {
    let mut name = stem.to_string();
    let mut k = 1;
    while taken.iter().any(|c| *c == name) {
        name = format!("{stem}{k}");
        k += 1;
    }
    name
}

/// Rewrites `model` so that `prop` becomes plain reachability or reward to
/// a target set.
pub fn reduce(model: &Popta, prop: &Property, mode: Mode) -> Result<Reduction, LogicError> {
    let mut p = model.clone();
    let kind = prop.kind();
    let direction = prop.direction(mode);
    let res = |c: &Cond, p: &Popta| resolve(c, &p.labels, &p.observation_bases, &p.observations, Some(&p.clocks));

    let (target, avoid) = match &prop.body {
        Body::Eventually { goal, bound: None } => (res(goal, &p)?, None),
        Body::Until { hold, goal, bound: None } => {
            let goal = res(goal, &p)?;
            let hold = res(hold, &p)?;
            (goal.clone(), Some(hold.not().and(goal.not())))
        }
        Body::Eventually { goal, bound: Some(t) } | Body::Until { goal, bound: Some(t), .. } => {
            let hold = match &prop.body {
                Body::Until { hold, .. } => res(hold, &p)?,
                _ => Pred::True,
            };
            let goal = res(goal, &p)?;
            let y = p.add_clock(&fresh_name(&p.clocks, "__y"), Some(*t));
            let in_time = Pred::Clock(ClockAtom { clock: y, rel: ClockRel::Le, bound: *t });
            let target = goal.and(in_time.clone());
            let avoid = target.clone().not().and(hold.not().or(in_time.not()));
            (target, Some(avoid))
        }
        Body::Cumulative(t) | Body::Instantaneous(t) => {
            let instant = matches!(prop.body, Body::Instantaneous(_));
            let done = add_horizon(&mut p, *t, instant);
            (Pred::Obs(BTreeSet::from([done])), None)
        }
    };
    Ok(Reduction { popta: p, kind, direction, target, avoid })
}

impl Pred {
    fn or(self, other: Pred) -> Pred {
        Pred::Or(Box::new(self), Box::new(other))
    }
}

/// Adds clock `y <= t` everywhere, blocks ordinary actions once `y = t` and
/// adds a forced `__horizon` move to a fresh `__done` location. Returns the
/// observation of `__done`.
fn add_horizon(p: &mut Popta, t: u32, instant: bool) -> usize {
    let y = p.add_clock(&fresh_name(&p.clocks, "__y"), Some(t));
    let horizon = p.add_action(&fresh_name(&p.actions, HORIZON_ACTION));
    let done_obs = {
        let name = fresh_name(&p.observations, DONE_LOCATION);
        p.add_observation(&name)
    };
    let le = |b| ClockAtom { clock: y, rel: ClockRel::Le, bound: b };
    let ge = |b| ClockAtom { clock: y, rel: ClockRel::Ge, bound: b };
    // for t = 0 the guard y<=t-1 is encoded as the empty constraint y<=0 & y>=1
    let before = if t == 0 { ClockConstraint::new([le(0), ge(1)]) } else { ClockConstraint::new([le(t - 1)]) };
    let done = p.locations.len();
    for l in &mut p.locations {
        l.invariant = l.invariant.and(&ClockConstraint::new([le(t)]));
        let snapshot = l.rate;
        for e in &mut l.edges {
            e.guard = e.guard.and(&before);
            if instant {
                e.reward = 0.0;
            }
        }
        if instant {
            l.rate = 0.0;
        }
        l.edges.push(ActionEdge {
            action: horizon,
            guard: ClockConstraint::new([ge(t)]),
            branches: vec![Branch { prob: 1.0, resets: Vec::new(), target: done }],
            reward: if instant { snapshot } else { 0.0 },
        });
    }
    let name = fresh_name(&p.locations.iter().map(|l| l.name.clone()).collect::<Vec<_>>(), DONE_LOCATION);
    p.locations.push(Location {
        name,
        observation: done_obs,
        invariant: ClockConstraint::always(),
        rate: 0.0,
        edges: Vec::new(),
    });
    done_obs
}

impl Reduction {
    /// Target and absorbing sets on the digital model; returns the model to
    /// solve (with absorbing classes applied) and its objective.
    pub fn objective(&self, digital: &DigitalModel) -> Result<(Pomdp, ObjectiveSpec), LogicError> {
        let mut targets = BTreeSet::new();
        let mut avoid = BTreeSet::new();
        for (o, (lo, v)) in digital.observations.iter().enumerate() {
            if self.target.holds(*lo, v) {
                targets.insert(o);
            } else if self.avoid.as_ref().is_some_and(|a| a.holds(*lo, v)) {
                avoid.insert(o);
            }
        }
        let model = if avoid.is_empty() {
            digital.pomdp.clone()
        } else {
            digital.pomdp.with_absorbing(&avoid, ABSORB_ACTION)
        };
        let target = TargetSpec::new(&model, targets).map_err(|e| LogicError::Target(e.to_string()))?;
        Ok((model, ObjectiveSpec::new(self.kind, self.direction, target)))
    }
}

/// Reduction for a model given directly as a POMDP. Only untimed operators
/// are available.
pub fn reduce_pomdp(model: &LabelledPomdp, prop: &Property, mode: Mode) -> Result<(Pomdp, ObjectiveSpec), LogicError> {
    let m = &model.pomdp;
    let res = |c: &Cond| resolve(c, &model.labels, &model.bases, m.observation_names(), None);
    let (target, avoid) = match &prop.body {
        Body::Eventually { goal, bound: None } => (res(goal)?, None),
        Body::Until { hold, goal, bound: None } => {
            let goal = res(goal)?;
            (goal.clone(), Some(res(hold)?.not().and(goal.not())))
        }
        Body::Eventually { .. } | Body::Until { .. } => return Err(LogicError::Unsupported("a time-bounded operator".into())),
        Body::Cumulative(_) => return Err(LogicError::Unsupported("C<=t".into())),
        Body::Instantaneous(_) => return Err(LogicError::Unsupported("I=t".into())),
    };
    let targets: BTreeSet<usize> = (0..m.num_observations()).filter(|&o| target.holds(o, &[])).collect();
    let avoid: BTreeSet<usize> = match &avoid {
        Some(a) => (0..m.num_observations()).filter(|&o| !targets.contains(&o) && a.holds(o, &[])).collect(),
        None => BTreeSet::new(),
    };
    let solved = if avoid.is_empty() { m.clone() } else { m.with_absorbing(&avoid, ABSORB_ACTION) };
    let t = TargetSpec::new(&solved, targets).map_err(|e| LogicError::Target(e.to_string()))?;
    Ok((solved, ObjectiveSpec::new(prop.kind(), prop.direction(mode), t)))
}
