//! Partially observable probabilistic timed automata and their translation
//! to a finite POMDP under the integer-clock (digital clocks) semantics.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pomdp::{Choice, ModelError, Pomdp, SUM_TOL};

/// Name of the unit-delay action in the digital model.
pub const DELAY_ACTION: &str = "delay";

/// Name of the self-loop given to states with nothing enabled.
pub const STUTTER_ACTION: &str = "stutter";

pub const DEFAULT_STATE_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClockRel {
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClockAtom {
    pub clock: usize,
    pub rel: ClockRel,
    pub bound: u32,
}

impl ClockAtom {
    pub fn holds(&self, v: &[u32]) -> bool {
        match self.rel {
            ClockRel::Le => v[self.clock] <= self.bound,
            ClockRel::Ge => v[self.clock] >= self.bound,
        }
    }
}

/// Conjunction of closed, non-diagonal clock bounds; empty means `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ClockConstraint {
    atoms: Vec<ClockAtom>,
}

impl ClockConstraint {
    pub fn new(atoms: impl IntoIterator<Item = ClockAtom>) -> Self {
        let mut atoms: Vec<ClockAtom> = atoms.into_iter().collect();
        atoms.sort();
        atoms.dedup();
        ClockConstraint { atoms }
    }

    pub fn always() -> Self {
        ClockConstraint::default()
    }

    pub fn atoms(&self) -> &[ClockAtom] {
        &self.atoms
    }

    pub fn is_trivial(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn holds(&self, v: &[u32]) -> bool {
        self.atoms.iter().all(|a| a.holds(v))
    }

    pub fn and(&self, other: &ClockConstraint) -> ClockConstraint {
        ClockConstraint::new(self.atoms.iter().chain(&other.atoms).copied())
    }

    /// Tightest lower and upper bound per clock; equal canonical forms denote
    /// the same set of valuations (up to emptiness).
    pub fn canonical(&self) -> BTreeMap<usize, (u32, Option<u32>)> {
        let mut out: BTreeMap<usize, (u32, Option<u32>)> = BTreeMap::new();
        for a in &self.atoms {
            let e = out.entry(a.clock).or_insert((0, None));
            match a.rel {
                ClockRel::Ge => e.0 = e.0.max(a.bound),
                ClockRel::Le => e.1 = Some(e.1.map_or(a.bound, |u| u.min(a.bound))),
            }
        }
        out.retain(|_, e| *e != (0, None));
        out
    }

    pub fn max_constant(&self, clock: usize) -> u32 {
        self.atoms.iter().filter(|a| a.clock == clock).map(|a| a.bound).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, clocks: &'a [String]) -> impl fmt::Display + 'a {
        DisplayConstraint { c: self, clocks }
    }
}

struct DisplayConstraint<'a> {
    c: &'a ClockConstraint,
    clocks: &'a [String],
}

impl fmt::Display for DisplayConstraint<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.atoms.is_empty() {
            return f.write_str("true");
        }
        for (i, a) in self.c.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            let op = match a.rel {
                ClockRel::Le => "<=",
                ClockRel::Ge => ">=",
            };
            write!(f, "{}{}{}", self.clocks[a.clock], op, a.bound)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub prob: f64,
    pub resets: Vec<usize>,
    pub target: usize,
}

/// The enabling condition, probabilistic transition and action reward of one
/// action in one location.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionEdge {
    pub action: usize,
    pub guard: ClockConstraint,
    pub branches: Vec<Branch>,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub name: String,
    pub observation: usize,
    pub invariant: ClockConstraint,
    /// Reward accumulated per time unit.
    pub rate: f64,
    pub edges: Vec<ActionEdge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Popta {
    pub clocks: Vec<String>,
    /// Explicit lower bounds on `k_x` (for instance from a property).
    pub clock_bounds: Vec<Option<u32>>,
    pub actions: Vec<String>,
    /// Location observations (full names).
    pub observations: Vec<String>,
    /// Control part of each observation, without observable variable values.
    pub observation_bases: Vec<String>,
    /// Named sets of location observations.
    pub labels: BTreeMap<String, BTreeSet<usize>>,
    pub locations: Vec<Location>,
    pub initial: usize,
}

impl Popta {
    pub fn edge(&self, l: usize, a: usize) -> Option<&ActionEdge> {
        self.locations[l].edges.iter().find(|e| e.action == a)
    }

    pub fn clock_index(&self, name: &str) -> Option<usize> {
        self.clocks.iter().position(|c| c == name)
    }

    /// `k_x`: the largest constant clock `x` is compared to.
    pub fn clock_bound(&self, x: usize) -> u32 {
        let mut k = self.clock_bounds.get(x).copied().flatten().unwrap_or(0);
        for l in &self.locations {
            k = k.max(l.invariant.max_constant(x));
            for e in &l.edges {
                k = k.max(e.guard.max_constant(x));
            }
        }
        k
    }

    /// Adds a clock and returns its index.
    pub fn add_clock(&mut self, name: &str, bound: Option<u32>) -> usize {
        self.clocks.push(name.to_string());
        self.clock_bounds.push(bound);
        self.clocks.len() - 1
    }

    pub fn add_action(&mut self, name: &str) -> usize {
        match self.actions.iter().position(|a| a == name) {
            Some(i) => i,
            None => {
                self.actions.push(name.to_string());
                self.actions.len() - 1
            }
        }
    }

    pub fn add_observation(&mut self, name: &str) -> usize {
        match self.observations.iter().position(|o| o == name) {
            Some(i) => i,
            None => {
                self.observations.push(name.to_string());
                self.observation_bases.push(name.to_string());
                self.observations.len() - 1
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Restriction {
    InvariantMismatch { observation: String, first: String, second: String },
    EnablingMismatch { observation: String, first: String, second: String, action: String },
    InitialNotObservable { observation: String, other: String },
    DistributionSum { location: String, action: String, sum: String },
    NegativeValue { location: String, what: String },
    ResetOfZeroClock { state: String, action: String, clock: String },
    Exploration { message: String },
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Restriction::InvariantMismatch { observation, first, second } => write!(
                f,
                "locations `{first}` and `{second}` share observation `{observation}` but have different invariants"
            ),
            Restriction::EnablingMismatch { observation, first, second, action } => write!(
                f,
                "locations `{first}` and `{second}` share observation `{observation}` but enable action `{action}` differently"
            ),
            Restriction::InitialNotObservable { observation, other } => {
                write!(f, "location `{other}` shares the initial observation `{observation}`")
            }
            Restriction::DistributionSum { location, action, sum } => {
                write!(f, "distribution of action `{action}` in `{location}` sums to {sum}")
            }
            Restriction::NegativeValue { location, what } => {
                write!(f, "{what} in location `{location}` is negative or not finite")
            }
            Restriction::ResetOfZeroClock { state, action, clock } => {
                write!(f, "action `{action}` resets clock `{clock}` while it is zero in state {state}")
            }
            Restriction::Exploration { message } => write!(f, "exploration failed: {message}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub violations: Vec<Restriction>,
}

impl RestrictionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for RestrictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no restriction violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn static_checks(p: &Popta) -> Vec<Restriction> {
    let mut out = Vec::new();
    let mut by_obs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, l) in p.locations.iter().enumerate() {
        by_obs.entry(l.observation).or_default().push(i);
    }
    for (&o, members) in &by_obs {
        let Some((&first, rest)) = members.split_first() else { continue };
        let lf = &p.locations[first];
        for &other in rest {
            let lo = &p.locations[other];
            if lf.invariant.canonical() != lo.invariant.canonical() {
                out.push(Restriction::InvariantMismatch {
                    observation: p.observations[o].clone(),
                    first: lf.name.clone(),
                    second: lo.name.clone(),
                });
            }
            let actions: BTreeSet<usize> = lf.edges.iter().chain(&lo.edges).map(|e| e.action).collect();
            for a in actions {
                let g1 = p.edge(first, a).map(|e| e.guard.canonical());
                let g2 = p.edge(other, a).map(|e| e.guard.canonical());
                if g1 != g2 {
                    out.push(Restriction::EnablingMismatch {
                        observation: p.observations[o].clone(),
                        first: lf.name.clone(),
                        second: lo.name.clone(),
                        action: p.actions[a].clone(),
                    });
                }
            }
        }
    }
    let init_obs = p.locations[p.initial].observation;
    for (i, l) in p.locations.iter().enumerate() {
        if i != p.initial && l.observation == init_obs {
            out.push(Restriction::InitialNotObservable {
                observation: p.observations[init_obs].clone(),
                other: l.name.clone(),
            });
        }
    }
    for l in &p.locations {
        if !l.rate.is_finite() || l.rate < 0.0 {
            out.push(Restriction::NegativeValue { location: l.name.clone(), what: "location reward".into() });
        }
        for e in &l.edges {
            let sum: f64 = e.branches.iter().map(|b| b.prob).sum();
            if (sum - 1.0).abs() > SUM_TOL {
                out.push(Restriction::DistributionSum {
                    location: l.name.clone(),
                    action: p.actions[e.action].clone(),
                    sum: format!("{sum}"),
                });
            }
            if e.branches.iter().any(|b| !(b.prob >= 0.0)) {
                out.push(Restriction::NegativeValue {
                    location: l.name.clone(),
                    what: format!("probability of action `{}`", p.actions[e.action]),
                });
            }
            if !e.reward.is_finite() || e.reward < 0.0 {
                out.push(Restriction::NegativeValue {
                    location: l.name.clone(),
                    what: format!("reward of action `{}`", p.actions[e.action]),
                });
            }
        }
    }
    out
}

/// Static observation-consistency checks plus the zero-reset check, which
/// needs the reachable digital states.
pub fn check_restrictions(p: &Popta) -> RestrictionReport {
    let mut violations = static_checks(p);
    match explore(p, DEFAULT_STATE_LIMIT) {
        Ok(d) => violations.extend(d.reset_warnings),
        Err(e) => violations.push(Restriction::Exploration { message: e.to_string() }),
    }
    RestrictionReport { violations }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DigitalError {
    #[error("action name `{0}` is reserved for the digital semantics")]
    ReservedAction(String),
    #[error("initial state violates the invariant of location `{0}`")]
    InitialInvariant(String),
    #[error("action `{action}` from state {state} enters location `{target}` violating its invariant")]
    TargetInvariant { state: String, action: String, target: String },
    #[error("digital state space exceeds the limit of {0} states")]
    Capacity(usize),
    #[error("POPTA violates the observation restrictions: {0}")]
    Restrictions(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Location index and clock valuation of a digital state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitalState {
    pub location: usize,
    pub valuation: Vec<u32>,
}

/// Result of the digital clocks translation.
#[derive(Debug, Clone)]
pub struct DigitalModel {
    pub pomdp: Pomdp,
    pub states: Vec<DigitalState>,
    /// Per POMDP observation: the location observation and clock valuation.
    pub observations: Vec<(usize, Vec<u32>)>,
    pub clock_bounds: Vec<u32>,
    /// Zero-reset restriction violations met during exploration.
    pub reset_warnings: Vec<Restriction>,
}

impl DigitalModel {
    pub fn legend(&self, p: &Popta) -> LegendDocument {
        LegendDocument {
            clocks: p.clocks.clone(),
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(i, s)| LegendEntry {
                    state: i,
                    location: p.locations[s.location].name.clone(),
                    valuation: s.valuation.clone(),
                })
                .collect(),
        }
    }
}

/// Maps POMDP state indices back to `(location, valuation)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendDocument {
    pub clocks: Vec<String>,
    pub states: Vec<LegendEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendEntry {
    pub state: usize,
    pub location: String,
    pub valuation: Vec<u32>,
}

fn valuation_suffix(clocks: &[String], v: &[u32]) -> String {
    if clocks.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = clocks.iter().zip(v).map(|(c, x)| format!("{c}={x}")).collect();
    format!("@{}", parts.join(","))
}

/// Translates `p` to its digital clocks POMDP. Observation restrictions must
/// hold; zero resets are reported in [`DigitalModel::reset_warnings`].
pub fn digitalize(p: &Popta) -> Result<DigitalModel, DigitalError> {
    digitalize_with_limit(p, DEFAULT_STATE_LIMIT)
}

pub fn digitalize_with_limit(p: &Popta, limit: usize) -> Result<DigitalModel, DigitalError> {
    let broken: Vec<String> = static_checks(p).iter().map(|r| r.to_string()).collect();
    if !broken.is_empty() {
        return Err(DigitalError::Restrictions(broken.join("; ")));
    }
    explore(p, limit)
}

fn explore(p: &Popta, limit: usize) -> Result<DigitalModel, DigitalError> {
    for reserved in [DELAY_ACTION, STUTTER_ACTION] {
        if p.actions.iter().any(|a| a == reserved) {
            return Err(DigitalError::ReservedAction(reserved.to_string()));
        }
    }
    let nclocks = p.clocks.len();
    let bounds: Vec<u32> = (0..nclocks).map(|x| p.clock_bound(x)).collect();
    let state_name = |s: &DigitalState| {
        format!("{}{}", p.locations[s.location].name, valuation_suffix(&p.clocks, &s.valuation))
    };

    let init = DigitalState { location: p.initial, valuation: vec![0; nclocks] };
    if !p.locations[p.initial].invariant.holds(&init.valuation) {
        return Err(DigitalError::InitialInvariant(p.locations[p.initial].name.clone()));
    }

    let delay = p.actions.len();
    let stutter = delay + 1;
    let mut index: HashMap<DigitalState, usize> = HashMap::new();
    let mut states: Vec<DigitalState> = Vec::new();
    let mut choices: Vec<Vec<Choice>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut warnings = Vec::new();
    let mut warned: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut used_stutter = false;

    let mut intern = |s: DigitalState,
                      states: &mut Vec<DigitalState>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, DigitalError> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if states.len() >= limit {
            return Err(DigitalError::Capacity(limit));
        }
        let i = states.len();
        index.insert(s.clone(), i);
        states.push(s);
        queue.push_back(i);
        Ok(i)
    };
    intern(init, &mut states, &mut queue)?;

    while let Some(i) = queue.pop_front() {
        let s = states[i].clone();
        let loc = &p.locations[s.location];
        let mut list = Vec::new();
        for e in &loc.edges {
            if !e.guard.holds(&s.valuation) {
                continue;
            }
            let mut succ: Vec<(usize, f64)> = Vec::new();
            for b in &e.branches {
                if b.prob == 0.0 {
                    continue;
                }
                let mut v = s.valuation.clone();
                for &x in &b.resets {
                    if v[x] == 0 && warned.insert((i, e.action, x)) {
                        warnings.push(Restriction::ResetOfZeroClock {
                            state: state_name(&s),
                            action: p.actions[e.action].clone(),
                            clock: p.clocks[x].clone(),
                        });
                    }
                    v[x] = 0;
                }
                if !p.locations[b.target].invariant.holds(&v) {
                    return Err(DigitalError::TargetInvariant {
                        state: state_name(&s),
                        action: p.actions[e.action].clone(),
                        target: p.locations[b.target].name.clone(),
                    });
                }
                let t = intern(DigitalState { location: b.target, valuation: v }, &mut states, &mut queue)?;
                match succ.iter_mut().find(|e| e.0 == t) {
                    Some(entry) => entry.1 += b.prob,
                    None => succ.push((t, b.prob)),
                }
            }
            list.push(Choice { action: e.action, successors: succ, reward: e.reward });
        }
        let later: Vec<u32> = s.valuation.iter().zip(&bounds).map(|(&x, &k)| (x + 1).min(k + 1)).collect();
        if loc.invariant.holds(&later) {
            let t = intern(DigitalState { location: s.location, valuation: later }, &mut states, &mut queue)?;
            list.push(Choice { action: delay, successors: vec![(t, 1.0)], reward: loc.rate });
        }
        if list.is_empty() {
            used_stutter = true;
            list.push(Choice { action: stutter, successors: vec![(i, 1.0)], reward: 0.0 });
        }
        choices.push(list);
    }

    let mut obs_index: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let mut observations: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut obs = Vec::with_capacity(states.len());
    for s in &states {
        let key = (p.locations[s.location].observation, s.valuation.clone());
        let next = observations.len();
        let o = *obs_index.entry(key.clone()).or_insert_with(|| {
            observations.push(key);
            next
        });
        obs.push(o);
    }
    let obs_names: Vec<String> = observations
        .iter()
        .map(|(o, v)| format!("{}{}", p.observations[*o], valuation_suffix(&p.clocks, v)))
        .collect();
    let mut actions = p.actions.clone();
    actions.push(DELAY_ACTION.to_string());
    if used_stutter {
        actions.push(STUTTER_ACTION.to_string());
    }
    let names: Vec<String> = states.iter().map(|s| state_name(s)).collect();
    let pomdp = Pomdp::new(names, 0, actions, obs_names, obs, choices)?;
    Ok(DigitalModel { pomdp, states, observations, clock_bounds: bounds, reset_warnings: warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(clock: usize, rel: ClockRel, bound: u32) -> ClockAtom {
        ClockAtom { clock, rel, bound }
    }

    fn location(name: &str, observation: usize, invariant: ClockConstraint) -> Location {
        Location { name: name.into(), observation, invariant, rate: 0.0, edges: Vec::new() }
    }

    fn base(clocks: &[&str], actions: &[&str], observations: &[&str]) -> Popta {
        Popta {
            clocks: clocks.iter().map(|s| s.to_string()).collect(),
            clock_bounds: vec![None; clocks.len()],
            actions: actions.iter().map(|s| s.to_string()).collect(),
            observations: observations.iter().map(|s| s.to_string()).collect(),
            observation_bases: observations.iter().map(|s| s.to_string()).collect(),
            labels: BTreeMap::new(),
            locations: Vec::new(),
            initial: 0,
        }
    }

    #[test]
    fn single_location_delay_chain() {
        let mut p = base(&["x"], &[], &["o"]);
        p.locations.push(location("l", 0, ClockConstraint::new([atom(0, ClockRel::Le, 2)])));
        let d = digitalize(&p).unwrap();
        assert_eq!(d.pomdp.num_states(), 3);
        let vals: Vec<u32> = d.states.iter().map(|s| s.valuation[0]).collect();
        assert_eq!(vals, vec![0, 1, 2]);
        // x = 2 cannot delay further and has nothing else to do
        assert_eq!(d.pomdp.action_name(d.pomdp.choices(2)[0].action), STUTTER_ACTION);
        assert!(d.pomdp.validate().is_valid());
    }

    #[test]
    fn clocks_are_capped() {
        let mut p = base(&["x"], &["go"], &["a", "b"]);
        let mut l0 = location("l0", 0, ClockConstraint::always());
        l0.edges.push(ActionEdge {
            action: 0,
            guard: ClockConstraint::new([atom(0, ClockRel::Ge, 2)]),
            branches: vec![Branch { prob: 1.0, resets: vec![0], target: 1 }],
            reward: 0.0,
        });
        p.locations.push(l0);
        p.locations.push(location("l1", 1, ClockConstraint::always()));
        let d = digitalize(&p).unwrap();
        assert_eq!(d.clock_bounds, vec![2]);
        assert!(d.states.iter().all(|s| s.valuation[0] <= 3));
        // l0 with x in 0..=3, l1 with x in 0..=3
        assert_eq!(d.pomdp.num_states(), 8);
        assert!(d.reset_warnings.is_empty());
    }

    #[test]
    fn zero_reset_is_reported() {
        let mut p = base(&["x"], &["go"], &["a", "b"]);
        let mut l0 = location("l0", 0, ClockConstraint::always());
        l0.edges.push(ActionEdge {
            action: 0,
            guard: ClockConstraint::always(),
            branches: vec![Branch { prob: 1.0, resets: vec![0], target: 1 }],
            reward: 0.0,
        });
        p.locations.push(l0);
        p.locations.push(location("l1", 1, ClockConstraint::always()));
        let report = check_restrictions(&p);
        assert_eq!(
            report.violations,
            vec![Restriction::ResetOfZeroClock { state: "l0@x=0".into(), action: "go".into(), clock: "x".into() }]
        );
    }

    #[test]
    fn observation_equal_locations_must_agree() {
        let mut p = base(&["x"], &["go"], &["init", "same"]);
        p.locations.push(location("l0", 0, ClockConstraint::always()));
        p.locations.push(location("l1", 1, ClockConstraint::new([atom(0, ClockRel::Le, 1)])));
        p.locations.push(location("l2", 1, ClockConstraint::new([atom(0, ClockRel::Le, 2)])));
        let report = check_restrictions(&p);
        assert!(report.violations.iter().any(|v| matches!(v, Restriction::InvariantMismatch { .. })));
        assert!(matches!(digitalize(&p), Err(DigitalError::Restrictions(_))));
    }

    #[test]
    fn initial_location_must_be_observable() {
        let mut p = base(&[], &[], &["o"]);
        p.locations.push(location("l0", 0, ClockConstraint::always()));
        p.locations.push(location("l1", 0, ClockConstraint::always()));
        let report = check_restrictions(&p);
        assert!(report.violations.iter().any(|v| matches!(v, Restriction::InitialNotObservable { .. })));
    }

    #[test]
    fn reserved_names_are_rejected() {
        let mut p = base(&[], &["delay"], &["o"]);
        p.locations.push(location("l0", 0, ClockConstraint::always()));
        assert_eq!(digitalize(&p).unwrap_err(), DigitalError::ReservedAction("delay".into()));
    }

    #[test]
    fn canonical_constraints() {
        let a = ClockConstraint::new([atom(0, ClockRel::Le, 3), atom(0, ClockRel::Le, 2), atom(1, ClockRel::Ge, 0)]);
        let b = ClockConstraint::new([atom(0, ClockRel::Le, 2)]);
        assert_eq!(a.canonical(), b.canonical());
        assert!(a.holds(&[2, 0]));
        assert!(!a.holds(&[3, 0]));
        let clocks = vec!["x".to_string(), "y".to_string()];
        assert_eq!(b.display(&clocks).to_string(), "x<=2");
        assert_eq!(ClockConstraint::always().display(&clocks).to_string(), "true");
    }
}
