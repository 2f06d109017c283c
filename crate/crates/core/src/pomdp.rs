//! Finite POMDPs with a deterministic state labelling, and the belief
//! arithmetic of the induced belief MDP.
//!
//! Beliefs are kept in factored form: every reachable belief is supported on
//! a single observation class, so a belief is the class index together with
//! a sparse distribution over that class's member states.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Probabilities below this are dropped from beliefs after every update.
pub const PRUNE_EPS: f64 = 1e-12;

/// Tolerance on distributions summing to one.
pub const SUM_TOL: f64 = 1e-12;

/// Distance below which two beliefs are treated as the same node.
pub const DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("action index {0} out of range")]
    ActionOutOfRange(usize),
    #[error("observation index {0} out of range")]
    ObservationOutOfRange(usize),
    #[error("expected {expected} observation labels, found {found}")]
    ObsLength { expected: usize, found: usize },
    #[error("transition for state `{state}` and action `{action}` given twice")]
    DuplicateChoice { state: String, action: String },
    #[error("reward given for state `{state}` and action `{action}`, which is not enabled")]
    RewardWithoutTransition { state: String, action: String },
    #[error("model has no states")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeliefError {
    #[error("belief probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("negative probability {0} in belief")]
    NegativeProbability(f64),
    #[error("state index {0} is not part of the model")]
    UnknownState(usize),
    #[error("belief mixes observations `{0}` and `{1}`")]
    MixedObservations(String, String),
    #[error("belief is empty")]
    Empty,
    #[error("action `{action}` is not enabled under observation `{observation}`")]
    ActionNotEnabled { action: String, observation: String },
    #[error("observation `{observation}` has probability zero after action `{action}`")]
    ImpossibleObservation { action: String, observation: String },
}

/// One enabled action of a state: its successor distribution and reward.
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    pub action: usize,
    pub successors: Vec<(usize, f64)>,
    pub reward: f64,
}

#[derive(Debug, Clone)]
pub struct Pomdp {
    states: Vec<String>,
    initial: usize,
    actions: Vec<String>,
    observations: Vec<String>,
    obs: Vec<usize>,
    /// Per state, sorted by action index.
    choices: Vec<Vec<Choice>>,
    /// Per observation, member states in ascending order.
    classes: Vec<Vec<usize>>,
    /// Position of each state inside its observation class.
    class_pos: Vec<usize>,
}

impl Pomdp {
    /// Builds a model after checking index ranges only; semantic invariants
    /// are reported by [`Pomdp::validate`].
    pub fn new(
        states: Vec<String>,
        initial: usize,
        actions: Vec<String>,
        observations: Vec<String>,
        obs: Vec<usize>,
        choices: Vec<Vec<Choice>>,
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::Empty);
        }
        if initial >= states.len() {
            return Err(ModelError::StateOutOfRange(initial));
        }
        if obs.len() != states.len() {
            return Err(ModelError::ObsLength { expected: states.len(), found: obs.len() });
        }
        if choices.len() != states.len() {
            return Err(ModelError::StateOutOfRange(choices.len()));
        }
        if let Some(&o) = obs.iter().find(|&&o| o >= observations.len()) {
            return Err(ModelError::ObservationOutOfRange(o));
        }
        let mut choices = choices;
        for (s, list) in choices.iter_mut().enumerate() {
            list.sort_by_key(|c| c.action);
            for w in list.windows(2) {
                if w[0].action == w[1].action {
                    return Err(ModelError::DuplicateChoice {
                        state: states[s].clone(),
                        action: actions.get(w[0].action).cloned().unwrap_or_default(),
                    });
                }
            }
            for c in list.iter() {
                if c.action >= actions.len() {
                    return Err(ModelError::ActionOutOfRange(c.action));
                }
                if let Some(&(t, _)) = c.successors.iter().find(|(t, _)| *t >= states.len()) {
                    return Err(ModelError::StateOutOfRange(t));
                }
            }
        }
        let mut classes = vec![Vec::new(); observations.len()];
        let mut class_pos = vec![0; states.len()];
        for (s, &o) in obs.iter().enumerate() {
            class_pos[s] = classes[o].len();
            classes[o].push(s);
        }
        Ok(Pomdp { states, initial, actions, observations, obs, choices, classes, class_pos })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_observations(&self) -> usize {
        self.observations.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.actions[a]
    }

    pub fn observation_name(&self, o: usize) -> &str {
        &self.observations[o]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn observation_names(&self) -> &[String] {
        &self.observations
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == name)
    }

    pub fn observation_index(&self, name: &str) -> Option<usize> {
        self.observations.iter().position(|o| o == name)
    }

    pub fn obs(&self, s: usize) -> usize {
        self.obs[s]
    }

    pub fn choices(&self, s: usize) -> &[Choice] {
        &self.choices[s]
    }

    pub fn choice(&self, s: usize, a: usize) -> Option<&Choice> {
        let list = &self.choices[s];
        list.binary_search_by_key(&a, |c| c.action).ok().map(|i| &list[i])
    }

    pub fn is_enabled(&self, s: usize, a: usize) -> bool {
        self.choice(s, a).is_some()
    }

    /// Member states of an observation class, ascending.
    pub fn class(&self, o: usize) -> &[usize] {
        &self.classes[o]
    }

    pub fn class_position(&self, s: usize) -> usize {
        self.class_pos[s]
    }

    /// Actions enabled throughout observation class `o` (taken from its first
    /// member; identical across members in a valid model).
    pub fn class_actions(&self, o: usize) -> Vec<usize> {
        self.classes[o]
            .first()
            .map(|&s| self.choices[s].iter().map(|c| c.action).collect())
            .unwrap_or_default()
    }

    /// Size of the largest observation class.
    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_fully_observable(&self) -> bool {
        self.classes.iter().all(|c| c.len() <= 1)
    }

    pub fn num_transitions(&self) -> usize {
        self.choices.iter().flat_map(|l| l.iter()).map(|c| c.successors.len()).sum()
    }

    /// Checks every structural invariant of a POMDP and lists the violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (s, list) in self.choices.iter().enumerate() {
            for c in list {
                let mut sum = 0.0;
                for &(_, p) in &c.successors {
                    if !(0.0..=1.0 + SUM_TOL).contains(&p) || !p.is_finite() {
                        violations.push(Violation::ProbabilityOutOfRange {
                            state: self.states[s].clone(),
                            action: self.actions[c.action].clone(),
                            prob: p,
                        });
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > SUM_TOL {
                    violations.push(Violation::DistributionSum {
                        state: self.states[s].clone(),
                        action: self.actions[c.action].clone(),
                        sum,
                    });
                }
                if !c.reward.is_finite() || c.reward < 0.0 {
                    violations.push(Violation::InvalidReward {
                        state: self.states[s].clone(),
                        action: self.actions[c.action].clone(),
                        reward: c.reward,
                    });
                }
            }
        }
        for (o, members) in self.classes.iter().enumerate() {
            let Some((&first, rest)) = members.split_first() else { continue };
            let base: BTreeSet<usize> = self.choices[first].iter().map(|c| c.action).collect();
            for &s in rest {
                let other: BTreeSet<usize> = self.choices[s].iter().map(|c| c.action).collect();
                if let Some(&a) = base.symmetric_difference(&other).next() {
                    violations.push(Violation::EnabledActionsDiffer {
                        observation: self.observations[o].clone(),
                        first: self.states[first].clone(),
                        second: self.states[s].clone(),
                        action: self.actions[a].clone(),
                    });
                }
            }
        }
        let init_obs = self.obs[self.initial];
        for &s in &self.classes[init_obs] {
            if s != self.initial {
                violations.push(Violation::InitialNotObservable {
                    observation: self.observations[init_obs].clone(),
                    other: self.states[s].clone(),
                });
            }
        }
        ValidationReport { violations }
    }

    /// `Pr[o | a, b]` for every observation with positive probability,
    /// ordered by observation index.
    pub fn obs_probability(&self, b: &Belief, a: usize) -> Result<Vec<(usize, f64)>, BeliefError> {
        let next = self.next_distribution(b, a)?;
        let mut out: Vec<(usize, f64)> = Vec::new();
        for (s, p) in next {
            let o = self.obs[s];
            match out.iter_mut().find(|(q, _)| *q == o) {
                Some(e) => e.1 += p,
                None => out.push((o, p)),
            }
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// The belief `b^{a,o}` reached by performing `a` and then observing `o`.
    pub fn belief_update(&self, b: &Belief, a: usize, o: usize) -> Result<Belief, BeliefError> {
        let next = self.next_distribution(b, a)?;
        let entries: Vec<(usize, f64)> = next.into_iter().filter(|&(s, _)| self.obs[s] == o).collect();
        let mass: f64 = entries.iter().map(|e| e.1).sum();
        if mass <= 0.0 {
            return Err(BeliefError::ImpossibleObservation {
                action: self.actions[a].clone(),
                observation: self.observations[o].clone(),
            });
        }
        Ok(Belief::normalized(o, entries, mass))
    }

    /// All observation outcomes of `a` from `b`, each with its probability and
    /// updated belief.
    pub fn successors(&self, b: &Belief, a: usize) -> Result<Vec<Successor>, BeliefError> {
        let next = self.next_distribution(b, a)?;
        let mut groups: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
        for (s, p) in next {
            let o = self.obs[s];
            match groups.iter_mut().find(|(q, _)| *q == o) {
                Some(g) => g.1.push((s, p)),
                None => groups.push((o, vec![(s, p)])),
            }
        }
        groups.sort_by_key(|g| g.0);
        Ok(groups
            .into_iter()
            .map(|(o, entries)| {
                let mass: f64 = entries.iter().map(|e| e.1).sum();
                Successor { observation: o, prob: mass, belief: Belief::normalized(o, entries, mass) }
            })
            .collect())
    }

    /// Expected one-step reward `Σ_s R(s,a)·b(s)`.
    pub fn belief_reward(&self, b: &Belief, a: usize) -> Result<f64, BeliefError> {
        let mut total = 0.0;
        for &(s, p) in &b.support {
            let c = self.choice(s, a).ok_or_else(|| self.not_enabled(b, a))?;
            total += p * c.reward;
        }
        Ok(total)
    }

    pub fn is_target(&self, b: &Belief, target: &TargetSpec) -> bool {
        target.contains(b.obs)
    }

    /// Unnormalised successor-state distribution `Σ_s b(s)·P(s,a)`, sorted by state.
    fn next_distribution(&self, b: &Belief, a: usize) -> Result<Vec<(usize, f64)>, BeliefError> {
        let mut acc: Vec<(usize, f64)> = Vec::new();
        for &(s, p) in &b.support {
            let c = self.choice(s, a).ok_or_else(|| self.not_enabled(b, a))?;
            for &(t, q) in &c.successors {
                acc.push((t, p * q));
            }
        }
        acc.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(acc.len());
        for (t, q) in acc {
            match merged.last_mut() {
                Some(last) if last.0 == t => last.1 += q,
                _ => merged.push((t, q)),
            }
        }
        merged.retain(|e| e.1 > 0.0);
        Ok(merged)
    }

    fn not_enabled(&self, b: &Belief, a: usize) -> BeliefError {
        BeliefError::ActionNotEnabled {
            action: self.actions.get(a).cloned().unwrap_or_else(|| format!("#{a}")),
            observation: self.observations[b.obs].clone(),
        }
    }

    /// Copy of the model in which every state whose observation is in `obs`
    /// loses its choices and instead self-loops under `action_name` with zero
    /// reward.
    pub fn with_absorbing(&self, obs: &BTreeSet<usize>, action_name: &str) -> Pomdp {
        let mut actions = self.actions.clone();
        let absorb = match actions.iter().position(|a| a == action_name) {
            Some(i) => i,
            None => {
                actions.push(action_name.to_string());
                actions.len() - 1
            }
        };
        let choices = (0..self.states.len())
            .map(|s| {
                if obs.contains(&self.obs[s]) {
                    vec![Choice { action: absorb, successors: vec![(s, 1.0)], reward: 0.0 }]
                } else {
                    self.choices[s].clone()
                }
            })
            .collect();
        Pomdp::new(
            self.states.clone(),
            self.initial,
            actions,
            self.observations.clone(),
            self.obs.clone(),
            choices,
        )
        .expect("indices unchanged")
    }

    pub fn to_document(&self) -> PomdpDocument {
        let mut trans = Vec::new();
        let mut rewards = Vec::new();
        for (s, list) in self.choices.iter().enumerate() {
            for c in list {
                trans.push(TransEntry {
                    state: s,
                    action: c.action,
                    successors: c
                        .successors
                        .iter()
                        .map(|&(t, p)| SuccessorEntry { state: t, prob: p })
                        .collect(),
                });
                if c.reward != 0.0 {
                    rewards.push(RewardEntry { state: s, action: c.action, reward: c.reward });
                }
            }
        }
        PomdpDocument {
            states: self.states.clone(),
            initial: self.initial,
            actions: self.actions.clone(),
            observations: self.observations.clone(),
            obs: self.obs.clone(),
            trans,
            rewards,
        }
    }

    pub fn from_document(doc: &PomdpDocument) -> Result<Self, ModelError> {
        let n = doc.states.len();
        let mut choices: Vec<Vec<Choice>> = vec![Vec::new(); n];
        for t in &doc.trans {
            if t.state >= n {
                return Err(ModelError::StateOutOfRange(t.state));
            }
            choices[t.state].push(Choice {
                action: t.action,
                successors: t.successors.iter().map(|e| (e.state, e.prob)).collect(),
                reward: 0.0,
            });
        }
        for r in &doc.rewards {
            if r.state >= n {
                return Err(ModelError::StateOutOfRange(r.state));
            }
            match choices[r.state].iter_mut().find(|c| c.action == r.action) {
                Some(c) => c.reward += r.reward,
                None => {
                    return Err(ModelError::RewardWithoutTransition {
                        state: doc.states[r.state].clone(),
                        action: doc.actions.get(r.action).cloned().unwrap_or_else(|| format!("#{}", r.action)),
                    })
                }
            }
        }
        Pomdp::new(
            doc.states.clone(),
            doc.initial,
            doc.actions.clone(),
            doc.observations.clone(),
            doc.obs.clone(),
            choices,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: PomdpDocument = serde_json::from_str(text)?;
        Ok(Pomdp::from_document(&doc)?)
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed POMDP document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// JSON interchange form of a [`Pomdp`]. States, actions and observations are
/// referenced by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PomdpDocument {
    pub states: Vec<String>,
    pub initial: usize,
    pub actions: Vec<String>,
    pub observations: Vec<String>,
    pub obs: Vec<usize>,
    pub trans: Vec<TransEntry>,
    #[serde(default)]
    pub rewards: Vec<RewardEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransEntry {
    pub state: usize,
    pub action: usize,
    pub successors: Vec<SuccessorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessorEntry {
    pub state: usize,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardEntry {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ProbabilityOutOfRange { state: String, action: String, prob: f64 },
    DistributionSum { state: String, action: String, sum: f64 },
    InvalidReward { state: String, action: String, reward: f64 },
    EnabledActionsDiffer { observation: String, first: String, second: String, action: String },
    InitialNotObservable { observation: String, other: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProbabilityOutOfRange { state, action, prob } => {
                write!(f, "probability {prob} out of range in transition ({state}, {action})")
            }
            Violation::DistributionSum { state, action, sum } => {
                write!(f, "distribution for ({state}, {action}) sums to {sum}")
            }
            Violation::InvalidReward { state, action, reward } => {
                write!(f, "reward {reward} for ({state}, {action}) is negative or not finite")
            }
            Violation::EnabledActionsDiffer { observation, first, second, action } => write!(
                f,
                "states `{first}` and `{second}` share observation `{observation}` but differ on action `{action}`"
            ),
            Violation::InitialNotObservable { observation, other } => write!(
                f,
                "state `{other}` shares the initial observation `{observation}`"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "model is valid");
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

/// Outcome of one observation after an action.
#[derive(Debug, Clone)]
pub struct Successor {
    pub observation: usize,
    pub prob: f64,
    pub belief: Belief,
}

/// A belief supported on a single observation class.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    obs: usize,
    /// Sorted by state index; all entries strictly positive.
    support: Vec<(usize, f64)>,
}

impl Belief {
    pub fn point(model: &Pomdp, state: usize) -> Self {
        Belief { obs: model.obs(state), support: vec![(state, 1.0)] }
    }

    pub fn initial(model: &Pomdp) -> Self {
        Belief::point(model, model.initial())
    }

    /// Builds a belief from arbitrary entries: prunes mass below
    /// [`PRUNE_EPS`], renormalises, and rejects beliefs whose remaining
    /// support spans several observations.
    pub fn from_entries(
        model: &Pomdp,
        entries: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self, BeliefError> {
        let mut acc: Vec<(usize, f64)> = Vec::new();
        for (s, p) in entries {
            if s >= model.num_states() {
                return Err(BeliefError::UnknownState(s));
            }
            if p < 0.0 || !p.is_finite() {
                return Err(BeliefError::NegativeProbability(p));
            }
            acc.push((s, p));
        }
        acc.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (s, p) in acc {
            match merged.last_mut() {
                Some(last) if last.0 == s => last.1 += p,
                _ => merged.push((s, p)),
            }
        }
        let sum: f64 = merged.iter().map(|e| e.1).sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(BeliefError::NotNormalized(sum));
        }
        merged.retain(|e| e.1 >= PRUNE_EPS);
        let Some(&(first, _)) = merged.first() else { return Err(BeliefError::Empty) };
        let o = model.obs(first);
        if let Some(&(s, _)) = merged.iter().find(|(s, _)| model.obs(*s) != o) {
            return Err(BeliefError::MixedObservations(
                model.observation_name(o).to_string(),
                model.observation_name(model.obs(s)).to_string(),
            ));
        }
        let kept: f64 = merged.iter().map(|e| e.1).sum();
        Ok(Belief::normalized(o, merged, kept))
    }

    /// Dense coordinates over the members of the belief's observation class.
    pub fn from_dense(model: &Pomdp, obs: usize, dense: &[f64]) -> Self {
        let members = model.class(obs);
        let entries: Vec<(usize, f64)> = members
            .iter()
            .zip(dense)
            .filter(|(_, &p)| p > 0.0)
            .map(|(&s, &p)| (s, p))
            .collect();
        let mass: f64 = entries.iter().map(|e| e.1).sum();
        Belief::normalized(obs, entries, mass)
    }

    /// Divides by `mass`, prunes tiny entries and renormalises.
    fn normalized(obs: usize, mut entries: Vec<(usize, f64)>, mass: f64) -> Self {
        for e in entries.iter_mut() {
            e.1 /= mass;
        }
        let before = entries.len();
        entries.retain(|e| e.1 >= PRUNE_EPS);
        if entries.len() != before {
            let kept: f64 = entries.iter().map(|e| e.1).sum();
            for e in entries.iter_mut() {
                e.1 /= kept;
            }
        }
        Belief { obs, support: entries }
    }

    pub fn observation(&self) -> usize {
        self.obs
    }

    pub fn support(&self) -> &[(usize, f64)] {
        &self.support
    }

    pub fn prob(&self, s: usize) -> f64 {
        self.support
            .binary_search_by_key(&s, |e| e.0)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    pub fn dense(&self, model: &Pomdp) -> Vec<f64> {
        let mut v = vec![0.0; model.class(self.obs).len()];
        for &(s, p) in &self.support {
            v[model.class_position(s)] = p;
        }
        v
    }

    /// L∞ distance; beliefs over different classes are at distance 1.
    pub fn linf_distance(&self, other: &Belief) -> f64 {
        if self.obs != other.obs {
            return 1.0;
        }
        let (mut i, mut j) = (0, 0);
        let mut d: f64 = 0.0;
        while i < self.support.len() || j < other.support.len() {
            let a = self.support.get(i);
            let b = other.support.get(j);
            match (a, b) {
                (Some(&(s, p)), Some(&(t, q))) if s == t => {
                    d = d.max((p - q).abs());
                    i += 1;
                    j += 1;
                }
                (Some(&(s, p)), Some(&(t, _))) if s < t => {
                    d = d.max(p);
                    i += 1;
                }
                (Some(&(s, p)), None) => {
                    let _ = s;
                    d = d.max(p);
                    i += 1;
                }
                (_, Some(&(_, q))) => {
                    d = d.max(q);
                    j += 1;
                }
                (None, None) => break,
            }
        }
        d
    }
}

/// Target observation set `O`; a belief is a target iff its support lies in `O`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    observations: BTreeSet<usize>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TargetError {
    #[error("target observation set is empty")]
    Empty,
    #[error("target observation index {0} is not part of the model")]
    Unknown(usize),
}

impl TargetSpec {
    pub fn new(model: &Pomdp, observations: impl IntoIterator<Item = usize>) -> Result<Self, TargetError> {
        let observations: BTreeSet<usize> = observations.into_iter().collect();
        if observations.is_empty() {
            return Err(TargetError::Empty);
        }
        if let Some(&o) = observations.iter().find(|&&o| o >= model.num_observations()) {
            return Err(TargetError::Unknown(o));
        }
        Ok(TargetSpec { observations })
    }

    pub fn contains(&self, o: usize) -> bool {
        self.observations.contains(&o)
    }

    pub fn observations(&self) -> &BTreeSet<usize> {
        &self.observations
    }
}
