//! Grid-based verification and strategy synthesis for partially observable
//! Markov decision processes and partially observable probabilistic timed
//! automata.

pub mod format;
pub mod grid;
pub mod logic;
pub mod pipeline;
pub mod popta;
pub mod pomdp;
pub mod solver;
pub mod strategy;
