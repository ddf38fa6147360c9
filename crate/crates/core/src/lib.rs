//! Growth functions of Mealy automata and of the semigroups of automatic
//! transformations they define.
//!
//! The crate is organised in four layers:
//!
//! - [`automaton`]: the automaton model, products, powers and minimization;
//! - [`semigroup`]: level-by-level enumeration of distinct transformations,
//!   word equality and relation checking;
//! - [`series`]: exact integer sequences and formal power series, composite
//!   structure detection and closed-form evaluators;
//! - [`corpus`]: the built-in automata with their expected growth, relation
//!   fixtures, normal-form grammars, file formats and automaton search.
//!
//! [`verify`] ties them together into the machine-readable verification
//! report used by the command-line tool.

pub mod automaton;
pub mod corpus;
pub mod semigroup;
pub mod series;
pub mod verify;

pub use automaton::{Letter, MealyAutomaton, StateId};
pub use semigroup::{enumerate_growth, ElementId, ElementRegistry, GeneratorWord, GrowthTables};
pub use series::{IntSequence, PowerSeries};
