//! The semigroup `S_A` generated by the state transformations of an
//! automaton.
//!
//! Elements are stored in wreath-recursion form: an output row `σ` and one
//! section per letter, each section being another registered element. The
//! registry grows one word length at a time, so the spherical, word and
//! cumulative growth functions fall out of the enumeration directly.

mod registry;
mod relations;
mod words;

pub use registry::{
    enumerate_growth, ElementId, ElementRecord, ElementRegistry, Enumeration, EnumerationOptions,
    GrowthEnumerator, GrowthTables, LevelStats, Truncation, DEFAULT_ELEMENT_CAP,
};
pub use relations::{
    check_relations, parse_template, GeneratorMap, InstanceResult, Relation, RelationReport,
    RelationSet, Template, TemplateError,
};
pub use words::{resolve_word, word_automaton, words_equal, GeneratorWord, WordError};
