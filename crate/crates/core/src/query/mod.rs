//! Interrelation queries over the facts a model states.
//!
//! Functions relate to their slot fillers, quality forms relate a quality
//! instance `Quality@subject` to its subject and to the intersection of the
//! regions stated for it. A query is a description whose slots are followed
//! through these facts; other parts are matched by subsumption.

mod eval;
mod facts;

pub use eval::{eval_query, eval_query_lenient, QueryMatch, VOCABULARY};
pub use facts::{extract_facts, inverse_of, Fact, FactGraph, HAS_QUALITY, HAS_VALUE_IN, INHERES_IN, OBSERVED_BY};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
}
