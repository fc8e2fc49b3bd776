//! Core of the requirements refinement calculus.
//!
//! The crate is `no_std` (it only needs `alloc`) and contains everything that
//! is pure computation: the textual description language, the typed model
//! store, operator validation and construction, the structural subsumption
//! reasoner with its finite-model oracle, and interrelation queries. File IO,
//! export formats and the command line live in the `desiree` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod model;
pub mod num;
pub mod operators;
pub mod query;
pub mod reasoner;
pub mod syntax;

pub use model::{
    load_model, load_model_lenient, Application, Element, ElementBody, ElementKind, LoadError,
    LoadedModel, ModelStore, QualityForm, Verdict,
};
pub use num::Rational;
pub use operators::{OperatorArgs, OperatorKind, Strength};
pub use reasoner::{Reasoner, Verdict3};
pub use syntax::{
    parse_description, parse_description_str, parse_model_file, render_description,
    render_model_file, tokenize, CardModifier, Description, ModelFileAst, RegionExpr, Span,
};
