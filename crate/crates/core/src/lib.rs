//! Minimal revision of function-free normal logic programs.
//!
//! A [`RevisionFramework`] splits knowledge into persistent, temporal
//! (retractable per ground instance) and backup (addable per ground
//! instance) rules. When adding a rule leaves the program without a stable
//! model, [`revise`] translates the framework into an abductive program and
//! runs a top-down consistency-checking proof search whose assumption sets
//! name which instances to delete and which to add. The ⊆-minimal ones are
//! the minimally revised programs.
//!
//! ```
//! use lprevise::{parse_framework, revise, EngineConfig};
//!
//! let text = "
//! #persistent
//! c(c1). c(c2).
//! #temporal
//! phi1: r(X) :- c(X), not b(X).
//! #backup
//! phi2: b(X) :- c(X), not r(X).
//! #new
//! :- r(c1).
//! ";
//! let (fw, r_new) = parse_framework(text).unwrap();
//! let outcome = revise(&fw, &r_new.unwrap(), &EngineConfig::default()).unwrap();
//! assert_eq!(outcome.minimal_thetas.len(), 2);
//! ```

pub mod cli;
pub mod engine;
mod error;
pub mod grounder;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod stable;
pub mod translator;

pub use engine::{del, resolve, revise, EngineConfig, EngineOutcome, Revisor, TraceEntry};
pub use error::{Error, Result};
pub use grounder::{
    ground, herbrand_constants, least_model, make_range_restricted, negation_removed,
    relevant_ground_program, GroundProgram, HerbrandUniverse,
};
pub use model::{
    apply, complement, partition_body, Abducibles, Atom, Delta, Literal, Program,
    RevisionFramework, Rule, Substitution, Term, Theta,
};
pub use oracle::{brute_force_revisions, brute_force_theta, cross_check, OracleReport};
pub use parser::{parse_framework, parse_program, parse_rule, render_rule};
pub use stable::{
    generalized_stable_models, gl_reduct, is_consistent, stable_models, GeneralizedStableModel,
    Model,
};
pub use translator::{apply_revision, extract_revision, translate, AbductiveFramework, Revision};
