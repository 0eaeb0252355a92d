use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("predicate `{predicate}` used with arity {found}, expected {expected}")]
    ArityClash {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate rule name `{0}`")]
    DuplicateRuleName(String),
    #[error("temporal/backup rule has no name: {0}")]
    UnnamedRule(String),
    #[error("missing #new section")]
    MissingNew,
    #[error("the #new section must hold exactly one rule, found {0}")]
    NewSectionSize(usize),
    #[error("predicate `{0}` is reserved")]
    ReservedPredicate(String),
    #[error("bot may not occur in a rule body: {0}")]
    BotInBody(String),
    #[error("cannot ground: rules have variables but the program has no constants")]
    EmptyUniverse,
    #[error("least model requires a definite program; offending rule: {0}")]
    NotDefinite(String),
    #[error("unknown abducible `{0}`")]
    UnknownAbducible(String),
    #[error("predicate `{0}` collides with a generated abducible name")]
    NameCollision(String),
    #[error("abducible predicate `{0}` occurs in a rule head")]
    AbducibleHead(String),
    #[error("the persistent and temporal rules are already inconsistent")]
    InitialInconsistent,
    #[error("unrevisable: no combination of deletions and additions restores consistency")]
    Unrevisable,
    #[error("step budget of {0} subprocedure calls exceeded")]
    NonTermination(u64),
    #[error("{what} count {count} exceeds the oracle bound {bound}")]
    BoundExceeded {
        what: &'static str,
        count: usize,
        bound: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
