use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("cycle detected: `{0}` and `{1}` are mutually below each other")]
    Cycle(String, String),

    #[error("not a lattice: elements `{a}` and `{b}` have no unique {kind}")]
    NotALattice {
        kind: &'static str,
        a: String,
        b: String,
    },

    #[error("poset has no global bottom element")]
    NoBottom,

    #[error("poset has no global top element")]
    NoTop,

    #[error("{what} needs {needed} elements but the cap is {cap} (raise --max-subset-bits)")]
    CapExceeded {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("{what} would materialize {needed} elements, above the fixed ceiling of {cap}")]
    MaterializedTooLarge {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("map table has {got} entries, structure has {expected} elements")]
    SizeMismatch { expected: usize, got: usize },

    #[error("subset is not meet-closed: {witness}")]
    NotMeetClosed { witness: String },

    #[error("subset does not contain the top element")]
    MissingTop,

    #[error("lattice is not a complete Heyting algebra: {witness}")]
    NotHeyting { witness: String },

    #[error("structure is not an ortholattice ({0})")]
    NotOrtholattice(String),

    #[error("map does not preserve all meets (witness pair {0}, {1})")]
    NotInfPreserving(String, String),

    #[error("map does not preserve all joins (witness pair {0}, {1})")]
    NotSupPreserving(String, String),

    #[error("invalid Cartan map: {0}")]
    InvalidCartan(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("verified claim `{claim}` failed: {detail}")]
    Alarm { claim: &'static str, detail: String },
}

impl Error {
    /// Exit code the CLI maps this error to: alarms are claim failures (1),
    /// everything else is an input error (2).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Alarm { .. } => 1,
            _ => 2,
        }
    }
}
