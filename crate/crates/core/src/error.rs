use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("leaf index {index} out of range 1..={leaves}")]
    LeafIndexOutOfRange { index: usize, leaves: usize },

    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("elements are defined over different subgroups H")]
    SubgroupMismatch,

    #[error("word {0} has no domain leaf address as a prefix")]
    WordTooShallow(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("diagram is not reduced")]
    NotReduced,

    #[error("expected a (1,1)-strand diagram, found ({0},{1})")]
    NotOneOne(usize, usize),

    #[error("cannot glue {0} sinks onto {1} sources")]
    CountMismatch(usize, usize),

    #[error("redex is not present in the diagram: {0}")]
    StaleRedex(String),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("cannot close a ({0},{1})-strand diagram")]
    UnbalancedClosure(usize, usize),

    #[error("parallel paths carry different winding weights: {0}")]
    WeightMismatch(String),

    #[error("reduction revisited a diagram; trace:\n{0}")]
    Cycling(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(field: &str, message: impl Into<String>) -> Self {
        Error::Parse { field: field.to_string(), message: message.into() }
    }
}
