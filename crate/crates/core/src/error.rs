use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("subsets belong to different groups")]
    GroupMismatch,

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("operation is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),

    #[error("cocycle identity fails at ({0}, {1}, {2})")]
    CocycleViolation(usize, usize, usize),

    #[error("X must be symmetric and contain the identity")]
    NotSymmetric,

    #[error("element index {0} out of range for order {1}")]
    OutOfRange(usize, usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("set is not a union of atoms of the algebra")]
    NotInAlgebra,

    #[error("algebra is not d-closed")]
    NotDClosed,

    #[error("algebra budget exceeded: {0} atoms > {1}")]
    AtomBudget(usize, usize),

    #[error("not a minimal left ideal")]
    NotMinimalIdeal,

    #[error("semigroup has no G-tags")]
    NoTags,

    #[error("element {0} is not the image of a group element")]
    NotGroupImage(usize),

    #[error("set is not contained in the Ellis group u*M")]
    NotInEllisGroup,

    #[error("horizon too small: n_max = {got}, need n_max >= {need}")]
    Horizon { got: usize, need: usize },

    #[error("error set must be symmetric and closed under conjugation")]
    BadErrorSet,

    #[error("not a morphism: {0}")]
    NotMorphism(String),

    #[error("missing witness: {0}")]
    MissingWitness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("determinant is not 1")]
    Determinant,

    #[error("division by zero")]
    DivisionByZero,

    #[error("tower lacks block or generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown name: {0}")]
    Unknown(String),
}
