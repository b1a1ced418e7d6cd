use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while loading or computing.
///
/// Witnesses are carried as element names so that reports can be printed
/// without access to the structure that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("malformed table: {0}")]
    TableShape(String),

    #[error("multiplication is not associative: ({i}*{j})*{k} != {i}*({j}*{k})")]
    NonAssociative { i: String, j: String, k: String },

    #[error("not an inverse semigroup: {element} has {candidates} inverse candidates")]
    NotInverseSemigroup { element: String, candidates: usize },

    #[error("declared zero {zero} does not absorb {witness}")]
    ZeroViolation { zero: String, witness: String },

    #[error("declared identity {identity} does not fix {witness}")]
    IdentityViolation { identity: String, witness: String },

    #[error("size limit exceeded for {what}: {size} > {cap}")]
    SizeLimit {
        what: String,
        size: usize,
        cap: usize,
    },

    #[error("{element} does not satisfy the domain condition ({detail})")]
    DomainMismatch { element: String, detail: String },

    #[error("cover {cover} of {of} is not contained in the down-set of {of}")]
    NotDownSet { of: String, cover: String },

    #[error("structures are defined over different semigroups")]
    BaseMismatch,

    #[error("conjugation closure fails: s={s}, e={e}, cover {cover}")]
    ConjugationClosureFails { s: String, e: String, cover: String },

    #[error("the semigroup has no zero")]
    NoZero,

    #[error("not a semigroup homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotHomomorphism { a: String, b: String },

    #[error("map is not idempotent-pure: {element} is sent to an idempotent")]
    NotIdempotentPure { element: String },

    #[error("not a pseudogroup: {law} fails at {witness}")]
    NotAPseudogroup { law: String, witness: String },

    #[error("not a frame: {0}")]
    NotAFrame(String),

    #[error("not a semilattice: {0}")]
    NotASemilattice(String),

    #[error(
        "closure left the compatible world: {x} and {y} are incompatible in the closure of {ideal}"
    )]
    CompatibilityLost { ideal: String, x: String, y: String },

    #[error("nucleus axiom {axiom} fails at {witness}")]
    NucleusAxiomFails { axiom: String, witness: String },

    #[error("{element} is not a compatible join of elements of the subsemigroup")]
    NotGenerating { element: String },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("groupoid axiom {axiom} fails at {witness}")]
    GroupoidAxiom { axiom: String, witness: String },

    #[error("not etale: {0}")]
    NotEtale(String),

    #[error("space is not T1 and sober")]
    NotT1Sober,

    #[error("unknown name {0:?}")]
    UnknownName(String),

    /// A property that holds by theorem failed on a concrete instance.
    #[error("property {property} failed: {witness}")]
    PropertyFailed { property: String, witness: String },
}

impl Error {
    pub(crate) fn size(what: impl Into<String>, size: usize, cap: usize) -> Self {
        Error::SizeLimit {
            what: what.into(),
            size,
            cap,
        }
    }

    pub(crate) fn property(property: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::PropertyFailed {
            property: property.into(),
            witness: witness.into(),
        }
    }
}
