use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cover relation has a cycle: closure identifies {0} and {1}")]
    Cycle(usize, usize),
    #[error("element {0} out of range for poset of size {1}")]
    BadElement(usize, usize),
    #[error("size bound exceeded: {what} needs {needed}, bound is {bound}")]
    Size {
        what: &'static str,
        needed: usize,
        bound: usize,
    },
    #[error("degenerate algebra: empty dual poset (0 = 1)")]
    Degenerate,
    #[error("map is not a p-morphism")]
    NotPMorphism,
    #[error("p-morphism is not surjective")]
    NotSurjective,
    #[error("p-morphism targets differ")]
    TargetMismatch,
    #[error("{law} fails at {witness}")]
    Axiom { law: &'static str, witness: String },
    #[error("unbound variable {0} in term evaluation")]
    UnboundVariable(char),
    #[error("element is not a principal up-set")]
    NotPrincipal,
    #[error("dual poset is not a forest")]
    NotForest,
    #[error("cannot split the zero element")]
    ZeroElement,
    #[error("witness construction failed at stage {stage}: {detail}")]
    Construction { stage: &'static str, detail: String },
    #[error("only {found} one-generated types below dual bound {bound}, need {need}")]
    InsufficientFamily {
        found: usize,
        need: usize,
        bound: usize,
    },
    #[error("order does not extend the induced order on join-primes")]
    NotExtension,
    #[error("independence failed for amalgam: witness pair indices {0:?}")]
    IndependenceFailure((usize, usize)),
    #[error("hom is not induced by a p-morphism (source map not meet-closed at point {0})")]
    NotDualizable(usize),
    #[error("io error: {0}")]
    Io(String),
    #[error("format error at line {line}: {detail}")]
    Format { line: usize, detail: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
