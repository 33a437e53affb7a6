use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not homogeneous: found weighted degrees {0} and {1}")]
    Inhomogeneous(i64, i64),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("arity mismatch: expected {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("variable index {index} out of range for {nvars} variables")]
    Index { index: usize, nvars: usize },
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("form does not descend: contraction with the radial field is nonzero")]
    NotDescending,
    #[error("form is not integrable: omega ^ d(omega) != 0")]
    NotIntegrable,
    #[error("the zero form does not define a foliation")]
    ZeroForm,
    #[error("residues violate sum(lambda_i * e_i) = 0 (sum is {0})")]
    Resonance(String),
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("ambient too small: {0}")]
    Ambient(String),
    #[error("bracket mismatch in {algebra}: {detail}")]
    BracketMismatch { algebra: String, detail: String },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
