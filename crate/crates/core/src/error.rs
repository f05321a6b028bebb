use crate::expr::{DomainError, ParseError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters for sigma = {case}: requires {constraint}")]
    InvalidParameters { case: String, constraint: String },
    #[error("degree {ell} is beyond the cutoff (largest admissible degree: {max_degree})")]
    DegreeBeyondCutoff { ell: usize, max_degree: usize },
    #[error("recursion denominator vanishes at j = {j} for degree {ell}")]
    DegenerateRecursion { ell: usize, j: usize },
    #[error("derivative order {m} exceeds degree {ell}")]
    OrderExceedsDegree { m: usize, ell: usize },
    #[error("no real-parameter classical counterpart for sigma = {0}")]
    UnsupportedCorrespondence(String),
    #[error("singular point at {at}")]
    SingularPoint { at: f64 },
    #[error("quadrature did not converge (estimate {estimate:e} after {nodes} nodes)")]
    QuadratureNoConverge { estimate: f64, nodes: usize },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no closed-form antiderivative for B/(2A) = {0}")]
    NonIntegrableGauge(String),
    #[error("x' = 1/sqrt(I) has no closed-form solution for I = {0}")]
    MapNotClosedForm(String),
    #[error("not implemented: {0}")]
    Unimplemented(String),
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("no admissible root: {0}")]
    NoAdmissibleRoot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
