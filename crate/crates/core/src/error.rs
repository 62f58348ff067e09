use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("trivial reaction: reactant equals product ({0})")]
    TrivialReaction(String),
    #[error("duplicate reaction {0}")]
    DuplicateReaction(String),
    #[error("network has no reactions")]
    Empty,
    #[error("species `{0}` appears in no complex")]
    UnusedSpecies(String),
    #[error("complex has {got} coordinates, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("rate literal must be positive, got {0}")]
    NonPositiveLiteral(String),
}

/// Syntax or validation failure in the network text format, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("term {monomial} of f_{species} has a negative coefficient but is not divisible by x_{species}")]
    Infeasible { species: usize, monomial: String },
    #[error("no polynomials given")]
    NoPolynomials,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("expected a one-species network, got {0} species")]
    NotOneSpecies(usize),
    #[error("species index {0} out of range")]
    SpeciesIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MassActionError {
    #[error("unbound rate labels: {}", .0.join(", "))]
    UnboundLabels(Vec<String>),
    #[error("rate `{0}` is not positive")]
    NonPositiveRate(String),
    #[error("point must be strictly positive")]
    NonPositivePoint,
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("point is not a steady state (residual {0:e})")]
    NotSteadyState(f64),
    #[error("species index {0} out of range")]
    SpeciesIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteadyError {
    #[error("binomial reduction needs exactly n+1 = {expected} reactant monomials, found {got}")]
    WrongReactantCount { expected: usize, got: usize },
    #[error("network is not full-dimensional")]
    NotFullDimensional,
    #[error("anchor must be strictly positive with one entry per species")]
    BadAnchor,
    #[error("totals do not match the conservation laws: {0}")]
    BadTotals(String),
    #[error("family parameters out of range: {0}")]
    FamilyRange(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    MassAction(#[from] MassActionError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AcrError {
    #[error("network is not bimolecular")]
    NotBimolecular,
    #[error("network is not one-dimensional")]
    NotOneDimensional,
    #[error("network has {got} species, expected {expected}")]
    SpeciesCount { expected: usize, got: usize },
    #[error("network is not full-dimensional")]
    NotFullDimensional,
    #[error("network has {0} distinct reactant complexes, expected 4")]
    ReactantCount(usize),
    #[error("species index {0} out of range")]
    SpeciesIndex(usize),
    #[error(transparent)]
    MassAction(#[from] MassActionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("enumeration bounds out of range: {0}")]
    OutOfBounds(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("claim could not be evaluated: {0}")]
    Claim(String),
    #[error(transparent)]
    Steady(#[from] SteadyError),
}
