use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("group of order {order} exceeds the bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotHomomorphic(usize, usize),
    #[error("action of element {0} is not invertible")]
    NotInvertible(usize),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {degree} needs window at least {needed}, have {window}")]
    WindowTooSmall { degree: i32, needed: usize, window: usize },
    #[error("coefficients are not invariant under the normal subgroup")]
    CoefficientsNotInvariant,
    #[error("complex has nonzero terms in positive degrees")]
    ComplexNotCoconnective,
    #[error("intermediate rank {rank} exceeds the budget {budget}")]
    RankBudgetExceeded { rank: usize, budget: usize },
    #[error("invalid cocycle: {0}")]
    CocycleInvalid(String),
    #[error("subgroup has infinite index")]
    IndexInfinite,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("class complex did not verify: {0}")]
    ClassComplexUnverified(String),
    #[error("independent routes disagree: {0}")]
    RouteMismatch(String),
    #[error("Weil group data did not verify")]
    NotVerifiedWeilGroup,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
