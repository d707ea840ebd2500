use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not in canonical form: {0}")]
    NotCanonical(String),
    #[error("reducible polynomial: {0}")]
    ReduciblePolynomial(String),
    #[error("characteristic mismatch: {0}")]
    CharMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a Galois extension K/Z")]
    NotGalois,
    #[error("operation requires a non-Galois extension K/Z")]
    NotNonGalois,
    #[error("nonzero element of norm zero: the algebra is not a skew field")]
    NotDivisionAlgebra,
    #[error("the transversal is a spread line")]
    TransversalIsSpreadLine,
    #[error("not a spread line")]
    NotSpreadLine,
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("the line is not a member of both chains")]
    PointNotOnBothChains,
    #[error("frame search failed after {0} attempts")]
    FrameSearchFailed(usize),
    #[error("chain members are not in general position")]
    DegenerateSpan,
    #[error("no K-rational line on the quadric section")]
    NoRationalLine,
    #[error("the point lies in the centre of projection")]
    CentreHit,
    #[error("unexpected intersection of dimension {0} with the plane Z")]
    UnexpectedIntersection(usize),
    #[error("the line at infinity has no affine image")]
    InfinityLine,
    #[error("element is not in L°")]
    NotInLCirc,
    #[error("circle is not degenerate")]
    NotDegenerate,
    #[error("circle is not non-degenerate")]
    NotNondegenerate,
    #[error("both parameters are zero")]
    BothZero,
    #[error("point does not lie on the circle u = N(u+iv)")]
    NotOnGamma0,
    #[error("point is not a regular point of the circle")]
    NotRegularPoint,
    #[error("invalid plane: {0}")]
    InvalidPlane(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
}
