//! Exact computations in quaternion skew fields and the chain geometry of
//! their projective lines.

pub mod circle;
pub mod error;
pub mod fieldtower;
pub mod klein;
pub mod linalg;
pub mod poly2;
pub mod quaternions;
pub mod scalar;
pub mod spread;

pub use circle::{AffLine, AffMap, AffinePoint, BaerParam, Circle, HermitianVariety, Trace};
pub use error::{Error, Result};
pub use fieldtower::{ctx_f2, ctx_q, AlgebraContext, KElement};
pub use klein::{BaerFrame, ChainSpace, CircleKind, PluckerVec};
pub use poly2::Poly2;
pub use quaternions::LElement;
pub use scalar::{F2RatFunc, Rational, Scalar, ZKind};
pub use spread::{Chain, LineP3K, PointP1L, PointP3K};
