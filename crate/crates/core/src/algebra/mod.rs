//! Exact coefficient fields, polynomials, the truncated ring `F[X]/(X^n)`,
//! 2x2 matrices over it and dense exact rank.

pub mod dense;
pub mod field;
pub mod mat2;
pub mod poly;

pub use dense::{DenseMat, PivotOrder};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use mat2::Mat2Trunc;
pub use poly::{Poly, TruncatedPoly, Valuation};
