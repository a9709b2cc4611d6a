//! Exact arithmetic and elliptic-curve searches over the nine imaginary
//! quadratic fields of class number one.
//!
//! Everything is built on [`QuadInt`], an element of the ring of integers in
//! coordinates over the basis `(1, w)`. Curves live in [`curve_models`]; the
//! family enumerations are in [`cm_families`], [`odd_torsion`],
//! [`two_torsion`] and [`mod2_square_disc`].

pub mod cm_families;
pub mod curve_models;
pub mod field_arith;
pub mod mod2_square_disc;
pub mod odd_torsion;
pub mod poly;
pub mod records;
pub mod two_torsion;

mod error;

pub use curve_models::{AbModel, Invariants, Kodaira, LocalData, Reduction, WeierstrassModel};
pub use error::{Error, Result};
pub use field_arith::{Field, FieldCtx, PrimeElement, QuadFrac, QuadInt, Splitting};
pub use records::{Conductor, CurveRecord};

/// The nine values of `d` for which `Q(sqrt(-d))` has class number one.
pub const NINE_FIELDS: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];
