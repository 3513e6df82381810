//! tamekit: a desk-scale computational toolkit for tame discrete sets in
//! complex linear algebraic groups.
//!
//! The crate turns a family of constructive existence arguments into finite,
//! checkable procedures:
//!
//! * [`space`] — ambient spaces (`C^n`, `SL_n(C)`, `(C^*)^n`), canonical
//!   exhaustion functions, discreteness certificates;
//! * [`nevanlinna`] — integrated counting functions, threshold sequences, and
//!   the two-way translation between growth functions and thresholds;
//! * [`automorphisms`] — shears and overshears of `C^n` driven by Lagrange
//!   interpolation, including the "send a finite set to the axis" pipeline;
//! * [`rootsys`] — root systems of the classical families, the positive
//!   subsets avoiding a simple root, and spanning certificates for subgroup
//!   pairs in type A;
//! * [`sl2`] — unipotent conjugation in closed form, word-ball enumeration,
//!   and first-column projection discreteness;
//! * [`arithmetic`] — imaginary-quadratic integer rings, exact embeddings,
//!   and denominator-clearing integrality certificates for polynomial maps;
//! * [`generators`] — two-sided tameness partitions, torus factor splits,
//!   and the dense-image counterexample generator on `(C^*)^n`.
//!
//! Exact mode works over Gaussian rationals (plus five imaginary-quadratic
//! rings in [`arithmetic`]); float mode uses `f64` complex arithmetic with
//! documented tolerances.

pub mod arithmetic;
pub mod automorphisms;
pub mod error;
pub mod exact;
pub mod generators;
pub mod linalg;
pub mod nevanlinna;
pub mod rootsys;
pub mod schema;
pub mod sl2;
pub mod space;

pub use error::{Error, ErrorClass, Result};
