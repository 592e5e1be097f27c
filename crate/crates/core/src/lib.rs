//! Exact Clifford-algebra machinery for deciding when an orthogonal
//! transformation of an infinite-dimensional quadratic space extends to an
//! *inner* automorphism of its Clifford algebra.
//!
//! Everything runs over the Gaussian rationals ℚ(i), so every verdict,
//! witness, and subspace in the crate is exact. Infinite-dimensional
//! transformations enter through a finite model: an orthogonal block acting
//! on the first `m` coordinates plus a global sign on every coordinate
//! beyond it. The `innerness` module answers the decision question two
//! independent ways — a closed-form criterion and an explicit conjugating
//! witness solved from the intertwining equations — and insists they agree.

pub mod bogolyubov;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod finitary;
pub mod innerness;
pub mod linalg;
pub mod quadratic;
pub mod sampling;
pub mod scalar;
pub mod selftest;

pub use bogolyubov::BogolyubovAction;
pub use clifford::{Algebra, Blade, Multivector, Parity};
pub use error::Error;
pub use finitary::{EigenData, FinitaryInput, FinitaryOrthogonal, Sign};
pub use innerness::{CentralizerBasis, InnernessVerdict};
pub use quadratic::{QuadraticSpace, Subspace};
pub use scalar::{Rational, Scalar};

/// Hard cap on generator count: a blade must fit one machine word (with two
/// bits to spare for shifts in the product kernel).
pub const MAX_GENERATORS: usize = 62;
