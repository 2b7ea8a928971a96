//! Exact computation with multipoint Lax operator algebras on the Riemann sphere.
//!
//! Everything is done over the Gaussian rationals ℚ(i) with rational functions
//! in one variable `z`; there is no floating point anywhere.

pub mod classify;
pub mod cocycles;
pub mod connection;
pub mod error;
pub mod exactmath;
pub mod geometry;
pub mod grading;
pub mod laxalgebra;

pub use error::{MathError, Result};

/// The guide in `book/src`, compiled so that its examples run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    pub mod arithmetic {}
    #[doc = include_str!("../../../book/src/configurations.md")]
    pub mod configurations {}
    #[doc = include_str!("../../../book/src/grading.md")]
    pub mod grading {}
    #[doc = include_str!("../../../book/src/cocycles.md")]
    pub mod cocycles {}
    #[doc = include_str!("../../../book/src/classification.md")]
    pub mod classification {}
}
