//! Exact arithmetic: the field ℚ(i), polynomials and rational functions over it,
//! Laurent jets at finite points and at `∞`, residues, and exact linear algebra.
//!
//! ```
//! use laxalg::exactmath::{laurent_expand, residue_at, Gq, Point, RationalFunction};
//!
//! let f: RationalFunction = "1/(z-1)".parse().unwrap();
//! let jet = laurent_expand(&f, &Point::from(0), 0, 2);
//! assert_eq!(jet.coeff(2), Gq::from_int(-1));
//!
//! let g: RationalFunction = "1/z".parse().unwrap();
//! assert_eq!(residue_at(&g, &Point::Infinity), Gq::from_int(-1));
//! ```

mod jet;
pub mod linalg;
mod matrix;
mod modgcd;
mod point;
mod poly;
mod ratfunc;
mod scalar;

pub use jet::{laurent_expand, ord_at, residue_at, LaurentJet};
pub use matrix::Mat;
pub use point::Point;
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use scalar::{GaussianRational, Gq};

/// Which arithmetic operation [`rf_arithmetic`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Binary arithmetic on rational functions with the result in canonical form.
pub fn rf_arithmetic(
    a: &RationalFunction,
    b: &RationalFunction,
    op: RfOp,
) -> crate::Result<RationalFunction> {
    Ok(match op {
        RfOp::Add => a + b,
        RfOp::Sub => a - b,
        RfOp::Mul => a * b,
        RfOp::Div => a.checked_div(b)?,
    })
}
