//! Divisors on the sphere, Riemann–Roch spaces with linear side conditions, and
//! the divisors that define the homogeneous subspaces.

mod divisor;
mod prescription;
mod sections;

pub use divisor::{rr_dim, Divisor};
pub use prescription::{grading_divisor, grading_divisor_io, GradingPrescription};
pub use sections::{section_space, solve_system, ConstraintSystem, LinearCondition, SectionSpace, Slot};
