//! Lax operators for gl, sl, s, so and sp, and the function and vector field
//! algebras acting on them.

mod element;
mod kn;
mod member;
mod spec;
mod tyurin;

pub use kn::{kn_function_basis, kn_vector_basis};
pub use element::{vf_action, vf_bracket, LaxElement, VectorField};
pub use member::{
    gl_split, is_connection_form, is_member, kappa, lax_bracket, lax_constraint_system, lax_product, lax_space,
    random_element, random_member, witnesses, Membership,
};
pub use spec::{AlgebraSpec, Family, GBasis, MarkedConfig, TyurinPoint};
pub use tyurin::{tyurin_system, Normalization, TyurinCondition, TyurinSystem, Var};
