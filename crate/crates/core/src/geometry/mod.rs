//! Points, tangent vectors and structure tensors of `S^{4l+3} × T^{4m}`,
//! the `Z_4` action, and jet-based brackets and exterior derivatives.

mod action;
mod field;
mod frame;
mod jet;
mod point;
mod structure;

pub use action::{action_diag, action_f, action_h, Generator};
pub use field::{
    d_eta_vectors, d_one_form, d_two_form, derivative_of, directional_derivative, lie_bracket,
    lie_bracket_finite_difference, nijenhuis, Extension, OneForm, ScalarField, TwoForm, VectorField,
};
pub use frame::{tangent_basis, StructureFrame};
pub use jet::{Jet, Scalar};
pub use point::{Alpha, AmbientPoint, AmbientVector, ProductPoint, TangentVector, TorusAngle, TANGENCY_TOL};
pub use structure::{Fault, Structure};
