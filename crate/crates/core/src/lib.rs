//! Compact 3-quasi-Sasakian manifolds `M_{l,m} = (S^{4l+3} × T^{4m}) / Z_4`.
//!
//! - [`quatlin`]: quaternion arithmetic and the operators `J_α`, `R_i`.
//! - [`geometry`]: the structure tensors, the `Z_4` action, brackets and
//!   exterior derivatives by forward-mode differentiation.
//! - [`verifier`]: seeded pointwise campaigns that check every structural
//!   identity and emit a serializable report.
//! - [`cohomology`]: exact invariant cohomology and Betti numbers of the
//!   quotient.
//! - [`obstruction`]: Poincaré polynomials, their coefficient-wise order and
//!   the argument that `M_{1,1}` is not a product.

pub mod cohomology;
pub mod error;
pub mod geometry;
pub mod obstruction;
pub mod quatlin;
pub mod verifier;

pub use error::{Error, Result};
