//! Exact rational scalars, matrices and subspaces.

mod elim;
mod mat;
mod scalar;
mod subspace;

pub use elim::{row_reduce, Echelon};
pub use mat::Mat;
pub use scalar::Scalar;
pub(crate) use subspace::matrix_side;
pub use subspace::Subspace;
