//! Dense numeric kernels shared by the spectral and Sylvester modules.

mod eig;
mod lu;

pub use eig::eigenvalues;
pub use lu::{determinant, lu_factor, LuFactors, PIVOT_REL_TOL};
