//! Wreath product of matrices.
//!
//! For square complex `A` (order n) and `B` (order m), the wreath product
//! `A wr B` is a structured square matrix of order n*m^n. This crate
//! constructs it sparsely, exposes its algebraic identities and per-block
//! anatomy, reduces its spectrum to m^n eigenproblems of order n when `B`
//! is circulant, builds lamplighter random-walk transition matrices from
//! wreath products of regular graphs, and solves the generalized Sylvester
//! systems whose coefficient matrix the product is.
//!
//! Everything is a pure function over immutable values; matrices can be
//! shared freely across threads.

pub mod error;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod spectral;
pub mod sylvester;
pub mod tensor;
pub mod wreath;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tensor::{DenseMatrix, SparseMatrix};
