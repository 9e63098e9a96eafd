//! Dense complex linear algebra: the matrix type, products, eigensolvers
//! for unitary and Hermitian input, and random ensembles.

mod eigen;
mod matrix;
pub mod random;

pub use eigen::{
    eig_hermitian, eig_unitary, exp_i_hermitian, hermitian_eigenvalues, log_unitary, principal_arg, EigenSystem,
};
pub use matrix::{adjoint, matmul, ComplexMatrix, MatrixJson};
pub use random::{gue_hermitian, haar_unitary};
