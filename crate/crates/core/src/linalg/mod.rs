//! Dense complex linear algebra: matrices, Kronecker products, Hermitian
//! eigendecomposition and partial traces over qubits.

mod eig;
mod matrix;
pub mod pauli;
mod trace;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianSpectrum, HERMITIAN_TOL, JACOBI_TOL};
pub use matrix::{kron, kron_with_cap, ComplexMatrix, DIM_CAP};
pub use trace::partial_trace;

pub use num_complex::Complex64;
