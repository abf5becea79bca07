//! Single-qubit Pauli matrices in the `{|↑>, |↓>}` basis (index 0 is spin up).

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, -I, I, ZERO]).unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[1.0, -1.0])
}
