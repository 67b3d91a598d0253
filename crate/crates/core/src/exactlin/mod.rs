//! Exact scalar fields and dense linear algebra.

mod field;
mod matrix;
mod system;

pub use field::{is_prime, parse_rational, rational_to_string, Field, PrimeField, Rationals, CHECK_PRIME, DEFAULT_PRIME};
pub use matrix::{EchelonBasis, Matrix};
pub use system::{MatrixSystem, Term};

/// Free functions mirroring the matrix methods.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.kernel_basis()
}

pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> crate::error::Result<Option<Matrix<F>>> {
    a.solve(b)
}

pub fn kron<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> crate::error::Result<Matrix<F>> {
    a.kron(b)
}
