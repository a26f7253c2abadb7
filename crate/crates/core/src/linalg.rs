//! Thin wrappers over the dense complex linear algebra in `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn determinant(m: &CMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

/// `det(I - m)`.
pub fn det_identity_minus(m: &CMatrix) -> Complex64 {
    let n = m.nrows();
    determinant(&(CMatrix::identity(n, n) - m))
}

/// All eigenvalues, sorted by decreasing modulus.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::NoConvergence("Schur decomposition".into()))?;
    let ev = schur.eigenvalues().ok_or_else(|| Error::NoConvergence("complex Schur form is not triangular".into()))?;
    let mut out: Vec<Complex64> = ev.iter().copied().collect();
    out.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(out)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
