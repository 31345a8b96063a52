//! Shared dense linear-algebra helpers over complex and real matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

/// Relative asymmetry allowed before an eigensolver input is rejected.
pub const ASYMMETRY_TOL: f64 = 1e-9;

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// (m + m^{*T}) / 2, exactly Hermitian by construction.
pub fn hermitize(m: &CMat) -> CMat {
    let mut h = m.adjoint();
    h += m;
    h.map(|c| c.unscale(2.0))
}

/// (m + m^T) / 2 for complex matrices, exactly symmetric by construction.
pub fn symmetrize(m: &CMat) -> CMat {
    let mut s = m.transpose();
    s += m;
    s.map(|c| c.unscale(2.0))
}

/// (m + m^T) / 2 for real matrices.
pub fn symmetrize_real(m: &RMat) -> RMat {
    let mut s = m.transpose();
    s += m;
    s.unscale(2.0)
}

/// Eigendecomposition of a Hermitian matrix. Rejects inputs whose
/// anti-Hermitian part exceeds `ASYMMETRY_TOL` relative to the matrix scale,
/// then symmetrizes before solving.
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let scale = max_abs(m).max(1.0);
    let asym = max_abs(&(m - m.adjoint()));
    if asym > ASYMMETRY_TOL * scale {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian: anti-Hermitian part {asym:.3e} exceeds {:.3e}",
            ASYMMETRY_TOL * scale
        )));
    }
    let eig = hermitize(m).symmetric_eigen();
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Eigenvalues of a real symmetric matrix, with the same asymmetry guard as
/// [`hermitian_eigen`].
pub fn symmetric_eigenvalues(m: &RMat) -> Result<Vec<f64>> {
    let scale = max_abs_real(m).max(1.0);
    let asym = max_abs_real(&(m - m.transpose()));
    if asym > ASYMMETRY_TOL * scale {
        return Err(Error::Domain(format!(
            "matrix is not symmetric: asymmetry {asym:.3e} exceeds {:.3e}",
            ASYMMETRY_TOL * scale
        )));
    }
    let eig = symmetrize_real(m).symmetric_eigen();
    Ok(eig.eigenvalues.iter().copied().collect())
}

pub fn min_symmetric_eigenvalue(m: &RMat) -> Result<f64> {
    let vals = symmetric_eigenvalues(m)?;
    vals.into_iter()
        .reduce(f64::min)
        .ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))
}

/// Copies `block` into `target` with its upper-left corner at (row, col).
pub fn write_block(target: &mut CMat, row: usize, col: usize, block: &CMat) {
    target
        .view_mut((row, col), (block.nrows(), block.ncols()))
        .copy_from(block);
}

pub fn block_of(source: &CMat, row: usize, col: usize, size: usize) -> CMat {
    source.view((row, col), (size, size)).into_owned()
}
