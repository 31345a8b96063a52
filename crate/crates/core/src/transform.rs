//! Bogoliubov transforms: pairs of matrices (U, V) mapping bosonic mode
//! operators as b = U a + V a^dag, constrained by
//!
//! ```text
//! U V^T = V U^T        and        U U^{*T} - V V^{*T} = id .
//! ```
//!
//! V = 0 reduces to an ordinary unitary (passive linear-optical) map; V != 0
//! mixes annihilation and creation operators and is the source of every
//! quantum feature evaluated in [`crate::observables`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layout::CoherentInput;
use crate::linalg::{hermitian_eigen, is_finite, max_abs, symmetrize, write_block, CMat, CVec};

/// Default absolute tolerance for constraint residuals at unit scale; the
/// check in [`BogoliubovTransform::validate`] scales it by the magnitude of
/// the matrix products so that long compositions remain comparable.
pub const DEFAULT_VALIDATION_TOL: f64 = 1e-10;

/// Residuals of the two defining constraints, measured in max-norm.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    /// max |U V^T - V U^T|
    pub pairing_residual: f64,
    /// max |U U^{*T} - V V^{*T} - id|
    pub metric_residual: f64,
    /// Magnitude of the matrix products entering the constraints; residual
    /// thresholds scale with it.
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Polar form U = W (id - S S^*)^{-1/2}, V = W (id - S S^*)^{-1/2} S with
/// unitary W and symmetric S.
#[derive(Debug, Clone)]
pub struct PolarForm {
    pub w: CMat,
    pub s: CMat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTransform {
    u: CMat,
    v: CMat,
    n: usize,
}

impl BogoliubovTransform {
    /// Wraps (U, V) without checking the constraints; dimensions and
    /// finiteness are still enforced.
    pub fn new(u: CMat, v: CMat) -> Result<Self> {
        if !u.is_square() || u.shape() != v.shape() {
            return Err(Error::DimensionMismatch(format!(
                "U is {}x{}, V is {}x{}; both must be square and equal",
                u.nrows(),
                u.ncols(),
                v.nrows(),
                v.ncols()
            )));
        }
        if !is_finite(&u) || !is_finite(&v) {
            return Err(Error::Domain("non-finite entry in transform".into()));
        }
        let n = u.nrows();
        Ok(Self { u, v, n })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            u: CMat::identity(n, n),
            v: CMat::zeros(n, n),
            n,
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    /// True when V vanishes identically, i.e. the map is purely unitary.
    pub fn is_linear(&self) -> bool {
        self.v.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Checks both constraints at tolerance `tol`, scaled by the magnitude of
    /// the products U U^{*T}, V V^{*T}, U V^T so that composed walks with
    /// large entries are judged relative to their own scale.
    pub fn validate(&self, tol: f64) -> ValidityReport {
        let uvt = &self.u * self.v.transpose();
        let uu = &self.u * self.u.adjoint();
        let vv = &self.v * self.v.adjoint();
        let pairing_residual = max_abs(&(&uvt - uvt.transpose()));
        let metric_residual = max_abs(&(&uu - &vv - CMat::identity(self.n, self.n)));
        let scale = max_abs(&uu).max(max_abs(&vv)).max(max_abs(&uvt)).max(1.0);
        let passed = pairing_residual <= tol * scale && metric_residual <= tol * scale;
        ValidityReport {
            pairing_residual,
            metric_residual,
            scale,
            tolerance: tol,
            passed,
        }
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.validate(tol).passed
    }

    /// Applies `first`, then `second`. Blockwise this is
    /// U = U2 U1 + V2 V1^*,  V = U2 V1 + V2 U1^*.
    pub fn compose(second: &Self, first: &Self) -> Result<Self> {
        if second.n != first.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose transforms on {} and {} modes",
                second.n, first.n
            )));
        }
        let u = &second.u * &first.u + &second.v * first.v.conjugate();
        let v = &second.u * &first.v + &second.v * first.u.conjugate();
        Self::new(u, v)
    }

    /// Inverse in block form (U^{*T}, -V^T), valid whenever the constraints
    /// hold.
    pub fn inverse(&self) -> Result<Self> {
        let report = self.validate(DEFAULT_VALIDATION_TOL);
        if !report.passed {
            return Err(Error::InvalidTransform(format!(
                "inverse of a transform violating the constraints (pairing {:.3e}, metric {:.3e})",
                report.pairing_residual, report.metric_residual
            )));
        }
        Self::new(self.u.adjoint(), -self.v.transpose())
    }

    /// Output coherent amplitudes beta = U alpha + V alpha^*.
    ///
    /// This map is additive in alpha but not homogeneous over complex scalars
    /// when V != 0, since the conjugation on alpha^* picks up c^* rather
    /// than c.
    pub fn apply_amplitudes(&self, input: &CoherentInput) -> Result<CVec> {
        if input.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "input has {} amplitudes, transform acts on {} modes",
                input.len(),
                self.n
            )));
        }
        let alpha = input.amplitudes();
        Ok(&self.u * alpha + &self.v * alpha.conjugate())
    }

    /// Full doubled matrix [[U, V], [V^*, U^*]] acting on the stacked
    /// operator vector [a; a^dag].
    pub fn full_matrix(&self) -> CMat {
        let n = self.n;
        let mut full = CMat::zeros(2 * n, 2 * n);
        write_block(&mut full, 0, 0, &self.u);
        write_block(&mut full, 0, n, &self.v);
        write_block(&mut full, n, 0, &self.v.conjugate());
        write_block(&mut full, n, n, &self.u.conjugate());
        full
    }

    /// Splits off a unitary W and a symmetric S with
    /// U = W (id - S S^*)^{-1/2} and V = U S. The inverse square root is
    /// computed through the Hermitian eigendecomposition of S S^*.
    pub fn polar_decompose(&self) -> Result<PolarForm> {
        let lu = self.u.clone().lu();
        let s_raw = lu.solve(&self.v).ok_or_else(|| {
            Error::SingularMatrix("U block is singular; polar form undefined".into())
        })?;
        let scale = max_abs(&s_raw).max(1.0);
        let asym = max_abs(&(&s_raw - s_raw.transpose()));
        if asym > 1e-8 * scale {
            return Err(Error::InvalidTransform(format!(
                "U^-1 V deviates from symmetry by {asym:.3e}; input does not satisfy the pairing constraint"
            )));
        }
        let s = symmetrize(&s_raw);
        let ss = &s * s.conjugate();
        let (eigenvalues, q) = hermitian_eigen(&ss)?;
        let mut sqrt_diag = CMat::zeros(self.n, self.n);
        for (i, &h) in eigenvalues.iter().enumerate() {
            let clipped = h.max(0.0);
            if clipped >= 1.0 {
                return Err(Error::InvalidTransform(format!(
                    "S S^* has eigenvalue {h} >= 1; transform violates the metric constraint"
                )));
            }
            sqrt_diag[(i, i)] = Complex64::new((1.0 - clipped).sqrt(), 0.0);
        }
        let root = &q * sqrt_diag * q.adjoint();
        let w = &self.u * root;
        Ok(PolarForm { w, s })
    }
}
