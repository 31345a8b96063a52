//! Walk propagation over t steps through two independent engines.
//!
//! The dense engine iterates the single-step composition. The spectral
//! engine diagonalizes the cyclic shift with a discrete Fourier transform,
//! reducing each wavenumber to a 2x2 invariant block whose t-th power (or
//! logarithm) follows from the closed 2x2 matrix-function formula. Real t is
//! permitted and defines the continuous evolution generated by the matrix
//! logarithm of the single step.

use nalgebra::Matrix2;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{block_of, max_abs, write_block, CMat};
use crate::transform::BogoliubovTransform;
use crate::walk::CoinSpec;

type CMat2 = Matrix2<Complex64>;

/// Below this eigenvalue splitting the 2x2 matrix function switches to its
/// removable-singularity derivative form.
pub const DEGENERATE_EPS: f64 = 1e-8;

/// Entries whose hyperbolic growth would exceed this magnitude abort the
/// spectral evaluation instead of overflowing silently.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Unitary DFT matrix F = [omega^{kx}/sqrt(d)] with omega = exp(2 pi i / d);
/// symmetric, with inverse F^*.
pub fn dft_matrix(d: usize) -> CMat {
    let norm = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, d, |k, x| {
        // reduce k*x mod d before forming the angle to keep entries on exact
        // roots of unity
        let phase = TAU * ((k * x) % d) as f64 / d as f64;
        Complex64::from_polar(norm, phase)
    })
}

/// Applies an analytic function to a 2x2 matrix through its eigenvalues
/// w +- eps:
///
/// ```text
/// f(M) = [f(w+eps)+f(w-eps)]/2 id + [f(w+eps)-f(w-eps)]/(2 eps) (M - w id)
/// ```
///
/// with the derivative form f(w) id + f'(w) (M - w id) once |eps| drops
/// below [`DEGENERATE_EPS`].
pub fn matrix_function_2x2(
    m: &CMat2,
    f: impl Fn(Complex64) -> Complex64,
    df: impl Fn(Complex64) -> Complex64,
) -> Result<CMat2> {
    let w = (m[(0, 0)] + m[(1, 1)]) * Complex64::new(0.5, 0.0);
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let eps = (w * w - det).sqrt();
    let (mean, ratio) = if eps.norm() < DEGENERATE_EPS {
        (f(w), df(w))
    } else {
        let f_plus = f(w + eps);
        let f_minus = f(w - eps);
        (
            (f_plus + f_minus) * Complex64::new(0.5, 0.0),
            (f_plus - f_minus) / (eps * Complex64::new(2.0, 0.0)),
        )
    };
    let mut out = m - CMat2::identity() * w;
    out *= ratio;
    out += CMat2::identity() * mean;
    if out.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Domain(
            "matrix function is undefined at an eigenvalue of the block".into(),
        ));
    }
    Ok(out)
}

fn omega(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k as f64 / d as f64)
}

fn pow_t(t: f64) -> impl Fn(Complex64) -> Complex64 {
    move |lambda| (lambda.ln() * t).exp()
}

fn pow_t_derivative(t: f64) -> impl Fn(Complex64) -> Complex64 {
    move |lambda| (lambda.ln() * (t - 1.0)).exp() * t
}

fn check_propagation_args(d: usize, t: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionMismatch(
            "walk needs at least two positions".into(),
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("step count {t} must be >= 0")));
    }
    Ok(())
}

/// Closed-form t-step propagator of the squeezer-coin walk with real
/// parameters mu = cosh(xi), nu = sinh(xi).
pub fn spectral_propagator_pdc(d: usize, mu: f64, nu: f64, t: f64) -> Result<BogoliubovTransform> {
    check_propagation_args(d, t)?;
    let mu_c = Complex64::new(mu, 0.0);
    let nu_c = Complex64::new(nu, 0.0);
    CoinSpec::Pdc { mu: mu_c, nu: nu_c }.check_constraint()?;

    // The powered block of the (a_+, a_-^dag) pair is taken as computed; the
    // partner pair (a_-, a_+^dag) carries its conjugate mirror, which is what
    // keeps exp(t G) inside the Bogoliubov family for fractional t even when
    // step eigenvalues are negative reals. At integer t the mirror coincides
    // with the direct entries.
    let mut a_fwd = CMat::zeros(d, d);
    let mut b_fwd = CMat::zeros(d, d);
    let mut a_bwd = CMat::zeros(d, d);
    let mut b_bwd = CMat::zeros(d, d);
    let f = pow_t(t);
    let df = pow_t_derivative(t);
    for k in 0..d {
        let w = omega(d, k);
        let cos = w.re * mu;
        let disc = cos * cos - 1.0;
        let eps = Complex64::new(disc, 0.0).sqrt();
        let xi_k = (Complex64::new(cos, 0.0) + eps).ln();
        if t * xi_k.re.abs() > OVERFLOW_LIMIT.ln() {
            return Err(Error::Overflow(format!(
                "cosh(t Xi) exceeds {OVERFLOW_LIMIT:e} at wavenumber {k}"
            )));
        }
        let block = CMat2::new(w * mu_c, w * nu_c, w.conj() * nu_c, w.conj() * mu_c);
        let powered = matrix_function_2x2(&block, &f, &df)?;
        a_fwd[(k, k)] = powered[(0, 0)];
        b_fwd[(k, k)] = powered[(0, 1)];
        a_bwd[(k, k)] = powered[(1, 1)].conj();
        b_bwd[(k, k)] = powered[(1, 0)].conj();
    }

    let fmat = dft_matrix(d);
    let fstar = fmat.conjugate();
    let n = 2 * d;
    let mut u = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    write_block(&mut u, 0, 0, &(&fstar * &a_fwd * &fmat));
    write_block(&mut u, d, d, &(&fmat * &a_bwd * &fstar));
    write_block(&mut v, 0, d, &(&fstar * &b_fwd * &fmat));
    write_block(&mut v, d, 0, &(&fmat * &b_bwd * &fstar));
    BogoliubovTransform::new(u, v)
}

/// Closed-form t-step propagator of the beam-splitter-coin walk with real
/// parameters tau = cos(theta), rho = sin(theta). The result has V = 0 for
/// all t.
pub fn spectral_propagator_bs(d: usize, tau: f64, rho: f64, t: f64) -> Result<BogoliubovTransform> {
    check_propagation_args(d, t)?;
    let tau_c = Complex64::new(tau, 0.0);
    let rho_c = Complex64::new(rho, 0.0);
    CoinSpec::Bs {
        tau: tau_c,
        rho: rho_c,
    }
    .check_constraint()?;

    // per-wavenumber 2x2 powers [[a, b], [-b^*, a^*]]
    let mut blocks = Vec::with_capacity(d);
    let f = pow_t(t);
    let df = pow_t_derivative(t);
    for k in 0..d {
        let w = omega(d, k);
        let block = CMat2::new(w * tau_c, w * rho_c, -w.conj() * rho_c, w.conj() * tau_c);
        blocks.push(matrix_function_2x2(&block, &f, &df)?);
    }

    let fmat = dft_matrix(d);
    let fstar = fmat.conjugate();
    let n = 2 * d;
    let mut u = CMat::zeros(n, n);
    for (bi, bj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let diag = CMat::from_fn(d, d, |r, c| {
            if r == c {
                blocks[r][(bi, bj)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        write_block(&mut u, bi * d, bj * d, &(&fstar * diag * &fmat));
    }
    BogoliubovTransform::new(u, CMat::zeros(n, n))
}

/// t-fold composition of a single step; the reference engine for integer
/// step counts.
pub fn evolve_dense(step: &BogoliubovTransform, t: usize) -> Result<BogoliubovTransform> {
    let mut total = BogoliubovTransform::identity(step.modes());
    for _ in 0..t {
        total = BogoliubovTransform::compose(step, &total)?;
    }
    Ok(total)
}

/// Continuous-evolution generator G = ln(single step) together with the
/// wavenumbers whose step eigenvalues lie on the negative real axis, where
/// the principal logarithm is discontinuous. exp(G) reproduces the single
/// step, and exp(t G) agrees with the closed-form propagators because both
/// evaluate the same principal branch per eigenvalue.
#[derive(Debug, Clone)]
pub struct Generator {
    /// 2n x 2n matrix acting on the stacked operator vector [a; a^dag].
    pub matrix: CMat,
    pub branch_cut_wavenumbers: Vec<usize>,
}

/// Fourier sandwich patterns of the two walk families. `left`/`right` list,
/// per d-sized slot, whether the block of the outer factors is F^* (true)
/// or F (false).
#[derive(Debug, Clone, Copy)]
enum WalkFamily {
    Squeezer,
    BeamSplitter,
}

impl WalkFamily {
    fn left(self) -> [bool; 4] {
        match self {
            WalkFamily::Squeezer => [true, false, false, true],
            WalkFamily::BeamSplitter => [true, true, false, false],
        }
    }

    fn right(self) -> [bool; 4] {
        let l = self.left();
        [!l[0], !l[1], !l[2], !l[3]]
    }

    /// The invariant pair containing the a_+ row; its partner pair is the
    /// conjugate mirror under the slot map a <-> a^dag.
    fn primary_pair(self) -> (usize, usize) {
        match self {
            WalkFamily::Squeezer => (0, 3),
            WalkFamily::BeamSplitter => (0, 1),
        }
    }
}

/// Slot of the conjugate operator: a_{+,-} <-> a_{+,-}^dag.
fn conj_slot(s: usize) -> usize {
    (s + 2) % 4
}

fn sandwich(full: &CMat, d: usize, slots_left: [bool; 4], slots_right: [bool; 4]) -> CMat {
    let fmat = dft_matrix(d);
    let fstar = fmat.conjugate();
    let pick = |star: bool| if star { &fstar } else { &fmat };
    let mut out = CMat::zeros(4 * d, 4 * d);
    for (bi, &left) in slots_left.iter().enumerate() {
        for (bj, &right) in slots_right.iter().enumerate() {
            let block = block_of(full, bi * d, bj * d, d);
            let prod = pick(left) * block * pick(right);
            write_block(&mut out, bi * d, bj * d, &prod);
        }
    }
    out
}

fn off_diagonal_mass(central: &CMat, d: usize) -> f64 {
    let mut worst = 0.0_f64;
    for bi in 0..4 {
        for bj in 0..4 {
            for r in 0..d {
                for c in 0..d {
                    if r != c {
                        worst = worst.max(central[(bi * d + r, bj * d + c)].norm());
                    }
                }
            }
        }
    }
    worst
}

pub fn generator(step: &BogoliubovTransform) -> Result<Generator> {
    let n = step.modes();
    if !n.is_multiple_of(2) || n < 4 {
        return Err(Error::DimensionMismatch(format!(
            "generator needs a two-coin walk transform, got {n} modes"
        )));
    }
    let d = n / 2;
    let full = step.full_matrix();
    let scale = max_abs(&full).max(1.0);

    let mut chosen = None;
    for family in [WalkFamily::Squeezer, WalkFamily::BeamSplitter] {
        // invert the family's Fourier sandwich: C = L^-1 full R^-1, where
        // taking the opposite star pattern inverts each diagonal slot
        let central = sandwich(&full, d, family.right(), family.left());
        if off_diagonal_mass(&central, d) <= 1e-8 * scale {
            chosen = Some((family, central));
            break;
        }
    }
    let (family, central) = chosen.ok_or_else(|| {
        Error::InvalidTransform(
            "transform is not Fourier-diagonal in either cyclic walk family".into(),
        )
    })?;

    // Take the principal log on the primary invariant pair; the partner
    // pair gets the conjugate mirror, which makes G a Bogoliubov-family
    // generator (and exp(t G) consistent with the spectral engines) even
    // when step eigenvalues sit on the negative real axis.
    let (s0, s1) = family.primary_pair();
    let mut log_central = CMat::zeros(4 * d, 4 * d);
    let mut branch_cut = Vec::new();
    for k in 0..d {
        let block = CMat2::new(
            central[(s0 * d + k, s0 * d + k)],
            central[(s0 * d + k, s1 * d + k)],
            central[(s1 * d + k, s0 * d + k)],
            central[(s1 * d + k, s1 * d + k)],
        );
        // Walk-family blocks have exactly real trace and unit determinant;
        // the sandwich products leave imaginary rounding dust on both, which
        // would push negative real eigenvalues across the log branch cut.
        // Snap them before forming the eigenvalues.
        let w_raw = (block[(0, 0)] + block[(1, 1)]) * Complex64::new(0.5, 0.0);
        let det_raw = block[(0, 0)] * block[(1, 1)] - block[(0, 1)] * block[(1, 0)];
        if w_raw.im.abs() > 1e-9 * scale || det_raw.im.abs() > 1e-9 * scale.powi(2) {
            return Err(Error::InvalidTransform(format!(
                "wavenumber {k} block has complex trace or determinant; not a cyclic walk step"
            )));
        }
        let w = Complex64::new(w_raw.re, 0.0);
        let eps = Complex64::new(w_raw.re * w_raw.re - det_raw.re, 0.0).sqrt();
        for lambda in [w + eps, w - eps] {
            if lambda.norm() < 1e-300 {
                return Err(Error::Domain(format!(
                    "zero step eigenvalue at wavenumber {k}; logarithm undefined"
                )));
            }
            if lambda.re < 0.0 && lambda.im == 0.0 {
                branch_cut.push(k);
            }
        }
        let (mean, ratio) = if eps.norm() < DEGENERATE_EPS {
            (w.ln(), w.inv())
        } else {
            let log_plus = (w + eps).ln();
            let log_minus = (w - eps).ln();
            (
                (log_plus + log_minus) * Complex64::new(0.5, 0.0),
                (log_plus - log_minus) / (eps * Complex64::new(2.0, 0.0)),
            )
        };
        let mut logged = block - CMat2::identity() * w;
        logged *= ratio;
        logged += CMat2::identity() * mean;
        if logged.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain(format!(
                "logarithm undefined at wavenumber {k}"
            )));
        }
        for (row, slot_r) in [(0, s0), (1, s1)] {
            for (col, slot_c) in [(0, s0), (1, s1)] {
                let value = logged[(row, col)];
                log_central[(slot_r * d + k, slot_c * d + k)] = value;
                log_central[(conj_slot(slot_r) * d + k, conj_slot(slot_c) * d + k)] =
                    value.conj();
            }
        }
    }
    branch_cut.dedup();

    let matrix = sandwich(&log_central, d, family.left(), family.right());
    Ok(Generator {
        matrix,
        branch_cut_wavenumbers: branch_cut,
    })
}

/// Regime of a wavenumber mode: hyperbolic amplification when the
/// discriminant is nonnegative, pure rotation otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralRegime {
    Squeezing,
    Rotation,
}

/// Per-wavenumber diagonal data of the walk: the shift eigenvalues
/// omega_k = exp(2 pi i k / d), the squeezing exponents Xi_k (squeezer coin)
/// or rotation angles Theta_k (beam-splitter coin), and the regime flags.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub d: usize,
    pub omega: Vec<Complex64>,
    pub exponent: Vec<Complex64>,
    pub regime: Vec<SpectralRegime>,
}

pub fn spectral_data(d: usize, coin: &CoinSpec) -> Result<SpectralData> {
    if d < 2 {
        return Err(Error::DimensionMismatch(
            "walk needs at least two positions".into(),
        ));
    }
    coin.check_constraint()?;
    if !coin.is_real() {
        return Err(Error::InvalidCoin(
            "spectral data requires real coin parameters".into(),
        ));
    }
    let mut omega_list = Vec::with_capacity(d);
    let mut exponent = Vec::with_capacity(d);
    let mut regime = Vec::with_capacity(d);
    for k in 0..d {
        let w = omega(d, k);
        omega_list.push(w);
        match coin {
            CoinSpec::Pdc { mu, .. } => {
                let cos = mu.re * w.re;
                let disc = cos * cos - 1.0;
                if disc >= 0.0 {
                    exponent.push(Complex64::new(cos + disc.sqrt(), 0.0).ln());
                    regime.push(SpectralRegime::Squeezing);
                } else {
                    // purely imaginary by construction: the argument has unit
                    // modulus, so the principal log carries no real part
                    exponent.push(Complex64::new(0.0, (-disc).sqrt().atan2(cos)));
                    regime.push(SpectralRegime::Rotation);
                }
            }
            CoinSpec::Bs { tau, .. } => {
                let cos = tau.re * w.re;
                let disc = cos * cos - 1.0;
                exponent.push(Complex64::new((-disc).max(0.0).sqrt().atan2(cos), 0.0));
                regime.push(if disc >= 0.0 {
                    SpectralRegime::Squeezing
                } else {
                    SpectralRegime::Rotation
                });
            }
            CoinSpec::Composite(_) => {
                return Err(Error::InvalidCoin(
                    "spectral data is defined for simple coins only".into(),
                ));
            }
        }
    }
    Ok(SpectralData {
        d,
        omega: omega_list,
        exponent,
        regime,
    })
}
