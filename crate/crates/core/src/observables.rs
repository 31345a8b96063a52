//! Measurable quantities of a propagated walk with coherent input: output
//! amplitudes and displacement, quadrature covariance and squeezing, photon
//! means and normally ordered photon-number correlations, the separability
//! bound certifying multimode entanglement, excess noise, amplification, and
//! position distributions.
//!
//! Everything here is a pure function of (transform, input). Second moments
//! are assembled from the commutator blocks
//!
//! ```text
//! x_{i,i'} = sum_j U_{i,j} U_{i',j}^*     (Hermitian)
//! y_{i,i'} = sum_j V_{i,j}^* V_{i',j}     (Hermitian)
//! z_{i,i'} = sum_j U_{i,j} V_{i',j}       (symmetric)
//! ```
//!
//! with x - y^* = id as an equivalent statement of the transform
//! constraints.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layout::CoherentInput;
use crate::linalg::{
    hermitian_eigen, hermitize, min_symmetric_eigenvalue, symmetrize, symmetrize_real, CMat, CVec,
    RMat, RVec,
};
use crate::transform::BogoliubovTransform;

/// Relative tolerance of the two-path excess-noise consistency check.
pub const EXCESS_NOISE_CHECK_TOL: f64 = 1e-8;

/// Commutator blocks of a transform; see the module docs.
#[derive(Debug, Clone)]
pub struct MomentBlocks {
    pub x: CMat,
    pub y: CMat,
    pub z: CMat,
}

pub fn moment_blocks(t: &BogoliubovTransform) -> MomentBlocks {
    let x = hermitize(&(t.u() * t.u().adjoint()));
    let y = hermitize(&(t.v().conjugate() * t.v().transpose()));
    let z = symmetrize(&(t.u() * t.v().transpose()));
    MomentBlocks { x, y, z }
}

/// Output covariance matrix in (all q, then all p) ordering, together with
/// its minimal eigenvalue and the squeezing level in decibel.
#[derive(Debug, Clone)]
pub struct CovarianceReport {
    pub matrix: RMat,
    pub min_eigenvalue: f64,
    pub squeezing_db: f64,
}

/// Covariance blocks for coherent input (input covariance id/2):
/// qq = Re y + Re z + id/2, pp = Re y - Re z + id/2, qp = Im y + Im z.
///
/// These covariances describe pure states, whose extreme eigenvalues pair as
/// min x max = 1/4. When the smallest eigenvalue falls below the
/// eigensolver's resolution at the matrix scale (strong squeezing after many
/// steps), it is recovered from that pairing instead of the solver output.
pub fn covariance_from_blocks(blocks: &MomentBlocks) -> Result<CovarianceReport> {
    let n = blocks.y.nrows();
    let re_y = blocks.y.map(|c| c.re);
    let im_y = blocks.y.map(|c| c.im);
    let re_z = blocks.z.map(|c| c.re);
    let im_z = blocks.z.map(|c| c.im);
    let half = RMat::identity(n, n) * 0.5;
    let qq = &re_y + &re_z + &half;
    let pp = &re_y - &re_z + &half;
    let qp = &im_y + &im_z;

    let mut c = RMat::zeros(2 * n, 2 * n);
    c.view_mut((0, 0), (n, n)).copy_from(&qq);
    c.view_mut((0, n), (n, n)).copy_from(&qp);
    c.view_mut((n, 0), (n, n)).copy_from(&qp.transpose());
    c.view_mut((n, n), (n, n)).copy_from(&pp);

    let eigenvalues = crate::linalg::symmetric_eigenvalues(&c)?;
    let min_raw = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dust_floor = 2.0 * n as f64 * f64::EPSILON * max.abs();
    let min_eigenvalue = if min_raw > dust_floor {
        min_raw
    } else {
        0.25 / max
    };
    let squeezing_db = squeezing_from_min_eigenvalue(min_eigenvalue)?;
    Ok(CovarianceReport {
        matrix: c,
        min_eigenvalue,
        squeezing_db,
    })
}

pub fn covariance_matrix(t: &BogoliubovTransform) -> Result<CovarianceReport> {
    covariance_from_blocks(&moment_blocks(t))
}

fn squeezing_from_min_eigenvalue(min_eig: f64) -> Result<f64> {
    if min_eig <= 0.0 {
        return Err(Error::InvalidTransform(format!(
            "covariance has non-positive eigenvalue {min_eig}; not a physical Gaussian state"
        )));
    }
    Ok(-(min_eig / 0.5).log10())
}

/// Squeezing in decibel of a covariance matrix or any principal submatrix of
/// one: -log10(min eig / (1/2)). Positive values certify noise below the
/// vacuum level, negative values are anti-squeezing.
pub fn squeezing_db(c: &RMat) -> Result<f64> {
    squeezing_from_min_eigenvalue(min_symmetric_eigenvalue(c)?)
}

/// Output displacement (mean quadratures; mean momenta) obtained through the
/// symplectic matrix
///
/// ```text
/// T' = [[Re U + Re V, -Im U + Im V], [Im U + Im V, Re U - Re V]]
/// ```
///
/// acting on (sqrt 2 Re alpha; sqrt 2 Im alpha). Agrees with sqrt 2 Re/Im of
/// the output amplitudes.
pub fn displacement_vector(t: &BogoliubovTransform, input: &CoherentInput) -> Result<RVec> {
    let n = t.modes();
    if input.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "input has {} amplitudes, transform acts on {n} modes",
            input.len()
        )));
    }
    let re_u = t.u().map(|c| c.re);
    let im_u = t.u().map(|c| c.im);
    let re_v = t.v().map(|c| c.re);
    let im_v = t.v().map(|c| c.im);
    let mut sympl = RMat::zeros(2 * n, 2 * n);
    sympl.view_mut((0, 0), (n, n)).copy_from(&(&re_u + &re_v));
    sympl.view_mut((0, n), (n, n)).copy_from(&(&im_v - &im_u));
    sympl.view_mut((n, 0), (n, n)).copy_from(&(&im_u + &im_v));
    sympl.view_mut((n, n), (n, n)).copy_from(&(&re_u - &re_v));

    let sqrt2 = 2.0_f64.sqrt();
    let mut phase_space = RVec::zeros(2 * n);
    for (i, a) in input.amplitudes().iter().enumerate() {
        phase_space[i] = sqrt2 * a.re;
        phase_space[n + i] = sqrt2 * a.im;
    }
    Ok(sympl * phase_space)
}

/// 4x4 covariance of the two coin modes at position `x`, rows and columns
/// ordered (q_+, q_-, p_+, p_-). Identical for every position of a
/// homogeneous walk.
pub fn reduced_coin_covariance(c: &RMat, x: usize) -> Result<RMat> {
    if !c.nrows().is_multiple_of(4) || !c.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "covariance of a two-coin walk must be 4d x 4d, got {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    let d = c.nrows() / 4;
    if x >= d {
        return Err(Error::DimensionMismatch(format!(
            "position {x} out of range for {d} positions"
        )));
    }
    let idx = [x, d + x, 2 * d + x, 3 * d + x];
    Ok(RMat::from_fn(4, 4, |r, col| c[(idx[r], idx[col])]))
}

/// Mean photon number per mode: <n_i> = |beta_i|^2 + y_{i,i}.
pub fn photon_means(t: &BogoliubovTransform, input: &CoherentInput) -> Result<RVec> {
    let beta = t.apply_amplitudes(input)?;
    Ok(photon_means_from(&moment_blocks(t), &beta))
}

fn photon_means_from(blocks: &MomentBlocks, beta: &CVec) -> RVec {
    RVec::from_fn(beta.len(), |i, _| {
        beta[i].norm_sqr() + blocks.y[(i, i)].re
    })
}

/// Matrix of normally ordered photon-number central correlations,
///
/// ```text
/// M_{i,i'} = |z_{i,i'}|^2 + |y_{i,i'}|^2
///          + 2 Re(z_{i,i'}^* beta_i beta_{i'})
///          + 2 Re(y_{i,i'} beta_i^* beta_{i'}) ,
/// ```
///
/// real symmetric by construction. A negative eigenvalue certifies
/// nonclassical photon-number correlations, which requires V != 0.
pub fn photon_moment_matrix(t: &BogoliubovTransform, input: &CoherentInput) -> Result<RMat> {
    let beta = t.apply_amplitudes(input)?;
    Ok(moment_matrix_from(&moment_blocks(t), &beta))
}

fn moment_matrix_from(blocks: &MomentBlocks, beta: &CVec) -> RMat {
    let n = beta.len();
    let m = RMat::from_fn(n, n, |i, j| {
        let z = blocks.z[(i, j)];
        let y = blocks.y[(i, j)];
        z.norm_sqr()
            + y.norm_sqr()
            + 2.0 * (z.conj() * beta[i] * beta[j]).re
            + 2.0 * (y * beta[i].conj() * beta[j]).re
    });
    symmetrize_real(&m)
}

/// Sums the moment matrix over the coin index, leaving a d x d matrix of
/// position-resolved correlations: M' = [id id] M [id id]^T.
pub fn coin_traced_moment_matrix(m: &RMat) -> Result<RMat> {
    if !m.nrows().is_multiple_of(2) || !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "moment matrix of a two-coin walk must have even size, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let d = m.nrows() / 2;
    Ok(RMat::from_fn(d, d, |x, xp| {
        m[(x, xp)] + m[(x, d + xp)] + m[(d + x, xp)] + m[(d + x, d + xp)]
    }))
}

/// Minimal expectation value of the total-input-photon-number operator over
/// product output states,
///
/// ```text
/// g_min = 1/2 sum_j ( sqrt((1 + 2 [V V^{*T}]_{j,j})^2 - 4 |[U V^T]_{j,j}|^2) - 1 ) .
/// ```
///
/// g_min > 0 certifies multimode entanglement of the output for coherent
/// inputs; any V = 0 transform gives exactly zero.
pub fn entanglement_bound(t: &BogoliubovTransform) -> Result<f64> {
    let n = t.modes();
    let u = t.u();
    let v = t.v();
    let mut g = 0.0;
    for j in 0..n {
        let mut vv = 0.0;
        let mut uv = Complex64::new(0.0, 0.0);
        for i in 0..n {
            vv += v[(j, i)].norm_sqr();
            uv += u[(j, i)] * v[(j, i)];
        }
        let radicand = (1.0 + 2.0 * vv).powi(2) - 4.0 * uv.norm_sqr();
        if radicand < -1e-12 {
            return Err(Error::InvalidTransform(format!(
                "separability bound radicand {radicand} is negative; transform violates the constraints"
            )));
        }
        g += 0.5 * (radicand.max(0.0).sqrt() - 1.0);
    }
    Ok(g)
}

/// Total background noise sum_i (<n_i> - |beta_i|^2), cross-checked against
/// tr(V V^{*T}); the two routes must agree to [`EXCESS_NOISE_CHECK_TOL`]
/// relative to the noise magnitude.
pub fn excess_noise(t: &BogoliubovTransform, input: &CoherentInput) -> Result<f64> {
    let beta = t.apply_amplitudes(input)?;
    let blocks = moment_blocks(t);
    let means = photon_means_from(&blocks, &beta);
    let from_means: f64 = (0..means.len()).map(|i| means[i] - beta[i].norm_sqr()).sum();
    let trace: f64 = t.v().iter().map(|c| c.norm_sqr()).sum();
    let residual = (from_means - trace).abs();
    if residual > EXCESS_NOISE_CHECK_TOL * trace.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "excess-noise routes disagree: {from_means} vs {trace}"
        )));
    }
    Ok(from_means)
}

/// Signal gain sum |beta_i|^2 / sum |alpha_i|^2, excluding background noise.
pub fn amplification(t: &BogoliubovTransform, input: &CoherentInput) -> Result<f64> {
    let total_in = input.total_photon_number();
    if total_in == 0.0 {
        return Err(Error::Domain(
            "amplification undefined for zero input photon number".into(),
        ));
    }
    let beta = t.apply_amplitudes(input)?;
    Ok(beta.iter().map(|b| b.norm_sqr()).sum::<f64>() / total_in)
}

/// Which photon count enters the position distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntensityKind {
    /// Full photon means including the excess-noise background.
    PhotonMeans,
    /// Coherent signal |beta|^2 only, the classical nonlinear evolution.
    CoherentOnly,
}

/// Normalized distribution over positions, P(x) proportional to the photon
/// count of the two coin modes at x.
pub fn intensity_distribution(
    t: &BogoliubovTransform,
    input: &CoherentInput,
    kind: IntensityKind,
) -> Result<Vec<f64>> {
    let n = t.modes();
    if !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(
            "distribution needs a two-coin walk transform".into(),
        ));
    }
    let weights: RVec = match kind {
        IntensityKind::PhotonMeans => photon_means(t, input)?,
        IntensityKind::CoherentOnly => {
            let beta = t.apply_amplitudes(input)?;
            RVec::from_fn(n, |i, _| beta[i].norm_sqr())
        }
    };
    let d = n / 2;
    let mut p: Vec<f64> = (0..d).map(|x| weights[x] + weights[d + x]).collect();
    let total: f64 = p.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain(
            "zero total photon number; distribution undefined".into(),
        ));
    }
    p.iter_mut().for_each(|w| *w /= total);
    Ok(p)
}

/// Circular variance 1 - |sum_x P(x) exp(2 pi i x / d)| of a normalized
/// distribution on the cycle; 0 means localized, 1 maximally spread.
pub fn circular_variance(p: &[f64]) -> Result<f64> {
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "distribution sums to {total}, expected 1"
        )));
    }
    let d = p.len() as f64;
    let moment: Complex64 = p
        .iter()
        .enumerate()
        .map(|(x, &w)| Complex64::from_polar(w, std::f64::consts::TAU * x as f64 / d))
        .sum();
    Ok(1.0 - moment.norm())
}

/// Hermitian physicality check: the minimal eigenvalue of C + (i/2) Lambda,
/// with Lambda the symplectic form in (q, p) ordering, is nonnegative for
/// physical covariance matrices (up to rounding).
pub fn covariance_physicality_min_eig(c: &RMat) -> Result<f64> {
    if !c.nrows().is_multiple_of(2) || !c.is_square() {
        return Err(Error::DimensionMismatch(
            "covariance must be 2n x 2n".into(),
        ));
    }
    let n = c.nrows() / 2;
    let mut h = c.map(|x| Complex64::new(x, 0.0));
    for i in 0..n {
        h[(i, n + i)] += Complex64::new(0.0, 0.5);
        h[(n + i, i)] -= Complex64::new(0.0, 0.5);
    }
    let (vals, _) = hermitian_eigen(&h)?;
    vals.into_iter()
        .reduce(f64::min)
        .ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))
}

/// Every observable of one propagated step, bundled per time value.
#[derive(Debug, Clone)]
pub struct ObservableReport {
    pub t: f64,
    pub beta: CVec,
    pub displacement: RVec,
    pub covariance: CovarianceReport,
    /// 4x4 coin covariance at position 0 (identical across positions for
    /// homogeneous walks).
    pub reduced_coin_covariance: RMat,
    pub coin_squeezing_db: f64,
    pub photon_means: RVec,
    pub moment_matrix: RMat,
    pub moment_min_eigenvalue: f64,
    pub coin_traced_moment_matrix: RMat,
    pub coin_traced_min_eigenvalue: f64,
    /// Negated minimal eigenvalue of the coin-traced moment matrix; positive
    /// values certify nonclassical position correlations.
    pub moment_negativity: f64,
    pub entanglement_bound: f64,
    pub excess_noise: f64,
    /// None when the input carries no photons.
    pub amplification: Option<f64>,
    /// None when neither signal nor noise photons are present.
    pub intensity_distribution: Option<Vec<f64>>,
    pub circular_variance: Option<f64>,
}

pub fn report(
    t_label: f64,
    transform: &BogoliubovTransform,
    input: &CoherentInput,
) -> Result<ObservableReport> {
    let blocks = moment_blocks(transform);
    let beta = transform.apply_amplitudes(input)?;
    let covariance = covariance_from_blocks(&blocks)?;
    let reduced = reduced_coin_covariance(&covariance.matrix, 0)?;
    let coin_squeezing_db = squeezing_db(&reduced)?;
    let photon_means = photon_means_from(&blocks, &beta);
    let moment_matrix = moment_matrix_from(&blocks, &beta);
    let moment_min_eigenvalue = min_symmetric_eigenvalue(&moment_matrix)?;
    let coin_traced = coin_traced_moment_matrix(&moment_matrix)?;
    let coin_traced_min_eigenvalue = min_symmetric_eigenvalue(&coin_traced)?;
    let displacement = displacement_vector(transform, input)?;
    let excess = excess_noise(transform, input)?;
    let entanglement = entanglement_bound(transform)?;

    let amplification = if input.total_photon_number() > 0.0 {
        let signal: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
        Some(signal / input.total_photon_number())
    } else {
        None
    };
    let intensity = intensity_distribution(transform, input, IntensityKind::PhotonMeans).ok();
    let circular = match &intensity {
        Some(p) => Some(circular_variance(p)?),
        None => None,
    };

    Ok(ObservableReport {
        t: t_label,
        beta,
        displacement,
        covariance,
        reduced_coin_covariance: reduced,
        coin_squeezing_db,
        photon_means,
        moment_matrix,
        moment_min_eigenvalue,
        coin_traced_moment_matrix: coin_traced,
        coin_traced_min_eigenvalue,
        moment_negativity: -coin_traced_min_eigenvalue,
        entanglement_bound: entanglement,
        excess_noise: excess,
        amplification,
        intensity_distribution: intensity,
        circular_variance: circular,
    })
}

/// Evaluates one report per time value, sequentially.
pub fn report_series_seq<F>(
    t_values: &[f64],
    propagate: F,
    input: &CoherentInput,
) -> Result<Vec<ObservableReport>>
where
    F: Fn(f64) -> Result<BogoliubovTransform> + Sync,
{
    t_values
        .iter()
        .map(|&t| report(t, &propagate(t)?, input))
        .collect()
}

/// Evaluates one report per time value; entries are independent and run in
/// parallel when the `parallel` feature is enabled, with output order fixed
/// by `t_values`.
#[cfg(feature = "parallel")]
pub fn report_series<F>(
    t_values: &[f64],
    propagate: F,
    input: &CoherentInput,
) -> Result<Vec<ObservableReport>>
where
    F: Fn(f64) -> Result<BogoliubovTransform> + Sync,
{
    use rayon::prelude::*;
    t_values
        .par_iter()
        .map(|&t| report(t, &propagate(t)?, input))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn report_series<F>(
    t_values: &[f64],
    propagate: F,
    input: &CoherentInput,
) -> Result<Vec<ObservableReport>>
where
    F: Fn(f64) -> Result<BogoliubovTransform> + Sync,
{
    report_series_seq(t_values, propagate, input)
}
