//! Independent verification engines that avoid the Gaussian formalism
//! entirely: a truncated Fock-space simulation of the two-mode squeezer and a
//! scalar amplitude recursion for the beam-splitter walk.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, RMat};

/// Default bound on the tolerated truncation-induced norm deficit.
pub const DEFAULT_TRUNCATION_BUDGET: f64 = 1e-8;

/// Two-mode state with per-mode cutoff `n_max`; `amps[(n1, n2)]` is the
/// amplitude of |n1, n2>.
#[derive(Debug, Clone)]
pub struct FockState {
    n_max: usize,
    amps: CMat,
}

impl FockState {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &CMat {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability mass lost to the cutoff: 1 - sum |amplitude|^2.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    /// Probability of detecting unequal photon numbers in the two modes.
    pub fn unequal_photon_probability(&self) -> f64 {
        let mut p = 0.0;
        for n1 in 0..=self.n_max {
            for n2 in 0..=self.n_max {
                if n1 != n2 {
                    p += self.amps[(n1, n2)].norm_sqr();
                }
            }
        }
        p
    }
}

/// Two-mode squeezed vacuum sqrt(1 - lambda^2) sum_n lambda^n |n, n> with
/// lambda = tanh(xi), truncated at `n_max` photons per mode.
pub fn two_mode_squeezed_vacuum(xi: f64, n_max: usize) -> Result<FockState> {
    if !xi.is_finite() {
        return Err(Error::Domain(format!("non-finite squeezing {xi}")));
    }
    if n_max < 1 {
        return Err(Error::Domain("cutoff must allow at least one photon".into()));
    }
    let lambda = xi.tanh();
    let norm = (1.0 - lambda * lambda).sqrt();
    let mut amps = CMat::zeros(n_max + 1, n_max + 1);
    let mut coeff = norm;
    for n in 0..=n_max {
        amps[(n, n)] = Complex64::new(coeff, 0.0);
        coeff *= lambda;
    }
    Ok(FockState { n_max, amps })
}

/// Applies the annihilation operator of `mode` (0 or 1) to the amplitude
/// tensor.
fn lower(amps: &CMat, mode: usize) -> CMat {
    let rows = amps.nrows();
    let cols = amps.ncols();
    CMat::from_fn(rows, cols, |n1, n2| match mode {
        0 => {
            if n1 + 1 < rows {
                amps[(n1 + 1, n2)] * ((n1 + 1) as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        _ => {
            if n2 + 1 < cols {
                amps[(n1, n2 + 1)] * ((n2 + 1) as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    })
}

/// Applies the creation operator of `mode`; amplitudes raised past the
/// cutoff are dropped, which is covered by the truncation budget.
fn raise(amps: &CMat, mode: usize) -> CMat {
    let rows = amps.nrows();
    let cols = amps.ncols();
    CMat::from_fn(rows, cols, |n1, n2| match mode {
        0 => {
            if n1 > 0 {
                amps[(n1 - 1, n2)] * (n1 as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        _ => {
            if n2 > 0 {
                amps[(n1, n2 - 1)] * (n2 as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    })
}

fn inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Exact expectation values over the truncated amplitude tensor.
#[derive(Debug, Clone)]
pub struct FockExpectations {
    pub mean_photon: [f64; 2],
    /// Normally ordered photon-number central moments
    /// <:(Delta n_i)(Delta n_j):> as a 2x2 matrix.
    pub moment_matrix: RMat,
    /// Quadrature covariance in (q1, q2, p1, p2) ordering, from symmetrized
    /// second moments of the ladder operators.
    pub quadrature_covariance: RMat,
}

pub fn fock_expectations(state: &FockState, budget: f64) -> Result<FockExpectations> {
    let deficit = state.norm_deficit();
    if deficit > budget {
        return Err(Error::Domain(format!(
            "truncation deficit {deficit:.3e} exceeds budget {budget:.3e}"
        )));
    }

    let dim = state.n_max + 1;
    let mut mean = [0.0; 2];
    let mut nn = RMat::zeros(2, 2);
    for n1 in 0..dim {
        for n2 in 0..dim {
            let p = state.amps[(n1, n2)].norm_sqr();
            if p == 0.0 {
                continue;
            }
            mean[0] += n1 as f64 * p;
            mean[1] += n2 as f64 * p;
            nn[(0, 0)] += (n1 * n1) as f64 * p;
            nn[(1, 1)] += (n2 * n2) as f64 * p;
            nn[(0, 1)] += (n1 * n2) as f64 * p;
        }
    }
    nn[(1, 0)] = nn[(0, 1)];
    // <:Delta n_i Delta n_j:> = <n_i n_j> - delta_{ij} <n_i> - <n_i><n_j>
    let moment_matrix = RMat::from_fn(2, 2, |i, j| {
        let correction = if i == j { mean[i] } else { 0.0 };
        nn[(i, j)] - correction - mean[i] * mean[j]
    });

    // quadrature second moments from ladder operators applied to the tensor
    let sqrt2_inv = 1.0 / 2.0_f64.sqrt();
    let mut quad_states = Vec::with_capacity(4);
    for mode in 0..2 {
        let low = lower(&state.amps, mode);
        let high = raise(&state.amps, mode);
        quad_states.push((&low + &high).map(|c| c * sqrt2_inv));
        quad_states.push((&low - &high).map(|c| c * Complex64::new(0.0, -sqrt2_inv)));
    }
    // reorder to (q1, q2, p1, p2)
    let ordered = [0usize, 2, 1, 3];
    let mut quadrature_covariance = RMat::zeros(4, 4);
    let means: Vec<f64> = ordered
        .iter()
        .map(|&a| inner(&state.amps, &quad_states[a]).re)
        .collect();
    for (r, &a) in ordered.iter().enumerate() {
        for (s, &b) in ordered.iter().enumerate() {
            let overlap = inner(&quad_states[a], &quad_states[b]);
            quadrature_covariance[(r, s)] = overlap.re - means[r] * means[s];
        }
    }

    Ok(FockExpectations {
        mean_photon: mean,
        moment_matrix,
        quadrature_covariance,
    })
}

/// Single-walker amplitude recursion for the beam-splitter walk: per
/// position the coin maps (psi_+, psi_-) to
/// (tau psi_+ + rho psi_-, -rho^* psi_+ + tau^* psi_-), then + amplitudes
/// shift forward and - amplitudes backward on the cycle. Amplitudes are
/// ordered like the walk modes, all + entries before all - entries.
pub fn single_walker_recursion(
    d: usize,
    tau: Complex64,
    rho: Complex64,
    t: usize,
    initial: &CVec,
) -> Result<CVec> {
    if d < 2 {
        return Err(Error::DimensionMismatch(
            "walk needs at least two positions".into(),
        ));
    }
    if initial.len() != 2 * d {
        return Err(Error::DimensionMismatch(format!(
            "initial amplitudes have length {}, expected {}",
            initial.len(),
            2 * d
        )));
    }
    let norm = tau.norm_sqr() + rho.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidCoin(format!(
            "|tau|^2 + |rho|^2 = {norm}, expected 1"
        )));
    }

    let mut psi = initial.clone();
    let mut next = CVec::zeros(2 * d);
    for _ in 0..t {
        for x in 0..d {
            let behind = (x + d - 1) % d;
            let ahead = (x + 1) % d;
            next[x] = tau * psi[behind] + rho * psi[d + behind];
            next[d + x] = -rho.conj() * psi[ahead] + tau.conj() * psi[d + ahead];
        }
        std::mem::swap(&mut psi, &mut next);
    }
    Ok(psi)
}
