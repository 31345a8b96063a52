//! Cross-checking suite tying the independent computation routes together:
//! spectral vs dense propagation, Gaussian formalism vs Fock-space oracle,
//! classicality of linear walks, two-path identities, and continuous-time
//! consistency. The CLI `verify` subcommand prints one line per check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::layout::{CoherentInput, CoinValue, ModeLayout};
use crate::linalg::{hermitian_eigen, max_abs, max_abs_real, CMat, CVec};
use crate::observables::{
    covariance_matrix, entanglement_bound, excess_noise, intensity_distribution,
    photon_moment_matrix, IntensityKind,
};
use crate::oracle::{fock_expectations, single_walker_recursion, two_mode_squeezed_vacuum};
use crate::propagator::{evolve_dense, generator, spectral_propagator_bs, spectral_propagator_pdc};
use crate::transform::BogoliubovTransform;
use crate::walk::{bs_coin, pdc_coin, step_transform};

pub const DEFAULT_SEED: u64 = 0x5eed_1e55_u64;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_residual(name: &'static str, residual: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
            detail,
        }
    }
}

const MU: f64 = std::f64::consts::SQRT_2;
const NU: f64 = 1.0;

fn hadamard_params() -> (f64, f64) {
    let inv = 1.0 / 2.0_f64.sqrt();
    (inv, inv)
}

fn complex(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reference_input(d: usize) -> CoherentInput {
    let layout = ModeLayout::new(d).expect("d >= 1");
    CoherentInput::from_entries(
        &layout,
        &[
            (0, CoinValue::Plus, complex(10.0_f64.sqrt(), 0.0)),
            (0, CoinValue::Minus, complex(0.0, 10.0_f64.sqrt())),
        ],
    )
    .expect("in-range entries")
}

fn scaled_validity(t: &BogoliubovTransform) -> f64 {
    let report = t.validate(1.0);
    report.pairing_residual.max(report.metric_residual) / report.scale
}

fn single_step(d: usize, pdc: bool) -> BogoliubovTransform {
    let coin = if pdc {
        pdc_coin(d, complex(MU, 0.0), complex(NU, 0.0)).expect("valid coin")
    } else {
        let (tau, rho) = hadamard_params();
        bs_coin(d, complex(tau, 0.0), complex(rho, 0.0)).expect("valid coin")
    };
    let step = step_transform(d).expect("valid step");
    BogoliubovTransform::compose(&step, &coin).expect("equal mode counts")
}

fn spectral(d: usize, pdc: bool, t: f64) -> BogoliubovTransform {
    if pdc {
        spectral_propagator_pdc(d, MU, NU, t).expect("valid spectral propagation")
    } else {
        let (tau, rho) = hadamard_params();
        spectral_propagator_bs(d, tau, rho, t).expect("valid spectral propagation")
    }
}

/// Coins, steps, and composites validate tightly at construction scale.
pub fn construction_validity() -> CheckOutcome {
    let mut worst = 0.0_f64;
    for d in [1usize, 2, 3, 5, 11] {
        for xi in [0.25_f64, 0.8813735870195429, 2.0] {
            let coin = pdc_coin(d, complex(xi.cosh(), 0.0), complex(xi.sinh(), 0.0)).unwrap();
            worst = worst.max(scaled_validity(&coin));
        }
        let bs = bs_coin(d, complex(0.6, 0.0), complex(0.8, 0.0)).unwrap();
        worst = worst.max(scaled_validity(&bs));
        if d >= 2 {
            worst = worst.max(scaled_validity(&step_transform(d).unwrap()));
            worst = worst.max(scaled_validity(&single_step(d, true)));
        }
    }
    CheckOutcome::from_residual(
        "construction_validity",
        worst,
        1e-12,
        "coins, steps, and single-step compositions".into(),
    )
}

/// Spectral and dense engines agree entrywise for both coin families.
pub fn engine_equivalence() -> CheckOutcome {
    let mut worst = 0.0_f64;
    for d in [3usize, 5, 11] {
        for pdc in [true, false] {
            let step = single_step(d, pdc);
            for t in 0..=10 {
                let dense = evolve_dense(&step, t).expect("composition");
                let closed = spectral(d, pdc, t as f64);
                worst = worst.max(max_abs(
                    &(&closed.full_matrix() - &dense.full_matrix()),
                ));
            }
        }
    }
    CheckOutcome::from_residual(
        "engine_equivalence",
        worst,
        1e-9,
        "d in {3,5,11}, both coins, t = 0..10".into(),
    )
}

/// Propagated transforms keep satisfying the constraints.
pub fn propagated_validity() -> CheckOutcome {
    let mut worst = 0.0_f64;
    for d in [3usize, 11] {
        for pdc in [true, false] {
            for t in [0.5, 1.0, 5.0, 12.5, 20.0] {
                worst = worst.max(scaled_validity(&spectral(d, pdc, t)));
            }
        }
    }
    CheckOutcome::from_residual(
        "propagated_validity",
        worst,
        1e-8,
        "spectral outputs up to t = 20".into(),
    )
}

/// spectral(t1 + t2) = spectral(t2) o spectral(t1), including fractional
/// times.
pub fn semigroup() -> CheckOutcome {
    let d = 5;
    let mut worst = 0.0_f64;
    for pdc in [true, false] {
        for (t1, t2) in [(1.0, 2.0), (0.5, 1.5), (2.25, 3.5), (0.0, 4.0)] {
            let whole = spectral(d, pdc, t1 + t2);
            let composed = BogoliubovTransform::compose(
                &spectral(d, pdc, t2),
                &spectral(d, pdc, t1),
            )
            .expect("equal mode counts");
            worst = worst.max(max_abs(
                &(&whole.full_matrix() - &composed.full_matrix()),
            ));
        }
    }
    CheckOutcome::from_residual(
        "semigroup",
        worst,
        1e-9,
        "split propagation times, integer and fractional".into(),
    )
}

/// Unitary walks conserve the total photon number.
pub fn bs_norm_preservation() -> CheckOutcome {
    let d = 11;
    let input = reference_input(d);
    let reference = input.total_photon_number();
    let mut worst = 0.0_f64;
    for t in 0..=15 {
        let walk = spectral(d, false, t as f64);
        let beta = walk.apply_amplitudes(&input).expect("matching length");
        let total: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
        worst = worst.max((total - reference).abs() / reference);
    }
    CheckOutcome::from_residual(
        "bs_norm_preservation",
        worst,
        1e-9,
        "Hadamard walk, t = 0..15".into(),
    )
}

/// Random linear walks produce no quantum signature: zero separability
/// bound, vacuum covariance, vanishing moment matrix.
pub fn linear_walk_classicality(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_gmin = 0.0_f64;
    let mut worst_cov = 0.0_f64;
    let mut worst_moment = 0.0_f64;
    for _ in 0..50 {
        let d = rng.gen_range(2..=11);
        let t = rng.gen_range(0..=10);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let walk = spectral_propagator_bs(d, theta.cos(), theta.sin(), t as f64)
            .expect("valid parameters");
        let alpha = CVec::from_fn(2 * d, |_, _| {
            complex(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        });
        let input = CoherentInput::new(alpha);

        worst_gmin = worst_gmin.max(entanglement_bound(&walk).expect("valid transform").abs());
        let cov = covariance_matrix(&walk).expect("valid transform");
        worst_cov = worst_cov.max((cov.min_eigenvalue - 0.5).abs());
        let m = photon_moment_matrix(&walk, &input).expect("matching length");
        worst_moment = worst_moment.max(max_abs_real(&m));
    }
    vec![
        CheckOutcome::from_residual(
            "classicality_gmin",
            worst_gmin,
            1e-12,
            "50 random linear walks".into(),
        ),
        CheckOutcome::from_residual(
            "classicality_covariance",
            worst_cov,
            1e-10,
            "min eig C = 1/2 for linear walks".into(),
        ),
        CheckOutcome::from_residual(
            "classicality_moments",
            worst_moment,
            1e-10,
            "moment matrix vanishes for linear walks".into(),
        ),
    ]
}

/// The background noise computed from photon means equals tr(V V^{*T}),
/// measured relative to the noise magnitude.
pub fn excess_noise_identity() -> CheckOutcome {
    let d = 11;
    let input = reference_input(d);
    let mut worst = 0.0_f64;
    for t in 0..=10 {
        let walk = spectral(d, true, t as f64);
        let from_means = excess_noise(&walk, &input).expect("consistent routes");
        let trace: f64 = walk.v().iter().map(|v| v.norm_sqr()).sum();
        worst = worst.max((from_means - trace).abs() / trace.max(1.0));
    }
    CheckOutcome::from_residual(
        "excess_noise_identity",
        worst,
        1e-8,
        "squeezer walk, t = 0..10".into(),
    )
}

/// Gaussian-formalism predictions for a single squeezer coin match the
/// truncated Fock-space simulation.
pub fn fock_oracle_agreement() -> CheckOutcome {
    let xi = 0.5_f64;
    let coin = pdc_coin(1, complex(xi.cosh(), 0.0), complex(xi.sinh(), 0.0)).unwrap();
    let vacuum = CoherentInput::vacuum(2);

    let state = two_mode_squeezed_vacuum(xi, 40).unwrap();
    let fock = fock_expectations(&state, 1e-8).unwrap();

    let mut worst = 0.0_f64;
    let nu2 = xi.sinh().powi(2);
    worst = worst.max((fock.mean_photon[0] - nu2).abs());
    worst = worst.max((fock.mean_photon[1] - nu2).abs());

    let m_gauss = photon_moment_matrix(&coin, &vacuum).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((m_gauss[(i, j)] - fock.moment_matrix[(i, j)]).abs());
        }
    }
    let min_gauss = crate::linalg::min_symmetric_eigenvalue(&m_gauss).unwrap();
    let min_fock = crate::linalg::min_symmetric_eigenvalue(&fock.moment_matrix).unwrap();
    worst = worst.max((min_gauss - min_fock).abs());

    let cov_gauss = covariance_matrix(&coin).unwrap();
    let min_cov_fock =
        crate::linalg::min_symmetric_eigenvalue(&fock.quadrature_covariance).unwrap();
    worst = worst.max((cov_gauss.min_eigenvalue - min_cov_fock).abs());

    CheckOutcome::from_residual(
        "fock_oracle",
        worst,
        1e-6,
        "xi = 0.5, cutoff 40 photons per mode".into(),
    )
}

/// Polar factors reconstruct the transform they came from.
pub fn polar_reconstruction() -> CheckOutcome {
    let d = 5;
    let coin = pdc_coin(d, complex(1.25_f64.cosh(), 0.0), complex(1.25_f64.sinh(), 0.0)).unwrap();
    let mixer = bs_coin(d, complex(0.6, 0.0), complex(0.8, 0.0)).unwrap();
    let step = step_transform(d).unwrap();
    let mut t = BogoliubovTransform::identity(2 * d);
    for layer in [&coin, &step, &mixer, &step, &coin] {
        t = BogoliubovTransform::compose(layer, &t).unwrap();
    }
    let polar = t.polar_decompose().unwrap();
    let ss = &polar.s * polar.s.conjugate();
    let (vals, q) = hermitian_eigen(&ss).unwrap();
    let mut inv_root = CMat::zeros(2 * d, 2 * d);
    for (i, &h) in vals.iter().enumerate() {
        inv_root[(i, i)] = complex(1.0 / (1.0 - h.max(0.0)).sqrt(), 0.0);
    }
    let inv_root = &q * inv_root * q.adjoint();
    let u_rec = &polar.w * &inv_root;
    let v_rec = &u_rec * &polar.s;
    let residual = max_abs(&(&u_rec - t.u())).max(max_abs(&(&v_rec - t.v())));
    CheckOutcome::from_residual(
        "polar_reconstruction",
        residual,
        1e-9,
        "five-layer composed transform".into(),
    )
}

/// exp(t G) with G = ln(single step) agrees with the closed-form propagator
/// at fractional times.
pub fn continuous_vs_spectral() -> CheckOutcome {
    let d = 11;
    let gen = generator(&single_step(d, true)).expect("walk-family transform");
    let mut worst = 0.0_f64;
    for t in [0.5, 1.5, 2.5] {
        let from_gen = (&gen.matrix * complex(t, 0.0)).exp();
        let closed = spectral(d, true, t);
        worst = worst.max(max_abs(&(&from_gen - &closed.full_matrix())));
    }
    CheckOutcome::from_residual(
        "continuous_vs_spectral",
        worst,
        1e-8,
        "exp(t G) vs closed form at t in {0.5, 1.5, 2.5}".into(),
    )
}

/// exp(t G) reproduces the discrete powers at integer times.
pub fn continuous_vs_dense() -> CheckOutcome {
    let d = 11;
    let step = single_step(d, true);
    let gen = generator(&step).expect("walk-family transform");
    let mut worst = 0.0_f64;
    for t in 1..=3 {
        let from_gen = (&gen.matrix * complex(t as f64, 0.0)).exp();
        let dense = evolve_dense(&step, t).unwrap();
        worst = worst.max(max_abs(&(&from_gen - &dense.full_matrix())));
    }
    CheckOutcome::from_residual(
        "continuous_vs_dense",
        worst,
        1e-9,
        "exp(t G) vs dense powers at t = 1..3".into(),
    )
}

/// The coherent walk distribution equals the squared amplitudes of the
/// scalar single-walker recursion.
pub fn distribution_oracle() -> CheckOutcome {
    let d = 11;
    let (tau, rho) = hadamard_params();
    let input = reference_input(d);
    let mut worst = 0.0_f64;
    for t in 0..=15 {
        let walk = spectral(d, false, t as f64);
        let p = intensity_distribution(&walk, &input, IntensityKind::PhotonMeans)
            .expect("nonzero input");
        let psi = single_walker_recursion(
            d,
            complex(tau, 0.0),
            complex(rho, 0.0),
            t,
            input.amplitudes(),
        )
        .expect("valid recursion");
        let total: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        for x in 0..d {
            let reference = (psi[x].norm_sqr() + psi[d + x].norm_sqr()) / total;
            worst = worst.max((p[x] - reference).abs());
        }
    }
    CheckOutcome::from_residual(
        "distribution_oracle",
        worst,
        1e-10,
        "Hadamard walk vs amplitude recursion, t = 0..15".into(),
    )
}

/// Runs every check; the CLI prints one line per entry.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let mut outcomes = vec![
        construction_validity(),
        engine_equivalence(),
        propagated_validity(),
        semigroup(),
        bs_norm_preservation(),
    ];
    outcomes.extend(linear_walk_classicality(seed));
    outcomes.push(excess_noise_identity());
    outcomes.push(fock_oracle_agreement());
    outcomes.push(polar_reconstruction());
    outcomes.push(continuous_vs_spectral());
    outcomes.push(continuous_vs_dense());
    outcomes.push(distribution_oracle());
    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        for outcome in run_all(DEFAULT_SEED) {
            assert!(
                outcome.passed,
                "{} failed: residual {:.3e} > tol {:.3e} ({})",
                outcome.name, outcome.residual, outcome.tolerance, outcome.detail
            );
        }
    }

    #[test]
    fn injected_fault_is_detected() {
        // perturbing one V entry must break the constraint check
        let walk = spectral(5, true, 3.0);
        let mut v = walk.v().clone();
        v[(0, 1)] += complex(1e-3, 0.0);
        let broken = BogoliubovTransform::new(walk.u().clone(), v).unwrap();
        assert!(!broken.is_valid(1e-10));
        assert!(scaled_validity(&broken) > 1e-6);
    }
}
