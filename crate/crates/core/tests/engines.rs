//! Cross-engine consistency: the spectral closed form, the blockwise dense
//! composition, and a raw full-matrix power serve as three routes to the
//! same propagator; the Fock oracle and the amplitude recursion check the
//! observable layer from outside the Gaussian formalism.

use num_complex::Complex64;

use gwalk_core::linalg::{block_of, max_abs, CMat};
use gwalk_core::observables::{
    covariance_matrix, intensity_distribution, photon_moment_matrix, IntensityKind,
};
use gwalk_core::oracle::{fock_expectations, single_walker_recursion, two_mode_squeezed_vacuum};
use gwalk_core::propagator::{
    dft_matrix, evolve_dense, spectral_data, spectral_propagator_bs, spectral_propagator_pdc,
    SpectralRegime,
};
use gwalk_core::transform::BogoliubovTransform;
use gwalk_core::walk::{bs_coin, pdc_coin, step_transform, CoinSpec};
use gwalk_core::{CoherentInput, CoinValue, ModeLayout};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_step(d: usize, coin: &BogoliubovTransform) -> BogoliubovTransform {
    BogoliubovTransform::compose(&step_transform(d).unwrap(), coin).unwrap()
}

/// Raw reference: repeated multiplication of the full doubled matrix,
/// independent of the blockwise composition formula.
fn full_matrix_power(step: &BogoliubovTransform, t: usize) -> CMat {
    let full = step.full_matrix();
    let mut power = CMat::identity(full.nrows(), full.ncols());
    for _ in 0..t {
        power = &full * power;
    }
    power
}

fn reference_input(d: usize) -> CoherentInput {
    let layout = ModeLayout::new(d).unwrap();
    CoherentInput::from_entries(
        &layout,
        &[
            (0, CoinValue::Plus, c(10.0_f64.sqrt(), 0.0)),
            (0, CoinValue::Minus, c(0.0, 10.0_f64.sqrt())),
        ],
    )
    .unwrap()
}

#[test]
fn dense_engine_matches_full_matrix_power() {
    for d in [3usize, 5] {
        let coins = [
            pdc_coin(d, c(2.0_f64.sqrt(), 0.0), c(1.0, 0.0)).unwrap(),
            bs_coin(d, c(0.6, 0.0), c(0.8, 0.0)).unwrap(),
        ];
        for coin in &coins {
            let step = single_step(d, coin);
            for t in 0..=6 {
                let blockwise = evolve_dense(&step, t).unwrap().full_matrix();
                let raw = full_matrix_power(&step, t);
                let err = max_abs(&(&blockwise - &raw));
                assert!(err < 1e-10, "d={d} t={t}: {err}");
            }
        }
    }
}

#[test]
fn spectral_amplitudes_match_full_matrix_power() {
    // five steps of the reference walk, output amplitudes from both routes
    let d = 11;
    let t = 5;
    let coin = pdc_coin(d, c(2.0_f64.sqrt(), 0.0), c(1.0, 0.0)).unwrap();
    let raw = full_matrix_power(&single_step(d, &coin), t);
    let n = 2 * d;
    let u = block_of(&raw, 0, 0, n);
    let v = block_of(&raw, 0, n, n);

    let input = reference_input(d);
    let alpha = input.amplitudes();
    let beta_raw = &u * alpha + &v * alpha.conjugate();

    let spectral = spectral_propagator_pdc(d, 2.0_f64.sqrt(), 1.0, t as f64).unwrap();
    let beta_spectral = spectral.apply_amplitudes(&input).unwrap();
    for i in 0..n {
        assert!(
            (beta_raw[i] - beta_spectral[i]).norm() < 1e-9,
            "mode {i}: {} vs {}",
            beta_raw[i],
            beta_spectral[i]
        );
    }
}

#[test]
fn per_wavenumber_entries_follow_the_closed_form() {
    // Fourier-domain diagonal of the propagated U block: rotation modes stay
    // bounded for all t, squeezing modes grow with cosh(t Re Xi)
    let d = 11;
    let mu = 2.0_f64.sqrt();
    let coin = CoinSpec::Pdc {
        mu: c(mu, 0.0),
        nu: c(1.0, 0.0),
    };
    let data = spectral_data(d, &coin).unwrap();
    let f = dft_matrix(d);
    let fstar = f.conjugate();
    for t in [1usize, 5, 10, 20, 40] {
        let walk = spectral_propagator_pdc(d, mu, 1.0, t as f64).unwrap();
        let a_hat = &f * block_of(walk.u(), 0, 0, d) * &fstar;
        for k in 0..d {
            let magnitude = a_hat[(k, k)].norm();
            match data.regime[k] {
                SpectralRegime::Squeezing => {
                    let growth = (t as f64 * data.exponent[k].re.abs()).cosh();
                    assert!(
                        magnitude >= growth * (1.0 - 1e-9),
                        "t={t} k={k}: {magnitude} < cosh bound {growth}"
                    );
                }
                SpectralRegime::Rotation => {
                    let cos = mu * data.omega[k].re;
                    let bound = 1.0 + mu * data.omega[k].im.abs() / (1.0 - cos * cos).sqrt();
                    assert!(
                        magnitude <= bound + 1e-9,
                        "t={t} k={k}: {magnitude} > rotation bound {bound}"
                    );
                }
            }
        }
    }
}

#[test]
fn gaussian_formalism_agrees_with_fock_oracle() {
    for xi in [0.1_f64, 0.5, 1.0] {
        let coin = pdc_coin(1, c(xi.cosh(), 0.0), c(xi.sinh(), 0.0)).unwrap();
        let vacuum = CoherentInput::vacuum(2);
        let state = two_mode_squeezed_vacuum(xi, 40).unwrap();
        let fock = fock_expectations(&state, 1e-8).unwrap();

        let nu2 = xi.sinh().powi(2);
        assert!((fock.mean_photon[0] - nu2).abs() < 1e-6, "xi={xi}");

        let m = photon_moment_matrix(&coin, &vacuum).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (m[(i, j)] - fock.moment_matrix[(i, j)]).abs() < 1e-6,
                    "xi={xi} M[{i}{j}]"
                );
            }
        }

        let cov = covariance_matrix(&coin).unwrap();
        let fock_min =
            gwalk_core::linalg::min_symmetric_eigenvalue(&fock.quadrature_covariance).unwrap();
        assert!(
            (cov.min_eigenvalue - fock_min).abs() < 1e-6,
            "xi={xi}: {} vs {}",
            cov.min_eigenvalue,
            fock_min
        );
    }
}

#[test]
fn recursion_and_walk_distributions_are_identical() {
    let inv = 1.0 / 2.0_f64.sqrt();
    for d in [5usize, 11] {
        let input = reference_input(d);
        for t in 0..=12 {
            let walk = spectral_propagator_bs(d, inv, inv, t as f64).unwrap();
            let p = intensity_distribution(&walk, &input, IntensityKind::PhotonMeans).unwrap();
            let psi =
                single_walker_recursion(d, c(inv, 0.0), c(inv, 0.0), t, input.amplitudes())
                    .unwrap();
            let total: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
            for x in 0..d {
                let reference = (psi[x].norm_sqr() + psi[d + x].norm_sqr()) / total;
                assert!(
                    (p[x] - reference).abs() < 1e-12,
                    "d={d} t={t} x={x}: {} vs {reference}",
                    p[x]
                );
            }
        }
    }
}
