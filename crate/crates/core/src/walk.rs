//! Constructors for the walk's building blocks: the cyclic shift, the
//! beam-splitter and two-mode-squeezer coins, composite coins, parameter
//! conversions, and the classical random-walk reference distribution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layout::CoherentInput;
use crate::linalg::{write_block, CMat};
use crate::transform::BogoliubovTransform;

/// Relative tolerance for the coin-parameter constraints
/// |tau|^2 + |rho|^2 = 1 and |mu|^2 - |nu|^2 = 1.
pub const COIN_CONSTRAINT_TOL: f64 = 1e-9;

/// Parametric description of a coin operation.
#[derive(Debug, Clone, PartialEq)]
pub enum CoinSpec {
    /// Beam splitter with |tau|^2 + |rho|^2 = 1; purely unitary.
    Bs { tau: Complex64, rho: Complex64 },
    /// Two-mode squeezer with |mu|^2 - |nu|^2 = 1.
    Pdc { mu: Complex64, nu: Complex64 },
    /// Coins applied in listed order.
    Composite(Vec<CoinSpec>),
}

impl CoinSpec {
    /// Beam-splitter coin from a rotation angle: tau = cos, rho = sin.
    pub fn from_angle(theta: f64) -> Self {
        CoinSpec::Bs {
            tau: Complex64::new(theta.cos(), 0.0),
            rho: Complex64::new(theta.sin(), 0.0),
        }
    }

    /// Squeezer coin from a squeezing parameter: mu = cosh, nu = sinh.
    pub fn from_squeezing(xi: f64) -> Self {
        CoinSpec::Pdc {
            mu: Complex64::new(xi.cosh(), 0.0),
            nu: Complex64::new(xi.sinh(), 0.0),
        }
    }

    pub fn check_constraint(&self) -> Result<()> {
        match self {
            CoinSpec::Bs { tau, rho } => {
                let norm = tau.norm_sqr() + rho.norm_sqr();
                if (norm - 1.0).abs() > COIN_CONSTRAINT_TOL * norm.max(1.0) {
                    return Err(Error::InvalidCoin(format!(
                        "|tau|^2 + |rho|^2 = {norm}, expected 1"
                    )));
                }
                Ok(())
            }
            CoinSpec::Pdc { mu, nu } => {
                let diff = mu.norm_sqr() - nu.norm_sqr();
                if (diff - 1.0).abs() > COIN_CONSTRAINT_TOL * mu.norm_sqr().max(1.0) {
                    return Err(Error::InvalidCoin(format!(
                        "|mu|^2 - |nu|^2 = {diff}, expected 1"
                    )));
                }
                Ok(())
            }
            CoinSpec::Composite(specs) => {
                if specs.is_empty() {
                    return Err(Error::InvalidCoin("empty composite coin".into()));
                }
                specs.iter().try_for_each(CoinSpec::check_constraint)
            }
        }
    }

    /// True when all parameters have negligible imaginary part, which is the
    /// regime covered by the closed-form spectral propagators.
    pub fn is_real(&self) -> bool {
        const IM_TOL: f64 = 1e-12;
        match self {
            CoinSpec::Bs { tau, rho } => tau.im.abs() <= IM_TOL && rho.im.abs() <= IM_TOL,
            CoinSpec::Pdc { mu, nu } => mu.im.abs() <= IM_TOL && nu.im.abs() <= IM_TOL,
            CoinSpec::Composite(specs) => specs.iter().all(CoinSpec::is_real),
        }
    }
}

/// Walk geometry and inputs: `d` positions on a cycle, a homogeneous coin,
/// a step count (real values select the continuous evolution), and the
/// coherent input amplitudes.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    pub d: usize,
    pub coin: CoinSpec,
    pub t: f64,
    pub input: CoherentInput,
}

impl WalkSpec {
    pub fn check(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::DimensionMismatch(
                "walk needs at least two positions".into(),
            ));
        }
        if self.input.len() != 2 * self.d {
            return Err(Error::DimensionMismatch(format!(
                "input has {} amplitudes, walk has {} modes",
                self.input.len(),
                2 * self.d
            )));
        }
        if self.t.is_nan() || self.t < 0.0 {
            return Err(Error::Domain(format!("negative step count {}", self.t)));
        }
        self.coin.check_constraint()
    }

    /// Coin followed by the coin-conditioned shift.
    pub fn single_step(&self) -> Result<BogoliubovTransform> {
        let coin = coin_transform(self.d, &self.coin)?;
        let step = step_transform(self.d)?;
        BogoliubovTransform::compose(&step, &coin)
    }
}

/// Cyclic forward-shift permutation with entries delta_{x' = x+1 mod d}.
pub fn shift_matrix(d: usize) -> Result<CMat> {
    if d < 2 {
        return Err(Error::DimensionMismatch(
            "shift needs at least two positions".into(),
        ));
    }
    Ok(CMat::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Step transform: + modes shift forward, - modes shift backward;
/// U = diag(Sigma, Sigma^T), V = 0.
pub fn step_transform(d: usize) -> Result<BogoliubovTransform> {
    let sigma = shift_matrix(d)?;
    let mut u = CMat::zeros(2 * d, 2 * d);
    write_block(&mut u, 0, 0, &sigma);
    write_block(&mut u, d, d, &sigma.transpose());
    BogoliubovTransform::new(u, CMat::zeros(2 * d, 2 * d))
}

/// Squeezer coin acting identically at every position:
/// U = mu id, V = nu [[0, id], [id, 0]].
pub fn pdc_coin(d: usize, mu: Complex64, nu: Complex64) -> Result<BogoliubovTransform> {
    let spec = CoinSpec::Pdc { mu, nu };
    spec.check_constraint()?;
    if d == 0 {
        return Err(Error::DimensionMismatch("coin needs d >= 1".into()));
    }
    let n = 2 * d;
    let mut u = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    for x in 0..d {
        u[(x, x)] = mu;
        u[(d + x, d + x)] = mu;
        v[(x, d + x)] = nu;
        v[(d + x, x)] = nu;
    }
    BogoliubovTransform::new(u, v)
}

/// Beam-splitter coin acting identically at every position:
/// U = [[tau id, rho id], [-rho^* id, tau^* id]], V = 0.
pub fn bs_coin(d: usize, tau: Complex64, rho: Complex64) -> Result<BogoliubovTransform> {
    let spec = CoinSpec::Bs { tau, rho };
    spec.check_constraint()?;
    if d == 0 {
        return Err(Error::DimensionMismatch("coin needs d >= 1".into()));
    }
    let n = 2 * d;
    let mut u = CMat::zeros(n, n);
    for x in 0..d {
        u[(x, x)] = tau;
        u[(x, d + x)] = rho;
        u[(d + x, x)] = -rho.conj();
        u[(d + x, d + x)] = tau.conj();
    }
    BogoliubovTransform::new(u, CMat::zeros(n, n))
}

/// Composition of the listed coins in application order (first entry acts
/// first). Nested composites are flattened.
pub fn composite_coin(d: usize, specs: &[CoinSpec]) -> Result<BogoliubovTransform> {
    if specs.is_empty() {
        return Err(Error::InvalidCoin("empty composite coin".into()));
    }
    let mut total: Option<BogoliubovTransform> = None;
    for spec in specs {
        let next = coin_transform(d, spec)?;
        total = Some(match total {
            None => next,
            Some(acc) => BogoliubovTransform::compose(&next, &acc)?,
        });
    }
    Ok(total.expect("non-empty spec list"))
}

pub fn coin_transform(d: usize, spec: &CoinSpec) -> Result<BogoliubovTransform> {
    match spec {
        CoinSpec::Bs { tau, rho } => bs_coin(d, *tau, *rho),
        CoinSpec::Pdc { mu, nu } => pdc_coin(d, *mu, *nu),
        CoinSpec::Composite(list) => composite_coin(d, list),
    }
}

/// Ratio of reflected to transmitted intensity: |rho|^2/|tau|^2 for a beam
/// splitter, |nu|^2/|mu|^2 for a squeezer.
pub fn splitting_ratio(spec: &CoinSpec) -> Result<f64> {
    match spec {
        CoinSpec::Bs { tau, rho } => {
            if tau.norm_sqr() == 0.0 {
                return Err(Error::Domain(
                    "splitting ratio unbounded for tau = 0".into(),
                ));
            }
            Ok(rho.norm_sqr() / tau.norm_sqr())
        }
        CoinSpec::Pdc { mu, nu } => Ok(nu.norm_sqr() / mu.norm_sqr()),
        CoinSpec::Composite(_) => Err(Error::InvalidCoin(
            "splitting ratio is defined for simple coins only".into(),
        )),
    }
}

/// Distribution of a classical walker after `t` fair-or-biased coin tosses,
/// starting at x = 0 and wrapping mod d. Steps go forward with probability
/// `p_forward`.
pub fn classical_random_walk(d: usize, t: usize, p_forward: f64) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::DimensionMismatch(
            "walk needs at least two positions".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p_forward) {
        return Err(Error::Domain(format!(
            "step probability {p_forward} outside [0, 1]"
        )));
    }
    let mut p = vec![0.0; d];
    p[0] = 1.0;
    let mut next = vec![0.0; d];
    for _ in 0..t {
        for x in 0..d {
            let from_behind = p[(x + d - 1) % d] * p_forward;
            let from_ahead = p[(x + 1) % d] * (1.0 - p_forward);
            next[x] = from_behind + from_ahead;
        }
        std::mem::swap(&mut p, &mut next);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{CoinValue, ModeLayout};
    use crate::linalg::max_abs;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_matrix_d3_matches_definition() {
        let s = shift_matrix(3).unwrap();
        let expected = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        for r in 0..3 {
            for col in 0..3 {
                assert_eq!(s[(r, col)].re, expected[r][col]);
                assert_eq!(s[(r, col)].im, 0.0);
            }
        }
        assert!(shift_matrix(1).is_err());
    }

    #[test]
    fn shift_has_cyclic_order_d() {
        let s = shift_matrix(5).unwrap();
        let mut power = CMat::identity(5, 5);
        for _ in 0..5 {
            power = &s * power;
        }
        assert!(max_abs(&(&power - CMat::identity(5, 5))) == 0.0);
    }

    #[test]
    fn step_transform_is_linear_and_cyclic() {
        let d = 4;
        let step = step_transform(d).unwrap();
        assert!(step.is_linear());
        assert!(step.is_valid(1e-12));
        let mut t = BogoliubovTransform::identity(2 * d);
        for _ in 0..d {
            t = BogoliubovTransform::compose(&step, &t).unwrap();
        }
        assert!(max_abs(&(t.u() - BogoliubovTransform::identity(2 * d).u())) == 0.0);
    }

    #[test]
    fn step_moves_plus_amplitude_forward() {
        let d = 4;
        let layout = ModeLayout::new(d).unwrap();
        let step = step_transform(d).unwrap();
        let input =
            CoherentInput::from_entries(&layout, &[(0, CoinValue::Plus, c(1.0, 0.0))]).unwrap();
        let beta = step.apply_amplitudes(&input).unwrap();
        let target = layout.index(1, CoinValue::Plus).unwrap();
        for i in 0..2 * d {
            let expected = if i == target { 1.0 } else { 0.0 };
            assert_relative_eq!(beta[i].re, expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn pdc_coin_rejects_constraint_violation() {
        assert!(pdc_coin(3, c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(pdc_coin(3, c(2.0_f64.sqrt(), 0.0), c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn trivial_coins_are_identities() {
        let d = 3;
        let id = BogoliubovTransform::identity(2 * d);
        let pdc = pdc_coin(d, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(max_abs(&(pdc.u() - id.u())) == 0.0);
        assert!(max_abs(pdc.v()) == 0.0);
        let bs = bs_coin(d, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(max_abs(&(bs.u() - id.u())) == 0.0);
    }

    #[test]
    fn constructed_transforms_validate_tightly() {
        for d in [1usize, 2, 3, 11] {
            for xi in [0.5, 1.0, 2.0, 3.0] {
                let spec = CoinSpec::from_squeezing(xi);
                let coin = coin_transform(d, &spec).unwrap();
                assert!(coin.is_valid(1e-12), "pdc d={d} xi={xi}");
            }
            let bs = coin_transform(d, &CoinSpec::from_angle(0.7)).unwrap();
            assert!(bs.is_valid(1e-12), "bs d={d}");
        }
        for d in [2usize, 3, 11] {
            assert!(step_transform(d).unwrap().is_valid(1e-12));
        }
    }

    #[test]
    fn coins_commute_with_position_relabeling() {
        // conjugating a homogeneous coin by a uniform cyclic relabeling of
        // positions (both coin values shifted the same way) leaves it
        // unchanged, since all coin blocks are multiples of the identity
        let d = 5;
        let sigma = shift_matrix(d).unwrap();
        let mut rot = CMat::zeros(2 * d, 2 * d);
        crate::linalg::write_block(&mut rot, 0, 0, &sigma);
        crate::linalg::write_block(&mut rot, d, d, &sigma);
        let relabel = BogoliubovTransform::new(rot, CMat::zeros(2 * d, 2 * d)).unwrap();
        for coin in [
            pdc_coin(d, c(2.0_f64.sqrt(), 0.0), c(1.0, 0.0)).unwrap(),
            bs_coin(d, c(0.6, 0.0), c(0.8, 0.0)).unwrap(),
        ] {
            let conjugated = BogoliubovTransform::compose(
                &relabel,
                &BogoliubovTransform::compose(&coin, &relabel.inverse().unwrap()).unwrap(),
            )
            .unwrap();
            assert!(max_abs(&(conjugated.u() - coin.u())) < 1e-14);
            assert!(max_abs(&(conjugated.v() - coin.v())) < 1e-14);
        }
    }

    #[test]
    fn composite_of_pdc_then_bs_matches_block_formula() {
        let d = 3;
        let mu = 2.0_f64.sqrt();
        let nu = 1.0;
        let tau = 1.0 / 2.0_f64.sqrt();
        let rho = tau;
        let specs = [
            CoinSpec::Pdc {
                mu: c(mu, 0.0),
                nu: c(nu, 0.0),
            },
            CoinSpec::Bs {
                tau: c(tau, 0.0),
                rho: c(rho, 0.0),
            },
        ];
        let coin = composite_coin(d, &specs).unwrap();
        assert!(coin.is_valid(1e-12));
        // real-parameter entries of the combined coin blocks
        let u_blocks = [[mu * tau, mu * rho], [-mu * rho, mu * tau]];
        let v_blocks = [[nu * rho, nu * tau], [nu * tau, -nu * rho]];
        for (bi, row) in u_blocks.iter().enumerate() {
            for (bj, &val) in row.iter().enumerate() {
                for x in 0..d {
                    assert_relative_eq!(coin.u()[(bi * d + x, bj * d + x)].re, val, epsilon = 1e-14);
                    assert_relative_eq!(coin.v()[(bi * d + x, bj * d + x)].re, v_blocks[bi][bj], epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn composite_of_one_coin_is_that_coin() {
        let d = 2;
        let spec = CoinSpec::from_angle(0.4);
        let single = coin_transform(d, &spec).unwrap();
        let composite = composite_coin(d, &[spec]).unwrap();
        assert!(max_abs(&(single.u() - composite.u())) == 0.0);
    }

    #[test]
    fn parameter_conversions_hit_reference_points() {
        let xi = (2.0_f64.sqrt() + 1.0).ln();
        match CoinSpec::from_squeezing(xi) {
            CoinSpec::Pdc { mu, nu } => {
                assert_relative_eq!(mu.re, 2.0_f64.sqrt(), epsilon = 1e-14);
                assert_relative_eq!(nu.re, 1.0, epsilon = 1e-14);
            }
            _ => unreachable!(),
        }
        match CoinSpec::from_angle(std::f64::consts::FRAC_PI_4) {
            CoinSpec::Bs { tau, rho } => {
                assert_relative_eq!(tau.re, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-14);
                assert_relative_eq!(rho.re, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-14);
            }
            _ => unreachable!(),
        }
        match CoinSpec::from_squeezing(0.0) {
            CoinSpec::Pdc { mu, nu } => {
                assert_eq!(mu.re, 1.0);
                assert_eq!(nu.re, 0.0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn splitting_ratio_reference_values() {
        let xi = (2.0_f64.sqrt() + 1.0).ln();
        let r = splitting_ratio(&CoinSpec::from_squeezing(xi)).unwrap();
        assert_relative_eq!(r, 0.5, epsilon = 1e-12);
        let fair = splitting_ratio(&CoinSpec::from_angle(std::f64::consts::FRAC_PI_4)).unwrap();
        assert_relative_eq!(fair, 1.0, epsilon = 1e-12);
        assert_eq!(splitting_ratio(&CoinSpec::from_angle(0.0)).unwrap(), 0.0);
        // monotone and bounded toward 1
        let mut last = 0.0;
        for k in 1..=40 {
            let r = splitting_ratio(&CoinSpec::from_squeezing(0.25 * k as f64)).unwrap();
            assert!(r > last && r <= 1.0);
            last = r;
        }
        assert!(last > 0.999);
        assert!(splitting_ratio(&CoinSpec::Composite(vec![CoinSpec::from_angle(0.1)])).is_err());
        assert!(splitting_ratio(&CoinSpec::Bs {
            tau: c(0.0, 0.0),
            rho: c(1.0, 0.0)
        })
        .is_err());
    }

    #[test]
    fn walk_spec_checks_geometry_and_builds_the_single_step() {
        let d = 5;
        let spec = WalkSpec {
            d,
            coin: CoinSpec::from_squeezing(0.8),
            t: 3.0,
            input: CoherentInput::vacuum(2 * d),
        };
        spec.check().unwrap();
        let single = spec.single_step().unwrap();
        let reference = BogoliubovTransform::compose(
            &step_transform(d).unwrap(),
            &coin_transform(d, &spec.coin).unwrap(),
        )
        .unwrap();
        assert!(max_abs(&(single.u() - reference.u())) == 0.0);

        let short_input = WalkSpec {
            input: CoherentInput::vacuum(3),
            ..spec.clone()
        };
        assert!(short_input.check().is_err());
        let negative_time = WalkSpec { t: -1.0, ..spec.clone() };
        assert!(negative_time.check().is_err());
        let too_small = WalkSpec { d: 1, ..spec };
        assert!(too_small.check().is_err());
    }

    #[test]
    fn classical_walk_start_and_first_step() {
        let p0 = classical_random_walk(11, 0, 0.5).unwrap();
        assert_eq!(p0[0], 1.0);
        assert_eq!(p0.iter().skip(1).sum::<f64>(), 0.0);
        let p1 = classical_random_walk(11, 1, 0.5).unwrap();
        assert_relative_eq!(p1[1], 0.5, epsilon = 1e-15);
        assert_relative_eq!(p1[10], 0.5, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn splitting_ratio_equals_tanh_squared(xi in -4.0..4.0f64) {
            let r = splitting_ratio(&CoinSpec::from_squeezing(xi)).unwrap();
            prop_assert!((r - xi.tanh().powi(2)).abs() < 1e-12);
        }

        #[test]
        fn classical_walk_conserves_probability(
            t in 0usize..10_000,
            p in 0.0..1.0f64,
            d in 2usize..17,
        ) {
            let dist = classical_random_walk(d, t, p).unwrap();
            let total: f64 = dist.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(dist.iter().all(|&x| x >= 0.0));
        }
    }
}
