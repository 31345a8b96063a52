//! The four subcommands: coin sweeps, walk time series, position
//! distributions, and the numerical cross-check suite.

use serde::{Deserialize, Serialize};

use gwalk_core::observables::{
    covariance_matrix, entanglement_bound, intensity_distribution, photon_moment_matrix,
    report_series, IntensityKind, ObservableReport,
};
use gwalk_core::propagator::{
    evolve_dense, spectral_propagator_bs, spectral_propagator_pdc,
};
use gwalk_core::transform::BogoliubovTransform;
use gwalk_core::walk::{classical_random_walk, coin_transform, splitting_ratio, step_transform};
use gwalk_core::{CoherentInput, CoinSpec, verify};

use crate::config::{CoinConfig, OutputFormat, ResolvedEngine, RunConfig};
use crate::output::{csv_cell, csv_float, csv_table, json_document, Document, Metadata};
use crate::CliError;

pub const WALK_COLUMNS: [&str; 8] = [
    "gmin",
    "squeeze_db",
    "squeeze_db_coin",
    "m_mineig",
    "mprime_mineig",
    "excess_noise",
    "amplification",
    "circ_var",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkRow {
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gmin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub squeeze_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub squeeze_db_coin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_mineig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mprime_mineig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excess_noise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplification: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circ_var: Option<f64>,
}

fn selected_columns(outputs: &[String]) -> Result<Vec<&'static str>, CliError> {
    if outputs.is_empty() {
        return Ok(WALK_COLUMNS.to_vec());
    }
    let mut selected = Vec::with_capacity(outputs.len());
    for name in outputs {
        match WALK_COLUMNS.iter().find(|c| *c == name) {
            Some(column) => selected.push(*column),
            None => {
                return Err(CliError::Config(format!(
                    "outputs: unknown observable {name:?}; valid names: {}",
                    WALK_COLUMNS.join(", ")
                )))
            }
        }
    }
    Ok(selected)
}

fn walk_row(report: &ObservableReport, columns: &[&str]) -> WalkRow {
    let pick = |name: &str, value: Option<f64>| {
        if columns.contains(&name) {
            value
        } else {
            None
        }
    };
    WalkRow {
        t: report.t,
        gmin: pick("gmin", Some(report.entanglement_bound)),
        squeeze_db: pick("squeeze_db", Some(report.covariance.squeezing_db)),
        squeeze_db_coin: pick("squeeze_db_coin", Some(report.coin_squeezing_db)),
        m_mineig: pick("m_mineig", Some(report.moment_min_eigenvalue)),
        mprime_mineig: pick("mprime_mineig", Some(report.coin_traced_min_eigenvalue)),
        excess_noise: pick("excess_noise", Some(report.excess_noise)),
        amplification: pick("amplification", report.amplification),
        circ_var: pick("circ_var", report.circular_variance),
    }
}

fn make_propagator(
    cfg: &RunConfig,
    engine: ResolvedEngine,
) -> Result<Box<dyn Fn(f64) -> gwalk_core::Result<BogoliubovTransform> + Sync + Send>, CliError> {
    let d = cfg.d;
    match (engine, &cfg.coin) {
        (ResolvedEngine::Spectral, CoinConfig::Pdc { xi }) => {
            let (mu, nu) = (xi.cosh(), xi.sinh());
            Ok(Box::new(move |t| spectral_propagator_pdc(d, mu, nu, t)))
        }
        (ResolvedEngine::Spectral, CoinConfig::Bs { theta }) => {
            let (tau, rho) = (theta.cos(), theta.sin());
            Ok(Box::new(move |t| spectral_propagator_bs(d, tau, rho, t)))
        }
        (ResolvedEngine::Spectral, CoinConfig::Composite { .. }) => Err(CliError::Config(
            "engine: no closed form for composite coins".into(),
        )),
        (ResolvedEngine::Dense, coin) => {
            let spec = coin.to_spec()?;
            let coin_t = coin_transform(d, &spec)?;
            let step = step_transform(d)?;
            let single = BogoliubovTransform::compose(&step, &coin_t)?;
            Ok(Box::new(move |t| evolve_dense(&single, t as usize)))
        }
    }
}

fn sorted_times(cfg: &RunConfig) -> Vec<f64> {
    let mut ts = cfg.t_values.clone();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    ts
}

pub fn run_walk(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let engine = cfg.resolve_engine()?;
    let columns = selected_columns(&cfg.outputs)?;
    let input = cfg.coherent_input()?;
    let propagate = make_propagator(cfg, engine)?;
    let t_values = sorted_times(cfg);
    let reports = report_series(&t_values, propagate, &input)?;
    let rows: Vec<WalkRow> = reports.iter().map(|r| walk_row(r, &columns)).collect();

    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut header = vec!["t"];
            header.extend(columns.iter());
            let table = rows
                .iter()
                .map(|row| {
                    let mut cells = vec![csv_float(row.t)];
                    for column in &columns {
                        let value = match *column {
                            "gmin" => row.gmin,
                            "squeeze_db" => row.squeeze_db,
                            "squeeze_db_coin" => row.squeeze_db_coin,
                            "m_mineig" => row.m_mineig,
                            "mprime_mineig" => row.mprime_mineig,
                            "excess_noise" => row.excess_noise,
                            "amplification" => row.amplification,
                            "circ_var" => row.circ_var,
                            _ => unreachable!("validated column"),
                        };
                        cells.push(csv_cell(value));
                    }
                    cells
                })
                .collect();
            csv_table(&header, table)
        }
        OutputFormat::Json => json_document(&Document {
            config: cfg.clone(),
            metadata: Metadata::new(engine.name()),
            rows,
        }),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DistributionOptions {
    pub classical: bool,
    pub p_forward: f64,
    pub coherent_only: bool,
    pub amplitudes: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionRow {
    pub t: f64,
    pub x: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeRow {
    pub t: f64,
    /// Flat mode index: x for coin +, d + x for coin -.
    pub x: usize,
    pub beta_re: f64,
    pub beta_im: f64,
    pub n_mean: f64,
}

enum DistributionRows {
    Positions(Vec<DistributionRow>),
    Modes(Vec<AmplitudeRow>),
}

fn classical_rows(cfg: &RunConfig, p_forward: f64) -> Result<Vec<DistributionRow>, CliError> {
    if !(0.0..=1.0).contains(&p_forward) {
        return Err(CliError::Config(format!(
            "--p-forward: {p_forward} outside [0, 1]"
        )));
    }
    let mut rows = Vec::new();
    for &t in &sorted_times(cfg) {
        if t.fract() != 0.0 {
            return Err(CliError::Config(
                "t_values: the classical reference walk needs integer times".into(),
            ));
        }
        let p = classical_random_walk(cfg.d, t as usize, p_forward)?;
        rows.extend(
            p.into_iter()
                .enumerate()
                .map(|(x, p)| DistributionRow { t, x, p }),
        );
    }
    Ok(rows)
}

fn quantum_rows(
    cfg: &RunConfig,
    engine: ResolvedEngine,
    opts: &DistributionOptions,
) -> Result<DistributionRows, CliError> {
    let input = cfg.coherent_input()?;
    let propagate = make_propagator(cfg, engine)?;
    let kind = if opts.coherent_only {
        IntensityKind::CoherentOnly
    } else {
        IntensityKind::PhotonMeans
    };
    if opts.amplitudes {
        let mut rows = Vec::new();
        for &t in &sorted_times(cfg) {
            let walk = propagate(t)?;
            let beta = walk.apply_amplitudes(&input)?;
            let means = gwalk_core::observables::photon_means(&walk, &input)?;
            for i in 0..beta.len() {
                rows.push(AmplitudeRow {
                    t,
                    x: i,
                    beta_re: beta[i].re,
                    beta_im: beta[i].im,
                    n_mean: means[i],
                });
            }
        }
        Ok(DistributionRows::Modes(rows))
    } else {
        let mut rows = Vec::new();
        for &t in &sorted_times(cfg) {
            let walk = propagate(t)?;
            let p = intensity_distribution(&walk, &input, kind)?;
            rows.extend(
                p.into_iter()
                    .enumerate()
                    .map(|(x, p)| DistributionRow { t, x, p }),
            );
        }
        Ok(DistributionRows::Positions(rows))
    }
}

pub fn run_distribution(cfg: &RunConfig, opts: &DistributionOptions) -> Result<String, CliError> {
    cfg.validate()?;
    let (rows, engine_name) = if opts.classical {
        (
            DistributionRows::Positions(classical_rows(cfg, opts.p_forward)?),
            "classical".to_string(),
        )
    } else {
        let engine = cfg.resolve_engine()?;
        (quantum_rows(cfg, engine, opts)?, engine.name().to_string())
    };

    Ok(match (cfg.format, rows) {
        (OutputFormat::Csv, DistributionRows::Positions(rows)) => csv_table(
            &["t", "x", "p"],
            rows.iter()
                .map(|r| vec![csv_float(r.t), r.x.to_string(), csv_float(r.p)])
                .collect(),
        ),
        (OutputFormat::Csv, DistributionRows::Modes(rows)) => csv_table(
            &["t", "x", "beta_re", "beta_im", "n_mean"],
            rows.iter()
                .map(|r| {
                    vec![
                        csv_float(r.t),
                        r.x.to_string(),
                        csv_float(r.beta_re),
                        csv_float(r.beta_im),
                        csv_float(r.n_mean),
                    ]
                })
                .collect(),
        ),
        (OutputFormat::Json, DistributionRows::Positions(rows)) => json_document(&Document {
            config: cfg.clone(),
            metadata: Metadata::new(&engine_name),
            rows,
        }),
        (OutputFormat::Json, DistributionRows::Modes(rows)) => json_document(&Document {
            config: cfg.clone(),
            metadata: Metadata::new(&engine_name),
            rows,
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum SweepKind {
    Pdc,
    Bs,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoinSweepConfig {
    pub kind: SweepKind,
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoinRow {
    /// Squeezing parameter xi (pdc) or rotation angle theta (bs).
    pub parameter: f64,
    pub r: f64,
    pub squeeze_db: f64,
    pub gmin: f64,
    pub m_mineig: f64,
}

/// Per-parameter properties of a single coin: splitting ratio, squeezing,
/// separability bound, and the minimal moment-matrix eigenvalue for vacuum
/// input.
pub fn run_coin(sweep: &CoinSweepConfig, format: OutputFormat) -> Result<String, CliError> {
    if sweep.points == 0 {
        return Err(CliError::Config("--points must be at least 1".into()));
    }
    if !sweep.start.is_finite() || !sweep.end.is_finite() {
        return Err(CliError::Config("--start/--end must be finite".into()));
    }
    let vacuum = CoherentInput::vacuum(2);
    let mut rows = Vec::with_capacity(sweep.points);
    for i in 0..sweep.points {
        let parameter = if sweep.points == 1 {
            sweep.start
        } else {
            sweep.start + (sweep.end - sweep.start) * i as f64 / (sweep.points - 1) as f64
        };
        let spec = match sweep.kind {
            SweepKind::Pdc => CoinSpec::from_squeezing(parameter),
            SweepKind::Bs => CoinSpec::from_angle(parameter),
        };
        let transform = coin_transform(1, &spec)?;
        let r = splitting_ratio(&spec)?;
        let covariance = covariance_matrix(&transform)?;
        let gmin = entanglement_bound(&transform)?;
        let moment = photon_moment_matrix(&transform, &vacuum)?;
        let m_mineig = gwalk_core::linalg::min_symmetric_eigenvalue(&moment)?;
        rows.push(CoinRow {
            parameter,
            r,
            squeeze_db: covariance.squeezing_db,
            gmin,
            m_mineig,
        });
    }

    let parameter_name = match sweep.kind {
        SweepKind::Pdc => "xi",
        SweepKind::Bs => "theta",
    };
    Ok(match format {
        OutputFormat::Csv => csv_table(
            &[parameter_name, "r", "squeeze_db", "gmin", "m_mineig"],
            rows.iter()
                .map(|row| {
                    vec![
                        csv_float(row.parameter),
                        csv_float(row.r),
                        csv_float(row.squeeze_db),
                        csv_float(row.gmin),
                        csv_float(row.m_mineig),
                    ]
                })
                .collect(),
        ),
        OutputFormat::Json => json_document(&Document {
            config: sweep.clone(),
            metadata: Metadata::new("direct"),
            rows,
        }),
    })
}

/// Runs the cross-check suite; returns the printable report and whether
/// every check passed.
pub fn run_verify() -> (String, bool) {
    let outcomes = verify::run_all(verify::DEFAULT_SEED);
    let mut text = String::new();
    let mut all_passed = true;
    for outcome in &outcomes {
        all_passed &= outcome.passed;
        text.push_str(&format!(
            "{:<24} {}  residual {:.3e}  tolerance {:.1e}  ({})\n",
            outcome.name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.residual,
            outcome.tolerance,
            outcome.detail
        ));
    }
    let passed_count = outcomes.iter().filter(|o| o.passed).count();
    text.push_str(&format!(
        "{passed_count}/{} checks passed\n",
        outcomes.len()
    ));
    (text, all_passed)
}
