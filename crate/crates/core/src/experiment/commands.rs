use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::distributions::{Distribution, WeightedIndex};
use rand_distr::Poisson;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, SampleMode, Subcommand};
use super::record::{Centering, CenteringPolicy, Comparison, MomentRow, RunRecord, SampleRow, Table};
use super::summary::{exact_power_means, exact_to_f64, histogram, mean, mean_se, power_moments};
use crate::asymptotics::{
    cross_moment_targets, finite_n_moment, finite_n_moment_supported, gaussian_moments_k1, limiting_moments,
    poissonized_finite_n_moments, poissonized_moments,
};
use crate::combinat::{biguint_to_f64, binomial, factorial, rational_to_f64};
use crate::density::{cdf, density_at_zero, density_p, CdfTable};
use crate::equidist::{
    bounded_harmonic_sum, discrepancy_1d, discrepancy_2d, empirical_power_mean, power_mean_limit, weighted_power_mean,
    weighted_power_mean_limit, weyl_sum, FracSequence,
};
use crate::perm::{sample_ewens, CycleType, EwensParams};
use crate::rng::{derive_seed, rng_from_seed};
use crate::spectra::{
    expected_count, hook_irrep_angle_index, hook_irrep_count, induced_subset_cycle_type, induced_tuple_cycle_type,
    rep_count, y_statistic_exact, y_statistic_table, FracTable, Interval, Mode, EXACT_CENTERING_MAX_N,
    IRREP_ENUMERATION_BOUND,
};
use crate::{Error, Result};

/// Largest `n` for which Poissonized runs compute exact finite-n targets.
pub const POISSONIZED_EXACT_MAX_N: usize = 100_000;

/// Cells of the tabulated limiting CDF used for Kolmogorov-Smirnov distances.
const KS_CDF_CELLS: usize = 4000;

/// Kolmogorov-Smirnov tolerance reported by `density`; calibrated at
/// `n = 5000`, not derived.
pub const KS_TOLERANCE: f64 = 0.05;

/// Validates `config` and runs its subcommand, on `config.workers` threads
/// when set.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    config.validate()?;
    let start = Instant::now();
    let mut record = in_pool(config.workers, || match config.subcommand {
        Subcommand::Sample => sample(config),
        Subcommand::Moments => moments(config),
        Subcommand::Density => density(config),
        Subcommand::Crossmoments => crossmoments(config),
        Subcommand::Discrepancy => discrepancy(config),
        Subcommand::Spectrum => spectrum(config),
    })??;
    if config.timing {
        record.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(record)
}

fn with_subcommand(config: &ExperimentConfig, sub: Subcommand) -> ExperimentConfig {
    ExperimentConfig {
        subcommand: sub,
        ..config.clone()
    }
}

pub fn cmd_sample(config: &ExperimentConfig) -> Result<RunRecord> {
    run(&with_subcommand(config, Subcommand::Sample))
}

pub fn cmd_moments(config: &ExperimentConfig) -> Result<RunRecord> {
    run(&with_subcommand(config, Subcommand::Moments))
}

pub fn cmd_density(config: &ExperimentConfig) -> Result<RunRecord> {
    run(&with_subcommand(config, Subcommand::Density))
}

pub fn cmd_crossmoments(config: &ExperimentConfig) -> Result<RunRecord> {
    run(&with_subcommand(config, Subcommand::Crossmoments))
}

pub fn cmd_discrepancy(config: &ExperimentConfig) -> Result<RunRecord> {
    run(&with_subcommand(config, Subcommand::Discrepancy))
}

pub fn cmd_spectrum(config: &ExperimentConfig) -> Result<RunRecord> {
    run(&with_subcommand(config, Subcommand::Spectrum))
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

struct Setup {
    n: usize,
    k: usize,
    theta: BigRational,
    params: EwensParams,
    interval: Interval,
    table: FracTable,
}

impl Setup {
    fn new(config: &ExperimentConfig) -> Result<Self> {
        let theta = config.theta_value()?;
        let interval = config.interval()?;
        Ok(Setup {
            n: config.n,
            k: config.k,
            params: EwensParams::new(config.n, theta.clone())?,
            table: FracTable::new(&interval, config.n),
            theta,
            interval,
        })
    }

    /// Common denominator of the `Y` numerators: `D n^{k-1}`.
    fn y_denominator(&self) -> BigInt {
        BigInt::from(self.table.denom().clone()) * num_traits::pow(BigInt::from(self.n), self.k - 1)
    }

    /// `1 / sqrt(log n)` for `k = 1`, where moments refer to `Z_n`.
    fn z_scale(&self) -> f64 {
        if self.k == 1 {
            1.0 / (self.n as f64).ln().sqrt()
        } else {
            1.0
        }
    }
}

/// One sample: the statistic `y`, its exact numerator over
/// [`Setup::y_denominator`], and the eigenangle count in representation modes.
struct Draw {
    seed: u64,
    y: f64,
    numer: BigInt,
    count: Option<BigUint>,
}

fn y_numerator(ct: &CycleType, k: usize, table: &FracTable) -> BigInt {
    ct.counts()
        .iter()
        .map(|(&j, &c)| table.delta_numer(j) * BigInt::from(c) * num_traits::pow(BigInt::from(j), k - 1))
        .sum()
}

/// Draws `Y* = sum_j j^{k-1} W_j delta_j / n^{k-1}` by superposition: the
/// total count is Poisson(theta H_n) and each event picks `j` with weight `1/j`.
struct PoissonSampler {
    total: Poisson<f64>,
    index: WeightedIndex<f64>,
}

impl PoissonSampler {
    fn new(setup: &Setup) -> Result<Self> {
        let theta = rational_to_f64(&setup.theta);
        let weights: Vec<f64> = (1..=setup.n).map(|j| 1.0 / j as f64).collect();
        let harmonic: f64 = super::summary::compensated_sum(weights.iter().copied());
        Ok(PoissonSampler {
            total: Poisson::new(theta * harmonic)
                .map_err(|e| Error::InvalidParameter(format!("Poisson rate: {e}")))?,
            index: WeightedIndex::new(&weights).map_err(|e| Error::InvalidParameter(format!("weights: {e}")))?,
        })
    }

    fn draw(&self, setup: &Setup, seed: u64) -> (f64, BigInt) {
        let mut rng = rng_from_seed(seed);
        let events = self.total.sample(&mut rng) as u64;
        let mut numer = BigInt::from(0);
        let mut y = super::summary::Compensated::default();
        let scale = (setup.n as f64).powi(setup.k as i32 - 1);
        for _ in 0..events {
            let j = self.index.sample(&mut rng) + 1;
            numer += setup.table.delta_numer(j) * num_traits::pow(BigInt::from(j), setup.k - 1);
            y.add((j as f64).powi(setup.k as i32 - 1) * setup.table.delta(j) / scale);
        }
        (y.value(), numer)
    }
}

fn draw_all(config: &ExperimentConfig, setup: &Setup) -> Result<Vec<Draw>> {
    let poisson = match config.mode {
        SampleMode::Poissonized => Some(PoissonSampler::new(setup)?),
        _ => None,
    };
    (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i as u64);
            if let Some(p) = &poisson {
                let (y, numer) = p.draw(setup, seed);
                return Ok(Draw {
                    seed,
                    y,
                    numer,
                    count: None,
                });
            }
            let ct = sample_ewens(&setup.params, seed);
            let count = match config.mode.representation() {
                Some(mode) => Some(rep_count(&ct, setup.k, &setup.interval, mode)?),
                None => None,
            };
            Ok(Draw {
                seed,
                y: y_statistic_table(&ct, setup.k, &setup.table),
                numer: y_numerator(&ct, setup.k, &setup.table),
                count,
            })
        })
        .collect()
}

/// Centering of the representation count: exact for small `n`, otherwise
/// the sample mean.
fn centering(setup: &Setup, mode: Mode, counts: &[f64]) -> Result<(f64, Centering)> {
    let mut note = None;
    if setup.n <= EXACT_CENTERING_MAX_N {
        match expected_count(setup.n, setup.k, &setup.theta, &setup.interval, mode) {
            Ok(e) => {
                let value = rational_to_f64(&e);
                return Ok((
                    value,
                    Centering {
                        policy: CenteringPolicy::Exact,
                        value: Some(value),
                        exact: Some(e.to_string()),
                        note: None,
                    },
                ));
            }
            Err(e @ Error::BoundExceeded { .. }) => note = Some(format!("exact centering unavailable: {e}")),
            Err(e) => return Err(e),
        }
    }
    let value = mean(counts);
    Ok((
        value.unwrap_or(0.0),
        Centering {
            policy: CenteringPolicy::SampleMean,
            value,
            exact: None,
            note,
        },
    ))
}

/// Normalized representation statistics `(X - c) s / n^{k-1}` with `s = k!`
/// in set and irrep modes.
fn mode_statistics(setup: &Setup, mode: Mode, draws: &[Draw]) -> Result<(Vec<f64>, Centering)> {
    let counts: Vec<f64> = draws
        .iter()
        .map(|d| biguint_to_f64(d.count.as_ref().expect("representation count")))
        .collect();
    let (c, info) = centering(setup, mode, &counts)?;
    let scale = match mode {
        Mode::Tuple => 1.0,
        Mode::Set | Mode::Irrep => biguint_to_f64(&factorial(setup.k as u64)),
    } / (setup.n as f64).powi(setup.k as i32 - 1);
    Ok((counts.iter().map(|x| (x - c) * scale).collect(), info))
}

fn limit_targets(setup: &Setup, mode: SampleMode, max_m: usize) -> Result<Vec<Option<BigRational>>> {
    if setup.k == 1 {
        return (1..=max_m).map(|m| gaussian_moments_k1(&setup.theta, m).map(Some)).collect();
    }
    if mode == SampleMode::Poissonized {
        let p = poissonized_moments(setup.k, &setup.theta, max_m)?;
        return Ok(p.into_iter().skip(1).map(Some).collect());
    }
    let t = limiting_moments(setup.k, &setup.theta, max_m.max(2))?;
    (1..=max_m).map(|m| t.moment(m).cloned().map(Some)).collect()
}

fn finite_targets(setup: &Setup, mode: SampleMode, max_m: usize) -> Result<Vec<Option<BigRational>>> {
    let none = vec![None; max_m];
    if setup.k == 1 {
        return Ok(none);
    }
    match mode {
        SampleMode::CycleStatistic => (1..=max_m)
            .map(|m| {
                if finite_n_moment_supported(setup.n, m) {
                    finite_n_moment(setup.n, setup.k, &setup.theta, &setup.interval, m).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect(),
        SampleMode::Poissonized if setup.n <= POISSONIZED_EXACT_MAX_N => {
            let p = poissonized_finite_n_moments(setup.n, setup.k, &setup.theta, &setup.interval, max_m)?;
            Ok(p.into_iter().skip(1).map(Some).collect())
        }
        _ => Ok(none),
    }
}

fn moment_rows(
    values: &[f64],
    exact: Option<&[f64]>,
    finite: &[Option<BigRational>],
    limit: &[Option<BigRational>],
) -> Vec<MomentRow> {
    let empirical = power_moments(values, limit.len().max(finite.len()));
    empirical
        .into_iter()
        .enumerate()
        .map(|(i, (emp, se))| {
            let emp = exact.and_then(|e| e.get(i).copied()).or(emp);
            let z = |t: Option<f64>| match (emp, se, t) {
                (Some(e), Some(s), Some(t)) if s > 0.0 => Some((e - t) / s),
                _ => None,
            };
            let fin = finite.get(i).cloned().flatten();
            let lim = limit.get(i).cloned().flatten();
            let fin_v = fin.as_ref().map(rational_to_f64);
            let lim_v = lim.as_ref().map(rational_to_f64);
            MomentRow {
                order: i + 1,
                empirical: emp,
                std_error: se,
                finite_n: fin.map(|r| r.to_string()),
                finite_n_value: fin_v,
                z_finite_n: z(fin_v),
                limit: lim.map(|r| r.to_string()),
                limit_value: lim_v,
                z_limit: z(lim_v),
            }
        })
        .collect()
}

/// Exact empirical moments of `y * scale`, from the integer numerators.
fn exact_empirical(setup: &Setup, draws: &[Draw], max_m: usize) -> Vec<f64> {
    let numers: Vec<BigInt> = draws.iter().map(|d| d.numer.clone()).collect();
    let scale = setup.z_scale();
    exact_to_f64(&exact_power_means(&numers, &setup.y_denominator(), max_m))
        .into_iter()
        .enumerate()
        .map(|(i, v)| v * scale.powi(i as i32 + 1))
        .collect()
}

fn statistic_name(mode: SampleMode, k: usize, moments: bool) -> String {
    let base = match mode {
        SampleMode::CycleStatistic => "Y_{n,k}",
        SampleMode::Poissonized => "Y*_{n,k}",
        SampleMode::Tuple => "Y^tuple",
        SampleMode::Set => "Y^set",
        SampleMode::Irrep => "Y^irrep",
    };
    if moments && k == 1 {
        format!("{base} / sqrt(log n)")
    } else {
        base.to_string()
    }
}

fn per_sample_rows(draws: &[Draw], y_mode: Option<&[f64]>) -> Vec<SampleRow> {
    draws
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let ym = y_mode.map(|v| v[i]);
            SampleRow {
                index: i,
                seed: d.seed,
                y: d.y,
                y2: None,
                y_mode: ym,
                delta: ym.map(|v| v - d.y),
                count: d.count.as_ref().map(|c| c.to_string()),
            }
        })
        .collect()
}

fn sample(config: &ExperimentConfig) -> Result<RunRecord> {
    let setup = Setup::new(config)?;
    let draws = draw_all(config, &setup)?;
    let mut record = RunRecord::new(config);
    record.samples = draws.len();
    record.statistic = Some(statistic_name(
        if config.mode == SampleMode::Poissonized {
            SampleMode::Poissonized
        } else {
            SampleMode::CycleStatistic
        },
        setup.k,
        false,
    ));
    let y: Vec<f64> = draws.iter().map(|d| d.y).collect();
    let mut y_mode = None;
    if let Some(mode) = config.mode.representation() {
        let (ym, info) = mode_statistics(&setup, mode, &draws)?;
        let delta: Vec<f64> = ym.iter().zip(&y).map(|(a, b)| a - b).collect();
        let abs: Vec<f64> = delta.iter().map(|d| d.abs()).collect();
        let (m_abs, se_abs) = mean_se(&abs);
        let (m_delta, se_delta) = mean_se(&delta);
        record.comparisons.push(Comparison::against("mean_abs_delta", m_abs, 0.0, se_abs));
        record.comparisons.push(Comparison::against("mean_delta", m_delta, 0.0, se_delta));
        if let Some(max) = abs.iter().copied().reduce(f64::max) {
            record.comparisons.push(Comparison::value("max_abs_delta", max));
        }
        let (m_mode, se_mode) = mean_se(&ym);
        record.comparisons.push(Comparison::against("mean_y_mode", m_mode, 0.0, se_mode));
        record.centering = Some(info);
        y_mode = Some(ym);
    }
    let exact_mode = match config.mode {
        SampleMode::Poissonized => SampleMode::Poissonized,
        _ => SampleMode::CycleStatistic,
    };
    let limit = if setup.k >= 2 {
        limit_targets(&setup, exact_mode, config.max_moment)?
    } else {
        vec![None; config.max_moment]
    };
    let exact = (!draws.is_empty()).then(|| {
        let numers: Vec<BigInt> = draws.iter().map(|d| d.numer.clone()).collect();
        exact_to_f64(&exact_power_means(&numers, &setup.y_denominator(), config.max_moment))
    });
    record.moments = moment_rows(&y, exact.as_deref(), &vec![None; config.max_moment], &limit);
    record.histogram = Some(histogram(&y, config.bins));
    if config.per_sample {
        record.per_sample = Some(per_sample_rows(&draws, y_mode.as_deref()));
    }
    Ok(record)
}

fn moments(config: &ExperimentConfig) -> Result<RunRecord> {
    let setup = Setup::new(config)?;
    let draws = draw_all(config, &setup)?;
    let mut record = RunRecord::new(config);
    record.samples = draws.len();
    record.statistic = Some(statistic_name(config.mode, setup.k, true));
    let scale = setup.z_scale();
    let (values, exact, y_mode) = match config.mode.representation() {
        Some(mode) => {
            let (ym, info) = mode_statistics(&setup, mode, &draws)?;
            record.centering = Some(info);
            let v: Vec<f64> = ym.iter().map(|x| x * scale).collect();
            (v, None, Some(ym))
        }
        None => {
            let v: Vec<f64> = draws.iter().map(|d| d.y * scale).collect();
            let exact = (!draws.is_empty()).then(|| exact_empirical(&setup, &draws, config.max_moment));
            (v, exact, None)
        }
    };
    let finite = finite_targets(&setup, config.mode, config.max_moment)?;
    let limit = limit_targets(&setup, config.mode, config.max_moment)?;
    record.moments = moment_rows(&values, exact.as_deref(), &finite, &limit);

    if config.mode == SampleMode::CycleStatistic && setup.k >= 2 {
        if let (Some(Some(f)), Some(Some(l))) = (finite.get(1), limit.get(1)) {
            record.comparisons.push(
                Comparison::against("finite_n_second_moment_vs_limit", Some(rational_to_f64(f)), rational_to_f64(l), None)
                    .exact(l)
                    .tolerance(0.01),
            );
        }
    }
    if config.mode == SampleMode::Poissonized && setup.k >= 2 {
        let ewens = limiting_moments(setup.k, &setup.theta, config.max_moment.max(2))?;
        for row in record.moments.iter().filter(|r| r.order % 2 == 0) {
            let target = ewens.moment(row.order)?;
            record.comparisons.push(
                Comparison::against(
                    &format!("moment_{}_vs_ewens_limit", row.order),
                    row.empirical,
                    rational_to_f64(target),
                    row.std_error,
                )
                .exact(target),
            );
        }
    }
    record.histogram = Some(histogram(&values, config.bins));
    if config.per_sample {
        record.per_sample = Some(per_sample_rows(&draws, y_mode.as_deref()));
    }
    Ok(record)
}

fn density(config: &ExperimentConfig) -> Result<RunRecord> {
    let config = &ExperimentConfig {
        mode: SampleMode::CycleStatistic,
        ..config.clone()
    };
    let setup = Setup::new(config)?;
    let draws = draw_all(config, &setup)?;
    let mut record = RunRecord::new(config);
    record.samples = draws.len();
    record.statistic = Some(statistic_name(SampleMode::CycleStatistic, 2, false));
    let y: Vec<f64> = draws.iter().map(|d| d.y).collect();

    let mut table = Table::new(&["t", "density", "cdf"]);
    for i in 0..config.grid {
        let t = -1.0 + 2.0 * i as f64 / (config.grid - 1) as f64;
        table.push(vec![json!(t), json!(density_p(t)?), json!(cdf(t)?)]);
    }
    record.tables.insert("density".into(), table);

    let e32 = 1.5f64.exp() / std::f64::consts::PI;
    record
        .comparisons
        .push(Comparison::against("density_at_zero", Some(density_at_zero()), e32, None).tolerance(1e-10));
    record
        .comparisons
        .push(Comparison::against("cdf_at_one", Some(cdf(1.0)?), 1.0, None).tolerance(1e-6));
    if !y.is_empty() {
        let ks = CdfTable::new(KS_CDF_CELLS)?.ks_distance(&y);
        record
            .comparisons
            .push(Comparison::against("ks_distance", Some(ks), 0.0, None).tolerance(KS_TOLERANCE));
    }
    let exact = (!draws.is_empty()).then(|| exact_empirical(&setup, &draws, config.max_moment));
    let finite = finite_targets(&setup, SampleMode::CycleStatistic, config.max_moment)?;
    let limit = limit_targets(&setup, SampleMode::CycleStatistic, config.max_moment)?;
    record.moments = moment_rows(&y, exact.as_deref(), &finite, &limit);
    record.histogram = Some(histogram(&y, config.bins));
    if config.per_sample {
        record.per_sample = Some(per_sample_rows(&draws, None));
    }
    Ok(record)
}

fn crossmoments(config: &ExperimentConfig) -> Result<RunRecord> {
    let setup = Setup::new(config)?;
    let second = config.second_interval()?;
    let table2 = FracTable::new(&second, setup.n);
    let pairs: Vec<(u64, f64, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i as u64);
            let ct = sample_ewens(&setup.params, seed);
            (seed, y_statistic_table(&ct, 2, &setup.table), y_statistic_table(&ct, 2, &table2))
        })
        .collect();
    let mut record = RunRecord::new(config);
    record.samples = pairs.len();
    record.statistic = Some("Y_{n,2} on the first arc".into());
    let y1: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let y2: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    let a: Vec<f64> = y1.iter().map(|y| y * y).collect();
    let b: Vec<f64> = y2.iter().map(|y| y * y).collect();
    let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    let targets = cross_moment_targets();
    let second_limit = limiting_moments(2, &setup.theta, 2)?.moment(2)?.clone();

    let (m_ab, se_ab) = mean_se(&ab);
    record.comparisons.push(
        Comparison::against("joint_fourth", m_ab, rational_to_f64(&targets.joint), se_ab).exact(&targets.joint),
    );
    let (m_a, se_a) = mean_se(&a);
    let (m_b, se_b) = mean_se(&b);
    let (product, se_product, cov, se_cov) = match (m_a, m_b) {
        (Some(ma), Some(mb)) => {
            let centered: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).collect();
            let (cov, se_cov) = mean_se(&centered);
            let n = a.len() as f64;
            let se_product = match (se_a, se_b, cov) {
                (Some(sa), Some(sb), Some(c)) => {
                    Some((mb * mb * sa * sa + ma * ma * sb * sb + 2.0 * ma * mb * c / n).max(0.0).sqrt())
                }
                _ => None,
            };
            (Some(ma * mb), se_product, cov, se_cov)
        }
        _ => (None, None, None, None),
    };
    record.comparisons.push(
        Comparison::against("product_of_seconds", product, rational_to_f64(&targets.product), se_product)
            .exact(&targets.product),
    );
    record
        .comparisons
        .push(Comparison::against("covariance_of_squares", cov, 0.0, se_cov));
    for (name, m, se, interval) in [
        ("second_moment_interval1", m_a, se_a, &setup.interval),
        ("second_moment_interval2", m_b, se_b, &second),
    ] {
        record
            .comparisons
            .push(Comparison::against(name, m, rational_to_f64(&second_limit), se).exact(&second_limit));
        if finite_n_moment_supported(setup.n, 2) {
            let f = finite_n_moment(setup.n, 2, &setup.theta, interval, 2)?;
            record
                .comparisons
                .push(Comparison::against(&format!("{name}_finite_n"), m, rational_to_f64(&f), se).exact(&f));
        }
    }

    let limit = limit_targets(&setup, SampleMode::CycleStatistic, config.max_moment)?;
    let finite1 = finite_targets(&setup, SampleMode::CycleStatistic, config.max_moment)?;
    record.moments = moment_rows(&y1, None, &finite1, &limit);
    let setup2 = Setup {
        table: FracTable::new(&second, setup.n),
        interval: second.clone(),
        ..setup
    };
    let finite2 = finite_targets(&setup2, SampleMode::CycleStatistic, config.max_moment)?;
    let mut t2 = Table::new(&["order", "empirical", "std_error", "finite_n_value", "limit_value"]);
    for row in moment_rows(&y2, None, &finite2, &limit) {
        t2.push(vec![
            json!(row.order),
            json!(row.empirical),
            json!(row.std_error),
            json!(row.finite_n_value),
            json!(row.limit_value),
        ]);
    }
    record.tables.insert("moments_interval2".into(), t2);
    record.histogram = Some(histogram(&y1, config.bins));
    if config.per_sample {
        record.per_sample = Some(
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(seed, y, y2))| SampleRow {
                    index: i,
                    seed,
                    y,
                    y2: Some(y2),
                    y_mode: None,
                    delta: None,
                    count: None,
                })
                .collect(),
        );
    }
    Ok(record)
}

/// `10, 100, ...` below `n`, then `n`.
fn checkpoints(n: usize, from: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = from;
    while c < n {
        out.push(c);
        c *= 10;
    }
    out.push(n);
    out
}

fn discrepancy(config: &ExperimentConfig) -> Result<RunRecord> {
    let interval = config.interval()?;
    let (alpha, beta) = (interval.alpha().clone(), interval.beta().clone());
    let n = config.n;
    let mut record = RunRecord::new(config);
    let xa = FracSequence::new(alpha.clone(), n).to_f64();
    let xb = FracSequence::new(beta.clone(), n).to_f64();

    let mut star = Table::new(&["n", "alpha", "beta"]);
    let mut two = Table::new(&["n", "grid_max", "upper_bound", "resolution"]);
    for c in checkpoints(n, 10) {
        star.push(vec![
            json!(c),
            json!(discrepancy_1d(&xa[..c])?),
            json!(discrepancy_1d(&xb[..c])?),
        ]);
        let pts: Vec<(f64, f64)> = xa[..c].iter().copied().zip(xb[..c].iter().copied()).collect();
        let d = discrepancy_2d(&pts, config.grid)?;
        two.push(vec![json!(c), json!(d.grid_max), json!(d.upper_bound), json!(d.resolution)]);
    }
    record.tables.insert("star_discrepancy".into(), star);
    record.tables.insert("discrepancy_2d".into(), two);

    let mut weyl = Table::new(&["h_alpha", "h_beta", "n", "modulus", "normalized"]);
    let angles = [alpha.clone(), beta.clone()];
    for h in [[1i64, 0], [0, 1], [1, 1], [1, -1], [2, 3]] {
        let s = weyl_sum(&h, &angles, n)?;
        weyl.push(vec![json!(h[0]), json!(h[1]), json!(n), json!(s.norm()), json!(s.norm() / n as f64)]);
    }
    record.tables.insert("weyl_sums".into(), weyl);

    let mut pm = Table::new(&["m", "n", "empirical", "limit", "abs_error"]);
    let mut wpm = Table::new(&["m", "k", "n", "empirical", "limit", "abs_error"]);
    for m in 2..=4 {
        let v = empirical_power_mean(&alpha, &beta, m, n)?;
        let l = power_mean_limit(m);
        pm.push(vec![json!(m), json!(n), json!(v), json!(l), json!((v - l).abs())]);
        record
            .comparisons
            .push(Comparison::against(&format!("power_mean_m{m}"), Some(v), l, None).tolerance(1e-2));
        for k in 2..=3 {
            let v = weighted_power_mean(&alpha, &beta, m, k, n)?;
            let l = weighted_power_mean_limit(m, k);
            wpm.push(vec![json!(m), json!(k), json!(n), json!(v), json!(l), json!((v - l).abs())]);
            record
                .comparisons
                .push(Comparison::against(&format!("weighted_power_mean_m{m}_k{k}"), Some(v), l, None).tolerance(1e-2));
        }
    }
    record.tables.insert("power_means".into(), pm);
    record.tables.insert("weighted_power_means".into(), wpm);

    let h = bounded_harmonic_sum(&alpha, &beta, n);
    let mut hs = Table::new(&["n", "partial_sum", "running_max"]);
    for (j, v, r) in &h.checkpoints {
        hs.push(vec![json!(j), json!(v), json!(r)]);
    }
    record.tables.insert("harmonic_sum".into(), hs);
    record
        .comparisons
        .push(Comparison::value("harmonic_sum_running_max", h.running_max));
    Ok(record)
}

fn spectrum(config: &ExperimentConfig) -> Result<RunRecord> {
    let ct = config.spectrum_cycle_type()?;
    let mode = config.mode.representation().expect("validated");
    let interval = config.interval()?;
    let (n, k) = (ct.n(), config.k);
    let mut record = RunRecord::new(config);
    let mut summary = Table::new(&["key", "value"]);
    let mut kv = |key: &str, value: Value| summary.push(vec![json!(key), value]);
    kv("cycle_type", json!(ct.lengths_desc()));
    kv("n", json!(n));
    kv("k", json!(k));
    kv("mode", json!(mode.to_string()));

    let (degree, count) = match mode {
        Mode::Tuple | Mode::Set => {
            let spec = match mode {
                Mode::Tuple => induced_tuple_cycle_type(&ct, k)?,
                _ => induced_subset_cycle_type(&ct, k)?,
            };
            let mut lengths = Table::new(&["length", "count"]);
            for (l, c) in spec.counts().iter().rev() {
                lengths.push(vec![json!(l.to_string()), json!(c.to_string())]);
            }
            record.tables.insert("cycle_lengths".into(), lengths);
            kv("spectrum", json!(spec.to_string()));
            let near: Vec<String> = spec.near_lattice_lengths(&interval).iter().map(|l| l.to_string()).collect();
            kv("near_lattice_lengths", json!(near));
            (spec.total().clone(), spec.count_in_interval(&interval))
        }
        Mode::Irrep => {
            let degree = binomial(n as u64 - 1, k as u64);
            if degree <= BigUint::from(IRREP_ENUMERATION_BOUND) {
                let hook = hook_irrep_angle_index(&ct, k)?;
                let mut angles = Table::new(&["numerator", "denominator", "multiplicity"]);
                for (&(a, l), &c) in hook.angles() {
                    angles.push(vec![json!(a), json!(l), json!(c)]);
                }
                record.tables.insert("angles".into(), angles);
            }
            (degree, hook_irrep_count(&ct, k, &interval)?)
        }
    };
    kv("degree", json!(degree.to_string()));
    kv("interval_count", json!(count.to_string()));
    let y = y_statistic_exact(&ct, k, &interval);
    kv("y_statistic", json!(rational_to_f64(&y)));
    record.tables.insert("summary".into(), summary);
    record
        .comparisons
        .push(Comparison::value("interval_count", biguint_to_f64(&count)));
    record.comparisons.push(Comparison::value("degree", biguint_to_f64(&degree)));
    Ok(record)
}
