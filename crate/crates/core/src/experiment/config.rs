use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinat::parse_rational;
use crate::perm::CycleType;
use crate::spectra::{Interval, Mode, DEFAULT_K_BOUND};
use crate::{Error, Result};

/// Highest empirical moment order a run may request.
pub const MAX_MOMENT: usize = 8;

/// Largest permutation size accepted by the sampling commands.
pub const MAX_SAMPLE_N: usize = 10_000_000;

/// Largest `n` accepted by the discrepancy tables.
pub const MAX_DISCREPANCY_N: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Sample,
    Moments,
    Density,
    Crossmoments,
    Discrepancy,
    Spectrum,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::Sample,
        Subcommand::Moments,
        Subcommand::Density,
        Subcommand::Crossmoments,
        Subcommand::Discrepancy,
        Subcommand::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Sample => "sample",
            Subcommand::Moments => "moments",
            Subcommand::Density => "density",
            Subcommand::Crossmoments => "crossmoments",
            Subcommand::Discrepancy => "discrepancy",
            Subcommand::Spectrum => "spectrum",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown subcommand '{s}'")))
    }
}

/// What each sample contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    Tuple,
    Set,
    Irrep,
    /// `Y_{n,k}` from the cycle counts alone.
    CycleStatistic,
    /// `Y*` with independent Poisson(θ/j) counts.
    Poissonized,
}

impl SampleMode {
    /// The permutation representation behind this mode, if any.
    pub fn representation(self) -> Option<Mode> {
        match self {
            SampleMode::Tuple => Some(Mode::Tuple),
            SampleMode::Set => Some(Mode::Set),
            SampleMode::Irrep => Some(Mode::Irrep),
            SampleMode::CycleStatistic | SampleMode::Poissonized => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SampleMode::Tuple => "tuple",
            SampleMode::Set => "set",
            SampleMode::Irrep => "irrep",
            SampleMode::CycleStatistic => "cycle-statistic",
            SampleMode::Poissonized => "poissonized",
        }
    }
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tuple" => Ok(SampleMode::Tuple),
            "set" | "subset" => Ok(SampleMode::Set),
            "irrep" | "hook" => Ok(SampleMode::Irrep),
            "cycle-statistic" | "cycle" => Ok(SampleMode::CycleStatistic),
            "poissonized" | "poisson" => Ok(SampleMode::Poissonized),
            other => Err(Error::Config(format!(
                "unknown mode '{other}', expected tuple|set|irrep|cycle-statistic|poissonized"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format '{other}', expected csv|json"))),
        }
    }
}

/// Everything that determines a run. Unset fields in a JSON config file take
/// the defaults below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    pub n: usize,
    pub k: usize,
    /// Ewens parameter as a rational string, e.g. `"1"` or `"1/2"`.
    pub theta: String,
    /// Arc endpoints: named constants (`sqrt2`, ...), decimals or fractions.
    pub alpha: String,
    pub beta: String,
    /// Second arc, used by `crossmoments`.
    pub alpha2: String,
    pub beta2: String,
    pub samples: usize,
    pub seed: u64,
    pub mode: SampleMode,
    pub format: OutputFormat,
    pub out: Option<String>,
    pub bins: usize,
    pub max_moment: usize,
    /// Number of grid points in density and discrepancy tables.
    pub grid: usize,
    pub workers: Option<usize>,
    pub per_sample: bool,
    pub timing: bool,
    /// One-line permutation for `spectrum`, comma separated.
    pub perm: Option<String>,
    /// Cycle type for `spectrum`, e.g. `"4,2,1"`.
    pub cycle_type: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            subcommand: Subcommand::Sample,
            n: 1000,
            k: 2,
            theta: "1".into(),
            alpha: "sqrt2".into(),
            beta: "sqrt3".into(),
            alpha2: "sqrt5".into(),
            beta2: "sqrt7".into(),
            samples: 1000,
            seed: 0,
            mode: SampleMode::CycleStatistic,
            format: OutputFormat::Json,
            out: None,
            bins: 40,
            max_moment: MAX_MOMENT,
            grid: 201,
            workers: None,
            per_sample: false,
            timing: false,
            perm: None,
            cycle_type: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn theta_value(&self) -> Result<BigRational> {
        parse_rational(&self.theta).map_err(|e| Error::Config(format!("--theta: {e}")))
    }

    pub fn interval(&self) -> Result<Interval> {
        Interval::parse(&self.alpha, &self.beta).map_err(|e| Error::Config(format!("--alpha/--beta: {e}")))
    }

    pub fn second_interval(&self) -> Result<Interval> {
        Interval::parse(&self.alpha2, &self.beta2).map_err(|e| Error::Config(format!("alpha2/beta2: {e}")))
    }

    /// The permutation's cycle type for `spectrum`.
    pub fn spectrum_cycle_type(&self) -> Result<CycleType> {
        match (&self.perm, &self.cycle_type) {
            (Some(p), None) => {
                let perm = p
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|e| Error::Config(format!("--perm entry '{s}': {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                crate::perm::cycle_type_of(&perm).map_err(|e| Error::Config(format!("--perm: {e}")))
            }
            (None, Some(c)) => c.parse().map_err(|e| Error::Config(format!("--cycle-type: {e}"))),
            _ => Err(Error::Config("spectrum needs exactly one of --perm or --cycle-type".into())),
        }
    }

    /// Checks the configuration for the selected subcommand. Malformed input
    /// gives [`Error::Config`]; sizes beyond what the algorithms accept give
    /// [`Error::BoundExceeded`].
    pub fn validate(&self) -> Result<()> {
        let config = |msg: String| Err(Error::Config(msg));
        if self.n == 0 {
            return config("--n must be at least 1".into());
        }
        if self.k == 0 {
            return config("--k must be at least 1".into());
        }
        if self.bins == 0 {
            return config("--bins must be at least 1".into());
        }
        if self.grid < 2 {
            return config("grid must have at least 2 points".into());
        }
        if self.max_moment == 0 {
            return config("max_moment must be at least 1".into());
        }
        if self.max_moment > MAX_MOMENT {
            return Err(Error::bound("max_moment", self.max_moment, MAX_MOMENT));
        }
        if self.workers == Some(0) {
            return config("--workers must be at least 1".into());
        }
        let theta = self.theta_value()?;
        if theta <= BigRational::from_integer(0.into()) {
            return config(format!("--theta must be positive, got {theta}"));
        }
        let interval = self.interval()?;
        match self.subcommand {
            Subcommand::Sample | Subcommand::Moments => {
                self.check_sampling()?;
                if let Some(mode) = self.mode.representation() {
                    self.check_representation(mode)?;
                }
                if self.k == 1 && self.subcommand == Subcommand::Moments && self.n < 3 {
                    return config("k = 1 moments normalize by sqrt(log n) and need n >= 3".into());
                }
            }
            Subcommand::Density | Subcommand::Crossmoments => {
                self.check_sampling()?;
                if self.k != 2 || !theta.is_one() {
                    return config(format!(
                        "{} compares against the closed-form limit, which needs k = 2 and theta = 1 (got k = {}, theta = {})",
                        self.subcommand, self.k, theta
                    ));
                }
                if self.subcommand == Subcommand::Crossmoments {
                    let second = self.second_interval()?;
                    let ends = [interval.alpha(), interval.beta(), second.alpha(), second.beta()];
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if ends[i] == ends[j] {
                                return config(format!("crossmoments needs four distinct endpoints, {} repeats", ends[i]));
                            }
                        }
                    }
                }
            }
            Subcommand::Discrepancy => {
                if self.n > MAX_DISCREPANCY_N {
                    return Err(Error::bound("n", self.n, MAX_DISCREPANCY_N));
                }
            }
            Subcommand::Spectrum => {
                let ct = self.spectrum_cycle_type()?;
                let mode = self.mode.representation().ok_or_else(|| {
                    Error::Config(format!("spectrum needs --mode tuple|set|irrep, got {}", self.mode))
                })?;
                let n = ct.n();
                if self.k > n {
                    return config(format!("--k = {} exceeds the permutation size {n}", self.k));
                }
                if mode == Mode::Irrep && self.k >= n {
                    return config(format!("the hook irrep needs k < n, got k = {} and n = {n}", self.k));
                }
                if self.k > DEFAULT_K_BOUND {
                    return Err(Error::bound("k", self.k, DEFAULT_K_BOUND));
                }
            }
        }
        Ok(())
    }

    fn check_sampling(&self) -> Result<()> {
        if self.n > MAX_SAMPLE_N {
            return Err(Error::bound("n", self.n, MAX_SAMPLE_N));
        }
        if self.k > self.n {
            return Err(Error::Config(format!("--k = {} exceeds --n = {}", self.k, self.n)));
        }
        Ok(())
    }

    fn check_representation(&self, mode: Mode) -> Result<()> {
        if mode == Mode::Irrep && self.k >= self.n {
            return Err(Error::Config(format!(
                "the hook irrep needs k < n, got k = {} and n = {}",
                self.k, self.n
            )));
        }
        if self.k > DEFAULT_K_BOUND {
            return Err(Error::bound("k", self.k, DEFAULT_K_BOUND));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for sub in Subcommand::ALL {
            let mut c = ExperimentConfig {
                subcommand: sub,
                ..Default::default()
            };
            if sub == Subcommand::Spectrum {
                c.cycle_type = Some("4".into());
                c.mode = SampleMode::Set;
            }
            c.validate().unwrap();
        }
    }

    #[test]
    fn json_round_trip_and_partial_files() {
        let c = ExperimentConfig::from_json_str(r#"{"n": 50, "mode": "tuple", "theta": "1/2"}"#).unwrap();
        assert_eq!(c.n, 50);
        assert_eq!(c.mode, SampleMode::Tuple);
        assert_eq!(c.k, 2);
        let again = ExperimentConfig::from_json_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
        assert!(ExperimentConfig::from_json_str(r#"{"nn": 3}"#).is_err());
    }

    #[test]
    fn error_kinds() {
        let base = ExperimentConfig::default();
        let bad_interval = ExperimentConfig {
            alpha: "0.9".into(),
            beta: "0.1".into(),
            ..base.clone()
        };
        assert_eq!(bad_interval.validate().unwrap_err().exit_code(), 2);
        let big_k = ExperimentConfig {
            k: 7,
            mode: SampleMode::Tuple,
            ..base.clone()
        };
        assert_eq!(big_k.validate().unwrap_err().exit_code(), 3);
        let density = ExperimentConfig {
            subcommand: Subcommand::Density,
            k: 3,
            ..base.clone()
        };
        assert_eq!(density.validate().unwrap_err().exit_code(), 2);
        let cross = ExperimentConfig {
            subcommand: Subcommand::Crossmoments,
            alpha2: "sqrt2".into(),
            ..base.clone()
        };
        assert!(cross.validate().is_err());
        let spectrum = ExperimentConfig {
            subcommand: Subcommand::Spectrum,
            ..base
        };
        assert!(spectrum.validate().is_err());
    }

    #[test]
    fn mode_names_parse_back() {
        for m in ["tuple", "set", "irrep", "cycle-statistic", "poissonized"] {
            assert_eq!(m.parse::<SampleMode>().unwrap().name(), m);
        }
    }
}
