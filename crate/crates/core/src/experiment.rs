//! Experiment runners behind the `walk`, `verify` and `dioph` subcommands.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::{make_alpha, AlphaVector};
use crate::diophantine::{
    davenport_mahler_check, ApproximationConstants, DmVerdict, DEFAULT_PER_Q_CAP,
};
use crate::error::{Result, WalkError};
use crate::fourier::{
    analytic_truncation_m, envelope, lower_constant, upper_constant, BoundReport, FourierTable,
    TheoremConstants, DEFAULT_ET_SCAN, DEFAULT_SU_TERMS,
};
use crate::lattice::{convolve_power, predicted_support, LatticeWalk, DEFAULT_SUPPORT_CAP};
use crate::measure::{atoms_on_circle, discrepancy_exact, AtomicMeasure};
use crate::sampling::sample_walk;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    MonteCarlo,
    Both,
}

impl Mode {
    pub fn exact(self) -> bool {
        matches!(self, Mode::Exact | Mode::Both)
    }

    pub fn montecarlo(self) -> bool {
        matches!(self, Mode::MonteCarlo | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "montecarlo" => Ok(Mode::MonteCarlo),
            "both" => Ok(Mode::Both),
            other => Err(WalkError::Config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "montecarlo",
            Mode::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(WalkError::Config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alpha_spec: String,
    pub k_min: usize,
    pub k_max: usize,
    pub k_step: usize,
    pub mode: Mode,
    pub n_samples: usize,
    pub seed: u64,
    pub n_max_dioph: u64,
    pub q_max: u64,
    pub per_q_cap: u64,
    /// `None` means `10⁶ / d`.
    pub m_cap: Option<usize>,
    pub su_terms: usize,
    pub support_cap: u64,
    /// Inclusive k window for the log-log slope; `None` means the upper
    /// half of `[k_min, k_max]`.
    pub slope_window: Option<(usize, usize)>,
    pub output_path: Option<String>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha_spec: "phi".into(),
            k_min: 1,
            k_max: 100,
            k_step: 1,
            mode: Mode::Exact,
            n_samples: 100_000,
            seed: 0,
            n_max_dioph: 100_000,
            q_max: 1_000,
            per_q_cap: DEFAULT_PER_Q_CAP,
            m_cap: None,
            su_terms: DEFAULT_SU_TERMS,
            support_cap: DEFAULT_SUPPORT_CAP,
            slope_window: None,
            output_path: None,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn with_alpha(spec: impl Into<String>) -> Self {
        Self {
            alpha_spec: spec.into(),
            ..Self::default()
        }
    }

    /// Checks the range invariants used by `verify`.
    pub fn validate_range(&self) -> Result<()> {
        if self.k_min < 1 || self.k_min > self.k_max {
            return Err(WalkError::Config(format!(
                "need 1 ≤ kmin ≤ kmax (got {}..{})",
                self.k_min, self.k_max
            )));
        }
        if self.k_step == 0 {
            return Err(WalkError::Config("kstep must be ≥ 1".into()));
        }
        self.validate_common()
    }

    fn validate_common(&self) -> Result<()> {
        if self.mode.montecarlo() && self.n_samples == 0 {
            return Err(WalkError::Config("samples must be ≥ 1".into()));
        }
        if self.n_max_dioph == 0 || self.q_max == 0 || self.su_terms == 0 {
            return Err(WalkError::Config("nmax, qmax must be ≥ 1".into()));
        }
        if self.m_cap == Some(0) {
            return Err(WalkError::Config("mcap must be ≥ 1".into()));
        }
        Ok(())
    }

    pub fn ks(&self) -> Vec<usize> {
        (self.k_min..=self.k_max)
            .step_by(self.k_step.max(1))
            .collect()
    }

    pub fn effective_m_cap(&self, d: usize) -> usize {
        self.m_cap.unwrap_or((DEFAULT_ET_SCAN / d).max(1))
    }

    pub fn effective_slope_window(&self) -> (usize, usize) {
        self.slope_window
            .unwrap_or((self.k_min + (self.k_max - self.k_min) / 2, self.k_max))
    }
}

/// `3/√n`: the sampling error budget stated alongside Monte Carlo results.
pub fn montecarlo_error_budget(n_samples: usize) -> f64 {
    3.0 / (n_samples as f64).sqrt()
}

/// Per-k seed derived from the base seed, so rows are independent of
/// evaluation order.
fn row_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub alpha: AlphaVector,
    pub mode: Mode,
    pub seed: u64,
    pub n_samples: usize,
    pub approximation: ApproximationConstants,
    /// Present only when both `B̂ > 0` and `β̂ > 0`.
    pub theorem: Option<TheoremConstants>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub m_cap: usize,
    pub su_terms: usize,
    pub support_cap: u64,
    pub slope: Option<f64>,
    pub slope_window: (usize, usize),
    pub dm_verdict: Option<DmVerdict>,
    pub montecarlo_error_budget: Option<f64>,
    pub caveats: Vec<String>,
    pub rows: Vec<BoundReport>,
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct abscissae or any nonpositive value.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.ln() - my);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Exact discrepancies for `ks` (ascending) from a single incremental walk.
/// Step counts past the support cap map to `None`.
pub fn exact_discrepancies(
    alpha: &AlphaVector,
    ks: &[usize],
    support_cap: u64,
) -> Result<Vec<Option<f64>>> {
    let d = alpha.dim();
    let reachable: Vec<usize> = ks
        .iter()
        .copied()
        .filter(|&k| predicted_support(d, k) <= support_cap as u128)
        .collect();
    let mut out = vec![None; ks.len()];
    let Some(&last) = reachable.iter().max() else {
        return Ok(out);
    };
    let mut walk = LatticeWalk::new(d, last, support_cap)?;
    let mut done = 0usize;
    for (slot, &k) in ks.iter().enumerate() {
        if k > last {
            continue;
        }
        while done < k {
            walk.step();
            done += 1;
        }
        let measure = atoms_on_circle(walk.current(), alpha)?;
        out[slot] = Some(discrepancy_exact(&measure));
    }
    Ok(out)
}

pub fn run_verify(config: &ExperimentConfig) -> Result<VerifyReport> {
    config.validate_range()?;
    let alpha = make_alpha(&config.alpha_spec)?;
    let d = alpha.dim();
    let approx = ApproximationConstants::estimate(
        &alpha,
        config.n_max_dioph,
        config.q_max,
        config.per_q_cap,
    )?;
    let c1 = lower_constant(d, approx.b_hat).ok();
    let c2 = upper_constant(d, approx.beta_hat).ok();
    let theorem = match (c1, c2) {
        (Some(c1), Some(c2)) => Some(TheoremConstants {
            c1,
            c2,
            d,
            b_used: approx.b_hat,
            beta_used: approx.beta_hat,
        }),
        _ => None,
    };

    let mut ks = config.ks();
    ks.sort_unstable();
    let d_exact = if config.mode.exact() {
        exact_discrepancies(&alpha, &ks, config.support_cap)?
    } else {
        vec![None; ks.len()]
    };

    let m_cap = config.effective_m_cap(d);
    let table = FourierTable::new(&alpha, m_cap.max(config.su_terms));
    let beta = approx.beta_hat;
    let rows = ks
        .par_iter()
        .zip(d_exact.par_iter())
        .map(|(&k, &d_exact)| -> Result<BoundReport> {
            let su_lower = table.su_lower(k, config.su_terms)?;
            let (et_m, et_upper) = table.optimize_et(k, m_cap)?;
            let d_montecarlo = if config.mode.montecarlo() {
                let p = sample_walk(&alpha, k, config.n_samples, row_seed(config.seed, k))?;
                Some(discrepancy_exact(&p))
            } else {
                None
            };
            Ok(BoundReport {
                k,
                d_exact,
                su_lower,
                et_upper,
                et_m,
                analytic_m: analytic_truncation_m(beta, k, d).ok(),
                c1_envelope: c1.map(|c| envelope(c, k, d)),
                c2_envelope: c2.map(|c| envelope(c, k, d)),
                d_montecarlo,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let slope_window = config.effective_slope_window();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.k >= slope_window.0 && r.k <= slope_window.1)
        .filter_map(|r| r.d_exact.map(|v| (r.k as f64, v)))
        .collect();
    let slope = loglog_slope(&points);

    let mut caveats = vec![format!(
        "envelope constants use empirical estimates (beta_hat over N <= {}, B_hat over q <= {}); they are not certified",
        approx.n_max, approx.q_max
    )];
    if approx.q_max < approx.q_max_requested {
        caveats.push(format!(
            "Dirichlet scan stopped at q = {} because q^d would exceed per_q_cap = {}",
            approx.q_max, approx.per_q_cap
        ));
    }
    if c2.is_none() {
        caveats.push(
            "beta_hat = 0: tuple is not badly approximable at this horizon; upper envelope and paper_M omitted".into(),
        );
    }
    if c1.is_none() {
        caveats.push("B_hat = 0: lower envelope omitted".into());
    }
    if config.mode.exact() {
        if let Some(first) = rows.iter().find(|r| r.d_exact.is_none()) {
            caveats.push(format!(
                "exact discrepancy omitted from k = {} on: lattice support would exceed {}",
                first.k, config.support_cap
            ));
        }
    }
    let montecarlo_error_budget = config
        .mode
        .montecarlo()
        .then(|| montecarlo_error_budget(config.n_samples));
    if let Some(budget) = montecarlo_error_budget {
        caveats.push(format!(
            "Monte Carlo error budget 3/sqrt(n) = {budget:.6} for n = {}",
            config.n_samples
        ));
    }

    Ok(VerifyReport {
        dm_verdict: (d == 2).then(|| davenport_mahler_check(approx.beta_hat)),
        alpha,
        mode: config.mode,
        seed: config.seed,
        n_samples: config.n_samples,
        approximation: approx,
        theorem,
        c1,
        c2,
        m_cap,
        su_terms: config.su_terms,
        support_cap: config.support_cap,
        slope,
        slope_window,
        montecarlo_error_budget,
        caveats,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkReport {
    pub alpha: AlphaVector,
    pub k: usize,
    pub mode: Mode,
    pub seed: u64,
    pub n_samples: usize,
    pub discrepancy: f64,
    pub measure: AtomicMeasure,
}

/// Distribution after `k_min` steps. `both` is treated as `exact`.
pub fn run_walk(config: &ExperimentConfig) -> Result<WalkReport> {
    config.validate_common()?;
    let alpha = make_alpha(&config.alpha_spec)?;
    let k = config.k_min;
    let measure = if config.mode.exact() {
        let dist = convolve_power(alpha.dim(), k, config.support_cap)?;
        atoms_on_circle(&dist, &alpha)?
    } else {
        sample_walk(&alpha, k, config.n_samples, config.seed)?
    };
    Ok(WalkReport {
        discrepancy: discrepancy_exact(&measure),
        alpha,
        k,
        mode: config.mode,
        seed: config.seed,
        n_samples: config.n_samples,
        measure,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiophReport {
    pub alpha: AlphaVector,
    pub constants: ApproximationConstants,
    pub dm_threshold: Option<f64>,
    pub dm_verdict: Option<DmVerdict>,
    pub caveats: Vec<String>,
}

pub fn run_dioph(config: &ExperimentConfig) -> Result<DiophReport> {
    config.validate_common()?;
    let alpha = make_alpha(&config.alpha_spec)?;
    let constants = ApproximationConstants::estimate(
        &alpha,
        config.n_max_dioph,
        config.q_max,
        config.per_q_cap,
    )?;
    let two_dim = alpha.dim() == 2;
    let mut caveats = vec![
        "finite-horizon estimates; beta is an infimum over all N and cannot be certified by a scan"
            .to_string(),
    ];
    if constants.q_max < constants.q_max_requested {
        caveats.push(format!(
            "Dirichlet scan stopped at q = {} because q^d would exceed per_q_cap = {}",
            constants.q_max, constants.per_q_cap
        ));
    }
    Ok(DiophReport {
        dm_threshold: two_dim.then(crate::diophantine::davenport_mahler_threshold),
        dm_verdict: two_dim.then(|| davenport_mahler_check(constants.beta_hat)),
        alpha,
        constants,
        caveats,
    })
}
