//! Fourier coefficients of the step measure and the discrepancy bounds
//! built from them.
//!
//! The step measure puts weight `1/(2d)` on each of `±α_l`, so its `m`-th
//! coefficient is `Q̂(m) = (1/d) Σ_l cos(2π m α_l)` and the `k`-step
//! measure has coefficient `Q̂(m)^k`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::AlphaVector;
use crate::error::{Result, WalkError};
use crate::float::frac_mul;

/// Default truncation for the lower bound.
pub const DEFAULT_SU_TERMS: usize = 10_000;

/// Default scan cap for the Erdős–Turán truncation, divided by `d`.
pub const DEFAULT_ET_SCAN: usize = 1_000_000;

/// Published leading factor of the lower constant.
pub const LOWER_CONSTANT_FACTOR: f64 = 0.0947;

/// Published leading factor of the upper constant.
pub const UPPER_CONSTANT_FACTOR: f64 = 19.857;

/// `Q̂(m)`; `m α_l` is reduced mod 1 exactly before the cosine.
pub fn q_hat(alpha: &AlphaVector, m: i64) -> f64 {
    // Even in m; evaluating at |m| makes that exact.
    let m = m.saturating_abs();
    let a = alpha.entries();
    let sum: f64 = a.iter().map(|&x| (TAU * frac_mul(m, x)).cos()).sum();
    sum / a.len() as f64
}

/// `|Q̂(m)|` for `m = 1..=len`, computed once and reused across step counts.
#[derive(Debug, Clone)]
pub struct FourierTable {
    abs_coeffs: Vec<f64>,
}

impl FourierTable {
    pub fn new(alpha: &AlphaVector, len: usize) -> Self {
        let abs_coeffs = (1..=len as i64)
            .into_par_iter()
            .map(|m| q_hat(alpha, m).abs())
            .collect();
        Self { abs_coeffs }
    }

    pub fn len(&self) -> usize {
        self.abs_coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abs_coeffs.is_empty()
    }

    fn check(&self, needed: usize) -> Result<()> {
        if needed == 0 {
            return Err(WalkError::InvalidArgument("truncation must be ≥ 1".into()));
        }
        if needed > self.len() {
            return Err(WalkError::InvalidArgument(format!(
                "table holds {} coefficients, {needed} requested",
                self.len()
            )));
        }
        Ok(())
    }

    /// `((2/π²) Σ_{m ≤ m_max} Q̂(m)^{2k} / m²)^{1/2}`.
    pub fn su_lower(&self, k: usize, m_max: usize) -> Result<f64> {
        self.check(m_max)?;
        let exp = step_exponent(k)?;
        let sum: f64 = self.abs_coeffs[..m_max]
            .iter()
            .enumerate()
            .map(|(i, &q)| {
                let m = (i + 1) as f64;
                (q * q).powi(exp) / (m * m)
            })
            .sum();
        Ok((2.0 / (PI * PI) * sum).sqrt())
    }

    /// `4/(M+1) + (4/π) Σ_{m ≤ M} |Q̂(m)|^k / m`.
    pub fn erdos_turan(&self, k: usize, truncation: usize) -> Result<f64> {
        self.check(truncation)?;
        let exp = step_exponent(k)?;
        let sum: f64 = self.abs_coeffs[..truncation]
            .iter()
            .enumerate()
            .map(|(i, &q)| q.powi(exp) / (i + 1) as f64)
            .sum();
        Ok(et_value(truncation, sum))
    }

    /// Minimizes the Erdős–Turán bound over `M ∈ [1, m_cap]` with one
    /// incremental pass. Ties go to the smallest `M`.
    pub fn optimize_et(&self, k: usize, m_cap: usize) -> Result<(usize, f64)> {
        self.check(m_cap)?;
        let exp = step_exponent(k)?;
        let mut sum = 0.0;
        let mut best = (0usize, f64::INFINITY);
        for (i, &q) in self.abs_coeffs[..m_cap].iter().enumerate() {
            let m = i + 1;
            sum += q.powi(exp) / m as f64;
            let bound = et_value(m, sum);
            if bound < best.1 {
                best = (m, bound);
            }
        }
        Ok(best)
    }
}

fn et_value(truncation: usize, sum: f64) -> f64 {
    4.0 / (truncation as f64 + 1.0) + 4.0 / PI * sum
}

fn step_exponent(k: usize) -> Result<i32> {
    i32::try_from(k).map_err(|_| WalkError::InvalidArgument(format!("step count {k} too large")))
}

/// Su-type lower bound on `D(Q^{*k})`, truncated after `m_max` terms.
pub fn su_lower_bound(alpha: &AlphaVector, k: usize, m_max: usize) -> Result<f64> {
    FourierTable::new(alpha, m_max).su_lower(k, m_max)
}

/// Erdős–Turán upper bound on `D(Q^{*k})` at truncation `M`.
pub fn erdos_turan_upper(alpha: &AlphaVector, k: usize, truncation: usize) -> Result<f64> {
    FourierTable::new(alpha, truncation).erdos_turan(k, truncation)
}

/// Best Erdős–Turán truncation in `[1, m_cap]` and its bound.
pub fn optimize_et_m(alpha: &AlphaVector, k: usize, m_cap: usize) -> Result<(usize, f64)> {
    FourierTable::new(alpha, m_cap).optimize_et(k, m_cap)
}

/// The worst-case truncation `⌊(1/2)(β²k/d³)^{d/2}⌋`, at least 1.
pub fn analytic_truncation_m(beta: f64, k: usize, d: usize) -> Result<u64> {
    if !(beta > 0.0 && beta.is_finite()) || k == 0 || d == 0 {
        return Err(WalkError::InvalidArgument(format!(
            "truncation needs β > 0, k ≥ 1, d ≥ 1 (got β={beta}, k={k}, d={d})"
        )));
    }
    let d_f = d as f64;
    let m = 0.5 * (beta * beta * k as f64 / d_f.powi(3)).powf(d_f / 2.0);
    Ok((m.floor() as u64).max(1))
}

/// `0.0947·(√d/(5B))^d`; valid for every tuple.
pub fn lower_constant(d: usize, b: f64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) || d == 0 {
        return Err(WalkError::InvalidArgument(format!(
            "lower constant needs B > 0 and d ≥ 1 (got B={b}, d={d})"
        )));
    }
    let d_f = d as f64;
    Ok(LOWER_CONSTANT_FACTOR * (d_f.sqrt() / (5.0 * b)).powi(d as i32))
}

/// `19.857·(d√d/β)^d`; requires a badly approximable tuple.
pub fn upper_constant(d: usize, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) || d == 0 {
        return Err(WalkError::InvalidArgument(format!(
            "upper constant needs β > 0 and d ≥ 1 (got β={beta}, d={d})"
        )));
    }
    let d_f = d as f64;
    Ok(UPPER_CONSTANT_FACTOR * (d_f * d_f.sqrt() / beta).powi(d as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub c1: f64,
    pub c2: f64,
    pub d: usize,
    pub b_used: f64,
    pub beta_used: f64,
}

impl TheoremConstants {
    pub fn lower_envelope(&self, k: usize) -> f64 {
        envelope(self.c1, k, self.d)
    }

    pub fn upper_envelope(&self, k: usize) -> f64 {
        envelope(self.c2, k, self.d)
    }
}

/// `c·k^{−d/2}`.
pub fn envelope(c: f64, k: usize, d: usize) -> f64 {
    c * (k as f64).powf(-(d as f64) / 2.0)
}

pub fn theorem_constants(d: usize, b: f64, beta: f64) -> Result<TheoremConstants> {
    Ok(TheoremConstants {
        c1: lower_constant(d, b)?,
        c2: upper_constant(d, beta)?,
        d,
        b_used: b,
        beta_used: beta,
    })
}

/// One row of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub d_exact: Option<f64>,
    pub su_lower: f64,
    pub et_upper: f64,
    #[serde(rename = "et_M")]
    pub et_m: usize,
    #[serde(rename = "paper_M")]
    pub analytic_m: Option<u64>,
    pub c1_envelope: Option<f64>,
    pub c2_envelope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_montecarlo: Option<f64>,
}

impl BoundReport {
    /// `su_lower ≤ d_exact ≤ et_upper` within `slack`; vacuous without `d_exact`.
    pub fn sandwich_holds(&self, slack: f64) -> bool {
        if self.su_lower > self.et_upper + slack {
            return false;
        }
        match self.d_exact {
            Some(d) => self.su_lower <= d + slack && d <= self.et_upper + slack,
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::make_alpha;

    #[test]
    fn q_hat_values() {
        let phi = make_alpha("phi").unwrap();
        assert_eq!(q_hat(&phi, 0), 1.0);
        let quarter = make_alpha("dec:0.25").unwrap();
        assert!(q_hat(&quarter, 1).abs() < 1e-16);
        let pair = make_alpha("dec:0.25,0.5").unwrap();
        assert!((q_hat(&pair, 1) + 0.5).abs() < 1e-16);
        for m in 1..50 {
            assert_eq!(q_hat(&phi, m), q_hat(&phi, -m));
        }
    }

    #[test]
    fn su_bound_for_point_mass_tends_to_inverse_sqrt3() {
        let phi = make_alpha("phi").unwrap();
        let b = su_lower_bound(&phi, 0, 10_000).unwrap();
        let limit = 1.0 / 3f64.sqrt();
        // Tail of Σ 1/m² beyond 10⁴ is about 10⁻⁴.
        assert!(b < limit && limit - b < 1e-4, "{b}");
    }

    #[test]
    fn su_bound_quarter_rotation_four_terms() {
        let quarter = make_alpha("dec:0.25").unwrap();
        let b = su_lower_bound(&quarter, 1, 4).unwrap();
        let expected = (2.0 / (PI * PI) * (0.25 + 1.0 / 16.0)).sqrt();
        assert!((b - expected).abs() < 1e-15);
        assert!((b - 0.2516).abs() < 1e-4);
    }

    #[test]
    fn su_bound_is_monotone_in_truncation() {
        let alpha = make_alpha("plastic").unwrap();
        let table = FourierTable::new(&alpha, 500);
        let mut prev = 0.0;
        for m in 1..=500 {
            let b = table.su_lower(7, m).unwrap();
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn et_bound_for_point_mass() {
        let phi = make_alpha("phi").unwrap();
        let b = erdos_turan_upper(&phi, 0, 1).unwrap();
        assert!((b - (2.0 + 4.0 / PI)).abs() < 1e-15);
    }

    #[test]
    fn et_bound_of_vanishing_coefficients() {
        // Uniform measure: only the tail term survives.
        let table = FourierTable {
            abs_coeffs: vec![0.0; 100],
        };
        for m in [1, 10, 100] {
            assert_eq!(table.erdos_turan(5, m).unwrap(), 4.0 / (m as f64 + 1.0));
        }
        assert_eq!(table.optimize_et(5, 100).unwrap(), (100, 4.0 / 101.0));
    }

    #[test]
    fn optimized_et_is_scan_minimum() {
        let phi = make_alpha("phi").unwrap();
        let table = FourierTable::new(&phi, 2000);
        let (m, bound) = table.optimize_et(100, 2000).unwrap();
        let brute = (1..=2000)
            .map(|t| table.erdos_turan(100, t).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((bound - brute).abs() < 1e-12);
        assert!((table.erdos_turan(100, m).unwrap() - bound).abs() < 1e-12);
    }

    #[test]
    fn zero_truncation_rejected() {
        let phi = make_alpha("phi").unwrap();
        assert!(su_lower_bound(&phi, 1, 0).is_err());
        assert!(erdos_turan_upper(&phi, 1, 0).is_err());
    }

    #[test]
    fn analytic_truncation_values() {
        assert_eq!(analytic_truncation_m(1.0, 4, 1).unwrap(), 1);
        assert_eq!(analytic_truncation_m(1.0, 400, 1).unwrap(), 10);
        assert_eq!(analytic_truncation_m(0.5, 10_000, 2).unwrap(), 156);
        assert_eq!(analytic_truncation_m(0.01, 1, 1).unwrap(), 1);
        assert!(analytic_truncation_m(0.0, 4, 1).is_err());
    }

    #[test]
    fn published_constants() {
        let c = theorem_constants(1, 1.0, 1.0).unwrap();
        assert!((c.c1 - 0.01894).abs() < 1e-15);
        assert!((c.c2 - 19.857).abs() < 1e-12);
        let c = theorem_constants(2, 2f64.sqrt(), 0.5).unwrap();
        assert!((c.c1 - 0.003788).abs() < 1e-15);
        assert!((c.c2 - 19.857 * 32.0).abs() < 1e-9);
        assert!(theorem_constants(1, 0.0, 1.0).is_err());
        assert!(theorem_constants(1, 1.0, -1.0).is_err());
    }
}
