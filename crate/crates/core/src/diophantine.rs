//! Nearest-lattice-point distances and finite-horizon estimates of the
//! approximation constants of a tuple.
//!
//! `β̂ = min_{N ≤ n_max} N^{1/d}·‖Nα‖` estimates the badly-approximable
//! constant; `B̂ = max_q q·min_{N ≤ q^d} ‖Nα‖` is the smallest constant
//! witnessing the Dirichlet property up to the scanned horizon.

use serde::Serialize;

use crate::alpha::AlphaVector;
use crate::error::{Result, WalkError};
use crate::float::{dist_to_int, frac_dd, frac_mul, two_sum};

/// Default inner scan limit for the Dirichlet estimate.
pub const DEFAULT_PER_Q_CAP: u64 = 1_000_000;

/// Streaming multiples are rebuilt from an exact product this often.
pub const REANCHOR_INTERVAL: u64 = 1 << 16;

/// `(2/√23)^{1/2}`: no pair in `ℝ²` has a larger approximation constant.
pub fn davenport_mahler_threshold() -> f64 {
    (2.0 / 23f64.sqrt()).sqrt()
}

/// Euclidean distance from `x` to the nearest point of `ℤ^d`.
pub fn nearest_int_dist(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| {
            let t = dist_to_int(v);
            t * t
        })
        .sum::<f64>()
        .sqrt()
}

/// Walks `N·α mod 1` for `N = 1, 2, …` in O(d) per step.
///
/// Each coordinate is a double-double accumulator, re-anchored from
/// `frac(N·α_j)` every [`REANCHOR_INTERVAL`] steps to bound drift.
#[derive(Debug, Clone)]
pub struct MultiplesScan<'a> {
    alpha: &'a [f64],
    n: u64,
    hi: Vec<f64>,
    lo: Vec<f64>,
    current: Vec<f64>,
}

impl<'a> MultiplesScan<'a> {
    pub fn new(alpha: &'a AlphaVector) -> Self {
        let d = alpha.dim();
        Self {
            alpha: alpha.entries(),
            n: 0,
            hi: vec![0.0; d],
            lo: vec![0.0; d],
            current: vec![0.0; d],
        }
    }

    /// Advances to the next `N` and returns `(N, frac(N·α))`.
    pub fn advance(&mut self) -> (u64, &[f64]) {
        self.n += 1;
        let reanchor = self.n.is_multiple_of(REANCHOR_INTERVAL);
        for j in 0..self.alpha.len() {
            if reanchor {
                self.hi[j] = frac_mul(self.n as i64, self.alpha[j]);
                self.lo[j] = 0.0;
            } else {
                let (s, e) = two_sum(self.hi[j], self.alpha[j]);
                let f = s.floor();
                self.hi[j] = s - f;
                self.lo[j] += e;
            }
            self.current[j] = frac_dd(self.hi[j], self.lo[j]);
        }
        (self.n, &self.current)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaEstimate {
    pub beta_hat: f64,
    pub beta_argmin: u64,
    pub n_max: u64,
}

/// `min_{1 ≤ N ≤ n_max} N^{1/d}·‖Nα‖` and its first argmin.
pub fn beta_hat(alpha: &AlphaVector, n_max: u64) -> Result<BetaEstimate> {
    if n_max == 0 {
        return Err(WalkError::InvalidArgument("n_max must be ≥ 1".into()));
    }
    let inv_d = 1.0 / alpha.dim() as f64;
    let mut scan = MultiplesScan::new(alpha);
    let mut best = BetaEstimate {
        beta_hat: f64::INFINITY,
        beta_argmin: 0,
        n_max,
    };
    for _ in 0..n_max {
        let (n, x) = scan.advance();
        let dist = nearest_int_dist(x);
        let scale = if alpha.dim() == 1 {
            n as f64
        } else {
            (n as f64).powf(inv_d)
        };
        let v = scale * dist;
        if v < best.beta_hat {
            best.beta_hat = v;
            best.beta_argmin = n;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletEstimate {
    pub b_hat: f64,
    pub b_argmax: u64,
    /// Largest `q` actually scanned: `q ≤ q_max_requested` and `q^d ≤ per_q_cap`.
    pub q_max: u64,
    pub q_max_requested: u64,
    pub per_q_cap: u64,
}

/// `max_{q} q·min_{1 ≤ N ≤ q^d} ‖Nα‖` over one running pass in `N`.
///
/// Only `q` with `q^d ≤ per_q_cap` are scanned, so every inner minimum is
/// complete and the result never exceeds `√d`.
pub fn dirichlet_b_hat(
    alpha: &AlphaVector,
    q_max: u64,
    per_q_cap: u64,
) -> Result<DirichletEstimate> {
    if q_max == 0 || per_q_cap == 0 {
        return Err(WalkError::InvalidArgument(
            "q_max and per_q_cap must be ≥ 1".into(),
        ));
    }
    let d = alpha.dim() as u32;
    let reach = |q: u64| q.checked_pow(d).filter(|&n| n <= per_q_cap);
    let mut scan = MultiplesScan::new(alpha);
    let mut running_min = f64::INFINITY;
    let mut scanned_to = 0u64;
    let mut est = DirichletEstimate {
        b_hat: 0.0,
        b_argmax: 1,
        q_max: 0,
        q_max_requested: q_max,
        per_q_cap,
    };
    for q in 1..=q_max {
        let Some(target) = reach(q) else { break };
        while scanned_to < target {
            let (n, x) = scan.advance();
            scanned_to = n;
            running_min = running_min.min(nearest_int_dist(x));
        }
        let v = q as f64 * running_min;
        if v > est.b_hat {
            est.b_hat = v;
            est.b_argmax = q;
        }
        est.q_max = q;
    }
    Ok(est)
}

/// Both empirical approximation constants of a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproximationConstants {
    pub beta_hat: f64,
    pub beta_argmin: u64,
    pub n_max: u64,
    pub b_hat: f64,
    pub q_max: u64,
    pub q_max_requested: u64,
    pub per_q_cap: u64,
}

impl ApproximationConstants {
    pub fn estimate(alpha: &AlphaVector, n_max: u64, q_max: u64, per_q_cap: u64) -> Result<Self> {
        let beta = beta_hat(alpha, n_max)?;
        let dir = dirichlet_b_hat(alpha, q_max, per_q_cap)?;
        Ok(Self {
            beta_hat: beta.beta_hat,
            beta_argmin: beta.beta_argmin,
            n_max,
            b_hat: dir.b_hat,
            q_max: dir.q_max,
            q_max_requested: q_max,
            per_q_cap,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DmVerdict {
    Ok,
    ExceedsDm,
}

/// Flags a claimed constant above the Davenport–Mahler threshold (d = 2).
pub fn davenport_mahler_check(beta_candidate: f64) -> DmVerdict {
    if beta_candidate > davenport_mahler_threshold() {
        DmVerdict::ExceedsDm
    } else {
        DmVerdict::Ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::make_alpha;

    #[test]
    fn nearest_int_examples() {
        assert_eq!(nearest_int_dist(&[0.5]), 0.5);
        assert!((nearest_int_dist(&[0.5, 0.5]) - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(nearest_int_dist(&[2.25]), 0.25);
        assert_eq!(nearest_int_dist(&[-0.75, 3.0]), 0.25);
    }

    #[test]
    fn rational_beta_is_zero() {
        let a = make_alpha("dec:0.5").unwrap();
        let b = beta_hat(&a, 10).unwrap();
        assert_eq!(b.beta_hat, 0.0);
        assert_eq!(b.beta_argmin, 2);
    }

    #[test]
    fn golden_beta_at_first_multiple() {
        let a = make_alpha("phi").unwrap();
        let b = beta_hat(&a, 100_000).unwrap();
        assert_eq!(b.beta_argmin, 1);
        assert!((b.beta_hat - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn streaming_matches_direct_products_past_reanchor() {
        let a = make_alpha("plastic").unwrap();
        let mut scan = MultiplesScan::new(&a);
        for _ in 0..(2 * REANCHOR_INTERVAL + 5) {
            let (n, x) = scan.advance();
            let x = x.to_vec();
            for (j, &xj) in x.iter().enumerate() {
                let direct = frac_mul(n as i64, a.entries()[j]);
                assert!(dist_to_int(xj - direct) < 1e-12, "N={n}");
            }
        }
    }

    #[test]
    fn dirichlet_half() {
        let a = make_alpha("dec:0.5").unwrap();
        let e = dirichlet_b_hat(&a, 3, DEFAULT_PER_Q_CAP).unwrap();
        assert_eq!(e.b_hat, 0.5);
        assert_eq!(e.b_argmax, 1);
        assert_eq!(e.q_max, 3);
    }

    #[test]
    fn dirichlet_single_term() {
        let a = make_alpha("plastic").unwrap();
        let e = dirichlet_b_hat(&a, 1, DEFAULT_PER_Q_CAP).unwrap();
        assert_eq!(e.b_hat, nearest_int_dist(a.entries()));
        assert!(e.b_hat <= 2f64.sqrt() / 2.0);
    }

    #[test]
    fn dirichlet_golden_below_one() {
        let a = make_alpha("phi").unwrap();
        let e = dirichlet_b_hat(&a, 1000, DEFAULT_PER_Q_CAP).unwrap();
        assert!(e.b_hat > 0.0 && e.b_hat <= 1.0);
    }

    #[test]
    fn dirichlet_horizon_respects_cap() {
        let a = make_alpha("sqrt:2,3,5").unwrap();
        let e = dirichlet_b_hat(&a, 200, 1_000_000).unwrap();
        assert_eq!(e.q_max, 100);
        assert_eq!(e.q_max_requested, 200);
        assert!(e.b_hat <= 3f64.sqrt());
    }

    #[test]
    fn davenport_mahler_verdicts() {
        let t = davenport_mahler_threshold();
        assert!((t - 0.64577).abs() < 1e-5);
        assert_eq!(davenport_mahler_check(0.5485), DmVerdict::Ok);
        assert_eq!(davenport_mahler_check(0.7), DmVerdict::ExceedsDm);
        assert_eq!(davenport_mahler_check(t), DmVerdict::Ok);
    }
}
