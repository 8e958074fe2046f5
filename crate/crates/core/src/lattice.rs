//! Exact walk distributions on the coefficient lattice `ℤ^d`.
//!
//! After `k` steps the walk sits at an integer vector `m` and the circle
//! position is `frac(Σ m_j α_j)`. Path counts are kept as big integers over
//! the implied denominator `(2d)^k`, so every probability is exact.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, WalkError};

/// Default refusal threshold for `(2k+1)^d` lattice points.
pub const DEFAULT_SUPPORT_CAP: u64 = 5_000_000;

/// `(2k+1)^d`, saturating.
pub fn predicted_support(d: usize, k: usize) -> u128 {
    let side = 2 * k as u128 + 1;
    (0..d).fold(1u128, |acc, _| acc.saturating_mul(side))
}

fn check_cap(d: usize, k: usize, cap: u64) -> Result<()> {
    let predicted = predicted_support(d, k);
    if predicted > cap as u128 {
        return Err(WalkError::SupportCap { predicted, cap });
    }
    Ok(())
}

/// Path counts of the `k`-step walk, stored densely on the box `[-R, R]^d`.
#[derive(Debug, Clone)]
pub struct LatticeDistribution {
    d: usize,
    k: usize,
    radius: usize,
    counts: Vec<BigUint>,
}

impl LatticeDistribution {
    fn origin(d: usize, radius: usize) -> Self {
        let side = 2 * radius + 1;
        let len = side.pow(d as u32);
        let mut counts = vec![BigUint::zero(); len];
        let center = (0..d).map(|j| radius * side.pow(j as u32)).sum::<usize>();
        counts[center] = BigUint::one();
        Self {
            d,
            k: 0,
            radius,
            counts,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn steps(&self) -> usize {
        self.k
    }

    /// `(2d)^k`.
    pub fn denominator(&self) -> BigUint {
        BigUint::from(2 * self.d as u64).pow(self.k as u32)
    }

    fn side(&self) -> usize {
        2 * self.radius + 1
    }

    fn index(&self, m: &[i64]) -> Option<usize> {
        if m.len() != self.d {
            return None;
        }
        let side = self.side();
        let r = self.radius as i64;
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &mj in m {
            if mj.abs() > r {
                return None;
            }
            idx += (mj + r) as usize * stride;
            stride *= side;
        }
        Some(idx)
    }

    /// Path count at lattice point `m` (zero off the support).
    pub fn count(&self, m: &[i64]) -> BigUint {
        self.index(m)
            .map(|i| self.counts[i].clone())
            .unwrap_or_default()
    }

    /// Sum of all counts; equals [`denominator`](Self::denominator).
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Visits every lattice point with a nonzero count.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(&[i64], &BigUint)) {
        let k = self.k as i64;
        let mut m = vec![-k; self.d];
        for_each_in_box(&mut m, k, |m| {
            if let Some(i) = self.index(m) {
                let c = &self.counts[i];
                if !c.is_zero() {
                    f(m, c);
                }
            }
        });
    }

    /// Nonzero entries as an owned list, in odometer order.
    pub fn nonzero(&self) -> Vec<(Vec<i64>, BigUint)> {
        let mut out = Vec::new();
        self.for_each_nonzero(|m, c| out.push((m.to_vec(), c.clone())));
        out
    }
}

/// Odometer over `[-r, r]^d`, starting from `m = [-r; d]`.
fn for_each_in_box(m: &mut [i64], r: i64, mut f: impl FnMut(&[i64])) {
    if m.is_empty() {
        f(m);
        return;
    }
    loop {
        f(m);
        let mut j = 0;
        loop {
            if m[j] < r {
                m[j] += 1;
                break;
            }
            m[j] = -r;
            j += 1;
            if j == m.len() {
                return;
            }
        }
    }
}

/// Incremental exact walk; yields the distribution after each step.
#[derive(Debug, Clone)]
pub struct LatticeWalk {
    current: LatticeDistribution,
    scratch: Vec<BigUint>,
}

impl LatticeWalk {
    /// Prepares storage for up to `max_steps` steps, refusing when
    /// `(2·max_steps+1)^d` exceeds `support_cap`.
    pub fn new(d: usize, max_steps: usize, support_cap: u64) -> Result<Self> {
        if d == 0 {
            return Err(WalkError::InvalidArgument("dimension must be ≥ 1".into()));
        }
        check_cap(d, max_steps, support_cap)?;
        let current = LatticeDistribution::origin(d, max_steps);
        let scratch = vec![BigUint::zero(); current.counts.len()];
        Ok(Self { current, scratch })
    }

    pub fn current(&self) -> &LatticeDistribution {
        &self.current
    }

    pub fn into_distribution(self) -> LatticeDistribution {
        self.current
    }

    /// Advances one step. Panics past the capacity given to [`new`](Self::new).
    pub fn step(&mut self) {
        let dist = &self.current;
        assert!(dist.k < dist.radius, "lattice walk capacity exhausted");
        let d = dist.d;
        let t = dist.k as i64 + 1;
        let r = dist.radius as i64;
        let side = dist.side();
        let strides: Vec<usize> = (0..d).map(|j| side.pow(j as u32)).collect();
        let old = &dist.counts;
        let new = &mut self.scratch;

        let mut m = vec![-t; d];
        for_each_in_box(&mut m, t, |m| {
            let mut idx = 0usize;
            let mut l1 = 0i64;
            for (j, &mj) in m.iter().enumerate() {
                idx += (mj + r) as usize * strides[j];
                l1 += mj.abs();
            }
            let cell = &mut new[idx];
            if l1 > t || (l1 - t) % 2 != 0 {
                cell.set_zero();
                return;
            }
            cell.set_zero();
            for (j, &mj) in m.iter().enumerate() {
                if mj > -r {
                    *cell += &old[idx - strides[j]];
                }
                if mj < r {
                    *cell += &old[idx + strides[j]];
                }
            }
        });
        std::mem::swap(&mut self.current.counts, &mut self.scratch);
        self.current.k += 1;
    }
}

/// Exact distribution of the walk on `ℤ^d` after `k` steps.
pub fn convolve_power(d: usize, k: usize, support_cap: u64) -> Result<LatticeDistribution> {
    let mut walk = LatticeWalk::new(d, k, support_cap)?;
    for _ in 0..k {
        walk.step();
    }
    Ok(walk.into_distribution())
}

/// `num / den` rounded to the nearest `f64` (up to one extra rounding).
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let scaled = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        (num >> (-shift) as u64) / den
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::INFINITY);
    // Split the power of two so the intermediate stays representable.
    let half = shift / 2;
    mantissa * pow2(-half) * pow2(-(shift - half))
}

fn pow2(e: i64) -> f64 {
    2f64.powi(e.clamp(-1100, 1100) as i32)
}
