//! Generator tuples and the textual spec grammar
//! `phi | plastic | sqrt:<int>[,<int>…] | dec:<decimal>[,<decimal>…]`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, WalkError};
use crate::float::frac;

/// The golden-ratio conjugate `(√5 − 1)/2`.
pub fn golden_ratio_conjugate() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Real root of `x³ − x − 1`, by Newton iteration to a fixed point.
pub fn plastic_number() -> f64 {
    let mut x = 1.3f64;
    for _ in 0..100 {
        let next = x - (x * x * x - x - 1.0) / (3.0 * x * x - 1.0);
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// Rotation tuple `(α₁, …, α_d)` with every entry reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaVector {
    entries: Vec<f64>,
    spec: String,
}

impl AlphaVector {
    pub fn new(entries: Vec<f64>, spec: impl Into<String>) -> Result<Self> {
        let spec = spec.into();
        if entries.is_empty() {
            return Err(WalkError::AlphaSpec {
                spec,
                reason: "empty tuple".into(),
            });
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite()) {
            return Err(WalkError::AlphaSpec {
                spec,
                reason: format!("non-finite entry {bad}"),
            });
        }
        let entries = entries.into_iter().map(frac).collect();
        Ok(Self { entries, spec })
    }

    pub fn from_values(entries: &[f64]) -> Result<Self> {
        let spec = format!(
            "dec:{}",
            entries
                .iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::new(entries.to_vec(), spec)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = (", self.spec)?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for AlphaVector {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        make_alpha(s)
    }
}

/// Parses an alpha spec.
pub fn make_alpha(spec: &str) -> Result<AlphaVector> {
    let trimmed = spec.trim();
    let fail = |reason: String| WalkError::AlphaSpec {
        spec: spec.to_string(),
        reason,
    };
    match trimmed {
        "phi" => return AlphaVector::new(vec![golden_ratio_conjugate()], trimmed),
        "plastic" => {
            let g = plastic_number();
            return AlphaVector::new(vec![1.0 / (g * g), 1.0 / g], trimmed);
        }
        _ => {}
    }
    let (kind, list) = trimmed
        .split_once(':')
        .ok_or_else(|| fail("expected `phi`, `plastic`, `sqrt:…` or `dec:…`".into()))?;
    let items: Vec<&str> = list.split(',').map(str::trim).collect();
    if items.iter().all(|s| s.is_empty()) {
        return Err(fail("empty tuple".into()));
    }
    let entries = match kind {
        "sqrt" => items
            .iter()
            .map(|s| {
                s.parse::<u64>()
                    .map(|n| (n as f64).sqrt())
                    .map_err(|_| fail(format!("`{s}` is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?,
        "dec" => items
            .iter()
            .map(|s| {
                let v: f64 = s
                    .parse()
                    .map_err(|_| fail(format!("`{s}` is not a decimal")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(fail(format!("non-finite literal `{s}`")))
                }
            })
            .collect::<Result<Vec<_>>>()?,
        other => return Err(fail(format!("unknown kind `{other}`"))),
    };
    AlphaVector::new(entries, trimmed)
}
