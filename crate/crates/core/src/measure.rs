//! Finitely supported probability measures on the circle `[0, 1)` and their
//! discrepancy from the uniform measure.

use serde::Serialize;

use crate::alpha::AlphaVector;
use crate::error::{Result, WalkError};
use crate::float::frac_dot;
use crate::lattice::{ratio_to_f64, LatticeDistribution};

/// Largest atom count accepted by [`discrepancy_oracle`].
pub const ORACLE_ATOM_CAP: usize = 64;

const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

/// Atoms sorted strictly by position, positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    /// Sorts, merges bit-identical positions and drops zero weights.
    ///
    /// Fails when a position is outside `[0, 1)`, a weight is negative or
    /// non-finite, or the total mass is not one within `1e-12`.
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(0.0..1.0).contains(&a.position) {
                return Err(WalkError::InvalidArgument(format!(
                    "atom position {} outside [0, 1)",
                    a.position
                )));
            }
            if !(a.weight.is_finite() && a.weight >= 0.0) {
                return Err(WalkError::InvalidArgument(format!(
                    "invalid atom weight {}",
                    a.weight
                )));
            }
        }
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.position == a.position => last.weight += a.weight,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.weight > 0.0);
        let total = neumaier_sum(merged.iter().map(|a| a.weight));
        if merged.is_empty() || (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(WalkError::InvalidArgument(format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { atoms: merged })
    }

    pub fn point_mass(position: f64) -> Result<Self> {
        Self::from_atoms(vec![Atom {
            position,
            weight: 1.0,
        }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        neumaier_sum(self.atoms.iter().map(|a| a.weight))
    }

    /// `Σ w·e^{2πimx}` as `(re, im)`.
    pub fn fourier_coefficient(&self, m: i64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for a in &self.atoms {
            let theta = std::f64::consts::TAU * crate::float::frac_mul(m, a.position);
            re += a.weight * theta.cos();
            im += a.weight * theta.sin();
        }
        (re, im)
    }

    /// Every atom shifted by `offset` modulo one.
    pub fn rotated(&self, offset: f64) -> Result<Self> {
        Self::from_atoms(
            self.atoms
                .iter()
                .map(|a| Atom {
                    position: crate::float::frac_dd(a.position, offset),
                    weight: a.weight,
                })
                .collect(),
        )
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Projects a lattice distribution onto the circle through `m ↦ frac(m·α)`.
///
/// Weights whose exact value underflows `f64` are dropped.
pub fn atoms_on_circle(dist: &LatticeDistribution, alpha: &AlphaVector) -> Result<AtomicMeasure> {
    if dist.dim() != alpha.dim() {
        return Err(WalkError::DimensionMismatch {
            dist: dist.dim(),
            alpha: alpha.dim(),
        });
    }
    let den = dist.denominator();
    let a = alpha.entries();
    let mut atoms = Vec::new();
    dist.for_each_nonzero(|m, c| {
        atoms.push(Atom {
            position: frac_dot(m, a),
            weight: ratio_to_f64(c, &den),
        })
    });
    AtomicMeasure::from_atoms(atoms)
}

/// `sup_I |P(I) − U(I)|` over arcs `I`, via the range of the centered CDF.
///
/// With `G_i` the cumulative weight through atom `i`, the centered CDF
/// `F(x) − x` takes the values `G_i − x_i` just after atom `i` and
/// `G_{i−1} − x_i` just before it, plus `0` at the origin. Any arc's excess
/// is a difference of two such values (wrapping arcs included), so the
/// discrepancy is their range.
pub fn discrepancy_exact(p: &AtomicMeasure) -> f64 {
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    let mut cum = 0.0f64;
    let mut comp = 0.0f64;
    for a in p.atoms() {
        let before = (cum + comp) - a.position;
        let t = cum + a.weight;
        comp += if cum.abs() >= a.weight {
            (cum - t) + a.weight
        } else {
            (a.weight - t) + cum
        };
        cum = t;
        let after = (cum + comp) - a.position;
        lo = lo.min(before);
        hi = hi.max(after);
    }
    hi - lo
}

/// Brute-force discrepancy over every arc with endpoints at atom positions.
///
/// For each ordered pair of atoms `(i, j)` the counter-clockwise arc from
/// `x_i` to `x_j` is tried open or closed at each end. `i == j` covers both
/// the single point and the full circle punctured at `x_i`.
pub fn discrepancy_oracle(p: &AtomicMeasure) -> Result<f64> {
    let atoms = p.atoms();
    let n = atoms.len();
    if n > ORACLE_ATOM_CAP {
        return Err(WalkError::OracleCap {
            got: n,
            cap: ORACLE_ATOM_CAP,
        });
    }
    let mut best = 0.0f64;
    let mut consider = |mass: f64, length: f64| {
        best = best.max((mass - length).abs());
    };
    for i in 0..n {
        for j in 0..n {
            // Arcs from x_i counter-clockwise to x_j; for i == j also the
            // full turn.
            let turns: &[bool] = if i == j { &[false, true] } else { &[false] };
            for &full in turns {
                let (length, interior) = if i == j && !full {
                    (0.0, 0.0)
                } else {
                    let length = if full {
                        1.0
                    } else if j > i {
                        atoms[j].position - atoms[i].position
                    } else {
                        1.0 - atoms[i].position + atoms[j].position
                    };
                    let mut interior = 0.0;
                    let mut t = (i + 1) % n;
                    while t != j {
                        interior += atoms[t].weight;
                        t = (t + 1) % n;
                    }
                    (length, interior)
                };
                for closed_start in [false, true] {
                    for closed_end in [false, true] {
                        let mut mass = interior;
                        if i == j {
                            // Both endpoints are the same atom.
                            if closed_start || closed_end {
                                mass += atoms[i].weight;
                            }
                        } else {
                            if closed_start {
                                mass += atoms[i].weight;
                            }
                            if closed_end {
                                mass += atoms[j].weight;
                            }
                        }
                        consider(mass, length);
                    }
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::make_alpha;
    use crate::lattice::{convolve_power, DEFAULT_SUPPORT_CAP};

    fn measure(pairs: &[(f64, f64)]) -> AtomicMeasure {
        AtomicMeasure::from_atoms(
            pairs
                .iter()
                .map(|&(position, weight)| Atom { position, weight })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn point_mass_has_full_discrepancy() {
        let p = AtomicMeasure::point_mass(0.0).unwrap();
        assert_eq!(discrepancy_exact(&p), 1.0);
        assert_eq!(discrepancy_oracle(&p).unwrap(), 1.0);
        let q = AtomicMeasure::point_mass(0.3).unwrap();
        assert!((discrepancy_exact(&q) - 1.0).abs() < 1e-15);
        assert!((discrepancy_oracle(&q).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_opposite_atoms() {
        let p = measure(&[(0.25, 0.5), (0.75, 0.5)]);
        assert_eq!(discrepancy_exact(&p), 0.5);
        assert_eq!(discrepancy_oracle(&p).unwrap(), 0.5);
    }

    #[test]
    fn equally_spaced_atoms() {
        for n in 2..=8 {
            let pairs: Vec<_> = (0..n)
                .map(|j| (j as f64 / n as f64, 1.0 / n as f64))
                .collect();
            let p = measure(&pairs);
            let expected = 1.0 / n as f64;
            assert!((discrepancy_oracle(&p).unwrap() - expected).abs() < 1e-12);
            assert!((discrepancy_exact(&p) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_refuses_large_measures() {
        let n = ORACLE_ATOM_CAP + 1;
        let pairs: Vec<_> = (0..n)
            .map(|j| (j as f64 / n as f64, 1.0 / n as f64))
            .collect();
        assert!(matches!(
            discrepancy_oracle(&measure(&pairs)),
            Err(WalkError::OracleCap { .. })
        ));
    }

    #[test]
    fn construction_validates() {
        let bad = |pairs: &[(f64, f64)]| {
            AtomicMeasure::from_atoms(
                pairs
                    .iter()
                    .map(|&(position, weight)| Atom { position, weight })
                    .collect(),
            )
            .is_err()
        };
        assert!(bad(&[(1.0, 1.0)]));
        assert!(bad(&[(-0.1, 1.0)]));
        assert!(bad(&[(0.1, 0.5)]));
        assert!(bad(&[(0.1, f64::NAN)]));
        assert!(bad(&[]));
    }

    #[test]
    fn identical_positions_merge() {
        let p = measure(&[(0.5, 0.25), (0.1, 0.5), (0.5, 0.25)]);
        assert_eq!(
            p.atoms(),
            &[
                Atom {
                    position: 0.1,
                    weight: 0.5
                },
                Atom {
                    position: 0.5,
                    weight: 0.5
                }
            ]
        );
    }

    #[test]
    fn start_of_walk_is_at_origin() {
        let alpha = make_alpha("plastic").unwrap();
        let dist = convolve_power(2, 0, DEFAULT_SUPPORT_CAP).unwrap();
        let p = atoms_on_circle(&dist, &alpha).unwrap();
        assert_eq!(
            p.atoms(),
            &[Atom {
                position: 0.0,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn quarter_rotation_one_step() {
        let alpha = make_alpha("dec:0.25").unwrap();
        let dist = convolve_power(1, 1, DEFAULT_SUPPORT_CAP).unwrap();
        let p = atoms_on_circle(&dist, &alpha).unwrap();
        assert_eq!(
            p.atoms(),
            &[
                Atom {
                    position: 0.25,
                    weight: 0.5
                },
                Atom {
                    position: 0.75,
                    weight: 0.5
                }
            ]
        );
    }

    #[test]
    fn golden_two_steps() {
        let alpha = make_alpha("phi").unwrap();
        let phi = alpha.entries()[0];
        let dist = convolve_power(1, 2, DEFAULT_SUPPORT_CAP).unwrap();
        let p = atoms_on_circle(&dist, &alpha).unwrap();
        let expected = [(0.0, 0.5), (2.0 * phi - 1.0, 0.25), (2.0 - 2.0 * phi, 0.25)];
        assert_eq!(p.len(), 3);
        for (atom, (x, w)) in p.atoms().iter().zip(expected) {
            assert!((atom.position - x).abs() < 1e-15);
            assert_eq!(atom.weight, w);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let alpha = make_alpha("phi").unwrap();
        let dist = convolve_power(2, 1, DEFAULT_SUPPORT_CAP).unwrap();
        assert!(matches!(
            atoms_on_circle(&dist, &alpha),
            Err(WalkError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fourier_coefficient_of_two_atoms() {
        let p = measure(&[(0.25, 0.5), (0.75, 0.5)]);
        let (re, im) = p.fourier_coefficient(2);
        assert!((re + 1.0).abs() < 1e-15 && im.abs() < 1e-15);
    }
}
