//! Monte Carlo simulation of the walk, used to cross-check exact results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alpha::AlphaVector;
use crate::error::{Result, WalkError};
use crate::float::frac_dot;
use crate::measure::{Atom, AtomicMeasure};

/// Empirical measure of `n_samples` independent `k`-step paths.
///
/// Each path tracks its integer coefficient vector, so samples landing on
/// the same lattice point produce bit-identical positions and merge.
pub fn sample_walk(
    alpha: &AlphaVector,
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<AtomicMeasure> {
    if n_samples == 0 {
        return Err(WalkError::InvalidArgument("n_samples must be ≥ 1".into()));
    }
    let d = alpha.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = 1.0 / n_samples as f64;
    let mut m = vec![0i64; d];
    let mut atoms = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        m.iter_mut().for_each(|x| *x = 0);
        for _ in 0..k {
            let choice = rng.gen_range(0..2 * d);
            if choice % 2 == 0 {
                m[choice / 2] += 1;
            } else {
                m[choice / 2] -= 1;
            }
        }
        atoms.push(Atom {
            position: frac_dot(&m, alpha.entries()),
            weight,
        });
    }
    AtomicMeasure::from_atoms(atoms)
}
