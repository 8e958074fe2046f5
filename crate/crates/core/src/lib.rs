//! Random walks on the circle generated by `d` rotations.
//!
//! At each step one generator `α_j` is picked uniformly and the walk moves
//! by `±α_j` (mod 1). This crate computes
//!
//! * the exact step-`k` distribution, as big-integer path counts on the
//!   coefficient lattice `ℤ^d` ([`lattice`]), projected onto the circle
//!   ([`measure`]);
//! * its exact discrepancy from the uniform measure, with a brute-force
//!   oracle for cross-checking;
//! * Fourier lower and upper bounds on that discrepancy ([`fourier`]);
//! * finite-horizon estimates of the tuple's approximation constants
//!   ([`diophantine`]);
//! * experiment runners and report serialization ([`experiment`],
//!   [`output`]) used by the `circle-walk` binary.

pub mod alpha;
pub mod diophantine;
pub mod error;
pub mod experiment;
pub mod float;
pub mod fourier;
pub mod lattice;
pub mod measure;
pub mod output;
pub mod sampling;

pub use alpha::{make_alpha, AlphaVector};
pub use diophantine::{
    beta_hat, davenport_mahler_check, dirichlet_b_hat, nearest_int_dist, ApproximationConstants,
    DmVerdict,
};
pub use error::{Result, WalkError};
pub use experiment::{run_dioph, run_verify, run_walk, ExperimentConfig, Format, Mode};
pub use fourier::{
    analytic_truncation_m, erdos_turan_upper, optimize_et_m, q_hat, su_lower_bound,
    theorem_constants, BoundReport, FourierTable, TheoremConstants,
};
pub use lattice::{convolve_power, LatticeDistribution, LatticeWalk};
pub use measure::{atoms_on_circle, discrepancy_exact, discrepancy_oracle, Atom, AtomicMeasure};
pub use sampling::sample_walk;
