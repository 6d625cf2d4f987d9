//! Numerical laboratory for the bridge between spin-glass statistical
//! mechanics and quantum computation.
//!
//! The crate is organized around the physics, not the plumbing:
//!
//! - [`lattice`]: L×L torus geometry and Z2 homology (chains, syndromes,
//!   winding classes).
//! - [`meanfield`]: biased-coin moments, the large-deviation rate function
//!   and the self-consistent mean-field magnetization.
//! - [`duality`]: binary Fourier duality for the square-lattice Ising
//!   model, and its replica/cluster extension locating the ±J
//!   multicritical point (the toric-code accuracy threshold).
//! - [`spinglass`]: Metropolis/heat-bath Monte Carlo and exact enumeration
//!   for the ±J model, with the Nishimori-line gauge identities.
//! - [`surface`]: toric-code Z-error channel and Bayes-optimal
//!   homology-class decoding through exact ±J partition functions.
//! - [`quantum`]: dense small-N annealing dynamics, two-point-measurement
//!   work statistics, Jarzynski equalities (classical, quantum, gauge
//!   averaged) and the classical-quantum mapping.

// parameter guards use `!(x > 0.0)` so that NaN is rejected too;
// index-style loops mirror the basis-state arithmetic they implement
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod duality;
pub mod lattice;
pub mod meanfield;
pub mod quantum;
pub mod rng;
pub mod spinglass;
pub mod surface;

use std::fmt;

/// Errors shared by the numerical modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Lattice linear size below the homologically meaningful minimum.
    LatticeTooSmall(usize),
    /// A system dimension exceeded an exact-enumeration cost guard.
    SystemTooLarge {
        what: &'static str,
        max: usize,
        got: usize,
    },
    /// A parameter was outside its documented domain.
    InvalidParameter(String),
    /// Input shapes disagree (edge counts, spin counts, ...).
    ShapeMismatch { expected: usize, got: usize },
    /// A numerical safeguard tripped (unitarity drift, asymmetry, ...).
    NumericalGuard(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LatticeTooSmall(l) => {
                write!(f, "lattice size {l} < 2: torus homology degenerate")
            }
            Error::SystemTooLarge { what, max, got } => {
                write!(f, "{what} = {got} exceeds exact-computation guard {max}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {expected}, got {got}")
            }
            Error::NumericalGuard(msg) => write!(f, "numerical guard: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

/// Nishimori-line coupling for a given density `p` of negative bonds,
/// K_p = ln((1-p)/p)/2, i.e. exp(-2 K_p) = p/(1-p).
///
/// This is the single owner of the disorder-coupling convention. The code
/// convention used throughout (`p` counts negative/antiferromagnetic bonds,
/// equivalently the per-edge error rate) relabels the spin-glass convention
/// where `p` counts ferromagnetic bonds; the two give the same K_p for the
/// same physical disorder.
pub fn nishimori_coupling(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} outside (0, 1)")));
    }
    Ok(0.5 * ((1.0 - p) / p).ln())
}

/// Negative-bond density on the Nishimori line at coupling `k`,
/// the inverse of [`nishimori_coupling`]: p = 1/(1 + exp(2K)).
pub fn nishimori_density(k: f64) -> f64 {
    1.0 / (1.0 + (2.0 * k).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nishimori_conversion_round_trips() {
        for &p in &[1e-6, 0.05, 0.1100, 0.2928932188134525, 0.5, 0.9] {
            let k = nishimori_coupling(p).unwrap();
            assert!((nishimori_density(k) - p).abs() < 1e-14);
        }
        // p = 1/2 is zero coupling
        assert_eq!(nishimori_coupling(0.5).unwrap(), 0.0);
        assert!(nishimori_coupling(0.0).is_err());
        assert!(nishimori_coupling(1.0).is_err());
    }

    #[test]
    fn nishimori_pins_both_conventions() {
        // code convention: exp(-2 K_p) = p/(1-p) with p the error density
        let p = 0.11;
        let k = nishimori_coupling(p).unwrap();
        assert!(((-2.0 * k).exp() - p / (1.0 - p)).abs() < 1e-15);
        // spin-glass convention: exp(-2 K_p) = (1-p_ferro)/p_ferro with
        // p_ferro = 1 - p the ferromagnetic density
        let p_ferro = 1.0 - p;
        assert!(((-2.0 * k).exp() - (1.0 - p_ferro) / p_ferro).abs() < 1e-15);
    }
}
