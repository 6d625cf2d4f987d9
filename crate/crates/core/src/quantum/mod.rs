//! Exact small-N engine for annealing dynamics: dense Hamiltonians,
//! unitary evolution, two-point work statistics, Jarzynski equalities,
//! the classical-quantum mapping and its gauge-derived identities.
//!
//! Computational basis: state index `b` encodes σ^z_i = +1 when bit i of
//! `b` is 0. All Hamiltonians here are real symmetric; only states and
//! propagators are complex. ħ = 1 and J = 1 throughout.

mod dynamics;
mod master;
mod suite;
mod work;

pub use dynamics::{
    build_hamiltonians, evolve, evolve_auto, min_gap, propagator, quantum_gauge_transform,
    GapReport,
};
pub use master::{
    build_hq, classical_jarzynski, qja_run, transition_matrix, MasterSystem, QjaReport, UpdateRule,
};
pub use suite::{
    gauge_identity_suite, gauge_identity_suite_with_beta2, kl_bound_check, GaugeSuiteReport,
    IdentityCheck, KlReport,
};
pub use work::{jarzynski_check, observable_jarzynski, work_distribution, WorkDistribution};

use crate::{Error, Result};

/// Largest spin count for dense exact treatment (2^N ≤ 4096).
pub const MAX_SPINS: usize = 12;

/// Annealing protocol: horizon, step count and an optional inverse-
/// temperature ramp for thermal (SA-type) schedules. The interpolation
/// f(t) = t/T is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub total_time: f64,
    pub steps: usize,
    pub beta_ramp: Option<Vec<f64>>,
}

impl Schedule {
    pub fn new(total_time: f64, steps: usize) -> Result<Schedule> {
        if !(total_time >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total time {total_time} < 0"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter(
                "schedule needs at least one step".into(),
            ));
        }
        Ok(Schedule {
            total_time,
            steps,
            beta_ramp: None,
        })
    }

    pub fn with_beta_ramp(total_time: f64, steps: usize, ramp: Vec<f64>) -> Result<Schedule> {
        let mut s = Schedule::new(total_time, steps)?;
        if ramp.is_empty() {
            return Err(Error::InvalidParameter("empty beta ramp".into()));
        }
        s.beta_ramp = Some(ramp);
        Ok(s)
    }

    /// f(t) = t/T; f(0) = 0 and f(T) = 1, monotone.
    pub fn interpolation(&self, t: f64) -> f64 {
        if self.total_time == 0.0 {
            1.0
        } else {
            (t / self.total_time).clamp(0.0, 1.0)
        }
    }
}

/// A transverse-field annealing instance. Couplings `(i, j, J_ij)` with
/// i ≠ j are Ising bonds -J σ^z_i σ^z_j; entries with i == j are
/// longitudinal fields -J σ^z_i.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealSpec {
    pub n: usize,
    pub couplings: Vec<(usize, usize, f64)>,
    pub gamma0: f64,
    pub schedule: Schedule,
}

impl AnnealSpec {
    pub fn new(
        n: usize,
        couplings: Vec<(usize, usize, f64)>,
        gamma0: f64,
        schedule: Schedule,
    ) -> Result<AnnealSpec> {
        if n == 0 || n > MAX_SPINS {
            return Err(Error::SystemTooLarge {
                what: "spin count",
                max: MAX_SPINS,
                got: n,
            });
        }
        for &(i, j, _) in &couplings {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "coupling ({i}, {j}) outside 0..{n}"
                )));
            }
        }
        Ok(AnnealSpec {
            n,
            couplings,
            gamma0,
            schedule,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

/// Build the anneal instance living on the 2×2 torus (4 sites, 8 bonds,
/// adjacent pairs doubly connected) with the given bond signs.
pub fn torus_2x2_spec(bond_signs: &[i8], gamma0: f64, schedule: Schedule) -> Result<AnnealSpec> {
    let lattice = crate::lattice::TorusLattice::new(2)?;
    if bond_signs.len() != lattice.n_edges() {
        return Err(Error::ShapeMismatch {
            expected: lattice.n_edges(),
            got: bond_signs.len(),
        });
    }
    let couplings = bond_signs
        .iter()
        .enumerate()
        .map(|(e, &t)| {
            let (u, v) = lattice.edge_endpoints(e);
            (u, v, f64::from(t))
        })
        .collect();
    AnnealSpec::new(lattice.n_sites(), couplings, gamma0, schedule)
}
