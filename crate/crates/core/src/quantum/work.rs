//! Two-point-measurement work statistics and the quantum Jarzynski
//! equality.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dynamics::{evolve, hamiltonian_at, sorted_eigh};
use super::AnnealSpec;
use crate::Result;

/// Work values with their path probabilities for an anneal starting from
/// the Gibbs ensemble of H(0) at inverse temperature `beta`.
#[derive(Debug, Clone)]
pub struct WorkDistribution {
    /// (W = E_m(T) - E_n(0), probability) per eigenvalue pair.
    pub entries: Vec<(f64, f64)>,
    pub beta: f64,
    /// log Z of H(0) and H(T) at `beta`, from the exact spectra.
    pub log_z0: f64,
    pub log_zt: f64,
}

impl WorkDistribution {
    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// ⟨e^{-βW}⟩ over the two-point-measurement ensemble.
    pub fn exp_average(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(w, p)| p * (-self.beta * w).exp())
            .sum()
    }

    pub fn mean_work(&self) -> f64 {
        self.entries.iter().map(|&(w, p)| p * w).sum()
    }
}

/// Group sorted eigenvalues into degenerate clusters (relative 1e-9).
fn degeneracy_groups(values: &[f64]) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &e) in values.iter().enumerate() {
        match groups.last_mut() {
            Some((rep, members)) if (e - *rep).abs() <= 1e-9 * (1.0 + rep.abs()) => {
                members.push(i);
            }
            _ => groups.push((e, vec![i])),
        }
    }
    groups
}

fn log_partition_from_spectrum(values: &[f64], beta: f64) -> f64 {
    let e_min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    -beta * e_min
        + values
            .iter()
            .map(|&e| (-beta * (e - e_min)).exp())
            .sum::<f64>()
            .ln()
}

/// Eigenvalue clusters: (representative energy, member state indices).
pub type SpectrumGroups = Vec<(f64, Vec<usize>)>;

/// Transition probabilities |⟨m(T)|U_T|n(0)⟩|² grouped by eigenvalue, so
/// work depends only on measured energies (projector convention for
/// degenerate spectra).
pub fn two_point_transition(
    spec: &AnnealSpec,
) -> Result<(SpectrumGroups, SpectrumGroups, DMatrix<f64>)> {
    let u = evolve(spec)?;
    let (e0, v0) = sorted_eigh(&hamiltonian_at(spec, 0.0));
    let (et, vt) = sorted_eigh(&hamiltonian_at(spec, 1.0));
    let v0c = v0.map(|x| Complex64::new(x, 0.0));
    let vtc = vt.map(|x| Complex64::new(x, 0.0));
    let amplitudes = vtc.adjoint() * u * v0c;
    let groups0 = degeneracy_groups(&e0);
    let groups_t = degeneracy_groups(&et);
    let mut p = DMatrix::zeros(groups_t.len(), groups0.len());
    for (gm, (_, members_m)) in groups_t.iter().enumerate() {
        for (gn, (_, members_n)) in groups0.iter().enumerate() {
            let mut total = 0.0;
            for &m in members_m {
                for &n in members_n {
                    total += amplitudes[(m, n)].norm_sqr();
                }
            }
            p[(gm, gn)] = total;
        }
    }
    Ok((groups0, groups_t, p))
}

/// Full two-point work distribution with initial Gibbs weights at `beta`.
pub fn work_distribution(spec: &AnnealSpec, beta: f64) -> Result<WorkDistribution> {
    let (groups0, groups_t, p) = two_point_transition(spec)?;
    let (e0, _) = sorted_eigh(&hamiltonian_at(spec, 0.0));
    let (et, _) = sorted_eigh(&hamiltonian_at(spec, 1.0));
    let log_z0 = log_partition_from_spectrum(&e0, beta);
    let log_zt = log_partition_from_spectrum(&et, beta);
    let mut entries = Vec::with_capacity(groups0.len() * groups_t.len());
    for (gn, (en, members_n)) in groups0.iter().enumerate() {
        // Gibbs weight of the whole eigenspace
        let weight = members_n.len() as f64 * (-beta * en - log_z0).exp();
        let norm = members_n.len() as f64;
        for (gm, (em, _)) in groups_t.iter().enumerate() {
            let prob = weight * p[(gm, gn)] / norm;
            if prob > 0.0 {
                entries.push((em - en, prob));
            }
        }
    }
    Ok(WorkDistribution {
        entries,
        beta,
        log_z0,
        log_zt,
    })
}

/// Quantum Jarzynski equality: returns (⟨e^{-βW}⟩, Z_T/Z_0). The two sides
/// agree for every schedule, however violent.
pub fn jarzynski_check(spec: &AnnealSpec, beta: f64) -> Result<(f64, f64)> {
    let dist = work_distribution(spec, beta)?;
    Ok((dist.exp_average(), (dist.log_zt - dist.log_z0).exp()))
}

/// Observable-weighted Jarzynski ratio ⟨O_T e^{-βW}⟩ / ⟨e^{-βW}⟩ for a
/// diagonal observable measured at the end of the protocol; equals the
/// thermal average of O under H(T) at `beta`. Returns (ratio, thermal).
pub fn observable_jarzynski(spec: &AnnealSpec, beta: f64, obs_diag: &[f64]) -> Result<(f64, f64)> {
    let dim = spec.dim();
    if obs_diag.len() != dim {
        return Err(crate::Error::ShapeMismatch {
            expected: dim,
            got: obs_diag.len(),
        });
    }
    let u = evolve(spec)?;
    let (e0, v0) = sorted_eigh(&hamiltonian_at(spec, 0.0));
    let log_z0 = log_partition_from_spectrum(&e0, beta);
    let v0c = v0.map(|x| Complex64::new(x, 0.0));
    let amplitudes = u * v0c; // columns: evolved initial eigenstates
                              // final measurement in the computational basis (H(T) = H₀ is diagonal
                              // there and commutes with O)
    let (h0, _) = super::dynamics::build_hamiltonians(spec);
    let mut weighted = 0.0;
    let mut plain = 0.0;
    for n in 0..dim {
        let w_init = (-beta * e0[n] - log_z0).exp();
        for s in 0..dim {
            let p = amplitudes[(s, n)].norm_sqr() * w_init;
            let boltz = (-beta * (h0[s] - e0[n])).exp();
            weighted += obs_diag[s] * boltz * p;
            plain += boltz * p;
        }
    }
    // exact thermal average under the final Hamiltonian
    let log_zt = log_partition_from_spectrum(h0.as_slice(), beta);
    let thermal = h0
        .iter()
        .enumerate()
        .map(|(s, &e)| obs_diag[s] * (-beta * e - log_zt).exp())
        .sum::<f64>();
    Ok((weighted / plain, thermal))
}
