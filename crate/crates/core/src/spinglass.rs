//! Monte Carlo and exact enumeration for the ±J Ising model on the torus,
//! and the Nishimori-line gauge identities.
//!
//! Energies are in units of J = 1, temperature enters only through
//! K = βJ. Disorder density `p` counts negative bonds; the Nishimori line
//! pairs it with the thermal coupling via K = ln((1-p)/p)/2.
//!
//! At finite volume without a field the strict Gibbs magnetization
//! vanishes for every bond configuration (global spin flip), so the
//! magnetization estimators below measure the plus sector reached from an
//! all-up start; the exhaustive L=2 routines report the strict averages.

use rand::Rng;
use rand_pcg::Pcg64;
use rayon::prelude::*;

use crate::lattice::TorusLattice;
use crate::rng::task_rng;
use crate::{nishimori_density, Error, Result};

/// Quenched bond signs drawn from the ±J law.
#[derive(Debug, Clone)]
pub struct DisorderSample {
    pub tau: Vec<i8>,
    pub p: f64,
    pub seed: u64,
}

/// Per-site spin configuration.
#[derive(Debug, Clone)]
pub struct SpinState {
    pub s: Vec<i8>,
}

impl SpinState {
    pub fn all_up(n_sites: usize) -> SpinState {
        SpinState {
            s: vec![1; n_sites],
        }
    }

    pub fn random(n_sites: usize, rng: &mut Pcg64) -> SpinState {
        SpinState {
            s: (0..n_sites)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect(),
        }
    }

    pub fn magnetization(&self) -> f64 {
        self.s.iter().map(|&x| f64::from(x)).sum::<f64>() / self.s.len() as f64
    }
}

/// A Monte Carlo estimate with its disorder-scatter error bar.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub n_sweeps: usize,
}

impl McEstimate {
    fn from_sample_means(means: &[f64], n_sweeps: usize) -> McEstimate {
        let n = means.len();
        let mean = means.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)
        } else {
            0.0
        };
        McEstimate {
            mean,
            std_error: (var / n as f64).sqrt(),
            n_samples: n,
            n_sweeps,
        }
    }
}

/// Draw i.i.d. bond signs, negative with probability `p`; deterministic in
/// `seed`.
pub fn sample_disorder(lattice: &TorusLattice, p: f64, seed: u64) -> DisorderSample {
    let mut rng = task_rng(seed, "disorder", 0);
    let tau = (0..lattice.n_edges())
        .map(|_| if rng.gen_bool(p) { -1 } else { 1 })
        .collect();
    DisorderSample { tau, p, seed }
}

/// H = -Σ_edges τ_ij S_i S_j.
pub fn energy(lattice: &TorusLattice, sample: &DisorderSample, spins: &SpinState) -> f64 {
    let mut e = 0.0;
    for (edge, &t) in sample.tau.iter().enumerate() {
        let (u, v) = lattice.edge_endpoints(edge);
        e -= f64::from(t) * f64::from(spins.s[u]) * f64::from(spins.s[v]);
    }
    e
}

/// Local gauge change τ'_ij = ξ_i ξ_j τ_ij, S'_i = ξ_i S_i; the energy is
/// invariant by construction.
pub fn gauge_transform(
    lattice: &TorusLattice,
    sample: &DisorderSample,
    spins: &SpinState,
    xi: &[i8],
) -> (DisorderSample, SpinState) {
    assert_eq!(xi.len(), lattice.n_sites());
    let tau = sample
        .tau
        .iter()
        .enumerate()
        .map(|(edge, &t)| {
            let (u, v) = lattice.edge_endpoints(edge);
            xi[u] * xi[v] * t
        })
        .collect();
    let s = spins.s.iter().zip(xi).map(|(&s, &x)| s * x).collect();
    (
        DisorderSample {
            tau,
            p: sample.p,
            seed: sample.seed,
        },
        SpinState { s },
    )
}

fn local_field(lattice: &TorusLattice, tau: &[i8], s: &[i8], site: usize) -> i32 {
    let mut h = 0i32;
    for e in lattice.star(site) {
        let (u, v) = lattice.edge_endpoints(e);
        let other = if u == site { v } else { u };
        h += i32::from(tau[e]) * i32::from(s[other]);
    }
    h
}

pub(crate) fn metropolis_acceptance(k: f64, delta_e: f64) -> f64 {
    (-k * delta_e).exp().min(1.0)
}

pub(crate) fn heatbath_up_probability(k: f64, field: f64) -> f64 {
    // P(S = +1 | neighbors) = e^{K h} / (2 cosh K h)
    1.0 / (1.0 + (-2.0 * k * field).exp())
}

/// One full-lattice pass of Metropolis single-spin updates.
pub fn metropolis_sweep(
    lattice: &TorusLattice,
    sample: &DisorderSample,
    spins: &mut SpinState,
    k: f64,
    rng: &mut Pcg64,
) {
    for site in 0..lattice.n_sites() {
        let h = local_field(lattice, &sample.tau, &spins.s, site);
        let delta_e = 2.0 * f64::from(spins.s[site]) * f64::from(h);
        if delta_e <= 0.0 || rng.gen::<f64>() < metropolis_acceptance(k, delta_e) {
            spins.s[site] = -spins.s[site];
        }
    }
}

/// One full-lattice pass of heat-bath single-spin updates.
pub fn heatbath_sweep(
    lattice: &TorusLattice,
    sample: &DisorderSample,
    spins: &mut SpinState,
    k: f64,
    rng: &mut Pcg64,
) {
    for site in 0..lattice.n_sites() {
        let h = local_field(lattice, &sample.tau, &spins.s, site);
        let up = heatbath_up_probability(k, f64::from(h));
        spins.s[site] = if rng.gen::<f64>() < up { 1 } else { -1 };
    }
}

/// Exact log partition function by Gray-code enumeration; L <= 4.
///
/// Bond energies are integer multiples of K, so the sum collapses to a
/// histogram over Σ τ σσ ∈ {-N_B, ..., N_B}.
pub fn log_partition(lattice: &TorusLattice, tau: &[i8], k: f64) -> Result<f64> {
    if lattice.size() > 4 {
        return Err(Error::SystemTooLarge {
            what: "lattice size",
            max: 4,
            got: lattice.size(),
        });
    }
    if tau.len() != lattice.n_edges() {
        return Err(Error::ShapeMismatch {
            expected: lattice.n_edges(),
            got: tau.len(),
        });
    }
    let n = lattice.n_sites();
    let nb = lattice.n_edges();
    let mut s = vec![1i8; n];
    let mut bond_sum: i32 = tau.iter().map(|&t| i32::from(t)).sum();
    let mut histogram = vec![0u64; 2 * nb + 1];
    histogram[(bond_sum + nb as i32) as usize] += 1;
    for i in 1..1u32 << n {
        let flip = i.trailing_zeros() as usize;
        // flipping spin `flip` negates its four bond terms
        bond_sum -= 2 * i32::from(s[flip]) * local_field(lattice, tau, &s, flip);
        s[flip] = -s[flip];
        histogram[(bond_sum + nb as i32) as usize] += 1;
    }
    let max_j = histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, _)| j as f64 - nb as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| c as f64 * (k * (j as f64 - nb as f64 - max_j)).exp())
        .sum();
    Ok(k * max_j + sum.ln())
}

/// Exact thermal summary of one disorder sample: log Z, site
/// magnetizations ⟨S_i⟩ and per-edge correlations ⟨S_i S_j⟩.
#[derive(Debug, Clone)]
pub struct PartitionSummary {
    pub log_z: f64,
    pub site_mag: Vec<f64>,
    pub edge_corr: Vec<f64>,
}

impl PartitionSummary {
    /// Exact thermal energy -Σ τ ⟨S_i S_j⟩.
    pub fn thermal_energy(&self, tau: &[i8]) -> f64 {
        -tau.iter()
            .zip(&self.edge_corr)
            .map(|(&t, c)| f64::from(t) * c)
            .sum::<f64>()
    }
}

/// Exact enumeration of Z, ⟨S_i⟩ and ⟨S_i S_j⟩; L <= 4.
pub fn enumerate_partition(
    lattice: &TorusLattice,
    sample: &DisorderSample,
    k: f64,
) -> Result<PartitionSummary> {
    if lattice.size() > 4 {
        return Err(Error::SystemTooLarge {
            what: "lattice size",
            max: 4,
            got: lattice.size(),
        });
    }
    let n = lattice.n_sites();
    let nb = lattice.n_edges();
    let tau = &sample.tau;
    let log_z = log_partition(lattice, tau, k)?;
    let mut site_mag = vec![0.0; n];
    let mut edge_corr = vec![0.0; nb];
    let mut s = vec![1i8; n];
    let mut bond_sum: i32 = tau.iter().map(|&t| i32::from(t)).sum();
    let visit = |s: &[i8], bond_sum: i32, site_mag: &mut [f64], edge_corr: &mut [f64]| {
        let w = (k * f64::from(bond_sum) - log_z).exp();
        for (i, &si) in s.iter().enumerate() {
            site_mag[i] += w * f64::from(si);
        }
        for e in 0..nb {
            let (u, v) = lattice.edge_endpoints(e);
            edge_corr[e] += w * f64::from(s[u]) * f64::from(s[v]);
        }
    };
    visit(&s, bond_sum, &mut site_mag, &mut edge_corr);
    for i in 1..1u32 << n {
        let flip = i.trailing_zeros() as usize;
        bond_sum -= 2 * i32::from(s[flip]) * local_field(lattice, tau, &s, flip);
        s[flip] = -s[flip];
        visit(&s, bond_sum, &mut site_mag, &mut edge_corr);
    }
    Ok(PartitionSummary {
        log_z,
        site_mag,
        edge_corr,
    })
}

/// Disorder- and thermally-averaged total energy on the Nishimori line at
/// coupling `k` (p derived from K); compare with -2L² tanh K.
pub fn nl_internal_energy(
    l: usize,
    k: f64,
    n_disorder: usize,
    n_sweeps: usize,
    seed: u64,
) -> Result<McEstimate> {
    let lattice = TorusLattice::new(l)?;
    if n_disorder == 0 || n_sweeps < 2 {
        return Err(Error::InvalidParameter(
            "need n_disorder >= 1 and n_sweeps >= 2".into(),
        ));
    }
    let p = nishimori_density(k);
    let means: Vec<f64> = (0..n_disorder)
        .into_par_iter()
        .map(|i| {
            let sample_seed = crate::rng::derive_seed(seed, "disorder-sample", i as u64);
            let sample = sample_disorder(&lattice, p, sample_seed);
            let mut rng = task_rng(seed, "nl-energy-chain", i as u64);
            let mut spins = SpinState::random(lattice.n_sites(), &mut rng);
            let mut acc = 0.0;
            let measure_from = n_sweeps / 2;
            for sweep in 0..n_sweeps {
                metropolis_sweep(&lattice, &sample, &mut spins, k, &mut rng);
                if sweep >= measure_from {
                    acc += energy(&lattice, &sample, &spins);
                }
            }
            acc / (n_sweeps - measure_from) as f64
        })
        .collect();
    Ok(McEstimate::from_sample_means(&means, n_sweeps))
}

/// Exhaustive-disorder Nishimori-line internal energy on the 2×2 torus:
/// Σ_τ Π e^{Kτ}/(2 cosh K) · ⟨H⟩_K(τ), exactly −8 tanh K.
pub fn nl_internal_energy_exhaustive_l2(k: f64) -> Result<f64> {
    let lattice = TorusLattice::new(2)?;
    let nb = lattice.n_edges();
    let mut acc = 0.0;
    for mask in 0..1u32 << nb {
        let tau: Vec<i8> = (0..nb)
            .map(|e| if mask >> e & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut w = 1.0;
        for &t in &tau {
            w *= (k * f64::from(t)).exp() / (2.0 * k.cosh());
        }
        let sample = DisorderSample {
            tau,
            p: nishimori_density(k),
            seed: 0,
        };
        let summary = enumerate_partition(&lattice, &sample, k)?;
        acc += w * summary.thermal_energy(&sample.tau);
    }
    Ok(acc)
}

/// Plus-sector Monte Carlo estimates of m = [⟨S_i⟩] and q = [⟨S_i⟩²] on
/// the Nishimori line; q uses two independent replicas per sample.
pub fn nl_q_equals_m(
    l: usize,
    k: f64,
    n_disorder: usize,
    n_sweeps: usize,
    seed: u64,
) -> Result<(McEstimate, McEstimate)> {
    let lattice = TorusLattice::new(l)?;
    if n_disorder == 0 || n_sweeps < 2 {
        return Err(Error::InvalidParameter(
            "need n_disorder >= 1 and n_sweeps >= 2".into(),
        ));
    }
    let p = nishimori_density(k);
    let n = lattice.n_sites();
    let results: Vec<(f64, f64)> = (0..n_disorder)
        .into_par_iter()
        .map(|i| {
            let sample_seed = crate::rng::derive_seed(seed, "disorder-sample", i as u64);
            let sample = sample_disorder(&lattice, p, sample_seed);
            let mut site_avg = [vec![0.0f64; n], vec![0.0f64; n]];
            for (replica, avg) in site_avg.iter_mut().enumerate() {
                let mut rng = task_rng(seed, "qm-chain", (2 * i + replica) as u64);
                let mut spins = SpinState::all_up(n);
                let measure_from = n_sweeps / 2;
                for sweep in 0..n_sweeps {
                    metropolis_sweep(&lattice, &sample, &mut spins, k, &mut rng);
                    if sweep >= measure_from {
                        for (a, &s) in avg.iter_mut().zip(&spins.s) {
                            *a += f64::from(s);
                        }
                    }
                }
                let count = (n_sweeps - measure_from) as f64;
                for a in avg.iter_mut() {
                    *a /= count;
                }
            }
            let m = site_avg[0].iter().sum::<f64>() / n as f64;
            let q = site_avg[0]
                .iter()
                .zip(&site_avg[1])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64;
            (m, q)
        })
        .collect();
    let ms: Vec<f64> = results.iter().map(|r| r.0).collect();
    let qs: Vec<f64> = results.iter().map(|r| r.1).collect();
    Ok((
        McEstimate::from_sample_means(&ms, n_sweeps),
        McEstimate::from_sample_means(&qs, n_sweeps),
    ))
}

/// Exhaustive strict-Gibbs m and q on the 2×2 torus at the Nishimori
/// point of `k`. Both vanish identically at finite volume (global flip
/// symmetry); the value of the check is that they agree exactly.
pub fn nl_q_m_exhaustive_l2(k: f64) -> Result<(f64, f64)> {
    let lattice = TorusLattice::new(2)?;
    let nb = lattice.n_edges();
    let n = lattice.n_sites();
    let (mut m, mut q) = (0.0, 0.0);
    for mask in 0..1u32 << nb {
        let tau: Vec<i8> = (0..nb)
            .map(|e| if mask >> e & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut w = 1.0;
        for &t in &tau {
            w *= (k * f64::from(t)).exp() / (2.0 * k.cosh());
        }
        let sample = DisorderSample {
            tau,
            p: nishimori_density(k),
            seed: 0,
        };
        let summary = enumerate_partition(&lattice, &sample, k)?;
        m += w * summary.site_mag.iter().sum::<f64>() / n as f64;
        q += w * summary.site_mag.iter().map(|x| x * x).sum::<f64>() / n as f64;
    }
    Ok((m, q))
}

/// Plus-sector magnetization estimates along a thermal-coupling sweep at
/// fixed disorder law K_p; the Nishimori identities put the maximum at
/// K = K_p.
pub fn magnetization_scan(
    l: usize,
    k_p: f64,
    k_list: &[f64],
    n_disorder: usize,
    n_sweeps: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    let lattice = TorusLattice::new(l)?;
    if n_disorder == 0 || n_sweeps < 2 {
        return Err(Error::InvalidParameter(
            "need n_disorder >= 1 and n_sweeps >= 2".into(),
        ));
    }
    let p = nishimori_density(k_p);
    let n = lattice.n_sites();
    k_list
        .iter()
        .map(|&k| {
            let means: Vec<f64> = (0..n_disorder)
                .into_par_iter()
                .map(|i| {
                    let sample_seed = crate::rng::derive_seed(seed, "disorder-sample", i as u64);
                    let sample = sample_disorder(&lattice, p, sample_seed);
                    let mut rng = task_rng(seed, "scan-chain", i as u64);
                    let mut spins = SpinState::all_up(n);
                    let mut acc = 0.0;
                    let measure_from = n_sweeps / 2;
                    for sweep in 0..n_sweeps {
                        metropolis_sweep(&lattice, &sample, &mut spins, k, &mut rng);
                        if sweep >= measure_from {
                            acc += spins.magnetization();
                        }
                    }
                    acc / (n_sweeps - measure_from) as f64
                })
                .collect();
            Ok(McEstimate::from_sample_means(&means, n_sweeps))
        })
        .collect()
}

/// Exhaustive strict-Gibbs |[⟨S_i⟩]| scan on the 2×2 torus.
pub fn magnetization_scan_exhaustive_l2(k_p: f64, k_list: &[f64]) -> Result<Vec<f64>> {
    let lattice = TorusLattice::new(2)?;
    let nb = lattice.n_edges();
    let n = lattice.n_sites();
    k_list
        .iter()
        .map(|&k| {
            let mut m = 0.0;
            for mask in 0..1u32 << nb {
                let tau: Vec<i8> = (0..nb)
                    .map(|e| if mask >> e & 1 == 1 { -1 } else { 1 })
                    .collect();
                let mut w = 1.0;
                for &t in &tau {
                    w *= (k_p * f64::from(t)).exp() / (2.0 * k_p.cosh());
                }
                let sample = DisorderSample {
                    tau,
                    p: nishimori_density(k_p),
                    seed: 0,
                };
                let summary = enumerate_partition(&lattice, &sample, k)?;
                m += w * summary.site_mag.iter().sum::<f64>() / n as f64;
            }
            Ok(m.abs())
        })
        .collect()
}
