//! Stochastic relaxation as quantum dynamics: single-flip transition
//! matrices, the mapped Hamiltonian H_q whose ground state is the Gibbs
//! state, the exact classical Jarzynski telescoping, and the ancilla-based
//! quantum Jarzynski annealing protocol.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::dynamics::sorted_eigh;
use crate::{Error, Result};

/// Single-spin-flip update rule of the master equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    Metropolis,
    HeatBath,
}

/// A classical energy landscape driven by single-flip dynamics.
#[derive(Debug, Clone)]
pub struct MasterSystem {
    pub n: usize,
    pub h0_diag: Vec<f64>,
    pub rule: UpdateRule,
    pub beta_ramp: Vec<f64>,
}

impl MasterSystem {
    pub fn new(
        n: usize,
        h0_diag: Vec<f64>,
        rule: UpdateRule,
        beta_ramp: Vec<f64>,
    ) -> Result<MasterSystem> {
        if n == 0 || n > 8 {
            return Err(Error::SystemTooLarge {
                what: "master-equation spins",
                max: 8,
                got: n,
            });
        }
        if h0_diag.len() != 1 << n {
            return Err(Error::ShapeMismatch {
                expected: 1 << n,
                got: h0_diag.len(),
            });
        }
        if beta_ramp.len() < 2 {
            return Err(Error::InvalidParameter(
                "beta ramp needs at least two points".into(),
            ));
        }
        Ok(MasterSystem {
            n,
            h0_diag,
            rule,
            beta_ramp,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn gibbs(&self, beta: f64) -> DVector<f64> {
        let e_min = self.h0_diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut w = DVector::from_iterator(
            self.dim(),
            self.h0_diag.iter().map(|&e| (-beta * (e - e_min)).exp()),
        );
        let z = w.sum();
        w /= z;
        w
    }

    fn log_z(&self, beta: f64) -> f64 {
        let e_min = self.h0_diag.iter().cloned().fold(f64::INFINITY, f64::min);
        -beta * e_min
            + self
                .h0_diag
                .iter()
                .map(|&e| (-beta * (e - e_min)).exp())
                .sum::<f64>()
                .ln()
    }
}

/// Column-stochastic single-flip transition matrix M(σ'|σ) at `beta`:
/// each of the N neighbors is proposed with weight 1/N and accepted by
/// the chosen rule; leftover probability sits on the diagonal.
pub fn transition_matrix(system: &MasterSystem, beta: f64) -> DMatrix<f64> {
    let dim = system.dim();
    let n = system.n;
    let mut m = DMatrix::zeros(dim, dim);
    for from in 0..dim {
        let mut stay = 1.0;
        for i in 0..n {
            let to = from ^ (1 << i);
            let delta = system.h0_diag[to] - system.h0_diag[from];
            let accept = match system.rule {
                UpdateRule::Metropolis => (-beta * delta).exp().min(1.0),
                UpdateRule::HeatBath => 1.0 / (1.0 + (beta * delta).exp()),
            };
            let rate = accept / n as f64;
            m[(to, from)] = rate;
            stay -= rate;
        }
        m[(from, from)] = stay;
    }
    m
}

/// The mapped quantum Hamiltonian
/// H_q(σ'|σ) = δ(σ', σ) - e^{βH₀(σ')/2} M(σ'|σ) e^{-βH₀(σ)/2}.
///
/// Detailed balance makes it symmetric; its ground state is
/// e^{-βH₀(σ)/2}/√Z at eigenvalue exactly 0 and the rest of the spectrum
/// is nonnegative.
pub fn build_hq(system: &MasterSystem, beta: f64) -> Result<DMatrix<f64>> {
    let dim = system.dim();
    let m = transition_matrix(system, beta);
    let mut hq = DMatrix::identity(dim, dim);
    for to in 0..dim {
        for from in 0..dim {
            let sim = (beta * (system.h0_diag[to] - system.h0_diag[from]) / 2.0).exp();
            hq[(to, from)] -= sim * m[(to, from)];
        }
    }
    let asym = (&hq - hq.transpose()).norm();
    if asym > 1e-10 {
        return Err(Error::NumericalGuard(format!(
            "H_q asymmetry {asym:.3e}: detailed balance violated in M"
        )));
    }
    // exact symmetrization of the residual rounding
    let hq = (&hq + hq.transpose()) * 0.5;
    Ok(hq)
}

/// Exact classical Jarzynski equality via full distribution propagation:
/// returns (⟨e^{-Y}⟩, Z_n/Z_0). The relaxation kernel at each leg is
/// exp(relax_time · (M - 1)), applied exactly through the symmetrized
/// eigendecomposition; the telescoping holds for any leg durations.
pub fn classical_jarzynski(system: &MasterSystem, relax_time: f64) -> Result<(f64, f64)> {
    let ramp = &system.beta_ramp;
    let dim = system.dim();
    let mut w = self_weights(system, ramp[0]);
    for leg in 0..ramp.len() - 1 {
        let beta = ramp[leg];
        // exp(τ(M-1)) = D₋ V e^{τλ} Vᵀ D₊ with A = D₊ M D₋ - 1 symmetric
        let m = transition_matrix(system, beta);
        let mut a = DMatrix::identity(dim, dim);
        for to in 0..dim {
            for from in 0..dim {
                let sim = (beta * (system.h0_diag[to] - system.h0_diag[from]) / 2.0).exp();
                a[(to, from)] = sim * m[(to, from)] - a[(to, from)];
            }
        }
        let a = (&a + a.transpose()) * 0.5;
        let (values, vectors) = sorted_eigh(&a);
        let exp_a = {
            let phases =
                DVector::from_iterator(dim, values.iter().map(|&l| (relax_time * l).exp()));
            &vectors * DMatrix::from_diagonal(&phases) * vectors.transpose()
        };
        // conjugate back and apply to the weight vector
        let mut next = DVector::zeros(dim);
        // v = D₋ expA D₊ w
        let mut tmp = DVector::zeros(dim);
        for s in 0..dim {
            tmp[s] = (beta * system.h0_diag[s] / 2.0).exp() * w[s];
        }
        let mid = &exp_a * tmp;
        for s in 0..dim {
            next[s] = (-beta * system.h0_diag[s] / 2.0).exp() * mid[s];
        }
        // pseudo-work reweighting toward the next temperature
        let dbeta = ramp[leg + 1] - beta;
        for s in 0..dim {
            next[s] *= (-dbeta * system.h0_diag[s]).exp();
        }
        w = next;
    }
    let lhs = w.sum();
    let rhs = (system.log_z(ramp[ramp.len() - 1]) - system.log_z(ramp[0])).exp();
    Ok((lhs, rhs))
}

fn self_weights(system: &MasterSystem, beta: f64) -> DVector<f64> {
    system.gibbs(beta)
}

/// Outcome of a quantum Jarzynski annealing run.
#[derive(Debug, Clone)]
pub struct QjaReport {
    /// Probability of measuring (σ, all ancillas 0), per σ.
    pub p0: Vec<f64>,
    /// Final inverse temperature β(t_n) of the encoded Gibbs weights.
    pub beta_final: f64,
    /// Total success probability Σ_σ p0(σ).
    pub success_probability: f64,
    /// Energy shift applied so that H₀ ≥ 0.
    pub shift: f64,
    /// Smallest overlap of the ancilla-0 sector with the instantaneous
    /// Gibbs state across the protocol.
    pub min_gibbs_overlap: f64,
}

/// Quantum Jarzynski annealing: alternate the ancilla block rotation
/// R^unit(t_k) (amplitudes √y_k, √(1-y_k) with y_k = e^{-δβ·H₀}) with
/// ground-state-preserving evolution under H_q at the updated
/// temperature. After n steps the ancilla-0 sector carries Gibbs weights
/// e^{-β_n H₀(σ)}.
pub fn qja_run(
    system: &MasterSystem,
    ancilla_steps: usize,
    delta_beta: f64,
    relax_time: f64,
) -> Result<QjaReport> {
    let n_sys = system.n;
    if ancilla_steps == 0 {
        return Err(Error::InvalidParameter(
            "need at least one ancilla step".into(),
        ));
    }
    if n_sys + ancilla_steps > 13 {
        return Err(Error::SystemTooLarge {
            what: "system+ancilla qubits",
            max: 13,
            got: n_sys + ancilla_steps,
        });
    }
    if !(delta_beta > 0.0) {
        return Err(Error::InvalidParameter(
            "delta_beta must be positive".into(),
        ));
    }
    let dim_sys = system.dim();
    let dim_anc = 1usize << ancilla_steps;
    // shift the energies to be nonnegative so y = e^{-δβ H₀} ≤ 1
    let shift = -system.h0_diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = system.h0_diag.iter().map(|&e| e + shift).collect();
    // state[sys + dim_sys * anc], initialized to |Ψ_eq(β=0)⟩ ⊗ |0...0⟩
    let mut state = vec![Complex64::new(0.0, 0.0); dim_sys * dim_anc];
    let amp0 = 1.0 / (dim_sys as f64).sqrt();
    for s in 0..dim_sys {
        state[s] = Complex64::new(amp0, 0.0);
    }
    let mut min_overlap = f64::INFINITY;
    for k in 0..ancilla_steps {
        // R^unit(t_k): block rotation on ancilla k, controlled by σ
        for s in 0..dim_sys {
            let y = (-delta_beta * shifted[s]).exp();
            let (c, r) = (y.sqrt(), (1.0 - y).sqrt());
            for anc in 0..dim_anc {
                if anc >> k & 1 == 1 {
                    continue;
                }
                let i0 = s + dim_sys * anc;
                let i1 = s + dim_sys * (anc | 1 << k);
                let (a0, a1) = (state[i0], state[i1]);
                state[i0] = c * a0 + r * a1;
                state[i1] = -r * a0 + c * a1;
            }
        }
        let beta_k = delta_beta * (k + 1) as f64;
        // evolution under H_q(β_k) ⊗ 1; the ancilla-0 sector is its exact
        // zero-eigenvalue ground state and stays put
        let shifted_system = MasterSystem {
            n: system.n,
            h0_diag: shifted.clone(),
            rule: system.rule,
            beta_ramp: system.beta_ramp.clone(),
        };
        let hq = build_hq(&shifted_system, beta_k)?;
        let (values, vectors) = sorted_eigh(&hq);
        let prop = {
            let phases = DVector::from_iterator(
                dim_sys,
                values
                    .iter()
                    .map(|&e| Complex64::from_polar(1.0, -e * relax_time)),
            );
            let vc = vectors.map(|x| Complex64::new(x, 0.0));
            &vc * DMatrix::from_diagonal(&phases) * vc.transpose()
        };
        for anc in 0..dim_anc {
            let block =
                DVector::from_iterator(dim_sys, (0..dim_sys).map(|s| state[s + dim_sys * anc]));
            let evolved = &prop * block;
            for s in 0..dim_sys {
                state[s + dim_sys * anc] = evolved[s];
            }
        }
        // verify the ancilla-0 sector still carries the Gibbs state
        let gibbs_amp: Vec<f64> = {
            let z: f64 = shifted.iter().map(|&e| (-beta_k * e).exp()).sum();
            shifted
                .iter()
                .map(|&e| ((-beta_k * e).exp() / z).sqrt())
                .collect()
        };
        let mut dot = Complex64::new(0.0, 0.0);
        let mut norm0 = 0.0;
        for s in 0..dim_sys {
            dot += gibbs_amp[s] * state[s].conj();
            norm0 += state[s].norm_sqr();
        }
        min_overlap = min_overlap.min(dot.norm() / norm0.sqrt());
    }
    let p0: Vec<f64> = (0..dim_sys).map(|s| state[s].norm_sqr()).collect();
    Ok(QjaReport {
        p0: p0.clone(),
        beta_final: delta_beta * ancilla_steps as f64,
        success_probability: p0.iter().sum(),
        shift,
        min_gibbs_overlap: min_overlap,
    })
}
