//! Hamiltonian assembly, exact unitary evolution and gap tracking.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::AnnealSpec;
use crate::{Error, Result};

/// Diagonal of the classical cost Hamiltonian and the dense transverse-
/// field driver: H₀ = -Σ J_ij σ^z σ^z (fields for i == j), H₁ = -Γ₀ Σ σ^x.
///
/// Both carry the minus signs that make H₀ the cost function and give H₁
/// the uniform superposition as its ground state.
pub fn build_hamiltonians(spec: &AnnealSpec) -> (DVector<f64>, DMatrix<f64>) {
    let dim = spec.dim();
    let mut h0 = DVector::zeros(dim);
    for b in 0..dim {
        let z = |i: usize| if b >> i & 1 == 0 { 1.0 } else { -1.0 };
        let mut e = 0.0;
        for &(i, j, jij) in &spec.couplings {
            e -= if i == j {
                jij * z(i)
            } else {
                jij * z(i) * z(j)
            };
        }
        h0[b] = e;
    }
    let mut h1 = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        for i in 0..spec.n {
            h1[(b ^ (1 << i), b)] -= spec.gamma0;
        }
    }
    (h0, h1)
}

/// H(t) = f(t)·H₀ + (1 - f(t))·H₁ as a dense real symmetric matrix.
pub fn hamiltonian_at(spec: &AnnealSpec, f: f64) -> DMatrix<f64> {
    let (h0, h1) = build_hamiltonians(spec);
    let mut h = h1 * (1.0 - f);
    for b in 0..spec.dim() {
        h[(b, b)] += f * h0[b];
    }
    h
}

/// Eigenpairs of a real symmetric matrix, ascending.
pub(crate) fn sorted_eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Exact propagator e^{-i H t} of a time-independent real symmetric H.
pub fn propagator(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let (values, vectors) = sorted_eigh(h);
    let dim = h.nrows();
    let vc = vectors.map(|x| Complex64::new(x, 0.0));
    let phases = DVector::from_iterator(
        dim,
        values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
    );
    &vc * DMatrix::from_diagonal(&phases) * vc.transpose()
}

/// Time-ordered evolution over the full schedule: the product of exact
/// midpoint-step propagators. Each factor is unitary by construction; the
/// final drift check guards against eigensolver trouble.
pub fn evolve(spec: &AnnealSpec) -> Result<DMatrix<Complex64>> {
    let dim = spec.dim();
    let t_total = spec.schedule.total_time;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    if t_total == 0.0 {
        return Ok(u);
    }
    let steps = spec.schedule.steps;
    let dt = t_total / steps as f64;
    for k in 0..steps {
        let f = spec.schedule.interpolation((k as f64 + 0.5) * dt);
        let h = hamiltonian_at(spec, f);
        u = propagator(&h, dt) * u;
    }
    let drift = (u.adjoint() * &u - DMatrix::<Complex64>::identity(dim, dim)).norm();
    if drift > 1e-8 {
        return Err(Error::NumericalGuard(format!(
            "unitarity drift {drift:.3e}; increase the step count"
        )));
    }
    Ok(u)
}

/// Evolve with step doubling (starting from the schedule's count, at
/// least 256) until the propagator stabilizes to 1e-10 in norm; returns
/// the converged unitary and the step count that achieved it.
pub fn evolve_auto(spec: &AnnealSpec) -> Result<(DMatrix<Complex64>, usize)> {
    let mut steps = spec.schedule.steps.max(256);
    let mut refined = spec.clone();
    refined.schedule.steps = steps;
    let mut u = evolve(&refined)?;
    for _ in 0..16 {
        steps *= 2;
        refined.schedule.steps = steps;
        let next = evolve(&refined)?;
        let change = (&next - &u).norm();
        u = next;
        if change < 1e-10 {
            return Ok((u, steps));
        }
    }
    Err(Error::NumericalGuard(
        "evolution did not stabilize at 1e-10".into(),
    ))
}

/// Minimum-gap report over a schedule grid.
#[derive(Debug, Clone, Copy)]
pub struct GapReport {
    pub delta_min: f64,
    pub t_at_min: f64,
    /// Adiabatic-time estimate max|⟨1|H₀-H₁|0⟩| / (ε Δ²_min).
    pub t_adiabatic: f64,
    /// Ground-state degeneracy (gap ≈ 0) was met somewhere on the grid.
    pub degenerate: bool,
}

/// Track the spectral gap E₁(t) - E₀(t) on `grid_points` times and
/// estimate the adiabatic horizon for target accuracy `epsilon`.
pub fn min_gap(spec: &AnnealSpec, grid_points: usize, epsilon: f64) -> Result<GapReport> {
    if grid_points < 16 {
        return Err(Error::InvalidParameter(
            "gap grid needs at least 16 points".into(),
        ));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let (h0, h1) = build_hamiltonians(spec);
    let dh = {
        // schedule-shape derivative H₀ - H₁ (the 1/T factor is the horizon
        // being estimated)
        let mut m = -h1.clone();
        for b in 0..spec.dim() {
            m[(b, b)] += h0[b];
        }
        m
    };
    let mut delta_min = f64::INFINITY;
    let mut t_at_min = 0.0;
    let mut max_element = 0.0f64;
    let mut degenerate = false;
    let t_total = spec.schedule.total_time.max(1.0);
    for g in 0..grid_points {
        let f = g as f64 / (grid_points - 1) as f64;
        let h = hamiltonian_at(spec, f);
        let (values, vectors) = sorted_eigh(&h);
        let gap = values[1] - values[0];
        if gap < 1e-10 {
            degenerate = true;
        }
        if gap < delta_min {
            delta_min = gap;
            t_at_min = f * t_total;
        }
        let elem = (vectors.column(1).transpose() * &dh * vectors.column(0))[(0, 0)].abs();
        max_element = max_element.max(elem);
    }
    let t_adiabatic = if delta_min > 0.0 {
        max_element / (epsilon * delta_min * delta_min)
    } else {
        f64::INFINITY
    };
    Ok(GapReport {
        delta_min,
        t_at_min,
        t_adiabatic,
        degenerate,
    })
}

/// Gauge image of an anneal instance: J'_ij = ξ_i ξ_j J_ij (fields pick up
/// ξ_i); the spectrum of H(t) is unchanged for every t.
pub fn quantum_gauge_transform(spec: &AnnealSpec, xi: &[i8]) -> Result<AnnealSpec> {
    if xi.len() != spec.n {
        return Err(Error::ShapeMismatch {
            expected: spec.n,
            got: xi.len(),
        });
    }
    let couplings = spec
        .couplings
        .iter()
        .map(|&(i, j, jij)| {
            let factor = if i == j {
                f64::from(xi[i])
            } else {
                f64::from(xi[i] * xi[j])
            };
            (i, j, factor * jij)
        })
        .collect();
    AnnealSpec::new(spec.n, couplings, spec.gamma0, spec.schedule.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Schedule;
    use crate::rng::task_rng;
    use rand::Rng;

    fn two_spin(j: f64, gamma0: f64, t: f64, steps: usize) -> AnnealSpec {
        AnnealSpec::new(2, vec![(0, 1, j)], gamma0, Schedule::new(t, steps).unwrap()).unwrap()
    }

    #[test]
    fn hamiltonian_signs_and_ground_states() {
        // N=1, Γ₀=1: H₁ eigenvalues ±1
        let spec = AnnealSpec::new(1, vec![], 1.0, Schedule::new(1.0, 1).unwrap()).unwrap();
        let (_, h1) = build_hamiltonians(&spec);
        let (vals, vecs) = sorted_eigh(&h1);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        // uniform ground state amplitudes 2^{-N/2}
        for a in vecs.column(0).iter() {
            assert!((a.abs() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        }
        // N=2 single bond: diagonal {-1, +1, +1, -1}
        let spec = two_spin(1.0, 1.0, 1.0, 1);
        let (h0, _) = build_hamiltonians(&spec);
        assert_eq!(h0.as_slice(), &[-1.0, 1.0, 1.0, -1.0]);
        // longitudinal field entry
        let spec =
            AnnealSpec::new(1, vec![(0, 0, 0.7)], 1.0, Schedule::new(1.0, 1).unwrap()).unwrap();
        let (h0, _) = build_hamiltonians(&spec);
        assert_eq!(h0.as_slice(), &[-0.7, 0.7]);
    }

    #[test]
    fn uniform_superposition_grounds_larger_driver() {
        let spec = AnnealSpec::new(3, vec![], 0.8, Schedule::new(1.0, 1).unwrap()).unwrap();
        let (_, h1) = build_hamiltonians(&spec);
        let (vals, vecs) = sorted_eigh(&h1);
        assert!((vals[0] + 3.0 * 0.8).abs() < 1e-12);
        for a in vecs.column(0).iter() {
            assert!((a.abs() - 1.0 / 8f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_rabi_closed_form() {
        // constant H = -Γ σ^x: survival probability cos²(ΓT)
        let gamma = 0.9;
        let h = DMatrix::from_row_slice(2, 2, &[0.0, -gamma, -gamma, 0.0]);
        for t in [0.3, 1.0, 2.7] {
            let u = propagator(&h, t);
            let survival = u[(0, 0)].norm_sqr();
            assert!((survival - (gamma * t).cos().powi(2)).abs() < 1e-12);
        }
    }

    /// Taylor-series oracle for the matrix exponential, scaled and squared.
    fn expm_taylor(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
        let dim = h.nrows();
        let a = h.map(|x| Complex64::new(0.0, -x * t));
        let k = 10u32;
        let small = a.map(|z| z / 2f64.powi(k as i32));
        let mut term = DMatrix::<Complex64>::identity(dim, dim);
        let mut sum = term.clone();
        for order in 1..20 {
            term = (&term * &small).map(|z| z / order as f64);
            sum += &term;
        }
        let mut u = sum;
        for _ in 0..k {
            u = &u * &u;
        }
        u
    }

    #[test]
    fn propagator_matches_taylor_oracle() {
        let mut rng = task_rng(5, "expm", 0);
        for _ in 0..5 {
            let dim = 8;
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..=i {
                    let x = rng.gen_range(-1.0..1.0);
                    h[(i, j)] = x;
                    h[(j, i)] = x;
                }
            }
            let u = propagator(&h, 0.8);
            let v = expm_taylor(&h, 0.8);
            assert!((u - v).norm() < 1e-10);
        }
    }

    #[test]
    fn evolve_identity_at_zero_horizon() {
        let spec = two_spin(1.0, 1.0, 0.0, 1);
        let u = evolve(&spec).unwrap();
        assert!((u - DMatrix::<Complex64>::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn evolve_unitary_and_second_order() {
        let reference = {
            let spec = two_spin(1.0, 1.3, 2.0, 4096);
            evolve(&spec).unwrap()
        };
        let mut errors = Vec::new();
        for steps in [32usize, 64, 128] {
            let spec = two_spin(1.0, 1.3, 2.0, steps);
            let u = evolve(&spec).unwrap();
            let drift = (u.adjoint() * &u - DMatrix::<Complex64>::identity(4, 4)).norm();
            assert!(drift < 1e-10);
            errors.push((&u - &reference).norm());
        }
        // halving dt cuts the error by about 4
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 2.5 && ratio < 6.0, "convergence ratio {ratio}");
        }
    }

    #[test]
    fn evolve_auto_stabilizes() {
        // T = 0 stabilizes immediately; a finite horizon needs refinement
        let spec = two_spin(1.0, 1.3, 0.0, 1);
        let (u, _) = evolve_auto(&spec).unwrap();
        assert!((u - DMatrix::<Complex64>::identity(4, 4)).norm() < 1e-15);
        let spec = two_spin(1.0, 1.3, 0.5, 1);
        let (u, steps) = evolve_auto(&spec).unwrap();
        assert!(steps >= 512);
        // the returned step count satisfies the stabilization property
        let mut coarser = spec.clone();
        coarser.schedule.steps = steps / 2;
        assert!((&u - &evolve(&coarser).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn gap_report_perturbative_and_degenerate() {
        // strong driver with a field-split cost: gapped everywhere
        let spec = AnnealSpec::new(
            2,
            vec![(0, 1, 1.0), (0, 0, 0.4)],
            2.5,
            Schedule::new(1.0, 8).unwrap(),
        )
        .unwrap();
        let report = min_gap(&spec, 33, 0.1).unwrap();
        assert!(!report.degenerate);
        assert!(report.delta_min > 0.0 && report.t_adiabatic.is_finite());
        // symmetric two-spin ferromagnet: doubly degenerate final ground pair
        let spec = two_spin(1.0, 1.0, 1.0, 8);
        let report = min_gap(&spec, 33, 0.1).unwrap();
        assert!(report.degenerate);
        // grid too coarse is rejected
        assert!(min_gap(&spec, 8, 0.1).is_err());
    }

    #[test]
    fn adiabatic_fidelity_improves_with_horizon() {
        let make = |t: f64| {
            AnnealSpec::new(
                2,
                vec![(0, 1, 1.0), (0, 0, 0.3)],
                1.0,
                Schedule::new(t, 512).unwrap(),
            )
            .unwrap()
        };
        let mut fidelities = Vec::new();
        for t in [4.0, 16.0, 64.0] {
            let spec = make(t);
            let u = evolve(&spec).unwrap();
            let (_, h1) = build_hamiltonians(&spec);
            let (_, v0) = sorted_eigh(&h1);
            let psi0 = v0.column(0).map(|x| Complex64::new(x, 0.0));
            let psi = &u * psi0;
            let hf = hamiltonian_at(&spec, 1.0);
            let (_, vf) = sorted_eigh(&hf);
            let gs = vf.column(0).map(|x| Complex64::new(x, 0.0));
            let overlap: Complex64 = gs.dotc(&psi);
            fidelities.push(overlap.norm_sqr());
        }
        assert!(
            fidelities[0] < fidelities[1] && fidelities[1] < fidelities[2],
            "{fidelities:?}"
        );
        assert!(fidelities[2] > 0.995);
    }

    #[test]
    fn gauge_transform_preserves_spectrum_and_identity_case() {
        let spec = AnnealSpec::new(
            4,
            vec![
                (0, 1, 1.0),
                (1, 2, -1.0),
                (2, 3, 1.0),
                (3, 0, 1.0),
                (0, 2, 0.5),
            ],
            0.7,
            Schedule::new(1.0, 8).unwrap(),
        )
        .unwrap();
        let same = quantum_gauge_transform(&spec, &[1, 1, 1, 1]).unwrap();
        assert_eq!(same, spec);
        let mut rng = task_rng(17, "qgauge", 0);
        for _ in 0..5 {
            let xi: Vec<i8> = (0..4)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect();
            let gauged = quantum_gauge_transform(&spec, &xi).unwrap();
            for f in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let (a, _) = sorted_eigh(&hamiltonian_at(&spec, f));
                let (b, _) = sorted_eigh(&hamiltonian_at(&gauged, f));
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-10);
                }
            }
        }
    }
}
