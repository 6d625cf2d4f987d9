//! Duality analysis for the square-lattice Ising model and its ±J
//! extension: binary Fourier transforms of edge and cluster Boltzmann
//! factors, the pure critical point, the replica-limit multicritical point
//! (= the surface-code accuracy threshold) and the off-Nishimori phase
//! boundary.
//!
//! Conventions: couplings K = βJ; the disorder density `p` counts negative
//! (antiferromagnetic) bonds, so the Nishimori line is K = K_p with
//! exp(-2 K_p) = p/(1-p). The replica n → 0 limit of the multicritical
//! criterion x₀ = x₀* is realized as equality of quenched-averaged
//! logarithms of the direct and dual cluster factors.
//!
//! The dual cluster factor is assembled bond by bond: each bond's
//! Boltzmann pair (e^{Kτ}, e^{-Kτ}) is Fourier-transformed to
//! (√2·cosh Kτ, √2·sinh Kτ) and the cluster graph is re-traced over its
//! internal spins with boundary spins up. Equivalently it is the k = 0
//! transform component summed over bond-flip patterns with even degree at
//! every internal site. This construction keeps the pure-system fixed
//! point exact for every cluster size (for the 4-bond star the criterion
//! reduces to cosh 4K = 3, whose root is ln(1+√2)/2).

use crate::{nishimori_coupling, Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Exact pure-Ising critical coupling ln(1+√2)/2.
pub fn ising_critical_point_exact() -> f64 {
    0.5 * (1.0 + SQRT_2).ln()
}

/// k-fold binary Fourier (Walsh–Hadamard) transform with a 1/√2
/// normalization per variable; applying it twice returns the input.
pub fn binary_fourier(factors: &[f64]) -> Result<Vec<f64>> {
    let n = factors.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "binary_fourier wants 2^k inputs, got {n}"
        )));
    }
    let k = n.trailing_zeros();
    if k > 12 {
        return Err(Error::SystemTooLarge {
            what: "fourier variables",
            max: 12,
            got: k as usize,
        });
    }
    let mut out = factors.to_vec();
    let mut bit = 1;
    while bit < n {
        for base in (0..n).step_by(bit * 2) {
            for i in base..base + bit {
                let (a, b) = (out[i], out[i + bit]);
                out[i] = (a + b) / SQRT_2;
                out[i + bit] = (a - b) / SQRT_2;
            }
        }
        bit *= 2;
    }
    Ok(out)
}

/// Principal and excited edge Boltzmann factors with their duals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFactorPair {
    pub x0: f64,
    pub x1: f64,
    pub dual_x0: f64,
    pub dual_x1: f64,
}

impl EdgeFactorPair {
    pub fn new(x0: f64, x1: f64) -> Result<EdgeFactorPair> {
        if !(x0 >= 0.0 && x1 >= 0.0) {
            return Err(Error::InvalidParameter(
                "edge factors must be nonnegative".into(),
            ));
        }
        Ok(EdgeFactorPair {
            x0,
            x1,
            dual_x0: (x0 + x1) / SQRT_2,
            dual_x1: (x0 - x1) / SQRT_2,
        })
    }

    /// Factors of the pure Ising bond at coupling `k`: (e^K, e^{-K}).
    pub fn ising(k: f64) -> Result<EdgeFactorPair> {
        EdgeFactorPair::new(k.exp(), (-k).exp())
    }
}

/// Kramers–Wannier dual coupling, exp(-2K*) = tanh K; an involution.
pub fn ising_dual_coupling(k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "coupling K = {k} must be > 0"
        )));
    }
    Ok(-0.5 * k.tanh().ln())
}

/// Root of K = K* by bracketed bisection; equals ln(1+√2)/2.
pub fn ising_critical_point() -> f64 {
    let f = |k: f64| k - ising_dual_coupling(k).expect("positive bracket");
    bisect(f, 0.1, 1.0, 1e-14)
}

/// Disorder law of the ±J channel in the code convention:
/// `p` is the negative-bond density and exp(-2 K_p) = p/(1-p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderLaw {
    pub p: f64,
    pub k_p: f64,
}

impl DisorderLaw {
    pub fn new(p: f64) -> Result<DisorderLaw> {
        Ok(DisorderLaw {
            p,
            k_p: nishimori_coupling(p)?,
        })
    }
}

/// One spin slot of a cluster: summed internal spin or fixed edge spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSlot {
    Internal(usize),
    Boundary(usize),
}

/// A renormalization cluster: its bond list and spin-slot counts.
#[derive(Debug, Clone)]
pub struct ClusterSpec {
    s: u8,
    n_internal: usize,
    n_boundary: usize,
    bonds: Vec<(SpinSlot, SpinSlot)>,
}

impl ClusterSpec {
    /// The cluster at renormalization level `s`:
    ///
    /// - s = 0: a single bond between two edge spins,
    /// - s = 1: four bonds from one summed spin to four edge spins,
    /// - s = 2: a 2×2 block of four summed spins (ring of four bonds),
    ///   each coupled to two of eight edge spins (twelve bonds).
    pub fn level(s: u8) -> Result<ClusterSpec> {
        use SpinSlot::{Boundary as B, Internal as I};
        let (n_internal, n_boundary, bonds) = match s {
            0 => (0, 2, vec![(B(0), B(1))]),
            1 => (
                1,
                4,
                vec![(I(0), B(0)), (I(0), B(1)), (I(0), B(2)), (I(0), B(3))],
            ),
            2 => (
                4,
                8,
                vec![
                    (I(0), I(1)),
                    (I(0), I(2)),
                    (I(1), I(3)),
                    (I(2), I(3)),
                    (I(0), B(0)),
                    (I(0), B(1)),
                    (I(1), B(2)),
                    (I(1), B(3)),
                    (I(2), B(4)),
                    (I(2), B(5)),
                    (I(3), B(6)),
                    (I(3), B(7)),
                ],
            ),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "cluster level s = {s} not in {{0, 1, 2}}"
                )))
            }
        };
        Ok(ClusterSpec {
            s,
            n_internal,
            n_boundary,
            bonds,
        })
    }

    pub fn s(&self) -> u8 {
        self.s
    }

    pub fn n_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn n_internal(&self) -> usize {
        self.n_internal
    }

    pub fn n_boundary(&self) -> usize {
        self.n_boundary
    }

    pub fn bonds(&self) -> &[(SpinSlot, SpinSlot)] {
        &self.bonds
    }

    fn check_signs(&self, bond_signs: &[i8]) -> Result<()> {
        if bond_signs.len() != self.bonds.len() {
            return Err(Error::ShapeMismatch {
                expected: self.bonds.len(),
                got: bond_signs.len(),
            });
        }
        Ok(())
    }
}

fn slot_value(slot: SpinSlot, internal: usize) -> f64 {
    match slot {
        SpinSlot::Internal(i) => {
            if internal >> i & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        }
        SpinSlot::Boundary(_) => 1.0,
    }
}

/// Log of the cluster Boltzmann factor with all edge spins up:
/// ln Σ_internal exp(K Σ_b τ_b S S').
pub fn cluster_log_factor(spec: &ClusterSpec, k: f64, bond_signs: &[i8]) -> Result<f64> {
    spec.check_signs(bond_signs)?;
    if spec.n_internal == 0 {
        // single-bond cluster: exactly K·τ
        return Ok(bond_signs.iter().map(|&t| k * f64::from(t)).sum());
    }
    let mut max = f64::NEG_INFINITY;
    let mut energies = Vec::with_capacity(1 << spec.n_internal);
    for m in 0..1usize << spec.n_internal {
        let mut e = 0.0;
        for (&(a, b), &t) in spec.bonds.iter().zip(bond_signs) {
            e += k * f64::from(t) * slot_value(a, m) * slot_value(b, m);
        }
        max = max.max(e);
        energies.push(e);
    }
    Ok(max + energies.iter().map(|e| (e - max).exp()).sum::<f64>().ln())
}

/// Log of the dual cluster factor: the cluster graph re-traced over its
/// internal spins with every bond factor replaced by its binary Fourier
/// pair, x*₊ = √2·cosh(Kτ) on aligned bonds and x*₋ = √2·sinh(Kτ) on
/// anti-aligned ones, edge spins up.
pub fn cluster_dual_log_factor(spec: &ClusterSpec, k: f64, bond_signs: &[i8]) -> Result<f64> {
    spec.check_signs(bond_signs)?;
    let mut total = 0.0;
    for m in 0..1usize << spec.n_internal {
        let mut prod = 1.0;
        for (&(a, b), &t) in spec.bonds.iter().zip(bond_signs) {
            let kt = k * f64::from(t);
            let rel = slot_value(a, m) * slot_value(b, m);
            prod *= SQRT_2 * if rel > 0.0 { kt.cosh() } else { kt.sinh() };
        }
        total += prod;
    }
    if !(total > 0.0) {
        return Err(Error::NumericalGuard(format!(
            "nonpositive dual cluster factor {total} at K = {k}"
        )));
    }
    Ok(total.ln())
}

/// Quenched-average residual E_τ[ln x₀] - E_τ[ln x₀*] over all 2^{bonds}
/// sign configurations, weight p per negative bond, thermal coupling `k`.
pub fn quenched_residual(spec: &ClusterSpec, p: f64, k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "density p = {p} outside [0, 1]"
        )));
    }
    let nb = spec.n_bonds();
    let mut signs = vec![1i8; nb];
    let mut acc = 0.0;
    for mask in 0..1u32 << nb {
        let mut w = 1.0;
        for (b, s) in signs.iter_mut().enumerate() {
            let neg = mask >> b & 1 == 1;
            *s = if neg { -1 } else { 1 };
            w *= if neg { p } else { 1.0 - p };
        }
        if w == 0.0 {
            continue;
        }
        acc +=
            w * (cluster_log_factor(spec, k, &signs)? - cluster_dual_log_factor(spec, k, &signs)?);
    }
    Ok(acc)
}

/// Residual of the multicritical criterion on the Nishimori line K = K_p.
///
/// Continuous on (0, 1/2), positive on the ordered (small p) side, with a
/// single sign change on (0.05, 0.2) for s ∈ {0, 1, 2}.
pub fn multicritical_residual(s: u8, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "density p = {p} outside (0, 1/2)"
        )));
    }
    let spec = ClusterSpec::level(s)?;
    quenched_residual(&spec, p, nishimori_coupling(p)?)
}

/// Multicritical point p_c(s) by bisection of [`multicritical_residual`]
/// on [0.05, 0.2], to 1e-8 in p.
pub fn multicritical_point(s: u8) -> Result<f64> {
    multicritical_point_with_stats(s).map(|(p, _)| p)
}

/// Same as [`multicritical_point`], also reporting residual evaluations.
pub fn multicritical_point_with_stats(s: u8) -> Result<(f64, usize)> {
    let spec = ClusterSpec::level(s)?;
    let mut calls = 0usize;
    let mut f = |p: f64| -> Result<f64> {
        calls += 1;
        quenched_residual(&spec, p, nishimori_coupling(p)?)
    };
    let (mut lo, mut hi) = (0.05, 0.2);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo * fhi > 0.0 {
        return Err(Error::NumericalGuard(
            "no sign change on [0.05, 0.2]".into(),
        ));
    }
    let rising = flo < 0.0;
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), calls))
}

/// Ferromagnetic phase boundary K_c(p) off the Nishimori line: the root in
/// K of the quenched residual with disorder density `p` held fixed.
///
/// Converges to the pure critical point as p → 0 and crosses the Nishimori
/// line at the multicritical point; p ≥ p_c(s) is rejected.
pub fn phase_boundary(s: u8, p: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "density p = {p} outside [0, 1/2)"
        )));
    }
    let spec = ClusterSpec::level(s)?;
    if p > 0.0 && p >= multicritical_point(s)? {
        return Err(Error::InvalidParameter(format!(
            "p = {p} is at or beyond the multicritical point: no ferromagnetic boundary"
        )));
    }
    let f = |k: f64| quenched_residual(&spec, p, k).expect("residual in bracket");
    // for p > 0 the residual is negative at small and at large K (the
    // boundary is reentrant); the physical high-temperature boundary is
    // the first sign change scanning upward from the disordered side.
    // Near the multicritical point the positive window narrows, so retry
    // with a finer scan before giving up.
    let mut bracket = None;
    'scan: for step in [0.05, 2e-3] {
        let mut lo = 0.2;
        let mut flo = f(lo);
        let mut hi = lo;
        while hi < 8.0 {
            hi += step;
            let fhi = f(hi);
            if flo * fhi <= 0.0 {
                bracket = Some((lo, hi, flo));
                break 'scan;
            }
            lo = hi;
            flo = fhi;
        }
    }
    let Some((mut lo, mut hi, flo)) = bracket else {
        return Err(Error::NumericalGuard(
            "no phase-boundary bracket in K".into(),
        ));
    };
    let rising = flo < 0.0;
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let rising = f(lo) < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn fourier_single_edge_matches_closed_form() {
        let k = 0.7f64;
        let out = binary_fourier(&[k.exp(), (-k).exp()]).unwrap();
        assert!((out[0] - SQRT_2 * k.cosh()).abs() < 1e-14);
        assert!((out[1] - SQRT_2 * k.sinh()).abs() < 1e-14);
    }

    #[test]
    fn fourier_of_constant_kills_excited_component() {
        let out = binary_fourier(&[3.25, 3.25]).unwrap();
        assert!((out[0] - SQRT_2 * 3.25).abs() < 1e-14);
        assert_eq!(out[1], 0.0);
    }

    #[test]
    fn fourier_is_an_involution() {
        let mut rng = crate::rng::task_rng(3, "fourier", 0);
        for k in 1..=8 {
            let input: Vec<f64> = (0..1usize << k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let twice = binary_fourier(&binary_fourier(&input).unwrap()).unwrap();
            for (a, b) in input.iter().zip(&twice) {
                assert!((a - b).abs() < 1e-12 * (1 << k) as f64);
            }
        }
    }

    #[test]
    fn fourier_rejects_bad_lengths() {
        assert!(binary_fourier(&[1.0, 2.0, 3.0]).is_err());
        assert!(binary_fourier(&[]).is_err());
        assert!(binary_fourier(&vec![0.0; 1 << 13]).is_err());
    }

    #[test]
    fn edge_factor_pair_duals() {
        let pair = EdgeFactorPair::ising(0.9).unwrap();
        assert!(pair.dual_x0 > 0.0);
        assert!((pair.dual_x0 - SQRT_2 * 0.9f64.cosh()).abs() < 1e-14);
        assert!((pair.dual_x1 - SQRT_2 * 0.9f64.sinh()).abs() < 1e-14);
        // double transform returns the original pair
        let again = EdgeFactorPair::new(pair.dual_x0, pair.dual_x1).unwrap();
        assert!((again.dual_x0 - pair.x0).abs() < 1e-14);
        assert!((again.dual_x1 - pair.x1).abs() < 1e-14);
        assert!(EdgeFactorPair::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn dual_coupling_fixed_point_and_involution() {
        let kc = 0.440686794;
        assert!((ising_dual_coupling(kc).unwrap() - kc).abs() < 1e-9);
        for i in -8..=8 {
            let k = 0.44 * (10f64).powf(f64::from(i) * 0.1);
            let kk = ising_dual_coupling(ising_dual_coupling(k).unwrap()).unwrap();
            assert!((kk - k).abs() < 1e-13, "K = {k}");
        }
        // closed-form evaluation at K = 1: -ln(tanh 1)/2
        assert!((ising_dual_coupling(1.0).unwrap() - 0.136_170_734_455_915_8).abs() < 1e-13);
        assert!(ising_dual_coupling(0.0).is_err());
        assert!(ising_dual_coupling(-1.0).is_err());
    }

    #[test]
    fn critical_point_value_and_identities() {
        let kc = ising_critical_point();
        assert!((kc - 0.4406867935).abs() < 1e-9);
        assert!((kc - ising_critical_point_exact()).abs() < 1e-12);
        // the duality coefficient Λ per bond, (1 + e^{-2K})/√2, is 1 at K_c
        let lambda = (1.0 + (-2.0 * kc).exp()) / SQRT_2;
        assert!((lambda - 1.0).abs() < 1e-12);
        // defining relation of the fixed point
        assert!((kc.tanh() - (-2.0 * kc).exp()).abs() < 1e-12);
    }

    #[test]
    fn cluster_log_factor_cases() {
        let s0 = ClusterSpec::level(0).unwrap();
        assert_eq!(cluster_log_factor(&s0, 0.8, &[1]).unwrap(), 0.8);
        assert_eq!(cluster_log_factor(&s0, 0.8, &[-1]).unwrap(), -0.8);
        let s1 = ClusterSpec::level(1).unwrap();
        let k = 0.6;
        // two-term oracle: sum over the internal spin only
        let oracle = |signs: &[i8]| {
            let sum: f64 = signs.iter().map(|&t| f64::from(t)).sum();
            ((k * sum).exp() + (-k * sum).exp()).ln()
        };
        assert!(
            (cluster_log_factor(&s1, k, &[1, 1, 1, 1]).unwrap() - (2.0 * (4.0 * k).cosh()).ln())
                .abs()
                < 1e-13
        );
        assert!(
            (cluster_log_factor(&s1, k, &[1, 1, 1, 1]).unwrap() - oracle(&[1, 1, 1, 1])).abs()
                < 1e-13
        );
        assert!(
            (cluster_log_factor(&s1, k, &[1, 1, 1, -1]).unwrap() - (2.0 * (2.0 * k).cosh()).ln())
                .abs()
                < 1e-13
        );
        assert!(cluster_log_factor(&s1, k, &[1, 1]).is_err());
    }

    /// Brute-force Fourier oracle for the dual factor: the k = 0 component
    /// as a sum over all bond-flip patterns with even degree at every
    /// internal slot, 2^{n_int - n_B/2} Σ_φ exp(K Σ τ(-1)^φ).
    fn dual_oracle(spec: &ClusterSpec, k: f64, signs: &[i8]) -> f64 {
        let nb = spec.n_bonds();
        let mut total = 0.0;
        'pat: for phi in 0..1u32 << nb {
            for i in 0..spec.n_internal() {
                let mut parity = 0u32;
                for (b, &(a, c)) in spec.bonds().iter().enumerate() {
                    let touches = matches!(a, SpinSlot::Internal(j) if j == i)
                        || matches!(c, SpinSlot::Internal(j) if j == i);
                    if touches {
                        parity ^= phi >> b & 1;
                    }
                }
                if parity == 1 {
                    continue 'pat;
                }
            }
            let mut e = 0.0;
            for (b, &t) in signs.iter().enumerate() {
                let flip = if phi >> b & 1 == 1 { -1.0 } else { 1.0 };
                e += k * f64::from(t) * flip;
            }
            total += e.exp();
        }
        total.ln() + (spec.n_internal() as f64 - nb as f64 / 2.0) * 2f64.ln()
    }

    #[test]
    fn dual_factor_cases_and_oracle() {
        let s0 = ClusterSpec::level(0).unwrap();
        let k = 0.75;
        for signs in [[1i8], [-1i8]] {
            // principal dual factor is sign-insensitive: ln(√2 cosh K)
            let v = cluster_dual_log_factor(&s0, k, &signs).unwrap();
            assert!((v - (SQRT_2 * k.cosh()).ln()).abs() < 1e-14);
        }
        let mut rng = crate::rng::task_rng(17, "dual-oracle", 0);
        for s in [0u8, 1, 2] {
            let spec = ClusterSpec::level(s).unwrap();
            for _ in 0..8 {
                let signs: Vec<i8> = (0..spec.n_bonds())
                    .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect();
                let direct = cluster_dual_log_factor(&spec, 0.9, &signs).unwrap();
                let oracle = dual_oracle(&spec, 0.9, &signs);
                assert!(
                    (direct - oracle).abs() < 1e-11,
                    "s={s} {direct} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn pure_fixed_point_is_preserved_by_every_cluster() {
        let kc = ising_critical_point_exact();
        for s in [0u8, 1, 2] {
            let spec = ClusterSpec::level(s).unwrap();
            let signs = vec![1i8; spec.n_bonds()];
            let r = cluster_log_factor(&spec, kc, &signs).unwrap()
                - cluster_dual_log_factor(&spec, kc, &signs).unwrap();
            assert!(r.abs() < 1e-12, "s = {s}: residual {r} at K_c");
        }
    }

    #[test]
    fn s0_residual_is_the_entropy_criterion() {
        for i in 1..10 {
            let p = f64::from(i) * 0.045;
            let r = multicritical_residual(0, p).unwrap();
            let h2 = -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
            assert!((r - (0.5 * 2f64.ln() - h2)).abs() < 1e-12, "p = {p}");
        }
        // ordered-side sign
        assert!(multicritical_residual(0, 0.01).unwrap() > 0.0);
        assert!(multicritical_residual(0, 0.0).is_err());
        assert!(multicritical_residual(0, 0.5).is_err());
    }

    #[test]
    fn residual_single_sign_change() {
        for s in [0u8, 1, 2] {
            let mut signs_seen = Vec::new();
            for i in 0..=15 {
                let p = 0.05 + f64::from(i) * 0.01;
                signs_seen.push(multicritical_residual(s, p).unwrap() > 0.0);
            }
            let flips = signs_seen.windows(2).filter(|w| w[0] != w[1]).count();
            assert_eq!(flips, 1, "s = {s}");
        }
    }

    #[test]
    fn multicritical_points_match_published_sequence() {
        let p0 = multicritical_point(0).unwrap();
        let p1 = multicritical_point(1).unwrap();
        let p2 = multicritical_point(2).unwrap();
        assert!((p0 - 0.110028).abs() < 1e-5, "s=0: {p0}");
        assert!((p1 - 0.1093).abs() < 2e-4, "s=1: {p1}");
        assert!((p2 - 0.1092).abs() < 2e-4, "s=2: {p2}");
        // nonincreasing refinement sequence
        assert!(p0 >= p1 && p1 >= p2);
    }

    #[test]
    fn phase_boundary_limits() {
        // pure limit
        let k0 = phase_boundary(0, 0.0).unwrap();
        assert!((k0 - ising_critical_point_exact()).abs() < 1e-6);
        for s in [1u8, 2] {
            let k = phase_boundary(s, 0.0).unwrap();
            assert!(
                (k - ising_critical_point_exact()).abs() < 1e-6,
                "s = {s}: {k}"
            );
        }
        // Nishimori crossing: K_c(p_c - ε) approaches the NL coupling at
        // tangency rate √ε (the boundary turns around at the multicritical
        // point)
        let pc = multicritical_point(0).unwrap();
        let k_nl = nishimori_coupling(pc).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1e-4, 1e-6] {
            let k = phase_boundary(0, pc - eps).unwrap();
            let gap = (k - k_nl).abs();
            assert!(gap < 20.0 * eps.sqrt(), "ε = {eps}: {k} vs NL {k_nl}");
            assert!(gap < last);
            last = gap;
        }
        // intermediate p: bracketed between pure and NL values, monotone
        let k05 = phase_boundary(0, 0.05).unwrap();
        assert!(k05 > ising_critical_point_exact() && k05 < k_nl);
        let k08 = phase_boundary(0, 0.08).unwrap();
        assert!(k08 > k05);
        // beyond the multicritical point: rejected
        assert!(phase_boundary(0, 0.12).is_err());
        assert!(phase_boundary(0, 0.6).is_err());
    }

    #[test]
    fn disorder_law_convention() {
        let law = DisorderLaw::new(0.5).unwrap();
        assert_eq!(law.k_p, 0.0);
        let law = DisorderLaw::new(0.11).unwrap();
        assert!(((-2.0 * law.k_p).exp() - 0.11 / 0.89).abs() < 1e-15);
        assert!(DisorderLaw::new(0.0).is_err());
    }
}
