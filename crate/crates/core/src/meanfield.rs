//! Biased-coin moments, the large-deviation rate function and mean-field
//! self-consistency.
//!
//! The sign convention of the rate function follows the pseudo-free-energy
//! plots: `f_value` is minus the large-deviation exponent, so the most
//! probable magnetization minimizes `f_value`.

use crate::{Error, Result};

/// A point on the rate-function curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub m: f64,
    /// Minus the large-deviation exponent (dimensionless free-energy density).
    pub f_value: f64,
}

/// Parameters of the mean-field Ising problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldProblem {
    pub beta: f64,
    pub j: f64,
    pub z: u32,
}

impl MeanFieldProblem {
    pub fn new(beta: f64, j: f64, z: u32) -> Result<MeanFieldProblem> {
        if !(beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = {beta} must be >= 0"
            )));
        }
        if !(j > 0.0) {
            return Err(Error::InvalidParameter(format!("J = {j} must be > 0")));
        }
        if z < 1 {
            return Err(Error::InvalidParameter(
                "coordination number z must be >= 1".into(),
            ));
        }
        Ok(MeanFieldProblem { beta, j, z })
    }

    /// The dimensionless combination βJz controlling the transition.
    pub fn coupling(&self) -> f64 {
        self.beta * self.j * f64::from(self.z)
    }
}

/// Expectation and variance of a single ±1 coin with bias strength `k`:
/// m = tanh k, var = 1 - tanh² k.
pub fn coin_moments(k: f64) -> (f64, f64) {
    let m = k.tanh();
    (m, 1.0 - m * m)
}

/// Large-deviation exponent of the sample magnetization for N independent
/// spins in field βh: m·βh - m·atanh(m) + ln(2/√(1-m²)).
pub fn ld_exponent(m: f64, beta_h: f64) -> Result<f64> {
    if !(m.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|m| = {} must be < 1",
            m.abs()
        )));
    }
    Ok(m * beta_h - m * m.atanh() + (2.0 / (1.0 - m * m).sqrt()).ln())
}

/// Rate function at `m`; `f_value` is minus [`ld_exponent`].
pub fn rate_function(m: f64, beta_h: f64) -> Result<RatePoint> {
    Ok(RatePoint {
        m,
        f_value: -ld_exponent(m, beta_h)?,
    })
}

/// Critical inverse temperature of the mean-field Ising model, 1/(zJ).
pub fn mf_critical_beta(j: f64, z: u32) -> Result<f64> {
    if !(j > 0.0) || z < 1 {
        return Err(Error::InvalidParameter("need J > 0 and z >= 1".into()));
    }
    Ok(1.0 / (f64::from(z) * j))
}

/// Nonnegative stable root of m = tanh(βJz·m); zero iff βJz <= 1.
///
/// Bisection on g(m) = m - tanh(am): g is negative just right of the
/// trivial root (g'(0) = 1 - a < 0 on the ordered side) and positive at
/// m = 1, so [ε, 1] brackets the stable root.
pub fn mf_magnetization(problem: &MeanFieldProblem) -> f64 {
    let a = problem.coupling();
    if a <= 1.0 {
        return 0.0;
    }
    let g = |m: f64| m - (a * m).tanh();
    // g(1) can round to exactly 0 when tanh saturates; the bracket only
    // needs g < 0 strictly inside
    let (mut lo, mut hi) = (1e-300, 1.0);
    debug_assert!(g(lo) < 0.0 && g(hi) >= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Small-m third-order root √(3(βJz-1))/(βJz) on the ordered side.
///
/// The radicand sign is corrected relative to the printed expansion, which
/// is imaginary exactly where the ferromagnetic solutions exist; βJz = 1
/// returns 0 (vanishing at criticality), βJz < 1 is rejected.
pub fn mf_small_m_root(problem: &MeanFieldProblem) -> Result<f64> {
    let a = problem.coupling();
    if a < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "βJz = {a} < 1: no ferromagnetic expansion root"
        )));
    }
    Ok((3.0 * (a - 1.0)).sqrt() / a)
}
