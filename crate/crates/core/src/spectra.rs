//! Fock-to-Fock transition weights after an adiabatic frequency excursion,
//! full distributions with certified truncation, and their analytic moments.

use serde::{Deserialize, Serialize};

use crate::adiabatic::BogoliubovPair;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{jacobi_ln, log_factorial_ratio};

/// Quantum numbers of a circular-gauge Landau-type eigenstate: radial number
/// n_r >= 0 and canonical angular momentum number m (any sign).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockLabel {
    pub n_r: u32,
    pub m: i32,
}

impl FockLabel {
    pub fn new(n_r: u32, m: i32) -> Self {
        Self { n_r, m }
    }
}

/// Transition distribution over final radial numbers q = 0..len-1 at fixed m,
/// with the unresolved tail probability recorded explicitly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDistribution<T> {
    pub initial: FockLabel,
    pub u_minus_abs: T,
    pub probabilities: Vec<T>,
    pub tail_bound: T,
}

/// Numerically summed moments of a stored distribution. `certified` is false
/// when the recorded tail bound is too large for the stated accuracy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DistributionMoments<T> {
    pub mean: T,
    pub variance: T,
    pub certified: bool,
}

/// Probability |C_{n q}^{(m)}|^2 of the transition n -> q at fixed m, as a
/// function of |u_minus| alone (|u_plus|^2 = 1 + |u_minus|^2). Symmetric in
/// (n, q) and blind to the sign of m.
pub fn transition_probability<T: Real>(n: u32, q: u32, m: i32, u_minus_abs: T) -> T {
    let am = m.unsigned_abs() as u64;
    if u_minus_abs == T::zero() {
        return if n == q { T::one() } else { T::zero() };
    }
    let (n_lt, n_gt) = if n <= q { (n as u64, q as u64) } else { (q as u64, n as u64) };
    let d = n_gt - n_lt; // |q - n|
    let u_sq = u_minus_abs * u_minus_abs;
    let up_sq = T::one() + u_sq;
    let ln_pref: T = log_factorial_ratio::<T>(&[
        (1, n_gt + am),
        (1, n_lt),
        (-1, n_lt + am),
        (-1, n_gt),
    ])
    .expect("nonnegative factorial arguments")
        + lit::<T>(d as f64) * u_sq.ln()
        - lit::<T>((d + am + 1) as f64) * up_sq.ln();
    let x = (T::one() - u_sq) / (T::one() + u_sq);
    let jac = jacobi_ln(n_lt as u32, lit::<T>(d as f64), lit::<T>(am as f64), x);
    if jac.sign == 0 {
        return T::zero();
    }
    let ln_p = ln_pref + lit::<T>(2.0) * jac.ln_abs;
    ln_p.exp().min(T::one())
}

/// Hard cap on the distribution length before a truncation error is raised.
pub const Q_MAX_CAP: usize = 1_000_000;

/// Build the full distribution over final q for the given initial state,
/// growing q until the accumulated probability reaches 1 - tail_tol.
pub fn distribution<T: Real>(
    initial: FockLabel,
    u_minus_abs: T,
    tail_tol: T,
) -> Result<SpectralDistribution<T>> {
    let tol_f = tail_tol.as_f64();
    if !(tol_f > 0.0 && tol_f <= 1e-3) {
        return Err(Error::InvalidArgument(format!(
            "tail_tol must lie in (0, 1e-3], got {tol_f}"
        )));
    }
    let mut probabilities = Vec::new();
    let mut cum = T::zero();
    let target = T::one() - tail_tol;
    let mut q = 0usize;
    while cum < target {
        if q >= Q_MAX_CAP {
            return Err(Error::TruncationCap { q_max: Q_MAX_CAP });
        }
        let p = transition_probability(initial.n_r, q as u32, initial.m, u_minus_abs);
        probabilities.push(p);
        cum = cum + p;
        q += 1;
    }
    Ok(SpectralDistribution {
        initial,
        u_minus_abs,
        probabilities,
        tail_bound: (T::one() - cum).max(T::zero()),
    })
}

/// Closed-form mean of the final radial number:
/// <q> = n_r (1 + 2|u_minus|^2) + |u_minus|^2 (|m| + 1).
pub fn mean_q<T: Real>(initial: FockLabel, u_minus_sq: T) -> T {
    let n = lit::<T>(initial.n_r as f64);
    let am1 = lit::<T>(initial.m.unsigned_abs() as f64 + 1.0);
    n * (T::one() + lit::<T>(2.0) * u_minus_sq) + u_minus_sq * am1
}

/// Mean energy in the adiabatic epoch (hbar = 1):
/// <H> = |omega| (2 n_r + |m| + 1)(|u_plus|^2 + |u_minus|^2) - omega m.
pub fn mean_energy_adiabatic<T: Real>(
    initial: FockLabel,
    pair: &BogoliubovPair<T>,
    omega: T,
) -> Result<T> {
    if omega == T::zero() {
        return Err(Error::SingularFrequency { t: f64::NAN });
    }
    let gamma = lit::<T>(2.0 * initial.n_r as f64 + initial.m.unsigned_abs() as f64 + 1.0);
    let s = pair.u_plus.norm_sqr() + pair.u_minus.norm_sqr();
    Ok(omega.abs() * gamma * s - omega * lit::<T>(initial.m as f64))
}

/// Energy variance for an initial ground radial state (n_r = 0, hbar = 1):
/// sigma_H = 4 omega^2 (1 + |m|) |u_plus u_minus|^2.
pub fn energy_variance_ground<T: Real>(m: i32, pair: &BogoliubovPair<T>, omega: T) -> T {
    lit::<T>(4.0)
        * omega
        * omega
        * lit::<T>(1.0 + m.unsigned_abs() as f64)
        * pair.u_plus.norm_sqr()
        * pair.u_minus.norm_sqr()
}

/// Instantaneous eigenenergy of level (q, m) at frequency omega (hbar = 1):
/// E = |omega| (1 + |m| - sign(omega) m + 2q).
pub fn instantaneous_energy<T: Real>(q: u32, m: i32, omega: T) -> Result<T> {
    if omega == T::zero() {
        return Err(Error::SingularFrequency { t: f64::NAN });
    }
    let sign = if omega > T::zero() { 1.0 } else { -1.0 };
    Ok(omega.abs()
        * lit::<T>(1.0 + m.unsigned_abs() as f64 - sign * m as f64 + 2.0 * q as f64))
}

/// Numerically summed mean and variance of the stored final-q distribution.
pub fn distribution_moments<T: Real>(dist: &SpectralDistribution<T>) -> DistributionMoments<T> {
    let mut norm = T::zero();
    let mut mean = T::zero();
    for (q, &p) in dist.probabilities.iter().enumerate() {
        norm = norm + p;
        mean = mean + p * lit::<T>(q as f64);
    }
    let mean = mean / norm;
    let mut var = T::zero();
    for (q, &p) in dist.probabilities.iter().enumerate() {
        let d = lit::<T>(q as f64) - mean;
        var = var + p * d * d;
    }
    DistributionMoments {
        mean,
        variance: var / norm,
        certified: dist.tail_bound < lit::<T>(1e-9),
    }
}
