//! Bogoliubov coefficients: extraction from numerical trajectories in
//! adiabatic regions, closed-form results for solvable profiles, and the
//! composition rule for sequences of frequency zero crossings.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::evolver::Trajectory;
use crate::scalar::{lit, Real};

/// Adiabaticity threshold above which extraction is refused.
const MU_LIMIT: f64 = 0.1;

/// A Bogoliubov pair (u_plus, u_minus) connecting the in-vacuum mode to the
/// instantaneous adiabatic basis, normalized as |u_plus|^2 - |u_minus|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair<T> {
    pub u_plus: Complex<T>,
    pub u_minus: Complex<T>,
}

impl<T: Real> BogoliubovPair<T> {
    /// Identity pair: no mixing.
    pub fn identity() -> Self {
        Self {
            u_plus: Complex::new(T::one(), T::zero()),
            u_minus: Complex::new(T::zero(), T::zero()),
        }
    }

    /// Mean number of quanta created from vacuum, |u_minus|^2.
    pub fn occupancy(&self) -> T {
        self.u_minus.norm_sqr()
    }

    /// | |u_plus|^2 - |u_minus|^2 - 1 |; zero for an exact pair.
    pub fn normalization_residual(&self) -> T {
        (self.u_plus.norm_sqr() - self.u_minus.norm_sqr() - T::one()).abs()
    }
}

/// Invert the adiabatic ansatz
/// eps = |omega|^{-1/2} (u_plus e^{i phi} + u_minus e^{-i phi})
/// at time `t` of the trajectory. The result is referenced to the incoming
/// adiabatic wave at the start of the trajectory, so a mixing-free evolution
/// yields u_plus = 1 exactly.
pub fn extract<T: Real>(traj: &Trajectory<T>, t: T) -> Result<BogoliubovPair<T>> {
    let mu = traj.adiabaticity(t)?;
    let limit = lit::<T>(MU_LIMIT);
    if !(mu < limit) {
        return Err(Error::UnreliableExtraction {
            mu: mu.as_f64(),
            limit: MU_LIMIT,
        });
    }
    extract_unchecked(traj, t)
}

fn extract_unchecked<T: Real>(traj: &Trajectory<T>, t: T) -> Result<BogoliubovPair<T>> {
    let s = traj.state_at(t)?;
    let w = traj.profile().eval(t)?;
    if w == T::zero() {
        return Err(Error::SingularFrequency { t: t.as_f64() });
    }
    let aw = w.abs();
    let sq = aw.sqrt();
    let half = lit::<T>(0.5);
    let i_unit = Complex::new(T::zero(), T::one());
    let a = s.eps * sq;
    let b = s.deps / sq;
    let raw_plus = (a - i_unit * b) * half;
    let raw_minus = (a + i_unit * b) * half;
    // Global phase fix: the incoming wave carries e^{-i phi(t_i)} relative to
    // the zero-referenced phase, so dividing it out pins arg u_plus to the
    // scattering convention.
    let phi_i = traj.initial().phi;
    let rot_m = Complex::from_polar(T::one(), -s.phi + phi_i);
    let rot_p = Complex::from_polar(T::one(), s.phi + phi_i);
    Ok(BogoliubovPair {
        u_plus: raw_plus * rot_m,
        u_minus: raw_minus * rot_p,
    })
}

/// Extract averaged over one local period ending at `t`, together with a
/// peak-to-peak spread of |u_minus|^2 across the samples. The spread is an
/// a-posteriori estimate of the residual non-adiabatic oscillation.
pub fn extract_averaged<T: Real>(
    traj: &Trajectory<T>,
    t: T,
    n_samples: usize,
) -> Result<(BogoliubovPair<T>, T)> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(
            "extract_averaged needs at least 2 samples".into(),
        ));
    }
    let w = traj.profile().eval(t)?;
    if w == T::zero() {
        return Err(Error::SingularFrequency { t: t.as_f64() });
    }
    let period = lit::<T>(2.0) * T::PI() / w.abs();
    let t0 = (t - period).max(traj.t_start());
    let mut sum_p = Complex::new(T::zero(), T::zero());
    let mut sum_m = Complex::new(T::zero(), T::zero());
    let mut occ_min = T::infinity();
    let mut occ_max = T::neg_infinity();
    let step = (t - t0) / lit::<T>((n_samples - 1) as f64);
    for i in 0..n_samples {
        let ti = t0 + step * lit::<T>(i as f64);
        let p = extract(traj, ti)?;
        sum_p = sum_p + p.u_plus;
        sum_m = sum_m + p.u_minus;
        let occ = p.occupancy();
        occ_min = occ_min.min(occ);
        occ_max = occ_max.max(occ);
    }
    let n = lit::<T>(n_samples as f64);
    Ok((
        BogoliubovPair {
            u_plus: sum_p / n,
            u_minus: sum_m / n,
        },
        occ_max - occ_min,
    ))
}

/// Closed form for the single power-law crossing omega = omega_0 |t/tau|^k
/// sgn(-t): u_plus = 1/sin(pi/(2(k+1))), u_minus = i cot(pi/(2(k+1))).
pub fn analytic_powerlaw<T: Real>(k: u32) -> BogoliubovPair<T> {
    let arg = T::PI() / (lit::<T>(2.0) * lit::<T>(k as f64 + 1.0));
    BogoliubovPair {
        u_plus: Complex::new(T::one() / arg.sin(), T::zero()),
        u_minus: Complex::new(T::zero(), arg.cos() / arg.sin()),
    }
}

/// Asymptotic pair creation for the tanh frequency sweep
/// omega(t) = (omega_i + omega_f)/2 + (omega_f - omega_i)/2 tanh(kappa t):
/// |u_minus|^2 = exp[2 pi (|w_i - w_f| - w_i - |w_f|)] with w = omega/kappa.
///
/// Returns (|u_minus|^2, valid); `valid` is false outside the asymptotic
/// regime min(w_i, |w_f|) >> 1 where the exponential formula degrades.
pub fn analytic_tanh<T: Real>(omega_i: T, omega_f: T, kappa: T) -> Result<(T, bool)> {
    if !(kappa > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "tanh sweep rate must be positive, got {}",
            kappa.as_f64()
        )));
    }
    if !(omega_i > T::zero()) {
        return Err(Error::NonPositiveInitialFrequency {
            omega: omega_i.as_f64(),
        });
    }
    let wi = omega_i / kappa;
    let wf = omega_f / kappa;
    let two_pi = lit::<T>(2.0) * T::PI();
    let occ = (two_pi * ((wi - wf).abs() - wi - wf.abs())).exp();
    let valid = wi.min(wf.abs()) >= lit::<T>(2.0);
    Ok((occ, valid))
}

/// Exact pair for the antisymmetric sweep omega(t) = -omega_0 tanh(kappa t):
/// u_plus = sqrt(2) e^{-4 i w_0 ln 2}, u_minus = i, with w_0 = omega_0/kappa.
pub fn analytic_tanh_symmetric<T: Real>(omega_0: T, kappa: T) -> Result<BogoliubovPair<T>> {
    if !(omega_0 > T::zero() && kappa > T::zero()) {
        return Err(Error::InvalidArgument(
            "symmetric tanh requires omega_0 > 0, kappa > 0".into(),
        ));
    }
    let w0 = omega_0 / kappa;
    let phase = -lit::<T>(4.0) * w0 * lit::<T>(std::f64::consts::LN_2);
    Ok(BogoliubovPair {
        u_plus: Complex::from_polar(lit::<T>(std::f64::consts::SQRT_2), phase),
        u_minus: Complex::new(T::zero(), T::one()),
    })
}

/// Re-express a pair extracted in the zero-referenced phase convention
/// (phi measured from the crossing) in the scattering convention that
/// references the asymptotic linear phases |omega_i| t and |omega_f| t.
///
/// `delta_in` is the t -> -inf limit of phi(t) - omega_i t and `delta_out`
/// the t -> +inf limit of |omega_f| t - phi(t); both are finite whenever the
/// frequency saturates. Closed-form pairs quoted for saturating profiles
/// (e.g. the tanh sweep) use this convention, while extraction from a
/// trajectory is zero-referenced.
pub fn asymptotic_convention<T: Real>(
    pair: BogoliubovPair<T>,
    delta_in: T,
    delta_out: T,
) -> BogoliubovPair<T> {
    BogoliubovPair {
        u_plus: pair.u_plus * Complex::from_polar(T::one(), -(delta_in + delta_out)),
        u_minus: pair.u_minus * Complex::from_polar(T::one(), delta_out - delta_in),
    }
}

/// Compose per-crossing pairs through a sequence of crossings.
///
/// `phases[j]` is the accumulated phase Phi at crossing j+1 measured from the
/// first crossing (so `phases.len() == pairs.len() - 1`); it must be finite,
/// nonnegative and nondecreasing. The recurrence is
/// U_plus  <- U_plus u_plus  + U_minus conj(u_minus) e^{-2 i Phi},
/// U_minus <- U_minus conj(u_plus) + U_plus u_minus e^{+2 i Phi}.
pub fn compose<T: Real>(
    pairs: &[BogoliubovPair<T>],
    phases: &[T],
) -> Result<BogoliubovPair<T>> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(
            "compose requires at least one pair".into(),
        ));
    }
    if phases.len() + 1 != pairs.len() {
        return Err(Error::MalformedPhases(format!(
            "expected {} phases for {} crossings, got {}",
            pairs.len() - 1,
            pairs.len(),
            phases.len()
        )));
    }
    let mut prev = T::zero();
    for (j, &p) in phases.iter().enumerate() {
        if !p.is_finite() || p < prev {
            return Err(Error::MalformedPhases(format!(
                "phase {} at index {j} is non-finite or decreasing",
                p.as_f64()
            )));
        }
        prev = p;
    }
    let mut up = pairs[0].u_plus;
    let mut um = pairs[0].u_minus;
    for (pair, &phi) in pairs[1..].iter().zip(phases) {
        let two_phi = lit::<T>(2.0) * phi;
        let e_m = Complex::from_polar(T::one(), -two_phi);
        let e_p = Complex::from_polar(T::one(), two_phi);
        let new_up = up * pair.u_plus + um * pair.u_minus.conj() * e_m;
        let new_um = um * pair.u_plus.conj() + up * pair.u_minus * e_p;
        up = new_up;
        um = new_um;
    }
    Ok(BogoliubovPair {
        u_plus: up,
        u_minus: um,
    })
}

/// Evaluate `compose` over many phase schedules in parallel, returning the
/// final occupancy |U_minus|^2 of each schedule.
pub fn sweep_compose<T: Real>(
    pairs: &[BogoliubovPair<T>],
    schedules: &[Vec<T>],
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    schedules
        .par_iter()
        .map(|phases| compose(pairs, phases).map(|p| p.occupancy()))
        .collect()
}
