//! Energy and magnetic-moment statistics for Fock and Gaussian
//! moment-invariant states, covariance-matrix propagation through the
//! auxiliary oscillator, and the saturated-frequency asymptotics.
//!
//! Units: hbar = 1, particle mass = 1, magnetic moments in units of the
//! Bohr magneton.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::adiabatic::BogoliubovPair;
use crate::error::{Error, Result};
use crate::evolver::OscillatorState;
use crate::scalar::{lit, Real};
use crate::spectra::FockLabel;

/// Symmetric 4x4 matrix of second moments over (x, y, p_x, p_y); first
/// moments vanish identically for every state family considered here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceState<T> {
    pub mat: [[T; 4]; 4],
}

impl<T: Real> CovarianceState<T> {
    /// Largest deviation from symmetry, |Q_ij - Q_ji|.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((self.mat[i][j] - self.mat[j][i]).abs());
            }
        }
        worst
    }

    /// Determinants of the (x, p_x) and (y, p_y) uncertainty sub-blocks;
    /// each must stay >= (hbar/2)^2 = 1/4.
    pub fn robertson_blocks(&self) -> (T, T) {
        let m = &self.mat;
        let dx = m[0][0] * m[2][2] - m[0][2] * m[0][2];
        let dy = m[1][1] * m[3][3] - m[1][3] * m[1][3];
        (dx, dy)
    }
}

/// Parameters of the Gaussian magnetic-moment invariant family; both must be
/// >= 1 by the Robertson uncertainty bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantStateParams<T> {
    pub g_plus: T,
    pub g_minus: T,
}

impl<T: Real> InvariantStateParams<T> {
    pub fn new(g_plus: T, g_minus: T) -> Result<Self> {
        if !(g_plus >= T::one() && g_minus >= T::one()) {
            return Err(Error::InvalidArgument(format!(
                "invariant-state parameters require G+/- >= 1, got ({}, {})",
                g_plus.as_f64(),
                g_minus.as_f64()
            )));
        }
        Ok(Self { g_plus, g_minus })
    }

    /// Fock state mapping G_pm = 1 + 2 n_r + |m| -+ m.
    pub fn from_fock(label: FockLabel) -> Self {
        let base = 1.0 + 2.0 * label.n_r as f64 + label.m.unsigned_abs() as f64;
        Self {
            g_plus: lit::<T>(base - label.m as f64),
            g_minus: lit::<T>(base + label.m as f64),
        }
    }

    /// Effective (gamma, m) appearing in the covariance block form:
    /// gamma = (G+ + G-)/2, m = (G- - G+)/2.
    fn gamma_m(&self) -> (T, T) {
        let half = lit::<T>(0.5);
        (
            (self.g_plus + self.g_minus) * half,
            (self.g_minus - self.g_plus) * half,
        )
    }
}

/// Mean magnetic moment of a Fock state on a trajectory point:
/// <M> = m - omega |eps|^2 (2 n_r + |m| + 1), in Bohr magnetons.
pub fn fock_moment_mean<T: Real>(label: FockLabel, omega: T, eps_abs_sq: T) -> T {
    let gamma = lit::<T>(2.0 * label.n_r as f64 + label.m.unsigned_abs() as f64 + 1.0);
    lit::<T>(label.m as f64) - omega * eps_abs_sq * gamma
}

/// Magnetic-moment variance of a Fock state:
/// sigma_M = [omega |eps|^2]^2 [2 n_r (n_r + |m| + 1) + |m| + 1].
pub fn fock_moment_variance<T: Real>(label: FockLabel, omega: T, eps_abs_sq: T) -> T {
    let n = label.n_r as f64;
    let am = label.m.unsigned_abs() as f64;
    let bracket = lit::<T>(2.0 * n * (n + am + 1.0) + am + 1.0);
    let s = omega * eps_abs_sq;
    s * s * bracket
}

/// Oscillating factor w = |u+|^2 + |u-|^2 + 2 Re[u+ u-* e^{2 i phi}]
/// controlling the post-crossing magnetic-moment beat.
pub fn w_of_t<T: Real>(pair: &BogoliubovPair<T>, phi: T) -> T {
    let cross = pair.u_plus * pair.u_minus.conj()
        * Complex::from_polar(T::one(), lit::<T>(2.0) * phi);
    pair.u_plus.norm_sqr() + pair.u_minus.norm_sqr() + lit::<T>(2.0) * cross.re
}

/// Tight bounds (w_min, w_max) = (sqrt(1+|u-|^2) -+ |u-|)^{+-2} on w.
pub fn w_bounds<T: Real>(pair: &BogoliubovPair<T>) -> (T, T) {
    let u = pair.u_minus.norm();
    let s = (T::one() + u * u).sqrt();
    let wmax = (s + u) * (s + u);
    (T::one() / wmax, wmax)
}

fn block_covariance<T: Real>(gamma: T, m_eff: T, omega_i: T) -> Result<CovarianceState<T>> {
    if !(omega_i > T::zero()) {
        return Err(Error::NonPositiveInitialFrequency {
            omega: omega_i.as_f64(),
        });
    }
    let half = lit::<T>(0.5);
    let z = T::zero();
    let xx = half * gamma / omega_i;
    let pp = half * gamma * omega_i;
    let c = half * m_eff;
    Ok(CovarianceState {
        mat: [
            [xx, z, z, c],
            [z, xx, -c, z],
            [z, -c, pp, z],
            [c, z, z, pp],
        ],
    })
}

/// Initial covariance of a Fock state at frequency omega_i > 0.
pub fn initial_covariance_fock<T: Real>(
    label: FockLabel,
    omega_i: T,
) -> Result<CovarianceState<T>> {
    let gamma = lit::<T>(2.0 * label.n_r as f64 + label.m.unsigned_abs() as f64 + 1.0);
    block_covariance(gamma, lit::<T>(label.m as f64), omega_i)
}

/// Initial covariance of a Gaussian invariant state at frequency omega_i > 0.
pub fn initial_covariance_gaussian<T: Real>(
    params: InvariantStateParams<T>,
    omega_i: T,
) -> Result<CovarianceState<T>> {
    let (gamma, m_eff) = params.gamma_m();
    block_covariance(gamma, m_eff, omega_i)
}

/// Linear flow matrix Lambda(t; t_i) built from the oscillator solution.
fn lambda_matrix<T: Real>(state: &OscillatorState<T>, omega_i: T) -> [[T; 4]; 4] {
    let sq = omega_i.sqrt();
    let (s, c) = state.phi_tilde.sin_cos();
    let r = [[c, s], [-s, c]];
    let blocks = [
        (state.eps.re * sq, state.eps.im * sq / omega_i),
        (state.deps.re * sq, state.deps.im * sq / omega_i),
    ];
    let mut lam = [[T::zero(); 4]; 4];
    for (bi, &(re_f, im_f)) in blocks.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                lam[2 * bi + i][j] = re_f * r[i][j];
                lam[2 * bi + i][2 + j] = im_f * r[i][j];
            }
        }
    }
    lam
}

fn mat_mul<T: Real>(a: &[[T; 4]; 4], b: &[[T; 4]; 4]) -> [[T; 4]; 4] {
    let mut out = [[T::zero(); 4]; 4];
    for (row, ai) in a.iter().enumerate() {
        for col in 0..4 {
            let mut acc = T::zero();
            for (k, &aik) in ai.iter().enumerate() {
                acc = acc + aik * b[k][col];
            }
            out[row][col] = acc;
        }
    }
    out
}

/// Propagate an initial covariance through the oscillator flow:
/// Q(t) = Lambda Q(t_i) Lambda^T with Lambda from the trajectory state.
pub fn propagate<T: Real>(
    q0: &CovarianceState<T>,
    state: &OscillatorState<T>,
    omega_i: T,
) -> Result<CovarianceState<T>> {
    if !(omega_i > T::zero()) {
        return Err(Error::NonPositiveInitialFrequency {
            omega: omega_i.as_f64(),
        });
    }
    let lam = lambda_matrix(state, omega_i);
    let mut lam_t = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            lam_t[i][j] = lam[j][i];
        }
    }
    Ok(CovarianceState {
        mat: mat_mul(&mat_mul(&lam, &q0.mat), &lam_t),
    })
}

/// Mean energy read off a covariance matrix:
/// <H> = (p^2)/2 + omega^2 (r^2)/2 - omega (x p_y - y p_x).
pub fn energy_from_covariance<T: Real>(q: &CovarianceState<T>, omega: T) -> T {
    let m = &q.mat;
    let half = lit::<T>(0.5);
    half * (m[2][2] + m[3][3]) + half * omega * omega * (m[0][0] + m[1][1])
        - omega * (m[0][3] - m[1][2])
}

/// Closed-form Fock-state energy on a trajectory point:
/// <H> = gamma/2 (|eps'|^2 + omega^2 |eps|^2) - m omega.
pub fn energy_eps_fock<T: Real>(
    label: FockLabel,
    eps: Complex<T>,
    deps: Complex<T>,
    omega: T,
) -> T {
    let gamma = lit::<T>(2.0 * label.n_r as f64 + label.m.unsigned_abs() as f64 + 1.0);
    let half = lit::<T>(0.5);
    half * gamma * (deps.norm_sqr() + omega * omega * eps.norm_sqr())
        - lit::<T>(label.m as f64) * omega
}

/// Closed-form Gaussian invariant-state energy on a trajectory point:
/// E = (G+ + G-)/4 (|eps'|^2 + omega^2 |eps|^2) + omega (G+ - G-)/2.
pub fn energy_eps_gaussian<T: Real>(
    params: InvariantStateParams<T>,
    eps: Complex<T>,
    deps: Complex<T>,
    omega: T,
) -> T {
    let quarter = lit::<T>(0.25);
    quarter * (params.g_plus + params.g_minus)
        * (deps.norm_sqr() + omega * omega * eps.norm_sqr())
        + lit::<T>(0.5) * omega * (params.g_plus - params.g_minus)
}

/// Saturated-frequency asymptotics of a Gaussian invariant state:
/// (final energy E_f, moment oscillation amplitude Delta M, time-averaged
/// moment M_bar).
pub fn invariant_state_asymptotics<T: Real>(
    params: InvariantStateParams<T>,
    pair: &BogoliubovPair<T>,
    omega_f: T,
) -> Result<(T, T, T)> {
    if omega_f == T::zero() {
        return Err(Error::SingularFrequency { t: f64::NAN });
    }
    let half = lit::<T>(0.5);
    let g_sum = params.g_plus + params.g_minus;
    let g_diff = params.g_plus - params.g_minus;
    let boost = T::one() + lit::<T>(2.0) * pair.u_minus.norm_sqr();
    let e_f = half * (omega_f.abs() * g_sum * boost + omega_f * g_diff);
    let delta_m = pair.u_plus.norm() * pair.u_minus.norm() * g_sum;
    let m_bar = half * (-g_diff - omega_f.signum() * g_sum * boost);
    Ok((e_f, delta_m, m_bar))
}

/// Instantaneous mean magnetic moment of a Gaussian invariant state:
/// M(t) = [G- - G+ - omega |eps|^2 (G+ + G-)] / 2, in Bohr magnetons.
pub fn moment_evolution<T: Real>(
    params: InvariantStateParams<T>,
    state: &OscillatorState<T>,
    omega: T,
) -> T {
    let half = lit::<T>(0.5);
    half * (params.g_minus - params.g_plus
        - omega * state.eps.norm_sqr() * (params.g_plus + params.g_minus))
}

/// Wigner density of the Gaussian invariant state at a phase-space point
/// (x, y, p_x, p_y), together with the purity (G+ G-)^{-1}.
pub fn wigner_and_purity<T: Real>(
    params: InvariantStateParams<T>,
    omega: T,
    point: [T; 4],
) -> Result<(T, T)> {
    if !(omega > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "Wigner form requires omega > 0, got {}",
            omega.as_f64()
        )));
    }
    let [x, y, px, py] = point;
    let g_sum = params.g_plus + params.g_minus;
    let g_diff = params.g_plus - params.g_minus;
    let gg = params.g_plus * params.g_minus;
    let r2 = x * x + y * y;
    let p2 = px * px + py * py;
    let ang = x * py - y * px;
    let expo = -(g_sum * (omega * omega * r2 + p2) + lit::<T>(2.0) * g_diff * omega * ang)
        / (lit::<T>(2.0) * omega * gg);
    Ok((lit::<T>(4.0) / gg * expo.exp(), T::one() / gg))
}

/// Second moments of the relative and guiding-center coordinates:
/// (<x_r^2>, <x_c^2>) = (G+ /(4 omega), G- /(4 omega)).
pub fn guiding_center_moments<T: Real>(
    params: InvariantStateParams<T>,
    omega: T,
) -> Result<(T, T)> {
    if !(omega > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "guiding-center moments require omega > 0, got {}",
            omega.as_f64()
        )));
    }
    let q = lit::<T>(0.25) / omega;
    Ok((params.g_plus * q, params.g_minus * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adiabatic::{analytic_powerlaw, BogoliubovPair};
    use crate::evolver::{initial_state, integrate};
    use crate::profiles::FrequencyProfile;
    use crate::quad;
    use crate::spectra::FockLabel;

    #[test]
    fn fock_moment_examples() {
        // Stationary (omega |eps|^2 = 1): <M> = m - (2n + |m| + 1).
        assert_eq!(fock_moment_mean::<f64>(FockLabel::new(2, -3), 1.0, 1.0), -3.0 - 8.0);
        assert_eq!(fock_moment_mean::<f64>(FockLabel::new(0, 0), 1.0, 1.0), -1.0);
        // sigma_M ground state equals mean squared.
        assert_eq!(fock_moment_variance::<f64>(FockLabel::new(0, 0), 1.0, 1.0), 1.0);
        assert_eq!(fock_moment_variance::<f64>(FockLabel::new(2, 0), 1.0, 1.0), 13.0);
        assert_eq!(
            fock_moment_variance::<f64>(FockLabel::new(0, 7), 1.0, 1.0),
            fock_moment_variance::<f64>(FockLabel::new(0, -7), 1.0, 1.0)
        );
    }

    #[test]
    fn w_examples_and_bounds() {
        let id = BogoliubovPair::<f64>::identity();
        assert_eq!(w_of_t(&id, 0.7), 1.0);
        assert_eq!(w_bounds(&id), (1.0, 1.0));

        let p1 = analytic_powerlaw::<f64>(1);
        let (wmin, wmax) = w_bounds(&p1);
        let expect_max = (2.0f64.sqrt() + 1.0).powi(2);
        assert!((wmax - expect_max).abs() < 1e-12);
        assert!((wmin - 1.0 / expect_max).abs() < 1e-12);
        // Sampled w stays within bounds and attains them.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..2000 {
            let w = w_of_t(&p1, std::f64::consts::PI * i as f64 / 2000.0);
            assert!(w >= wmin - 1e-12 && w <= wmax + 1e-12);
            lo = lo.min(w);
            hi = hi.max(w);
        }
        assert!((hi - wmax).abs() < 1e-3 && (lo - wmin).abs() < 1e-3);
        // Period average equals |u+|^2 + |u-|^2.
        let avg = quad::integrate_rel(
            |phi: f64| w_of_t(&p1, phi),
            0.0,
            std::f64::consts::PI,
            1e-11,
            1e-14,
        ) / std::f64::consts::PI;
        let expect = p1.u_plus.norm_sqr() + p1.u_minus.norm_sqr();
        assert!((avg - expect).abs() < 1e-9);
    }

    #[test]
    fn initial_covariance_forms() {
        let vac = initial_covariance_fock(FockLabel::new(0, 0), 2.0f64).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = match (i, j) {
                    (0, 0) | (1, 1) => 0.25,
                    (2, 2) | (3, 3) => 1.0,
                    _ => 0.0,
                };
                assert_eq!(vac.mat[i][j], expect);
            }
        }
        // Fock <-> Gaussian mapping produce the same matrix.
        let label = FockLabel::new(2, -3);
        let qf = initial_covariance_fock(label, 1.3f64).unwrap();
        let qg =
            initial_covariance_gaussian(InvariantStateParams::from_fock(label), 1.3f64).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((qf.mat[i][j] - qg.mat[i][j]).abs() < 1e-14);
            }
        }
        let (dx, dy) = qf.robertson_blocks();
        assert!(dx >= 0.25 - 1e-14 && dy >= 0.25 - 1e-14);
        assert!(initial_covariance_fock(FockLabel::new(0, 0), -1.0f64).is_err());
        assert!(InvariantStateParams::new(0.5f64, 2.0).is_err());
    }

    #[test]
    fn propagate_identity_at_start() {
        let p = FrequencyProfile::constant(1.7f64);
        let s0 = initial_state(&p, 0.0).unwrap();
        let q0 = initial_covariance_fock(FockLabel::new(1, 2), 1.7).unwrap();
        let q1 = propagate(&q0, &s0, 1.7).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((q1.mat[i][j] - q0.mat[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_frequency_energy_is_stationary() {
        let w = 1.7f64;
        let p = FrequencyProfile::constant(w);
        let traj = integrate(&p, 0.0, 9.0, 1e-12).unwrap();
        let label = FockLabel::new(1, -2);
        let q0 = initial_covariance_fock(label, w).unwrap();
        let e0 = energy_from_covariance(&q0, w);
        // Stationary Fock: E = |w|(1 + |m| + 2n) - w m.
        assert!((e0 - (w * 5.0 + 2.0 * w)).abs() < 1e-12);
        for &t in &[2.3, 5.1, 8.97] {
            let s = traj.state_at(t).unwrap();
            let q = propagate(&q0, &s, w).unwrap();
            assert!((energy_from_covariance(&q, w) - e0).abs() < 1e-7);
            assert!(q.asymmetry() < 1e-10);
            let (dx, dy) = q.robertson_blocks();
            assert!(dx >= 0.25 - 1e-10 && dy >= 0.25 - 1e-10);
            // Closed-form variant agrees.
            let e_eps = energy_eps_fock(label, s.eps, s.deps, w);
            assert!((e_eps - e0).abs() < 1e-7);
        }
    }

    #[test]
    fn post_crossing_xx_block() {
        let profile = FrequencyProfile::powerlaw(80.0f64, 1.0, 1).unwrap();
        let traj = integrate(&profile, -1.0, 0.8, 1e-12).unwrap();
        let label = FockLabel::new(1, 3);
        let w_i = 80.0;
        let q0 = initial_covariance_fock(label, w_i).unwrap();
        let s = traj.state_at(0.8).unwrap();
        let q = propagate(&q0, &s, w_i).unwrap();
        let gamma = 2.0 + 3.0 + 1.0;
        let expect = 0.5 * gamma * s.eps.norm_sqr();
        assert!(
            (q.mat[0][0] - expect).abs() < 1e-8 * expect,
            "{} vs {expect}",
            q.mat[0][0]
        );
        assert!((q.mat[1][1] - expect).abs() < 1e-8 * expect);
    }

    #[test]
    fn invariant_asymptotics_examples() {
        let id = BogoliubovPair::<f64>::identity();
        let g11 = InvariantStateParams::new(1.0f64, 1.0).unwrap();
        let (e, dm, mb) = invariant_state_asymptotics(g11, &id, 2.0).unwrap();
        assert_eq!((e, dm, mb), (2.0, 0.0, -1.0));

        let p1 = analytic_powerlaw::<f64>(1);
        let (e1, _, mb1) = invariant_state_asymptotics(g11, &p1, -1.0).unwrap();
        assert!((e1 - 3.0).abs() < 1e-12); // factor 3 on the symmetric part
        // G+ = G-: -M_bar * omega_f = E_f.
        assert!((-mb1 * (-1.0) - e1).abs() < 1e-12);
        assert!(invariant_state_asymptotics(g11, &id, 0.0).is_err());
    }

    #[test]
    fn moment_evolution_matches_fock_mapping() {
        let label = FockLabel::new(2, -4);
        let params = InvariantStateParams::from_fock(label);
        let p = FrequencyProfile::constant(1.0f64);
        let s = initial_state(&p, 0.0).unwrap();
        let m_gauss = moment_evolution(params, &s, 1.0);
        let m_fock = fock_moment_mean(label, 1.0, s.eps.norm_sqr());
        assert!((m_gauss - m_fock).abs() < 1e-12);
    }

    #[test]
    fn wigner_purity_and_normalization() {
        let params = InvariantStateParams::new(3.0f64, 1.5).unwrap();
        let omega = 0.7;
        let (w0, purity) = wigner_and_purity(params, omega, [0.0; 4]).unwrap();
        assert!((w0 - 4.0 / 4.5).abs() < 1e-14);
        assert!((purity - 1.0 / 4.5).abs() < 1e-14);
        let (_, p_pure) =
            wigner_and_purity(InvariantStateParams::new(1.0f64, 1.0).unwrap(), 1.0, [0.0; 4])
                .unwrap();
        assert_eq!(p_pure, 1.0);

        // Phase-space normalization: the exponent separates into the pairs
        // (x, p_y) and (y, p_x); integrate each 2D Gaussian numerically.
        let g_sum = 4.5;
        let g_diff = 1.5;
        let gg = 4.5;
        let denom = 2.0 * omega * gg;
        let l_x = 8.0 * (gg / omega).sqrt();
        let l_p = 8.0 * (gg * omega).sqrt();
        let pair_integral = |sign: f64| {
            quad::integrate_rel(
                |x: f64| {
                    quad::integrate_rel(
                        |p: f64| {
                            (-(g_sum * (omega * omega * x * x + p * p)
                                + sign * 2.0 * g_diff * omega * x * p)
                                / denom)
                                .exp()
                        },
                        -l_p,
                        l_p,
                        1e-9,
                        1e-13,
                    )
                },
                -l_x,
                l_x,
                1e-9,
                1e-13,
            )
        };
        let total = 4.0 / gg * pair_integral(1.0) * pair_integral(-1.0)
            / (2.0 * std::f64::consts::PI).powi(2);
        assert!((total - 1.0).abs() < 1e-6, "norm {total}");
    }

    #[test]
    fn guiding_center_examples() {
        let vac = InvariantStateParams::new(1.0f64, 1.0).unwrap();
        let (xr, xc) = guiding_center_moments(vac, 2.0).unwrap();
        assert_eq!((xr, xc), (0.125, 0.125));
        let f = InvariantStateParams::from_fock(FockLabel::new(1, 0));
        let (xr1, xc1) = guiding_center_moments(f, 1.0).unwrap();
        assert_eq!((xr1, xc1), (0.75, 0.75));
        // <x^2> consistency with the covariance block (G+ + G-)/(4 omega).
        let g = InvariantStateParams::new(3.0f64, 1.5).unwrap();
        let q = initial_covariance_gaussian(g, 2.0).unwrap();
        let (a, b) = guiding_center_moments(g, 2.0).unwrap();
        assert!((q.mat[0][0] - (a + b)).abs() < 1e-14);
    }

    #[test]
    fn adiabatic_invariant_before_crossing() {
        // fock_moment_mean constant to O(mu) in the incoming adiabatic epoch.
        let profile = FrequencyProfile::powerlaw(150.0f64, 1.0, 1).unwrap();
        let traj = integrate(&profile, -1.0, -0.4, 1e-12).unwrap();
        let label = FockLabel::new(0, 0);
        let mut vals = Vec::new();
        for &t in &[-0.95, -0.8, -0.6, -0.45] {
            let s = traj.state_at(t).unwrap();
            let w = profile.eval(t).unwrap();
            vals.push(fock_moment_mean(label, w, s.eps.norm_sqr()));
        }
        let mu = traj.adiabaticity(-0.45).unwrap();
        for v in &vals {
            assert!((v - vals[0]).abs() < 5.0 * mu, "drift {} at mu {mu}", (v - vals[0]).abs());
        }
    }

    #[test]
    fn spectral_vs_covariance_energy() {
        // Cross-module oracle in the deep adiabatic epoch.
        let w0 = 120.0f64;
        let profile = FrequencyProfile::powerlaw(w0, 1.0, 1).unwrap();
        let traj = integrate(&profile, -1.0, 0.9, 1e-12).unwrap();
        let t = 0.9;
        let pair = crate::adiabatic::extract(&traj, t).unwrap();
        let s = traj.state_at(t).unwrap();
        let w = profile.eval(t).unwrap();
        let label = FockLabel::new(2, -1);
        let q0 = initial_covariance_fock(label, w0).unwrap();
        let q = propagate(&q0, &s, w0).unwrap();
        let e_cov = energy_from_covariance(&q, w);
        let e_spec =
            crate::spectra::mean_energy_adiabatic(label, &pair, w).unwrap();
        assert!(
            ((e_cov - e_spec) / e_cov).abs() < 1e-6,
            "covariance {e_cov} vs spectral {e_spec}"
        );
    }
}
