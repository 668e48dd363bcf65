//! Adaptive integration of the complex auxiliary oscillator equation
//! d2(eps)/dt2 + omega^2(t) eps = 0, with phase quadratures and diagnostics
//! carried in the same state vector.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::profiles::{FrequencyProfile, ZeroKind};
use crate::scalar::{lit, Real};

/// Instantaneous state of the auxiliary oscillator.
///
/// `phi` is the unsigned phase int |omega| referenced at the first frequency
/// zero (or at t_i for zero-free profiles); `phi_tilde` is the signed phase
/// int omega from t_i.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorState<T> {
    pub t: T,
    pub eps: Complex<T>,
    pub deps: Complex<T>,
    pub phi: T,
    pub phi_tilde: T,
}

impl<T: Real> OscillatorState<T> {
    /// |d(eps)/dt eps* - c.c. - 2i|; zero for the exact solution.
    pub fn wronskian_residual(&self) -> T {
        let im = self.deps.re * (-self.eps.im) + self.deps.im * self.eps.re;
        (lit::<T>(2.0) * (im - T::one())).abs()
    }
}

/// A frequency zero encountered during an integration, with its accumulated
/// phase Phi_k = int_{t_0}^{t_k} |omega|.
#[derive(Debug, Clone, Copy)]
pub struct CrossingEvent<T> {
    pub t: T,
    pub phase: T,
    pub kind: ZeroKind,
}

#[derive(Debug, Clone, Copy)]
struct Sample<T> {
    state: OscillatorState<T>,
    /// Cached |omega| and omega at the sample time, for Hermite interpolation
    /// of the phases, plus omega^2 for the eps-dot slope.
    abs_omega: T,
    omega: T,
}

/// Result of one integration: dense samples, crossing bookkeeping and the
/// a-posteriori Wronskian certificate.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    profile: FrequencyProfile<T>,
    samples: Vec<Sample<T>>,
    pub crossings: Vec<CrossingEvent<T>>,
    pub max_wronskian_residual: T,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Initial conditions eps = omega^{-1/2}, eps' = i omega^{1/2} at t_i,
/// with the phi reference shifted to the first frequency zero after t_i
/// when one exists.
pub fn initial_state<T: Real>(
    profile: &FrequencyProfile<T>,
    t_i: T,
) -> Result<OscillatorState<T>> {
    let omega_i = profile.eval(t_i)?;
    if !(omega_i > T::zero()) {
        return Err(Error::NonPositiveInitialFrequency {
            omega: omega_i.as_f64(),
        });
    }
    let phi0 = match profile.zeros().iter().find(|z| z.t > t_i) {
        Some(z) => -profile.phase_integral(t_i, z.t, false)?,
        None => T::zero(),
    };
    Ok(OscillatorState {
        t: t_i,
        eps: Complex::new(omega_i.powf(lit::<T>(-0.5)), T::zero()),
        deps: Complex::new(T::zero(), omega_i.sqrt()),
        phi: phi0,
        phi_tilde: T::zero(),
    })
}

/// State vector layout: [Re eps, Im eps, Re eps', Im eps', phi, phi_tilde].
type Y<T> = [T; 6];

fn rhs<T: Real>(profile: &FrequencyProfile<T>, t: T, y: &Y<T>) -> Y<T> {
    let w = profile
        .eval(t)
        .unwrap_or_else(|_| profile_edge_eval(profile, t));
    let w2 = w * w;
    [y[2], y[3], -w2 * y[0], -w2 * y[1], w.abs(), w]
}

/// Intermediate Runge-Kutta abscissae can poke a hair outside the domain at
/// the very last step; clamp to the boundary instead of failing.
fn profile_edge_eval<T: Real>(profile: &FrequencyProfile<T>, t: T) -> T {
    let (lo, hi) = profile.domain();
    let tc = t.max(lo).min(hi);
    profile.eval(tc).unwrap_or_else(|_| T::zero())
}

// Fehlberg 7(8) coefficients (13 stages). The 8th-order solution is
// propagated; the embedded 7th-order result drives the error estimate
// err = h * 41/840 * (k1 + k11 - k12 - k13).
const C: [f64; 13] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

const A: [[f64; 12]; 13] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.0,
        0.0,
        0.0,
        -53.0 / 6.0,
        704.0 / 45.0,
        -107.0 / 9.0,
        67.0 / 90.0,
        3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];

const B8: [f64; 13] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

/// Integrate with the standard initial conditions over [t_i, t_f].
pub fn integrate<T: Real>(
    profile: &FrequencyProfile<T>,
    t_i: T,
    t_f: T,
    tol: T,
) -> Result<Trajectory<T>> {
    if !(t_f > t_i) {
        return Err(Error::InvalidArgument(format!(
            "integrate requires t_f > t_i, got [{}, {}]",
            t_i.as_f64(),
            t_f.as_f64()
        )));
    }
    let y0 = initial_state(profile, t_i)?;
    continue_from(profile, y0, t_f, tol)
}

/// Integrate from an arbitrary oscillator state to `t_f` (either direction).
/// Used for time-reversal checks and restarts.
pub fn continue_from<T: Real>(
    profile: &FrequencyProfile<T>,
    start: OscillatorState<T>,
    t_f: T,
    tol: T,
) -> Result<Trajectory<T>> {
    let tol_f = tol.as_f64();
    if !(1e-14..=1e-6).contains(&tol_f) {
        return Err(Error::ToleranceOutOfRange {
            tol: tol_f,
            lo: 1e-14,
            hi: 1e-6,
        });
    }
    let t_i = start.t;
    let forward = t_f > t_i;
    let dir = if forward { T::one() } else { -T::one() };
    let span = (t_f - t_i).abs();

    let mut breakpoints: Vec<T> = profile
        .breakpoints()
        .into_iter()
        .filter(|&p| {
            if forward {
                p > t_i && p < t_f
            } else {
                p < t_i && p > t_f
            }
        })
        .collect();
    if !forward {
        breakpoints.reverse();
    }
    let mut next_break = 0usize;

    let mut y: Y<T> = [
        start.eps.re,
        start.eps.im,
        start.deps.re,
        start.deps.im,
        start.phi,
        start.phi_tilde,
    ];
    let mut t = t_i;
    let mut samples: Vec<Sample<T>> = Vec::new();
    let push_sample = |samples: &mut Vec<Sample<T>>, profile: &FrequencyProfile<T>, t: T, y: &Y<T>| {
        let w = profile_edge_eval(profile, t);
        samples.push(Sample {
            state: OscillatorState {
                t,
                eps: Complex::new(y[0], y[1]),
                deps: Complex::new(y[2], y[3]),
                phi: y[4],
                phi_tilde: y[5],
            },
            abs_omega: w.abs(),
            omega: w,
        });
    };
    push_sample(&mut samples, profile, t, &y);
    let mut max_resid = samples[0].state.wronskian_residual();
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    // Interpolation-driven step cap: cubic Hermite dense output needs
    // |omega| h small enough that (omega h)^4 / 384 stays below ~1e-9.
    let cap_phase = lit::<T>(0.04);
    let step_cap = |profile: &FrequencyProfile<T>, t: T| -> T {
        let w = profile_edge_eval(profile, t);
        let wd = profile
            .eval_derivative(t)
            .unwrap_or_else(|_| T::zero());
        let scale = w.abs().max(wd.abs().sqrt()).max(T::one() / span.max(T::one()));
        cap_phase / scale
    };

    let mut h = step_cap(profile, t).min(span) * dir;
    let atol = tol;
    let rtol = tol;
    let mut ks: [Y<T>; 13] = [[T::zero(); 6]; 13];

    loop {
        if (t - t_f).abs() <= lit::<T>(1e-14) * (T::one() + t_f.abs()) {
            break;
        }
        // Clamp to the next breakpoint and the endpoint.
        let mut target = t_f;
        if next_break < breakpoints.len() {
            let b = breakpoints[next_break];
            if (b - t) * dir > T::zero() {
                target = b;
            }
        }
        let cap = step_cap(profile, t) * dir;
        if h.abs() > cap.abs() {
            h = cap;
        }
        if ((t + h) - target) * dir > T::zero() {
            h = target - t;
        }
        let h_min = lit::<T>(1e3) * T::epsilon() * (T::one() + t.abs());
        if h.abs() < h_min {
            // Reached a breakpoint exactly; advance past it.
            if next_break < breakpoints.len()
                && (breakpoints[next_break] - t).abs() <= h_min
            {
                next_break += 1;
                continue;
            }
            // Within roundoff of the endpoint: close the gap with a single
            // explicit micro-step (truncation error ~h^2 is far below tol).
            if (t_f - t).abs() <= h_min {
                let hh = t_f - t;
                let w = profile_edge_eval(profile, t);
                y = [
                    y[0] + y[2] * hh,
                    y[1] + y[3] * hh,
                    y[2] - w * w * y[0] * hh,
                    y[3] - w * w * y[1] * hh,
                    y[4] + w.abs() * hh,
                    y[5] + w * hh,
                ];
                t = t_f;
                push_sample(&mut samples, profile, t, &y);
                break;
            }
            return Err(step_underflow(t, &y));
        }

        // One RKF78 step.
        ks[0] = rhs(profile, t, &y);
        for s in 1..13 {
            let mut ys = y;
            for (j, yj) in ys.iter_mut().enumerate() {
                let mut acc = T::zero();
                for (i, k) in ks.iter().enumerate().take(s) {
                    let a = A[s][i];
                    if a != 0.0 {
                        acc = acc + lit::<T>(a) * k[j];
                    }
                }
                *yj = *yj + h * acc;
            }
            ks[s] = rhs(profile, t + lit::<T>(C[s]) * h, &ys);
        }
        let mut y8 = y;
        for (j, yj) in y8.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (i, k) in ks.iter().enumerate() {
                if B8[i] != 0.0 {
                    acc = acc + lit::<T>(B8[i]) * k[j];
                }
            }
            *yj = *yj + h * acc;
        }
        // Embedded error estimate.
        let mut err = T::zero();
        let efac = lit::<T>(41.0 / 840.0);
        for j in 0..6 {
            let e = h * efac * (ks[0][j] + ks[10][j] - ks[11][j] - ks[12][j]);
            let scale = atol + rtol * y[j].abs().max(y8[j].abs());
            let r = (e / scale).abs();
            if r > err {
                err = r;
            }
        }

        if err <= T::one() {
            t = t + h;
            y = y8;
            accepted += 1;
            push_sample(&mut samples, profile, t, &y);
            let r = samples.last().unwrap().state.wronskian_residual();
            if r > max_resid {
                max_resid = r;
            }
            if next_break < breakpoints.len()
                && (t - breakpoints[next_break]).abs()
                    <= lit::<T>(1e-12) * (T::one() + t.abs())
            {
                next_break += 1;
            }
        } else {
            rejected += 1;
            if rejected > 100_000 {
                return Err(step_underflow(t, &y));
            }
        }
        // PI-free classical step-size update for an order-8 method.
        let order_root = lit::<T>(1.0 / 8.0);
        let fac = lit::<T>(0.9) * err.max(lit::<T>(1e-10)).powf(-order_root);
        let fac = fac.max(lit::<T>(0.2)).min(lit::<T>(5.0));
        h = h * fac;
    }

    // Crossing bookkeeping from the profile's declared zeros.
    let (lo, hi) = if forward { (t_i, t_f) } else { (t_f, t_i) };
    let zeros = profile.zeros_in(lo, hi);
    let mut crossings = Vec::with_capacity(zeros.len());
    if let Some(first) = zeros.first() {
        for z in &zeros {
            crossings.push(CrossingEvent {
                t: z.t,
                phase: profile.phase_integral(first.t, z.t, false)?,
                kind: z.kind,
            });
        }
    }
    if !forward {
        samples.reverse();
    }

    Ok(Trajectory {
        profile: profile.clone(),
        samples,
        crossings,
        max_wronskian_residual: max_resid,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

fn step_underflow<T: Real>(t: T, y: &Y<T>) -> Error {
    Error::StepSizeUnderflow {
        t: t.as_f64(),
        eps_re: y[0].as_f64(),
        eps_im: y[1].as_f64(),
        deps_re: y[2].as_f64(),
        deps_im: y[3].as_f64(),
    }
}

impl<T: Real> Trajectory<T> {
    pub fn profile(&self) -> &FrequencyProfile<T> {
        &self.profile
    }

    pub fn t_start(&self) -> T {
        self.samples.first().unwrap().state.t
    }

    pub fn t_end(&self) -> T {
        self.samples.last().unwrap().state.t
    }

    pub fn initial(&self) -> OscillatorState<T> {
        self.samples.first().unwrap().state
    }

    pub fn terminal(&self) -> OscillatorState<T> {
        self.samples.last().unwrap().state
    }

    pub fn sample_states(&self) -> impl Iterator<Item = &OscillatorState<T>> {
        self.samples.iter().map(|s| &s.state)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Interpolated state at time t (cubic Hermite on each component; raw
    /// values, no Wronskian re-normalization).
    pub fn state_at(&self, t: T) -> Result<OscillatorState<T>> {
        let t0 = self.t_start();
        let t1 = self.t_end();
        let slack = lit::<T>(1e-12) * (T::one() + t.abs());
        if t < t0 - slack || t > t1 + slack {
            return Err(Error::OutOfDomain {
                t: t.as_f64(),
                lo: t0.as_f64(),
                hi: t1.as_f64(),
            });
        }
        let idx = match self
            .samples
            .binary_search_by(|s| s.state.t.partial_cmp(&t).unwrap())
        {
            Ok(i) => return Ok(self.samples[i].state),
            Err(i) => i.clamp(1, self.samples.len() - 1),
        };
        let a = &self.samples[idx - 1];
        let b = &self.samples[idx];
        let h = b.state.t - a.state.t;
        let s = (t - a.state.t) / h;

        let hermite = |y0: T, d0: T, y1: T, d1: T| -> T {
            let s2 = s * s;
            let s3 = s2 * s;
            let h00 = lit::<T>(2.0) * s3 - lit::<T>(3.0) * s2 + T::one();
            let h10 = s3 - lit::<T>(2.0) * s2 + s;
            let h01 = -lit::<T>(2.0) * s3 + lit::<T>(3.0) * s2;
            let h11 = s3 - s2;
            h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
        };

        let wa2 = a.omega * a.omega;
        let wb2 = b.omega * b.omega;
        let eps = Complex::new(
            hermite(a.state.eps.re, a.state.deps.re, b.state.eps.re, b.state.deps.re),
            hermite(a.state.eps.im, a.state.deps.im, b.state.eps.im, b.state.deps.im),
        );
        let deps = Complex::new(
            hermite(
                a.state.deps.re,
                -wa2 * a.state.eps.re,
                b.state.deps.re,
                -wb2 * b.state.eps.re,
            ),
            hermite(
                a.state.deps.im,
                -wa2 * a.state.eps.im,
                b.state.deps.im,
                -wb2 * b.state.eps.im,
            ),
        );
        let phi = hermite(a.state.phi, a.abs_omega, b.state.phi, b.abs_omega);
        let phi_tilde = hermite(a.state.phi_tilde, a.omega, b.state.phi_tilde, b.omega);
        Ok(OscillatorState {
            t,
            eps,
            deps,
            phi,
            phi_tilde,
        })
    }

    /// Adiabaticity parameter |d omega/dt| / omega^2 at time t.
    pub fn adiabaticity(&self, t: T) -> Result<T> {
        let w = self.profile.eval(t)?;
        if w == T::zero() {
            return Err(Error::SingularFrequency { t: t.as_f64() });
        }
        Ok(self.profile.eval_derivative(t)?.abs() / (w * w))
    }
}
