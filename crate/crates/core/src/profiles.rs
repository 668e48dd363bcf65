//! Time-dependent Larmor frequency families: evaluation, differentiation,
//! zero location and phase integrals.
//!
//! Profiles are immutable after construction; every operation is pure.

use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::{lit, Real};

/// Whether a frequency zero changes the sign of omega or only touches zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    SignChange,
    Tangency,
}

/// A located zero of the frequency profile.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyZero<T> {
    pub t: T,
    pub kind: ZeroKind,
}

/// Natural cubic spline through strictly increasing knots.
#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    ts: Vec<T>,
    ys: Vec<T>,
    /// Second derivatives at the knots (natural boundary conditions).
    m2: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn new(knots: &[(T, T)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidProfile(
                "sampled profile needs at least two knots".into(),
            ));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidProfile(
                    "sampled knots must be strictly increasing in t".into(),
                ));
            }
        }
        let n = knots.len();
        let ts: Vec<T> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<T> = knots.iter().map(|k| k.1).collect();
        // Thomas algorithm for the natural-spline tridiagonal system.
        let mut m2 = vec![T::zero(); n];
        if n > 2 {
            let mut sub = vec![T::zero(); n];
            let mut diag = vec![T::zero(); n];
            let mut sup = vec![T::zero(); n];
            let mut rhs = vec![T::zero(); n];
            for i in 1..n - 1 {
                let h0 = ts[i] - ts[i - 1];
                let h1 = ts[i + 1] - ts[i];
                sub[i] = h0;
                diag[i] = lit::<T>(2.0) * (h0 + h1);
                sup[i] = h1;
                rhs[i] = lit::<T>(6.0)
                    * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for i in 2..n - 1 {
                let w = sub[i] / diag[i - 1];
                diag[i] = diag[i] - w * sup[i - 1];
                rhs[i] = rhs[i] - w * rhs[i - 1];
            }
            for i in (1..n - 1).rev() {
                let upper = if i + 1 < n - 1 { sup[i] * m2[i + 1] } else { T::zero() };
                m2[i] = (rhs[i] - upper) / diag[i];
            }
        }
        Ok(CubicSpline { ts, ys, m2 })
    }

    pub fn domain(&self) -> (T, T) {
        (self.ts[0], *self.ts.last().unwrap())
    }

    fn segment(&self, t: T) -> usize {
        match self
            .ts
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(self.ts.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.ts.len() - 2),
        }
    }

    pub fn eval(&self, t: T) -> T {
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let a = (self.ts[i + 1] - t) / h;
        let b = (t - self.ts[i]) / h;
        let six = lit::<T>(6.0);
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m2[i] + (b * b * b - b) * self.m2[i + 1]) * h * h / six
    }

    pub fn eval_derivative(&self, t: T) -> T {
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let a = (self.ts[i + 1] - t) / h;
        let b = (t - self.ts[i]) / h;
        let three = lit::<T>(3.0);
        let six = lit::<T>(6.0);
        (self.ys[i + 1] - self.ys[i]) / h
            + ((three * b * b - T::one()) * self.m2[i + 1] - (three * a * a - T::one()) * self.m2[i])
                * h
                / six
    }

    pub fn knot_times(&self) -> &[T] {
        &self.ts
    }
}

/// Parametric family of Larmor frequency curves omega(t).
#[derive(Debug, Clone)]
pub enum FrequencyProfile<T: Real> {
    /// omega(t) = omega0 (-t/tau)^k on [-tau, tau].
    PowerLaw { omega0: T, tau: T, k: u32 },
    /// omega(t) = (omega_f e^{kappa t} + omega_i) / (e^{kappa t} + 1).
    Tanh { omega_i: T, omega_f: T, kappa: T },
    Constant { omega: T },
    /// Contiguous segments (start, end, profile); assembled curve continuous.
    Piecewise { segments: Vec<(T, T, FrequencyProfile<T>)> },
    Sampled { spline: CubicSpline<T> },
    /// Inner profile evaluated at t - offset.
    Shifted { offset: T, inner: Box<FrequencyProfile<T>> },
    /// Sign-flipped inner profile.
    Negated { inner: Box<FrequencyProfile<T>> },
}

impl<T: Real> FrequencyProfile<T> {
    pub fn powerlaw(omega0: T, tau: T, k: u32) -> Result<Self> {
        if !(omega0 > T::zero()) || !(tau > T::zero()) {
            return Err(Error::InvalidProfile(
                "power-law profile requires omega0 > 0 and tau > 0".into(),
            ));
        }
        Ok(FrequencyProfile::PowerLaw { omega0, tau, k })
    }

    pub fn tanh_profile(omega_i: T, omega_f: T, kappa: T) -> Result<Self> {
        if !(kappa > T::zero()) {
            return Err(Error::InvalidProfile("tanh profile requires kappa > 0".into()));
        }
        Ok(FrequencyProfile::Tanh {
            omega_i,
            omega_f,
            kappa,
        })
    }

    pub fn constant(omega: T) -> Self {
        FrequencyProfile::Constant { omega }
    }

    pub fn sampled(knots: &[(T, T)]) -> Result<Self> {
        Ok(FrequencyProfile::Sampled {
            spline: CubicSpline::new(knots)?,
        })
    }

    pub fn shifted(offset: T, inner: FrequencyProfile<T>) -> Self {
        FrequencyProfile::Shifted {
            offset,
            inner: Box::new(inner),
        }
    }

    pub fn negated(inner: FrequencyProfile<T>) -> Self {
        FrequencyProfile::Negated {
            inner: Box::new(inner),
        }
    }

    /// Build a piecewise profile from (start, end, inner) segments, checking
    /// contiguity, domain coverage and continuity of the assembled curve.
    pub fn piecewise(segments: Vec<(T, T, FrequencyProfile<T>)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidProfile("piecewise profile needs segments".into()));
        }
        let cont_tol = lit::<T>(1e-12);
        for (a, b, seg) in &segments {
            if !(b > a) {
                return Err(Error::InvalidProfile(
                    "piecewise segment interval must have positive length".into(),
                ));
            }
            let (lo, hi) = seg.domain();
            if *a < lo || *b > hi {
                return Err(Error::InvalidProfile(
                    "piecewise segment interval exceeds inner profile domain".into(),
                ));
            }
        }
        for w in segments.windows(2) {
            let (_, b0, ref s0) = w[0];
            let (a1, _, ref s1) = w[1];
            if (b0 - a1).abs() > cont_tol * (T::one() + b0.abs()) {
                return Err(Error::InvalidProfile(
                    "piecewise segments must be contiguous".into(),
                ));
            }
            let left = s0.eval(b0)?;
            let right = s1.eval(a1)?;
            let scale = left.abs().max(right.abs()).max(T::one());
            if (left - right).abs() > cont_tol * scale {
                return Err(Error::InvalidProfile(format!(
                    "piecewise junction at t = {} is discontinuous ({} vs {})",
                    b0.as_f64(),
                    left.as_f64(),
                    right.as_f64()
                )));
            }
        }
        Ok(FrequencyProfile::Piecewise { segments })
    }

    /// Domain of definition; unbounded variants report infinities.
    pub fn domain(&self) -> (T, T) {
        match self {
            FrequencyProfile::PowerLaw { tau, .. } => (-*tau, *tau),
            FrequencyProfile::Tanh { .. } | FrequencyProfile::Constant { .. } => {
                (T::neg_infinity(), T::infinity())
            }
            FrequencyProfile::Piecewise { segments } => {
                (segments[0].0, segments[segments.len() - 1].1)
            }
            FrequencyProfile::Sampled { spline } => spline.domain(),
            FrequencyProfile::Shifted { offset, inner } => {
                let (lo, hi) = inner.domain();
                (lo + *offset, hi + *offset)
            }
            FrequencyProfile::Negated { inner } => inner.domain(),
        }
    }

    fn check_domain(&self, t: T) -> Result<()> {
        let (lo, hi) = self.domain();
        // Tiny slack so roundoff at the endpoints is not a hard error.
        let slack = lit::<T>(1e-12) * (T::one() + t.abs());
        if t < lo - slack || t > hi + slack {
            return Err(Error::OutOfDomain {
                t: t.as_f64(),
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        Ok(())
    }

    /// omega(t).
    pub fn eval(&self, t: T) -> Result<T> {
        self.check_domain(t)?;
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: T) -> T {
        match self {
            FrequencyProfile::PowerLaw { omega0, tau, k } => {
                *omega0 * (-t / *tau).powi(*k as i32)
            }
            FrequencyProfile::Tanh {
                omega_i,
                omega_f,
                kappa,
            } => {
                let z = *kappa * t;
                if z > T::zero() {
                    let e = (-z).exp();
                    (*omega_f + *omega_i * e) / (T::one() + e)
                } else {
                    let e = z.exp();
                    (*omega_f * e + *omega_i) / (e + T::one())
                }
            }
            FrequencyProfile::Constant { omega } => *omega,
            FrequencyProfile::Piecewise { segments } => {
                let seg = self.locate_segment(segments, t);
                seg.2.eval_unchecked(t)
            }
            FrequencyProfile::Sampled { spline } => spline.eval(t),
            FrequencyProfile::Shifted { offset, inner } => inner.eval_unchecked(t - *offset),
            FrequencyProfile::Negated { inner } => -inner.eval_unchecked(t),
        }
    }

    fn locate_segment<'a>(
        &self,
        segments: &'a [(T, T, FrequencyProfile<T>)],
        t: T,
    ) -> &'a (T, T, FrequencyProfile<T>) {
        for seg in segments {
            if t <= seg.1 {
                return seg;
            }
        }
        segments.last().unwrap()
    }

    /// d omega / dt.
    pub fn eval_derivative(&self, t: T) -> Result<T> {
        self.check_domain(t)?;
        Ok(self.eval_derivative_unchecked(t))
    }

    fn eval_derivative_unchecked(&self, t: T) -> T {
        match self {
            FrequencyProfile::PowerLaw { omega0, tau, k } => {
                if *k == 0 {
                    T::zero()
                } else {
                    -(lit::<T>(*k as f64) * *omega0 / *tau) * (-t / *tau).powi(*k as i32 - 1)
                }
            }
            FrequencyProfile::Tanh {
                omega_i,
                omega_f,
                kappa,
            } => {
                // logistic s = e^{kt}/(1+e^{kt}); omega' = kappa (w_f - w_i) s (1-s)
                let z = *kappa * t;
                let s = if z > T::zero() {
                    T::one() / (T::one() + (-z).exp())
                } else {
                    let e = z.exp();
                    e / (T::one() + e)
                };
                *kappa * (*omega_f - *omega_i) * s * (T::one() - s)
            }
            FrequencyProfile::Constant { .. } => T::zero(),
            FrequencyProfile::Piecewise { segments } => {
                let seg = self.locate_segment(segments, t);
                seg.2.eval_derivative_unchecked(t)
            }
            FrequencyProfile::Sampled { spline } => spline.eval_derivative(t),
            FrequencyProfile::Shifted { offset, inner } => {
                inner.eval_derivative_unchecked(t - *offset)
            }
            FrequencyProfile::Negated { inner } => -inner.eval_derivative_unchecked(t),
        }
    }

    /// All zeros of omega in the profile domain, sorted in time, each flagged
    /// as a sign change or a tangency.
    pub fn zeros(&self) -> Vec<FrequencyZero<T>> {
        let mut out = self.zeros_impl();
        out.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        out.dedup_by(|a, b| (a.t - b.t).abs() <= lit::<T>(1e-12) * (T::one() + b.t.abs()));
        out
    }

    fn zeros_impl(&self) -> Vec<FrequencyZero<T>> {
        match self {
            FrequencyProfile::PowerLaw { k, .. } => {
                if *k == 0 {
                    vec![]
                } else {
                    vec![FrequencyZero {
                        t: T::zero(),
                        kind: if *k % 2 == 1 {
                            ZeroKind::SignChange
                        } else {
                            ZeroKind::Tangency
                        },
                    }]
                }
            }
            FrequencyProfile::Tanh {
                omega_i,
                omega_f,
                kappa,
            } => {
                if *omega_i * *omega_f < T::zero() {
                    vec![FrequencyZero {
                        t: (-*omega_i / *omega_f).ln() / *kappa,
                        kind: ZeroKind::SignChange,
                    }]
                } else {
                    vec![]
                }
            }
            FrequencyProfile::Constant { .. } => vec![],
            FrequencyProfile::Piecewise { segments } => {
                let mut out = Vec::new();
                for (a, b, seg) in segments {
                    for z in seg.zeros_impl() {
                        let slack = lit::<T>(1e-12) * (T::one() + z.t.abs());
                        if z.t >= *a - slack && z.t <= *b + slack {
                            out.push(z);
                        }
                    }
                }
                out
            }
            FrequencyProfile::Sampled { spline } => self.sampled_zeros(spline),
            FrequencyProfile::Shifted { offset, inner } => inner
                .zeros_impl()
                .into_iter()
                .map(|z| FrequencyZero {
                    t: z.t + *offset,
                    kind: z.kind,
                })
                .collect(),
            FrequencyProfile::Negated { inner } => inner.zeros_impl(),
        }
    }

    /// Sign-change zeros of a sampled profile by scan plus bisection to
    /// |omega| < 1e-12 max|omega|.
    fn sampled_zeros(&self, spline: &CubicSpline<T>) -> Vec<FrequencyZero<T>> {
        let (lo, hi) = spline.domain();
        let n = 64 * (spline.knot_times().len().max(2) - 1);
        let h = (hi - lo) / lit::<T>(n as f64);
        let mut max_abs = T::zero();
        for i in 0..=n {
            let v = spline.eval(lo + h * lit::<T>(i as f64)).abs();
            if v > max_abs {
                max_abs = v;
            }
        }
        let target = lit::<T>(1e-12) * max_abs;
        let mut out = Vec::new();
        let mut prev_t = lo;
        let mut prev_v = spline.eval(lo);
        for i in 1..=n {
            let t = lo + h * lit::<T>(i as f64);
            let v = spline.eval(t);
            if prev_v == T::zero() {
                out.push(FrequencyZero {
                    t: prev_t,
                    kind: ZeroKind::Tangency,
                });
            } else if prev_v * v < T::zero() {
                // Bisection refinement.
                let (mut a, mut b, mut fa) = (prev_t, t, prev_v);
                for _ in 0..200 {
                    let m = (a + b) / lit::<T>(2.0);
                    let fm = spline.eval(m);
                    if fm.abs() <= target || (b - a).abs() < lit::<T>(1e-15) * (T::one() + m.abs())
                    {
                        a = m;
                        b = m;
                        break;
                    }
                    if fa * fm < T::zero() {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                out.push(FrequencyZero {
                    t: (a + b) / lit::<T>(2.0),
                    kind: ZeroKind::SignChange,
                });
            }
            prev_t = t;
            prev_v = v;
        }
        out
    }

    /// Zeros restricted to `[a, b]`.
    pub fn zeros_in(&self, a: T, b: T) -> Vec<FrequencyZero<T>> {
        self.zeros()
            .into_iter()
            .filter(|z| z.t >= a && z.t <= b)
            .collect()
    }

    /// Internal breakpoints (segment junctions, spline knots, zeros) that an
    /// integrator should not step across.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut pts: Vec<T> = match self {
            FrequencyProfile::Piecewise { segments } => {
                let mut v: Vec<T> = segments.iter().map(|s| s.0).collect();
                v.push(segments[segments.len() - 1].1);
                for (a, b, seg) in segments {
                    for p in seg.breakpoints() {
                        if p >= *a && p <= *b {
                            v.push(p);
                        }
                    }
                }
                v
            }
            FrequencyProfile::Sampled { spline } => spline.knot_times().to_vec(),
            FrequencyProfile::Shifted { offset, inner } => {
                inner.breakpoints().into_iter().map(|p| p + *offset).collect()
            }
            FrequencyProfile::Negated { inner } => inner.breakpoints(),
            _ => vec![],
        };
        pts.extend(self.zeros().into_iter().map(|z| z.t));
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() <= lit::<T>(1e-13) * (T::one() + b.abs()));
        pts
    }

    /// Phase integral over [a, b]: of |omega| when `signed` is false, of
    /// omega when `signed` is true. Relative accuracy 1e-10 or better.
    pub fn phase_integral(&self, a: T, b: T, signed: bool) -> Result<T> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if a == b {
            return Ok(T::zero());
        }
        if b < a {
            return Ok(-self.phase_integral(b, a, signed)?);
        }
        // Split at internal breakpoints so each piece is smooth.
        let mut cuts: Vec<T> = vec![a];
        for p in self.breakpoints() {
            if p > a && p < b {
                cuts.push(p);
            }
        }
        cuts.push(b);
        let rel = lit::<T>(1e-12);
        let floor = lit::<T>(1e-15);
        let mut total = T::zero();
        for w in cuts.windows(2) {
            let piece = quad::integrate_rel(
                |t| {
                    let v = self.eval_unchecked(t);
                    if signed {
                        v
                    } else {
                        v.abs()
                    }
                },
                w[0],
                w[1],
                rel,
                floor,
            );
            total = total + piece;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powerlaw_eval_examples() {
        let p = FrequencyProfile::powerlaw(1.0f64, 1.0, 1).unwrap();
        assert!((p.eval(-1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(p.eval(0.0).unwrap(), 0.0);
        assert!((p.eval(1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(p.eval(1.5).is_err());
        // even k does not flip sign
        let p2 = FrequencyProfile::powerlaw(2.0f64, 1.0, 2).unwrap();
        assert!(p2.eval(0.5).unwrap() > 0.0);
        assert!(p2.eval(-0.5).unwrap() > 0.0);
    }

    #[test]
    fn tanh_eval_examples() {
        let p = FrequencyProfile::tanh_profile(1.0f64, -1.0, 0.1).unwrap();
        assert!(p.eval(0.0).unwrap().abs() < 1e-15);
        let p2 = FrequencyProfile::tanh_profile(2.0f64, 1.0, 1.0).unwrap();
        assert!((p2.eval(1e4).unwrap() - 1.0).abs() < 1e-12);
        assert!((p2.eval(-1e4).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_examples() {
        let c = FrequencyProfile::constant(5.0f64);
        assert_eq!(c.eval_derivative(37.0).unwrap(), 0.0);
        let p = FrequencyProfile::powerlaw(1.0f64, 1.0, 1).unwrap();
        assert!((p.eval_derivative(0.0).unwrap() + 1.0).abs() < 1e-15);
        // Finite-difference oracle at step 1e-6.
        let t = FrequencyProfile::tanh_profile(1.0f64, -1.0, 2.0).unwrap();
        let h = 1e-6;
        let fd = (t.eval(h).unwrap() - t.eval(-h).unwrap()) / (2.0 * h);
        let an = t.eval_derivative(0.0).unwrap();
        assert!((an - fd).abs() < 1e-8, "{an} vs {fd}");
        assert!((an + 1.0).abs() < 1e-10);
    }

    #[test]
    fn derivative_matches_finite_differences_everywhere() {
        let profiles: Vec<FrequencyProfile<f64>> = vec![
            FrequencyProfile::powerlaw(3.0, 2.0, 3).unwrap(),
            FrequencyProfile::tanh_profile(1.5, -0.7, 0.4).unwrap(),
            FrequencyProfile::sampled(
                &(0..20)
                    .map(|i| {
                        let t = i as f64 * 0.5;
                        (t, (t * 0.7).sin() + 0.1 * t)
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap(),
        ];
        for p in &profiles {
            let (lo, hi) = p.domain();
            let lo = lo.max(-8.0);
            let hi = hi.min(8.0);
            for i in 1..40 {
                let t = lo + (hi - lo) * i as f64 / 40.0;
                let h = 1e-6 * (1.0 + t.abs());
                let fd = (p.eval(t + h).unwrap() - p.eval(t - h).unwrap()) / (2.0 * h);
                let an = p.eval_derivative(t).unwrap();
                let tol = 1e-8f64.max(1e-6 * an.abs()).max(1e-4 * h);
                assert!((an - fd).abs() < tol.max(1e-7), "t={t}: {an} vs {fd}");
            }
        }
    }

    #[test]
    fn zeros_examples() {
        let p = FrequencyProfile::powerlaw(1.0f64, 1.0, 1).unwrap();
        let z = p.zeros();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].t, 0.0);
        assert_eq!(z[0].kind, ZeroKind::SignChange);

        let p2 = FrequencyProfile::powerlaw(1.0f64, 1.0, 2).unwrap();
        assert_eq!(p2.zeros()[0].kind, ZeroKind::Tangency);

        let t1 = FrequencyProfile::tanh_profile(1.0f64, 2.0, 1.0).unwrap();
        assert!(t1.zeros().is_empty());
        let t2 = FrequencyProfile::tanh_profile(1.0f64, -1.0, 1.0).unwrap();
        let z2 = t2.zeros();
        assert_eq!(z2.len(), 1);
        assert!(z2[0].t.abs() < 1e-14);
        // asymmetric: zero at ln(-w_i/w_f)/kappa
        let t3 = FrequencyProfile::tanh_profile(3.0f64, -1.0, 0.5).unwrap();
        let z3 = t3.zeros();
        assert!((z3[0].t - (3.0f64).ln() / 0.5).abs() < 1e-12);
        assert!(t3.eval(z3[0].t).unwrap().abs() < 1e-14);
    }

    #[test]
    fn sampled_zero_refinement() {
        let knots: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let t = -2.0 + i as f64 * 0.1;
                (t, (t - 0.337).tanh())
            })
            .collect();
        let p = FrequencyProfile::sampled(&knots).unwrap();
        let z = p.zeros();
        assert_eq!(z.len(), 1);
        assert!(p.eval(z[0].t).unwrap().abs() < 1e-12);
    }

    #[test]
    fn phase_integral_examples() {
        let c = FrequencyProfile::constant(2.0f64);
        assert!((c.phase_integral(0.0, 3.0, false).unwrap() - 6.0).abs() < 1e-12);
        let p = FrequencyProfile::powerlaw(1.0f64, 1.0, 1).unwrap();
        assert!((p.phase_integral(-1.0, 1.0, false).unwrap() - 1.0).abs() < 1e-11);
        assert!(p.phase_integral(-1.0, 1.0, true).unwrap().abs() < 1e-11);
    }

    #[test]
    fn phase_integral_additive() {
        let p = FrequencyProfile::tanh_profile(1.3f64, -0.8, 0.7).unwrap();
        let (a, b, c) = (-6.0, 0.4, 9.0);
        let whole = p.phase_integral(a, c, false).unwrap();
        let split =
            p.phase_integral(a, b, false).unwrap() + p.phase_integral(b, c, false).unwrap();
        assert!((whole - split).abs() < 1e-10 * whole.abs().max(1.0));
    }

    #[test]
    fn piecewise_continuity_enforced() {
        let seg1 = FrequencyProfile::powerlaw(1.0f64, 1.0, 1).unwrap();
        let bad = FrequencyProfile::constant(0.5f64);
        assert!(FrequencyProfile::piecewise(vec![
            (-1.0, 1.0, seg1.clone()),
            (1.0, 2.0, bad)
        ])
        .is_err());
        let good = FrequencyProfile::constant(-1.0f64);
        let p = FrequencyProfile::piecewise(vec![(-1.0, 1.0, seg1), (1.0, 2.0, good)]).unwrap();
        let left = p.eval(1.0 - 1e-13).unwrap();
        let right = p.eval(1.0 + 1e-13).unwrap();
        assert!((left - right).abs() < 1e-12);
        assert_eq!(p.zeros().len(), 1);
    }

    #[test]
    fn shifted_negated_composition() {
        // Rising linear crossing at t = 2 built from the power-law family.
        let inner = FrequencyProfile::powerlaw(1.0f64, 1.0, 1).unwrap();
        let seg2 = FrequencyProfile::negated(FrequencyProfile::shifted(2.0, inner));
        assert!((seg2.eval(1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((seg2.eval(3.0).unwrap() - 1.0).abs() < 1e-15);
        let z = seg2.zeros();
        assert_eq!(z.len(), 1);
        assert!((z[0].t - 2.0).abs() < 1e-14);
    }
}
