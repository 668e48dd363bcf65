//! Small adaptive quadrature helper used for phase integrals and
//! test oracles.

use crate::scalar::{lit, Real};

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// `tol` is an absolute tolerance on the result; callers wanting relative
/// accuracy should scale it by a magnitude estimate first (see
/// [`integrate_rel`]).
pub fn integrate_abs<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T) -> T {
    if a == b {
        return T::zero();
    }
    let two = lit::<T>(2.0);
    let m = (a + b) / two;
    let fa = f(a);
    let fb = f(b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&mut f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Adaptive Simpson quadrature with a relative tolerance. A first coarse pass
/// sets the magnitude scale; an absolute floor protects integrals near zero.
pub fn integrate_rel<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    rel_tol: T,
    abs_floor: T,
) -> T {
    if a == b {
        return T::zero();
    }
    // Coarse magnitude estimate on a fixed grid, so a vanishing midpoint
    // cannot fool the scale.
    let n = 32;
    let h = (b - a) / lit::<T>(n as f64);
    let mut scale = T::zero();
    for i in 0..=n {
        let t = a + h * lit::<T>(i as f64);
        let v = f(t).abs();
        if v > scale {
            scale = v;
        }
    }
    let tol = (rel_tol * scale * (b - a).abs()).max(abs_floor);
    integrate_abs(f, a, b, tol)
}

#[inline]
fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / lit::<T>(6.0) * (fa + lit::<T>(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let two = lit::<T>(2.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= lit::<T>(15.0) * tol {
        return left + right + delta / lit::<T>(15.0);
    }
    let half_tol = tol / two;
    recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate_abs(|x: f64| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-11);
    }

    #[test]
    fn oscillatory() {
        let v = integrate_rel(|x: f64| (10.0 * x).sin(), 0.0, 1.0, 1e-11, 1e-14);
        let exact = (1.0 - (10.0f64).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn decaying_exponential() {
        let v = integrate_rel(|x: f64| (-x).exp(), 0.0, 50.0, 1e-11, 1e-14);
        assert!((v - 1.0).abs() < 1e-10);
    }
}
