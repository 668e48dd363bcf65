//! Special-function kernel: generalized Laguerre and Jacobi polynomials,
//! log-factorial arithmetic, geometric moment sums, and the closed-form
//! integrals of Laguerre squares used by the observable formulas.
//!
//! Probability prefactors downstream are assembled in log space, so the
//! central primitive here is [`ln_gamma`] together with the scaled Jacobi
//! evaluation [`jacobi_ln`].

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Natural log of the Gamma function for x > 0.
///
/// Stirling's series after shifting the argument above 12; accurate to
/// ~1e-14 relative in f64 over the range used here (integer arguments up
/// to 1e6 and beyond).
pub fn ln_gamma<T: Real>(x: T) -> T {
    assert!(x > T::zero(), "ln_gamma requires a positive argument");
    let mut acc = T::zero();
    let mut z = x;
    let twelve = lit::<T>(12.0);
    while z < twelve {
        acc = acc - z.ln();
        z = z + T::one();
    }
    // Bernoulli-number coefficients B_{2k} / (2k (2k-1)).
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let half = lit::<T>(0.5);
    let ln_sqrt_two_pi = lit::<T>(0.918_938_533_204_672_74);
    let mut series = T::zero();
    let inv_z2 = (T::one() / z) * (T::one() / z);
    let mut power = T::one() / z;
    for c in COEFFS {
        series = series + lit::<T>(c) * power;
        power = power * inv_z2;
    }
    acc + (z - half) * z.ln() - z + ln_sqrt_two_pi + series
}

/// ln(n!) via the log-Gamma function.
pub fn log_factorial<T: Real>(n: u64) -> T {
    if n <= 1 {
        return T::zero();
    }
    ln_gamma(lit::<T>(n as f64 + 1.0))
}

/// Signed sum of log-factorials: sum of `sign * ln(arg!)`.
///
/// Keeps factorial ratios finite where the raw factorials overflow.
pub fn log_factorial_ratio<T: Real>(terms: &[(i8, u64)]) -> Result<T> {
    let mut acc = T::zero();
    for &(sign, arg) in terms {
        let term: T = log_factorial(arg);
        match sign {
            1 => acc = acc + term,
            -1 => acc = acc - term,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "log_factorial_ratio sign must be +-1, got {other}"
                )))
            }
        }
    }
    Ok(acc)
}

/// Generalized Laguerre polynomial L_n^(alpha)(x) by the three-term
/// recurrence in the degree.
pub fn laguerre<T: Real>(n: u32, alpha: T, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut curr = T::one() + alpha - x;
    for j in 2..=n {
        let jf = lit::<T>(j as f64);
        let next = ((lit::<T>(2.0 * j as f64 - 1.0) + alpha - x) * curr
            - (jf - T::one() + alpha) * prev)
            / jf;
        prev = curr;
        curr = next;
    }
    curr
}

/// Jacobi polynomial P_n^(a,b)(x) by the degree recurrence.
pub fn jacobi<T: Real>(n: u32, a: T, b: T, x: T) -> T {
    let v = jacobi_ln(n, a, b, x);
    v.value()
}

/// Sign and log-magnitude of a scaled quantity.
#[derive(Debug, Clone, Copy)]
pub struct LogScaled<T> {
    /// ln |value|; negative infinity encodes an exact zero.
    pub ln_abs: T,
    /// -1, 0 or +1.
    pub sign: i8,
}

impl<T: Real> LogScaled<T> {
    pub fn zero() -> Self {
        LogScaled {
            ln_abs: T::neg_infinity(),
            sign: 0,
        }
    }

    pub fn value(self) -> T {
        if self.sign == 0 {
            T::zero()
        } else {
            let v = self.ln_abs.exp();
            if self.sign > 0 {
                v
            } else {
                -v
            }
        }
    }
}

/// Jacobi polynomial with overflow-guarded scaling: returns sign and
/// ln |P_n^(a,b)(x)| so that huge degrees or parameters stay representable.
pub fn jacobi_ln<T: Real>(n: u32, a: T, b: T, x: T) -> LogScaled<T> {
    let rescale_above = lit::<T>(1e120);
    if n == 0 {
        return LogScaled {
            ln_abs: T::zero(),
            sign: 1,
        };
    }
    let half = lit::<T>(0.5);
    let mut prev = T::one();
    let mut curr = (a + T::one()) + (a + b + lit::<T>(2.0)) * (x - T::one()) * half;
    let mut ln_scale = T::zero();
    for j in 2..=n {
        let jf = lit::<T>(j as f64);
        let two_j_ab = lit::<T>(2.0) * jf + a + b;
        let c0 = lit::<T>(2.0) * jf * (jf + a + b) * (two_j_ab - lit::<T>(2.0));
        let c1 = (two_j_ab - T::one())
            * ((two_j_ab * (two_j_ab - lit::<T>(2.0))) * x + a * a - b * b);
        let c2 = lit::<T>(2.0) * (jf + a - T::one()) * (jf + b - T::one()) * two_j_ab;
        let next = (c1 * curr - c2 * prev) / c0;
        prev = curr;
        curr = next;
        let mag = curr.abs().max(prev.abs());
        if mag > rescale_above {
            prev = prev / mag;
            curr = curr / mag;
            ln_scale = ln_scale + mag.ln();
        }
    }
    if curr == T::zero() {
        LogScaled::zero()
    } else {
        LogScaled {
            ln_abs: curr.abs().ln() + ln_scale,
            sign: if curr > T::zero() { 1 } else { -1 },
        }
    }
}

/// Closed forms of sum_k [(m+k)!/(m! k!)] k^order x^k for order 0, 1, 2.
///
/// Order 0 is the negative-binomial generating identity; orders 1 and 2
/// follow from term-wise differentiation.
pub fn geometric_moment_sum<T: Real>(m: u32, x: T, order: u8) -> Result<T> {
    if x < T::zero() || x >= T::one() {
        return Err(Error::InvalidArgument(format!(
            "geometric_moment_sum requires 0 <= x < 1, got {}",
            x.as_f64()
        )));
    }
    let mf = lit::<T>(m as f64);
    let one = T::one();
    let omx = one - x;
    match order {
        0 => Ok(omx.powi(-(m as i32) - 1)),
        1 => Ok((mf + one) * x * omx.powi(-(m as i32) - 2)),
        2 => Ok((mf + one) * x * (one + (mf + one) * x) * omx.powi(-(m as i32) - 3)),
        other => Err(Error::InvalidArgument(format!(
            "geometric_moment_sum order must be 0, 1 or 2, got {other}"
        ))),
    }
}

/// ln of the closed-form integral I_j = int_0^inf x^(a+j) e^-x [L_n^(a)(x)]^2 dx
/// for j = 1, 2.
pub fn laguerre_square_integral_ln<T: Real>(j: u8, n: u32, a: u32) -> Result<T> {
    let bracket: f64 = match j {
        1 => 2.0 * n as f64 + a as f64 + 1.0,
        2 => 6.0 * n as f64 * (n as f64 + a as f64 + 1.0) + (a as f64 + 1.0) * (a as f64 + 2.0),
        other => {
            return Err(Error::InvalidArgument(format!(
                "laguerre_square_integral j must be 1 or 2, got {other}"
            )))
        }
    };
    let ratio: T = log_factorial_ratio(&[(1, (n + a) as u64), (-1, n as u64)])?;
    Ok(ratio + lit::<T>(bracket.ln()))
}

/// Closed-form integral I_j in plain form (may overflow for very large n, a;
/// use the `_ln` variant for those).
pub fn laguerre_square_integral<T: Real>(j: u8, n: u32, a: u32) -> Result<T> {
    Ok(laguerre_square_integral_ln::<T>(j, n, a)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn binom(n: i64, k: i64) -> BigRational {
        let mut acc = BigRational::from(BigInt::from(1));
        for i in 0..k {
            acc *= rat(n - i, i + 1);
        }
        acc
    }

    /// Exact rational Laguerre via the finite hypergeometric sum.
    fn laguerre_exact(n: i64, alpha: i64, x: BigRational) -> BigRational {
        let mut acc = BigRational::from(BigInt::from(0));
        let mut fact = BigRational::from(BigInt::from(1));
        for k in 0..=n {
            if k > 0 {
                fact *= rat(k, 1);
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            acc += rat(sign, 1) * binom(n + alpha, n - k) * x.pow(k as i32) / fact.clone();
        }
        acc
    }

    /// Exact rational Jacobi via the binomial double sum.
    fn jacobi_exact(n: i64, a: i64, b: i64, x: BigRational) -> BigRational {
        let two = rat(2, 1);
        let mut acc = BigRational::from(BigInt::from(0));
        for s in 0..=n {
            acc += binom(n + a, s)
                * binom(n + b, n - s)
                * (x.clone() - rat(1, 1)).pow((n - s) as i32)
                * (x.clone() + rat(1, 1)).pow(s as i32);
        }
        acc / two.pow(n as i32)
    }

    fn to_f64(r: &BigRational) -> f64 {
        let n = r.numer().to_string().parse::<f64>().unwrap_or_else(|_| {
            // Fall back through string-free path for very large ints.
            f64::INFINITY
        });
        let d = r.denom().to_string().parse::<f64>().unwrap();
        n / d
    }

    #[test]
    fn ln_gamma_against_statrs() {
        for &x in &[0.5, 1.0, 2.0, 3.5, 11.25, 12.0, 42.0, 171.6, 1e3, 1e6] {
            let mine: f64 = ln_gamma(x);
            let reference = statrs::function::gamma::ln_gamma(x);
            let denom = reference.abs().max(1.0);
            assert!(
                ((mine - reference) / denom).abs() < 1e-13,
                "x={x}: {mine} vs {reference}"
            );
        }
    }

    #[test]
    fn log_factorial_ratio_examples() {
        let zero: f64 = log_factorial_ratio(&[(1, 0)]).unwrap();
        assert_eq!(zero, 0.0);
        let ln10: f64 = log_factorial_ratio(&[(1, 10), (-1, 9)]).unwrap();
        assert!((ln10 - 10.0f64.ln()).abs() < 1e-13);
        let big: f64 = log_factorial_ratio(&[(1, 170)]).unwrap();
        assert!(big.is_finite());
        // 170! itself is at the edge of f64; 171! overflows.
        let overflow: f64 = log_factorial_ratio(&[(1, 171)]).unwrap();
        assert!(overflow.exp().is_infinite());
        assert!(big.exp().is_finite());
    }

    #[test]
    fn log_factorial_exactness_large_args() {
        // Oracle: statrs log-gamma.
        for &n in &[1u64, 7, 100, 10_000, 1_000_000] {
            let mine: f64 = log_factorial(n);
            let reference = statrs::function::gamma::ln_gamma(n as f64 + 1.0);
            assert!(((mine - reference) / reference.abs().max(1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 3.0f64, 1.7), 1.0);
        let (alpha, x) = (2.5f64, 0.3);
        assert!((laguerre(1, alpha, x) - (alpha + 1.0 - x)).abs() < 1e-15);
        // Oracle: L_2(x) = 1 - 2x + x^2/2 at x = 2 gives -1.
        let expect = 1.0 - 2.0 * 2.0 + 2.0f64 * 2.0 / 2.0;
        assert!((laguerre(2, 0.0f64, 2.0) - expect).abs() < 1e-14);
        assert_eq!(expect, -1.0);
    }

    #[test]
    fn jacobi_low_orders() {
        assert_eq!(jacobi(0, 1.0f64, 2.0, 0.4), 1.0);
        let (a, b, x) = (1.5f64, 0.5, -0.3);
        let expect = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
        assert!((jacobi(1, a, b, x) - expect).abs() < 1e-14);
    }

    #[test]
    fn jacobi_endpoint_identities() {
        for n in 0u32..=12 {
            for a in 0u32..=8 {
                for b in 0u32..=8 {
                    let at_one = jacobi(n, a as f64, b as f64, 1.0);
                    let ln_binom: f64 = log_factorial_ratio(&[
                        (1, (n + a) as u64),
                        (-1, n as u64),
                        (-1, a as u64),
                    ])
                    .unwrap();
                    let expect = ln_binom.exp();
                    assert!(
                        ((at_one - expect) / expect).abs() < 1e-11,
                        "P_{n}^{a},{b}(1)"
                    );

                    let at_minus_one = jacobi(n, a as f64, b as f64, -1.0);
                    let ln_binom_b: f64 = log_factorial_ratio(&[
                        (1, (n + b) as u64),
                        (-1, n as u64),
                        (-1, b as u64),
                    ])
                    .unwrap();
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let expect_b = sign * ln_binom_b.exp();
                    assert!(
                        ((at_minus_one - expect_b) / expect_b.abs()).abs() < 1e-11,
                        "P_{n}^{a},{b}(-1)"
                    );
                }
            }
        }
    }

    #[test]
    fn laguerre_matches_exact_rational_sum() {
        let x = rat(3, 2); // x = 1.5
        let xf = 1.5f64;
        for n in 0i64..=12 {
            for alpha in 0i64..=12 {
                let exact = to_f64(&laguerre_exact(n, alpha, x.clone()));
                let mine = laguerre(n as u32, alpha as f64, xf);
                let denom = exact.abs().max(1.0);
                assert!(
                    ((mine - exact) / denom).abs() < 1e-11,
                    "L_{n}^{alpha}: {mine} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn jacobi_matches_exact_rational_sum() {
        for &(num, den) in &[(0i64, 1i64), (-1, 2), (3, 5), (-9, 10)] {
            let x = rat(num, den);
            let xf = num as f64 / den as f64;
            for n in 0i64..=12 {
                for a in 0i64..=12 {
                    for b in (0i64..=12).step_by(3) {
                        let exact = to_f64(&jacobi_exact(n, a, b, x.clone()));
                        let mine = jacobi(n as u32, a as f64, b as f64, xf);
                        let denom = exact.abs().max(1.0);
                        assert!(
                            ((mine - exact) / denom).abs() < 1e-11,
                            "P_{n}^({a},{b})({xf}): {mine} vs {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_ln_agrees_with_plain() {
        let v = jacobi_ln(25, 40.0f64, 7.0, -0.5);
        let plain = jacobi(25, 40.0f64, 7.0, -0.5);
        assert!(((v.value() - plain) / plain.abs()).abs() < 1e-12);
    }

    #[test]
    fn geometric_moment_sums() {
        assert!((geometric_moment_sum(0, 0.5f64, 0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(geometric_moment_sum(2, 0.0f64, 0).unwrap(), 1.0);
        // Brute-force partial-sum oracle.
        for &(m, x, order) in &[(1u32, 0.25f64, 1u8), (3, 0.6, 2), (0, 0.5, 1), (5, 0.4, 0)] {
            let mut acc = 0.0f64;
            let mut binom_ln = 0.0f64;
            for k in 0..10_000u64 {
                if k > 0 {
                    binom_ln += ((m as f64 + k as f64) / k as f64).ln();
                }
                acc += binom_ln.exp() * (k as f64).powi(order as i32) * x.powi(k as i32);
            }
            let closed = geometric_moment_sum(m, x, order).unwrap();
            assert!(
                ((closed - acc) / acc.max(1.0)).abs() < 1e-12,
                "m={m} x={x} order={order}: {closed} vs {acc}"
            );
        }
        assert!(geometric_moment_sum(1, 1.0f64, 0).is_err());
        assert!(geometric_moment_sum(1, -0.1f64, 0).is_err());
    }

    #[test]
    fn laguerre_square_integral_trivial() {
        assert!((laguerre_square_integral::<f64>(1, 0, 0).unwrap() - 1.0).abs() < 1e-13);
        assert!((laguerre_square_integral::<f64>(2, 0, 0).unwrap() - 2.0).abs() < 1e-13);
        // int x e^-x (1-x)^2 dx = 3, quadrature oracle below.
        let numeric = quad::integrate_rel(
            |x: f64| x * (-x).exp() * (1.0 - x) * (1.0 - x),
            0.0,
            60.0,
            1e-12,
            1e-15,
        );
        let closed = laguerre_square_integral::<f64>(1, 1, 0).unwrap();
        assert!((closed - 3.0).abs() < 1e-12);
        assert!((numeric - closed).abs() < 1e-10);
    }

    #[test]
    fn laguerre_square_integral_vs_quadrature_grid() {
        for &n in &[0u32, 1, 2, 5, 12, 20] {
            for &a in &[0u32, 1, 3, 10, 20] {
                for j in [1u8, 2] {
                    let closed = laguerre_square_integral::<f64>(j, n, a).unwrap();
                    let mode = (a + j as u32 + 2 * n) as f64;
                    let upper = mode + 30.0 + 15.0 * (mode + 1.0).sqrt();
                    let numeric = quad::integrate_rel(
                        |x: f64| {
                            let l = laguerre(n, a as f64, x);
                            x.powi((a + j as u32) as i32) * (-x).exp() * l * l
                        },
                        0.0,
                        upper,
                        1e-11,
                        1e-15,
                    );
                    assert!(
                        ((closed - numeric) / closed).abs() < 1e-8,
                        "j={j} n={n} a={a}: {closed} vs {numeric}"
                    );
                }
            }
        }
    }
}
