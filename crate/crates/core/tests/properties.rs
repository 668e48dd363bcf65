//! Property-based tests for the algebraic invariants of the library.

use num_complex::Complex;
use proptest::prelude::*;

use larmor_flip::adiabatic::{self, BogoliubovPair};
use larmor_flip::observables::{w_bounds, w_of_t};
use larmor_flip::profiles::FrequencyProfile;
use larmor_flip::spectra::{self, FockLabel};

/// A pair satisfying |u+|^2 - |u-|^2 = 1 with arbitrary phases.
fn arb_pair() -> impl Strategy<Value = BogoliubovPair<f64>> {
    (0.0f64..1.5, 0.0f64..std::f64::consts::TAU, 0.0f64..std::f64::consts::TAU).prop_map(
        |(u, theta_p, theta_m)| BogoliubovPair {
            u_plus: Complex::from_polar((1.0 + u * u).sqrt(), theta_p),
            u_minus: Complex::from_polar(u, theta_m),
        },
    )
}

proptest! {
    #[test]
    fn compose_preserves_identity(
        pairs in proptest::collection::vec(arb_pair(), 1..6),
        gaps in proptest::collection::vec(0.0f64..10.0, 5),
    ) {
        let mut phases = Vec::new();
        let mut acc = 0.0;
        for g in gaps.iter().take(pairs.len() - 1) {
            acc += g;
            phases.push(acc);
        }
        let composed = adiabatic::compose(&pairs, &phases).unwrap();
        let scale = 1.0 + composed.u_plus.norm_sqr();
        prop_assert!(
            composed.normalization_residual() <= 1e-9 * scale * scale,
            "residual {} at scale {}", composed.normalization_residual(), scale
        );
    }

    #[test]
    fn phase_integral_is_additive(
        a in -1.0f64..1.0,
        b in -1.0f64..1.0,
        c in -1.0f64..1.0,
        omega0 in 1.0f64..50.0,
        k in 1u32..4,
    ) {
        let profile = FrequencyProfile::powerlaw(omega0, 1.0, k).unwrap();
        let (mut lo, mut mid, mut hi) = (a, b, c);
        if lo > mid { std::mem::swap(&mut lo, &mut mid); }
        if mid > hi { std::mem::swap(&mut mid, &mut hi); }
        if lo > mid { std::mem::swap(&mut lo, &mut mid); }
        let ab = profile.phase_integral(lo, mid, false).unwrap();
        let bc = profile.phase_integral(mid, hi, false).unwrap();
        let ac = profile.phase_integral(lo, hi, false).unwrap();
        prop_assert!((ab + bc - ac).abs() < 1e-10 * (1.0 + ac.abs()));
    }

    #[test]
    fn distribution_is_normalized(
        n in 0u32..=15,
        m in -15i32..=15,
        u_sq in 0.1f64..4.0,
    ) {
        let dist = spectra::distribution(FockLabel::new(n, m), u_sq.sqrt(), 1e-12).unwrap();
        let total: f64 = dist.probabilities.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "sum {total}");
    }

    #[test]
    fn transition_probability_symmetries(
        n in 0u32..=25,
        q in 0u32..=25,
        m in -25i32..=25,
        u_sq in 0.05f64..5.0,
    ) {
        let u = u_sq.sqrt();
        let p = spectra::transition_probability(n, q, m, u);
        prop_assert_eq!(p, spectra::transition_probability(q, n, m, u));
        prop_assert_eq!(p, spectra::transition_probability(n, q, -m, u));
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn moment_beat_respects_bounds(
        pair in arb_pair(),
        phi in 0.0f64..100.0,
    ) {
        let (lo, hi) = w_bounds(&pair);
        let w = w_of_t(&pair, phi);
        prop_assert!(w >= lo - 1e-12 && w <= hi + 1e-12, "w={w} outside [{lo}, {hi}]");
    }
}
