//! Built-in acceptance checks: ten numbered criteria covering extraction
//! accuracy, composition identities, spectral statistics, and covariance
//! propagation. Shared by `larmor-flip selftest` and the integration tests.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adiabatic::{self, BogoliubovPair};
use crate::error::Result;
use crate::evolver::{integrate, Trajectory};
use crate::observables::{
    energy_from_covariance, initial_covariance_fock, invariant_state_asymptotics,
    moment_evolution, InvariantStateParams,
};
use crate::profiles::FrequencyProfile;
use crate::quad;
use crate::specfun::{laguerre, laguerre_square_integral};
use crate::spectra::{self, FockLabel};

const TOL: f64 = 1e-12;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:02} [{tag}] {}: {}", self.id, self.name, self.detail)
    }
}

fn report(id: usize, name: &'static str, body: Result<(bool, String)>) -> CriterionReport {
    match body {
        Ok((passed, detail)) => CriterionReport {
            id,
            name,
            passed,
            detail,
        },
        Err(e) => CriterionReport {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y > std::f64::consts::PI {
        y -= two_pi;
    }
    if y < -std::f64::consts::PI {
        y += two_pi;
    }
    y
}

/// Trajectories shared between criteria (all integrated at tol 1e-12).
struct Artifacts {
    /// (k, omega0, trajectory over [-1, 0.9]) for the power-law family.
    powerlaw: Vec<(u32, f64, Trajectory<f64>)>,
    /// Symmetric tanh sweep omega_0 = 1, kappa = 0.05 over [-480, 480].
    tanh_sym: Trajectory<f64>,
    /// Crossing-free tanh sweep omega: 2 -> 1, kappa = 0.2 over [-120, 110].
    tanh_asym: Trajectory<f64>,
}

fn build_artifacts() -> Result<Artifacts> {
    let mut powerlaw = Vec::new();
    for &(k, w0) in &[
        (1u32, 50.0f64),
        (1, 100.0),
        (1, 200.0),
        (1, 400.0),
        (2, 400.0),
        (3, 400.0),
    ] {
        let profile = FrequencyProfile::powerlaw(w0, 1.0, k)?;
        powerlaw.push((k, w0, integrate(&profile, -1.0, 0.9, TOL)?));
    }
    let sym = FrequencyProfile::tanh_profile(1.0, -1.0, 0.05)?;
    let tanh_sym = integrate(&sym, -480.0, 480.0, TOL)?;
    let asym = FrequencyProfile::tanh_profile(2.0, 1.0, 0.2)?;
    let tanh_asym = integrate(&asym, -120.0, 110.0, TOL)?;
    Ok(Artifacts {
        powerlaw,
        tanh_sym,
        tanh_asym,
    })
}

fn powerlaw_traj<'a>(art: &'a Artifacts, k: u32, w0: f64) -> &'a Trajectory<f64> {
    &art.powerlaw
        .iter()
        .find(|(kk, ww, _)| *kk == k && *ww == w0)
        .expect("artifact present")
        .2
}

/// 1. Power-law crossings converge to the closed-form occupancies.
fn criterion_1(art: &Artifacts) -> Result<(bool, String)> {
    let mut detail = String::new();
    let mut passed = true;
    let mut k1_errors = Vec::new();
    for (k, w0, traj) in &art.powerlaw {
        let (pair, _) = adiabatic::extract_averaged(traj, 0.9, 32)?;
        let occ = pair.occupancy();
        let expect = adiabatic::analytic_powerlaw::<f64>(*k).occupancy();
        let err = (occ - expect).abs();
        if *k == 1 {
            k1_errors.push((*w0, err));
        }
        let tol = match *k {
            1 => 0.02,
            2 => 0.1,
            _ => 0.2,
        };
        let checked = *w0 == 400.0;
        if checked && err > tol {
            passed = false;
        }
        use std::fmt::Write as _;
        write!(detail, "k={k} w0={w0}: |u-|^2={occ:.5} (exact {expect:.5}); ").unwrap();
    }
    // The k = 1 sequence should improve as omega_0 tau grows.
    if let (Some(first), Some(last)) = (k1_errors.first(), k1_errors.last()) {
        if last.1 > first.1 {
            passed = false;
            detail.push_str("no convergence in k=1 sequence; ");
        }
    }
    Ok((passed, detail))
}

/// 2. Tanh sweeps match the closed-form pair (magnitude and phase) and the
/// crossing-free sweep produces an exponentially empty occupancy.
fn criterion_2(art: &Artifacts) -> Result<(bool, String)> {
    let (pair, _) = adiabatic::extract_averaged(&art.tanh_sym, 400.0, 32)?;
    // Convert the zero-referenced phase to the asymptotic linear-phase
    // convention using offsets measured from the trajectory itself.
    let s_in = art.tanh_sym.state_at(-400.0)?;
    let s_out = art.tanh_sym.state_at(400.0)?;
    let delta_in = s_in.phi - 1.0 * (-400.0);
    let delta_out = 1.0 * 400.0 - s_out.phi;
    let converted = adiabatic::asymptotic_convention(pair, delta_in, delta_out);
    let expect = adiabatic::analytic_tanh_symmetric::<f64>(1.0, 0.05)?;
    let mag_err = (pair.occupancy().sqrt() - 1.0).abs();
    let arg_err = wrap_angle(converted.u_plus.arg() - expect.u_plus.arg()).abs();

    let (apair, _) = adiabatic::extract_averaged(&art.tanh_asym, 100.0, 32)?;
    let (pred, valid) = adiabatic::analytic_tanh(2.0f64, 1.0, 0.2)?;
    let occ = apair.occupancy();
    let passed = mag_err <= 0.01 && arg_err <= 0.05 && occ <= 1e-8 && valid;
    Ok((
        passed,
        format!(
            "||u-| - 1| = {mag_err:.2e} (tol 1e-2), arg u+ mismatch = {arg_err:.2e} rad \
             (tol 5e-2); crossing-free |u-|^2 = {occ:.2e} (tol 1e-8, closed form {pred:.2e})"
        ),
    ))
}

/// 3. The Bogoliubov identity |u+|^2 - |u-|^2 = 1 holds for every extraction
/// and survives long composition chains.
fn criterion_3(art: &Artifacts) -> Result<(bool, String)> {
    let mut worst_extract: f64 = 0.0;
    for (_, _, traj) in &art.powerlaw {
        let p = adiabatic::extract(traj, traj.t_end())?;
        worst_extract = worst_extract.max(p.normalization_residual());
    }
    for (traj, t) in [(&art.tanh_sym, 400.0), (&art.tanh_asym, 100.0)] {
        let p = adiabatic::extract(traj, t)?;
        worst_extract = worst_extract.max(p.normalization_residual());
    }
    // Chain of 100 crossings in a pairwise-cancelling schedule (each second
    // crossing undoes the first), so the composed state stays of order one
    // and the identity can be checked at absolute precision.
    let pair = adiabatic::analytic_powerlaw::<f64>(1);
    let pairs = vec![pair; 100];
    let half_pi = 0.5 * std::f64::consts::PI;
    let mut phases = Vec::with_capacity(99);
    let mut acc = half_pi;
    phases.push(acc);
    for i in 0..49 {
        acc += 1.0 + 0.1 * i as f64; // arbitrary nondecreasing gap
        phases.push(acc);
        acc += half_pi;
        phases.push(acc);
    }
    let chained = adiabatic::compose(&pairs, &phases)?;
    let chain_res = chained.normalization_residual();
    let passed = worst_extract < 1e-6 && chain_res < 1e-12;
    Ok((
        passed,
        format!(
            "max extraction residual = {worst_extract:.2e} (tol 1e-6), \
             100-crossing chain residual = {chain_res:.2e} (tol 1e-12)"
        ),
    ))
}

/// 4. Wronskian conservation at tol 1e-12.
fn criterion_4(art: &Artifacts) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (_, _, traj) in &art.powerlaw {
        worst = worst.max(traj.max_wronskian_residual);
    }
    worst = worst.max(art.tanh_sym.max_wronskian_residual);
    worst = worst.max(art.tanh_asym.max_wronskian_residual);
    Ok((
        worst < 1e-9,
        format!("max Wronskian residual = {worst:.2e} (tol 1e-9)"),
    ))
}

/// 5. Double-passage interference: a phase tuned to Phi = (j + 1/2) pi
/// cancels the pair creation, both in the recurrence and in a direct ODE run.
fn criterion_5() -> Result<(bool, String)> {
    let w0 = 127.5 * std::f64::consts::PI; // inter-crossing phase = omega_0
    let pair = adiabatic::analytic_powerlaw::<f64>(1);
    let composed = adiabatic::compose(&[pair, pair], &[w0])?;
    let rec_mag = composed.u_minus.norm();

    let up = FrequencyProfile::powerlaw(w0, 1.0, 1)?;
    let down = FrequencyProfile::negated(FrequencyProfile::shifted(
        2.0,
        FrequencyProfile::powerlaw(w0, 1.0, 1)?,
    ));
    let profile = FrequencyProfile::piecewise(vec![(-1.0, 1.0, up), (1.0, 3.0, down)])?;
    let traj = integrate(&profile, -1.0, 2.9, TOL)?;
    let (direct, spread) = adiabatic::extract_averaged(&traj, 2.9, 32)?;
    let err_estimate = spread.max(0.0).sqrt();
    let direct_mag = direct.u_minus.norm();
    let passed = rec_mag < 1e-12 && direct_mag <= 2.0 * err_estimate && direct.occupancy() < 0.01;
    Ok((
        passed,
        format!(
            "recurrence |U-| = {rec_mag:.2e} (tol 1e-12); direct ODE |u-| = {direct_mag:.2e} \
             vs 2x error estimate {:.2e}",
            2.0 * err_estimate
        ),
    ))
}

/// 6. Distribution invariants: normalization, n <-> q and sign-of-m symmetry,
/// closed-form mean, and the ground-state energy variance.
fn criterion_6() -> Result<(bool, String)> {
    let ns = [0u32, 1, 2, 3, 5, 8, 13, 21, 30];
    let ms = [-30i32, -12, -5, -2, -1, 0, 1, 3, 7, 30];
    let u2s = [1.0f64, 3.0];
    let mut worst_norm: f64 = 0.0;
    let mut worst_mean: f64 = 0.0;
    let mut worst_var: f64 = 0.0;
    let mut symmetric = true;
    for &u2 in &u2s {
        let u = u2.sqrt();
        for &n in &ns {
            for &m in &ms {
                let label = FockLabel::new(n, m);
                let dist = spectra::distribution(label, u, 1e-12)?;
                let total: f64 = dist.probabilities.iter().sum();
                worst_norm = worst_norm.max((total - 1.0).abs());
                let mean: f64 = dist
                    .probabilities
                    .iter()
                    .enumerate()
                    .map(|(q, p)| q as f64 * p)
                    .sum();
                let mean_exact = spectra::mean_q(label, u2);
                worst_mean = worst_mean.max((mean - mean_exact).abs() / (1.0 + mean_exact));
                for q in [0u32, n, n + 1, 2 * n + 3] {
                    let p = spectra::transition_probability(n, q, m, u);
                    symmetric &= p == spectra::transition_probability(q, n, m, u);
                    symmetric &= p == spectra::transition_probability(n, q, -m, u);
                }
                if n == 0 {
                    // Ground-row energy variance against the closed form.
                    let pair = BogoliubovPair {
                        u_plus: Complex::new((1.0 + u2).sqrt(), 0.0),
                        u_minus: Complex::new(0.0, u),
                    };
                    let omega = 1.0;
                    let e_mean: f64 = dist
                        .probabilities
                        .iter()
                        .enumerate()
                        .map(|(q, p)| p * spectra::instantaneous_energy(q as u32, m, omega).unwrap())
                        .sum();
                    let var: f64 = dist
                        .probabilities
                        .iter()
                        .enumerate()
                        .map(|(q, p)| {
                            let e = spectra::instantaneous_energy(q as u32, m, omega).unwrap();
                            p * (e - e_mean) * (e - e_mean)
                        })
                        .sum();
                    let var_exact = spectra::energy_variance_ground(m, &pair, omega);
                    worst_var = worst_var.max((var - var_exact).abs() / var_exact);
                }
            }
        }
    }
    let passed = worst_norm < 1e-9 && symmetric && worst_mean < 1e-8 && worst_var < 1e-8;
    Ok((
        passed,
        format!(
            "max |1 - sum p| = {worst_norm:.2e} (tol 1e-9); symmetries exact: {symmetric}; \
             mean-q error = {worst_mean:.2e}, sigma_H error = {worst_var:.2e} (tol 1e-8)"
        ),
    ))
}

/// 7. Vacuum energy tripling across a linear crossing, via the full
/// covariance propagation.
fn criterion_7(art: &Artifacts) -> Result<(bool, String)> {
    let traj = powerlaw_traj(art, 1, 200.0);
    let omega_i = 200.0;
    let q0 = initial_covariance_fock(FockLabel::new(0, 0), omega_i)?;
    let term = traj.terminal();
    let qt = crate::observables::propagate(&q0, &term, omega_i)?;
    let omega_f = traj.profile().eval(term.t)?;
    let ratio = energy_from_covariance(&qt, omega_f) / omega_f.abs();
    Ok((
        (ratio - 3.0).abs() <= 0.05,
        format!("<H>/(hbar |omega|) = {ratio:.4} (expect 3 +- 0.05)"),
    ))
}

/// 8. Spectral and covariance energies agree for random Fock states.
fn criterion_8(art: &Artifacts) -> Result<(bool, String)> {
    let traj = powerlaw_traj(art, 1, 100.0);
    let term = traj.terminal();
    let pair = adiabatic::extract(traj, traj.t_end())?;
    let omega_f = traj.profile().eval(term.t)?;
    let omega_i = 100.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let label = FockLabel::new(rng.gen_range(0..=12), rng.gen_range(-12..=12));
        let q0 = initial_covariance_fock(label, omega_i)?;
        let qt = crate::observables::propagate(&q0, &term, omega_i)?;
        let e_cov = energy_from_covariance(&qt, omega_f);
        let e_spec = spectra::mean_energy_adiabatic(label, &pair, omega_f)?;
        worst = worst.max(((e_cov - e_spec) / e_spec).abs());
    }
    Ok((
        worst < 1e-6,
        format!("max relative energy mismatch over 20 states = {worst:.2e} (tol 1e-6)"),
    ))
}

/// 9. Closed-form Laguerre moment integrals against adaptive quadrature.
fn criterion_9() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &n in &[0u32, 1, 2, 5, 10, 20] {
        for &a in &[0u32, 1, 2, 5, 10, 20] {
            for j in [1u8, 2] {
                let closed = laguerre_square_integral::<f64>(j, n, a)?;
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
                worst = worst.max(((closed - numeric) / closed).abs());
            }
        }
    }
    Ok((
        worst < 1e-8,
        format!("max relative error over j in {{1,2}}, n,a <= 20: {worst:.2e} (tol 1e-8)"),
    ))
}

/// 10. Post-crossing magnetic-moment beat: amplitude and time average of
/// M(t) for Gaussian invariant states match the asymptotic closed forms.
fn criterion_10(art: &Artifacts) -> Result<(bool, String)> {
    let mut detail = String::new();
    let mut passed = true;

    // Crossing case |u-|^2 ~ 1: linear sweep into a constant plateau.
    let up = FrequencyProfile::powerlaw(200.0, 1.0, 1)?;
    let plateau = FrequencyProfile::constant(-200.0);
    let crossing =
        FrequencyProfile::piecewise(vec![(-1.0, 1.0, up), (1.0, 1.5, plateau)])?;
    let traj_a = integrate(&crossing, -1.0, 1.5, TOL)?;
    // Crossing-free case |u-|^2 ~ 0: reuse the monotone tanh sweep.
    let traj_b = &art.tanh_asym;

    for (tag, traj, t_ex) in [("crossing", &traj_a, 1.45), ("smooth", traj_b, 100.0)] {
        let (pair, _) = adiabatic::extract_averaged(traj, t_ex, 32)?;
        let omega_f = traj.profile().eval(traj.t_end())?;
        for &(gp, gm) in &[(1.0f64, 1.0f64), (3.0, 1.0), (5.0, 9.0)] {
            let params = InvariantStateParams::new(gp, gm)?;
            let (_, amp_exact, mean_exact) =
                invariant_state_asymptotics(params, &pair, omega_f)?;
            // Scan exactly ten beat periods ending at t_end.
            let period = std::f64::consts::PI / omega_f.abs();
            let t1 = traj.t_end();
            let t0 = t1 - 10.0 * period;
            let n = 4096;
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            let mut sum = 0.0;
            for i in 0..=n {
                let t = t0 + (t1 - t0) * i as f64 / n as f64;
                let st = traj.state_at(t)?;
                let w = traj.profile().eval(t)?;
                let mval = moment_evolution(params, &st, w);
                min = min.min(mval);
                max = max.max(mval);
                let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
                sum += weight * mval;
            }
            let amp = 0.5 * (max - min);
            let mean = sum / n as f64;
            let scale = gp + gm;
            let amp_ok = (amp - amp_exact).abs() <= 0.02 * amp_exact.abs().max(1e-3 * scale);
            let mean_ok = (mean - mean_exact).abs() <= 0.02 * mean_exact.abs().max(1e-3 * scale);
            passed &= amp_ok && mean_ok;
            use std::fmt::Write as _;
            write!(
                detail,
                "{tag} (G+={gp},G-={gm}): amp {amp:.4}/{amp_exact:.4}, \
                 mean {mean:.4}/{mean_exact:.4}; "
            )
            .unwrap();
        }
    }
    Ok((passed, detail))
}

/// Run all ten acceptance criteria, returning one report each.
pub fn run_all() -> Vec<CriterionReport> {
    let art = match build_artifacts() {
        Ok(a) => a,
        Err(e) => {
            return vec![CriterionReport {
                id: 0,
                name: "setup",
                passed: false,
                detail: format!("failed to integrate shared trajectories: {e}"),
            }]
        }
    };
    vec![
        report(1, "power-law occupancies", criterion_1(&art)),
        report(2, "tanh sweep coefficients", criterion_2(&art)),
        report(3, "Bogoliubov identity", criterion_3(&art)),
        report(4, "Wronskian conservation", criterion_4(&art)),
        report(5, "double-passage cancellation", criterion_5()),
        report(6, "distribution invariants", criterion_6()),
        report(7, "vacuum energy tripling", criterion_7(&art)),
        report(8, "spectral vs covariance energy", criterion_8(&art)),
        report(9, "Laguerre moment integrals", criterion_9()),
        report(10, "magnetic-moment beat", criterion_10(&art)),
    ]
}
