//! Scenario-driven front end: TOML configuration, deterministic output
//! products (CSV/JSON with config-hash headers), and the figure bundles.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adiabatic::{self, BogoliubovPair};
use crate::error::{Error, Result};
use crate::evolver::{integrate, Trajectory};
use crate::observables::{fock_moment_mean, fock_moment_variance};
use crate::profiles::FrequencyProfile;
use crate::spectra::{self, FockLabel};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Declarative frequency profile, mirroring [`FrequencyProfile`] for config
/// files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileSpec {
    Powerlaw {
        omega0: f64,
        tau: f64,
        k: u32,
    },
    Tanh {
        omega_i: f64,
        omega_f: f64,
        kappa: f64,
    },
    Constant {
        omega: f64,
    },
    Piecewise {
        segments: Vec<SegmentSpec>,
    },
    Sampled {
        knots: Vec<(f64, f64)>,
    },
}

/// One segment of a piecewise profile; the inner profile may be shifted in
/// time and/or negated to build multi-crossing schedules.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub t_a: f64,
    pub t_b: f64,
    pub profile: Box<ProfileSpec>,
    #[serde(default)]
    pub shift: f64,
    #[serde(default)]
    pub negate: bool,
}

impl ProfileSpec {
    pub fn build(&self) -> Result<FrequencyProfile<f64>> {
        match self {
            ProfileSpec::Powerlaw { omega0, tau, k } => {
                FrequencyProfile::powerlaw(*omega0, *tau, *k)
            }
            ProfileSpec::Tanh {
                omega_i,
                omega_f,
                kappa,
            } => FrequencyProfile::tanh_profile(*omega_i, *omega_f, *kappa),
            ProfileSpec::Constant { omega } => Ok(FrequencyProfile::constant(*omega)),
            ProfileSpec::Piecewise { segments } => {
                let mut built = Vec::with_capacity(segments.len());
                for seg in segments {
                    let mut inner = seg.profile.build()?;
                    if seg.shift != 0.0 {
                        inner = FrequencyProfile::shifted(seg.shift, inner);
                    }
                    if seg.negate {
                        inner = FrequencyProfile::negated(inner);
                    }
                    built.push((seg.t_a, seg.t_b, inner));
                }
                FrequencyProfile::piecewise(built)
            }
            ProfileSpec::Sampled { knots } => FrequencyProfile::sampled(knots),
        }
    }
}

/// Initial quantum state: a Fock label (n, m).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
pub struct InitialSpec {
    #[serde(default)]
    pub n: u32,
    #[serde(default)]
    pub m: i32,
}

impl InitialSpec {
    pub fn label(&self) -> FockLabel {
        FockLabel::new(self.n, self.m)
    }
}

/// One requested output product.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "product", rename_all = "lowercase")]
pub enum OutputSpec {
    /// Dense trajectory samples (every `stride`-th accepted step).
    Trajectory {
        #[serde(default = "default_stride")]
        stride: usize,
    },
    /// Bogoliubov pair extracted at time t.
    Coefficients { t: f64 },
    /// Transition distribution; |u-|^2 either given or extracted at t.
    Distribution {
        #[serde(default)]
        u_minus_sq: Option<f64>,
        #[serde(default)]
        t: Option<f64>,
        #[serde(default = "default_tail_tol")]
        tail_tol: f64,
    },
    /// Time series of energy/moment observables on a uniform grid.
    Observables {
        #[serde(default = "default_samples")]
        samples: usize,
    },
    /// Extracted occupancy versus omega0 for the scenario's power-law shape.
    Sweep { omega0: Vec<f64>, t_extract: f64 },
    /// Multi-crossing composition with random phase schedules.
    PhaseSweep {
        k: u32,
        crossings: usize,
        schedules: usize,
        phi_max: f64,
    },
}

fn default_stride() -> usize {
    1
}
fn default_tail_tol() -> f64 {
    1e-12
}
fn default_samples() -> usize {
    512
}

/// A complete scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub profile: ProfileSpec,
    pub t_i: f64,
    pub t_f: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub initial: InitialSpec,
    pub outputs: Vec<OutputSpec>,
}

fn default_tol() -> f64 {
    1e-12
}

/// Presentation options shared by all writers.
#[derive(Debug, Clone, Copy)]
pub struct OutputOptions {
    pub timestamp: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { timestamp: true }
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// SHA-256 of the canonical serialized form, for output headers.
    pub fn config_hash(&self) -> String {
        let canonical = toml::to_string(self).expect("scenario serializes");
        let mut h = Sha256::new();
        h.update(canonical.as_bytes());
        hex(&h.finalize())
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

fn header(hash: &str, opts: &OutputOptions) -> String {
    let mut s = format!("# larmor-flip v{VERSION}\n# config-sha256: {hash}\n");
    if opts.timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(s, "# unix-time: {now}").unwrap();
    }
    s
}

/// Format a value at full round-trip precision, refusing non-finite output.
fn cell(v: f64, context: &str) -> Result<String> {
    if !v.is_finite() {
        return Err(Error::NonFinite {
            context: context.to_string(),
        });
    }
    Ok(format!("{v:.16e}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// Extraction summary serialized by the `coefficients` product.
#[derive(Debug, Serialize)]
pub struct CoefficientReport {
    pub t: f64,
    pub u_plus_re: f64,
    pub u_plus_im: f64,
    pub u_plus_abs: f64,
    pub u_plus_arg: f64,
    pub u_minus_re: f64,
    pub u_minus_im: f64,
    pub u_minus_abs: f64,
    pub u_minus_arg: f64,
    pub occupancy: f64,
    pub identity_residual: f64,
    pub error_estimate: f64,
}

impl CoefficientReport {
    pub fn new(t: f64, pair: &BogoliubovPair<f64>, spread: f64) -> Self {
        Self {
            t,
            u_plus_re: pair.u_plus.re,
            u_plus_im: pair.u_plus.im,
            u_plus_abs: pair.u_plus.norm(),
            u_plus_arg: pair.u_plus.arg(),
            u_minus_re: pair.u_minus.re,
            u_minus_im: pair.u_minus.im,
            u_minus_abs: pair.u_minus.norm(),
            u_minus_arg: pair.u_minus.arg(),
            occupancy: pair.occupancy(),
            identity_residual: pair.normalization_residual(),
            error_estimate: spread,
        }
    }
}

/// Run every output product of a scenario into `out_dir`; returns the paths
/// written, in order.
pub fn run(scenario: &Scenario, out_dir: &Path, opts: &OutputOptions) -> Result<Vec<PathBuf>> {
    let profile = scenario.profile.build()?;
    let hash = scenario.config_hash();
    let head = header(&hash, opts);
    let needs_trajectory = scenario.outputs.iter().any(|o| {
        !matches!(
            o,
            OutputSpec::PhaseSweep { .. }
                | OutputSpec::Sweep { .. }
                | OutputSpec::Distribution { u_minus_sq: Some(_), .. }
        )
    });
    let traj = if needs_trajectory {
        Some(integrate(&profile, scenario.t_i, scenario.t_f, scenario.tol)?)
    } else {
        None
    };
    let mut written = Vec::new();
    for (idx, output) in scenario.outputs.iter().enumerate() {
        let path = match output {
            OutputSpec::Trajectory { stride } => {
                let traj = traj.as_ref().unwrap();
                let p = out_dir.join(format!("{idx:02}_trajectory.csv"));
                write_trajectory(&p, traj, (*stride).max(1), &head)?;
                p
            }
            OutputSpec::Coefficients { t } => {
                let traj = traj.as_ref().unwrap();
                let (pair, spread) = adiabatic::extract_averaged(traj, *t, 32)?;
                let report = CoefficientReport::new(*t, &pair, spread);
                let p = out_dir.join(format!("{idx:02}_coefficients.json"));
                let body = serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::Config(e.to_string()))?;
                write_file(&p, &format!("{head}{body}\n"))?;
                p
            }
            OutputSpec::Distribution {
                u_minus_sq,
                t,
                tail_tol,
            } => {
                let u_sq = match (u_minus_sq, t) {
                    (Some(u), _) => *u,
                    (None, Some(t)) => {
                        let traj = traj.as_ref().unwrap();
                        adiabatic::extract_averaged(traj, *t, 32)?.0.occupancy()
                    }
                    (None, None) => {
                        return Err(Error::Config(
                            "distribution output needs u_minus_sq or an extraction time t"
                                .into(),
                        ))
                    }
                };
                let p = out_dir.join(format!("{idx:02}_distribution.csv"));
                write_distribution(&p, scenario.initial.label(), u_sq, *tail_tol, &head)?;
                p
            }
            OutputSpec::Observables { samples } => {
                let traj = traj.as_ref().unwrap();
                let p = out_dir.join(format!("{idx:02}_observables.csv"));
                write_observables(&p, traj, scenario.initial.label(), *samples, &head)?;
                p
            }
            OutputSpec::Sweep { omega0, t_extract } => {
                let p = out_dir.join(format!("{idx:02}_sweep.csv"));
                write_powerlaw_sweep(&p, &scenario.profile, omega0, *t_extract, scenario.tol, &head)?;
                p
            }
            OutputSpec::PhaseSweep {
                k,
                crossings,
                schedules,
                phi_max,
            } => {
                let p = out_dir.join(format!("{idx:02}_phase_sweep.csv"));
                write_phase_sweep(&p, *k, *crossings, *schedules, *phi_max, scenario.seed, &head)?;
                p
            }
        };
        written.push(path);
    }
    Ok(written)
}

fn write_trajectory(
    path: &Path,
    traj: &Trajectory<f64>,
    stride: usize,
    head: &str,
) -> Result<()> {
    let mut s = String::from(head);
    s.push_str("t,eps_re,eps_im,deps_re,deps_im,phi,phi_tilde,omega,wronskian_residual\n");
    for (i, st) in traj.sample_states().enumerate() {
        if i % stride != 0 && i + 1 != traj.len() {
            continue;
        }
        let w = traj.profile().eval(st.t)?;
        let row = [
            st.t,
            st.eps.re,
            st.eps.im,
            st.deps.re,
            st.deps.im,
            st.phi,
            st.phi_tilde,
            w,
            st.wronskian_residual(),
        ];
        push_row(&mut s, &row, "trajectory")?;
    }
    write_file(path, &s)
}

fn push_row(s: &mut String, row: &[f64], context: &str) -> Result<()> {
    for (i, v) in row.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&cell(*v, context)?);
    }
    s.push('\n');
    Ok(())
}

fn write_distribution(
    path: &Path,
    label: FockLabel,
    u_minus_sq: f64,
    tail_tol: f64,
    head: &str,
) -> Result<()> {
    let dist = spectra::distribution(label, u_minus_sq.sqrt(), tail_tol)?;
    let mean_closed = spectra::mean_q(label, u_minus_sq);
    let mut s = String::from(head);
    writeln!(
        s,
        "# n={} m={} u_minus_sq={u_minus_sq:.16e} mean_q_closed={mean_closed:.16e} tail_bound={:.16e}",
        label.n_r, label.m, dist.tail_bound
    )
    .unwrap();
    s.push_str("q,probability,cumulative\n");
    let mut cum = 0.0;
    for (q, &p) in dist.probabilities.iter().enumerate() {
        cum += p;
        writeln!(s, "{q},{},{}", cell(p, "distribution")?, cell(cum, "distribution")?).unwrap();
    }
    write_file(path, &s)
}

fn write_observables(
    path: &Path,
    traj: &Trajectory<f64>,
    label: FockLabel,
    samples: usize,
    head: &str,
) -> Result<()> {
    let mut s = String::from(head);
    s.push_str("t,omega,energy,energy_over_abs_omega,moment_mean,moment_variance,w,adiabaticity\n");
    let (t0, t1) = (traj.t_start(), traj.t_end());
    let n = samples.max(2);
    for i in 0..n {
        let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
        let st = traj.state_at(t)?;
        let w = traj.profile().eval(t)?;
        if w == 0.0 {
            continue; // observables are singular exactly at a crossing
        }
        let e = crate::observables::energy_eps_fock(label, st.eps, st.deps, w);
        let eps_sq = st.eps.norm_sqr();
        let row = [
            t,
            w,
            e,
            e / w.abs(),
            fock_moment_mean(label, w, eps_sq),
            fock_moment_variance(label, w, eps_sq),
            w.abs() * eps_sq,
            traj.adiabaticity(t)?,
        ];
        push_row(&mut s, &row, "observables")?;
    }
    write_file(path, &s)
}

fn write_powerlaw_sweep(
    path: &Path,
    base: &ProfileSpec,
    omega0_list: &[f64],
    t_extract: f64,
    tol: f64,
    head: &str,
) -> Result<()> {
    let (tau, k) = match base {
        ProfileSpec::Powerlaw { tau, k, .. } => (*tau, *k),
        _ => {
            return Err(Error::Config(
                "sweep output requires a powerlaw base profile".into(),
            ))
        }
    };
    use rayon::prelude::*;
    let rows: Result<Vec<(f64, f64, f64)>> = omega0_list
        .par_iter()
        .map(|&w0| {
            let profile = FrequencyProfile::powerlaw(w0, tau, k)?;
            let traj = integrate(&profile, -tau, t_extract, tol)?;
            let (pair, spread) = adiabatic::extract_averaged(&traj, t_extract, 32)?;
            Ok((w0, pair.occupancy(), spread))
        })
        .collect();
    let mut s = String::from(head);
    s.push_str("omega0,occupancy,error_estimate\n");
    for (w0, occ, spread) in rows? {
        push_row(&mut s, &[w0, occ, spread], "sweep")?;
    }
    write_file(path, &s)
}

fn write_phase_sweep(
    path: &Path,
    k: u32,
    crossings: usize,
    schedules: usize,
    phi_max: f64,
    seed: u64,
    head: &str,
) -> Result<()> {
    if crossings == 0 {
        return Err(Error::Config("phase sweep needs at least one crossing".into()));
    }
    let pair = adiabatic::analytic_powerlaw::<f64>(k);
    let pairs = vec![pair; crossings];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedule_list: Vec<Vec<f64>> = (0..schedules)
        .map(|_| {
            let mut increments: Vec<f64> =
                (0..crossings - 1).map(|_| rng.gen_range(0.0..phi_max)).collect();
            let mut acc = 0.0;
            for v in &mut increments {
                acc += *v;
                *v = acc;
            }
            increments
        })
        .collect();
    let occupancies = adiabatic::sweep_compose(&pairs, &schedule_list)?;
    let mut s = String::from(head);
    s.push_str("schedule,occupancy\n");
    for (i, occ) in occupancies.iter().enumerate() {
        writeln!(s, "{i},{}", cell(*occ, "phase_sweep")?).unwrap();
    }
    write_file(path, &s)
}

/// Figure bundles: the transition-distribution grids behind the reference
/// plots (CSV per figure).
pub fn figures(which: &str, out_dir: &Path, opts: &OutputOptions) -> Result<Vec<PathBuf>> {
    let head = header("figures", opts);
    let mut written = Vec::new();
    match which {
        "fig1" | "fig2" => {
            let u_sq: f64 = if which == "fig1" { 1.0 } else { 3.0 };
            let fixed_m: &[(u32, i32)] = &[(0, 10), (5, 10), (10, 10), (20, 10)];
            let fixed_n: &[(u32, i32)] = &[(20, 0), (20, 5), (20, 15), (20, 20)];
            let p = out_dir.join(format!("{which}_distributions.csv"));
            let mut s = String::from(&head[..]);
            s.push_str("n,m,q,probability\n");
            for &(n, m) in fixed_m.iter().chain(fixed_n) {
                let d = spectra::distribution(FockLabel::new(n, m), u_sq.sqrt(), 1e-12)?;
                for (q, &prob) in d.probabilities.iter().enumerate() {
                    writeln!(s, "{n},{m},{q},{}", cell(prob, which)?).unwrap();
                }
            }
            write_file(&p, &s)?;
            written.push(p);
        }
        "fig3" => {
            let p = out_dir.join("fig3_diagonal.csv");
            let mut s = String::from(&head[..]);
            s.push_str("u_minus_sq,m,n,probability\n");
            for &u_sq in &[1.0f64, 3.0] {
                for &m in &[0i32, 1, 5, 10] {
                    for n in 0..=40u32 {
                        let prob =
                            spectra::transition_probability(n, n, m, u_sq.sqrt());
                        writeln!(s, "{u_sq},{m},{n},{}", cell(prob, "fig3")?).unwrap();
                    }
                }
            }
            write_file(&p, &s)?;
            written.push(p);
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure '{other}' (expected fig1|fig2|fig3)"
            )))
        }
    }
    Ok(written)
}
