//! Command-line front end for the larmor-flip library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use larmor_flip::adiabatic;
use larmor_flip::evolver::integrate;
use larmor_flip::scenario::{
    self, CoefficientReport, OutputOptions, OutputSpec, ProfileSpec, Scenario,
};
use larmor_flip::selftest;
use larmor_flip::spectra::{self, FockLabel};

#[derive(Parser)]
#[command(name = "larmor-flip", version, about = "Larmor spin-flip crossing simulator")]
struct Cli {
    /// Output directory for generated files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Omit the timestamp line from output headers (byte-stable output).
    #[arg(long, global = true)]
    no_header_timestamp: bool,
    /// Integration tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// RNG seed for randomized schedules.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProfileArgs {
    /// Profile shape: powerlaw | tanh | constant.
    #[arg(long, default_value = "powerlaw")]
    profile: String,
    /// Power-law amplitude omega_0.
    #[arg(long, default_value_t = 100.0)]
    omega0: f64,
    /// Power-law crossing scale tau.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Power-law exponent k.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Tanh initial frequency.
    #[arg(long, default_value_t = 1.0)]
    wi: f64,
    /// Tanh final frequency.
    #[arg(long, default_value_t = -1.0)]
    wf: f64,
    /// Tanh sweep rate kappa.
    #[arg(long, default_value_t = 0.05)]
    kappa: f64,
    /// Constant frequency omega.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Integration start time.
    #[arg(long)]
    ti: Option<f64>,
    /// Integration end time.
    #[arg(long)]
    tf: Option<f64>,
}

impl ProfileArgs {
    fn spec(&self) -> Result<ProfileSpec, String> {
        match self.profile.as_str() {
            "powerlaw" => Ok(ProfileSpec::Powerlaw {
                omega0: self.omega0,
                tau: self.tau,
                k: self.k,
            }),
            "tanh" => Ok(ProfileSpec::Tanh {
                omega_i: self.wi,
                omega_f: self.wf,
                kappa: self.kappa,
            }),
            "constant" => Ok(ProfileSpec::Constant { omega: self.omega }),
            other => Err(format!("unknown profile '{other}'")),
        }
    }

    fn span(&self) -> (f64, f64) {
        match self.profile.as_str() {
            "tanh" => {
                // Reach deep into both adiabatic plateaus.
                let reach = 24.0 / self.kappa.abs().max(1e-6);
                (self.ti.unwrap_or(-reach), self.tf.unwrap_or(reach))
            }
            _ => (self.ti.unwrap_or(-self.tau), self.tf.unwrap_or(0.9 * self.tau)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every output product of a TOML scenario file.
    Run {
        /// Path to the scenario TOML file.
        config: PathBuf,
    },
    /// Integrate a single profile and print the Bogoliubov pair as JSON.
    Coefficients {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Extraction time (defaults to 5/6 of the way to the end).
        #[arg(long)]
        t: Option<f64>,
    },
    /// Print the Fock transition distribution as CSV.
    Distribution {
        /// Initial radial quantum number n.
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Initial angular momentum m.
        #[arg(long, default_value_t = 0)]
        m: i32,
        /// |u_minus|^2 of the crossing.
        #[arg(long, default_value_t = 1.0)]
        u2: f64,
        /// Truncation tail tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tail_tol: f64,
    },
    /// Emit a CSV time series of energy/moment observables.
    Observables {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Initial radial quantum number n.
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Initial angular momentum m.
        #[arg(long, default_value_t = 0)]
        m: i32,
        /// Number of uniformly spaced samples.
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Write the CSV grid behind one of the reference figures.
    Figures {
        /// fig1 | fig2 | fig3
        which: String,
    },
    /// Run the built-in acceptance checks; nonzero exit on failure.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let opts = OutputOptions {
        timestamp: !cli.no_header_timestamp,
    };
    match &cli.command {
        Command::Run { config } => {
            let mut scenario = Scenario::from_file(config)?;
            if scenario.seed == 0 {
                scenario.seed = cli.seed;
            }
            let written = scenario::run(&scenario, &cli.out, &opts)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Coefficients { profile, t } => {
            let spec = profile.spec()?;
            let built = spec.build()?;
            let (ti, tf) = profile.span();
            let traj = integrate(&built, ti, tf, cli.tol)?;
            let t = t.unwrap_or(ti + (tf - ti) * 5.0 / 6.0);
            let (pair, spread) = adiabatic::extract_averaged(&traj, t, 32)?;
            let report = CoefficientReport::new(t, &pair, spread);
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Distribution { n, m, u2, tail_tol } => {
            let label = FockLabel::new(*n, *m);
            let dist = spectra::distribution(label, u2.sqrt(), *tail_tol)?;
            println!(
                "# n={n} m={m} u_minus_sq={u2:.16e} mean_q_closed={:.16e} tail_bound={:.16e}",
                spectra::mean_q(label, *u2),
                dist.tail_bound
            );
            println!("q,probability,cumulative");
            let mut cum = 0.0;
            for (q, p) in dist.probabilities.iter().enumerate() {
                cum += p;
                println!("{q},{p:.16e},{cum:.16e}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Observables {
            profile,
            n,
            m,
            samples,
        } => {
            let (ti, tf) = profile.span();
            let scenario = Scenario {
                profile: profile.spec()?,
                t_i: ti,
                t_f: tf,
                tol: cli.tol,
                seed: cli.seed,
                initial: larmor_flip::scenario::InitialSpec { n: *n, m: *m },
                outputs: vec![OutputSpec::Observables { samples: *samples }],
            };
            let written = scenario::run(&scenario, &cli.out, &opts)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Figures { which } => {
            let written = scenario::figures(which, &cli.out, &opts)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let reports = selftest::run_all();
            let mut ok = true;
            for r in &reports {
                println!("{r}");
                ok &= r.passed;
            }
            if ok {
                println!("selftest: all {} criteria passed", reports.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("selftest: FAILURES present");
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
