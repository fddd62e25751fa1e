//! masscap command-line front end: profile reports, verification suites,
//! randomized sweeps, horn classification, and small-sphere expansions.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use masscap::error::Error;
use masscap::inequality::VIOL_TOL;
use masscap::profile::{Profile, ProfileSpec};
use masscap::report::{build_report, fmt_f64, Series};
use masscap::singularity::{GradHBound, HornSpec, Verdict};
use masscap::smallsphere::{mass_capacity_expansion_check, willmore_expansion_fit};
use masscap::sweep::{random_mass_profile, slice_grid, sweep_rng};
use masscap::verify;

#[derive(Parser)]
#[command(name = "masscap", about = "mass-capacity inequality laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProfileArgs {
    /// Built-in family: flat | schwarzschild | neg-schwarzschild | mass-profile
    /// | horn | conformal | cylinder | sampled
    #[arg(long)]
    family: Option<String>,

    /// Mass parameter for the chosen family.
    #[arg(long)]
    mass: Option<f64>,

    /// Horn exponent b (family = horn).
    #[arg(long)]
    exponent: Option<f64>,

    /// Conformal bump amplitude (family = conformal).
    #[arg(long)]
    eps: Option<f64>,

    /// Profile JSON file; overrides the family flags.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ProfileArgs {
    fn spec(&self) -> Result<ProfileSpec, Error> {
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("reading {}: {e}", path.display())))?;
            return ProfileSpec::parse(&text);
        }
        let family = self.family.clone().unwrap_or_else(|| "schwarzschild".into());
        let mut params = serde_json::Map::new();
        if let Some(m) = self.mass {
            params.insert("mass".into(), m.into());
        }
        if let Some(b) = self.exponent {
            params.insert("b".into(), b.into());
        }
        if let Some(e) = self.eps {
            params.insert("eps".into(), e.into());
            params.insert("kind".into(), "gaussian".into());
        }
        Ok(ProfileSpec {
            family,
            params: serde_json::Value::Object(params),
            domain: None,
            sigma_area: None,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate mass, capacity, Willmore and Hawking quantities and every
    /// applicable inequality at the given slice(s).
    Report {
        #[command(flatten)]
        profile: ProfileArgs,

        /// Slice coordinate(s); defaults to a single representative slice.
        #[arg(long)]
        slice: Vec<f64>,

        /// Output format: json | csv | table.
        #[arg(long, default_value = "table")]
        format: String,

        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,

        /// Exit 3 when the nonnegative-scalar-curvature hypothesis is not
        /// certified for the profile.
        #[arg(long)]
        require_nonneg_r: bool,

        /// Normalized-margin violation tolerance override.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a verification suite and print its pass/fail table.
    Verify {
        /// equality | sweep | horn | smallsphere | harmonic | all
        #[arg(long, default_value = "all")]
        suite: String,

        #[arg(long, default_value_t = 20)]
        count: usize,

        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Randomized nondecreasing-mass profiles: margins over a slice grid as
    /// CSV, plus margin-vs-radius and B(t) plot series.
    Sweep {
        #[arg(long, default_value_t = 10)]
        count: usize,

        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// Output CSV path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,

        /// Directory for plot-data series (skipped when absent).
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// Classify a horn-type singular end.
    Horn {
        /// Horn exponent b of the model warp a = r^b.
        #[arg(long, default_value_t = 0.8)]
        exponent: f64,

        #[arg(long, default_value_t = 1.0)]
        delta: f64,

        /// Bi-Lipschitz envelope constant lambda >= 1.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,

        /// Gradient bound coeff * r^exp for the perturbation.
        #[arg(long)]
        grad_coeff: Option<f64>,

        #[arg(long, allow_hyphen_values = true)]
        grad_exp: Option<f64>,

        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Small-sphere expansion fit at a smooth center.
    Smallsphere {
        #[command(flatten)]
        profile: ProfileArgs,

        #[arg(long, default_value = "table")]
        format: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::InvalidInput(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Report { profile, slice, format, out, require_nonneg_r, tol } => {
            let spec = profile.spec()?;
            let p = spec.build()?;
            let slices = if slice.is_empty() { vec![default_slice(&p)] } else { slice };
            let rep = build_report(&spec, &p, &slices)?;
            let text = match format.as_str() {
                "json" => rep.to_json() + "\n",
                "csv" => rep.to_csv(),
                "table" => rep.to_table(),
                other => return Err(Error::InvalidInput(format!("unknown format {other}"))),
            };
            emit(&out, &text)?;
            let viol_tol = tol.unwrap_or(VIOL_TOL);
            let uncertified = rep.reports.iter().any(|r| !r.hypothesis.ok());
            if require_nonneg_r && uncertified {
                return Ok(ExitCode::from(3));
            }
            let violated = rep
                .reports
                .iter()
                .any(|r| r.hypothesis.ok() && r.normalized_margin < -viol_tol);
            Ok(if violated { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Verify { suite, count, seed } => {
            let names: Vec<&str> = if suite == "all" {
                verify::SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut all_ok = true;
            for name in names {
                let rep = verify::run_suite(name, count, seed)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown suite {name}")))?;
                print!("{}", rep.render());
                all_ok &= rep.passed();
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Sweep { count, seed, out, plot_dir } => {
            let mut rng = sweep_rng(seed);
            let mut csv =
                String::from("profile,slice,inequality,lhs,rhs,margin,normalized_margin\n");
            let mut margin_series: Vec<Series> = Vec::new();
            let mut b_series: Vec<Series> = Vec::new();
            for i in 0..count {
                let p = random_mass_profile(&mut rng, i);
                let mut margin_pts = Vec::new();
                for x in slice_grid(&p, 10) {
                    for r in masscap::inequality::all_slice_reports(&p, x)? {
                        csv.push_str(&format!(
                            "{i},{},{},{},{},{},{}\n",
                            fmt_f64(x),
                            r.name,
                            fmt_f64(r.lhs),
                            fmt_f64(r.rhs),
                            fmt_f64(r.margin),
                            fmt_f64(r.normalized_margin)
                        ));
                        if r.name == "mass-capacity" {
                            margin_pts.push((x, r.normalized_margin));
                        }
                    }
                }
                margin_series.push(Series {
                    name: format!("margin-vs-radius-{i:03}"),
                    x_label: "slice".into(),
                    y_label: "normalized_margin".into(),
                    points: margin_pts,
                });
                if i < 4 {
                    let h = masscap::harmonic::two_ended_harmonic(&p)?;
                    let grid = h.level_grid(0.01, 0.99, 99)?;
                    b_series.push(Series {
                        name: format!("b-of-t-{i:03}"),
                        x_label: "t".into(),
                        y_label: "B".into(),
                        points: grid.iter().map(|lp| (lp.t, lp.b)).collect(),
                    });
                }
            }
            emit(&out, &csv)?;
            if let Some(dir) = plot_dir {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| Error::InvalidInput(format!("creating {}: {e}", dir.display())))?;
                for s in margin_series.iter().chain(&b_series) {
                    std::fs::write(dir.join(format!("{}.csv", s.name)), s.to_csv())
                        .map_err(|e| Error::InvalidInput(format!("plot data: {e}")))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Horn { exponent, delta, lambda, grad_coeff, grad_exp, format } => {
            let ghb = match (grad_coeff, grad_exp) {
                (Some(c), Some(e)) => GradHBound::Power { coeff: c, exp: e },
                (None, None) => GradHBound::Zero,
                _ => {
                    return Err(Error::InvalidInput(
                        "grad_coeff and grad_exp must be given together".into(),
                    ))
                }
            };
            let spec = HornSpec::power(exponent, delta)?.with_envelope(lambda, ghb)?;
            let (verdict, limit) = spec.classify()?;
            let text = match format.as_str() {
                "json" => format!(
                    "{{\"b\":{},\"delta\":{},\"verdict\":\"{}\",\"limit\":\"{:?}\"}}\n",
                    fmt_f64(exponent),
                    fmt_f64(delta),
                    verdict_str(verdict),
                    limit
                ),
                _ => format!(
                    "horn b = {exponent}, delta = {delta}\nQ limit: {limit:?}\nverdict: {}\n",
                    verdict_str(verdict)
                ),
            };
            emit(&None, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Smallsphere { profile, format } => {
            let spec = profile.spec()?;
            let p = spec.build()?;
            let grid = masscap::smallsphere::default_r_grid();
            let fit = willmore_expansion_fit(&p, &grid)?;
            let chk = mass_capacity_expansion_check(&p, &grid)?;
            let text = match format.as_str() {
                "json" => format!(
                    "{{\"c0\":{},\"c2\":{},\"c4\":{},\"c0_predicted\":{},\"c2_predicted\":{},\"c4_predicted\":{},\"c4_within_tol\":{},\"r2_coeff\":{},\"r2_predicted\":{},\"mass\":{}}}\n",
                    fmt_f64(fit.c0),
                    fmt_f64(fit.c2),
                    fmt_f64(fit.c4),
                    fmt_f64(fit.c0_predicted),
                    fmt_f64(fit.c2_predicted),
                    fmt_f64(fit.c4_predicted),
                    fit.c4_within_tol,
                    fmt_f64(chk.r2_coeff_fit),
                    fmt_f64(chk.r2_coeff_predicted),
                    fmt_f64(chk.mass),
                ),
                _ => format!(
                    "willmore expansion: c0 {:.10} (predicted {:.10})\n  c2 {:.10} (predicted {:.10})\n  c4 {:.6} (predicted {:.6}, within 5%: {})\nmass-capacity bound r^2 coefficient {:.8} (R(p)/12 = {:.8})\nmass {:.6e}\n",
                    fit.c0, fit.c0_predicted, fit.c2, fit.c2_predicted, fit.c4, fit.c4_predicted,
                    fit.c4_within_tol, chk.r2_coeff_fit, chk.r2_coeff_predicted, chk.mass,
                ),
            };
            emit(&None, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::MassNonnegCertified => "mass-nonneg-certified",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn default_slice(p: &Profile) -> f64 {
    let (lo, hi) = p.domain();
    if lo.is_finite() {
        lo + 1.0f64.min((hi - lo) / 4.0)
    } else {
        1.0
    }
}
