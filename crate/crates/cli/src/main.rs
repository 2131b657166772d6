#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tensekit::formant_extract::track_formants_with_f0;
use tensekit::ingest::read_wav;
use tensekit::num::fmt_g17;
use tensekit::report::{
    emit_curves_svg, emit_svg, load_track, parse_force_csv, parse_records_csv, run_analyze, run_force, run_simulate,
    run_stats, Curve, Grouping, RunConfig, SvgKind,
};
use tensekit::scales::{bark_to_hz, hz_to_bark};
use tensekit::tenseness::fit_poly;
use tensekit::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tensekit", version, about = "Formant-dynamics measures of vowel tenseness")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

/// Run configuration; usable before or after the subcommand.
#[derive(Debug, Args)]
struct ConfigArgs {
    /// TOML run configuration; flags below override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Polynomial degree of the F1 fit.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Neutral-vowel F1 in Hz.
    #[arg(long, global = true, value_name = "HZ")]
    fneu: Option<f64>,
    #[arg(long, global = true)]
    mass: Option<f64>,
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Minimum median θ₁ gap (rad) for a bifurcated pair.
    #[arg(long, global = true, value_name = "RAD")]
    min_gap: Option<f64>,
    /// θ₁ dead band (rad) around zero classified as stable.
    #[arg(long, global = true, value_name = "RAD")]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads; 0 picks automatically.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Converts frequencies to Bark (or back with --inverse).
    Bark {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
        #[arg(long)]
        inverse: bool,
    },
    /// Extracts a formant and F0 track from a WAV file.
    Extract {
        wav: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Computes tenseness records for every manifest entry.
    Analyze { manifest: PathBuf },
    /// Fits Z₁(t) over a window and prints the coefficients.
    Fit {
        track: PathBuf,
        /// Fit window `start,end` in ms.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: (f64, f64),
    },
    /// Samples a_tense and F_tense over a fit window.
    Force {
        track: PathBuf,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Fit window `start,end` in ms; defaults to the whole track.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(f64, f64)>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Runs a TOML simulation scenario and prints a track CSV.
    Simulate {
        scenario: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Summaries, Welch test, ANOVA and correlation over records.csv.
    Stats {
        records: PathBuf,
        /// Comma list of source, class, language, vowel.
        #[arg(long, default_value = "class")]
        group_by: String,
    },
    /// Renders an SVG map from records.csv (or force CSVs for `curves`).
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        kind: String,
        /// Only plot these class labels (comma list).
        #[arg(long, value_delimiter = ',')]
        classes: Option<Vec<String>>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `start,end`, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    if !(a < b) {
        return Err(format!("window start {a} must precede end {b}"));
    }
    Ok((a, b))
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Domain(_) => EXIT_USAGE,
            _ => EXIT_INPUT,
        };
        Self { code, msg: e.to_string() }
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_INPUT, msg: format!("{}: {e}", path.display()) }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_fail(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io_fail(dir, e))?;
            }
            fs::write(p, text).map_err(|e| io_fail(p, e))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure { code: EXIT_INPUT, msg: format!("stdout: {e}") }),
    }
}

fn build_config(a: &ConfigArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &a.config {
        Some(p) => read_text(p)?.parse::<RunConfig>()?,
        None => RunConfig::default(),
    };
    if let Some(v) = a.degree {
        cfg.fit_degree = v;
    }
    if let Some(v) = a.fneu {
        cfg.f_neu_hz = v;
    }
    if let Some(v) = a.mass {
        cfg.mass_m = v;
    }
    if let Some(v) = a.k {
        cfg.coeff_k = v;
    }
    if let Some(v) = a.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = a.min_gap {
        cfg.min_gap_rad = v;
    }
    if let Some(v) = a.epsilon {
        cfg.epsilon_rad = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = &a.out_dir {
        cfg.output_dir = v.clone();
    }
    if let Some(v) = a.workers {
        cfg.workers = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = build_config(&cli.config)?;
    match cli.command {
        Command::Bark { values, inverse } => {
            let mut out = String::from(if inverse { "bark,hz\n" } else { "hz,bark\n" });
            for v in values {
                let w = if inverse { bark_to_hz(v)? } else { hz_to_bark(v)? };
                out.push_str(&format!("{},{}\n", fmt_g17(v), fmt_g17(w)));
            }
            emit(None, &out)?;
        }
        Command::Extract { wav, out } => {
            let bytes = fs::read(&wav).map_err(|e| io_fail(&wav, e))?;
            let audio = read_wav(&bytes)?;
            let track = track_formants_with_f0(&audio, &cfg.extraction)?;
            let text = format!("# config_hash,{}\n{}", cfg.hash(), track.to_csv());
            emit(out.as_deref(), &text)?;
        }
        Command::Analyze { manifest } => {
            let outcome = run_analyze(&manifest, &cfg)?;
            let errors = outcome.error_count();
            eprintln!(
                "{} rows, {errors} errors, config {} -> {}",
                outcome.rows.len(),
                outcome.config_hash,
                cfg.output_dir.display()
            );
            for r in outcome.rows.iter().filter(|r| !r.is_ok()) {
                eprintln!("  {}: {}", r.path, r.error);
            }
            if errors > 0 {
                return Ok(if errors == outcome.rows.len() { EXIT_INPUT } else { EXIT_PARTIAL });
            }
        }
        Command::Fit { track, window } => {
            let t = load_track(&track, &cfg.extraction)?;
            let model = fit_poly(&t, window, cfg.fit_degree)?;
            let mut out = format!(
                "# window_ms,{},{}\n# degree,{}\n# n_points,{}\n# residual_rms_bark,{}\n# config_hash,{}\npower,coefficient\n",
                fmt_g17(window.0),
                fmt_g17(window.1),
                model.degree(),
                model.n_points,
                fmt_g17(model.residual_rms),
                cfg.hash()
            );
            for (i, c) in model.coefficients.iter().enumerate() {
                out.push_str(&format!("{i},{}\n", fmt_g17(*c)));
            }
            emit(None, &out)?;
        }
        Command::Force { track, samples, window, out } => {
            let t = load_track(&track, &cfg.extraction)?;
            let run = run_force(&t, window, &cfg, samples)?;
            if run.profile.degenerate_degree {
                eprintln!("warning: degree {} has no second derivative; profile is zero", run.profile.degree);
            }
            emit(out.as_deref(), &run.csv)?;
        }
        Command::Simulate { scenario, out } => {
            let text = run_simulate(&read_text(&scenario)?, &cfg)?;
            emit(out.as_deref(), &text)?;
        }
        Command::Stats { records, group_by } => {
            let grouping: Grouping = group_by.parse()?;
            let rows = parse_records_csv(&read_text(&records)?)?;
            let report = run_stats(&rows, &grouping, &cfg.pair_policy()?)?;
            let text = report.to_text();
            if cli.config.out_dir.is_some() {
                fs::create_dir_all(&cfg.output_dir).map_err(|e| io_fail(&cfg.output_dir, e))?;
                emit(Some(&cfg.output_dir.join("stats.json")), &report.to_json())?;
                emit(Some(&cfg.output_dir.join("stats.txt")), &text)?;
            }
            emit(None, &text)?;
        }
        Command::Report { inputs, kind, classes, out } => {
            let kind: SvgKind = kind.parse()?;
            let svg = if kind == SvgKind::Curves {
                let mut curves = Vec::new();
                let mut hashes: Vec<String> = Vec::new();
                for p in &inputs {
                    let table = parse_force_csv(&read_text(p)?)?;
                    let h = table.meta("config_hash").unwrap_or("").to_string();
                    if !hashes.contains(&h) {
                        hashes.push(h);
                    }
                    let label = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
                    let points = table.t_ds.iter().copied().zip(table.a_tense.iter().copied()).collect();
                    curves.push(Curve { label, points });
                }
                if hashes.len() > 1 {
                    return Err(Error::Config(format!("force profiles mix configurations {hashes:?}")).into());
                }
                emit_curves_svg(&curves, &hashes[0])?
            } else {
                let [records] = inputs.as_slice() else {
                    return Err(Failure { code: EXIT_USAGE, msg: format!("{} takes one records.csv", kind.as_str()) });
                };
                let rows = parse_records_csv(&read_text(records)?)?;
                emit_svg(&rows, kind, classes.as_deref())?
            };
            emit(out.as_deref(), &svg)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
