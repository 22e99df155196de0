use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cauchy_scope::certificates::{falsify, lemma41_witness, q_only_probe, FalsifyOutcome};
use cauchy_scope::extension::detect_meromorphic;
use cauchy_scope::generators::{parse_coefficients, Generator};
use cauchy_scope::hankel::DEFAULT_RANK_TOL;
use cauchy_scope::spectrum::{fourier_coefficients, DEFAULT_GRID_SIZE};
use cauchy_scope::winding::{composite_winding, relative_tolerance, DEFAULT_RELATIVE_MIN_MODULUS};
use cauchy_scope::{io as sio, BoundarySamples, ComplexPolynomial, Error, Tolerances};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

const SCHEMA: &str = "cauchy-scope/1";

#[derive(Parser)]
#[command(
    name = "cauchy-scope",
    version,
    about = "Meromorphic extendibility of functions sampled on the unit circle",
    after_help = "Exit codes: 0 extension found / certificate built, 2 no extension within budget / no falsifier found, 1 error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether f extends meromorphically with at most --max-poles poles.
    Analyze(Common),
    /// Winding number of P f + Q.
    Winding {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pq: PairArgs,
    },
    /// Build a winding certificate W(Pf + Q) <= -N - 1.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Falsify)]
        mode: Mode,
    },
    /// CSV of theta, Re f, Im f and the unwrapped argument of P f + Q.
    Plot {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pq: PairArgs,
    },
    /// Write the boundary samples themselves.
    Sample(Common),
    /// Experimental: distribution of W(f + Q) over random Q. No verdict.
    ProbeQ {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        draws: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Re-run the configuration embedded in a JSON report.
    Replay {
        report: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Samples as CSV (j,re,im) or JSON ({grid_size, values}).
    #[arg(long, conflicts_with = "generator", required_unless_present = "generator")]
    input: Option<PathBuf>,
    /// Built-in function, e.g. pole:0.5, poly:z^3+2, lacunary:4, paper-6.
    #[arg(long = "gen", id = "generator")]
    generator: Option<String>,
    /// Grid size M for generated samples.
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    grid_size: usize,
    /// Half window K of Fourier coefficients.
    #[arg(long, default_value_t = 256)]
    window: usize,
    /// Pole budget N.
    #[arg(long, default_value_t = 5)]
    max_poles: usize,
    /// Tail equations checked beyond N [default: 3N + 8].
    #[arg(long)]
    tail_depth: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[arg(long, default_value_t = Tolerances::default().tail_tol)]
    tail_tol: f64,
    /// Nonvanishing threshold relative to the largest modulus.
    #[arg(long, default_value_t = DEFAULT_RELATIVE_MIN_MODULUS)]
    min_mod_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct PairArgs {
    /// Coefficients of P, lowest degree first, comma separated.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    p: String,
    /// Coefficients of Q, lowest degree first, comma separated.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    q: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Falsify,
    Lemma41,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

/// Everything needed to reproduce a run; echoed into every JSON report.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct RunConfig {
    subcommand: String,
    input: Option<PathBuf>,
    generator: Option<String>,
    grid_size: usize,
    half_window: usize,
    max_poles: usize,
    tail_depth: Option<usize>,
    tolerances: Tolerances,
    seed: u64,
    format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    draws: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_degree: Option<usize>,
}

impl RunConfig {
    fn from_common(subcommand: &str, c: &Common) -> Self {
        let tolerances = Tolerances {
            rank_tol: c.rank_tol,
            tail_tol: c.tail_tol,
            min_mod_rel: c.min_mod_tol,
            ..Tolerances::default()
        };
        Self {
            subcommand: subcommand.to_string(),
            input: c.input.clone(),
            generator: c.generator.clone(),
            grid_size: c.grid_size,
            half_window: c.window,
            max_poles: c.max_poles,
            tail_depth: c.tail_depth,
            tolerances,
            seed: c.seed,
            format: c.format,
            p: None,
            q: None,
            mode: None,
            draws: None,
            max_degree: None,
        }
    }
}

enum Output {
    Json(Value),
    Text(String),
}

struct Outcome {
    output: Output,
    code: u8,
}

fn load_samples(config: &mut RunConfig) -> Result<BoundarySamples, Error> {
    match (&config.input, &config.generator) {
        (Some(path), _) => {
            let samples = read_samples(path)?;
            config.grid_size = samples.grid_size();
            Ok(samples)
        }
        (None, Some(spec)) => {
            let g = Generator::parse(spec)?;
            BoundarySamples::sample(|z| g.eval(z), config.grid_size)
        }
        (None, None) => Err(Error::InvalidInput("one of --input or --gen is required".into())),
    }
}

fn read_samples(path: &Path) -> Result<BoundarySamples, Error> {
    let reader = BufReader::new(File::open(path)?);
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => sio::read_csv(reader),
        _ => sio::read_json(reader),
    }
}

fn polynomial(text: &str) -> Result<ComplexPolynomial, Error> {
    Ok(ComplexPolynomial::new(parse_coefficients(text)?))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Error> {
    Ok(serde_json::to_value(v)?)
}

fn execute(config: &mut RunConfig) -> Result<Outcome, Error> {
    let samples = load_samples(config)?;
    let tol = config.tolerances;
    let csv = config.format == Format::Csv;
    match config.subcommand.as_str() {
        "analyze" => {
            let spec = fourier_coefficients(&samples, config.half_window)?;
            let report = detect_meromorphic(&spec, config.max_poles, config.tail_depth, &tol)?;
            let code = if report.verdict.extends() { 0 } else { 2 };
            let output = if csv {
                let mut text = String::from("re,im,multiplicity\n");
                for p in &report.poles {
                    text.push_str(&format!("{},{},{}\n", p.location.re, p.location.im, p.multiplicity));
                }
                Output::Text(text)
            } else {
                Output::Json(to_value(&report)?)
            };
            Ok(Outcome { output, code })
        }
        "winding" => {
            let p = polynomial(config.p.as_deref().unwrap_or("1"))?;
            let q = polynomial(config.q.as_deref().unwrap_or("0"))?;
            let composite = samples.composite(&p, &q)?;
            let r = composite_winding(&samples, &p, &q, relative_tolerance(&composite, tol.min_mod_rel))?;
            let output = if csv {
                Output::Text(format!(
                    "winding,min_modulus,max_phase_step,turns,grid_size\n{},{},{},{},{}\n",
                    r.winding, r.min_modulus, r.max_phase_step, r.turns, r.grid_size
                ))
            } else {
                Output::Json(to_value(&r)?)
            };
            Ok(Outcome { output, code: 0 })
        }
        "certify" => {
            require_json(config)?;
            match config.mode.unwrap_or(Mode::Falsify) {
                Mode::Falsify => {
                    let spec = fourier_coefficients(&samples, config.half_window)?;
                    let outcome = falsify(&spec, &samples, config.max_poles, &tol)?;
                    let code = match outcome {
                        FalsifyOutcome::Certificate(_) => 0,
                        FalsifyOutcome::NoFalsifierFound { .. } => 2,
                    };
                    Ok(Outcome {
                        output: Output::Json(to_value(&outcome)?),
                        code,
                    })
                }
                Mode::Lemma41 => {
                    let w = lemma41_witness(&samples, config.max_poles, config.half_window, &tol)?;
                    Ok(Outcome {
                        output: Output::Json(to_value(&w)?),
                        code: 0,
                    })
                }
            }
        }
        "plot" => {
            let p = polynomial(config.p.as_deref().unwrap_or("1"))?;
            let q = polynomial(config.q.as_deref().unwrap_or("0"))?;
            Ok(Outcome {
                output: Output::Text(plot_csv(&samples, &p, &q, tol.min_mod_rel)?),
                code: 0,
            })
        }
        "sample" => {
            let output = if csv {
                let mut buf = Vec::new();
                sio::write_csv(&samples, &mut buf)?;
                Output::Text(String::from_utf8(buf).expect("CSV output is UTF-8"))
            } else {
                // Raw samples rather than an envelope, so the file is valid --input.
                Output::Text(sio::to_json(&samples)? + "\n")
            };
            Ok(Outcome { output, code: 0 })
        }
        "probe-q" => {
            require_json(config)?;
            let probe = q_only_probe(
                &samples,
                config.draws.unwrap_or(200),
                config.max_degree.unwrap_or(6),
                config.seed,
                &tol,
            )?;
            Ok(Outcome {
                output: Output::Json(json!({
                    "experimental": true,
                    "note": "descriptive sample of W(f + Q) with P = 1; carries no verdict",
                    "probe": probe,
                })),
                code: 0,
            })
        }
        other => Err(Error::InvalidInput(format!("unknown subcommand `{other}`"))),
    }
}

fn require_json(config: &RunConfig) -> Result<(), Error> {
    if config.format == Format::Csv {
        return Err(Error::InvalidInput(format!(
            "`{}` only writes JSON",
            config.subcommand
        )));
    }
    Ok(())
}

fn plot_csv(f: &BoundarySamples, p: &ComplexPolynomial, q: &ComplexPolynomial, rel: f64) -> Result<String, Error> {
    let composite = f.composite(p, q)?;
    let floor = relative_tolerance(&composite, rel);
    let m = f.grid_size();
    let mut text = String::from("theta,re_f,im_f,arg_unwrapped\n");
    let mut arg = 0.0;
    let mut previous: Option<Complex64> = None;
    for j in 0..=m {
        let idx = j % m;
        let w = composite.values()[idx];
        if w.norm() < floor || w.norm() == 0.0 {
            return Err(Error::WindingUndefined {
                index: idx,
                modulus: w.norm(),
                tolerance: floor,
            });
        }
        arg = match previous {
            None => w.arg(),
            Some(prev) => arg + (w / prev).arg(),
        };
        previous = Some(w);
        let v = f.values()[idx];
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        text.push_str(&format!("{theta},{},{},{arg}\n", v.re, v.im));
    }
    Ok(text)
}

fn render(config: &RunConfig, output: Output) -> Result<String, Error> {
    Ok(match output {
        Output::Text(t) => t,
        Output::Json(report) => {
            let envelope = json!({
                "schema": SCHEMA,
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "report": report,
            });
            let mut s = serde_json::to_string_pretty(&envelope)?;
            s.push('\n');
            s
        }
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    let (mut config, output_path) = match cli.command {
        Command::Analyze(c) => (RunConfig::from_common("analyze", &c), c.output),
        Command::Sample(c) => (RunConfig::from_common("sample", &c), c.output),
        Command::Winding { common, pq } => {
            let mut cfg = RunConfig::from_common("winding", &common);
            cfg.p = Some(pq.p);
            cfg.q = Some(pq.q);
            (cfg, common.output)
        }
        Command::Plot { common, pq } => {
            let mut cfg = RunConfig::from_common("plot", &common);
            cfg.p = Some(pq.p);
            cfg.q = Some(pq.q);
            (cfg, common.output)
        }
        Command::Certify { common, mode } => {
            let mut cfg = RunConfig::from_common("certify", &common);
            cfg.mode = Some(mode);
            (cfg, common.output)
        }
        Command::ProbeQ {
            common,
            draws,
            max_degree,
        } => {
            let mut cfg = RunConfig::from_common("probe-q", &common);
            cfg.draws = Some(draws);
            cfg.max_degree = Some(max_degree);
            (cfg, common.output)
        }
        Command::Replay { report, output } => {
            let envelope: Value = serde_json::from_reader(BufReader::new(File::open(&report)?))?;
            let config: RunConfig = serde_json::from_value(
                envelope
                    .get("config")
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("report has no `config` block".into()))?,
            )?;
            (config, output)
        }
    };
    let outcome = execute(&mut config)?;
    emit(&render(&config, outcome.output)?, output_path.as_deref())?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
