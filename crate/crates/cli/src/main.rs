//! Thin command front end wiring the core modules to files and exit
//! codes.
//!
//! Exit codes: 0 = property holds / consistent, 1 = property fails
//! (with a witness in the report), 2 = internal inconsistency between
//! an experiment and the classification tables, 3 = usage error.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::BigRational;

use totpos_core::completion::{embed_sym_2x2, embed_tp_2x2};
use totpos_core::polya::{
    cosine_jain, generating_poly_pf_check, laplace, pf_sequence_check, power_obstruction,
    ObstructionVerdict, PffFamily, PfSequence,
};
use totpos_core::preservers::{default_grid, test_power_preserver};
use totpos_core::whitney::{approximate, ApproxKernel, ApproxOptions, Mode};
use totpos_core::{hankel_check, RationalMatrix, Scalar, Status};

#[derive(Parser)]
#[command(name = "totpos", version, about = "Total-positivity checks, preserver experiments, TP lifts and completions, Polya frequency certificates")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// TN_p / TP_p minor check of a matrix.
    Check(CheckArgs),
    /// Full-order TP test via contiguous minors.
    Fekete(FeketeArgs),
    /// TN/TP verdict for the Hankel matrix of a moment sequence.
    Hankel(HankelArgs),
    /// Entrywise power-preserver experiment against the theory tables.
    Preserver(PreserverArgs),
    /// Discretized-Gaussian TP approximation of a built-in kernel.
    Whitney(WhitneyArgs),
    /// Embed a TP 2x2 matrix into a scaled generalized Vandermonde matrix.
    Embed2x2(Embed2x2Args),
    /// Embed a symmetric TP 2x2 matrix into a TP continuous Hankel kernel.
    Embedsym(EmbedSymArgs),
    /// Polya frequency function transforms and power obstructions.
    #[command(subcommand)]
    Pff(PffCommand),
    /// Polya frequency sequence checks.
    #[command(subcommand)]
    Pfseq(PfseqCommand),
    /// Hadamard powers of the cosine Toeplitz matrix.
    Jain(JainArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Matrix input: a path, inline JSON, or - for stdin.
    input: String,
    /// Highest minor order to test (defaults to full order).
    #[arg(short = 'p', long)]
    order: Option<usize>,
    /// Demand strictly positive minors (TP) instead of non-negative (TN).
    #[arg(long)]
    strict: bool,
    /// Float tolerance scale (ignored and forced to 0 for exact matrices).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct FeketeArgs {
    input: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct HankelArgs {
    /// Odd-length moment sequence; rationals and decimals parse
    /// exactly, e.g. 1,1/2,1/3 or 2,1.5,1.25,1.125,1.0625.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    moments: Vec<String>,
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct PreserverArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    symmetric: bool,
    /// Grid points per parameter (log-spaced over [1e-6, 1)).
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct WhitneyArgs {
    /// fc (finite x line) or cc (line x line).
    #[arg(long)]
    mode: String,
    /// Built-in kernel: const1 (indicator box) or step.
    #[arg(long, default_value = "const1")]
    kernel: String,
    /// Number of lines for the finite factor in fc mode.
    #[arg(long, default_value_t = 2)]
    lines: usize,
    #[arg(short = 'p', long, default_value_t = 2)]
    order: usize,
    #[arg(short = 'n', long)]
    resolution: u32,
    /// Continuity points as x:y pairs, e.g. 1:0.25,2:-0.5.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    points: Vec<String>,
    /// Write the per-point CSV here.
    #[arg(long)]
    csv: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Embed2x2Args {
    input: String,
    #[arg(long, default_value_t = 5)]
    rows: usize,
    #[arg(long, default_value_t = 7)]
    cols: usize,
    /// Placement i1,i2,j1,j2 (zero-based, i1<i2, j1<j2).
    #[arg(long, value_delimiter = ',', default_value = "1,3,2,5")]
    place: Vec<usize>,
}

#[derive(Args)]
struct EmbedSymArgs {
    input: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x2: f64,
    /// Sample coordinates for the certification grid.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    sample: Vec<f64>,
}

#[derive(Subcommand)]
enum PffCommand {
    /// Rational bilateral Laplace transform of a family member.
    Laplace(PffFamilyArgs),
    /// Power-obstruction certificate for the M or N family.
    Obstruct(ObstructArgs),
}

#[derive(Args)]
struct PffFamilyArgs {
    /// lambda | phi | M | N
    #[arg(long)]
    family: String,
    /// Value at the origin for the lambda family.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Rational exponent for the M family, e.g. 1 or 3/2.
    #[arg(long, default_value = "1")]
    alpha: String,
    /// Exponents for the one-sided N family.
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
}

#[derive(Args)]
struct ObstructArgs {
    #[command(flatten)]
    family: PffFamilyArgs,
    #[arg(long)]
    power: u32,
}

#[derive(Subcommand)]
enum PfseqCommand {
    /// Lax Toeplitz minor check of a finitely supported sequence.
    Check(PfseqArgs),
}

#[derive(Args)]
struct PfseqArgs {
    /// Sequence terms, e.g. 1,2,1 (rationals allowed).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Vec<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    offset: i64,
    #[arg(short = 'p', long, default_value_t = 4)]
    order: usize,
    /// Window size; defaults to the smallest admissible one.
    #[arg(long)]
    window: Option<usize>,
    /// Also certify the generating polynomial's roots.
    #[arg(long)]
    roots: bool,
}

#[derive(Args)]
struct JainArgs {
    #[arg(short = 'n', long)]
    n: usize,
    /// Angle; accepts plain numbers or pi/K.
    #[arg(long)]
    theta: String,
    #[arg(long)]
    alpha: f64,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("TOTPOS_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    // Usage problems exit with 3, not clap's default 2, which is
    // reserved for experiment-vs-theory inconsistencies.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok((report, code)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(3);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_matrix(input: &str) -> Result<RationalMatrix, String> {
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        buf
    } else if input.trim_start().starts_with('{') {
        input.to_string()
    } else {
        fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?
    };
    if !text.trim_start().starts_with('{') {
        // Plain CSV of floats.
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, _> = line.split(',').map(|t| t.trim().parse()).collect();
            rows.push(row.map_err(|e| format!("bad CSV row `{line}`: {e}"))?);
        }
        return RationalMatrix::from_f64(rows).map_err(|e| e.to_string());
    }
    RationalMatrix::from_json_str(&text).map_err(|e| e.to_string())
}

fn parse_rationals(items: &[String]) -> Result<Vec<Scalar>, String> {
    items
        .iter()
        .map(|s| Scalar::parse_exact(s).map_err(|e| e.to_string()))
        .collect()
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("pi/") {
        let k: f64 = rest.parse().map_err(|e| format!("bad angle `{t}`: {e}"))?;
        Ok(std::f64::consts::PI / k)
    } else if t == "pi" {
        Ok(std::f64::consts::PI)
    } else {
        t.parse().map_err(|e| format!("bad angle `{t}`: {e}"))
    }
}

fn verdict_code(status: Status) -> u8 {
    if status == Status::Fail {
        1
    } else {
        0
    }
}

fn pff_family(args: &PffFamilyArgs) -> Result<PffFamily, String> {
    match args.family.as_str() {
        "lambda" => PffFamily::lambda(args.d).map_err(|e| e.to_string()),
        "phi" => Ok(PffFamily::Phi),
        "M" => {
            let alpha = Scalar::parse_exact(&args.alpha)
                .map_err(|e| e.to_string())?
                .as_exact()
                .cloned()
                .ok_or("alpha must be rational")?;
            PffFamily::m_alpha(alpha).map_err(|e| e.to_string())
        }
        "N" => {
            let a = &args.a;
            if a.len() != 3 {
                return Err("the N family takes --a a1,a2,a3".into());
            }
            PffFamily::one_sided_n(a[0], a[1], a[2]).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown family `{other}`")),
    }
}

fn run(cli: &Cli) -> Result<(serde_json::Value, u8), String> {
    match &cli.command {
        Command::Check(args) => {
            let m = read_matrix(&args.input)?;
            let p = args.order.unwrap_or_else(|| m.rows().min(m.cols()));
            let tol = if m.kind() == totpos_core::Kind::Exact {
                0.0
            } else {
                args.tol
            };
            let v = m.check(p, args.strict, tol).map_err(|e| e.to_string())?;
            let code = verdict_code(v.status);
            Ok((serde_json::to_value(&v).unwrap(), code))
        }
        Command::Fekete(args) => {
            let m = read_matrix(&args.input)?;
            let tol = if m.kind() == totpos_core::Kind::Exact {
                0.0
            } else {
                args.tol
            };
            let v = m.fekete_tp(tol).map_err(|e| e.to_string())?;
            let code = verdict_code(v.status);
            Ok((serde_json::to_value(&v).unwrap(), code))
        }
        Command::Hankel(args) => {
            let moments = parse_rationals(&args.moments)?;
            let v = hankel_check(&moments, args.strict, 0.0).map_err(|e| e.to_string())?;
            let code = verdict_code(v.status);
            Ok((serde_json::to_value(&v).unwrap(), code))
        }
        Command::Preserver(args) => {
            let grid = match args.grid {
                None => default_grid(),
                Some(n) => (0..n)
                    .map(|k| 10f64.powf(-6.0 + 6.0 * k as f64 / n as f64))
                    .collect(),
            };
            let report =
                test_power_preserver(args.alpha, args.c, args.dim, args.symmetric, &grid)
                    .map_err(|e| e.to_string())?;
            let code = if report.consistent { 0 } else { 2 };
            Ok((serde_json::to_value(&report).unwrap(), code))
        }
        Command::Whitney(args) => {
            let mode = match args.mode.as_str() {
                "fc" => Mode::Fc,
                "cc" => Mode::Cc,
                other => return Err(format!("mode must be fc or cc, got `{other}`")),
            };
            let kernel = match (mode, args.kernel.as_str()) {
                (Mode::Fc, "const1") => ApproxKernel::FiniteByLine {
                    d: args.lines,
                    f: Box::new(|_, y| if (-1.0..=1.0).contains(&y) { 1.0 } else { 0.0 }),
                },
                (Mode::Fc, "step") => ApproxKernel::FiniteByLine {
                    d: args.lines,
                    f: Box::new(|_, y| if (0.0..=1.0).contains(&y) { 1.0 } else { 0.0 }),
                },
                (Mode::Cc, "const1") => ApproxKernel::Plane {
                    f: Box::new(|x, y| {
                        if (-1.0..=1.0).contains(&x) && (-1.0..=1.0).contains(&y) {
                            1.0
                        } else {
                            0.0
                        }
                    }),
                },
                (_, other) => return Err(format!("unknown kernel `{other}` for this mode")),
            };
            let mut points = Vec::new();
            for p in &args.points {
                let (x, y) = p
                    .split_once(':')
                    .ok_or_else(|| format!("point `{p}` must be x:y"))?;
                points.push((
                    x.parse().map_err(|e| format!("bad point `{p}`: {e}"))?,
                    y.parse().map_err(|e| format!("bad point `{p}`: {e}"))?,
                ));
            }
            if points.is_empty() {
                points = vec![(1.0, -0.25), (1.0, 0.25)];
            }
            let opts = ApproxOptions {
                p: args.order,
                n: args.resolution,
                mode,
                continuity_points: points,
                sample_count: 8,
                seed: args.seed,
            };
            let (report, _) = approximate(&kernel, &opts).map_err(|e| e.to_string())?;
            if let Some(path) = &args.csv {
                fs::write(path, report.to_csv()).map_err(|e| format!("{path}: {e}"))?;
            }
            let clean_fail = report.tp_sampled.status == Status::Fail && !report.tp_sampled.ambiguous;
            let code = if clean_fail { 1 } else { 0 };
            Ok((serde_json::to_value(&report).unwrap(), code))
        }
        Command::Embed2x2(args) => {
            let m = read_matrix(&args.input)?;
            let [i1, i2, j1, j2]: [usize; 4] = args
                .place
                .clone()
                .try_into()
                .map_err(|_| "placement takes four indices".to_string())?;
            match embed_tp_2x2(&m, args.rows, args.cols, i1, i2, j1, j2) {
                Ok((emb, mat)) => {
                    let cert = mat
                        .fekete_tp(totpos_core::completion::CERT_TOL)
                        .map_err(|e| e.to_string())?;
                    let report = serde_json::json!({
                        "embedding": serde_json::to_value(&emb).unwrap(),
                        "matrix": serde_json::from_str::<serde_json::Value>(&mat.to_json_string()).unwrap(),
                        "certified_tp": cert.passed(),
                    });
                    Ok((report, if cert.passed() { 0 } else { 1 }))
                }
                Err(totpos_core::Error::NotTp2x2) => {
                    Ok((serde_json::json!({"error": "input is not TP"}), 1))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Embedsym(args) => {
            let m = read_matrix(&args.input)?;
            match embed_sym_2x2(&m, args.x1, args.x2) {
                Ok(emb) => {
                    let coords = if args.sample.is_empty() {
                        let s = (1.0 / emb.alpha.sqrt()).max(1.0);
                        let w = args.x2 - args.x1;
                        vec![
                            args.x1 - 0.9 * s * w,
                            args.x1 - 0.4 * s * w,
                            args.x1,
                            args.x2,
                            args.x2 + 0.5 * s * w,
                            args.x2 + s * w,
                        ]
                    } else {
                        args.sample.clone()
                    };
                    let grid = emb.sample(&coords).map_err(|e| e.to_string())?;
                    let cert = grid
                        .check(coords.len(), true, totpos_core::completion::CERT_TOL)
                        .map_err(|e| e.to_string())?;
                    let report = serde_json::json!({
                        "embedding": serde_json::to_value(&emb).unwrap(),
                        "sample_coords": coords,
                        "certified_tp": cert.passed(),
                    });
                    Ok((report, if cert.passed() { 0 } else { 1 }))
                }
                Err(totpos_core::Error::NotSymTp2x2) => Ok((
                    serde_json::json!({"error": "input is not symmetric TP"}),
                    1,
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Pff(sub) => match sub {
            PffCommand::Laplace(args) => {
                let f = pff_family(args)?;
                let t = laplace(&f).map_err(|e| e.to_string())?;
                let report = serde_json::json!({
                    "family": f.name(),
                    "transform": t.rf.to_json(),
                    "strip": [t.strip.0, t.strip.1],
                });
                Ok((report, 0))
            }
            PffCommand::Obstruct(args) => {
                let f = pff_family(&args.family)?;
                let rep = power_obstruction(&f, args.power).map_err(|e| e.to_string())?;
                let code = if rep.verdict == ObstructionVerdict::Obstructed {
                    1
                } else {
                    0
                };
                Ok((serde_json::to_value(&rep).unwrap(), code))
            }
        },
        Command::Pfseq(PfseqCommand::Check(args)) => {
            let terms = parse_rationals(&args.coeffs)?;
            let seq = PfSequence::new(args.offset, terms).map_err(|e| e.to_string())?;
            let window = args
                .window
                .unwrap_or(seq.terms.len() + args.order.saturating_sub(1));
            let v = pf_sequence_check(&seq, args.order, window).map_err(|e| e.to_string())?;
            let mut report = serde_json::json!({ "toeplitz": serde_json::to_value(&v).unwrap() });
            let mut code = verdict_code(v.status);
            if args.roots {
                let coeffs: Vec<BigRational> = args
                    .coeffs
                    .iter()
                    .map(|s| {
                        Scalar::parse_exact(s)
                            .map_err(|e| e.to_string())
                            .and_then(|x| x.as_exact().cloned().ok_or("rational".into()))
                    })
                    .collect::<Result<_, String>>()?;
                let roots = generating_poly_pf_check(&coeffs).map_err(|e| e.to_string())?;
                if !roots.pass {
                    code = 1;
                }
                report["generating_poly"] = serde_json::to_value(&roots).unwrap();
            }
            Ok((report, code))
        }
        Command::Jain(args) => {
            let theta = parse_angle(&args.theta)?;
            let (_, report) = cosine_jain(args.n, theta, args.alpha).map_err(|e| e.to_string())?;
            let code = if report.psd { 0 } else { 1 };
            Ok((serde_json::to_value(&report).unwrap(), code))
        }
    }
}
