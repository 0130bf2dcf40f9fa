use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modhyp::charsum::{build_table, char_sum, max_partial};
use modhyp::hyperbola::{criterion_decide, criterion_even, HyperbolaInstance};
use modhyp::sweep::{
    emit, fit_exponent, read_csv, read_json, run_sweep, CMode, Format, Mode, SweepConfig,
};
use modhyp::{Error, Modulus};

#[derive(Parser)]
#[command(
    name = "modhyp",
    version,
    about = "Two-point boxes on xy = c (mod p), character sums and n_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal two-point box side per (p, c)
    Minbox(SweepArgs),
    /// Decide whether a box of side H holds two points
    Criterion(CriterionArgs),
    /// Short character sum S(N; h) and its running maximum
    Charsum(CharsumArgs),
    /// Mean-value statistic over the family {0, H, 2H, ..}
    Shao(SweepArgs),
    /// Moment of sum_u (u/p)((un - 4c)/p)
    Moment(SweepArgs),
    /// Least quadratic nonresidue per prime
    Nqr(SweepArgs),
    /// Both branches of the n_p / box-side dichotomy per prime
    Dichotomy(SweepArgs),
    /// Any sweep, selected with --mode
    Sweep(ModeSweepArgs),
    /// Log-log slope of a sweep column against p
    Fit(FitArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Single prime (shorthand for --p-min P --p-max P)
    #[arg(long)]
    p: Option<u64>,
    #[arg(long = "p-min", default_value_t = 5)]
    p_min: u64,
    #[arg(long = "p-max", default_value_t = 100)]
    p_max: u64,
    /// `all`, a comma-separated list, or `sample:K`
    #[arg(long, default_value = "all")]
    c: String,
    /// Window H (shao) or U (moment); defaults to ceil(p^(1/(2r)))
    #[arg(long = "H")]
    window: Option<u64>,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long = "C", default_value_t = 2.0)]
    constant: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ModeSweepArgs {
    #[arg(long)]
    mode: String,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct CriterionArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    c: i64,
    #[arg(long = "H")]
    h: u64,
}

#[derive(Args)]
struct CharsumArgs {
    #[arg(long)]
    p: u64,
    #[arg(long = "N", default_value_t = 0)]
    n: u64,
    #[arg(long = "h")]
    h: u64,
}

#[derive(Args)]
struct FitArgs {
    /// CSV or JSON output of a sweep
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "h_star")]
    field: String,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sweep_config(mode: Mode, a: &SweepArgs) -> Result<SweepConfig, Error> {
    let (p_min, p_max) = match a.p {
        Some(p) => (p, p),
        None => (a.p_min, a.p_max),
    };
    let mut cfg = SweepConfig::new(mode, p_min, p_max);
    cfg.c_mode = CMode::parse(&a.c, a.seed)?;
    cfg.window = a.window;
    cfg.r = a.r;
    cfg.epsilon = a.epsilon;
    cfg.constant = a.constant;
    cfg.threads = a.threads;
    cfg.format = a.format.parse()?;
    cfg.out = a.out.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep(mode: Mode, a: &SweepArgs) -> Result<(), Error> {
    let cfg = sweep_config(mode, a)?;
    if cfg.primes().is_empty() {
        eprintln!(
            "warning: no primes usable for {mode} in [{}, {}]",
            cfg.p_min, cfg.p_max
        );
    }
    let records = run_sweep(&cfg)?;
    let mut out = output(&cfg.out)?;
    emit(mode, &records, cfg.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn criterion(a: &CriterionArgs) -> Result<(), Error> {
    let inst = HyperbolaInstance::new(Modulus::new(a.p)?, a.c)?;
    let decided = criterion_decide(&inst, a.h)?;
    let even = criterion_even(&inst, a.h)?;
    let mut out = io::stdout().lock();
    match decided {
        Some(w) => {
            let (u, v) = w
                .realize(&inst)
                .into_iter()
                .min()
                .expect("admissible offsets realize");
            writeln!(
                out,
                "p={} c={} H={} decide=true a={} b={} sign={:+} points=({},{}),({},{})",
                a.p, a.c, a.h, w.a, w.b_magnitude, w.b_sign, u.x, u.y, v.x, v.y
            )?;
        }
        None => writeln!(out, "p={} c={} H={} decide=false", a.p, a.c, a.h)?,
    }
    writeln!(out, "even={}", even.is_some())?;
    Ok(())
}

fn charsum(a: &CharsumArgs) -> Result<(), Error> {
    let table = build_table(Modulus::new(a.p)?)?;
    let s = char_sum(&table, a.n, a.h)?;
    let m = max_partial(&table, a.n, a.h)?;
    println!("p={} N={} h={} S={} max_partial={}", a.p, a.n, a.h, s, m);
    Ok(())
}

fn fit(a: &FitArgs) -> Result<(), Error> {
    let file = File::open(&a.input)?;
    let is_json = a.input.extension().is_some_and(|e| e == "json");
    let (_, records) = if is_json {
        read_json(file, None)?
    } else {
        read_csv(file)?
    };
    let res = fit_exponent(&records, &a.field)?;
    let mut out = output(&a.out)?;
    match a.format.parse()? {
        Format::Csv => {
            writeln!(out, "field,alpha,beta,n_points,reference_1_4,reference_1_6")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                a.field,
                res.alpha,
                res.beta,
                res.n_points,
                res.reference_exponents[0],
                res.reference_exponents[1]
            )?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &res).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Minbox(a) => sweep(Mode::Minbox, a),
        Command::Shao(a) => sweep(Mode::Shao, a),
        Command::Moment(a) => sweep(Mode::Moment, a),
        Command::Nqr(a) => sweep(Mode::Nqr, a),
        Command::Dichotomy(a) => sweep(Mode::Dichotomy, a),
        Command::Sweep(a) => sweep(a.mode.parse()?, &a.sweep),
        Command::Criterion(a) => criterion(a),
        Command::Charsum(a) => charsum(a),
        Command::Fit(a) => fit(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::InvalidModulus(_) | Error::InvalidConstant { .. } => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}
