//! A parallel sweep written as CSV and JSON, read back, and fitted on log-log
//! axes.
//!
//!     cargo run --release --example sweep_and_fit

use modhyp::sweep::{
    emit, fit_exponent, read_csv, read_json, run_sweep, CMode, Format, Mode, SweepConfig,
};

fn main() -> modhyp::Result<()> {
    let mut cfg = SweepConfig::new(Mode::Minbox, 100, 3000);
    cfg.c_mode = CMode::Sample { k: 20, seed: 1 };
    cfg.threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let records = run_sweep(&cfg)?;

    let mut csv = Vec::new();
    emit(cfg.mode, &records, Format::Csv, &mut csv)?;
    let mut json = Vec::new();
    emit(cfg.mode, &records, Format::Json, &mut json)?;
    let (_, from_csv) = read_csv(csv.as_slice())?;
    let (_, from_json) = read_json(json.as_slice(), Some(Mode::Minbox))?;
    assert_eq!(from_csv, records);
    assert_eq!(from_json, records);
    println!(
        "{} records, {} bytes CSV, {} bytes JSON",
        records.len(),
        csv.len(),
        json.len()
    );
    for line in String::from_utf8_lossy(&csv).lines().take(4) {
        println!("{line}");
    }
    println!("...");

    let fit = fit_exponent(&records, "h_star")?;
    println!(
        "max h* ~ {:.3} p^{:.4} over {} primes (reference exponents {:.4}, {:.4})",
        fit.beta.exp(),
        fit.alpha,
        fit.n_points,
        fit.reference_exponents[0],
        fit.reference_exponents[1]
    );

    let mut nqr = SweepConfig::new(Mode::Nqr, 3, 200_000);
    nqr.threads = cfg.threads;
    let fit = fit_exponent(&run_sweep(&nqr)?, "n_p")?;
    println!("max n_p ~ p^{:.4} over {} primes", fit.alpha, fit.n_points);
    Ok(())
}
