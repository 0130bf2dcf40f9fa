//! Prime sweeps: configuration, flat output records, CSV/JSON emission and
//! log-log exponent fitting.
//!
//! Output is a pure function of the configuration. Work is spread over a
//! bounded rayon pool, and results are collected in canonical `(p, c)` order,
//! so the thread count never changes a byte of the output.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsum::{build_table, shao_statistic, weil_moment, SpacedFamily};
use crate::error::{Error, Result};
use crate::hyperbola::{min_box_fast_with, HyperbolaInstance};
use crate::modarith::{primes_in, Modulus, QuadraticCharacter, MAX_MODULUS};
use crate::nqr::{dichotomy_check, least_nonresidue, DichotomyRecord};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Minbox,
    Dichotomy,
    Shao,
    Moment,
    Nqr,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Minbox,
        Mode::Dichotomy,
        Mode::Shao,
        Mode::Moment,
        Mode::Nqr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Minbox => "minbox",
            Mode::Dichotomy => "dichotomy",
            Mode::Shao => "shao",
            Mode::Moment => "moment",
            Mode::Nqr => "nqr",
        }
    }

    /// CSV column names, in order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Mode::Minbox => &[
                "p", "c", "h_star", "x1", "y1", "x2", "y2", "a", "b_sign", "b",
            ],
            Mode::Dichotomy => &[
                "p",
                "n_p",
                "epsilon",
                "C",
                "threshold_A",
                "branch_A",
                "max_h_star",
                "threshold_B",
                "branch_B",
            ],
            Mode::Shao => &["p", "r", "H", "J", "value", "bound", "ratio"],
            Mode::Moment => &["p", "c", "r", "U", "value", "bound", "ratio"],
            Mode::Nqr => &["p", "n_p"],
        }
    }

    pub fn header(self) -> String {
        self.columns().join(",")
    }

    /// Whether one record is produced per `(p, c)` rather than per `p`.
    pub fn per_constant(self) -> bool {
        matches!(self, Mode::Minbox | Mode::Moment)
    }

    fn min_prime(self) -> u64 {
        match self {
            Mode::Minbox | Mode::Dichotomy => 5,
            _ => 3,
        }
    }

    /// The mode whose column list equals `columns`.
    pub fn from_columns<S: AsRef<str>>(columns: &[S]) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| {
            m.columns().len() == columns.len()
                && m.columns()
                    .iter()
                    .zip(columns)
                    .all(|(a, b)| *a == b.as_ref())
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown mode `{s}`")))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!("unknown format `{s}` (csv or json)"))),
        }
    }
}

/// Which constants `c` to visit at each prime.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum CMode {
    #[default]
    All,
    /// Explicit values; those outside `[1, p-1]` are skipped at each prime.
    List(Vec<u64>),
    /// `k` distinct values per prime from a generator seeded by `(seed, p)`.
    Sample { k: usize, seed: u64 },
}

impl CMode {
    /// Parses `all`, `sample:K` or a comma-separated list.
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(CMode::All);
        }
        if let Some(k) = s.strip_prefix("sample:") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Usage(format!("bad sample size in `{s}`")))?;
            if k == 0 {
                return Err(Error::Usage("sample size must be positive".into()));
            }
            return Ok(CMode::Sample { k, seed });
        }
        let mut values = s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Usage(format!("bad value `{v}` in --c")))
            })
            .collect::<Result<Vec<_>>>()?;
        values.sort_unstable();
        values.dedup();
        Ok(CMode::List(values))
    }

    pub fn constants(&self, p: u64) -> Vec<u64> {
        match self {
            CMode::All => (1..p).collect(),
            CMode::List(v) => v.iter().copied().filter(|&c| c >= 1 && c < p).collect(),
            CMode::Sample { k, seed } => {
                let n = (p - 1) as usize;
                if *k >= n {
                    return (1..p).collect();
                }
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let mut cs: Vec<u64> = rand::seq::index::sample(&mut rng, n, *k)
                    .into_iter()
                    .map(|i| i as u64 + 1)
                    .collect();
                cs.sort_unstable();
                cs
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub p_min: u64,
    pub p_max: u64,
    pub c_mode: CMode,
    pub mode: Mode,
    /// `H` for shao, `U` for moment; defaults to `ceil(p^(1/(2r)))`.
    pub window: Option<u64>,
    pub r: u32,
    pub epsilon: f64,
    pub constant: f64,
    pub threads: usize,
    pub format: Format,
    pub out: Option<std::path::PathBuf>,
}

impl SweepConfig {
    pub fn new(mode: Mode, p_min: u64, p_max: u64) -> Self {
        SweepConfig {
            p_min,
            p_max,
            c_mode: CMode::All,
            mode,
            window: None,
            r: 1,
            epsilon: 0.1,
            constant: 2.0,
            threads: 1,
            format: Format::Csv,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(Error::Usage(m));
        if self.p_min > self.p_max {
            return usage(format!("p-min {} exceeds p-max {}", self.p_min, self.p_max));
        }
        if self.p_max >= MAX_MODULUS {
            return usage(format!("p-max must be below 2^62, got {}", self.p_max));
        }
        if self.threads == 0 {
            return usage("threads must be positive".into());
        }
        if self.r == 0 {
            return usage("r must be positive".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return usage(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.constant > 0.0 && self.constant.is_finite()) {
            return usage(format!("C must be positive, got {}", self.constant));
        }
        if self.window == Some(0) {
            return usage("H must be positive".into());
        }
        if let CMode::Sample { k: 0, .. } = self.c_mode {
            return usage("sample size must be positive".into());
        }
        Ok(())
    }

    /// Primes the sweep visits.
    pub fn primes(&self) -> Vec<u64> {
        primes_in(self.p_min.max(self.mode.min_prime()), self.p_max)
    }
}

/// Smallest `U >= 1` with `U^(2r) >= p`.
pub fn default_window(p: u64, r: u32) -> u64 {
    let e = 2 * r;
    let pow_ge = |u: u64| (u as u128).checked_pow(e).is_none_or(|v| v >= p as u128);
    let mut u = ((p as f64).powf(1.0 / e as f64).ceil() as u64).max(1);
    while u > 1 && pow_ge(u - 1) {
        u -= 1;
    }
    while !pow_ge(u) {
        u += 1;
    }
    u
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinboxRecord {
    pub p: u64,
    pub c: u64,
    pub h_star: u64,
    pub x1: u64,
    pub y1: u64,
    pub x2: u64,
    pub y2: u64,
    pub a: u64,
    pub b_sign: i8,
    pub b: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NqrRecord {
    pub p: u64,
    pub n_p: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShaoRecord {
    pub p: u64,
    pub r: u32,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "J")]
    pub j: u64,
    pub value: u128,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub p: u64,
    pub c: u64,
    pub r: u32,
    #[serde(rename = "U")]
    pub u: u64,
    pub value: u128,
    pub bound: f64,
    pub ratio: f64,
}

/// One output row. Serializes as the flat object of the inner record.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SweepRecord {
    Minbox(MinboxRecord),
    Dichotomy(DichotomyRecord),
    Shao(ShaoRecord),
    Moment(MomentRecord),
    Nqr(NqrRecord),
}

impl SweepRecord {
    pub fn mode(&self) -> Mode {
        match self {
            SweepRecord::Minbox(_) => Mode::Minbox,
            SweepRecord::Dichotomy(_) => Mode::Dichotomy,
            SweepRecord::Shao(_) => Mode::Shao,
            SweepRecord::Moment(_) => Mode::Moment,
            SweepRecord::Nqr(_) => Mode::Nqr,
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            SweepRecord::Minbox(r) => r.p,
            SweepRecord::Dichotomy(r) => r.p,
            SweepRecord::Shao(r) => r.p,
            SweepRecord::Moment(r) => r.p,
            SweepRecord::Nqr(r) => r.p,
        }
    }

    /// Numeric value of a named column; booleans read as 0 or 1.
    pub fn field(&self, name: &str) -> Option<f64> {
        let v = serde_json::to_value(self).expect("records serialize");
        match v.get(name)? {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::Bool(b) => Some(*b as u8 as f64),
            _ => None,
        }
    }

    fn write_csv<W: Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        match self {
            SweepRecord::Minbox(r) => w.serialize(r),
            SweepRecord::Dichotomy(r) => w.serialize(r),
            SweepRecord::Shao(r) => w.serialize(r),
            SweepRecord::Moment(r) => w.serialize(r),
            SweepRecord::Nqr(r) => w.serialize(r),
        }
    }
}

fn minbox_records(p: Modulus, cs: &[u64]) -> Result<Vec<SweepRecord>> {
    let chi = QuadraticCharacter::new(p);
    cs.par_iter()
        .map(|&c| {
            let inst = HyperbolaInstance::new(p, c as i64)?;
            let res = min_box_fast_with(&chi, &inst)?;
            let (u, v) = res.witness;
            Ok(SweepRecord::Minbox(MinboxRecord {
                p: p.get(),
                c,
                h_star: res.h_star,
                x1: u.x,
                y1: u.y,
                x2: v.x,
                y2: v.y,
                a: res.offset.a,
                b_sign: res.offset.b_sign,
                b: res.offset.b_magnitude,
            }))
        })
        .collect()
}

fn moment_records(cfg: &SweepConfig, p: Modulus, cs: &[u64]) -> Result<Vec<SweepRecord>> {
    let u = cfg
        .window
        .unwrap_or_else(|| default_window(p.get(), cfg.r))
        .min(p.get() - 1);
    cs.par_iter()
        .map(|&c| {
            let rep = weil_moment(p, c as i64, u, cfg.r)?;
            Ok(SweepRecord::Moment(MomentRecord {
                p: p.get(),
                c,
                r: cfg.r,
                u,
                value: rep.value,
                bound: rep.bound,
                ratio: rep.ratio,
            }))
        })
        .collect()
}

fn shao_record(cfg: &SweepConfig, p: Modulus) -> Result<SweepRecord> {
    let h = cfg
        .window
        .unwrap_or_else(|| default_window(p.get(), cfg.r))
        .min(p.get() - 1);
    let table = build_table(p)?;
    let family = SpacedFamily::arithmetic(p, h)?;
    let rep = shao_statistic(&table, &family, h, cfg.r)?;
    Ok(SweepRecord::Shao(ShaoRecord {
        p: p.get(),
        r: cfg.r,
        h,
        j: family.len() as u64,
        value: rep.value,
        bound: rep.bound,
        ratio: rep.ratio,
    }))
}

fn records_for_prime(cfg: &SweepConfig, p: u64) -> Result<Vec<SweepRecord>> {
    let m = Modulus::new(p)?;
    match cfg.mode {
        Mode::Minbox => minbox_records(m, &cfg.c_mode.constants(p)),
        Mode::Moment => moment_records(cfg, m, &cfg.c_mode.constants(p)),
        Mode::Shao => Ok(vec![shao_record(cfg, m)?]),
        Mode::Nqr => Ok(vec![SweepRecord::Nqr(NqrRecord {
            p,
            n_p: least_nonresidue(m).n_p,
        })]),
        Mode::Dichotomy => Ok(vec![SweepRecord::Dichotomy(dichotomy_check(
            m,
            cfg.epsilon,
            cfg.constant,
        )?)]),
    }
}

/// Runs the sweep on a pool of `cfg.threads` workers. Records come back
/// sorted by `(p, c)`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let primes = cfg.primes();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let chunks: Vec<Vec<SweepRecord>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| records_for_prime(cfg, p))
            .collect::<Result<_>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Least-squares line through `(log p, log field)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub n_points: usize,
    pub reference_exponents: [f64; 2],
}

pub const REFERENCE_EXPONENTS: [f64; 2] = [0.25, 1.0 / 6.0];

/// Fits `log y = alpha log x + beta` by ordinary least squares.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Usage(format!(
            "a fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y >= 1.0)) {
        return Err(Error::Usage(format!(
            "cannot fit point ({x}, {y}): need x > 0, y >= 1"
        )));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Usage("a fit needs distinct abscissae".into()));
    }
    let alpha = sxy / sxx;
    Ok(FitResult {
        alpha,
        beta: my - alpha * mx,
        n_points: points.len(),
        reference_exponents: REFERENCE_EXPONENTS,
    })
}

/// Fits the per-prime maximum of `field` against `p`.
pub fn fit_exponent(records: &[SweepRecord], field: &str) -> Result<FitResult> {
    let mut per_p: Vec<(u64, f64)> = Vec::new();
    for rec in records {
        let v = rec
            .field(field)
            .ok_or_else(|| Error::Usage(format!("records have no numeric field `{field}`")))?;
        match per_p.iter_mut().find(|(p, _)| *p == rec.p()) {
            Some(slot) => slot.1 = slot.1.max(v),
            None => per_p.push((rec.p(), v)),
        }
    }
    let points: Vec<(f64, f64)> = per_p.into_iter().map(|(p, v)| (p as f64, v)).collect();
    fit_power_law(&points)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes the records as CSV with the mode's header; an empty list yields
/// the header alone.
pub fn write_csv<W: Write>(mode: Mode, records: &[SweepRecord], mut out: W) -> Result<()> {
    writeln!(out, "{}", mode.header())?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for rec in records {
        if rec.mode() != mode {
            return Err(Error::Usage(format!(
                "{} record in a {mode} table",
                rec.mode()
            )));
        }
        rec.write_csv(&mut w).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the records as a pretty-printed JSON array of flat objects.
pub fn write_json<W: Write>(records: &[SweepRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn emit<W: Write>(mode: Mode, records: &[SweepRecord], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(mode, records, out),
        Format::Json => write_json(records, out),
    }
}

fn parse_record<'de, D: serde::Deserializer<'de>>(
    mode: Mode,
    d: D,
) -> std::result::Result<SweepRecord, D::Error> {
    Ok(match mode {
        Mode::Minbox => SweepRecord::Minbox(Deserialize::deserialize(d)?),
        Mode::Dichotomy => SweepRecord::Dichotomy(Deserialize::deserialize(d)?),
        Mode::Shao => SweepRecord::Shao(Deserialize::deserialize(d)?),
        Mode::Moment => SweepRecord::Moment(Deserialize::deserialize(d)?),
        Mode::Nqr => SweepRecord::Nqr(Deserialize::deserialize(d)?),
    })
}

/// Reads a CSV table back; the mode is recognised from the header.
pub fn read_csv<R: Read>(input: R) -> Result<(Mode, Vec<SweepRecord>)> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    let mode = Mode::from_columns(&cols)
        .ok_or_else(|| Error::Usage(format!("unrecognised CSV header `{}`", cols.join(","))))?;
    let records = rdr
        .records()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            csv_row(mode, &row, &headers).map_err(csv_err)
        })
        .collect::<Result<_>>()?;
    Ok((mode, records))
}

fn csv_row(
    mode: Mode,
    row: &csv::StringRecord,
    headers: &csv::StringRecord,
) -> csv::Result<SweepRecord> {
    let h = Some(headers);
    Ok(match mode {
        Mode::Minbox => SweepRecord::Minbox(row.deserialize(h)?),
        Mode::Dichotomy => SweepRecord::Dichotomy(row.deserialize(h)?),
        Mode::Shao => SweepRecord::Shao(row.deserialize(h)?),
        Mode::Moment => SweepRecord::Moment(row.deserialize(h)?),
        Mode::Nqr => SweepRecord::Nqr(row.deserialize(h)?),
    })
}

/// Reads a JSON array produced by [`write_json`]. With no `mode` hint the
/// mode is recognised from the keys of the first object; an empty array
/// needs the hint.
pub fn read_json<R: Read>(input: R, mode: Option<Mode>) -> Result<(Mode, Vec<SweepRecord>)> {
    let values: Vec<serde_json::Value> =
        serde_json::from_reader(input).map_err(|e| Error::Io(e.to_string()))?;
    let mode = match (mode, values.first()) {
        (Some(m), _) => m,
        (None, Some(serde_json::Value::Object(obj))) => {
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            Mode::ALL
                .into_iter()
                .find(|m| {
                    m.columns().len() == keys.len() && m.columns().iter().all(|c| keys.contains(c))
                })
                .ok_or_else(|| Error::Usage("unrecognised JSON record keys".into()))?
        }
        _ => {
            return Err(Error::Usage(
                "cannot infer the mode of an empty JSON array".into(),
            ))
        }
    };
    let records = values
        .into_iter()
        .map(|v| parse_record(mode, v).map_err(|e| Error::Io(e.to_string())))
        .collect::<Result<_>>()?;
    Ok((mode, records))
}
