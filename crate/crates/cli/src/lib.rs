//! Argument parsing, dispatch and output for the `sqrtcf` binary.
//!
//! Every subcommand builds a [`Table`] of records sorted by `D` and hands it
//! to [`emit`]. Output does not depend on `--workers`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sqrtcf::analytic::{period_bound_check_at, q51_scan};
use sqrtcf::int::{is_square, is_squarefree};
use sqrtcf::scan::{map_in_blocks, scan_primes, ScanRequest, Verdict, DEFAULT_BLOCK};
use sqrtcf::theorems::l_sets;
use sqrtcf::{expand_sqrt, Form, TheoremId};

pub const DEFAULT_SEED: u64 = 20_160_601;

#[derive(Debug, Clone, Parser)]
#[command(name = "sqrtcf", version, about = "Continued fractions of square roots: expansions, theorem scans, families, analytic bounds")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Lower end of the range (inclusive).
    #[arg(long, global = true, default_value_t = 1)]
    pub min: u64,
    /// Upper end of the range (inclusive).
    #[arg(long, global = true)]
    pub max: Option<u64>,
    /// Output format; defaults to jsonl for expand and family, csv otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Expand sqrt(D). CSV columns: D,a0,T,period (period space separated).
    Expand {
        /// Radicand; repeatable. Without --d every non-square D in --min..=--max.
        #[arg(long = "d")]
        d: Vec<String>,
        /// Draw this many radicands from --min..=--max with --seed instead.
        #[arg(long, conflicts_with = "d")]
        sample: Option<usize>,
    },
    /// Check theorems on primes in --min..=--max.
    /// CSV columns: p,form,D,theorem,verdict,witness.
    Scan {
        #[arg(long, value_delimiter = ',', default_value = "p,2p")]
        forms: Vec<Form>,
        #[arg(long, value_delimiter = ',', default_value = "TA,TB,TA2,C2,T2,C3,PELL,MOD8,PP")]
        theorems: Vec<TheoremId>,
        /// Primes per work block.
        #[arg(long, default_value_t = DEFAULT_BLOCK)]
        block: usize,
    },
    /// Family for a palindromic inner word, e.g. --word 1,1,1.
    /// CSV columns: t,D,a0,prime,match,minimal.
    Family {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Number of admissible t to round-trip.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Period bound via L(1, chi). CSV columns:
    /// D,Delta,L1_lo,L1_hi,reg,h,T,bound_rhs,holds.
    /// With --q51: m,p,T,ratio,flagged.
    Analytic {
        #[arg(long = "d", conflicts_with = "max_d")]
        d: Option<u64>,
        /// Every squarefree D in 2..=MAX_D.
        #[arg(long)]
        max_d: Option<u64>,
        /// Width of the L(1, chi) enclosure.
        #[arg(long, default_value_t = 1e-3)]
        precision: f64,
        /// Ratio scan T_{p_m} / (sqrt(m) log m) for 5 <= m <= M.
        #[arg(long, conflicts_with_all = ["d", "max_d"])]
        q51: Option<usize>,
    },
    /// Primes p <= --max whose period of sqrt(p) holds exactly I ones.
    /// CSV columns: i,p.
    Lsets {
        #[arg(long)]
        i: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O: {0}")]
    Io(#[from] io::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] sqrtcf::Error),
}

impl CliError {
    /// 2 for falsified statements and broken invariants, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_fatal() => 2,
            _ => 1,
        }
    }
}

/// Records ready for output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Vec<Value>,
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub checked: usize,
    pub agreements: usize,
    pub violations: Vec<(String, String, String)>,
    pub flagged: usize,
    pub elapsed: Duration,
}

impl Summary {
    pub fn exit_code(&self) -> u8 {
        if self.violations.is_empty() {
            0
        } else {
            2
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "checked {}, agree {}, violations {}, flagged {} in {:.2}s",
            self.checked,
            self.agreements,
            self.violations.len(),
            self.flagged,
            self.elapsed.as_secs_f64()
        )?;
        for (d, th, detail) in &self.violations {
            write!(f, "\nviolation D={d} {th}: {detail}")?;
        }
        Ok(())
    }
}

/// Writes a header row (always) and one row per record, or one JSON object
/// per line.
pub fn emit(table: &Table, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.header)?;
            for r in &table.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for v in &table.json {
                serde_json::to_writer(&mut *out, v).map_err(io::Error::from)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Runs one command and writes its output.
pub fn run(cli: &Cli) -> Result<Summary, CliError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.workers as usize)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (table, mut summary) = pool.install(|| dispatch(cli))?;
    let format = cli.common.format.unwrap_or(match cli.command {
        Command::Expand { .. } | Command::Family { .. } => Format::Jsonl,
        _ => Format::Csv,
    });
    match &cli.common.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            emit(&table, format, &mut f)?;
        }
        None => emit(&table, format, &mut io::stdout().lock())?,
    }
    summary.elapsed = start.elapsed();
    Ok(summary)
}

fn dispatch(cli: &Cli) -> Result<(Table, Summary), CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Expand { d, sample } => expand(c, d, *sample),
        Command::Scan { forms, theorems, block } => scan(c, forms, theorems, *block),
        Command::Family { word, count } => family(word, *count),
        Command::Analytic { q51: Some(m), .. } => ratio_scan(*m),
        Command::Analytic { d, max_d, precision, q51: None } => analytic(*d, *max_d, *precision),
        Command::Lsets { i } => lsets(*i, require_max(c)?),
    }
}

fn require_max(c: &Common) -> Result<u64, CliError> {
    let max = c.max.ok_or_else(|| CliError::Usage("--max is required".into()))?;
    if c.min > max {
        return Err(CliError::Usage(format!("--min {} exceeds --max {max}", c.min)));
    }
    Ok(max)
}

/// JSON number with all digits of `n`.
fn num(n: &impl ToString) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal")
}

fn expand_one(d: &BigInt) -> sqrtcf::Result<(Vec<String>, Value)> {
    let small = i64::try_from(d).ok().filter(|&x| x <= i64::MAX / 4);
    let (a0, period): (String, Vec<String>) = match small {
        Some(x) => {
            let e = expand_sqrt(&x)?;
            (e.a0.to_string(), e.period.iter().map(i64::to_string).collect())
        }
        None => {
            let e = expand_sqrt(d)?;
            (e.a0.to_string(), e.period.iter().map(BigInt::to_string).collect())
        }
    };
    let json = json!({
        "D": num(d),
        "a0": num(&a0),
        "period": period.iter().map(num).collect::<Vec<_>>(),
        "T": period.len(),
    });
    let row = vec![d.to_string(), a0, period.len().to_string(), period.join(" ")];
    Ok((row, json))
}

fn expand(c: &Common, ds: &[String], sample: Option<usize>) -> Result<(Table, Summary), CliError> {
    let mut values: Vec<BigInt> = if !ds.is_empty() {
        ds.iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|_| CliError::Usage(format!("--d {s:?} is not an integer"))))
            .collect::<Result<_, _>>()?
    } else {
        let max = require_max(c)?;
        let range: Vec<u64> = match sample {
            Some(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                let mut v: Vec<u64> = (0..n).map(|_| rng.gen_range(c.min..=max)).collect();
                v.retain(|&d| !is_square(&(d as i64)));
                v
            }
            None => (c.min..=max).filter(|&d| !is_square(&(d as i64))).collect(),
        };
        range.into_iter().map(BigInt::from).collect()
    };
    values.sort();
    values.dedup();
    let out = map_in_blocks(&values, DEFAULT_BLOCK, expand_one)?;
    let mut table = Table {
        header: vec!["D", "a0", "T", "period"],
        ..Default::default()
    };
    for (row, json) in out {
        table.rows.push(row);
        table.json.push(json);
    }
    let summary = Summary {
        checked: values.len(),
        agreements: values.len(),
        ..Default::default()
    };
    Ok((table, summary))
}

fn scan(c: &Common, forms: &[Form], theorems: &[TheoremId], block: usize) -> Result<(Table, Summary), CliError> {
    let max = require_max(c)?;
    if theorems.is_empty() {
        return Err(CliError::Usage("no theorem selected".into()));
    }
    let mut req = ScanRequest::new(c.min, max, forms.to_vec(), theorems.to_vec());
    req.block = block.max(1);
    let mut rows = scan_primes(&req)?;
    rows.sort_by_key(|r| (r.d, r.form, r.theorem));
    let mut table = Table {
        header: vec!["p", "form", "D", "theorem", "verdict", "witness"],
        ..Default::default()
    };
    let mut summary = Summary {
        checked: rows.len(),
        ..Default::default()
    };
    for r in &rows {
        match r.verdict {
            Verdict::Agree => summary.agreements += 1,
            Verdict::Flagged => summary.flagged += 1,
            Verdict::Violation => {
                summary
                    .violations
                    .push((r.d.to_string(), r.theorem.to_string(), r.witness.clone()))
            }
        }
        table.rows.push(vec![
            r.p.to_string(),
            r.form.label().into(),
            r.d.to_string(),
            r.theorem.to_string(),
            r.verdict.to_string(),
            r.witness.clone(),
        ]);
        table.json.push(json!({
            "p": r.p,
            "form": r.form.label(),
            "D": r.d,
            "theorem": r.theorem.as_str(),
            "verdict": r.verdict.as_str(),
            "witness": r.witness,
        }));
    }
    Ok((table, summary))
}

fn parse_word(word: &str) -> Result<Vec<u64>, CliError> {
    word.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| CliError::Usage(format!("bad letter {s:?} in --word"))))
        .collect()
}

fn family(word: &str, count: usize) -> Result<(Table, Summary), CliError> {
    let letters = parse_word(word)?;
    let report = sqrtcf::family::family_report(&letters, count)?;
    let mut table = Table {
        header: vec!["t", "D", "a0", "prime", "match", "minimal"],
        ..Default::default()
    };
    let mut summary = Summary::default();
    let text = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    for r in report["roundtrip"].as_array().into_iter().flatten() {
        summary.checked += 1;
        if r["match"] == Value::Bool(true) {
            summary.agreements += 1;
        } else {
            summary
                .violations
                .push((text(&r["D"]), "family".into(), "period is not the word".into()));
        }
        table
            .rows
            .push(["t", "D", "a0", "prime", "match", "minimal"].iter().map(|k| text(&r[*k])).collect());
    }
    table.json.push(report);
    Ok((table, summary))
}

fn analytic(d: Option<u64>, max_d: Option<u64>, precision: f64) -> Result<(Table, Summary), CliError> {
    if precision.is_nan() || precision <= 0.0 {
        return Err(CliError::Usage(format!("--precision {precision} must be positive")));
    }
    let ds: Vec<u64> = match (d, max_d) {
        (Some(d), _) => vec![d],
        (None, Some(m)) => (2..=m).filter(|&d| is_squarefree(d)).collect(),
        (None, None) => return Err(CliError::Usage("analytic needs --d, --max-d or --q51".into())),
    };
    let reports = map_in_blocks(&ds, 64, |&d| period_bound_check_at(d, precision))?;
    let mut table = Table {
        header: vec!["D", "Delta", "L1_lo", "L1_hi", "reg", "h", "T", "bound_rhs", "holds"],
        ..Default::default()
    };
    let mut summary = Summary {
        checked: reports.len(),
        ..Default::default()
    };
    for r in &reports {
        let growth = r.growth.doubling && r.growth.final_bound;
        if r.holds && growth {
            summary.agreements += 1;
        } else {
            summary.violations.push((
                r.d.to_string(),
                "bound".into(),
                format!("T={} rhs={} growth={growth}", r.t, r.bound_rhs),
            ));
        }
        table.rows.push(vec![
            r.d.to_string(),
            r.delta.to_string(),
            r.l1.lo.to_string(),
            r.l1.hi.to_string(),
            r.regulator.mid().to_string(),
            r.h.to_string(),
            r.t.to_string(),
            r.bound_rhs.to_string(),
            r.holds.to_string(),
        ]);
        table.json.push(json!({
            "D": r.d,
            "Delta": r.delta,
            "L1_lo": r.l1.lo,
            "L1_hi": r.l1.hi,
            "reg": r.regulator.mid(),
            "h": r.h,
            "T": r.t,
            "bound_rhs": r.bound_rhs,
            "holds": r.holds,
            "reg_lo": r.regulator.lo,
            "reg_hi": r.regulator.hi,
            "unit_x": num(&r.epsilon.x),
            "unit_y": num(&r.epsilon.y),
            "unit_power": r.tower_j,
            "h_alt": r.h_alt,
            "doubling": r.growth.doubling,
            "final_bound": r.growth.final_bound,
        }));
    }
    Ok((table, summary))
}

fn ratio_scan(m: usize) -> Result<(Table, Summary), CliError> {
    let report = q51_scan(m)?;
    let mut table = Table {
        header: vec!["m", "p", "T", "ratio", "flagged"],
        ..Default::default()
    };
    let mut summary = Summary {
        checked: report.rows.len(),
        ..Default::default()
    };
    for r in &report.rows {
        if r.flagged() {
            summary.flagged += 1;
        } else {
            summary.agreements += 1;
        }
        table.rows.push(vec![
            r.m.to_string(),
            r.p.to_string(),
            r.t.to_string(),
            r.ratio.to_string(),
            r.flagged().to_string(),
        ]);
        table.json.push(json!({"m": r.m, "p": r.p, "T": r.t, "ratio": r.ratio, "flagged": r.flagged()}));
    }
    eprintln!("max ratio {} at m = {}", report.max_ratio, report.argmax);
    Ok((table, summary))
}

fn lsets(i: usize, max: u64) -> Result<(Table, Summary), CliError> {
    let res = l_sets(i, max);
    let table = Table {
        header: vec!["i", "p"],
        rows: res.members.iter().map(|p| vec![i.to_string(), p.to_string()]).collect(),
        json: vec![json!({"i": i, "bound": max, "members": res.members})],
    };
    let summary = Summary {
        checked: res.members.len(),
        agreements: res.members.len(),
        ..Default::default()
    };
    Ok((table, summary))
}
