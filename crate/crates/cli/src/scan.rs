//! Batch runs over all ordered pairs below a bound.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use capitula_core::ambiguous::is_type_222;
use capitula_core::numtheory::{primes_one_mod_four, validate_pair_u64};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::report::{build_report, FieldReport};
use crate::Settings;

/// Pairs handed to the worker pool at a time; output order is preserved
/// within and across chunks.
const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    #[value(name = "222")]
    Type222,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Jsonl,
    Csv,
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    p1: String,
    p2: String,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Summary {
    pub pairs: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub type_222: usize,
    /// `(tower, case label) → count`.
    pub cases: BTreeMap<(String, String), usize>,
    /// `(tower, size) → count`.
    pub sizes: BTreeMap<(String, u64), usize>,
}

impl Summary {
    fn add(&mut self, r: &FieldReport) {
        self.pairs += 1;
        if r.passed() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.type_222 += r.type_222 as usize;
        let b = &r.branches;
        for (t, label) in [("K1", b.k1), ("K2", b.k2), ("K3", b.k3)] {
            *self.cases.entry((t.into(), label.into())).or_default() += 1;
        }
        let k = &r.kernels;
        for (t, size) in [
            ("K1", k.k1.size),
            ("K2", k.k2.size),
            ("K3", k.k3.size),
            ("genus", k.genus.size),
        ] {
            *self.sizes.entry((t.into(), size)).or_default() += 1;
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "pairs {}  pass {}  fail {}  errors {}  type_222 {}",
            self.pairs + self.errors,
            self.passed,
            self.failed,
            self.errors,
            self.type_222
        );
        let _ = writeln!(s, "cases:");
        for ((t, label), n) in &self.cases {
            let _ = writeln!(s, "  {t} {label:<6} {n}");
        }
        let _ = writeln!(s, "kernel sizes:");
        for ((t, size), n) in &self.sizes {
            let _ = writeln!(s, "  {t:<5} {size:<3} {n}");
        }
        s
    }
}

/// Ordered pairs of distinct primes `≡ 1 (mod 4)` up to `max`.
pub fn scan_pairs(max: u64, filter: Filter) -> Vec<(u64, u64)> {
    let ps = if max >= 5 {
        primes_one_mod_four(max)
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for &a in &ps {
        for &b in &ps {
            if a == b {
                continue;
            }
            if filter == Filter::Type222
                && !is_type_222(&validate_pair_u64(a, b).expect("generated pairs are valid"))
            {
                continue;
            }
            out.push((a, b));
        }
    }
    out
}

enum Sink<'a> {
    Jsonl(&'a mut dyn Write),
    Csv(csv::Writer<&'a mut dyn Write>),
}

/// Streams one record per pair to `out` and returns the aggregate counts.
pub fn run_scan(
    out: &mut dyn Write,
    max: u64,
    filter: Filter,
    format: ScanFormat,
    settings: &Settings,
) -> CliResult<Summary> {
    let pairs = scan_pairs(max, filter);
    let mut summary = Summary::default();
    let mut sink = match format {
        ScanFormat::Jsonl => Sink::Jsonl(out),
        ScanFormat::Csv => Sink::Csv(
            csv::WriterBuilder::new()
                .quote_style(csv::QuoteStyle::NonNumeric)
                .from_writer(out),
        ),
    };
    for chunk in pairs.chunks(CHUNK) {
        let results: Vec<_> = chunk
            .par_iter()
            .map(|&(a, b)| {
                let pair = validate_pair_u64(a, b).expect("generated pairs are valid");
                ((a, b), build_report(&pair, settings))
            })
            .collect();
        for ((a, b), result) in results {
            match result {
                Ok(report) => {
                    summary.add(&report);
                    match &mut sink {
                        Sink::Csv(w) => w.serialize(report.csv_row())?,
                        Sink::Jsonl(out) => writeln!(out, "{}", report.to_json())?,
                    }
                }
                Err(e) => {
                    summary.errors += 1;
                    let cli: CliError = e.into();
                    let rec = ErrorRecord {
                        p1: a.to_string(),
                        p2: b.to_string(),
                        error: ErrorBody {
                            code: cli.code(),
                            message: cli.to_string(),
                        },
                    };
                    let line = serde_json::to_string(&rec).expect("serializes");
                    match &mut sink {
                        Sink::Jsonl(out) => writeln!(out, "{line}")?,
                        Sink::Csv(_) => eprintln!("{line}"),
                    }
                }
            }
        }
        match &mut sink {
            Sink::Jsonl(out) => out.flush()?,
            Sink::Csv(w) => w.flush()?,
        }
    }
    Ok(summary)
}
