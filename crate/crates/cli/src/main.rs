use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use capitula::error::{CliError, CliResult};
use capitula::report::{build_report, UnitJson};
use capitula::scan::{run_scan, Filter, ScanFormat};
use capitula::tables::{write_table, TableSet};
use capitula::{Format, Settings};
use capitula_core::numtheory::{validate_pair, Integer};
use capitula_core::pell::{fundamental_unit_with_cap, DEFAULT_PERIOD_CAP};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "capitula", version, about = "Units, ambiguous classes and capitulation for Q(√(2·p1·p2), i)")]
struct Cli {
    /// Minimum working precision of the numeric square test (0 = automatic).
    #[arg(long, global = true, env = "CAPITULA_PRECISION_BITS", default_value_t = 0)]
    precision_bits: u32,
    /// Maximum continued-fraction period examined by the Pell solver.
    #[arg(long, global = true, env = "CAPITULA_PERIOD_CAP", default_value_t = DEFAULT_PERIOD_CAP)]
    period_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one ordered pair of primes.
    Report {
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Regenerate one of the published example tables.
    Tables {
        #[arg(value_enum)]
        set: TableSet,
        /// Also list every row with p1 and p2 exchanged.
        #[arg(long)]
        both_orders: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full pipeline on every ordered pair with both primes ≤ max.
    Scan {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
        /// Record file; records go to stdout and the summary to stderr if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScanFormat::Jsonl)]
        format: ScanFormat,
    },
    /// Fundamental unit of Q(√d).
    Unit {
        #[arg(long)]
        d: String,
        #[arg(long, value_enum, default_value_t = UnitFormat::Text)]
        format: UnitFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct UnitRecord {
    d: String,
    #[serde(flatten)]
    unit: UnitJson,
    period: usize,
    text: String,
}

fn parse_integer(name: &str, s: &str) -> CliResult<Integer> {
    s.trim().parse().map_err(|_| CliError::Input {
        code: "not_an_integer",
        message: format!("{name} = {s:?} is not an integer"),
    })
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let settings = Settings {
        precision_bits: cli.precision_bits,
        period_cap: cli.period_cap,
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Report { p1, p2, format } => {
            let pair = validate_pair(&parse_integer("p1", &p1)?, &parse_integer("p2", &p2)?)
                .map_err(capitula_core::Error::from)?;
            let report = build_report(&pair, &settings)?;
            match format {
                Format::Json => writeln!(out, "{}", report.to_json_pretty())?,
                Format::Text => write!(out, "{}", report.to_text())?,
                Format::Csv => {
                    let mut w = csv::WriterBuilder::new()
                        .quote_style(csv::QuoteStyle::NonNumeric)
                        .from_writer(&mut out);
                    w.serialize(report.csv_row())?;
                    w.flush()?;
                }
            }
            out.flush()?;
            if !report.passed() {
                return Err(CliError::Internal {
                    code: "main_theorem_failed",
                    message: report.violations.join("; "),
                });
            }
        }
        Command::Tables {
            set,
            both_orders,
            format,
        } => {
            write_table(&mut out, set, both_orders, format, &settings)?;
            out.flush()?;
        }
        Command::Scan {
            max,
            filter,
            out: path,
            format,
        } => {
            let summary = match &path {
                Some(p) => {
                    let mut file = BufWriter::new(File::create(p)?);
                    let s = run_scan(&mut file, max, filter, format, &settings)?;
                    file.flush()?;
                    write!(out, "{}", s.to_text())?;
                    s
                }
                None => {
                    let s = run_scan(&mut out, max, filter, format, &settings)?;
                    eprint!("{}", s.to_text());
                    s
                }
            };
            out.flush()?;
            if !summary.ok() {
                return Err(CliError::Internal {
                    code: "scan_failed",
                    message: format!(
                        "{} verification failures and {} errors",
                        summary.failed, summary.errors
                    ),
                });
            }
        }
        Command::Unit { d, format } => {
            let m = parse_integer("d", &d)?;
            let u = fundamental_unit_with_cap(&m, settings.period_cap)
                .map_err(capitula_core::Error::from)?;
            match format {
                UnitFormat::Text => writeln!(
                    out,
                    "{}  N = {}  period {}",
                    u,
                    if u.norm_sign() < 0 { "-1" } else { "+1" },
                    u.period()
                )?,
                UnitFormat::Json => {
                    let rec = UnitRecord {
                        d: m.to_string(),
                        unit: (&u).into(),
                        period: u.period(),
                        text: u.to_string(),
                    };
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("serializes"))?
                }
            }
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
