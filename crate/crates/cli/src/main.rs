//! `mersinv`: inversion modulo `2^n - 1` from the command line.
//!
//! Output is `key=value` records separated by blank lines. Exit status is 0
//! on success, 1 when the exponent is not invertible (or an internal check
//! fails) and 2 for usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mersinv_core::families::{self, kasami_conjecture_probe, ExponentSpec, Family};
use mersinv_core::inv::{self, concat_structure};
use mersinv_core::record::{render_all, Record};
use mersinv_core::repr::{self, Format};
use mersinv_core::tables::{self, TableId};
use mersinv_core::verify::{self, FieldCtx};
use mersinv_core::{order_of_two, perf, BigUint, Error};

#[derive(Parser)]
#[command(name = "mersinv", version, about = "Fast inversion modulo 2^n - 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dec,
    Hex,
    Bits,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dec => Format::Dec,
            FormatArg::Hex => Format::Hex,
            FormatArg::Bits => Format::Bits,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Least inverse of D modulo 2^N - 1.
    Invert {
        #[arg(long, value_parser = parse_big)]
        d: BigUint,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "dec")]
        format: FormatArg,
        /// Include the derivation steps.
        #[arg(long)]
        trace: bool,
    },
    /// An APN family member: exponent, invertibility, inverse and layout.
    Family {
        #[arg(long, value_parser = parse_family)]
        name: Family,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// The `a_r | u | ... | u` layout of Inv_D(N).
    Structure {
        #[arg(long, value_parser = parse_big)]
        d: BigUint,
        #[arg(long)]
        n: u64,
    },
    /// Multiplicative order of 2 modulo odd D.
    Order {
        #[arg(long, value_parser = parse_big)]
        d: BigUint,
    },
    /// Exhaustive APN check of x^D on GF(2^N), optionally AB as well.
    ApnCheck {
        #[arg(long, value_parser = parse_big)]
        d: BigUint,
        #[arg(long)]
        n: u32,
        /// Also run the Walsh (AB) check; odd N only.
        #[arg(long)]
        walsh: bool,
        /// Largest N for the Walsh check.
        #[arg(long, default_value_t = verify::WALSH_CAP)]
        walsh_cap: u32,
    },
    /// Weight tables: 2 (d=57), 3 (d=241), 4 (d=993) or kasami13.
    Tables {
        #[arg(long, value_parser = parse_table)]
        which: TableId,
    },
    /// Search for Kasami-shaped representatives of Inv(5k/b).
    Conjecture {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        b: u64,
    },
    /// Recursive inversion against extended Euclid, median of several runs.
    Bench {
        #[arg(long, value_parser = parse_big)]
        d: BigUint,
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        step: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        /// Compute the order of 2 before starting the clock.
        #[arg(long)]
        amortized: bool,
    },
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => repr::parse_hex(hex),
        None => repr::parse_dec(s),
    };
    parsed.map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_table(s: &str) -> Result<TableId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    match run(cli.command, &mut out) {
        Ok(()) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Parse(_) | Error::RingMismatch { .. } => ExitCode::from(2),
                Error::NotInvertible { .. } | Error::Invariant(_) => ExitCode::from(1),
            }
        }
    }
}

fn emit(out: &mut String, records: &[Record]) {
    out.push_str(&render_all(records));
}

fn run(command: Command, out: &mut String) -> mersinv_core::Result<()> {
    match command {
        Command::Invert { d, n, format, trace } => {
            let res = inv::invert(&d, n)?;
            let full = res.to_record(format.into());
            let mut rec = Record::new();
            for (k, v) in full.fields() {
                if k != "trace" || trace {
                    rec.push(k.as_str(), v);
                }
            }
            emit(out, &[rec]);
        }
        Command::Family { name, k, n } => family(name, k, n, out)?,
        Command::Structure { d, n } => emit(out, &[concat_structure(&d, n)?.to_record()]),
        Command::Order { d } => {
            let ord = order_of_two(&d)?;
            emit(out, &[Record::new().with("d", &d).with("ord", ord)]);
        }
        Command::ApnCheck { d, n, walsh, walsh_cap } => {
            let ctx = FieldCtx::new(n)?;
            if walsh && n % 2 == 0 {
                return Err(Error::Domain(format!("the Walsh check needs odd n, got {n}")));
            }
            let report = verify::spectrum_report(&d, &ctx, walsh.then_some(walsh_cap))?;
            emit(out, &[report.to_record()]);
        }
        Command::Tables { which } => {
            let t = tables::table(which)?;
            out.push_str(&t.to_text());
            out.push('\n');
            emit(out, &t.to_records());
        }
        Command::Conjecture { k, b } => {
            let rep = kasami_conjecture_probe(k, b)?;
            let matches = if rep.matches.is_empty() {
                "none".to_string()
            } else {
                rep.matches.iter().map(|(u, v)| format!("{u}:{v}")).collect::<Vec<_>>().join(",")
            };
            let inverse = rep.inverse.as_ref().map_or("not_invertible".to_string(), |x| x.to_string());
            let rec = Record::new()
                .with("k", rep.k)
                .with("b", rep.b)
                .with("n", rep.n)
                .with("inverse", inverse)
                .with("count", rep.matches.len())
                .with("matches", matches);
            emit(out, &[rec]);
        }
        Command::Bench { d, nmax, step, runs, amortized } => {
            let rows = perf::sweep(&d, nmax, step, runs, amortized)?;
            let records: Vec<Record> = rows.iter().map(|r| r.to_record()).collect();
            emit(out, &records);
        }
    }
    Ok(())
}

fn family(name: Family, k: u64, n: u64, out: &mut String) -> mersinv_core::Result<()> {
    let spec = ExponentSpec::new(name, k, n)?;
    let verdict = families::is_invertible(&spec)?;
    let mut head = Record::new()
        .with("family", name)
        .with("k", k)
        .with("n", n)
        .with("d", spec.d())
        .with("reduced", spec.reduced())
        .with("apn_conditions", spec.apn_conditions())
        .with("invertible", verdict.invertible)
        .with("reason", &verdict.reason);
    if !verdict.invertible {
        emit(out, &[head]);
        return Err(Error::NotInvertible { d: spec.d().clone(), n, gcd: verdict.gcd });
    }
    let res = families::family_inverse(&spec)?;
    head.push("value", res.value.value());
    head.push("weight", res.weight());
    head.push("bits", res.bits().grouped('_'));
    head.push("trace", res.trace_string());
    let mut records = vec![head];
    let structure = match name {
        Family::Gold if n > 1 => Some(families::gold_structure(k, n)?),
        Family::Kasami if n > 1 => Some(families::kasami_structure(k, n)?),
        _ => None,
    };
    if let Some(s) = structure {
        records.push(s.to_record());
    }
    emit(out, &records);
    Ok(())
}
