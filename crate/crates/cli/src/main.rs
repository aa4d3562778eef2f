//! `gslice`: invariant rings by groupoid slicing, from the command line.

mod field;
mod invariants_cmd;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gslice::linalg::ExactField;
use gslice::models::classify::{classify_point, SectionPair};
use gslice::models::grassmann::{complementarity, gale_transform, pluecker, ConfigMatrix, SignRule};
use gslice::{Rational, F2};

use field::FieldTag;
use invariants_cmd::Model;

const SLICED_CAP: u32 = 8;
const UNSLICED_CAP: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "gslice", version, about = "Graded invariant rings by groupoid slicing")]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print timing and sizes to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree-by-degree invariant dimensions and bases.
    Invariants {
        #[arg(long)]
        model: Model,
        #[arg(long, default_value = "Q")]
        field: FieldTag,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Intersect per-component equalizers on the slice (default).
        #[arg(long, conflicts_with = "unsliced")]
        sliced: bool,
        /// Compute the equalizer of the full action.
        #[arg(long)]
        unsliced: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the stated presentations, restrictions and flatness conditions.
    Verify {
        #[arg(long, value_enum)]
        check: verify::Check,
    },
    /// Stability class of a pair of binary quadratic forms.
    Classify {
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long = "char", value_enum, default_value_t = Characteristic::Zero)]
        characteristic: Characteristic,
    },
    /// Gale dual, Pluecker vectors and the complementarity identity.
    Gale {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Characteristic {
    #[value(name = "0")]
    Zero,
    #[value(name = "2")]
    Two,
}

/// A report and the exit status it implies.
struct Report {
    lines: Vec<String>,
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut text = report.lines.join("\n");
    text.push('\n');
    print!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.verbose {
        eprintln!("elapsed: {:.3?}", started.elapsed());
    }
    if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cmd: &Command) -> Result<Report, String> {
    match cmd {
        Command::Invariants { model, field, max_degree, unsliced, format, .. } => {
            let sliced = !unsliced;
            let cap = degree_cap(sliced)?;
            if *max_degree > cap {
                return Err(format!(
                    "--max-degree {max_degree} exceeds the {} cap of {cap} (set GSL_MAX_DEGREE to raise it)",
                    if sliced { "sliced" } else { "unsliced" }
                ));
            }
            let lines = invariants_cmd::compute(*model, *field, *max_degree, sliced)?;
            let lines = match format {
                Format::Text => invariants_cmd::text_lines(&lines),
                Format::Json => vec![invariants_cmd::json_document(*model, *field, sliced, &lines)],
            };
            Ok(Report { lines, failed: false })
        }
        Command::Verify { check } => {
            let outcomes = verify::run(*check);
            let failed = outcomes.iter().any(|o| !o.pass);
            Ok(Report { lines: outcomes.iter().map(verify::Outcome::line).collect(), failed })
        }
        Command::Classify { s1, s2, characteristic } => match characteristic {
            Characteristic::Zero => classify::<Rational>(s1, s2),
            Characteristic::Two => classify::<F2>(s1, s2),
        },
        Command::Gale { matrix } => gale(matrix),
    }
}

fn degree_cap(sliced: bool) -> Result<u32, String> {
    match std::env::var("GSL_MAX_DEGREE") {
        Ok(v) => v.trim().parse().map_err(|_| format!("GSL_MAX_DEGREE=`{v}` is not a degree")),
        Err(_) => Ok(if sliced { SLICED_CAP } else { UNSLICED_CAP }),
    }
}

fn classify<F: ExactField>(s1: &str, s2: &str) -> Result<Report, String> {
    let pair = SectionPair::<F>::parse(s1, s2).map_err(|e| e.to_string())?;
    let c = classify_point(&pair);
    let mut lines = vec![c.class.to_string()];
    lines.extend(c.values.iter().map(|(name, v)| format!("{name} = {v}")));
    if c.zero_pair {
        lines.push("note: both forms are zero".into());
    }
    Ok(Report { lines, failed: false })
}

fn gale(path: &PathBuf) -> Result<Report, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let m = ConfigMatrix::parse(&text).map_err(|e| e.to_string())?;
    let g = gale_transform(&m).map_err(|e| e.to_string())?;
    let mut lines = vec!["dual:".to_string()];
    lines.extend(g.to_string().lines().map(|l| format!("  {l}")));
    for (name, mat) in [("pluecker(M)", &m), ("pluecker(G)", &g)] {
        let coords: Vec<String> = pluecker(mat)
            .into_iter()
            .map(|(set, v)| format!("p{}={v}", set.iter().map(|i| (i + 1).to_string()).collect::<String>()))
            .collect();
        lines.push(format!("{name}: {}", coords.join(" ")));
    }
    let failed = match complementarity(&m, &g, SignRule::Shuffle) {
        Some(l) => {
            lines.push(format!("complementarity: PASS (λ={l})"));
            false
        }
        None => {
            lines.push("complementarity: FAIL".into());
            true
        }
    };
    lines.push("sign rule: shuffle".into());
    Ok(Report { lines, failed })
}
