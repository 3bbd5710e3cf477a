//! The `sdsq` command line.
//!
//! Exit codes: 0 for success or a positive answer, 1 for a negative answer
//! or no solution within the budget, 2 for usage, input and precondition
//! errors.

mod document;

pub use document::{
    emit_report, DocumentError, Format, Grid, JsonCell, JsonReport, Kind, SquareDocument,
};

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::canon::{self, CanonError, DEFAULT_CLASS_ORDER_LIMIT};
use crate::enumerate::{self, Dedupe, EnumConfig, EnumError};
use crate::generic::{
    self, cancellation_report, derive_generic, forbidden_values, GenericError, GenericSquare,
    Rational, Variable,
};
use crate::search::{self, SearchConfig, SearchError, Variant};
use crate::square::Square;
use crate::verify::{classify, count_errors, VerifyError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Document {
        path: PathBuf,
        source: Box<DocumentError>,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Generic(Box<GenericError>),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

impl From<GenericError> for CliError {
    fn from(e: GenericError) -> Self {
        CliError::Generic(Box::new(e))
    }
}

#[derive(Parser, Debug)]
#[command(name = "sdsq", version, about = "Self-descriptive squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a square by hill climbing.
    Solve(SolveArgs),
    /// Count condition violations; succeeds for nontrivial squares.
    Verify(FileArgs),
    /// Report every variant property.
    Classify(FileArgs),
    /// Print the standard normal form.
    Snf(FileArgs),
    /// Succeeds when two squares are rearrangements of each other.
    Equivalent(PairArgs),
    /// Succeeds when two squares hold the same multiset of entries.
    Anagram(PairArgs),
    /// List every square within a value bound.
    Enumerate(EnumArgs),
    /// Check a generic square symbolically.
    GenericVerify(FileArgs),
    /// Substitutions that would make two border cells equal.
    Forbidden(FileArgs),
    /// Substitute values into a generic square.
    Instantiate(InstantiateArgs),
    /// Find one-variable generics that specialise to a square.
    DeriveGeneric(FileArgs),
    /// Print every member of a square's equivalence class.
    Class(ClassArgs),
}

#[derive(Args, Debug)]
struct FileArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PairArgs {
    first: PathBuf,
    second: PathBuf,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    order: usize,
    #[arg(long)]
    max_abs: i64,
    #[arg(long, env = "SDSQ_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Variant::Plain)]
    variant: Variant,
    /// Zero means unbounded.
    #[arg(long, default_value_t = SearchConfig::DEFAULT_MAX_ITERATIONS)]
    max_iter: u64,
    /// Zero disables restarts.
    #[arg(long, default_value_t = SearchConfig::DEFAULT_RESTART_INTERVAL)]
    restart_interval: u64,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_MUTATIONS)]
    mutations: usize,
    /// Wall-clock limit per run, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Collect this many equivalence classes, one run per seed.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 1000)]
    max_runs: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write the solutions to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct EnumArgs {
    #[arg(long)]
    order: usize,
    #[arg(long)]
    max_abs: i64,
    /// One square per equivalence class.
    #[arg(long)]
    unique: bool,
    #[arg(long)]
    include_trivial: bool,
    #[arg(long, default_value_t = enumerate::DEFAULT_ORDER_LIMIT)]
    order_limit: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct InstantiateArgs {
    file: PathBuf,
    /// `name=value`, where value is an integer or a fraction like `1/2`.
    #[arg(long = "set", value_name = "VAR=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ClassArgs {
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CLASS_ORDER_LIMIT)]
    order_limit: usize,
    #[arg(long)]
    json: bool,
}

/// Positive or negative outcome of a command that ran to completion.
enum Answer {
    Yes,
    No,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

/// Runs the tool with `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Answer::Yes) => 0,
        Ok(Answer::No) => 1,
        Err(e) => {
            let _ = writeln!(err, "sdsq: {e}");
            2
        }
    }
}

fn read_document(path: &Path) -> Result<SquareDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SquareDocument::parse(&text).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source: Box::new(source),
    })
}

fn read_numeric(path: &Path) -> Result<Square, CliError> {
    match read_document(path)?.grid {
        Grid::Numeric(sq) => Ok(sq),
        Grid::Generic(_) => Err(CliError::Usage(format!(
            "{}: expected a numeric square, found variables",
            path.display()
        ))),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("value serializes");
    writeln!(out, "{text}")?;
    Ok(())
}

fn dispatch(
    command: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Answer, CliError> {
    match command {
        Command::Solve(args) => solve(args, out, err),
        Command::Verify(args) => verify(args, out),
        Command::Classify(args) => {
            let doc = read_document(&args.file)?;
            let Some(square) = doc.as_numeric() else {
                return Err(CliError::Usage("classify needs a numeric square".into()));
            };
            if args.json {
                out.write_all(emit_report(&doc, Format::Json).as_bytes())?;
            } else {
                out.write_all(emit_report(&doc, Format::Text).as_bytes())?;
                write_flags(out, square)?;
            }
            Ok(Answer::Yes)
        }
        Command::Snf(args) => {
            let doc = read_document(&args.file)?;
            let square = doc
                .as_numeric()
                .ok_or_else(|| CliError::Usage("snf needs a numeric square".into()))?;
            let snf = SquareDocument {
                grid: Grid::Numeric(canon::to_snf(square)?),
                trivial: false,
                ..doc
            };
            let format = if args.json {
                Format::Json
            } else {
                Format::Text
            };
            match format {
                Format::Json => out.write_all(emit_report(&snf, format).as_bytes())?,
                Format::Text => write!(out, "{snf}")?,
            }
            Ok(Answer::Yes)
        }
        Command::Equivalent(args) => {
            let (a, b) = (read_numeric(&args.first)?, read_numeric(&args.second)?);
            let same = canon::equivalent(&a, &b)?;
            writeln!(
                out,
                "{}",
                if same { "equivalent" } else { "not equivalent" }
            )?;
            Ok(same.into())
        }
        Command::Anagram(args) => {
            let (a, b) = (read_numeric(&args.first)?, read_numeric(&args.second)?);
            let same = canon::is_anagram(&a, &b)?;
            writeln!(out, "{}", if same { "anagrams" } else { "not anagrams" })?;
            Ok(same.into())
        }
        Command::Enumerate(args) => enumerate(args, out),
        Command::GenericVerify(args) => {
            let g = read_document(&args.file)?.to_generic();
            generic_check(&g, args.json, out)
        }
        Command::Forbidden(args) => {
            let doc = read_document(&args.file)?;
            let set = forbidden_values(&doc.to_generic())?;
            if args.json {
                out.write_all(emit_report(&doc, Format::Json).as_bytes())?;
            } else if set.is_empty() {
                writeln!(out, "none")?;
            } else {
                for line in set.describe() {
                    writeln!(out, "{line}")?;
                }
            }
            Ok(Answer::Yes)
        }
        Command::Instantiate(args) => {
            let doc = read_document(&args.file)?;
            let assignment = parse_assignment(&args.set)?;
            let square = generic::instantiate(&doc.to_generic(), &assignment)?;
            let result = SquareDocument::numeric(square);
            if args.json {
                out.write_all(emit_report(&result, Format::Json).as_bytes())?;
            } else {
                write!(out, "{result}")?;
            }
            Ok(Answer::Yes)
        }
        Command::DeriveGeneric(args) => {
            let square = read_numeric(&args.file)?;
            let found = derive_generic(&square)?;
            if args.json {
                let rows: Vec<JsonReport> = found
                    .iter()
                    .map(|g| JsonReport::new(&SquareDocument::generic(g.clone())))
                    .collect();
                write_json(out, &rows)?;
            } else {
                write_separated(out, found.iter().map(|g| g.to_string()))?;
            }
            if found.is_empty() {
                writeln!(err, "no generic square specialises to this square")?;
            }
            Ok((!found.is_empty()).into())
        }
        Command::Class(args) => {
            let square = read_numeric(&args.file)?;
            let class = canon::equivalence_class(&square, args.order_limit)?;
            if args.json {
                let members: Vec<Vec<Vec<i64>>> = class
                    .iter()
                    .map(|sq| sq.rows().map(<[i64]>::to_vec).collect())
                    .collect();
                write_json(
                    out,
                    &serde_json::json!({ "size": class.len(), "members": members }),
                )?;
            } else {
                writeln!(out, "# class size: {}", class.len())?;
                write_separated(out, class.iter().map(|sq| format!("\n{sq}")))?;
            }
            Ok(Answer::Yes)
        }
    }
}

fn write_separated(
    out: &mut dyn Write,
    items: impl Iterator<Item = String>,
) -> Result<(), CliError> {
    for (i, item) in items.enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        write!(out, "{item}")?;
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_flags(out: &mut dyn Write, square: &Square) -> Result<(), CliError> {
    let f = classify(square);
    writeln!(out, "self-descriptive: {}", yes_no(f.self_descriptive))?;
    writeln!(out, "nontrivial: {}", yes_no(f.nontrivial))?;
    writeln!(out, "magic: {}", yes_no(f.magic))?;
    if let Some(d) = f.diagonals {
        for (label, diag) in [("main diagonal", d.main), ("co-diagonal", d.anti)] {
            let mut ends = Vec::new();
            if diag.first_matches {
                ends.push(diag.first.to_string());
            }
            if diag.last_matches {
                ends.push(diag.last.to_string());
            }
            let matched = if ends.is_empty() {
                "describes neither end".to_string()
            } else {
                format!("describes {}", ends.join(" and "))
            };
            writeln!(out, "  {label}: sum {}, {matched}", diag.sum)?;
        }
    }
    writeln!(out, "bidirectional rows: {}", yes_no(f.bidirectional_rows))?;
    writeln!(
        out,
        "bidirectional columns: {}",
        yes_no(f.bidirectional_cols)
    )?;
    writeln!(out, "perfect: {}", yes_no(f.perfect))?;
    writeln!(out, "minimal: {}", yes_no(f.minimal))?;
    writeln!(out, "concentric: {}", yes_no(f.concentric))?;
    Ok(())
}

fn verify(args: FileArgs, out: &mut dyn Write) -> Result<Answer, CliError> {
    let doc = read_document(&args.file)?;
    let square = match &doc.grid {
        Grid::Numeric(sq) => sq,
        Grid::Generic(g) => return generic_check(g, args.json, out),
    };
    let report = count_errors(square);
    if args.json {
        out.write_all(emit_report(&doc, Format::Json).as_bytes())?;
    } else {
        out.write_all(emit_report(&doc, Format::Text).as_bytes())?;
        writeln!(
            out,
            "border duplication errors: {}",
            report.border_duplication_errors
        )?;
        writeln!(
            out,
            "interior coverage errors: {}",
            report.interior_coverage_errors
        )?;
        writeln!(out, "row errors: {}", report.row_errors)?;
        writeln!(out, "column errors: {}", report.col_errors)?;
        writeln!(out, "total: {}", report.total)?;
        let status = if report.is_clean() {
            "nontrivial self-descriptive"
        } else if report.row_errors == 0 && report.col_errors == 0 {
            "trivial self-descriptive"
        } else {
            "not self-descriptive"
        };
        writeln!(out, "status: {status}")?;
    }
    Ok(report.is_clean().into())
}

fn generic_check(g: &GenericSquare, json: bool, out: &mut dyn Write) -> Result<Answer, CliError> {
    let result = generic::generic_verify(g);
    let cancellation = cancellation_report(g);
    if json {
        write_json(
            out,
            &serde_json::json!({
                "square": JsonReport::new(&SquareDocument::generic(g.clone())),
                "valid": result.is_ok(),
                "defect": result.as_ref().err().map(|d| d.to_string()),
                "cancellation": cancellation,
            }),
        )?;
    } else {
        out.write_all(emit_report(&SquareDocument::generic(g.clone()), Format::Text).as_bytes())?;
        match &result {
            Ok(()) => writeln!(out, "generic: valid")?,
            Err(defect) => writeln!(out, "generic: invalid, {defect}")?,
        }
        let variable_cells = cancellation.cells.len();
        writeln!(
            out,
            "cancellation pattern: {} ({variable_cells} variable cells)",
            if cancellation.holds {
                "holds"
            } else {
                "broken"
            }
        )?;
    }
    Ok(result.is_ok().into())
}

fn parse_assignment(items: &[String]) -> Result<BTreeMap<Variable, Rational>, CliError> {
    let mut assignment = BTreeMap::new();
    for item in items {
        let bad = || CliError::Usage(format!("expected VAR=VALUE, got {item:?}"));
        let (name, value) = item.split_once('=').ok_or_else(bad)?;
        let mut chars = name.trim().chars();
        let var = match (chars.next(), chars.next()) {
            (Some(v @ 'a'..='z'), None) => v,
            _ => return Err(bad()),
        };
        let value: Rational = value.trim().parse().map_err(|_| bad())?;
        if assignment.insert(var, value).is_some() {
            return Err(CliError::Usage(format!("variable {var} is set twice")));
        }
    }
    Ok(assignment)
}

fn enumerate(args: EnumArgs, out: &mut dyn Write) -> Result<Answer, CliError> {
    let config = EnumConfig {
        order: args.order,
        max_abs: args.max_abs,
        dedupe: if args.unique {
            Dedupe::UpToEquivalence
        } else {
            Dedupe::Raw
        },
        include_trivial: args.include_trivial,
        order_limit: args.order_limit,
        ..EnumConfig::new(args.order, args.max_abs)
    };
    let squares = enumerate::enumerate_all(&config)?;
    let counts = enumerate::count_by_variant(&squares);
    if args.json {
        let grids: Vec<Vec<Vec<i64>>> = squares
            .iter()
            .map(|sq| sq.rows().map(<[i64]>::to_vec).collect())
            .collect();
        write_json(
            out,
            &serde_json::json!({
                "config": config,
                "count": squares.len(),
                "squares": grids,
                "variant_counts": counts,
            }),
        )?;
    } else {
        write_separated(out, squares.iter().map(|sq| sq.to_string()))?;
        if !squares.is_empty() {
            writeln!(out)?;
        }
        writeln!(out, "# squares: {}", squares.len())?;
        writeln!(
            out,
            "# classes: {} (nontrivial {}, magic {}, minimal {}, minimal magic {}, perfect {}, concentric {})",
            counts.classes,
            counts.nontrivial,
            counts.magic,
            counts.minimal,
            counts.minimal_magic,
            counts.perfect,
            counts.concentric
        )?;
    }
    Ok(Answer::Yes)
}

fn solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Answer, CliError> {
    let mut config = SearchConfig::new(args.order, args.max_abs)
        .seed(args.seed)
        .variant(args.variant)
        .max_iterations(args.max_iter)
        .restart_interval(args.restart_interval);
    config.mutations_per_iteration = args.mutations;
    if let Some(secs) = args.time_limit {
        let limit = Duration::try_from_secs_f64(secs)
            .map_err(|_| CliError::Usage(format!("bad time limit {secs}")))?;
        config = config.time_limit(limit);
    }
    if args.count == 0 || args.jobs == 0 {
        return Err(CliError::Usage(
            "--count and --jobs must be at least 1".into(),
        ));
    }

    let (docs, answer) = if args.count == 1 && args.jobs == 1 {
        let outcome = search::solve(&config)?;
        writeln!(
            err,
            "iterations: {}, restarts: {}, best error: {}",
            outcome.iterations, outcome.restarts, outcome.best_error
        )?;
        match outcome.solution {
            Some(sq) => (vec![solution_document(sq, &config, args.seed)], Answer::Yes),
            None => {
                writeln!(err, "no solution within the budget; lowest-error square:")?;
                write!(err, "{}", outcome.best)?;
                (Vec::new(), Answer::No)
            }
        }
    } else {
        let found = search::collect_distinct(&config, args.count, args.max_runs, args.jobs)?;
        writeln!(
            err,
            "runs: {}, solutions: {}, distinct classes: {}",
            found.runs,
            found.raw_solutions,
            found.distinct.len()
        )?;
        let complete = found.distinct.len() >= args.count;
        let docs = found
            .distinct
            .into_iter()
            .map(|f| solution_document(f.square, &config, f.seed))
            .collect();
        (docs, complete.into())
    };

    let text = if args.json {
        let reports: Vec<JsonReport> = docs.iter().map(JsonReport::new).collect();
        let value = if args.count == 1 && reports.len() == 1 {
            serde_json::to_value(&reports[0])
        } else {
            serde_json::to_value(&reports)
        };
        serde_json::to_string_pretty(&value.expect("report serializes")).expect("serializes") + "\n"
    } else {
        docs.iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    out.write_all(text.as_bytes())?;
    if let Some(path) = &args.output {
        std::fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(answer)
}

fn solution_document(square: Square, config: &SearchConfig, seed: u64) -> SquareDocument {
    let name = match config.variant {
        Variant::Plain => format!("order-{}-seed-{seed}", config.order),
        v => format!("{v}-order-{}-seed-{seed}", config.order),
    };
    SquareDocument::numeric(square).named(name)
}
