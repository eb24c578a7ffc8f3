//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain or precondition error (including a
//! failed check), 2 usage or input-format error, 3 capacity exceeded.

mod demo;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::checker::{
    check_axioms, check_theorems, render_table, reports_to_json, AxiomReport, CheckError,
    CheckOptions, Verdict,
};
use crate::kernel::{KernelError, QSet, Universe};
use crate::stats::{
    asymptotic_distribution, constrained_most_probable, count_distributions,
    enumerate_distributions, most_probable_occupancy, verify_leibniz_identity, Distribution,
    LevelScheme, OccupancyVector, StatModel, StatsError, DEFAULT_COMPOSITION_CAP,
    DEFAULT_ENUMERATION_CAP,
};

/// Rows `enumerate` prints without `--force`.
pub const DEFAULT_ROW_CAP: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "qstat",
    version,
    about = "Quasi-set counting, statistics and axiom checking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Capacity bound for the command (rows, compositions or tuples).
    #[arg(long, global = true, env = "QSTAT_CAP")]
    cap: Option<u64>,
    /// Print enumerations beyond the row cap.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Model {
    /// mb, be or fd.
    #[arg(long, default_value = "mb")]
    model: StatModel,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of distributions of N particles over n boxes.
    Count {
        #[command(flatten)]
        model: Model,
        #[arg(short = 'N')]
        particles: u64,
        #[arg(short = 'n')]
        boxes: u64,
    },
    /// List every distribution.
    Enumerate {
        #[command(flatten)]
        model: Model,
        /// Particles; defaults to the m-atoms of --universe.
        #[arg(short = 'N')]
        particles: Option<u64>,
        #[arg(short = 'n')]
        boxes: u64,
        /// Distribute every m-atom of this universe.
        #[arg(long)]
        universe: Option<PathBuf>,
    },
    /// Both sides of n^N = sum of multinomial weights, with the parcels.
    Identity {
        #[arg(short = 'N')]
        particles: u64,
        #[arg(short = 'n')]
        boxes: u64,
    },
    /// Most probable occupancies, unconstrained or for a level scheme.
    MostProbable {
        #[command(flatten)]
        model: Model,
        /// Particles; overrides the level scheme's N.
        #[arg(short = 'N')]
        particles: Option<u64>,
        #[arg(short = 'n')]
        boxes: Option<u64>,
        #[arg(long)]
        levels: Option<PathBuf>,
    },
    /// Mean occupancies from the two-multiplier stationarity equations.
    Asymptotic {
        #[command(flatten)]
        model: Model,
        /// Particles; overrides the level scheme's N.
        #[arg(short = 'N')]
        particles: Option<u64>,
        #[arg(long)]
        levels: PathBuf,
    },
    /// Check every axiom and theorem on a universe file.
    Check {
        path: Option<PathBuf>,
        #[arg(long, conflicts_with = "path")]
        universe: Option<PathBuf>,
    },
    /// The three distributions of 3 objects over 2 boxes, as star tables.
    Demo,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
    Capacity(String),
    Io(io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
            CliError::Capacity(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Capacity(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        let m = e.to_string();
        match e {
            KernelError::Capacity { .. } => CliError::Capacity(m),
            KernelError::Format(_) | KernelError::DuplicateLabel(_) => CliError::Usage(m),
            _ => CliError::Domain(m),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::Kernel(k) => k.into(),
            StatsError::Capacity { .. } => CliError::Capacity(e.to_string()),
            StatsError::Format(_) | StatsError::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Kernel(k) => k.into(),
            CheckError::Stats(s) => s.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status. Diagnostics go to `err` as a single line.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let text = e.render().to_string();
            let line = text.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

/// Wraps a big integer as a JSON number when it fits in 64 bits and as a
/// decimal string otherwise.
pub fn big_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => Value::String(n.to_string()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_levels(path: &Path, particles: Option<u64>) -> Result<LevelScheme> {
    let scheme = LevelScheme::from_json(&read(path)?)?;
    Ok(match particles {
        Some(n) => scheme.with_particles(n),
        None => scheme,
    })
}

fn occupancy_json(v: &OccupancyVector) -> Value {
    json!(v.entries())
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )?;
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Count {
            model,
            particles,
            boxes,
        } => {
            let count = count_distributions(*particles, *boxes, model.model)?;
            match cli.format {
                Format::Table => writeln!(out, "{count}")?,
                Format::Csv => writeln!(
                    out,
                    "model,N,n,count\n{},{particles},{boxes},{count}",
                    model.model
                )?,
                Format::Json => print_json(
                    out,
                    &json!({"model": model.model.to_string(), "N": particles, "n": boxes,
                            "count": big_json(&count)}),
                )?,
            }
        }
        Command::Enumerate {
            model,
            particles,
            boxes,
            universe,
        } => enumerate(
            cli,
            out,
            model.model,
            *particles,
            *boxes,
            universe.as_deref(),
        )?,
        Command::Identity { particles, boxes } => identity(cli, out, *particles, *boxes)?,
        Command::MostProbable {
            model,
            particles,
            boxes,
            levels,
        } => most_probable(cli, out, model.model, *particles, *boxes, levels.as_deref())?,
        Command::Asymptotic {
            model,
            particles,
            levels,
        } => asymptotic(cli, out, model.model, *particles, levels)?,
        Command::Check { path, universe } => {
            let path = path.as_ref().or(universe.as_ref()).ok_or_else(|| {
                CliError::Usage("check needs a universe file (positional or --universe)".into())
            })?;
            return check(cli, out, path);
        }
        Command::Demo => demo::run(cli.format, out)?,
    }
    Ok(0)
}

fn base_qset(particles: Option<u64>, universe: Option<&Path>) -> Result<QSet> {
    match (particles, universe) {
        (_, Some(path)) => {
            let u = Universe::from_json(&read(path)?)?;
            let x = u.qset(u.urelements())?;
            if let Some(n) = particles {
                if n != x.qc() {
                    return Err(CliError::Usage(format!(
                        "-N {n} disagrees with the universe's {} urelements",
                        x.qc()
                    )));
                }
            }
            Ok(x)
        }
        (Some(n), None) => {
            let n = u32::try_from(n).map_err(|_| {
                CliError::Capacity(format!("{n} particles exceed the universe size limit"))
            })?;
            let u = Universe::builder().kind("a", n).build()?;
            Ok(u.qset(u.micro_atoms().cloned())?)
        }
        (None, None) => Err(CliError::Usage("enumerate needs -N or --universe".into())),
    }
}

fn enumerate(
    cli: &Cli,
    out: &mut dyn Write,
    model: StatModel,
    particles: Option<u64>,
    boxes: u64,
    universe: Option<&Path>,
) -> Result<()> {
    let x = base_qset(particles, universe)?;
    let count = count_distributions(x.qc(), boxes, model)?;
    let row_cap = cli.cap.unwrap_or(DEFAULT_ROW_CAP);
    if !cli.force && count.to_u64().is_none_or(|c| c > row_cap) {
        return Err(CliError::Capacity(format!(
            "{count} rows exceed the row cap {row_cap}; use --force, --cap or `count`"
        )));
    }
    let stream = enumerate_distributions(&x, boxes, model, u64::MAX)?;

    let boxes_of = |d: &Distribution| -> Option<Vec<String>> {
        match d {
            Distribution::Tuple(t) => Some(t.boxes().iter().map(ToString::to_string).collect()),
            Distribution::Occupancy(_) => None,
        }
    };
    match cli.format {
        Format::Table => {
            for (i, d) in stream.enumerate() {
                match boxes_of(&d) {
                    Some(b) => writeln!(
                        out,
                        "{:>6}  {:<12}  {}",
                        i + 1,
                        d.occupancy(),
                        b.join(" | ")
                    )?,
                    None => writeln!(out, "{:>6}  {}", i + 1, d.occupancy())?,
                }
            }
        }
        Format::Csv => {
            if model == StatModel::MB {
                writeln!(out, "index,occupancy,boxes")?;
            } else {
                writeln!(out, "index,occupancy")?;
            }
            for (i, d) in stream.enumerate() {
                match boxes_of(&d) {
                    Some(b) => writeln!(out, "{},{},\"{}\"", i + 1, d.occupancy(), b.join(" | "))?,
                    None => writeln!(out, "{},{}", i + 1, d.occupancy())?,
                }
            }
        }
        Format::Json => {
            let rows: Vec<Value> = stream
                .map(|d| {
                    let mut row = json!({"occupancy": occupancy_json(&d.occupancy())});
                    if let Some(b) = boxes_of(&d) {
                        row["boxes"] = json!(b);
                    }
                    row
                })
                .collect();
            print_json(
                out,
                &json!({"model": model.to_string(), "N": x.qc(), "n": boxes,
                        "count": big_json(&count), "rows": rows}),
            )?;
        }
    }
    Ok(())
}

fn identity(cli: &Cli, out: &mut dyn Write, particles: u64, boxes: u64) -> Result<()> {
    let record = verify_leibniz_identity(particles, boxes)?;
    match cli.format {
        Format::Table => {
            writeln!(out, "{:<16}  weight", "occupancy")?;
            for (v, w) in &record.parcels {
                writeln!(out, "{:<16}  {w}", v.to_string())?;
            }
            writeln!(out, "{:<16}  {}", "total", record.rhs)?;
            writeln!(
                out,
                "n^N = {}, sum = {}, {}",
                record.lhs,
                record.rhs,
                if record.equal { "equal" } else { "NOT equal" }
            )?;
        }
        Format::Csv => {
            writeln!(out, "occupancy,weight")?;
            for (v, w) in &record.parcels {
                writeln!(out, "{v},{w}")?;
            }
            writeln!(out, "total,{}", record.rhs)?;
        }
        Format::Json => {
            let parcels: Vec<Value> = record
                .parcels
                .iter()
                .map(|(v, w)| json!({"occupancy": occupancy_json(v), "weight": big_json(w)}))
                .collect();
            print_json(
                out,
                &json!({"N": particles, "n": boxes, "lhs": big_json(&record.lhs),
                        "rhs": big_json(&record.rhs), "equal": record.equal,
                        "parcels": parcels}),
            )?;
        }
    }
    if record.equal {
        Ok(())
    } else {
        Err(CliError::Domain("identity does not hold".into()))
    }
}

fn most_probable(
    cli: &Cli,
    out: &mut dyn Write,
    model: StatModel,
    particles: Option<u64>,
    boxes: Option<u64>,
    levels: Option<&Path>,
) -> Result<()> {
    let (argmax, weight, feasible) = match levels {
        Some(path) => {
            if boxes.is_some() {
                return Err(CliError::Usage("-n and --levels are exclusive".into()));
            }
            let scheme = load_levels(path, particles)?;
            let r = constrained_most_probable(&scheme, cli.cap.unwrap_or(DEFAULT_COMPOSITION_CAP))?;
            (r.argmax, r.weight, r.feasible)
        }
        None => {
            let (Some(particles), Some(boxes)) = (particles, boxes) else {
                return Err(CliError::Usage(
                    "most-probable needs -N and -n, or --levels".into(),
                ));
            };
            let r = most_probable_occupancy(particles, boxes, model)?;
            (r.argmax, r.weight, true)
        }
    };
    match cli.format {
        Format::Table => {
            if !feasible {
                writeln!(out, "infeasible: no occupancy meets the constraints")?;
            }
            for v in &argmax {
                writeln!(out, "{:<16}  {weight}", v.to_string())?;
            }
        }
        Format::Csv => {
            writeln!(out, "occupancy,weight")?;
            for v in &argmax {
                writeln!(out, "{v},{weight}")?;
            }
        }
        Format::Json => print_json(
            out,
            &json!({"feasible": feasible,
                    "argmax": argmax.iter().map(occupancy_json).collect::<Vec<_>>(),
                    "weight": big_json(&weight)}),
        )?,
    }
    Ok(())
}

fn asymptotic(
    cli: &Cli,
    out: &mut dyn Write,
    model: StatModel,
    particles: Option<u64>,
    levels: &Path,
) -> Result<()> {
    let scheme = load_levels(levels, particles)?;
    let r = asymptotic_distribution(&scheme, model)?;
    let fractions = r.fractions();
    let rows = scheme.levels().iter().zip(&r.occupancies).zip(&fractions);
    match cli.format {
        Format::Table => {
            writeln!(
                out,
                "{:>5}  {:>10}  {:>6}  {:>20}  {:>12}",
                "level", "energy", "g", "occupancy", "fraction"
            )?;
            for (i, ((l, n), f)) in rows.enumerate() {
                writeln!(
                    out,
                    "{:>5}  {:>10}  {:>6}  {:>20.10}  {:>12.8}",
                    i + 1,
                    l.energy.to_string(),
                    l.degeneracy,
                    n,
                    f
                )?;
            }
            writeln!(out, "alpha = {:.12}", r.alpha)?;
            writeln!(out, "beta = {:.12}", r.beta)?;
            writeln!(
                out,
                "residuals: particles {:.3e}, energy {:.3e}",
                r.particle_residual, r.energy_residual
            )?;
        }
        Format::Csv => {
            writeln!(out, "level,energy,g,occupancy,fraction")?;
            for (i, ((l, n), f)) in rows.enumerate() {
                writeln!(out, "{},{},{},{n},{f}", i + 1, l.energy, l.degeneracy)?;
            }
        }
        Format::Json => print_json(
            out,
            &json!({"model": model.to_string(), "occupancies": r.occupancies,
                    "fractions": fractions, "alpha": r.alpha, "beta": r.beta,
                    "particle_residual": r.particle_residual,
                    "energy_residual": r.energy_residual}),
        )?,
    }
    Ok(())
}

fn csv_reports(out: &mut dyn Write, reports: &[AxiomReport]) -> io::Result<()> {
    for r in reports {
        let witness = r
            .witness
            .as_ref()
            .map(|w| {
                w.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; ")
            })
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},\"{}\",{}",
            r.id,
            r.verdict,
            r.cost,
            r.bounded,
            witness,
            r.context.as_deref().unwrap_or("")
        )?;
    }
    Ok(())
}

fn check(cli: &Cli, out: &mut dyn Write, path: &Path) -> Result<i32> {
    let u = Universe::from_json(&read(path)?)?;
    let opts = CheckOptions {
        tuple_cap: cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
        ..CheckOptions::default()
    };
    let axioms = check_axioms(&u, &opts)?;
    let theorems = check_theorems(&u, &opts)?;
    let failures = axioms
        .iter()
        .chain(&theorems)
        .filter(|r| r.verdict == Verdict::Fails)
        .count();
    match cli.format {
        Format::Table => {
            write!(out, "{}", render_table(&axioms))?;
            writeln!(out)?;
            write!(out, "{}", render_table(&theorems))?;
            writeln!(out)?;
            writeln!(out, "{failures} failures")?;
        }
        Format::Csv => {
            writeln!(out, "id,verdict,cost,bounded,witness,context")?;
            csv_reports(out, &axioms)?;
            csv_reports(out, &theorems)?;
        }
        Format::Json => print_json(
            out,
            &json!({"axioms": reports_to_json(&axioms),
                    "theorems": reports_to_json(&theorems),
                    "failures": failures}),
        )?,
    }
    Ok(if failures == 0 { 0 } else { 1 })
}
