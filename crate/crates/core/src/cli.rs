//! Command-line driver.
//!
//! Every command renders either text, JSON, or (for `partitions` and
//! `table`) CSV. JSON output is wrapped in an envelope carrying
//! `schema_version` and the command name; struct fields serialize in
//! declaration order, so identical invocations produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::{character_table, CharacterTable, MAX_TABLE_DEGREE};
use crate::error::{Error, Result};
use crate::lp::{analyze, FeasibilityReport};
use crate::oracle::{
    all_nonnegative, build_plane, proposition_check, random_subset, theta_of_subset, AffineLineSet,
    ScalarProduct, SUPPORTED_FIELD_ORDERS,
};
use crate::partition::{class_listing, ConjugacyClassInfo};
use crate::refute::{certify, integrality_evenness_refute, parity_refute, Certificate, Outcome};
use crate::system::{
    build_system_with_table, evaluate_theta, side_condition_violations, DelsarteSystem, SideViolation, ThetaVector,
    Violation,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the conjugacy classes of S_d with sizes, fixed points and signs
    Partitions { d: usize },
    /// Character table of S_d
    Table { d: usize },
    /// Linear system for a plane of order d
    System { d: usize },
    /// Feasibility, witness and exact variable ranges
    Solve { d: usize },
    /// Full pipeline: solve, then refute the unique solution if there is one
    Certify { d: usize },
    /// Build the plane over GF(q) and check its difference counts
    Oracle { q: usize },
    /// Check character scalar products on random subsets of S_d of sizes 2..=n
    RandomCheck {
        d: usize,
        n: usize,
        #[arg(default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Partitions { .. } => "partitions",
            Command::Table { .. } => "table",
            Command::System { .. } => "system",
            Command::Solve { .. } => "solve",
            Command::Certify { .. } => "certify",
            Command::Oracle { .. } => "oracle",
            Command::RandomCheck { .. } => "random-check",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Parser)]
#[command(name = "projplane", version, about = "Character-table constraints on finite projective planes")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Also check that solution entries are even integers
    #[arg(long, global = true)]
    pub even_check: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    result: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOutput {
    pub feasibility: FeasibilityReport,
    /// Present with `--even-check` on a feasible system.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_conditions: Option<Vec<SideViolation>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub q: usize,
    pub lines: AffineLineSet,
    pub theta: ThetaVector,
    pub has_duplicates: bool,
    pub violations: Vec<Violation>,
    pub side_conditions: Vec<SideViolation>,
    pub scalar_products: Vec<ScalarProduct>,
    pub scalar_products_nonnegative: bool,
    pub parity_outcome: Outcome,
    pub evenness_outcome: Outcome,
}

impl OracleReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
            && self.side_conditions.is_empty()
            && self.scalar_products_nonnegative
            && self.parity_outcome == Outcome::Inconclusive
            && self.evenness_outcome == Outcome::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub size: usize,
    pub negative: Vec<ScalarProduct>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomCheckReport {
    pub d: usize,
    pub max_size: usize,
    pub seed: u64,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub failures: Vec<TrialFailure>,
}

impl RandomCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn table_for(d: usize) -> Result<CharacterTable> {
    if !(2..=MAX_TABLE_DEGREE).contains(&d) {
        return Err(Error::domain(format!("order {d} outside 2..={MAX_TABLE_DEGREE}")));
    }
    character_table(d)
}

fn system_for(d: usize, even: bool) -> Result<DelsarteSystem> {
    build_system_with_table(&table_for(d)?, even)
}

pub fn solve(d: usize, even_check: bool) -> Result<SolveOutput> {
    let system = system_for(d, even_check)?;
    let feasibility = analyze(&system)?;
    let side_conditions = match (&feasibility.witness, even_check) {
        (Some(w), true) => Some(side_condition_violations(w)),
        _ => None,
    };
    Ok(SolveOutput { feasibility, side_conditions })
}

pub fn oracle(q: usize) -> Result<OracleReport> {
    if !SUPPORTED_FIELD_ORDERS.contains(&q) {
        return Err(Error::domain(format!("plane order {q} not in {SUPPORTED_FIELD_ORDERS:?}")));
    }
    let lines = build_plane(q)?;
    let subset = theta_of_subset(&lines.lines)?;
    let table = character_table(q)?;
    let system = build_system_with_table(&table, true)?;
    let violations = evaluate_theta(&subset.theta, &system);
    let side_conditions = side_condition_violations(&subset.theta);
    let scalar_products = proposition_check(&subset.theta, &table)?;
    let parity_outcome = parity_refute(&subset.theta, q)?.outcome;
    let evenness_outcome = integrality_evenness_refute(&subset.theta).outcome;
    Ok(OracleReport {
        q,
        lines,
        scalar_products_nonnegative: all_nonnegative(&scalar_products),
        theta: subset.theta,
        has_duplicates: subset.has_duplicates,
        violations,
        side_conditions,
        scalar_products,
        parity_outcome,
        evenness_outcome,
    })
}

/// Subset sizes are drawn uniformly from `2..=max_size`; each trial's subset
/// seed comes from the same seeded stream.
pub fn random_check(d: usize, max_size: usize, seed: u64, trials: usize) -> Result<RandomCheckReport> {
    if max_size < 2 {
        return Err(Error::domain(format!("maximum subset size {max_size} must be at least 2")));
    }
    let table = table_for(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = Vec::with_capacity(trials);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let size = rng.gen_range(2..=max_size);
        let subset = random_subset(d, size, rng.gen())?;
        let theta = theta_of_subset(&subset)?.theta;
        let products = proposition_check(&theta, &table)?;
        let negative: Vec<ScalarProduct> = products
            .into_iter()
            .filter(|s| s.value < crate::rational::int(0))
            .collect();
        if !negative.is_empty() {
            failures.push(TrialFailure { trial, size, negative });
        }
        sizes.push(size);
    }
    Ok(RandomCheckReport { d, max_size, seed, trials, sizes, failures })
}

fn json<T: Serialize>(command: &str, result: T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { schema_version: SCHEMA_VERSION, command, result })?;
    s.push('\n');
    Ok(s)
}

fn csv_unsupported(command: &str) -> Error {
    Error::domain(format!("csv output is only available for partitions and table, not {command}"))
}

/// The report artifact for `config`, as it would be written.
pub fn render(config: &RunConfig) -> Result<String> {
    let name = config.command.name();
    match &config.command {
        Command::Partitions { d } => {
            let listing = class_listing(*d)?;
            match config.format {
                Format::Json => json(name, &listing),
                Format::Csv => partitions_csv(&listing),
                Format::Text => Ok(partitions_text(*d, &listing)),
            }
        }
        Command::Table { d } => {
            if *d == 0 || *d > MAX_TABLE_DEGREE {
                return Err(Error::domain(format!("order {d} outside 1..={MAX_TABLE_DEGREE}")));
            }
            let table = character_table(*d)?;
            match config.format {
                Format::Json => json(name, &table),
                Format::Csv => table.to_csv(),
                Format::Text => Ok(table_text(&table)),
            }
        }
        Command::System { d } => {
            let system = system_for(*d, config.even_check)?;
            match config.format {
                Format::Json => json(name, &system),
                Format::Csv => Err(csv_unsupported(name)),
                Format::Text => Ok(system.to_lp_text()),
            }
        }
        Command::Solve { d } => {
            let out = solve(*d, config.even_check)?;
            match config.format {
                Format::Json => json(name, &out),
                Format::Csv => Err(csv_unsupported(name)),
                Format::Text => Ok(solve_text(&out)),
            }
        }
        Command::Certify { d } => {
            let cert = certify(*d)?;
            match config.format {
                Format::Json => json(name, &cert),
                Format::Csv => Err(csv_unsupported(name)),
                Format::Text => Ok(certificate_text(&cert)),
            }
        }
        Command::Oracle { q } => {
            let report = oracle(*q)?;
            if !report.consistent() {
                return Err(Error::Consistency(format!(
                    "plane of order {q} violates its own constraints"
                )));
            }
            match config.format {
                Format::Json => json(name, &report),
                Format::Csv => Err(csv_unsupported(name)),
                Format::Text => Ok(oracle_text(&report)),
            }
        }
        Command::RandomCheck { d, n, seed, trials } => {
            let report = random_check(*d, *n, *seed, *trials)?;
            let text = match config.format {
                Format::Json => json(name, &report)?,
                Format::Csv => return Err(csv_unsupported(name)),
                Format::Text => random_check_text(&report),
            };
            if !report.passed() {
                return Err(Error::Consistency(format!(
                    "{} subsets produced a negative scalar product",
                    report.failures.len()
                )));
            }
            Ok(text)
        }
    }
}

/// Renders and writes the report to the configured destination.
pub fn run(config: &RunConfig) -> Result<()> {
    let text = render(config)?;
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Process exit status for a failed run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) => 2,
        Error::Consistency(_) => 3,
        Error::Io(_) => 4,
        Error::Serialization(_) => 5,
    }
}

fn partitions_csv(listing: &[ConjugacyClassInfo]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cycle_type", "size", "fixed_points", "sign"])?;
    for c in listing {
        w.write_record([
            c.cycle_type.to_string(),
            c.size.to_string(),
            c.fixed_points.to_string(),
            c.sign.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

fn partitions_text(d: usize, listing: &[ConjugacyClassInfo]) -> String {
    let mut s = format!("{} conjugacy classes of S_{d}\n", listing.len());
    let width = listing.iter().map(|c| c.cycle_type.to_string().len()).max().unwrap_or(0);
    let size_width = listing.iter().map(|c| c.size.to_string().len()).max().unwrap_or(0);
    let _ = writeln!(s, "{:<width$}  {:>size_width$}  fixed  sign", "class", "size");
    for c in listing {
        let _ = writeln!(
            s,
            "{:<width$}  {:>size_width$}  {:>5}  {:>4}",
            c.cycle_type.to_string(),
            c.size.to_string(),
            c.fixed_points,
            c.sign
        );
    }
    s
}

fn table_text(t: &CharacterTable) -> String {
    let labels: Vec<String> = t.irreps.iter().map(|p| p.to_string()).collect();
    let lw = labels.iter().map(String::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..t.classes.len())
        .map(|j| {
            t.values
                .iter()
                .map(|r| r[j].to_string().len())
                .chain(std::iter::once(t.classes[j].to_string().len()))
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut s = format!("{:lw$} |", "");
    for (j, c) in t.classes.iter().enumerate() {
        let w = widths[j];
        let _ = write!(s, " {:>w$}", c.to_string());
    }
    s.push('\n');
    for (label, row) in labels.iter().zip(&t.values) {
        let _ = write!(s, "{label:>lw$} |");
        for (j, v) in row.iter().enumerate() {
            let w = widths[j];
            let _ = write!(s, " {v:>w$}");
        }
        s.push('\n');
    }
    s
}

fn solve_text(out: &SolveOutput) -> String {
    let f = &out.feasibility;
    let mut s = format!("order {}: {}\n", f.d, if f.is_feasible() { "feasible" } else { "infeasible" });
    if let Some(w) = &f.witness {
        s.push_str("witness:\n");
        for (c, v) in w.iter() {
            let _ = writeln!(s, "  theta{c} = {v}");
        }
    }
    if let Some(bounds) = &f.bounds {
        s.push_str("ranges:\n");
        for b in bounds {
            let _ = writeln!(s, "  theta{} in [{}, {}]", b.class, b.min, b.max);
        }
    }
    if let Some(u) = f.unique {
        let _ = writeln!(s, "unique: {}", if u { "yes" } else { "no" });
    }
    if let Some(side) = &out.side_conditions {
        if side.is_empty() {
            s.push_str("even-check: all non-identity entries are even integers\n");
        } else {
            let _ = writeln!(s, "even-check: {} entries fail", side.len());
        }
    }
    s
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = c.transcript.join("\n");
    s.push('\n');
    s
}

fn oracle_text(r: &OracleReport) -> String {
    let mut s = format!("plane of order {} over GF({}): {} line permutations\n", r.q, r.q, r.lines.lines.len());
    s.push_str("difference counts:\n");
    for (c, v) in r.theta.iter() {
        let _ = writeln!(s, "  theta{c} = {v}");
    }
    let _ = writeln!(s, "constraint violations: {}", r.violations.len());
    let _ = writeln!(s, "entries failing evenness: {}", r.side_conditions.len());
    let _ = writeln!(
        s,
        "character scalar products nonnegative: {}",
        if r.scalar_products_nonnegative { "yes" } else { "no" }
    );
    let _ = writeln!(s, "feasible witness: {}", if r.violations.is_empty() { "confirmed" } else { "rejected" });
    s
}

fn random_check_text(r: &RandomCheckReport) -> String {
    format!(
        "{} random subsets of S_{} (sizes 2..={}, seed {}): {} with a negative scalar product\n",
        r.trials,
        r.d,
        r.max_size,
        r.seed,
        r.failures.len()
    )
}
