use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainlcp::group::{GroupDescriptor, GroupTable};
use chainlcp::ring::{ChainRing, RingDescriptor};
use chainlcp::verify::{
    default_catalog, run_catalog, AtlasRow, BudgetOverrides, Budgets, Catalog, CatalogEntry,
    RunOptions,
};
use chainlcp::wire::CodeFile;
use chainlcp::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "chainlcp",
    version,
    about = "LCP group codes over finite chain rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every LCP pair of each catalog algebra. With no catalog the
    /// built-in acceptance catalog is used.
    Verify(RunArgs),
    /// Tabulate security parameters of the nontrivial LCP pairs.
    Atlas(RunArgs),
    /// Single-code utilities on a code file (`-` reads standard input).
    Code {
        #[arg(value_enum)]
        op: CodeOp,
        file: PathBuf,
        #[arg(long, default_value_t = chainlcp::code::DISTANCE_BUDGET)]
        budget_distance: u64,
    },
    /// Describe a ring, e.g. `Z4`, `F2u2`, `F4u2`.
    Ring { name: String },
    /// Describe a group, e.g. `C3`, `S3`, `D4`, `Q8`, `C2xC2`.
    Group { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeOp {
    Dual,
    Distance,
    Normalize,
    Project,
}

#[derive(Args)]
struct RunArgs {
    /// Catalog JSON file.
    #[arg(long, conflicts_with_all = ["ring", "group"])]
    catalog: Option<PathBuf>,
    /// Ring of a single-entry catalog (needs --group).
    #[arg(long, requires = "group")]
    ring: Option<String>,
    /// Group of a single-entry catalog (needs --ring).
    #[arg(long, requires = "ring")]
    group: Option<String>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    budget_idempotents: Option<u64>,
    #[arg(long)]
    budget_distance: Option<u64>,
    #[arg(long)]
    budget_witness: Option<u64>,
    #[arg(long)]
    budget_census: Option<u64>,
    /// Worker threads across catalog entries.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Random trials per ring in the property suites.
    #[arg(long, default_value_t = chainlcp::props::DEFAULT_TRIALS)]
    trials: usize,
    /// Leave out the timing block so reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

enum Failure {
    Parse(String),
    Run(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Encoding(_) | Error::LengthMismatch { .. } => {
                Failure::Parse(e.to_string())
            }
            other => Failure::Run(other),
        }
    }
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Parse(m) => (EXIT_PARSE, m),
            Failure::Io(m) => (EXIT_PARSE, m),
            Failure::Run(e @ Error::BudgetExceeded { .. }) => (EXIT_BUDGET, e.to_string()),
            Failure::Run(e) => (EXIT_DOMAIN, e.to_string()),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(e.to_string()))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn to_pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn catalog_from(args: &RunArgs) -> Result<Catalog, Failure> {
    // any validation failure here is an input problem
    let parse = |e: Error| Failure::Parse(e.to_string());
    if let Some(path) = &args.catalog {
        return Catalog::parse(&read_input(path)?).map_err(parse);
    }
    match (&args.ring, &args.group) {
        (Some(r), Some(g)) => {
            let catalog = Catalog {
                entries: vec![CatalogEntry::from_names(r, g).map_err(parse)?],
            };
            catalog.validate().map_err(parse)?;
            Ok(catalog)
        }
        _ => Ok(default_catalog()),
    }
}

fn options_from(args: &RunArgs, full: bool) -> RunOptions {
    let overrides = BudgetOverrides {
        idempotents: args.budget_idempotents,
        distance: args.budget_distance,
        witness: args.budget_witness,
        census: args.budget_census,
    };
    RunOptions {
        budgets: Budgets::default().with(&overrides),
        ring_suites: full,
        trials: args.trials,
        census: full,
        one_sided: full,
        jobs: args.jobs,
    }
}

fn cmd_verify(args: &RunArgs) -> Result<ExitCode, Failure> {
    let catalog = catalog_from(args)?;
    let mut report = run_catalog(&catalog, &options_from(args, true))?;
    if args.no_timing {
        report.metadata = None;
    }
    write_output(args.out.as_deref(), &to_pretty(&report))?;
    for (entry, pairs) in report.entries.iter().map(|e| (e, e.pairs.len())) {
        let status = if entry.passed() { "ok" } else { "FAIL" };
        eprintln!("{status:4} {}[{}]: {pairs} pairs", entry.ring, entry.group);
        if let Some(m) = &entry.message {
            eprintln!("     {m}");
        }
    }
    for (name, t) in report.tallies.iter().filter(|(_, t)| t.failed > 0) {
        eprintln!("FAIL {name}: {} of {}", t.failed, t.failed + t.passed);
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn atlas_table(rows: &[AtlasRow]) -> String {
    let header = [
        "ring",
        "group",
        "|C|",
        "d(C)",
        "d(D⊥)",
        "security",
        "τ(C)=D⊥",
    ];
    let body: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.ring.clone(),
                r.group.clone(),
                r.card_c.clone(),
                r.d_c.to_string(),
                r.d_d_dual.to_string(),
                r.security.to_string(),
                r.tau_equals_dual.to_string(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in &body {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn cmd_atlas(args: &RunArgs) -> Result<ExitCode, Failure> {
    let catalog = catalog_from(args)?;
    let report = run_catalog(&catalog, &options_from(args, false))?;
    let rows = report.atlas();
    print!("{}", atlas_table(&rows));
    if let Some(path) = &args.out {
        write_output(Some(path), &to_pretty(&json!({ "rows": rows })))?;
    }
    for e in report.entries.iter().filter(|e| e.message.is_some()) {
        eprintln!(
            "{}[{}]: {}",
            e.ring,
            e.group,
            e.message.as_deref().unwrap_or("")
        );
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn cmd_code(op: CodeOp, path: &Path, budget: u64) -> Result<ExitCode, Failure> {
    let text = read_input(path)?;
    let file: CodeFile = serde_json::from_str(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    let code = file.to_code().map_err(|e| Failure::Parse(e.to_string()))?;
    let out: Value = match op {
        CodeOp::Dual => serde_json::to_value(CodeFile::from_code(&code.dual())),
        CodeOp::Normalize => serde_json::to_value(CodeFile::from_code(&code)),
        CodeOp::Project => serde_json::to_value(CodeFile::from_code(&code.project())),
        CodeOp::Distance => {
            let d = code.min_distance_with_budget(budget)?;
            Ok(json!({ "ring": file.ring, "n": file.n, "distance": d }))
        }
    }
    .expect("serializable code file");
    write_output(None, &to_pretty(&out))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_ring(name: &str) -> Result<ExitCode, Failure> {
    let desc = RingDescriptor::parse_name(name).map_err(|e| Failure::Parse(e.to_string()))?;
    let ring = ChainRing::new(&desc)?;
    let units = ring.elements().filter(|&a| ring.is_unit(a)).count();
    let out = json!({
        "name": ring.name(),
        "descriptor": desc,
        "size": ring.size(),
        "q": ring.q(),
        "v": ring.v(),
        "gamma": ring.encode(ring.gamma()),
        "units": units,
        "residue_field": ring.residue_field().name(),
    });
    write_output(None, &to_pretty(&out))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_group(name: &str) -> Result<ExitCode, Failure> {
    let desc = GroupDescriptor::parse_name(name).map_err(|e| Failure::Parse(e.to_string()))?;
    let group = GroupTable::from_descriptor(&desc)?;
    let out = json!({
        "name": group.name(),
        "descriptor": desc,
        "order": group.order(),
        "abelian": group.is_abelian(),
        "labels": group.labels(),
        "conjugacy_classes": group.conjugacy_classes(),
        "inversion": group.inversion_permutation().image(),
    });
    write_output(None, &to_pretty(&out))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Atlas(args) => cmd_atlas(args),
        Command::Code {
            op,
            file,
            budget_distance,
        } => cmd_code(*op, file, *budget_distance),
        Command::Ring { name } => cmd_ring(name),
        Command::Group { name } => cmd_group(name),
    };
    result.unwrap_or_else(Failure::report)
}
