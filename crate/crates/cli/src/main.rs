use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use pseudodiagram::bounds::{bound_reports, unknotting_exact_small, DEFAULT_UNKNOTTING_LIMIT};
use pseudodiagram::census::{census_record, census_shadows, verify_records, CensusConfig, CensusRecord};
use pseudodiagram::enumerate::{EnumerationFilter, DEFAULT_MAX_ENUMERATION};
use pseudodiagram::invariants::{
    diagram_genus, f_polynomial, intersection_index_polynomial, j_invariant, seifert_count, v2,
};
use pseudodiagram::numbers::{analyze, NumbersConfig, DEFAULT_EXACT_LIMIT, DEFAULT_UBER_LIMIT};
use pseudodiagram::oracle::{Budget, DEFAULT_MAX_STATES};
use pseudodiagram::{invariants::DEFAULT_BRACKET_LIMIT, PseudoDiagram};

/// Pseudodiagrams of knots: invariants, characteristic numbers and census.
#[derive(Parser, Debug)]
#[command(name = "pseudo", version)]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Crossing cap for the move search [default: chords + 2]
    #[arg(long, global = true, env = "PSEUDO_MAX_CROSSINGS")]
    max_crossings: Option<usize>,
    /// Distinct diagrams visited by one move search
    #[arg(long, global = true, env = "PSEUDO_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Largest diagram whose bracket is computed
    #[arg(long, global = true, env = "PSEUDO_BRACKET_LIMIT", default_value_t = DEFAULT_BRACKET_LIMIT)]
    bracket_limit: usize,
    /// Most precrossings for brute-force characteristic numbers
    #[arg(long, global = true, env = "PSEUDO_EXACT_LIMIT", default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
    /// Most precrossings for brute force with virtual resolutions
    #[arg(long, global = true, env = "PSEUDO_UBER_LIMIT", default_value_t = DEFAULT_UBER_LIMIT)]
    uber_limit: usize,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, env = "PSEUDO_THREADS")]
    threads: Option<usize>,
}

impl BudgetArgs {
    fn numbers(&self) -> NumbersConfig {
        NumbersConfig {
            budget: Budget {
                max_crossings: self.max_crossings,
                max_states: self.max_states,
                bracket_limit: self.bracket_limit,
            },
            exact_limit: self.exact_limit,
            uber_limit: self.uber_limit,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of a diagram
    Parse { diagram: String },
    /// Print v2, J, p_t, Seifert circles, genus and the normalized bracket
    Invariants { diagram: String },
    /// Print the characteristic numbers of a pseudodiagram
    Numbers {
        diagram: String,
        #[arg(long)]
        json: bool,
    },
    /// Print unknotting, virtual unknotting and genus bounds of a classical diagram
    Bounds {
        diagram: String,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate shadows and write one record per line
    Census(CensusArgs),
    /// Recompute and check every record of a census file
    Verify { file: PathBuf },
}

#[derive(Args, Debug)]
struct CensusArgs {
    /// Largest chord count
    #[arg(long, env = "PSEUDO_MAX_N")]
    max_n: usize,
    /// One shadow per symmetry class
    #[arg(long)]
    canonical: bool,
    /// Only shadows of planar curves
    #[arg(long)]
    realizable: bool,
    /// Only shadows with connected interlacement graph
    #[arg(long)]
    connected: bool,
    /// Output file [default: stdout]
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Append to the output file, skipping shadows already recorded
    #[arg(long, requires_all = ["output", "canonical"])]
    resume: bool,
    /// Largest chord count accepted without complaint
    #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATION)]
    max_enumeration: usize,
}

/// Errors and their exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

/// Reads a diagram argument: a Gauss code, or `@path` to a file holding
/// one either as a `code:` line or as the first line that is not a comment.
fn read_diagram(arg: &str) -> anyhow::Result<PseudoDiagram> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            let content = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let lines = content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'));
            let mut first = None;
            let mut code = None;
            for l in lines {
                if let Some(c) = l.strip_prefix("code:") {
                    code = Some(c.trim().to_string());
                    break;
                }
                first.get_or_insert_with(|| l.to_string());
            }
            code.or(first).ok_or_else(|| anyhow!("{path} holds no diagram"))?
        }
        None => arg.to_string(),
    };
    text.parse().map_err(|e| anyhow!("cannot parse {text:?}: {e}"))
}

fn show<T: std::fmt::Display, E: std::fmt::Display>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("n/a ({e})"),
    }
}

fn invariants(d: &PseudoDiagram, budget: &Budget) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k}: {v}\n"));
    line("v2", show(v2(d)));
    line("J", show(j_invariant(d)));
    line("p_t", show(intersection_index_polynomial(d)));
    line("s", show(seifert_count(d)));
    line("g", show(diagram_genus(d)));
    line("f", show(f_polynomial(d, budget.bracket_limit)));
    out
}

fn write_records(out: &mut dyn Write, records: &[CensusRecord]) -> anyhow::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn recorded_codes(path: &Path) -> anyhow::Result<BTreeSet<String>> {
    let mut codes = BTreeSet::new();
    if !path.exists() {
        return Ok(codes);
    }
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn line from an interrupted run is an error, not silently dropped
        match serde_json::from_str::<CensusRecord>(&line) {
            Ok(r) => {
                codes.insert(r.canonical_code);
            }
            Err(e) => bail!("{}:{}: {e}", path.display(), i + 1),
        }
    }
    Ok(codes)
}

/// Chunk size for ordered, resumable census output.
const CHUNK: usize = 32;

fn census(args: &CensusArgs, numbers: NumbersConfig) -> anyhow::Result<()> {
    let cfg = CensusConfig {
        numbers,
        filter: EnumerationFilter {
            realizable_only: args.realizable,
            connected_interlacement_only: args.connected,
            canonical_only: args.canonical,
        },
        max_n: args.max_n,
        max_enumeration: args.max_enumeration,
    };
    let done = match (&args.output, args.resume) {
        (Some(path), true) => recorded_codes(path)?,
        _ => BTreeSet::new(),
    };
    let todo: Vec<PseudoDiagram> = census_shadows(&cfg)?
        .into_iter()
        .filter(|s| !done.contains(&s.canonical_form().to_string()))
        .collect();
    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .write(true)
                .append(args.resume)
                .truncate(!args.resume)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for chunk in todo.chunks(CHUNK) {
        let records: Vec<CensusRecord> = chunk
            .par_iter()
            .map(|s| census_record(s, &cfg))
            .collect::<Result<_, _>>()?;
        write_records(&mut out, &records)?;
    }
    Ok(())
}

fn verify(path: &Path, numbers: NumbersConfig) -> Result<String, Failure> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(anyhow::Error::from)?;
        if line.trim().is_empty() {
            continue;
        }
        let r: CensusRecord =
            serde_json::from_str(&line).map_err(|e| Failure::Usage(anyhow!("{}:{}: {e}", path.display(), i + 1)))?;
        records.push(r);
    }
    let cfg = CensusConfig {
        numbers,
        ..Default::default()
    };
    let summary = verify_records(&records, &cfg).map_err(anyhow::Error::from)?;
    let mut out = format!("{} records\n", summary.records);
    out.push_str(&format!(
        "{:<24} {:>6} {:>6} {:>6}  result\n",
        "theorem", "pass", "fail", "skip"
    ));
    for (tag, s) in &summary.tags {
        let result = match (s.fail, tag.starts_with("conj:")) {
            (0, _) => "PASS",
            (_, true) => "EVIDENCE AGAINST",
            _ => "FAIL",
        };
        out.push_str(&format!(
            "{tag:<24} {:>6} {:>6} {:>6}  {result}\n",
            s.pass, s.fail, s.skip
        ));
    }
    if summary.failed() {
        let first = summary
            .tags
            .iter()
            .filter(|(t, _)| !t.starts_with("conj:"))
            .find_map(|(t, s)| s.first_failure.as_ref().map(|f| format!("{t}: {f}")))
            .unwrap_or_default();
        return Err(Failure::Verification(format!("{out}first failure: {first}")));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<String, Failure> {
    if let Some(t) = cli.budget.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(anyhow::Error::from)?;
    }
    let numbers = cli.budget.numbers();
    match &cli.command {
        Command::Parse { diagram } => Ok(format!("{}\n", read_diagram(diagram)?.canonical_form())),
        Command::Invariants { diagram } => Ok(invariants(&read_diagram(diagram)?, &numbers.budget)),
        Command::Numbers { diagram, json } => {
            let d = read_diagram(diagram)?;
            let (report, _) = analyze(&d, &numbers).map_err(anyhow::Error::from)?;
            if *json {
                Ok(format!(
                    "{}\n",
                    serde_json::to_string(&report).map_err(anyhow::Error::from)?
                ))
            } else {
                Ok(report.to_string())
            }
        }
        Command::Bounds { diagram, json } => {
            let d = read_diagram(diagram)?;
            let reports = bound_reports(&d, &numbers.budget).map_err(anyhow::Error::from)?;
            let exact = if d.n() <= DEFAULT_UNKNOTTING_LIMIT {
                Some(
                    unknotting_exact_small(&d, &numbers.budget, DEFAULT_UNKNOTTING_LIMIT)
                        .map_err(anyhow::Error::from)?,
                )
            } else {
                None
            };
            if *json {
                let v = serde_json::json!({ "bounds": reports, "u_exact": exact });
                Ok(format!("{v}\n"))
            } else {
                let mut out: String = reports.iter().map(|r| format!("{r}\n")).collect();
                if let Some(e) = exact {
                    out.push_str(&format!("u exact: {e}\n"));
                }
                Ok(out)
            }
        }
        Command::Census(args) => census(args, numbers).map(|_| String::new()).map_err(Failure::Usage),
        Command::Verify { file } => verify(file, numbers),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(report)) => {
            println!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
