//! `hyperdilute` command-line tool.
//!
//! Exit status: 0 success, 1 negative answer (not a dilution, no minor,
//! failed criterion), 2 bad input, 3 budget or size limit exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use hyperdilute::cq::{
    compute_core, count, evaluate, reduce_along_dilution, semantic_ghw, ConjunctiveQuery, Database,
    DEFAULT_CORE_LIMIT,
};
use hyperdilute::decomposition::{exact_ghw, exact_treewidth, GHDecomposition, DEFAULT_GHW_LIMIT, DEFAULT_TW_LIMIT};
use hyperdilute::dilution::{DEFAULT_SEARCH_BUDGET, SearchOutcome};
use hyperdilute::format;
use hyperdilute::generators::{grid, GeneratorSpec};
use hyperdilute::minors::{find_minor, jigsaw_from_grid_minor, MinorMap, DEFAULT_MINOR_LIMIT};
use hyperdilute::prejigsaw::{
    prejigsaw_from_expressive_minor, prejigsaw_to_jigsaw, validate_prejigsaw, EdgeAssignment, PreJigsawWitness,
};
use hyperdilute::suite::{format_report, run_criterion, SuiteConfig, CRITERIA};
use hyperdilute::{apply_sequence, reduce, search_dilution, verify_dilution, DilutionSequence, Edge, Error, Hypergraph};

#[derive(Parser, Debug)]
#[command(name = "hyperdilute", version, about = "Hypergraph dilutions, widths and query reductions")]
struct Cli {
    /// Output format; inputs in either format are recognised automatically.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Treat an exhausted budget as a negative answer (exit 1) instead of an
    /// inconclusive one (exit 3).
    #[arg(long, global = true)]
    strict: bool,
    /// Budget of the exhaustive searches (dilution, minor).
    #[arg(long, global = true, env = "HYPERDILUTE_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Out {
    /// Write the main result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a hypergraph from a standard family.
    Gen {
        #[command(subcommand)]
        family: Family,
        #[command(flatten)]
        out: Out,
    },
    /// Dual hypergraph.
    Dual {
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Reduced form; optionally also the reduction steps.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Primal graph.
    Primal {
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Apply a dilution sequence.
    Dilute {
        input: PathBuf,
        sequence: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Decide whether TARGET is a dilution of SOURCE, by checking a given
    /// sequence or by search.
    CheckDilution {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Exact treewidth or generalized hypertree width.
    Width {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = WidthKind::Ghw)]
        kind: WidthKind,
        /// Largest accepted instance (vertices for tw, reduced edges for ghw).
        #[arg(long)]
        limit: Option<usize>,
        /// Write the decomposition here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Dilution sequence from a degree-2 hypergraph to a jigsaw, through a
    /// grid minor of its dual.
    JigsawExtract {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 2)]
        cols: usize,
        /// Use this minor map instead of searching.
        #[arg(long)]
        minor: Option<PathBuf>,
        /// Write the minor map that was used here.
        #[arg(long, conflicts_with = "minor")]
        save_minor: Option<PathBuf>,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Dilution to a pre-jigsaw from an expressive grid minor, or validation
    /// of a pre-jigsaw witness.
    PrejigsawExtract {
        input: PathBuf,
        /// Minor map with edge assignment (`mu` and `rho` lines).
        minor: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 2)]
        cols: usize,
        /// Write the pre-jigsaw witness here.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Continue the sequence down to the jigsaw itself.
        #[arg(long)]
        to_jigsaw: bool,
        /// Only validate INPUT as a pre-jigsaw with this witness.
        #[arg(long, conflicts_with = "minor")]
        check: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// All solutions of a query.
    CqEval {
        query: PathBuf,
        database: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Number of solutions of a query.
    CqCount { query: PathBuf, database: PathBuf },
    /// Rewrite a query over the end of a dilution into one over its source.
    CqReduce {
        query: PathBuf,
        database: PathBuf,
        hypergraph: PathBuf,
        sequence: PathBuf,
        /// Directory for p.cq, dp.db and rename.map.
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Core of a query.
    Core {
        query: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Generalized hypertree width of the core of a query.
    Sghw {
        query: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Run the acceptance batteries.
    Suite {
        /// Criteria to run (all by default).
        #[arg(long = "criterion", short = 'c')]
        criteria: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    Grid { n: usize, m: usize },
    Jigsaw { n: usize, m: usize },
    Mesh { n: usize, m: usize },
    /// The 6x6 mesh; `--sequence` also writes the packaged dilution from
    /// it to the 3x2 jigsaw.
    MeshExample {
        #[arg(long)]
        sequence: Option<PathBuf>,
    },
    /// Jigsaw with every edge split into paths; the witness can be written.
    Subdivided {
        n: usize,
        m: usize,
        k: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    Random {
        vertices: usize,
        edges: usize,
        max_degree: usize,
        max_rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum WidthKind {
    Tw,
    Ghw,
}

/// Command failures with their exit status.
#[derive(Debug)]
enum Failure {
    Negative(String),
    Input(String),
    Exhausted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_limit() {
            Failure::Exhausted(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted(m)) if cli.strict => {
            eprintln!("failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Exhausted(m)) => {
            eprintln!("inconclusive: {m}");
            ExitCode::from(3)
        }
    }
}

// ------------------------------------------------------------------ I/O

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with(['{', '['])
}

/// Reads a value in either format.
fn load<T: DeserializeOwned>(path: &Path, text_parser: impl Fn(&str) -> hyperdilute::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    let parsed = if is_json(&text) {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        text_parser(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    let h: Hypergraph = load(path, format::parse_hypergraph)?;
    // JSON input bypasses the constructor's checks
    Hypergraph::new(h.vertices().clone(), h.edges().clone())
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_sequence(path: &Path) -> Result<DilutionSequence, Failure> {
    load(path, format::parse_sequence)
}

fn load_query(path: &Path) -> Result<ConjunctiveQuery, Failure> {
    let q: ConjunctiveQuery = load(path, format::parse_query)?;
    q.schema()?;
    Ok(q)
}

fn load_database(path: &Path) -> Result<Database, Failure> {
    load(path, format::parse_database)
}

/// JSON mirror of a minor file: edge-assignment keys are sets, so entries
/// are listed.
#[derive(Serialize, Deserialize)]
struct MinorFile {
    mu: MinorMap,
    #[serde(default)]
    rho: Vec<(Edge, Edge)>,
}

fn load_minor(path: &Path) -> Result<(MinorMap, EdgeAssignment), Failure> {
    let text = read(path)?;
    if is_json(&text) {
        let f: MinorFile =
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok((f.mu, f.rho.into_iter().collect()))
    } else {
        format::parse_minor(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

/// Writes atomically: a temporary file in the target directory renamed
/// into place.
fn write_file(path: &Path, contents: &str) -> Outcome {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Outcome {
    match out {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render<T: Serialize>(fmt: Format, v: &T, text: impl FnOnce(&T) -> String) -> String {
    match fmt {
        Format::Text => text(v),
        Format::Json => json(v),
    }
}

fn render_hypergraph(fmt: Format, h: &Hypergraph) -> String {
    render(fmt, h, format::print_hypergraph)
}

fn render_sequence(fmt: Format, s: &DilutionSequence) -> String {
    render(fmt, s, format::print_sequence)
}

fn render_decomposition(fmt: Format, d: &GHDecomposition) -> String {
    render(fmt, d, format::print_decomposition)
}

fn render_minor(fmt: Format, mu: &MinorMap, rho: &EdgeAssignment) -> String {
    match fmt {
        Format::Text => format::print_minor(mu, rho),
        Format::Json => json(&MinorFile {
            mu: mu.clone(),
            rho: rho.iter().map(|(a, b)| (a.clone(), b.clone())).collect(),
        }),
    }
}

fn render_witness(fmt: Format, w: &PreJigsawWitness) -> String {
    render(fmt, w, format::print_prejigsaw)
}

fn load_witness(path: &Path) -> Result<PreJigsawWitness, Failure> {
    load(path, format::parse_prejigsaw)
}

// ------------------------------------------------------------ commands

fn run(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    let search_budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let minor_budget = cli.budget.unwrap_or(hyperdilute::minors::DEFAULT_MINOR_BUDGET);
    match &cli.command {
        Command::Gen { family, out } => {
            let spec = match family {
                Family::Grid { n, m } => GeneratorSpec::Grid { n: *n, m: *m },
                Family::Jigsaw { n, m } => GeneratorSpec::Jigsaw { n: *n, m: *m },
                Family::Mesh { n, m } => GeneratorSpec::Mesh { n: *n, m: *m },
                Family::MeshExample { sequence } => {
                    if let Some(p) = sequence {
                        write_file(p, &render_sequence(fmt, &hyperdilute::generators::mesh_example_sequence()))?;
                    }
                    GeneratorSpec::Mesh { n: 6, m: 6 }
                }
                Family::Subdivided { n, m, k, witness } => {
                    let (h, w) = hyperdilute::generators::subdivided_jigsaw(*n, *m, *k)?;
                    if let Some(p) = witness {
                        write_file(p, &render_witness(fmt, &w))?;
                    }
                    return emit(out.output.as_deref(), &render_hypergraph(fmt, &h));
                }
                Family::Random {
                    vertices,
                    edges,
                    max_degree,
                    max_rank,
                    seed,
                } => GeneratorSpec::Random {
                    vertices: *vertices,
                    edges: *edges,
                    max_degree: *max_degree,
                    max_rank: *max_rank,
                    seed: *seed,
                },
            };
            emit(out.output.as_deref(), &render_hypergraph(fmt, &spec.generate()?))
        }
        Command::Dual { input, out } => {
            let h = load_hypergraph(input)?;
            emit(out.output.as_deref(), &render_hypergraph(fmt, &h.dual()))
        }
        Command::Primal { input, out } => {
            let h = load_hypergraph(input)?;
            emit(out.output.as_deref(), &render_hypergraph(fmt, &h.primal_graph()))
        }
        Command::Reduce { input, sequence, out } => {
            let h = load_hypergraph(input)?;
            let (r, seq) = reduce(&h);
            if let Some(p) = sequence {
                write_file(p, &render_sequence(fmt, &seq))?;
            }
            emit(out.output.as_deref(), &render_hypergraph(fmt, &r))
        }
        Command::Dilute { input, sequence, out } => {
            let h = load_hypergraph(input)?;
            let seq = load_sequence(sequence)?;
            emit(out.output.as_deref(), &render_hypergraph(fmt, &apply_sequence(&h, &seq)?))
        }
        Command::CheckDilution {
            source,
            target,
            sequence,
            out,
        } => {
            let h = load_hypergraph(source)?;
            let t = load_hypergraph(target)?;
            match sequence {
                Some(p) => {
                    let seq = load_sequence(p)?;
                    match verify_dilution(&h, &seq, &t) {
                        Ok(Some(_)) => {
                            println!("{}", answer(fmt, true));
                            Ok(())
                        }
                        Ok(None) => Err(Failure::Negative(format!(
                            "{}\nthe sequence ends in a hypergraph not isomorphic to the target",
                            answer(fmt, false)
                        ))),
                        Err(e) if !e.is_resource_limit() => {
                            Err(Failure::Negative(format!("{}\nthe sequence does not apply: {e}", answer(fmt, false))))
                        }
                        Err(e) => Err(e.into()),
                    }
                }
                None => match search_dilution(&h, &t, search_budget)? {
                    SearchOutcome::Found(seq) => {
                        match &out.output {
                            Some(p) => {
                                write_file(p, &render_sequence(fmt, &seq))?;
                                println!("{}", answer(fmt, true));
                            }
                            None if fmt == Format::Json => {
                                println!("{}", json(&serde_json::json!({ "dilution": true, "sequence": seq })).trim_end())
                            }
                            None => print!("{}\n{}", answer(fmt, true), format::print_sequence(&seq)),
                        }
                        Ok(())
                    }
                    SearchOutcome::Absent => Err(Failure::Negative(answer(fmt, false))),
                },
            }
        }
        Command::Width {
            input,
            kind,
            limit,
            witness,
        } => {
            let h = load_hypergraph(input)?;
            let (width, ghd) = match kind {
                WidthKind::Tw => {
                    let (w, td) = exact_treewidth(&h, limit.unwrap_or(DEFAULT_TW_LIMIT))?;
                    (w.width, GHDecomposition { td, covers: Vec::new() })
                }
                WidthKind::Ghw => {
                    let (w, ghd) = exact_ghw(&h, limit.unwrap_or(DEFAULT_GHW_LIMIT))?;
                    (w.width, ghd)
                }
            };
            if let Some(p) = witness {
                write_file(p, &render_decomposition(fmt, &ghd))?;
            }
            match fmt {
                Format::Text => println!("{width}"),
                Format::Json => print!("{}", json(&serde_json::json!({ "width": width }))),
            }
            Ok(())
        }
        Command::JigsawExtract {
            input,
            rows,
            cols,
            minor,
            save_minor,
            limit,
            out,
        } => {
            let h = load_hypergraph(input)?;
            let g = grid(*rows, *cols);
            let mu = match minor {
                Some(p) => load_minor(p)?.0,
                None => {
                    let f = reduce(&h).0.dual();
                    match find_minor(&g, &f, limit.unwrap_or(DEFAULT_MINOR_LIMIT), minor_budget)? {
                        Some(mu) => mu,
                        None => {
                            return Err(Failure::Negative(format!(
                                "the dual has no {rows}x{cols} grid minor"
                            )))
                        }
                    }
                }
            };
            if let Some(p) = save_minor {
                write_file(p, &render_minor(fmt, &mu, &EdgeAssignment::new()))?;
            }
            let seq = jigsaw_from_grid_minor(&h, &g, &mu)?;
            emit(out.output.as_deref(), &render_sequence(fmt, &seq))
        }
        Command::PrejigsawExtract {
            input,
            minor,
            rows,
            cols,
            witness,
            to_jigsaw,
            check,
            out,
        } => {
            let h = load_hypergraph(input)?;
            if let Some(p) = check {
                let w = load_witness(p)?;
                return match validate_prejigsaw(&h, &w) {
                    Ok(()) => {
                        println!("{}", answer(fmt, true));
                        Ok(())
                    }
                    Err(v) => Err(Failure::Negative(format!("{}\n{v}", answer(fmt, false)))),
                };
            }
            let Some(minor) = minor else {
                return Err(Failure::Input("a minor file or --check is required".into()));
            };
            let (mu, rho) = load_minor(minor)?;
            let (mut seq, w) = prejigsaw_from_expressive_minor(&h, *rows, *cols, &mu, &rho)?;
            if *to_jigsaw {
                let p = apply_sequence(&h, &seq)?;
                seq = seq.then(prejigsaw_to_jigsaw(&p, &w)?);
            }
            if let Some(p) = witness {
                write_file(p, &render_witness(fmt, &w))?;
            }
            emit(out.output.as_deref(), &render_sequence(fmt, &seq))
        }
        Command::CqEval { query, database, out } => {
            let q = load_query(query)?;
            let db = load_database(database)?;
            let sols = evaluate(&q, &db)?;
            let text = match fmt {
                Format::Json => json(&sols),
                Format::Text => sols
                    .iter()
                    .map(|a| {
                        let parts: Vec<String> = a.iter().map(|(x, c)| format!("{x}={c}")).collect();
                        format!("{}\n", parts.join(" "))
                    })
                    .collect(),
            };
            emit(out.output.as_deref(), &text)
        }
        Command::CqCount { query, database } => {
            let n = count(&load_query(query)?, &load_database(database)?)?;
            match fmt {
                Format::Text => println!("{n}"),
                Format::Json => print!("{}", json(&serde_json::json!({ "count": n }))),
            }
            Ok(())
        }
        Command::CqReduce {
            query,
            database,
            hypergraph,
            sequence,
            output,
        } => {
            let q = load_query(query)?;
            let db = load_database(database)?;
            let h = load_hypergraph(hypergraph)?;
            let seq = load_sequence(sequence)?;
            let red = reduce_along_dilution(&q, &db, &h, &seq)?;
            fs::create_dir_all(output).map_err(|e| Failure::Input(format!("{}: {e}", output.display())))?;
            let (qs, ds, rs) = match fmt {
                Format::Text => (
                    format::print_query(&red.query),
                    format::print_database(&red.database),
                    format::print_rename(&red.rename),
                ),
                Format::Json => (json(&red.query), json(&red.database), json(&red.rename)),
            };
            write_file(&output.join("p.cq"), &qs)?;
            write_file(&output.join("dp.db"), &ds)?;
            write_file(&output.join("rename.map"), &rs)?;
            match fmt {
                Format::Text => {
                    for s in &red.sizes {
                        println!("step {} size {} -> {}", s.step, s.before, s.after);
                    }
                }
                Format::Json => print!("{}", json(&red.sizes)),
            }
            Ok(())
        }
        Command::Core { query, limit, out } => {
            let q = load_query(query)?;
            let core = compute_core(&q, limit.unwrap_or(DEFAULT_CORE_LIMIT))?;
            emit(out.output.as_deref(), &render(fmt, &core, format::print_query))
        }
        Command::Sghw { query, limit, witness } => {
            let q = load_query(query)?;
            let (core, w, ghd) = semantic_ghw(&q, limit.unwrap_or(DEFAULT_CORE_LIMIT))?;
            if let Some(p) = witness {
                write_file(p, &render_decomposition(fmt, &ghd))?;
            }
            match fmt {
                Format::Text => println!("{}", w.width),
                Format::Json => print!("{}", json(&serde_json::json!({ "width": w.width, "core": core }))),
            }
            Ok(())
        }
        Command::Suite { criteria, seed } => {
            let ids: Vec<usize> = if criteria.is_empty() { (1..=CRITERIA).collect() } else { criteria.clone() };
            if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CRITERIA) {
                return Err(Failure::Input(format!("no criterion {bad}")));
            }
            let cfg = SuiteConfig {
                seed: *seed,
                search_budget,
            };
            let mut reports = Vec::new();
            for id in ids {
                let r = run_criterion(id, &cfg);
                if fmt == Format::Text {
                    print!("{}", format_report(std::slice::from_ref(&r)));
                }
                reports.push(r);
            }
            if fmt == Format::Json {
                print!("{}", json(&reports));
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Negative(format!("{failed} criteria failed")))
            }
        }
    }
}

fn answer(fmt: Format, yes: bool) -> String {
    match fmt {
        Format::Text => if yes { "yes" } else { "no" }.to_string(),
        Format::Json => serde_json::json!({ "dilution": yes }).to_string(),
    }
}

