//! Command-line front end. Exit codes: 0 when the property holds or the
//! object is found, 1 when it is absent or a counterexample exists, 2 on
//! usage or input errors.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::enumeration::{self, SearchOptions, SearchReport};
use crate::error::{Error, Result};
use crate::factor;
use crate::factorization::{self, Factorization};
use crate::graph::{self, Graph};
use crate::graph6;
use crate::ledger::{self, LedgerConfig};

pub const EXIT_FOUND: u8 = 0;
pub const EXIT_NOT_FOUND: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

const PROGRESS_EVERY: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "factorium", version, about = "k-factors, disjoint perfect matchings and Ore-type searches")]
pub struct Cli {
    /// Output format; `json` prints one object per input graph.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for searches and enumeration.
    #[arg(long, env = "FACTORIUM_JOBS", default_value_t = 1, global = true)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// graph6 string; read from --file or stdin when absent
    pub graph: Option<String>,

    /// File with one graph6 string per line, or a DIMACS edge file.
    #[arg(long, conflicts_with = "graph")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test d(x) + d(y) >= n + k - 2 for all nonadjacent pairs.
    OreCheck {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Find a k-factor.
    Factor {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Find a certificate that no k-factor exists.
    Certificate {
        #[arg(long)]
        k: usize,
        /// Pick the extremal certificate (fewest odd-component vertices).
        #[arg(long)]
        extremal: bool,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Split a k-factor into k perfect matchings, or 1-factorize a regular
    /// graph when --k is omitted.
    Decompose {
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Find k edge-disjoint perfect matchings.
    DisjointPms {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Scan Ore-type-(k-2) graphs on n vertices for ones without k
    /// disjoint perfect matchings.
    SearchWin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Scan Ore-type-(k-2) graphs on n vertices for ones without a k-factor.
    SearchKfactor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run the integer-grid inequality checks.
    Ledger {
        #[arg(long, default_value_t = ledger::DEFAULT_K_MAX)]
        k_max: i64,
        #[arg(long, default_value_t = ledger::DEFAULT_QP_K_MAX)]
        qp_k_max: i64,
        #[arg(long, default_value_t = ledger::DEFAULT_CASE42_RANGE)]
        range: i64,
        #[arg(long, default_value_t = ledger::DEFAULT_CHAIN_N_MAX)]
        chain_n_max: i64,
    },
    /// List one graph per isomorphism class as graph6.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only Ore-type-(k-2) graphs.
        #[arg(long, conflicts_with = "regular")]
        ore_k: Option<usize>,
        /// Only D-regular graphs.
        #[arg(long, value_name = "D")]
        regular: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::OreCheck { .. } => "ore-check",
            Command::Factor { .. } => "factor",
            Command::Certificate { .. } => "certificate",
            Command::Decompose { .. } => "decompose",
            Command::DisjointPms { .. } => "disjoint-pms",
            Command::SearchWin { .. } => "search-win",
            Command::SearchKfactor { .. } => "search-kfactor",
            Command::Ledger { .. } => "ledger",
            Command::Enumerate { .. } => "enumerate",
        }
    }

    fn input(&self) -> Option<&GraphInput> {
        match self {
            Command::OreCheck { input, .. }
            | Command::Factor { input, .. }
            | Command::Certificate { input, .. }
            | Command::Decompose { input, .. }
            | Command::DisjointPms { input, .. } => Some(input),
            _ => None,
        }
    }
}

/// One answer: exit code, human text, and the JSON `result`/`witness`.
struct Outcome {
    code: u8,
    text: String,
    result: Value,
    witness: Value,
}

impl Outcome {
    fn new(found: bool, text: String, result: Value, witness: Value) -> Self {
        Outcome {
            code: if found { EXIT_FOUND } else { EXIT_NOT_FOUND },
            text,
            result,
            witness,
        }
    }
}

/// Parses, runs and prints; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_FOUND };
            let rendered = e.render().to_string();
            let sink: &mut (dyn Write + Send) = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {} worker threads: {e}", cli.jobs);
            return EXIT_ERROR;
        }
    };
    pool.install(|| run(&cli, &mut io::stdin().lock(), out, err))
}

/// Runs a parsed invocation, reading graphs from `stdin` when needed.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let Some(input) = cli.command.input() else {
        let start = Instant::now();
        let outcome = run_global(&cli.command);
        return emit(cli, None, outcome, start, out, err);
    };
    let graphs = match read_graphs(input, stdin) {
        Ok(graphs) => graphs,
        Err(e) => return fail(err, &e),
    };
    if graphs.is_empty() {
        return fail(err, &Error::arg("no graph given"));
    }
    let mut worst = EXIT_FOUND;
    for parsed in graphs {
        let start = Instant::now();
        let code = match parsed {
            Ok(g) => {
                let outcome = run_on_graph(&cli.command, &g);
                let label = graph6::emit_graph6(&g).ok();
                emit(cli, label, outcome, start, out, err)
            }
            Err(e) => fail(err, &e),
        };
        worst = worst.max(code);
    }
    worst
}

fn fail(err: &mut dyn Write, e: &Error) -> u8 {
    let _ = writeln!(err, "error: {e}");
    EXIT_ERROR
}

fn emit(cli: &Cli, graph: Option<String>, outcome: Result<Outcome>, start: Instant, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return fail(err, &e),
    };
    let written = match cli.format {
        Format::Text => writeln!(out, "{}", outcome.text),
        Format::Json => {
            let mut params = params(&cli.command);
            if let Some(g) = graph {
                params["graph"] = Value::String(g);
            }
            let object = json!({
                "command": cli.command.name(),
                "params": params,
                "result": outcome.result,
                "witness": outcome.witness,
                "elapsed_ms": start.elapsed().as_millis() as u64,
            });
            writeln!(out, "{object}")
        }
    };
    if written.is_err() {
        return EXIT_ERROR;
    }
    outcome.code
}

fn params(command: &Command) -> Value {
    match command {
        Command::OreCheck { k, .. } | Command::Factor { k, .. } | Command::DisjointPms { k, .. } => json!({ "k": k }),
        Command::Certificate { k, extremal, .. } => json!({ "k": k, "extremal": extremal }),
        Command::Decompose { k, .. } => json!({ "k": k }),
        Command::SearchWin { n, k } | Command::SearchKfactor { n, k } => json!({ "n": n, "k": k }),
        Command::Ledger {
            k_max,
            qp_k_max,
            range,
            chain_n_max,
        } => json!({ "k_max": k_max, "qp_k_max": qp_k_max, "range": range, "chain_n_max": chain_n_max }),
        Command::Enumerate { n, ore_k, regular } => json!({ "n": n, "ore_k": ore_k, "regular": regular }),
    }
}

/// All graphs named by the input: the positional string, a file or stdin.
/// A text containing a `p` line is one DIMACS graph; otherwise every
/// nonempty line is a graph6 string. Bad lines become per-line errors.
fn read_graphs(input: &GraphInput, stdin: &mut dyn Read) -> Result<Vec<Result<Graph>>> {
    let text = match (&input.graph, &input.file) {
        (Some(g), _) => g.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| Error::arg(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    if text.lines().any(|l| l.trim_start().starts_with("p ")) {
        return Ok(vec![graph6::parse_dimacs(&text)]);
    }
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| graph6::parse_graph6(l.as_bytes()))
        .collect())
}

fn edges_text(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(u, v)| format!("({u},{v})")).collect()
}

fn factorization_outcome(found: Option<Factorization>, none_text: String) -> Outcome {
    match found {
        Some(f) => Outcome::new(true, f.to_string(), json!({ "found": true, "matchings": f.len() }), json!(f)),
        None => Outcome::new(false, none_text, json!({ "found": false }), Value::Null),
    }
}

fn run_on_graph(command: &Command, g: &Graph) -> Result<Outcome> {
    let n = g.order();
    let need_k = |k: usize| {
        if k == 0 {
            Err(Error::arg("k must be at least 1"))
        } else {
            Ok(())
        }
    };
    Ok(match *command {
        Command::OreCheck { k, .. } => {
            need_k(k)?;
            if n >= 2 && k >= n {
                return Err(Error::arg(format!("need k <= n-1 = {}", n - 1)));
            }
            let report = graph::ore_report(g, k);
            let holds = report.is_ore_type();
            let deficit = report.deficit.map_or("inf".to_string(), |d| d.to_string());
            let text = match report.witness_pair {
                Some((u, v)) => format!("ore-type: {} deficit={deficit} pair=({u},{v})", yes_no(holds)),
                None => format!("ore-type: yes deficit={deficit}"),
            };
            Outcome::new(
                holds,
                text,
                json!({ "ore_type": holds, "deficit": report.deficit }),
                json!(report.witness_pair),
            )
        }
        Command::Factor { k, .. } => {
            need_k(k)?;
            match factor::find_k_factor(g, k) {
                Some(f) => Outcome::new(true, edges_text(&f.edges), json!({ "found": true }), json!(f.edges)),
                None => Outcome::new(false, format!("no {k}-factor"), json!({ "found": false }), Value::Null),
            }
        }
        Command::Certificate { k, extremal, .. } => {
            need_k(k)?;
            let found = if extremal {
                factor::find_extremal_certificate(g, k)?.map(|c| {
                    let eta = c.base.eta;
                    (c.to_string(), eta, json!(c))
                })
            } else {
                factor::find_tutte_certificate(g, k)?.map(|c| (c.to_string(), c.eta, json!(c)))
            };
            match found {
                Some((text, eta, witness)) => Outcome::new(true, text, json!({ "found": true, "eta": eta }), witness),
                None => Outcome::new(
                    false,
                    format!("no certificate: a {k}-factor exists"),
                    json!({ "found": false }),
                    Value::Null,
                ),
            }
        }
        Command::Decompose { k: Some(k), .. } => {
            need_k(k)?;
            if n % 2 == 1 {
                return Err(Error::arg("perfect matchings need an even number of vertices"));
            }
            factorization_outcome(
                factorization::decompose_via_factor(g, k),
                format!("no {k}-factor splits into perfect matchings"),
            )
        }
        Command::Decompose { k: None, .. } => {
            factorization_outcome(factorization::one_factorization(g)?, "no 1-factorization".to_string())
        }
        Command::DisjointPms { k, .. } => {
            need_k(k)?;
            factorization_outcome(
                factorization::k_disjoint_perfect_matchings(g, k)?,
                format!("no {k} edge-disjoint perfect matchings"),
            )
        }
        _ => unreachable!("graph-free commands are handled by run_global"),
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run_global(command: &Command) -> Result<Outcome> {
    match *command {
        Command::SearchWin { n, k } => search(|opts| enumeration::search_win_counterexample(n, k, opts)),
        Command::SearchKfactor { n, k } => search(|opts| enumeration::search_kfactor_counterexample(n, k, opts)),
        Command::Ledger {
            k_max,
            qp_k_max,
            range,
            chain_n_max,
        } => {
            if k_max < 1 || qp_k_max < 1 || range < 1 || chain_n_max < 2 {
                return Err(Error::arg("grid bounds must be positive (chain-n-max at least 2)"));
            }
            let results = ledger::run_all(&LedgerConfig {
                k_max,
                qp_k_max,
                case42_range: range,
                chain_n_max,
            });
            let passed = results.iter().all(|r| r.passed);
            let text = results.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            let witness = results
                .iter()
                .find_map(|r| r.violations.first().map(|w| json!({ "check": r.check_name, "at": w.to_string() })))
                .unwrap_or(Value::Null);
            Ok(Outcome::new(passed, text, json!({ "passed": passed, "checks": results }), witness))
        }
        Command::Enumerate { n, ore_k, regular } => {
            let stream: Box<dyn Iterator<Item = Graph>> = match (ore_k, regular) {
                (Some(k), _) => enumeration::enumerate_ore_graphs(n, k)?,
                (None, Some(d)) => enumeration::enumerate_regular_graphs(n, d)?,
                (None, None) => Box::new(enumeration::enumerate_graphs(n)?),
            };
            let codes: Vec<String> = stream
                .map(|g| graph6::emit_graph6(&g).expect("enumeration stays within graph6 range"))
                .collect();
            Ok(Outcome::new(true, codes.join("\n"), json!({ "count": codes.len() }), json!(codes)))
        }
        _ => unreachable!("graph commands are handled by run_on_graph"),
    }
}

fn search(go: impl FnOnce(&SearchOptions<'_>) -> Result<SearchReport>) -> Result<Outcome> {
    let progress = |seen: usize| eprintln!("scanned {seen} graphs");
    let opts = SearchOptions {
        on_failure: None,
        on_progress: Some(&progress),
        progress_every: PROGRESS_EVERY,
    };
    let report = go(&opts)?;
    let result = json!({
        "holds": report.holds(),
        "graphs_scanned": report.graphs_scanned,
        "ore_graphs": report.ore_graphs,
        "failures": report.failures.len(),
    });
    Ok(Outcome::new(report.holds(), report.to_text(), result, json!(report.failures)))
}
