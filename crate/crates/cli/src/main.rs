use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use lapdiag::balanced::{
    canonicalize, count_regular_by_sum, enumerate_balanced_by_length, enumerate_balanced_by_sum,
    is_balanced, is_regular,
};
use lapdiag::constructions::{
    circulant_pm1, hadamard_with_budget, orthogonal_zero_one_witness, ORTHOGONAL_SEARCH_BUDGET,
};
use lapdiag::graphs::{
    complete, complete_multipartite, cycle, is_connected, parse_graph6, path, write_graph6,
};
use lapdiag::sdiag::{necessary_conditions, s_bandwidth_with_spectrum, verify_bandwidth};
use lapdiag::spectra::integer_spectrum;
use lapdiag::survey::{
    closure_generate, corpus_text, emit_to_path, generate_graphs, multipartite_survey, scan,
    ScanOptions,
};
use lapdiag::{
    Alphabet, Bandwidth, Graph, Matrix, OutputFormat, PartitionSpec, SearchBudget, SearchOptions,
    WitnessMatrix, WitnessSearch,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

/// Malformed user input: exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct InputError(String);

/// A result failed exact re-verification: exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct VerificationFailed(String);

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

#[derive(Parser)]
#[command(
    name = "lapdiag",
    version,
    about = "Laplacian diagonalizability over small integer alphabets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balanced vectors.
    #[command(subcommand)]
    Balanced(BalancedCommand),
    /// Single-graph analysis.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Analyse every graph in a graph6 file.
    Scan(ScanArgs),
    /// Graphs reachable from K1 by complement, disjoint union and Cartesian product.
    Closure {
        #[arg(long)]
        max_n: usize,
        /// Write graph6 lines here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explicit witness matrices.
    Construct(ConstructArgs),
    /// Family surveys.
    #[command(subcommand)]
    Survey(SurveyCommand),
    /// Write every graph on N vertices, up to isomorphism, as graph6.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        connected_only: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BalancedCommand {
    /// Decide whether a vector is balanced and print a certificate.
    Check {
        /// Comma-separated integers, e.g. 2,1,1
        #[arg(allow_hyphen_values = true)]
        vector: String,
        #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true)]
        alphabet: String,
    },
    /// List balanced vectors by length or by sum.
    Enum(EnumArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EnumSelector {
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    sum: Option<u64>,
}

#[derive(Args)]
struct EnumArgs {
    #[command(flatten)]
    selector: EnumSelector,
    /// Largest entry considered with --length.
    #[arg(long, requires = "length")]
    cap: Option<u64>,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Spectrum and S-bandwidths of one graph.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    #[arg(long)]
    graph6: Option<String>,
    /// complete:N, multipartite:v1,v2,..., path:N, cycle:N or empty:N
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Only this alphabet; default is both {-1,0,1} and {-1,1}.
    #[arg(long, allow_hyphen_values = true)]
    alphabet: Option<String>,
    /// Search node budget per alphabet.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    connected_only: bool,
    /// Worker threads; default uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "jsonl")]
    format: OutputFormat,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ConstructSelector {
    #[arg(long)]
    circulant: Option<usize>,
    #[arg(long)]
    hadamard: Option<usize>,
    #[arg(long)]
    orthzero: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    selector: ConstructSelector,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum SurveyCommand {
    /// Compare every complete multipartite graph with the closed-form laws.
    Multipartite {
        #[arg(long)]
        max_sum: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<InputError>().is_some() {
                EXIT_INPUT
            } else if e.downcast_ref::<VerificationFailed>().is_some() {
                EXIT_VERIFICATION
            } else {
                EXIT_USAGE
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Balanced(BalancedCommand::Check { vector, alphabet }) => {
            balanced_check(&vector, &alphabet)
        }
        Command::Balanced(BalancedCommand::Enum(args)) => balanced_enum(&args),
        Command::Graph(GraphCommand::Analyze(args)) => analyze(&args),
        Command::Scan(args) => scan_command(&args),
        Command::Closure { max_n, out } => closure(max_n, out),
        Command::Construct(args) => construct(&args),
        Command::Survey(SurveyCommand::Multipartite { max_sum, budget }) => {
            survey_multipartite(max_sum, budget)
        }
        Command::Generate {
            n,
            connected_only,
            out,
        } => generate(n, connected_only, &out),
    }
}

fn parse_alphabet(s: &str) -> Result<Alphabet> {
    s.parse()
        .map_err(|e| input_error(format!("alphabet {s:?}: {e}")))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| input_error(format!("{what} {s:?}: cannot parse {t:?}")))
        })
        .collect()
}

fn options(budget: Option<u64>) -> SearchOptions {
    budget.map_or_else(SearchOptions::default, SearchOptions::with_budget)
}

fn print_rows(out: &mut impl Write, rows: &[Vec<i64>]) -> io::Result<()> {
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>2}")).collect();
        writeln!(out, "  [{}]", cells.join(" "))?;
    }
    Ok(())
}

fn balanced_check(vector: &str, alphabet: &str) -> Result<()> {
    let s = parse_alphabet(alphabet)?;
    let raw: Vec<i64> = parse_list(vector, "vector")?;
    let v = canonicalize(&raw).map_err(|e| input_error(format!("vector {vector:?}: {e}")))?;
    let mut out = io::stdout().lock();
    writeln!(out, "vector: {v}")?;
    writeln!(out, "regular: {}", is_regular(&v))?;
    match is_balanced(&v, &s) {
        Some(cert) => {
            if !cert.verify(&v, &s) {
                return Err(VerificationFailed(format!(
                    "certificate for {v} failed re-verification"
                ))
                .into());
            }
            writeln!(out, "balanced over {s}: yes")?;
            writeln!(out, "certificate:")?;
            print_rows(&mut out, cert.rows())?;
        }
        None => writeln!(out, "balanced over {s}: no")?,
    }
    Ok(())
}

fn balanced_enum(args: &EnumArgs) -> Result<()> {
    let mut out = io::stdout().lock();
    if let Some(p) = args.selector.length {
        if p == 0 {
            return Err(input_error("length must be positive"));
        }
        let vs = enumerate_balanced_by_length(p, args.cap);
        for v in &vs {
            writeln!(out, "{v}")?;
        }
        let regular = vs.iter().filter(|v| is_regular(v)).count();
        eprintln!(
            "{} balanced vectors of length {p}, {regular} regular",
            vs.len()
        );
    } else if let Some(n) = args.selector.sum {
        if n == 0 {
            return Err(input_error("sum must be positive"));
        }
        let vs = enumerate_balanced_by_sum(n);
        for v in &vs {
            writeln!(out, "{v}")?;
        }
        eprintln!(
            "{} balanced vectors with sum {n}, {} regular",
            vs.len(),
            count_regular_by_sum(n)
        );
    }
    Ok(())
}

fn parse_family(spec: &str) -> Result<Graph> {
    let (name, arg) = spec
        .split_once(':')
        .ok_or_else(|| input_error(format!("family {spec:?}: expected NAME:ARGS")))?;
    let size = || -> Result<usize> {
        arg.trim()
            .parse()
            .map_err(|_| input_error(format!("family {spec:?}: bad vertex count")))
    };
    let g = match name {
        "complete" => complete(size()?),
        "path" => path(size()?),
        "cycle" => cycle(size()?),
        "empty" => Graph::empty(size()?),
        "multipartite" => {
            let parts: Vec<usize> = parse_list(arg, "partition")?;
            let spec = PartitionSpec::new(parts)
                .map_err(|e| input_error(format!("family {spec:?}: {e}")))?;
            complete_multipartite(&spec)
        }
        _ => return Err(input_error(format!("unknown family {name:?}"))),
    };
    if g.n() > lapdiag::graphs::MAX_VERTICES {
        return Err(input_error(format!("family {spec:?}: too many vertices")));
    }
    Ok(g)
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let g = match (&args.source.graph6, &args.source.family) {
        (Some(text), _) => parse_graph6(text.as_bytes())
            .map_err(|e| input_error(format!("graph6 {text:?}: {e}")))?,
        (None, Some(f)) => parse_family(f)?,
        (None, None) => bail!("either --graph6 or --family is required"),
    };
    let alphabets = match &args.alphabet {
        Some(a) => vec![parse_alphabet(a)?],
        None => vec![Alphabet::neg_zero_one(), Alphabet::neg_one()],
    };
    let opts = options(args.budget);
    let spectrum = integer_spectrum(&g);
    let mut out = io::stdout().lock();
    let g6 = String::from_utf8(write_graph6(&g)?)?;
    writeln!(out, "graph6: {g6}")?;
    writeln!(
        out,
        "vertices: {}  edges: {}  connected: {}",
        g.n(),
        g.edge_count(),
        is_connected(&g)
    )?;
    let spec: Vec<String> = spectrum
        .value_multiplicities()
        .iter()
        .map(|(v, m)| format!("{v}^{m}"))
        .collect();
    writeln!(out, "laplacian integral: {}", spectrum.integral)?;
    writeln!(out, "integer eigenvalues: {}", spec.join(" "))?;
    for s in &alphabets {
        let report = necessary_conditions(&g, s);
        let r = s_bandwidth_with_spectrum(&g, s, &spectrum, &opts);
        let status = if r.optimal {
            "exact"
        } else {
            "upper bound, budget exhausted"
        };
        writeln!(
            out,
            "{s}-bandwidth: {} ({status}; search nodes {})",
            r.bandwidth, r.nodes
        )?;
        if !report.odd_eigenvalues.is_empty() || report.parity_obstruction {
            writeln!(
                out,
                "  ruled out by parity: odd eigenvalues {:?}, odd connected order {}",
                report.odd_eigenvalues, report.parity_obstruction
            )?;
        }
        if let (Some(w), Bandwidth::Finite(k)) = (&r.witness, r.bandwidth) {
            verify_bandwidth(&g, s, w, k)
                .map_err(|e| VerificationFailed(format!("{s} witness for {g6}: {e}")))?;
            let tags: Vec<String> = w.eigenvalues.iter().map(u64::to_string).collect();
            writeln!(out, "  witness columns (eigenvalues {}):", tags.join(" "))?;
            print_rows(&mut out, &w.rows())?;
        }
    }
    Ok(())
}

fn scan_command(args: &ScanArgs) -> Result<()> {
    let source = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))
        .map_err(|e| input_error(format!("{e:#}")))?;
    let opts = ScanOptions {
        search: options(args.budget),
        connected_only: args.connected_only,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(input_error("--jobs must be positive"));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build()?;
    let summary = pool.install(|| scan(&source, &opts));
    for p in &summary.parse_errors {
        eprintln!("{}:{}: skipped: {}", args.input.display(), p.line, p.error);
    }
    emit_to_path(&summary.records, args.format, &args.out)?;
    let count =
        |f: &dyn Fn(&lapdiag::ScanRecord) -> bool| summary.records.iter().filter(|r| f(r)).count();
    eprintln!(
        "{} records ({} skipped as disconnected, {} unparsable); bw_01 finite: {}, bw_01 = 1: {}, bw_11 = 1: {}; budget-flagged: {}",
        summary.records.len(),
        summary.skipped,
        summary.parse_errors.len(),
        count(&|r| r.bw_01 >= 0),
        count(&|r| r.bw_01 == 1),
        count(&|r| r.bw_11 == 1),
        summary.budget_flagged()
    );
    if !summary.verification_failures.is_empty() {
        for f in &summary.verification_failures {
            eprintln!("verification failure: {f}");
        }
        return Err(VerificationFailed(format!(
            "{} witnesses failed re-verification",
            summary.verification_failures.len()
        ))
        .into());
    }
    Ok(())
}

fn closure(max_n: usize, out: Option<PathBuf>) -> Result<()> {
    if max_n > lapdiag::graphs::CANONICAL_MAX_VERTICES {
        return Err(input_error(format!(
            "--max-n is limited to {}",
            lapdiag::graphs::CANONICAL_MAX_VERTICES
        )));
    }
    let graphs = closure_generate(max_n);
    let text = corpus_text(&graphs);
    match out {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    let connected = graphs.iter().filter(|g| is_connected(g)).count();
    eprintln!("{} graphs, {connected} connected", graphs.len());
    Ok(())
}

fn print_witness(w: &WitnessMatrix) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "kind: {:?}, order {}", w.kind, w.order())?;
    print_rows(&mut out, &w.rows())?;
    Ok(())
}

fn gram_is_diagonal(m: &Matrix) -> bool {
    lapdiag::exact::gram(m).is_diagonal()
}

fn construct(args: &ConstructArgs) -> Result<()> {
    let sel = &args.selector;
    if let Some(n) = sel.circulant {
        let w = circulant_pm1(n).map_err(|e| input_error(e.to_string()))?;
        return print_witness(&w);
    }
    if let Some(n) = sel.hadamard.or(sel.orthzero) {
        if n > lapdiag::graphs::MAX_VERTICES {
            return Err(input_error(format!("order {n} is too large")));
        }
    }
    let (n, search) = if let Some(n) = sel.hadamard {
        let budget = SearchBudget {
            max_nodes: args
                .budget
                .unwrap_or(lapdiag::constructions::HADAMARD_SEARCH_BUDGET),
        };
        (n, hadamard_with_budget(n, budget))
    } else if let Some(n) = sel.orthzero {
        let budget = SearchBudget {
            max_nodes: args.budget.unwrap_or(ORTHOGONAL_SEARCH_BUDGET),
        };
        (n, orthogonal_zero_one_witness(n, budget))
    } else {
        return Err(anyhow!(
            "one of --circulant, --hadamard, --orthzero is required"
        ));
    };
    match search {
        WitnessSearch::Found(w) => {
            if !gram_is_diagonal(&w.matrix) {
                return Err(VerificationFailed(
                    "constructed matrix has non-orthogonal columns".into(),
                )
                .into());
            }
            print_witness(&w)
        }
        WitnessSearch::NotExist => {
            println!("none: the search completed without finding a matrix of order {n}");
            Ok(())
        }
        WitnessSearch::BudgetExhausted => {
            println!("unknown: budget exhausted before the search completed (order {n})");
            Ok(())
        }
    }
}

fn survey_multipartite(max_sum: usize, budget: Option<u64>) -> Result<()> {
    if max_sum > lapdiag::graphs::MAX_VERTICES {
        return Err(input_error(format!(
            "--max-sum is limited to {}",
            lapdiag::graphs::MAX_VERTICES
        )));
    }
    let report = multipartite_survey(max_sum, &options(budget));
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<24} {:>8} {:>11} {:>5} {:>5} {:>5}",
        "parts", "balanced", "equal-even", "bw_01", "bw_11", "bound"
    )?;
    for r in &report.rows {
        let parts: Vec<String> = r.parts.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{:<24} {:>8} {:>11} {:>5} {:>5} {:>5}",
            parts.join(","),
            r.balanced,
            r.equal_even_parts,
            r.bw_01.to_string(),
            r.bw_11.to_string(),
            r.bound
        )?;
    }
    drop(out);
    if !report.verification_failures.is_empty() {
        for f in &report.verification_failures {
            eprintln!("verification failure: {f}");
        }
        return Err(VerificationFailed("witness re-verification failed".into()).into());
    }
    let disagreements = report.disagreements();
    if !disagreements.is_empty() {
        for d in &disagreements {
            eprintln!("disagreement: {d}");
        }
        return Err(VerificationFailed(format!("{} disagreements", disagreements.len())).into());
    }
    eprintln!("{} graphs, no disagreements", report.rows.len());
    Ok(())
}

fn generate(n: usize, connected_only: bool, out: &PathBuf) -> Result<()> {
    if n > lapdiag::graphs::CANONICAL_MAX_VERTICES {
        return Err(input_error(format!(
            "--n is limited to {}",
            lapdiag::graphs::CANONICAL_MAX_VERTICES
        )));
    }
    let mut graphs = generate_graphs(n);
    if connected_only {
        graphs.retain(is_connected);
    }
    fs::write(out, corpus_text(&graphs)).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("{} graphs on {n} vertices", graphs.len());
    Ok(())
}
