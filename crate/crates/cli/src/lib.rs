//! Command-line front end.
//!
//! [`run`] takes the argument vector and returns the exit code together with
//! everything destined for stdout and stderr, so that the binary is a thin
//! wrapper and tests can drive the whole surface in-process.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error,
//! 3 search budget exhausted (partial output is still printed).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spectral_turan::graph::Adjacency;
use spectral_turan::pattern::{parse_family, REGISTRY};
use spectral_turan::search::{extremal, SearchError, DEFAULT_BUDGET};
use spectral_turan::spectra::spectral_radius;
use spectral_turan::verify::{
    all_graphs, check_bound_chain, check_min_entry_bound, check_monotone_sequence, check_star_theorem,
    check_vertex_deletion, connected_graphs, convergence_table, random_graphs, summarize, summary_table, sweep,
    CheckReport, ConvergenceTable, SequenceCheck, Targets, Verdict, CHECK_TOL,
};
use spectral_turan::{
    AdjacencyList, ConvergenceRow, ExtremalRecord, ForbiddenPattern, Graph, MatrixKind, Measure, SearchConfig,
    SearchMode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SPECTRAL_TURAN_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".strcache";

#[derive(Debug, Parser)]
#[command(name = "spectral-turan", version, about = "Extremal and spectral Turán computations on small graphs")]
struct Cli {
    /// Worker threads for searches and sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Neither read nor write cached extremal records.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory; overrides the SPECTRAL_TURAN_CACHE variable.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Stop a search after this many candidate graphs.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral radius and Perron vector of one graph.
    Spectrum {
        /// graph6 string or family name such as K4, C5, K3_3, T2_10, petersen.
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Kind::Q)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Exact extremal value over F-free graphs on n vertices.
    Extremal {
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        measure: MeasureArg,
        #[arg(long, value_enum, default_value_t = ModeArg::All)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run one of the inequality checks.
    Verify(VerifyArgs),
    /// Convergence table of normalised extremal values for n = 2..=n-max.
    Table {
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::All)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PatternArg {
    /// Registry name: K3 K4 K5 C4 C5 C6 C7 K1_2 K1_3 K1_4 K2_3 petersen.
    #[arg(long)]
    pattern: Option<String>,
    /// Forbidden graph given as graph6.
    #[arg(long)]
    pattern_g6: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckId,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    pattern_g6: Option<String>,
    /// Largest order swept or searched.
    #[arg(long, default_value_t = 7)]
    n_max: usize,
    /// Check a single graph (graph6 or family name) instead of sweeping.
    #[arg(long)]
    graph: Option<String>,
    /// Star size for star-theorem.
    #[arg(long, default_value_t = 3)]
    t: usize,
    /// Random graphs per order in 8..=12 added to the bound-chain sweep.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Q,
    A,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeasureArg {
    Edges,
    Lambda,
    Q,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    All,
    Maximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    G6,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckId {
    VertexDeletion,
    MinEntryBound,
    BoundChain,
    MonotoneSequence,
    StarTheorem,
}

/// Collected result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Usage(String);

impl From<SearchError> for Usage {
    fn from(e: SearchError) -> Self {
        Usage(e.to_string())
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = Outcome::default();
    if let Err(Usage(msg)) = dispatch(&cli, &mut out) {
        out.code = EXIT_USAGE;
        out.stderr.push_str(&format!("error: {msg}\n"));
    }
    out
}

fn config(cli: &Cli, mode: ModeArg) -> SearchConfig {
    let mode = match mode {
        ModeArg::All => SearchMode::AllGraphs,
        ModeArg::Maximal => SearchMode::MaximalOnly,
    };
    let cache = if cli.no_cache {
        None
    } else {
        Some(cli.cache_dir.clone().unwrap_or_else(|| {
            std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from)
        }))
    };
    let mut config = SearchConfig::default().with_mode(mode).with_budget(cli.budget).with_cache_dir(cache);
    if let Some(w) = cli.workers {
        config = config.with_workers(w);
    }
    config
}

fn resolve_pattern(name: Option<&str>, g6: Option<&str>) -> Result<ForbiddenPattern, Usage> {
    match (name, g6) {
        (Some(name), None) => {
            let Some(canonical) = REGISTRY.iter().find(|r| r.eq_ignore_ascii_case(name)) else {
                return Err(Usage(format!(
                    "unknown pattern '{name}'; use one of {} or pass --pattern-g6",
                    REGISTRY.join(", ")
                )));
            };
            ForbiddenPattern::from_name(canonical).map_err(|e| Usage(e.to_string()))
        }
        (None, Some(g6)) => {
            ForbiddenPattern::from_graph6(g6).map_err(|e| Usage(format!("malformed --pattern-g6 '{g6}': {e}")))
        }
        (None, None) => Err(Usage("a pattern is required: --pattern NAME or --pattern-g6 STRING".into())),
        (Some(_), Some(_)) => Err(Usage("give either --pattern or --pattern-g6, not both".into())),
    }
}

/// A family name if it parses as one, otherwise graph6.
fn resolve_graph(text: &str) -> Result<AdjacencyList, Usage> {
    if let Ok(family) = parse_family(text) {
        return family.build_list().map_err(|e| Usage(format!("invalid graph '{text}': {e}")));
    }
    Graph::from_graph6(text)
        .map(|g| AdjacencyList::from(&g))
        .map_err(|e| Usage(format!("'{text}' is neither a family name nor valid graph6: {e}")))
}

fn resolve_small_graph(text: &str) -> Result<Graph, Usage> {
    if let Ok(family) = parse_family(text) {
        return family.build().map_err(|e| Usage(format!("invalid graph '{text}': {e}")));
    }
    Graph::from_graph6(text).map_err(|e| Usage(format!("'{text}' is neither a family name nor valid graph6: {e}")))
}

fn dispatch(cli: &Cli, out: &mut Outcome) -> Result<(), Usage> {
    match &cli.command {
        Command::Spectrum { graph, kind, format } => spectrum(graph, *kind, *format, out),
        Command::Extremal { pattern, n, measure, mode, format } => {
            let f = resolve_pattern(pattern.pattern.as_deref(), pattern.pattern_g6.as_deref())?;
            let measure = match measure {
                MeasureArg::Edges => Measure::Edges,
                MeasureArg::Lambda => Measure::AdjacencyRadius,
                MeasureArg::Q => Measure::QRadius,
            };
            match extremal(*n, &f, measure, &config(cli, *mode)) {
                Ok(r) => {
                    out.stderr.push_str(&format!("wallclock {:.3}s\n", r.wallclock.as_secs_f64()));
                    out.stdout = emit_records(&[r], *format);
                }
                Err(SearchError::Budget { examined, partial }) => {
                    out.code = EXIT_BUDGET;
                    out.stderr.push_str(&format!("partial: budget exhausted after {examined} candidate graphs\n"));
                    if let Some(r) = partial {
                        out.stdout = emit_records(&[*r], *format);
                    }
                }
                Err(e) => return Err(e.into()),
            }
            Ok(())
        }
        Command::Verify(args) => verify(cli, args, out),
        Command::Table { pattern, n_max, mode, format } => {
            let f = resolve_pattern(pattern.pattern.as_deref(), pattern.pattern_g6.as_deref())?;
            if *format == Format::G6 {
                return Err(Usage("tables support --format csv or json".into()));
            }
            let config = config(cli, *mode);
            if *n_max < 2 || *n_max > config.max_n {
                return Err(Usage(format!("--n-max must lie in 2..={} for this mode", config.max_n)));
            }
            let table = convergence_table(&f, *n_max, &config)?;
            if table.partial {
                out.code = EXIT_BUDGET;
                let done = table.rows.last().map_or(1, |r| r.n);
                out.stderr.push_str(&format!("partial: budget exhausted; rows computed up to n = {done}\n"));
            }
            out.stdout = emit_table(&table, *format);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    graph: &'a str,
    kind: MatrixKind,
    value: f64,
    vector: &'a [f64],
    residual: f64,
    iterations: usize,
}

fn spectrum(text: &str, kind: Kind, format: TextFormat, out: &mut Outcome) -> Result<(), Usage> {
    let g = resolve_graph(text)?;
    let kind = match kind {
        Kind::Q => MatrixKind::SignlessLaplacian,
        Kind::A => MatrixKind::Adjacency,
    };
    let r = spectral_radius(&g, kind, spectral_turan::spectra::DEFAULT_TOL).map_err(|e| Usage(e.to_string()))?;
    let value = round12(r.value);
    let vector: Vec<f64> = r.vector.iter().map(|&x| round12(x)).collect();
    out.stdout = match format {
        TextFormat::Text => {
            let v: Vec<String> = vector.iter().map(|&x| fmt_num(x)).collect();
            format!("{}\n{}\n", fmt_num(value), v.join(" "))
        }
        TextFormat::Json => {
            let j = SpectrumJson { graph: text, kind, value, vector: &vector, residual: r.residual, iterations: r.iterations };
            serde_json::to_string(&j).expect("serialisable") + "\n"
        }
    };
    out.stderr.push_str(&format!("order {} method {:?} residual {:.3e}\n", g.order(), r.method, r.residual));
    Ok(())
}

fn verify(cli: &Cli, args: &VerifyArgs, out: &mut Outcome) -> Result<(), Usage> {
    let config = config(cli, args.mode);
    let pool = rayon_pool(&config);
    let per_graph = |check: fn(&Graph, f64) -> CheckReport, connected: bool| -> Result<Vec<CheckReport>, Usage> {
        if let Some(text) = &args.graph {
            return Ok(vec![check(&resolve_small_graph(text)?, CHECK_TOL)]);
        }
        let graphs = if connected { connected_graphs(args.n_max, &config)? } else { all_graphs(args.n_max, &config)? };
        Ok(pool.install(|| sweep(&graphs, |g| check(g, CHECK_TOL))))
    };
    let (id, reports, partial) = match args.check {
        CheckId::VertexDeletion => ("vertex_deletion", per_graph(check_vertex_deletion, true)?, false),
        CheckId::MinEntryBound => ("min_entry_bound", per_graph(check_min_entry_bound, true)?, false),
        CheckId::BoundChain => {
            let mut reports = per_graph(check_bound_chain, false)?;
            if args.graph.is_none() {
                for n in 8..=12 {
                    let graphs = random_graphs(n, args.random, args.seed);
                    reports.extend(pool.install(|| sweep(&graphs, |g| check_bound_chain(g, CHECK_TOL))));
                }
            }
            ("bound_chain", reports, false)
        }
        CheckId::MonotoneSequence => {
            let f = resolve_pattern(args.pattern.as_deref(), args.pattern_g6.as_deref())?;
            let SequenceCheck { summary, mut details, partial } = check_monotone_sequence(&f, args.n_max, &config)?;
            details.push(summary);
            ("monotone_sequence", details, partial)
        }
        CheckId::StarTheorem => {
            let SequenceCheck { summary, mut details, partial } =
                check_star_theorem(args.t, args.t..=args.n_max, &config)?;
            details.push(summary);
            ("star_theorem", details, partial)
        }
    };
    out.stdout = match args.format {
        TextFormat::Text => summary_table(&[summarize(id, &reports)]),
        TextFormat::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
    };
    out.code = verify_exit_code(&reports, partial);
    match out.code {
        EXIT_BUDGET => out.stderr.push_str("partial: budget exhausted before n-max\n"),
        EXIT_CHECK_FAILED => out.stderr.push_str(&format!("{id}: at least one check failed\n")),
        _ => {}
    }
    Ok(())
}

/// Budget exhaustion wins over failures; not-applicable reports never fail.
pub fn verify_exit_code(reports: &[CheckReport], partial: bool) -> i32 {
    if partial {
        EXIT_BUDGET
    } else if reports.iter().any(|r| r.verdict == Verdict::Failed) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn rayon_pool(config: &SearchConfig) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(config.workers).build().expect("thread pool")
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal that reads back as `round12(x)`, always with a '.'
/// decimal point or exponent.
pub fn fmt_num(x: f64) -> String {
    format!("{:?}", round12(x))
}

/// Rows as CSV, JSON or (for records) newline-separated graph6 witnesses.
pub fn emit_records(records: &[ExtremalRecord], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("serialisable");
            s.push('\n');
            s
        }
        Format::G6 => records.iter().flat_map(|r| r.witnesses.iter()).map(|w| format!("{w}\n")).collect(),
        Format::Csv => {
            let mut s = String::from("n,pattern,measure,mode,value,witnesses,graphs_examined,partial\n");
            for r in records {
                let mode = match r.mode {
                    SearchMode::AllGraphs => "all",
                    SearchMode::MaximalOnly => "maximal",
                };
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.n,
                    r.pattern.label(),
                    r.measure.short_name(),
                    mode,
                    fmt_num(r.value),
                    r.witnesses.join(";"),
                    r.graphs_examined,
                    r.partial
                ));
            }
            s
        }
    }
}

/// Convergence rows as CSV (header plus one line per row, then a `target`
/// line when targets are given) or as JSON.
pub fn emit_rows(rows: &[ConvergenceRow], targets: Option<&Targets>, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = ConvergenceRow::COLUMNS.join(",");
            s.push('\n');
            for r in rows {
                let mut cells = vec![r.n.to_string()];
                cells.extend(r.values()[1..].iter().map(|&x| fmt_num(x)));
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            if let Some(t) = targets {
                let q = fmt_num(t.ratio_q_n);
                let cells =
                    ["target", "", "", "", &fmt_num(t.ratio_edges), &fmt_num(t.ratio_lambda), &q, &q, ""];
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json | Format::G6 => {
            let mut s = serde_json::to_string_pretty(rows).expect("serialisable");
            s.push('\n');
            s
        }
    }
}

pub fn emit_table(table: &ConvergenceTable, format: Format) -> String {
    match format {
        Format::Csv => emit_rows(&table.rows, Some(&table.targets), Format::Csv),
        Format::Json | Format::G6 => {
            let mut rounded = table.clone();
            for r in &mut rounded.rows {
                for x in [
                    &mut r.ex_edges,
                    &mut r.ex_lambda,
                    &mut r.ex_q,
                    &mut r.ratio_edges,
                    &mut r.ratio_lambda,
                    &mut r.ratio_q_n,
                    &mut r.ratio_q_n1,
                    &mut r.mu_sq_times_n,
                ] {
                    *x = round12(*x);
                }
            }
            let mut s = serde_json::to_string_pretty(&rounded).expect("serialisable");
            s.push('\n');
            s
        }
    }
}
