//! Command-line surface: `run`, `score`, `baseline` and `all`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
//! invalid input), 3 internal invariant violation.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::baseline::lemma_chains;
use crate::config::{resolve_config, Aggregate, ConfigFile};
use crate::corpus::{load_corpus, CorpusBundle};
use crate::output::{write_trace, ChainsFile};
use crate::report::{aggregate, ReportRow, RunReport, TopicPair};
use crate::scoring::conll::{write_conll, DocLayout};
use crate::scoring::{chain_set, gold_chain_set, ChainSet};
use crate::sieves::{run_pipeline, PipelineConfig, PipelineError, PipelineOutput, STAGES};
use crate::vectors::VectorStore;

#[derive(Debug, Parser)]
#[command(name = "xcoref", version, about = "Sieve-based cross-document coreference resolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the five sieves and write chains and the merge trace.
    Run(RunArgs),
    /// Score a chains file against the gold labels of a corpus.
    Score(ScoreArgs),
    /// Group mentions by head lemma and write the chains.
    Baseline(BaselineArgs),
    /// Run the baseline and the sieves, score both, print the table.
    All(AllArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Corpus file, or a directory of `.jsonl` files (one topic each).
    #[arg(long)]
    corpus: PathBuf,
    /// Word vectors, `token c1 ... cd` per line.
    #[arg(long)]
    vectors: PathBuf,
    /// JSON config; falls back to $XCOREF_CONFIG, then defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Chains output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace output; defaults to the `--out` path with a `.trace.jsonl`
    /// extension.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Topics processed concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// Corpus file or directory carrying gold labels.
    #[arg(long)]
    gold: PathBuf,
    /// Chains file written by `run` or `baseline`.
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    aggregate: Option<Aggregate>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for CoNLL-2012 renderings of both sides.
    #[arg(long)]
    conll_out: Option<PathBuf>,
    /// JSON report output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    aggregate: Option<Aggregate>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AllArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    vectors: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    aggregate: Option<Aggregate>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Invariant(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Invariant(m) => m,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::InvariantViolation { .. } => CliError::Invariant(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn data<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Score(a) => cmd_score(a),
        Command::Baseline(a) => cmd_baseline(a),
        Command::All(a) => cmd_all(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

/// A single corpus file, or every `.jsonl` file of a directory in name
/// order.
pub fn load_topics(path: &Path) -> Result<Vec<CorpusBundle>, String> {
    let files = if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| format!("{}: {e}", path.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };
    files
        .iter()
        .map(|f| load_corpus(f).map_err(|e| format!("{}: {e}", f.display())))
        .collect()
}

fn topics(path: &Path) -> Result<Vec<CorpusBundle>, CliError> {
    load_topics(path).map_err(CliError::Data)
}

fn config(explicit: Option<&Path>) -> Result<(ConfigFile, PipelineConfig), CliError> {
    let file = resolve_config(explicit).map_err(|e| CliError::Data(e.to_string()))?;
    let pipeline = file
        .pipeline_config()
        .map_err(|e| CliError::Data(e.to_string()))?;
    Ok((file, pipeline))
}

fn vectors(path: &Path, cfg: &ConfigFile) -> Result<VectorStore, CliError> {
    Ok(VectorStore::load(path, cfg.vector_limit)
        .map_err(data(path))?
        .with_oov_seed(cfg.oov_seed))
}

fn run_topics(
    bundles: &[CorpusBundle],
    store: &VectorStore,
    config: &PipelineConfig,
    jobs: usize,
) -> Result<Vec<PipelineOutput>, CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let run = || -> Result<Vec<PipelineOutput>, PipelineError> {
        bundles
            .par_iter()
            .map(|b| run_pipeline(b, store, config))
            .collect()
    };
    let outputs = if jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Data(e.to_string()))?
            .install(run)
    } else {
        bundles
            .iter()
            .map(|b| run_pipeline(b, store, config))
            .collect()
    };
    Ok(outputs?)
}

fn write_file(path: &Path, content: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(data(path))
}

fn emit_chains(out: Option<&Path>, file: &ChainsFile) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, file.to_json().as_bytes()),
        None => {
            print!("{}", file.to_json());
            Ok(())
        }
    }
}

fn trace_path(trace: Option<&Path>, out: Option<&Path>) -> Option<PathBuf> {
    trace
        .map(Path::to_path_buf)
        .or_else(|| out.map(|o| o.with_extension("trace.jsonl")))
}

/// Writes chains and trace for pipeline outputs.
fn emit_pipeline(
    bundles: &[CorpusBundle],
    outputs: &[PipelineOutput],
    out: Option<&Path>,
    trace: Option<&Path>,
) -> Result<Option<PathBuf>, CliError> {
    let trace = trace_path(trace, out);
    let mut file = ChainsFile {
        trace: trace.as_ref().map(|p| p.display().to_string()),
        chains: Vec::new(),
    };
    let mut trace_buf = Vec::new();
    for (b, o) in bundles.iter().zip(outputs) {
        file.push_topic(&b.topic_id, &o.chains, &b.index());
        write_trace(&mut trace_buf, &b.topic_id, &o.trace).map_err(|e| CliError::Data(e.to_string()))?;
    }
    if let Some(t) = &trace {
        write_file(t, &trace_buf)?;
    }
    emit_chains(out, &file)?;
    Ok(trace)
}

fn cmd_run(a: RunArgs) -> Result<(), CliError> {
    let (cfg_file, cfg) = config(a.config.as_deref())?;
    let bundles = topics(&a.corpus)?;
    let store = vectors(&a.vectors, &cfg_file)?;
    let outputs = run_topics(&bundles, &store, &cfg, a.jobs)?;
    emit_pipeline(&bundles, &outputs, a.out.as_deref(), a.trace.as_deref())?;
    let chains: usize = outputs.iter().map(|o| o.chains.len()).sum();
    let merges: usize = outputs.iter().map(|o| o.trace.len()).sum();
    let (exact, lower, oov) = outputs.iter().fold((0, 0, 0), |acc, o| {
        (acc.0 + o.lookups.exact, acc.1 + o.lookups.lowercase, acc.2 + o.lookups.oov)
    });
    eprintln!(
        "{} topics, {chains} chains, {merges} merges; word lookups: {exact} exact, {lower} lowercased, {oov} out of vocabulary",
        bundles.len()
    );
    Ok(())
}

fn system_pairs(bundles: &[CorpusBundle], systems: &[ChainSet]) -> Vec<TopicPair> {
    bundles
        .iter()
        .zip(systems)
        .map(|(b, s)| TopicPair {
            topic: b.topic_id.clone(),
            gold: gold_chain_set(b),
            system: s.clone(),
        })
        .collect()
}

fn score_rows(
    label: &str,
    sieve: &str,
    pairs: &[TopicPair],
    mode: Aggregate,
) -> Result<(ReportRow, Vec<(String, crate::scoring::Evaluation)>), CliError> {
    let (total, per_topic) = aggregate(pairs, mode).map_err(|e| CliError::Data(e.to_string()))?;
    Ok((
        ReportRow {
            method: label.to_string(),
            sieve: sieve.to_string(),
            evaluation: total,
        },
        per_topic,
    ))
}

fn write_report(path: Option<&Path>, report: &RunReport) -> Result<(), CliError> {
    if let Some(p) = path {
        let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Data(e.to_string()))?;
        write_file(p, json.as_bytes())?;
    }
    Ok(())
}

fn cmd_score(a: ScoreArgs) -> Result<(), CliError> {
    let (cfg_file, _) = config(a.config.as_deref())?;
    let mode = a.aggregate.unwrap_or(cfg_file.aggregate);
    let bundles = topics(&a.gold)?;
    let text = std::fs::read_to_string(&a.system).map_err(data(&a.system))?;
    let file: ChainsFile = serde_json::from_str(&text).map_err(data(&a.system))?;
    let mut by_topic = file.by_topic();

    let mut pairs = Vec::new();
    for b in &bundles {
        pairs.push(TopicPair {
            topic: b.topic_id.clone(),
            gold: gold_chain_set(b),
            system: by_topic.remove(&b.topic_id).unwrap_or_default(),
        });
    }
    if let Some(extra) = by_topic.keys().next() {
        return Err(CliError::Data(format!(
            "{}: topic {extra:?} has no gold corpus",
            a.system.display()
        )));
    }

    if let Some(dir) = &a.conll_out {
        std::fs::create_dir_all(dir).map_err(data(dir))?;
        for (b, p) in bundles.iter().zip(&pairs) {
            let layout = DocLayout::from_bundles([b]);
            write_file(
                &dir.join(format!("{}.gold.conll", b.topic_id)),
                write_conll(&layout, &p.gold).as_bytes(),
            )?;
            write_file(
                &dir.join(format!("{}.system.conll", b.topic_id)),
                write_conll(&layout, &p.system).as_bytes(),
            )?;
        }
    }

    let (row, per_topic) = score_rows("system", "-", &pairs, mode)?;
    let report = RunReport {
        aggregate: mode,
        rows: vec![row],
        per_topic,
        chain_count: pairs.iter().map(|p| p.system.len()).sum(),
        singleton_count: pairs.iter().map(|p| p.system.singleton_count()).sum(),
        config: cfg_file,
        trace: file.trace,
    };
    print!("{report}");
    write_report(a.report.as_deref(), &report)
}

fn cmd_baseline(a: BaselineArgs) -> Result<(), CliError> {
    let (cfg_file, _) = config(a.config.as_deref())?;
    let mode = a.aggregate.unwrap_or(cfg_file.aggregate);
    let bundles = topics(&a.corpus)?;
    let mut file = ChainsFile::default();
    let mut systems = Vec::new();
    for b in &bundles {
        let chains = lemma_chains(b);
        let index = b.index();
        file.push_topic(&b.topic_id, &chains, &index);
        systems.push(chain_set(&chains, &index).map_err(|e| CliError::Data(e.to_string()))?);
    }
    emit_chains(a.out.as_deref(), &file)?;
    let pairs = system_pairs(&bundles, &systems);
    let (row, per_topic) = score_rows("Lemma", "-", &pairs, mode)?;
    let report = RunReport {
        aggregate: mode,
        rows: vec![row],
        per_topic,
        chain_count: systems.iter().map(ChainSet::len).sum(),
        singleton_count: systems.iter().map(ChainSet::singleton_count).sum(),
        config: cfg_file,
        trace: None,
    };
    eprint!("{report}");
    Ok(())
}

fn cmd_all(a: AllArgs) -> Result<(), CliError> {
    let (cfg_file, cfg) = config(a.config.as_deref())?;
    let mode = a.aggregate.unwrap_or(cfg_file.aggregate);
    let bundles = topics(&a.corpus)?;
    let store = vectors(&a.vectors, &cfg_file)?;
    let outputs = run_topics(&bundles, &store, &cfg, a.jobs)?;
    let trace = if a.out.is_some() || a.trace.is_some() {
        let out = a.out.as_deref();
        emit_pipeline(&bundles, &outputs, out, a.trace.as_deref())?
    } else {
        None
    };

    let to_sets = |stage: &str| -> Result<Vec<ChainSet>, CliError> {
        bundles
            .iter()
            .zip(&outputs)
            .map(|(b, o)| {
                let chains = o.stage(stage).unwrap_or(&[]);
                chain_set(chains, &b.index()).map_err(|e| CliError::Data(e.to_string()))
            })
            .collect()
    };

    let lemma: Vec<ChainSet> = bundles
        .iter()
        .map(|b| chain_set(&lemma_chains(b), &b.index()).map_err(|e| CliError::Data(e.to_string())))
        .collect::<Result<_, _>>()?;
    let (lemma_row, _) = score_rows("Lemma", "-", &system_pairs(&bundles, &lemma), mode)?;
    let mut rows = vec![lemma_row];
    let mut per_topic = Vec::new();
    let mut finals = Vec::new();
    for stage in STAGES {
        let sets = to_sets(stage)?;
        let (row, topics) = score_rows("XCoref", stage, &system_pairs(&bundles, &sets), mode)?;
        rows.push(row);
        per_topic = topics;
        finals = sets;
    }
    let report = RunReport {
        aggregate: mode,
        rows,
        per_topic,
        chain_count: finals.iter().map(ChainSet::len).sum(),
        singleton_count: finals.iter().map(ChainSet::singleton_count).sum(),
        config: cfg_file,
        trace: trace.map(|t| t.display().to_string()),
    };
    print!("{report}");
    write_report(a.report.as_deref(), &report)
}
