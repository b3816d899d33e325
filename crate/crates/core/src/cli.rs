//! `matchlab` command line.
//!
//! Every subcommand that writes files also writes `config.lock.json` beside
//! them: the fully resolved arguments, so a run can be repeated exactly.
//! Machine-readable results go to files or stdout; human tables go to stderr.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::analysis::{emit_report, DatasetReport, DEFAULT_BUCKETS};
use crate::candidates::{CandidateConfig, DatasetPreset, SelectorConfig, SelectorKind};
use crate::corpus::{Corpus, CorpusOptions, Tokenizer, DEFAULT_MAX_TOKENS};
use crate::error::{Error, Result};
use crate::matcher::{
    epoch_means, load_checkpoint, save_checkpoint, train, EmbedderConfig, LossConfig, MatcherModel, TrainConfig,
};
use crate::pipeline::{
    analyze_corpus, candidate_records, compare_corpus, evaluate, format_rouge_table, select_corpus,
    select_from_records, training_examples, BaselineOptions, CandidateRecord, CompareOptions, SelectionRecord,
};
use crate::rouge::mean_rouge;

pub const CONFIG_LOCK: &str = "config.lock.json";

#[derive(Parser, Debug)]
#[command(
    name = "matchlab",
    version,
    about = "Extractive summarization as semantic text matching"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// ROUGE-1/2/L between two text files.
    Rouge(RougeArgs),
    /// Sentence- vs summary-level gap diagnostics for a corpus.
    Analyze(AnalyzeArgs),
    /// Pruned candidate summaries per document, as JSONL.
    Candidates(CandidatesArgs),
    /// Train the matcher.
    Train(TrainArgs),
    /// Pick one candidate per document with a trained matcher.
    Select(SelectArgs),
    /// Matcher versus a sentence-level extractor.
    Compare(CompareArgs),
    /// ROUGE of selections against gold, with optional baselines.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CorpusArgs {
    /// JSONL corpus with `text` and `summary` sentence lists.
    #[arg(long)]
    pub input: PathBuf,
    /// Read at most this many records.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Fail on the first malformed line instead of skipping it.
    #[arg(long)]
    pub strict: bool,
    /// Porter-style stemming before matching.
    #[arg(long)]
    pub stem: bool,
    /// Drop stopwords before matching.
    #[arg(long)]
    pub remove_stopwords: bool,
    /// Document token budget; 0 disables truncation.
    #[arg(long, default_value_t = DEFAULT_MAX_TOKENS)]
    pub max_tokens: usize,
}

impl CorpusArgs {
    fn options(&self) -> CorpusOptions {
        CorpusOptions {
            limit: self.limit,
            strict: self.strict,
            stem: self.stem,
            remove_stopwords: self.remove_stopwords,
            max_tokens: (self.max_tokens > 0).then_some(self.max_tokens),
        }
    }

    fn load(&self) -> Result<Corpus> {
        load_corpus(&self.input, &self.options())
    }
}

fn load_corpus(path: &Path, opts: &CorpusOptions) -> Result<Corpus> {
    let corpus = Corpus::load(path, opts)?;
    let s = &corpus.stats;
    log::info!(
        "{}: {} documents ({} dropped, {} malformed lines), {:.1} doc tokens, {:.1} summary tokens",
        path.display(),
        s.num_docs,
        s.dropped_empty,
        corpus.errors.len(),
        s.mean_doc_tokens(),
        s.mean_sum_tokens()
    );
    if corpus.documents.is_empty() {
        return Err(Error::Empty(format!("{}: no usable documents", path.display())));
    }
    Ok(corpus)
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CandidateArgs {
    /// Dataset preset supplying --ext and --sel.
    #[arg(long, value_enum)]
    pub preset: Option<DatasetPreset>,
    /// Sentences kept after pruning.
    #[arg(long, default_value_t = 5)]
    pub ext: usize,
    /// Candidate sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    pub sel: Vec<usize>,
    /// Sentence scorer used for pruning.
    #[arg(long, value_enum, default_value_t = SelectorKind::Oracle)]
    pub selector: SelectorKind,
}

impl CandidateArgs {
    fn config(&self) -> Result<CandidateConfig> {
        match self.preset {
            Some(p) => Ok(p.candidate_config()),
            None => CandidateConfig::new(self.ext, self.sel.clone()),
        }
    }

    fn selector(&self) -> SelectorConfig {
        SelectorConfig { kind: self.selector }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct RougeArgs {
    /// Candidate text file.
    pub candidate: PathBuf,
    /// Reference text file.
    pub reference: PathBuf,
    #[arg(long)]
    pub stem: bool,
    #[arg(long)]
    pub remove_stopwords: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Sentences per diagnostic candidate.
    #[arg(long, default_value_t = 3)]
    pub ext: usize,
    #[arg(long, default_value_t = DEFAULT_BUCKETS)]
    pub buckets: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct CandidatesArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    /// Also emit a top-k extraction per document.
    #[arg(long)]
    pub k: Option<usize>,
    /// Trigram blocking for the top-k extraction.
    #[arg(long)]
    pub blocking: bool,
    /// Output JSONL file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    /// Validation corpus for checkpoint selection.
    #[arg(long)]
    pub valid: Option<PathBuf>,
    /// Validation interval in steps.
    #[arg(long, default_value_t = 100)]
    pub eval_every: usize,
    /// Output checkpoint.
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Continue from an existing checkpoint.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub gamma1: f64,
    #[arg(long, default_value_t = 0.01)]
    pub gamma2: f64,
    #[arg(long, default_value_t = 10_000)]
    pub warmup: usize,
    #[arg(long, default_value_t = 2e-3)]
    pub lr_scale: f64,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 4096)]
    pub feature_dim: usize,
    #[arg(long, default_value_t = 128)]
    pub embed_dim: usize,
    #[arg(long, default_value_t = 0)]
    pub hash_seed: u64,
    /// Seed for initialization and shuffling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SelectArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Candidate JSONL from `candidates` instead of generating them.
    #[arg(long = "candidates")]
    pub candidate_file: Option<PathBuf>,
    /// Output JSONL file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub matcher_checkpoint: PathBuf,
    /// Sentence scorer shared by the extractor and candidate pruning.
    #[arg(long, value_enum, default_value_t = SelectorKind::Oracle)]
    pub extractor: SelectorKind,
    #[arg(long)]
    pub blocking: bool,
    /// Sentences taken by the extractor.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Sentences per diagnostic candidate.
    #[arg(long, default_value_t = 3)]
    pub ext: usize,
    /// Sentences kept when pruning for the matcher.
    #[arg(long, default_value_t = 5)]
    pub cand_ext: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    pub sel: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_BUCKETS)]
    pub buckets: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Selection JSONL from `select`.
    #[arg(long)]
    pub selections: PathBuf,
    /// Add LEAD, ORACLE and MATCH-ORACLE rows.
    #[arg(long)]
    pub baselines: bool,
    /// Sentences for LEAD and ORACLE.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    /// Output directory (default: JSON to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConfigLock<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a Command,
}

fn write_lock(command: &Command, dir: &Path) -> Result<()> {
    let path = dir.join(CONFIG_LOCK);
    let lock = ConfigLock {
        tool: "matchlab",
        version: env!("CARGO_PKG_VERSION"),
        command,
    };
    let mut text = serde_json::to_string_pretty(&lock)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn read_jsonl_as<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
            line: i + 1,
            message: format!("{}: {e}", path.display()),
        })?);
    }
    Ok(out)
}

/// JSONL to a file (whose directory also receives the config lock) or stdout.
fn write_jsonl<T: Serialize>(rows: &[T], out: Option<&Path>, command: &Command) -> Result<()> {
    let (mut sink, path): (Box<dyn Write>, PathBuf) = match out {
        Some(p) => {
            let dir = parent_dir(p);
            create_dir(&dir)?;
            write_lock(command, &dir)?;
            (
                Box::new(BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?)),
                p.to_path_buf(),
            )
        }
        None => (Box::new(BufWriter::new(io::stdout().lock())), PathBuf::from("<stdout>")),
    };
    for row in rows {
        serde_json::to_writer(&mut sink, row)?;
        sink.write_all(b"\n").map_err(|e| Error::io(&path, e))?;
    }
    sink.flush().map_err(|e| Error::io(&path, e))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn cmd_rouge(a: &RougeArgs) -> Result<()> {
    let tok = Tokenizer::new(a.stem, a.remove_stopwords);
    let cand = tok.tokenize(&read_text(&a.candidate)?);
    let reference = tok.tokenize(&read_text(&a.reference)?);
    let t = mean_rouge(&cand, &reference);
    println!("{}", serde_json::to_string_pretty(&t)?);
    eprintln!(
        "R-1 {:.2}  R-2 {:.2}  R-L {:.2}  mean {:.2}",
        100.0 * t.r1.f1,
        100.0 * t.r2.f1,
        100.0 * t.rl.f1,
        100.0 * t.mean_f1
    );
    Ok(())
}

fn cmd_analyze(a: &AnalyzeArgs, command: &Command) -> Result<()> {
    let corpus = a.corpus.load()?;
    let records = analyze_corpus(&corpus.documents, a.ext)?;
    let report = DatasetReport::build(records, None, None, a.buckets)?;
    emit_report(&report, &a.out)?;
    write_lock(command, &a.out)?;
    eprint!("{}", report.summary_text());
    Ok(())
}

fn cmd_candidates(a: &CandidatesArgs, command: &Command) -> Result<()> {
    let corpus = a.corpus.load()?;
    let config = a.candidates.config()?;
    let records = candidate_records(
        &corpus.documents,
        &a.candidates.selector(),
        &config,
        a.k.map(|k| (k, a.blocking)),
    )?;
    write_jsonl(&records, a.out.as_deref(), command)
}

fn cmd_train(a: &TrainArgs, command: &Command) -> Result<()> {
    let corpus = a.corpus.load()?;
    let config = a.candidates.config()?;
    let selector = a.candidates.selector();
    let embedder = match &a.resume {
        Some(p) => load_checkpoint(p)?.config,
        None => EmbedderConfig {
            feature_dim: a.feature_dim,
            embed_dim: a.embed_dim,
            hash_seed: a.hash_seed,
            ..Default::default()
        },
    };
    let model = match &a.resume {
        Some(p) => load_checkpoint(p)?,
        None => MatcherModel::new(embedder.clone(), a.seed)?,
    };
    let examples = training_examples(&corpus.documents, &selector, &config, &embedder)?;
    let valid = match &a.valid {
        Some(p) => {
            let docs = load_corpus(p, &a.corpus.options())?.documents;
            Some(training_examples(&docs, &selector, &config, &embedder)?)
        }
        None => None,
    };
    let lc = LossConfig {
        gamma1: a.gamma1,
        gamma2: a.gamma2,
    };
    let tc = TrainConfig {
        warmup: a.warmup,
        lr_scale: a.lr_scale,
        batch_size: a.batch,
        max_steps: a.steps,
        seed: a.seed,
        eval_every: valid.as_ref().map(|_| a.eval_every),
    };
    let outcome = train(&examples, valid.as_deref(), model, &lc, &tc)?;

    let dir = parent_dir(&a.checkpoint);
    create_dir(&dir)?;
    let chosen = match &outcome.best {
        Some(b) => {
            eprintln!("best validation loss {:.6} at step {}", b.valid_loss, b.step);
            &b.model
        }
        None => &outcome.model,
    };
    save_checkpoint(chosen, &a.checkpoint)?;

    let history_path = a.checkpoint.with_extension("history.csv");
    let mut w = csv::Writer::from_path(&history_path)?;
    for rec in &outcome.history {
        w.serialize(rec)?;
    }
    w.flush().map_err(|e| Error::io(&history_path, e))?;
    write_lock(command, &dir)?;

    for (epoch, loss) in epoch_means(&outcome.history).iter().enumerate() {
        eprintln!("epoch {epoch:>3}  mean loss {loss:.6}");
    }
    Ok(())
}

fn cmd_select(a: &SelectArgs, command: &Command) -> Result<()> {
    let corpus = a.corpus.load()?;
    let model = load_checkpoint(&a.checkpoint)?;
    let selections = match &a.candidate_file {
        Some(p) => {
            let records: Vec<CandidateRecord> = read_jsonl_as(p)?;
            select_from_records(&corpus.documents, &records, &model)?
        }
        None => select_corpus(
            &corpus.documents,
            &a.candidates.selector(),
            &a.candidates.config()?,
            &model,
        )?,
    };
    write_jsonl(&selections, a.out.as_deref(), command)
}

fn cmd_compare(a: &CompareArgs, command: &Command) -> Result<()> {
    let corpus = a.corpus.load()?;
    let model = load_checkpoint(&a.matcher_checkpoint)?;
    let opts = CompareOptions {
        analysis_ext: a.ext,
        selector: SelectorConfig { kind: a.extractor },
        candidates: CandidateConfig::new(a.cand_ext, a.sel.clone())?,
        k: a.k,
        blocking: a.blocking,
        buckets: a.buckets,
    };
    let report = compare_corpus(&corpus.documents, &model, &opts)?;
    emit_report(&report, &a.out)?;
    write_lock(command, &a.out)?;
    eprint!("{}", report.summary_text());
    Ok(())
}

fn cmd_report(a: &ReportArgs, command: &Command) -> Result<()> {
    let corpus = a.corpus.load()?;
    let selections: Vec<SelectionRecord> = read_jsonl_as(&a.selections)?;
    let baselines = if a.baselines {
        Some(BaselineOptions {
            k: a.k,
            selector: a.candidates.selector(),
            candidates: a.candidates.config()?,
        })
    } else {
        None
    };
    let rows = evaluate(&selections, &corpus.documents, baselines.as_ref())?;
    match &a.out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join("rouge.csv");
            let mut w = csv::Writer::from_path(&path)?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            write_lock(command, dir)?;
        }
        None => println!("{}", serde_json::to_string_pretty(&rows)?),
    }
    eprint!("{}", format_rouge_table(&rows));
    Ok(())
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Rouge(a) => cmd_rouge(a),
        Command::Analyze(a) => cmd_analyze(a, command),
        Command::Candidates(a) => cmd_candidates(a, command),
        Command::Train(a) => cmd_train(a, command),
        Command::Select(a) => cmd_select(a, command),
        Command::Compare(a) => cmd_compare(a, command),
        Command::Report(a) => cmd_report(a, command),
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("MATCHLAB_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| dispatch(&cli.command)),
        Err(e) => Err(Error::InvalidConfig(format!("thread pool: {e}"))),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
