//! Corpus ingestion: JSONL records, tokenization, empty-sample filtering and
//! the document token budget.
//!
//! Each input line is a JSON object:
//!
//! ```text
//! {"id": "optional", "text": ["sentence", ...], "summary": ["sentence", ...], "sent_scores": [0.1, ...]}
//! ```
//!
//! `text` and `summary` arrive pre-split into sentences. `sent_scores` is an
//! optional per-sentence salience vector produced by an external content
//! selector.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default document budget, in word tokens.
pub const DEFAULT_MAX_TOKENS: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    #[serde(default)]
    pub id: Option<String>,
    pub text: Vec<String>,
    pub summary: Vec<String>,
    #[serde(default)]
    pub sent_scores: Option<Vec<f64>>,
}

const STOPWORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "by", "for", "from", "has", "he", "in", "is", "it", "its", "of", "on",
    "or", "that", "the", "to", "was", "were", "will", "with",
];

/// Lowercase, split on runs of non-alphanumeric characters, optionally stem
/// and drop stopwords.
pub struct Tokenizer {
    stemmer: Option<rust_stemmers::Stemmer>,
    remove_stopwords: bool,
}

impl Tokenizer {
    pub fn new(stem: bool, remove_stopwords: bool) -> Self {
        Self {
            stemmer: stem.then(|| rust_stemmers::Stemmer::create(rust_stemmers::Algorithm::English)),
            remove_stopwords,
        }
    }

    pub fn stems(&self) -> bool {
        self.stemmer.is_some()
    }

    pub fn tokenize(&self, raw: &str) -> Vec<String> {
        raw.split(|c: char| !c.is_alphanumeric())
            .filter(|piece| !piece.is_empty())
            .map(|piece| piece.to_lowercase())
            .filter(|tok| !(self.remove_stopwords && STOPWORDS.contains(&tok.as_str())))
            .map(|tok| match &self.stemmer {
                Some(stemmer) => stemmer.stem(&tok).into_owned(),
                None => tok,
            })
            .collect()
    }
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::new(false, false)
    }
}

impl Clone for Tokenizer {
    fn clone(&self) -> Self {
        Self::new(self.stems(), self.remove_stopwords)
    }
}

impl fmt::Debug for Tokenizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tokenizer")
            .field("stem", &self.stems())
            .field("remove_stopwords", &self.remove_stopwords)
            .finish()
    }
}

/// Default tokenization: lowercase, no stemming, no stopword removal.
pub fn tokenize(raw: &str) -> Vec<String> {
    Tokenizer::default().tokenize(raw)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub raw: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub gold: Vec<Sentence>,
    pub token_budget_applied: bool,
    /// External salience scores aligned with `sentences`, when the record carried them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sent_scores: Option<Vec<f64>>,
}

impl Document {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn num_tokens(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }

    /// Gold summary as one flat token sequence.
    pub fn gold_tokens(&self) -> Vec<String> {
        self.gold.iter().flat_map(|s| s.tokens.iter().cloned()).collect()
    }

    pub fn gold_num_tokens(&self) -> usize {
        self.gold.iter().map(|s| s.tokens.len()).sum()
    }

    pub fn tokens(&self) -> Vec<String> {
        self.sentences.iter().flat_map(|s| s.tokens.iter().cloned()).collect()
    }

    /// Build a document from already-split sentences with the default tokenizer
    /// and no budget.
    pub fn from_texts(id: impl Into<String>, text: &[&str], summary: &[&str]) -> Self {
        let tok = Tokenizer::default();
        let to_sentences = |xs: &[&str]| {
            xs.iter()
                .map(|raw| Sentence {
                    tokens: tok.tokenize(raw),
                    raw: raw.to_string(),
                })
                .filter(|s| !s.tokens.is_empty())
                .collect::<Vec<_>>()
        };
        Document {
            id: id.into(),
            sentences: to_sentences(text),
            gold: to_sentences(summary),
            token_budget_applied: false,
            sent_scores: None,
        }
    }
}

/// Running totals. Merging is associative so per-worker stats can be combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub num_docs: usize,
    pub dropped_empty: usize,
    pub doc_tokens_total: usize,
    pub sum_tokens_total: usize,
}

impl CorpusStats {
    pub fn record(&mut self, outcome: &Filtered) {
        match outcome {
            Filtered::Kept(doc) => {
                self.num_docs += 1;
                self.doc_tokens_total += doc.num_tokens();
                self.sum_tokens_total += doc.gold_num_tokens();
            }
            Filtered::Dropped => self.dropped_empty += 1,
        }
    }

    pub fn merge(self, other: CorpusStats) -> CorpusStats {
        CorpusStats {
            num_docs: self.num_docs + other.num_docs,
            dropped_empty: self.dropped_empty + other.dropped_empty,
            doc_tokens_total: self.doc_tokens_total + other.doc_tokens_total,
            sum_tokens_total: self.sum_tokens_total + other.sum_tokens_total,
        }
    }

    pub fn raw_records(&self) -> usize {
        self.num_docs + self.dropped_empty
    }

    pub fn mean_doc_tokens(&self) -> f64 {
        ratio(self.doc_tokens_total, self.num_docs)
    }

    pub fn mean_sum_tokens(&self) -> f64 {
        ratio(self.sum_tokens_total, self.num_docs)
    }
}

fn ratio(total: usize, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    }
}

/// Line-by-line JSONL reader. Blank lines are skipped; every other line yields
/// either a record or an error carrying its 1-based line number.
pub struct JsonlReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> JsonlReader<R> {
    pub fn new(reader: R) -> Self {
        Self {
            lines: reader.lines(),
            line_no: 0,
        }
    }
}

impl<R: BufRead> Iterator for JsonlReader<R> {
    type Item = (usize, Result<RawRecord>);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let line_no = self.line_no;
            let line = match line {
                Ok(line) => line,
                Err(e) => {
                    return Some((
                        line_no,
                        Err(Error::MalformedLine {
                            line: line_no,
                            message: e.to_string(),
                        }),
                    ))
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<RawRecord>(&line).map_err(|e| Error::MalformedLine {
                line: line_no,
                message: e.to_string(),
            });
            return Some((line_no, parsed));
        }
    }
}

#[derive(Debug, Default)]
pub struct LoadedRecords {
    /// `(line number, record)` in file order.
    pub records: Vec<(usize, RawRecord)>,
    /// Per-line errors skipped in lenient mode.
    pub errors: Vec<Error>,
}

/// Read up to `limit` records. Under `strict` the first malformed line is fatal;
/// otherwise malformed lines are skipped and collected.
pub fn load_jsonl(path: &Path, limit: Option<usize>, strict: bool) -> Result<LoadedRecords> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_jsonl(BufReader::new(file), limit, strict)
}

pub fn read_jsonl<R: BufRead>(reader: R, limit: Option<usize>, strict: bool) -> Result<LoadedRecords> {
    let mut out = LoadedRecords::default();
    for (line_no, item) in JsonlReader::new(reader) {
        if limit.is_some_and(|l| out.records.len() >= l) {
            break;
        }
        match item {
            Ok(rec) => out.records.push((line_no, rec)),
            Err(e) if strict => return Err(e),
            Err(e) => {
                log::warn!("skipping malformed record: {e}");
                out.errors.push(e);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Filtered {
    Kept(Document),
    Dropped,
}

/// Drop records whose document or summary tokenizes to nothing, then apply the
/// token budget: whole sentences are kept while they fit and the sentence that
/// crosses the budget is cut at the last token that fits.
pub fn filter_and_truncate(
    record: &RawRecord,
    fallback_id: &str,
    tokenizer: &Tokenizer,
    max_tokens: Option<usize>,
) -> Filtered {
    let scores_aligned = record
        .sent_scores
        .as_ref()
        .is_some_and(|s| s.len() == record.text.len());

    let mut sentences = Vec::new();
    let mut scores = Vec::new();
    for (i, raw) in record.text.iter().enumerate() {
        let tokens = tokenizer.tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        if scores_aligned {
            scores.push(record.sent_scores.as_ref().unwrap()[i]);
        }
        sentences.push(Sentence {
            tokens,
            raw: raw.clone(),
        });
    }
    let gold: Vec<Sentence> = record
        .summary
        .iter()
        .map(|raw| Sentence {
            tokens: tokenizer.tokenize(raw),
            raw: raw.clone(),
        })
        .filter(|s| !s.tokens.is_empty())
        .collect();

    if sentences.is_empty() || gold.is_empty() {
        return Filtered::Dropped;
    }

    if let Some(budget) = max_tokens {
        let budget = budget.max(1);
        let mut used = 0;
        let mut keep = 0;
        for sentence in sentences.iter_mut() {
            if used >= budget {
                break;
            }
            let room = budget - used;
            if sentence.tokens.len() > room {
                sentence.tokens.truncate(room);
            }
            used += sentence.tokens.len();
            keep += 1;
        }
        sentences.truncate(keep);
        if scores_aligned {
            scores.truncate(keep);
        }
    }

    let sent_scores = if scores_aligned {
        Some(scores)
    } else {
        // Misaligned scores pass through untouched so the selector reports the mismatch.
        record.sent_scores.clone()
    };

    Filtered::Kept(Document {
        id: record.id.clone().unwrap_or_else(|| fallback_id.to_string()),
        sentences,
        gold,
        token_budget_applied: max_tokens.is_some(),
        sent_scores,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusOptions {
    pub limit: Option<usize>,
    pub strict: bool,
    pub stem: bool,
    pub remove_stopwords: bool,
    /// `None` disables the budget.
    pub max_tokens: Option<usize>,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self {
            limit: None,
            strict: false,
            stem: false,
            remove_stopwords: false,
            max_tokens: Some(DEFAULT_MAX_TOKENS),
        }
    }
}

impl CorpusOptions {
    pub fn tokenizer(&self) -> Tokenizer {
        Tokenizer::new(self.stem, self.remove_stopwords)
    }
}

#[derive(Debug, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub stats: CorpusStats,
    pub errors: Vec<Error>,
}

impl Corpus {
    pub fn from_records(loaded: LoadedRecords, opts: &CorpusOptions) -> Self {
        let tokenizer = opts.tokenizer();
        let mut stats = CorpusStats::default();
        let mut documents = Vec::new();
        for (line_no, rec) in &loaded.records {
            let outcome = filter_and_truncate(rec, &format!("line-{line_no}"), &tokenizer, opts.max_tokens);
            stats.record(&outcome);
            if let Filtered::Kept(doc) = outcome {
                documents.push(doc);
            }
        }
        Corpus {
            documents,
            stats,
            errors: loaded.errors,
        }
    }

    pub fn load(path: &Path, opts: &CorpusOptions) -> Result<Self> {
        let loaded = load_jsonl(path, opts.limit, opts.strict)?;
        Ok(Self::from_records(loaded, opts))
    }
}
