//! Corpus diagnostics: where the best-summary ranks under sentence-level
//! scoring, how large the sentence-level vs summary-level gap is, and how much
//! of that gap a matcher recovers over a sentence-level extractor.
//!
//! All ROUGE-derived values are fractions in [0, 1]; multiply by 100 for
//! conventional ROUGE points.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::candidates::analysis_candidates;
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::rouge::RougeTriple;
use crate::scoring::{best_summary, g_sum, z_rank, CandidateSummary, DocumentScorer, ScoredCandidate};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BUCKETS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub doc_id: String,
    /// Best sentence-level score over the document's candidates.
    pub alpha_sen: f64,
    /// Best summary-level score over the same candidates.
    pub alpha_sum: f64,
    /// `alpha_sum - alpha_sen`.
    pub delta: f64,
    /// Not part of the gap definition: `alpha_sum` minus the summary-level
    /// score of the g_sen-argmax candidate, i.e. what a perfect sentence-level
    /// ranker leaves on the table.
    pub delta_alt: f64,
    pub delta_star: Option<f64>,
    pub z: usize,
    pub num_candidates: usize,
    pub z_fraction: f64,
    pub is_pearl_best: bool,
    /// The best-summary shares its g_sen with another candidate; z then
    /// depends on candidate list order.
    pub z_tied: bool,
}

pub fn inherent_gap(doc_id: &str, scored: &[ScoredCandidate]) -> Result<GapRecord> {
    let best = best_summary(scored)?;
    let diag = z_rank(scored, best);
    let alpha_sen = scored.iter().map(|c| c.g_sen).fold(f64::NEG_INFINITY, f64::max);
    let alpha_sum = scored[best].g_sum;
    let sen_argmax = scored
        .iter()
        .enumerate()
        .fold(0, |bi, (i, c)| if c.g_sen > scored[bi].g_sen { i } else { bi });
    Ok(GapRecord {
        doc_id: doc_id.to_string(),
        alpha_sen,
        alpha_sum,
        delta: alpha_sum - alpha_sen,
        delta_alt: alpha_sum - scored[sen_argmax].g_sum,
        delta_star: None,
        z: diag.z,
        num_candidates: diag.num_candidates,
        z_fraction: diag.z_fraction,
        is_pearl_best: scored[best].is_pearl,
        z_tied: diag.tied,
    })
}

/// Score the document's diagnostic candidates and compute its gap record.
pub fn diagnose_document(doc: &Document, n_ext: usize) -> Result<(GapRecord, Vec<ScoredCandidate>)> {
    let scorer = DocumentScorer::new(doc);
    let scored = scorer.score_all(analysis_candidates(doc, n_ext)?)?;
    Ok((inherent_gap(&doc.id, &scored)?, scored))
}

/// `g_sum(matcher pick) - g_sum(extractor pick)`.
pub fn realized_gain(doc: &Document, by_matcher: &CandidateSummary, by_extractor: &CandidateSummary) -> Result<f64> {
    let gold = doc.gold_tokens();
    Ok(g_sum(by_matcher, &gold)? - g_sum(by_extractor, &gold)?)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn mean_delta(records: &[GapRecord]) -> Option<f64> {
    mean(records.iter().map(|r| r.delta))
}

/// Mean realized gain; `None` unless every record carries one.
pub fn mean_delta_star(records: &[GapRecord]) -> Option<f64> {
    if records.iter().any(|r| r.delta_star.is_none()) {
        return None;
    }
    mean(records.iter().filter_map(|r| r.delta_star))
}

/// Fraction of the inherent gap recovered. `None` when undefined (zero mean
/// gap, or realized gains missing).
pub fn psi(records: &[GapRecord]) -> Option<f64> {
    let gap = mean_delta(records)?;
    let gained = mean_delta_star(records)?;
    (gap != 0.0).then(|| gained / gap)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZHistogram {
    /// `buckets + 1` edges over (0, 1]; bucket `i` is `(edges[i], edges[i+1]]`.
    pub edges: Vec<f64>,
    pub proportions: Vec<f64>,
    /// Share of documents whose best-summary ranks first.
    pub z1_fraction: f64,
}

pub fn bucket_of(z_fraction: f64, buckets: usize) -> usize {
    let b = (z_fraction * buckets as f64).ceil() as usize;
    b.clamp(1, buckets) - 1
}

pub fn z_distribution(diagnoses: &[(usize, f64)], buckets: usize) -> Result<ZHistogram> {
    if diagnoses.is_empty() {
        return Err(Error::Empty("z distribution of zero documents".into()));
    }
    if buckets == 0 {
        return Err(Error::InvalidConfig("at least one bucket required".into()));
    }
    let n = diagnoses.len() as f64;
    let mut counts = vec![0usize; buckets];
    for &(_, frac) in diagnoses {
        counts[bucket_of(frac, buckets)] += 1;
    }
    Ok(ZHistogram {
        edges: (0..=buckets).map(|i| i as f64 / buckets as f64).collect(),
        proportions: counts.iter().map(|&c| c as f64 / n).collect(),
        z1_fraction: diagnoses.iter().filter(|d| d.0 == 1).count() as f64 / n,
    })
}

/// Matcher and extractor ROUGE on one test document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparedDoc {
    pub doc_id: String,
    pub z: usize,
    pub matcher: RougeTriple,
    pub extractor: RougeTriple,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuintileRow {
    /// 1-based.
    pub part: usize,
    pub size: usize,
    pub z_min: usize,
    pub z_max: usize,
    pub gsum_gain: f64,
    pub r1_gain: f64,
    pub r2_gain: f64,
    pub rl_gain: f64,
}

/// Sizes of `parts` contiguous groups over `n` items, differing by at most 1,
/// larger groups first.
pub fn partition_sizes(n: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    (0..parts).map(|i| n / parts + usize::from(i < n % parts)).collect()
}

/// Sort by z (ties by document id) and split into five near-equal parts.
/// Returns the rows and whether fewer than five documents forced one part per
/// document.
pub fn z_split_compare(docs: &[ComparedDoc]) -> Result<(Vec<QuintileRow>, bool)> {
    if docs.is_empty() {
        return Err(Error::Empty("z split over zero documents".into()));
    }
    let mut sorted: Vec<&ComparedDoc> = docs.iter().collect();
    sorted.sort_by(|a, b| a.z.cmp(&b.z).then_with(|| a.doc_id.cmp(&b.doc_id)));
    let parts = docs.len().min(5);
    let mut rows = Vec::with_capacity(parts);
    let mut start = 0;
    for (p, size) in partition_sizes(docs.len(), parts).into_iter().enumerate() {
        let group = &sorted[start..start + size];
        start += size;
        let avg = |f: &dyn Fn(&ComparedDoc) -> f64| group.iter().map(|d| f(d)).sum::<f64>() / size as f64;
        rows.push(QuintileRow {
            part: p + 1,
            size,
            z_min: group.first().unwrap().z,
            z_max: group.last().unwrap().z,
            gsum_gain: avg(&|d| d.matcher.mean_f1 - d.extractor.mean_f1),
            r1_gain: avg(&|d| d.matcher.r1.f1 - d.extractor.r1.f1),
            r2_gain: avg(&|d| d.matcher.r2.f1 - d.extractor.r2.f1),
            rl_gain: avg(&|d| d.matcher.rl.f1 - d.extractor.rl.f1),
        });
    }
    Ok((rows, docs.len() < 5))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub schema_version: u32,
    /// Always "fraction": ROUGE-derived values lie in [0, 1].
    pub rouge_scale: String,
    pub num_docs: usize,
    /// Sentence-level extractor that produced the realized gains, if any.
    pub extractor: Option<String>,
    pub z_histogram: ZHistogram,
    pub mean_delta: f64,
    pub mean_delta_alt: f64,
    pub mean_delta_star: Option<f64>,
    pub psi: Option<f64>,
    pub z_ties: usize,
    pub quintile_rows: Vec<QuintileRow>,
    pub quintiles_degenerate: bool,
    pub records: Vec<GapRecord>,
}

impl DatasetReport {
    pub fn build(
        records: Vec<GapRecord>,
        compared: Option<&[ComparedDoc]>,
        extractor: Option<String>,
        buckets: usize,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Empty("report over zero documents".into()));
        }
        let diagnoses: Vec<(usize, f64)> = records.iter().map(|r| (r.z, r.z_fraction)).collect();
        let (quintile_rows, quintiles_degenerate) = match compared {
            Some(c) => z_split_compare(c)?,
            None => (Vec::new(), false),
        };
        Ok(Self {
            schema_version: REPORT_SCHEMA_VERSION,
            rouge_scale: "fraction".into(),
            num_docs: records.len(),
            extractor,
            z_histogram: z_distribution(&diagnoses, buckets)?,
            mean_delta: mean_delta(&records).unwrap(),
            mean_delta_alt: mean(records.iter().map(|r| r.delta_alt)).unwrap(),
            mean_delta_star: mean_delta_star(&records),
            psi: psi(&records),
            z_ties: records.iter().filter(|r| r.z_tied).count(),
            quintile_rows,
            quintiles_degenerate,
            records,
        })
    }

    /// Human-readable summary in ROUGE points.
    pub fn summary_text(&self) -> String {
        let mut out = format!(
            "documents        {}\nmean delta       {:.2}\nmean delta_alt   {:.2}\n",
            self.num_docs,
            100.0 * self.mean_delta,
            100.0 * self.mean_delta_alt
        );
        match self.mean_delta_star {
            Some(d) => out += &format!("mean delta*      {:.2}\n", 100.0 * d),
            None => out += "mean delta*      n/a\n",
        }
        match self.psi {
            Some(p) => out += &format!("psi              {p:.3}\n"),
            None => out += "psi              undefined\n",
        }
        out += &format!("z = 1            {:.1}%\n", 100.0 * self.z_histogram.z1_fraction);
        for row in &self.quintile_rows {
            out += &format!(
                "part {} (z {}..{}, n={})  gain {:+.2}  R1 {:+.2}  R2 {:+.2}  RL {:+.2}\n",
                row.part,
                row.z_min,
                row.z_max,
                row.size,
                100.0 * row.gsum_gain,
                100.0 * row.r1_gain,
                100.0 * row.r2_gain,
                100.0 * row.rl_gain
            );
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct HistRow {
    bucket: usize,
    lower: f64,
    upper: f64,
    proportion: f64,
}

/// Per-document row of `delta.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub doc: String,
    pub alpha_sen: f64,
    pub alpha_sum: f64,
    pub delta: f64,
    pub delta_alt: f64,
    pub delta_star: Option<f64>,
    pub z: usize,
    pub num_candidates: usize,
    pub z_fraction: f64,
}

pub const REPORT_FILES: [&str; 4] = ["report.json", "z_hist.csv", "delta.csv", "quintiles.csv"];

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidConfig(format!("{}: {other:?}", path.display())),
    })?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write `report.json` and the plot-ready CSVs into `dir`.
pub fn emit_report(report: &DatasetReport, dir: &Path) -> Result<()> {
    if report.records.is_empty() {
        return Err(Error::Empty("refusing to write an empty report".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let json = serde_json::to_string_pretty(report)?;
    let json_path = dir.join("report.json");
    fs::write(&json_path, json + "\n").map_err(|e| Error::io(&json_path, e))?;

    let h = &report.z_histogram;
    write_csv(
        &dir.join("z_hist.csv"),
        h.proportions.iter().enumerate().map(|(i, &p)| HistRow {
            bucket: i,
            lower: h.edges[i],
            upper: h.edges[i + 1],
            proportion: p,
        }),
    )?;
    write_csv(
        &dir.join("delta.csv"),
        report.records.iter().map(|r| DeltaRow {
            doc: r.doc_id.clone(),
            alpha_sen: r.alpha_sen,
            alpha_sum: r.alpha_sum,
            delta: r.delta,
            delta_alt: r.delta_alt,
            delta_star: r.delta_star,
            z: r.z,
            num_candidates: r.num_candidates,
            z_fraction: r.z_fraction,
        }),
    )?;
    write_csv(&dir.join("quintiles.csv"), report.quintile_rows.iter())?;
    Ok(())
}

pub fn read_report(dir: &Path) -> Result<DatasetReport> {
    let path = dir.join("report.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_delta_rows(dir: &Path) -> Result<Vec<DeltaRow>> {
    let path = dir.join("delta.csv");
    let mut r = csv::Reader::from_path(&path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(&path, io),
        other => Error::InvalidConfig(format!("{}: {other:?}", path.display())),
    })?;
    Ok(r.deserialize().collect::<std::result::Result<Vec<DeltaRow>, _>>()?)
}
