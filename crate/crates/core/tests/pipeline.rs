use matchlab::analysis::{emit_report, read_report, DatasetReport};
use matchlab::candidates::{CandidateConfig, SelectorConfig, SelectorKind};
use matchlab::corpus::{Corpus, CorpusOptions, Document, LoadedRecords};
use matchlab::matcher::{EmbedderConfig, MatcherModel};
use matchlab::pipeline::{analyze_corpus, candidate_records, select_corpus, select_from_records};
use matchlab::synthetic::newslike_corpus;
use proptest::prelude::*;

fn docs(n: usize, seed: u64) -> Vec<Document> {
    let loaded = LoadedRecords {
        records: newslike_corpus(n, seed).into_iter().enumerate().collect(),
        errors: Vec::new(),
    };
    Corpus::from_records(loaded, &CorpusOptions::default()).documents
}

fn pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

#[test]
fn thread_count_does_not_change_results() {
    let d = docs(30, 1);
    let one = pool(1).install(|| analyze_corpus(&d, 3).unwrap());
    let many = pool(4).install(|| analyze_corpus(&d, 3).unwrap());
    assert_eq!(one, many);
    assert!(one.iter().zip(&d).all(|(r, doc)| r.doc_id == doc.id));
}

#[test]
fn report_round_trips_through_disk() {
    let d = docs(25, 2);
    let report = DatasetReport::build(analyze_corpus(&d, 2).unwrap(), None, None, 10).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_report(&report, dir.path()).unwrap();
    assert_eq!(read_report(dir.path()).unwrap(), report);
}

#[test]
fn exported_candidates_select_like_generated_ones() {
    let d = docs(20, 3);
    let selector = SelectorConfig {
        kind: SelectorKind::Centroid,
    };
    let config = CandidateConfig::new(4, vec![1, 2]).unwrap();
    let model = MatcherModel::new(
        EmbedderConfig {
            feature_dim: 128,
            embed_dim: 8,
            ..Default::default()
        },
        4,
    )
    .unwrap();
    let records = candidate_records(&d, &selector, &config, None).unwrap();
    assert_eq!(
        select_from_records(&d, &records, &model).unwrap(),
        select_corpus(&d, &selector, &config, &model).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gap_records_are_well_formed(seed in 0u64..1000, n_ext in 1usize..5) {
        for r in analyze_corpus(&docs(4, seed), n_ext).unwrap() {
            prop_assert!(r.z >= 1 && r.z <= r.num_candidates);
            prop_assert!(r.z_fraction > 0.0 && r.z_fraction <= 1.0);
            prop_assert!(r.alpha_sum >= 0.0 && r.alpha_sum <= 1.0);
            prop_assert!(r.delta_alt >= -1e-15);
            prop_assert_eq!(r.z > 1 && !r.z_tied, r.is_pearl_best && !r.z_tied);
        }
    }
}
