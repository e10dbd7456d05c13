mod common;

use std::collections::BTreeSet;

use metalogic::codec::{write_json_corpus, write_linearized_records, write_source, parse_source};
use metalogic::dataset::{compute_stats, split, split_indices, split_sizes, validate_corpus, CorpusTotals};
use metalogic::{CanonicalDegree, LogicMetagraph, MetaEdge};
use proptest::prelude::*;

use common::Shape;

fn corpus(seed: u64, n: usize) -> Vec<LogicMetagraph> {
    let mut rng = common::rng(seed);
    (0..n).map(|i| common::random_graph(&mut rng, &format!("p{i}"), &Shape::default())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn stats_ignore_order(seed in any::<u64>(), n in 1usize..12) {
        let mut c = corpus(seed, n);
        let a = compute_stats(&c).unwrap();
        c.reverse();
        prop_assert_eq!(compute_stats(&c).unwrap(), a);
    }

    #[test]
    fn totals_add_over_partitions(seed in any::<u64>(), n in 2usize..12, at in 1usize..11) {
        let c = corpus(seed, n);
        let at = at.min(n - 1);
        let mut left = compute_stats(&c[..at]).unwrap().totals;
        left.merge(&compute_stats(&c[at..]).unwrap().totals);
        prop_assert_eq!(left, compute_stats(&c).unwrap().totals);
    }

    #[test]
    fn totals_are_sums_of_graphs(seed in any::<u64>(), n in 1usize..12) {
        let c = corpus(seed, n);
        let mut sum = CorpusTotals::default();
        for g in &c {
            sum.merge(&CorpusTotals::of_graph(g));
        }
        prop_assert_eq!(sum, compute_stats(&c).unwrap().totals);
    }

    #[test]
    fn split_is_a_partition(n in 1usize..3000, seed in any::<u64>()) {
        let s = split_indices(n, seed).unwrap();
        let (tr, dv, te) = split_sizes(n);
        prop_assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (tr, dv, te));
        let all: BTreeSet<usize> = s.train.iter().chain(&s.dev).chain(&s.test).copied().collect();
        prop_assert_eq!(all, (0..n).collect::<BTreeSet<_>>());
    }

    #[test]
    fn split_is_deterministic(n in 1usize..500, seed in any::<u64>()) {
        prop_assert_eq!(split_indices(n, seed).unwrap(), split_indices(n, seed).unwrap());
    }
}

#[test]
fn empty_corpus_cannot_be_split() {
    assert_eq!(split::<u8>(&[], 0).unwrap_err().code(), "EMPTY_CORPUS");
}

#[test]
fn invalid_graph_blocks_stats() {
    let mut c = corpus(7, 3);
    let ids: Vec<String> = c[0].passage.sentences.iter().map(|s| s.id.clone()).collect();
    c[0].edges.push(MetaEdge::support(ids[0].clone(), ids[0].clone()));
    assert_eq!(compute_stats(&c).unwrap_err().code(), "INVALID_GRAPH");
}

#[test]
fn validation_sweep_over_mixed_formats() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("nested");
    std::fs::create_dir(&nested).unwrap();

    let good = corpus(11, 4);
    std::fs::write(dir.path().join("good.json"), write_json_corpus(&good)).unwrap();

    let mut rng = common::rng(12);
    let raw = common::random_passage(&mut rng, "lin", &Shape { max_sentences: 3, ..Shape::default() });
    let passage = parse_source("lin", &write_source(&raw)).unwrap();
    let lin = common::random_graph_over(&mut rng, passage, &Shape::default());
    std::fs::write(nested.join("more.lin"), write_linearized_records(&[lin]).unwrap()).unwrap();

    let mut cyclic = LogicMetagraph::empty(parse_source("cyc", "sent1: v1: it rains sent2: v1: it pours").unwrap());
    cyclic.edges = vec![MetaEdge::support("sent1", "sent2"), MetaEdge::support("sent2", "sent1")];
    for id in ["sent1", "sent2"] {
        cyclic.degrees.insert(id.into(), CanonicalDegree::Contingent);
    }
    std::fs::write(nested.join("bad.json"), write_json_corpus(&[cyclic])).unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();

    let report = validate_corpus(&[dir.path().to_path_buf()]);
    assert_eq!(report.files.len(), 3, "{report:?}");
    assert!(!report.ok);
    assert_eq!(report.histogram.into_iter().collect::<Vec<_>>(), vec![("CYCLE", 1)]);
    let graphs: usize = report.files.iter().map(|f| f.graphs).sum();
    assert_eq!(graphs, 6);

    let missing = validate_corpus(&[dir.path().join("absent.json")]);
    assert_eq!(missing.files[0].error.as_ref().unwrap().code, "IO");
}
