mod common;

use metalogic::codec::{
    load_corpus, normalize_whitespace, parse_linearized, parse_source, read_json, read_json_corpus, serialize_linearized,
    write_json, write_json_corpus, write_linearized_records, write_source, DiagnosticCode, ParseMode,
};
use metalogic::model::validate_graph;
use metalogic::LogicMetagraph;
use proptest::prelude::*;

use common::Shape;

fn graph(seed: u64) -> LogicMetagraph {
    common::random_graph(&mut common::rng(seed), &format!("p{seed}"), &Shape::default())
}

/// A graph whose passage survives the source denotation, so spans run
/// label to label.
fn labelled_graph(seed: u64) -> LogicMetagraph {
    let mut rng = common::rng(seed);
    let raw = common::random_passage(&mut rng, &format!("p{seed}"), &Shape::default());
    let passage = parse_source(&raw.id, &write_source(&raw)).unwrap();
    common::random_graph_over(&mut rng, passage, &Shape::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_graphs_are_valid(seed in any::<u64>()) {
        let g = graph(seed);
        prop_assert!(validate_graph(&g).is_valid(), "{:?}", validate_graph(&g));
    }

    #[test]
    fn linearized_round_trip(seed in any::<u64>()) {
        let g = graph(seed);
        let text = serialize_linearized(&g).unwrap();
        let back = parse_linearized(&text, &g.passage, ParseMode::Strict).into_result().unwrap();
        prop_assert!(back.structurally_equal(&g));
        prop_assert_eq!(normalize_whitespace(&serialize_linearized(&back).unwrap()), normalize_whitespace(&text));
    }

    #[test]
    fn lenient_agrees_with_strict_on_clean_input(seed in any::<u64>()) {
        let g = graph(seed);
        let text = serialize_linearized(&g).unwrap();
        let lenient = parse_linearized(&text, &g.passage, ParseMode::Lenient);
        prop_assert!(lenient.diagnostics.is_empty());
        prop_assert_eq!(lenient.graph.unwrap(), parse_linearized(&text, &g.passage, ParseMode::Strict).graph.unwrap());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let g = graph(seed);
        let back = read_json(&write_json(&g)).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_json(&back), write_json(&g));
    }

    #[test]
    fn source_round_trip(seed in any::<u64>()) {
        let g = labelled_graph(seed);
        let text = write_source(&g.passage);
        prop_assert_eq!(parse_source(&g.passage.id, &text).unwrap(), g.passage);
    }

    #[test]
    fn lenient_never_aborts(seed in any::<u64>(), cut in 0usize..400, junk in "[a-z\\[\\]:;|>=-]{0,12}") {
        let g = graph(seed);
        let text = serialize_linearized(&g).unwrap();
        let mut cut = cut.min(text.len());
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        let broken = format!("{}{junk}{}", &text[..cut], &text[cut..]);
        prop_assert!(parse_linearized(&broken, &g.passage, ParseMode::Lenient).graph.is_some());
    }
}

#[test]
fn corpus_files_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let graphs: Vec<_> = (0..5).map(labelled_graph).collect();
    let json = dir.path().join("c.json");
    let lin = dir.path().join("c.lin");
    std::fs::write(&json, write_json_corpus(&graphs)).unwrap();
    std::fs::write(&lin, write_linearized_records(&graphs).unwrap()).unwrap();
    assert_eq!(load_corpus(&json).unwrap(), graphs);
    let from_lin = load_corpus(&lin).unwrap();
    assert_eq!(from_lin.len(), graphs.len());
    for (a, b) in from_lin.iter().zip(&graphs) {
        assert!(a.structurally_equal(b));
    }
}

#[test]
fn worked_example() {
    let passage = parse_source("example", common::EXAMPLE_SOURCE).unwrap();
    assert_eq!(passage.sentences.len(), 4);
    assert_eq!(passage.sentences[2].variables.len(), 3);
    let g = parse_linearized(common::EXAMPLE_LINEARIZED, &passage, ParseMode::Strict)
        .into_result()
        .unwrap();
    assert_eq!(normalize_whitespace(&serialize_linearized(&g).unwrap()), normalize_whitespace(common::EXAMPLE_LINEARIZED));
}

#[test]
fn strict_rejects_what_lenient_repairs() {
    let passage = parse_source("example", common::EXAMPLE_SOURCE).unwrap();
    let cases = [
        ("$graph$ sent1 -> sent9; $formula$ $degree$", DiagnosticCode::UnknownId),
        ("$graph$ $formula$ sent3: v2 [xor] v3; $degree$", DiagnosticCode::UnknownOperator),
        ("$graph$ $formula$ $degree$ sent1: causal", DiagnosticCode::UnresolvedDegree),
    ];
    for (text, code) in cases {
        assert!(parse_linearized(text, &passage, ParseMode::Strict).into_result().is_err(), "{text}");
        let lenient = parse_linearized(text, &passage, ParseMode::Lenient);
        assert!(lenient.graph.is_some());
        assert!(lenient.diagnostics.iter().any(|d| d.code == code), "{text}: {:?}", lenient.diagnostics);
    }
}

#[test]
fn malformed_json_is_a_schema_violation() {
    for text in ["{}", "[1]", "{\"passage\": 3}"] {
        let err = read_json_corpus(text).unwrap_err();
        assert_eq!(err.code(), "SCHEMA_VIOLATION", "{text}: {err}");
    }
}

#[test]
fn written_documents_carry_the_schema_fields() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/metagraph.schema.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&write_json(&graph(9))).unwrap();
    for key in schema["required"].as_array().unwrap() {
        assert!(doc.get(key.as_str().unwrap()).is_some(), "missing {key}");
    }
    let props: Vec<&String> = schema["properties"].as_object().unwrap().keys().collect();
    assert!(doc.as_object().unwrap().keys().all(|k| props.contains(&k)));
}
