mod common;

use std::collections::BTreeSet;

use metalogic::agreement::{
    kappa, kappa_logical_relation, kappa_logical_variable, kappa_meta_edge, kappa_meta_node,
    AnnotationPair,
};
use metalogic::LogicMetagraph;
use proptest::prelude::*;

use common::Shape;

fn labels() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1usize..40).prop_flat_map(|n| (prop::collection::vec(0u8..4, n), prop::collection::vec(0u8..4, n)))
}

fn space() -> BTreeSet<u8> {
    (0..4).collect()
}

fn pairs(seed: u64, n: usize, perturb: bool) -> Vec<AnnotationPair> {
    let mut rng = common::rng(seed);
    (0..n)
        .map(|i| {
            let a = common::random_graph(&mut rng, &format!("p{i}"), &Shape::default());
            let b = if perturb {
                common::random_graph_over(&mut rng, a.passage.clone(), &Shape::default())
            } else {
                a.clone()
            };
            AnnotationPair::new(a, b).unwrap()
        })
        .collect()
}

/// Kappa of a dimension, or None when the corpus gives it no items
/// (e.g. single-sentence passages have no edge cells).
fn defined(k: metalogic::Result<metalogic::agreement::DimensionKappa>) -> Option<f64> {
    match k {
        Ok(d) => Some(d.kappa),
        Err(e) if e.code() == "EMPTY_INPUT" => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #[test]
    fn kappa_is_symmetric((a, b) in labels()) {
        prop_assert_eq!(kappa(&a, &b, &space()).unwrap(), kappa(&b, &a, &space()).unwrap());
    }

    #[test]
    fn kappa_is_bounded((a, b) in labels()) {
        let k = kappa(&a, &b, &space()).unwrap();
        prop_assert!((-1.0..=1.0).contains(&k), "{}", k);
    }

    #[test]
    fn kappa_ignores_label_names((a, b) in labels(), shift in 1u8..4) {
        let rename = |v: &[u8]| v.iter().map(|x| (x + shift) % 4).collect::<Vec<_>>();
        let k = kappa(&a, &b, &space()).unwrap();
        let r = kappa(&rename(&a), &rename(&b), &space()).unwrap();
        prop_assert!((k - r).abs() < 1e-12);
    }

    #[test]
    fn identical_annotations_agree_fully(a in prop::collection::vec(0u8..4, 1..40)) {
        prop_assert_eq!(kappa(&a, &a, &space()).unwrap(), 1.0);
    }

    #[test]
    fn identical_graphs_agree_on_every_dimension(seed in any::<u64>()) {
        let p = pairs(seed, 5, false);
        for k in [kappa_meta_node(&p), kappa_meta_edge(&p), kappa_logical_variable(&p), kappa_logical_relation(&p)] {
            if let Some(k) = defined(k) {
                prop_assert_eq!(k, 1.0);
            }
        }
    }

    #[test]
    fn independent_graphs_stay_in_range(seed in any::<u64>()) {
        let p = pairs(seed, 5, true);
        for k in [kappa_meta_node(&p), kappa_meta_edge(&p), kappa_logical_relation(&p)] {
            if let Some(k) = defined(k) {
                prop_assert!((-1.0..=1.0).contains(&k));
            }
        }
    }
}

#[test]
fn input_errors() {
    let s = space();
    assert_eq!(kappa(&[0u8, 1], &[0], &s).unwrap_err().code(), "LENGTH_MISMATCH");
    assert_eq!(kappa::<u8>(&[], &[], &s).unwrap_err().code(), "EMPTY_INPUT");
    assert_eq!(kappa(&[9u8], &[0], &s).unwrap_err().code(), "UNKNOWN_LABEL");
}

#[test]
fn pairs_must_share_a_passage() {
    let mut rng = common::rng(3);
    let a = common::random_graph(&mut rng, "a", &Shape::default());
    let mut b = a.clone();
    b.passage.id = "b".into();
    assert_eq!(AnnotationPair::new(a.clone(), b).unwrap_err().code(), "PASSAGE_MISMATCH");
    let mut c: LogicMetagraph = a.clone();
    c.passage.sentences[0].id = "sent99".into();
    c.edges.clear();
    c.formulae.clear();
    c.degrees.clear();
    assert_eq!(AnnotationPair::new(a, c).unwrap_err().code(), "SENTENCE_MISMATCH");
}

#[test]
fn variables_need_spans() {
    let mut p = pairs(4, 1, false);
    let mut a = p.remove(0).a;
    for s in &mut a.passage.sentences {
        for v in &mut s.variables {
            v.span = None;
        }
    }
    let pair = AnnotationPair::new(a.clone(), a).unwrap();
    let err = kappa_logical_variable(&[pair]).unwrap_err();
    assert!(["MISSING_SPANS", "EMPTY_INPUT"].contains(&err.code()), "{err}");
}
