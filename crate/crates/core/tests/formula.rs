mod common;

use metalogic::formula::{canonicalize_triple, formulae_equal, triple_multiset};
use metalogic::{BinaryOp, Formula, LogicalTriple, ModalPrefix, Operand, UnaryOp};
use proptest::prelude::*;

use common::oracle;

fn prefix() -> impl Strategy<Value = ModalPrefix> {
    prop::collection::vec(0..3usize, 0..6).prop_map(|v| ModalPrefix(v.into_iter().map(|i| UnaryOp::ALL[i]).collect()))
}

fn triple() -> impl Strategy<Value = LogicalTriple> {
    (1..4usize, prefix(), 0..3usize, 1..4usize, prefix()).prop_map(|(a, pa, op, b, pb)| {
        LogicalTriple::new(Operand::new(format!("v{a}"), pa), BinaryOp::ALL[op], Operand::new(format!("v{b}"), pb))
    })
}

fn swapped(t: &LogicalTriple) -> LogicalTriple {
    LogicalTriple::new(t.right.clone(), t.op, t.left.clone())
}

proptest! {
    #[test]
    fn canonical_equality_agrees_with_oracle(a in triple(), b in triple()) {
        prop_assert_eq!(canonicalize_triple(&a) == canonicalize_triple(&b), oracle::triples_match(&a, &b));
    }

    #[test]
    fn symmetric_operators_ignore_order(t in triple()) {
        let same = canonicalize_triple(&t) == canonicalize_triple(&swapped(&t));
        prop_assert!(same || !t.op.is_symmetric());
    }

    #[test]
    fn canonicalization_is_idempotent(t in triple()) {
        let c = canonicalize_triple(&t);
        prop_assert_eq!(canonicalize_triple(&LogicalTriple::from(&c)), c);
    }

    #[test]
    fn formula_equality_ignores_triple_order(ts in prop::collection::vec(triple(), 0..5), g in prefix()) {
        let a = Formula::new("s", ts.clone()).with_global(g.clone());
        let mut rev = ts;
        rev.reverse();
        let b = Formula::new("s", rev.iter().map(swapped_if_symmetric).collect()).with_global(g);
        prop_assert!(formulae_equal(&a, &b).unwrap());
        prop_assert_eq!(triple_multiset(&a), triple_multiset(&b));
    }
}

fn swapped_if_symmetric(t: &LogicalTriple) -> LogicalTriple {
    if t.op.is_symmetric() {
        swapped(t)
    } else {
        t.clone()
    }
}

#[test]
fn implication_keeps_direction() {
    let t = LogicalTriple::new(Operand::new("v1", [UnaryOp::Negation]), BinaryOp::Implication, Operand::new("v2", [UnaryOp::Diamond]));
    assert_ne!(canonicalize_triple(&t), canonicalize_triple(&swapped(&t)));
}

#[test]
fn multiplicity_matters() {
    let t = LogicalTriple::new(Operand::bare("v1"), BinaryOp::Disjunction, Operand::bare("v2"));
    let once = Formula::new("s", vec![t.clone()]);
    let twice = Formula::new("s", vec![t.clone(), t]);
    assert!(!formulae_equal(&once, &twice).unwrap());
}

#[test]
fn different_sentences_are_an_error() {
    let err = formulae_equal(&Formula::new("a", vec![]), &Formula::new("b", vec![])).unwrap_err();
    assert_eq!(err.code(), "SENTENCE_MISMATCH");
}
