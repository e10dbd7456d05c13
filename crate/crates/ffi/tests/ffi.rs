use std::ffi::{CStr, CString};
use std::ptr;

use metalogic_ffi::*;

const SOURCE: &str = "sent1: v1: it rained v2: the match stopped sent2: v1: the field flooded \
                      sent3: v1: fans left v2: the game ended v3: the lights failed sent4: v1: the roof held";
const LINEARIZED: &str = "$graph$ sent1 -> sent3; sent2 -> sent3; sent4 => sent2; \
                          $formula$ sent3: v2 [and] [necessary] v3; \
                          $degree$ sent1: contingent | sent2: contingent | sent3: necessary | sent4: contingent";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ml_string_free(s);
    out
}

unsafe fn example() -> *mut MlGraph {
    let mut g = ptr::null_mut();
    let status = ml_graph_from_linearized(
        c("p1").as_ptr(),
        c(SOURCE).as_ptr(),
        c(LINEARIZED).as_ptr(),
        true,
        &mut g,
    );
    assert_eq!(status, MlStatus::Ok);
    g
}

#[test]
fn linearized_json_round_trip() {
    unsafe {
        let g = example();
        let mut s = ptr::null_mut();
        assert_eq!(ml_graph_to_json(g, &mut s), MlStatus::Ok);
        let json = take(s);

        let mut h = ptr::null_mut();
        assert_eq!(ml_graph_from_json(c(&json).as_ptr(), &mut h), MlStatus::Ok);
        assert_eq!(ml_graph_to_linearized(h, &mut s), MlStatus::Ok);
        assert_eq!(take(s), LINEARIZED);

        assert_eq!(ml_graph_validate(h, &mut s), MlStatus::Ok);
        assert_eq!(take(s), "[]");
        ml_graph_free(g);
        ml_graph_free(h);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ml_graph_from_json(c("{}").as_ptr(), &mut g), MlStatus::SchemaViolation);
        let msg = CStr::from_ptr(ml_last_error()).to_str().unwrap();
        assert!(msg.starts_with("SCHEMA_VIOLATION"), "{msg}");
        assert!(g.is_null());

        assert_eq!(ml_graph_from_json(ptr::null(), &mut g), MlStatus::NullArgument);

        let status = ml_graph_from_linearized(
            c("p1").as_ptr(),
            c(SOURCE).as_ptr(),
            c("$graph$ sent9 -> sent1; $formula$ $degree$").as_ptr(),
            true,
            &mut g,
        );
        assert_eq!(status, MlStatus::UnknownId);
    }
}

#[test]
fn modal_helpers() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ml_modal_normalize(c("[necessary] [negative]").as_ptr(), &mut s), MlStatus::Ok);
        assert_eq!(take(s), "[negative] [possible]");
        assert_eq!(ml_modal_normalize(c("¬ ¬").as_ptr(), &mut s), MlStatus::Ok);
        assert_eq!(take(s), "");
        let mut d = 9u8;
        assert_eq!(ml_modal_degree(c("◇ ◇").as_ptr(), &mut d), MlStatus::Ok);
        assert_eq!(d, 3);
        assert_eq!(ml_modal_degree(c("[maybe]").as_ptr(), &mut d), MlStatus::UnknownOperator);
    }
}

#[test]
fn kappa_values() {
    unsafe {
        let space = [0, 1];
        let mut k = f64::NAN;
        assert_eq!(ml_kappa([0, 0, 0, 1].as_ptr(), [0, 0, 1, 1].as_ptr(), 4, space.as_ptr(), 2, &mut k), MlStatus::Ok);
        assert!((k - 0.5).abs() < 1e-12);
        assert_eq!(ml_kappa(ptr::null(), ptr::null(), 0, space.as_ptr(), 2, &mut k), MlStatus::EmptyInput);
        assert_eq!(ml_kappa([5].as_ptr(), [0].as_ptr(), 1, space.as_ptr(), 2, &mut k), MlStatus::UnknownLabel);
    }
}

#[test]
fn scorer_handle() {
    unsafe {
        let g = example();
        let scorer = ml_scorer_new();
        assert_eq!(ml_scorer_add(scorer, g, g), MlStatus::Ok);
        let pred = LINEARIZED.replace("sent4: contingent", "sent4: causal");
        assert_eq!(ml_scorer_add_linearized(scorer, g, c(&pred).as_ptr(), false), MlStatus::Ok);

        let mut s = ptr::null_mut();
        assert_eq!(ml_scorer_report(scorer, &mut s), MlStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(report["samples"], 2);
        assert_eq!(report["step_f1"], 1.0);
        assert_eq!(report["certainty_acc"], 0.875);
        assert_eq!(report["overall_allcorrect"], 0.5);
        ml_scorer_free(scorer);
        ml_graph_free(g);
    }
}
