use std::collections::BTreeSet;

use polybound::closure::{
    classify, closure, lc, lc_unsubstituted, sdl_legacy, sem_s, size_measure, AmpSet, ClosureConfig, GrowthClass,
};
use polybound::lang::{parse, Command, ParseOptions, Program};
use polybound::poly::{Amp, Capper};

const EX_LOOP: &str = "loop X3 { X2 := X2 + X4; X4 := X3; choose {X1 := X1+X3} or {X2 := X2+X3} }";
const EX_BODY: &str = "vars X1, X2, X3, X4; X2 := X2 + X4; X4 := X3; choose {X1 := X1+X3} or {X2 := X2+X3}";

fn prog(src: &str) -> Program {
    parse(src, ParseOptions::default()).unwrap()
}

fn set(items: &[&str]) -> AmpSet {
    items.iter().map(|s| s.parse::<Amp>().unwrap()).collect()
}

#[test]
fn body_abstraction() {
    let got = sem_s(&prog(EX_BODY), &ClosureConfig::default()).unwrap();
    assert_eq!(got, set(&["<x1 + x3, x2 + x4, x3, x3>", "<x1, x2 + x3 + x4, x3, x3>"]));
}

#[test]
fn closure_adds_identity_and_product() {
    let s = set(&["<x1 + x3, x2 + x4, x3, x3>", "<x1, x2 + x3 + x4, x3, x3>"]);
    let cl = closure(&s, 4, &Capper::unbounded());
    let mut want = s.clone();
    want.insert(Amp::identity(4));
    want.insert("<x1 + x3, x2 + x3 + x4, x3, x3>".parse().unwrap());
    assert_eq!(cl, want);
    assert_eq!(closure(&cl, 4, &Capper::unbounded()), cl);
    assert_eq!(closure(&BTreeSet::new(), 3, &Capper::unbounded()), set(&["<x1, x2, x3>"]));
}

#[test]
fn loop_summary_contains_quadratic_bound() {
    let got = sem_s(&prog(EX_LOOP), &ClosureConfig::default()).unwrap();
    assert!(got.contains(&"<x1 + x3 + x3^2, x2 + x3 + x4 + x3^2, x3, x3>".parse::<Amp>().unwrap()));
    let s = set(&["<x1 + x3, x2 + x4, x3, x3>", "<x1, x2 + x3 + x4, x3, x3>"]);
    assert_eq!(lc(&s, 2, 4, &Capper::unbounded()), got);
}

#[test]
fn lc_of_identity() {
    let id = set(&["<x1, x2>"]);
    assert_eq!(lc(&id, 1, 2, &Capper::unbounded()), id);
}

#[test]
fn accumulating_loop() {
    let got = sem_s(&prog("loop X2 { X1 := X1 + X2 }"), &ClosureConfig::default()).unwrap();
    assert_eq!(got, set(&["<x1, x2>", "<x1 + x2, x2>", "<x1 + x2^2, x2>", "<x1 + x2 + x2^2, x2>"]));
}

#[test]
fn closure_of_chain_stops() {
    let s = set(&["<x1 + x2, x2 + x3, x3, x3>"]);
    let cl = closure(&s, 4, &Capper::unbounded());
    assert_eq!(cl, set(&["<x1, x2, x3, x4>", "<x1 + x2, x2 + x3, x3, x3>", "<x1 + x2 + x3, x2 + x3, x3, x3>"]));
}

#[test]
fn legacy_procedure_on_chain() {
    let s = set(&["<x1 + x2, x2 + x3, x3, x3>"]);
    let legacy = sdl_legacy(&s, 4, &Capper::unbounded());
    let q: Amp = "<x1 + x2 + x3 + t*x2 + t*x3 + t^2*x3, x2 + x3 + t*x3, x3, x3>".parse().unwrap();
    assert!(legacy.contains(&q));
    let new: Amp = "<x1 + t*x2, x2 + t*x3, x3, x3>".parse().unwrap();
    assert!(new.subsumed_by(&q));
    assert!(lc_unsubstituted(&s, 4, &Capper::unbounded()).iter().any(|p| q.subsumed_by(p)));
    assert_eq!(sdl_legacy(&set(&["<x1, x2>"]), 2, &Capper::unbounded()), set(&["<x1, x2>"]));
}

#[test]
fn size_measures() {
    assert_eq!(size_measure(&Command::mul(0, 1, 2), 3), 1);
    assert_eq!(size_measure(&Command::Skip, 3), 0);
    let body = Command::seq(Command::mul(0, 1, 2), Command::mul(1, 0, 2));
    assert_eq!(size_measure(&Command::looped(2, body), 3), 18);
}

#[test]
fn classifier() {
    let cfg = ClosureConfig::default();
    let sq = classify(&prog("loop X2 { X1 := X1 * X1 }"), &cfg);
    assert_eq!(sq.classes[0], GrowthClass::SuperPoly);
    assert_eq!(sq.classes[1], GrowthClass::Poly(1));

    let dbl = classify(&prog("loop X2 { X1 := X1 + X1 }"), &cfg);
    assert_eq!(dbl.classes[0], GrowthClass::SuperPoly);

    let line = classify(&prog("X3 := X1 * X2; X1 := X3 + X2"), &cfg);
    assert!(line.classes.iter().all(|c| matches!(c, GrowthClass::Poly(_))));

    let ex = classify(&prog(EX_LOOP), &cfg);
    assert!(ex.classes.iter().all(|c| matches!(c, GrowthClass::Poly(d) if *d <= 2)));
    assert!(ex.warnings.is_empty());
}

#[test]
fn unmasked_analysis_refuses_doubling() {
    let err = sem_s(&prog("loop X2 { X3 := X1; X1 := X1 + X3 }"), &ClosureConfig::default());
    assert!(err.is_err());
    let err = sem_s(&prog("loop X3 { X1 := X1 * X2 }"), &ClosureConfig::default());
    assert!(err.is_err());
}
