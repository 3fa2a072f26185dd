mod common;

use std::collections::BTreeSet;

use polybound::closure::{sem_s, ClosureConfig};
use polybound::engine::{EngineConfig, MonoVal, Outcome, UniVal};
use polybound::lang::{parse, ParseOptions, Program};
use polybound::matrix::DFMatrix;
use polybound::multi::{at_univariate, attainable_monomials, cap_for, ev_mm, id_state, sem_m, MonoState};
use polybound::poly::Monomial;
use polybound::uni::ev_m;

const CAP: u64 = 16;
const LIMIT: u32 = 64;

fn prog(src: &str) -> Program {
    parse(src, ParseOptions::default()).unwrap()
}

fn state(s: &str) -> MonoState {
    s.split(',')
        .map(|t| match t.trim() {
            "0" => MonoVal::Zero,
            m => MonoVal::Mono(m.parse::<Monomial>().unwrap()),
        })
        .collect()
}

fn rows(r: &[&str]) -> DFMatrix {
    DFMatrix::from_rows(r).unwrap()
}

#[test]
fn product_assignment() {
    let got = sem_m(&prog("vars X1, X2, X3; X3 := X2 * X1"), CAP).unwrap();
    let want = Outcome { state: state("x1, x2, x1*x2"), matrix: DFMatrix::erase(3, 2) };
    assert_eq!(got, BTreeSet::from([want]));
}

#[test]
fn product_then_copy() {
    let got = sem_m(&prog("vars X1, X2, X3; X3 := X2 * X1; X2 := X3"), CAP).unwrap();
    let m = DFMatrix::erase(3, 2).mul(&DFMatrix::assign(3, 2, 1));
    assert_eq!(got, BTreeSet::from([Outcome { state: state("x1, x1*x2, x1*x2"), matrix: m }]));
}

#[test]
fn generalization_in_five_variables() {
    let p = prog("vars X1, X2, X3, X4, X5; loop X5 { choose { X3 := X1; X4 := X2 } or { X1 := X3 + X4 } }");
    let got = sem_m(&p, CAP).unwrap();
    let want =
        Outcome { state: state("x2*x5, x2, 0, x2, x5"), matrix: rows(&["10100", "01010", "00000", "00000", "00001"]) };
    assert!(got.contains(&want));
}

#[test]
fn square_of_sum_misses_mixed_monomial() {
    let a = attainable_monomials(&prog("X2 := X1 + X2; X2 := X2 * X2"), 1, CAP).unwrap();
    assert_eq!(a.vectors, BTreeSet::from([vec![2, 0], vec![0, 2]]));
    assert!(!a.unbounded);
}

#[test]
fn skip_attains_the_variable() {
    let a = attainable_monomials(&prog("vars X1, X2, X3; skip"), 1, CAP).unwrap();
    assert_eq!(a.vectors, BTreeSet::from([vec![0, 1, 0]]));
}

#[test]
fn quadratic_loop_monomials() {
    let p = prog("loop X3 { X2 := X2 + X4; X4 := X3; choose {X1 := X1+X3} or {X2 := X2+X3} }");
    let a = attainable_monomials(&p, 0, CAP).unwrap();
    assert!(a.vectors.contains(&vec![1, 0, 0, 0]));
    assert!(a.vectors.contains(&vec![0, 0, 2, 0]));
}

#[test]
fn havoc_is_unbounded() {
    let p = parse("X1 := *; X2 := X1", ParseOptions { ext: true }).unwrap();
    let a = attainable_monomials(&p, 1, CAP).unwrap();
    assert!(a.unbounded && a.vectors.is_empty());
}

#[test]
fn equational_and_interpreter_routes_agree() {
    for (name, p) in common::corpus() {
        let cap = cap_for(&p);
        let eq: BTreeSet<MonoState> = sem_m(&p, cap).unwrap().into_iter().map(|o| o.state).collect();
        let it: BTreeSet<MonoState> = ev_mm(&p, cap, EngineConfig::default()).into_iter().map(|o| o.state).collect();
        assert_eq!(eq, it, "{name}");
    }
}

#[test]
fn simulation_identity() {
    for (name, p) in common::corpus() {
        let outs = sem_m(&p, CAP).unwrap();
        for u in common::degree_grid(4, 2) {
            let u: Vec<UniVal> = u.into_iter().map(UniVal::Ord).collect();
            let lifted: BTreeSet<_> = outs
                .iter()
                .map(|o| Outcome { state: at_univariate(&o.state, &u, LIMIT), matrix: o.matrix.clone() })
                .collect();
            let direct: BTreeSet<_> = ev_m(&p.body, 4, &u, LIMIT, EngineConfig::default()).into_iter().collect();
            assert_eq!(lifted, direct, "{name} at {u:?}");
        }
    }
}

#[test]
fn monomials_are_bounded_by_closure() {
    for (name, p) in common::corpus() {
        let amps = sem_s(&p, &ClosureConfig::default()).unwrap();
        for o in sem_m(&p, CAP).unwrap() {
            let covered = amps.iter().any(|a| {
                o.state.iter().zip(a.entries()).all(|(v, e)| match v {
                    MonoVal::Mono(m) => e.monomials().any(|q| m.divides(q)),
                    _ => true,
                })
            });
            assert!(covered, "{name}: {:?}", o.state);
        }
    }
}

#[test]
fn identity_state() {
    assert_eq!(id_state(2), state("x1, x2"));
}
