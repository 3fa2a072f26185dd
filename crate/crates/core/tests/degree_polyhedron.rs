mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use polybound::engine::{EngineConfig, UniVal};
use polybound::error::AnalysisError;
use polybound::lang::{parse, ParseOptions, Program};
use polybound::multi::attainable_monomials;
use polybound::polyhedron::{
    clipped_umax, decide_multivariate, decide_via_univariate, generate_multivariate, u_bound_bits, PolyhedronGen,
};
use polybound::uni::ev_m;
use proptest::prelude::*;

const CAP: u64 = 16;
const SQUARE_OF_SUM: &str = "X2 := X1 + X2; X2 := X2 * X2";

fn prog(src: &str) -> Program {
    parse(src, ParseOptions::default()).unwrap()
}

fn gen(points: &[&[u32]]) -> PolyhedronGen {
    PolyhedronGen::new(points[0].len(), points.iter().map(|p| p.to_vec()))
}

fn set(points: &[&[u32]]) -> BTreeSet<Vec<u32>> {
    points.iter().map(|p| p.to_vec()).collect()
}

#[test]
fn membership_on_segment() {
    let g = gen(&[&[2, 0], &[0, 2]]);
    assert!(g.contains_int(&[1, 1]).unwrap());
    assert!(!g.contains_int(&[2, 1]).unwrap());
    assert!(g.contains_int(&[0, 0]).unwrap());
    let half = BigRational::new(BigInt::from(3), BigInt::from(2));
    assert!(g.contains(&[half.clone(), half.clone() - BigRational::from_integer(BigInt::from(1))]).unwrap());
    assert!(!g.contains(&[half.clone(), half]).unwrap());
}

#[test]
fn membership_errors() {
    let empty = PolyhedronGen::new(2, Vec::<Vec<u32>>::new());
    assert!(matches!(empty.contains_int(&[0, 0]), Err(AnalysisError::EmptyGenerators)));
    assert!(matches!(gen(&[&[1, 1]]).contains_int(&[1]), Err(AnalysisError::Dimension(1, 2))));
}

#[test]
fn vertex_extraction() {
    assert_eq!(gen(&[&[2, 0], &[0, 2], &[1, 1]]).vertices(), set(&[&[2, 0], &[0, 2]]));
    assert_eq!(gen(&[&[3, 1]]).vertices(), set(&[&[3, 1]]));
    assert_eq!(gen(&[&[1, 0], &[0, 1], &[1, 1]]).vertices(), set(&[&[1, 1]]));
}

#[test]
fn multivariate_decisions() {
    let p = prog(SQUARE_OF_SUM);
    let x1x2 = "x1*x2".parse().unwrap();
    assert!(decide_multivariate(&p, 1, &x1x2, CAP).unwrap().attainable);
    let x1sq_x2 = "x1^2*x2".parse().unwrap();
    assert!(!decide_multivariate(&p, 1, &x1sq_x2, CAP).unwrap().attainable);
    for src in [SQUARE_OF_SUM, "loop X2 { X1 := X1 + X2 }", "skip"] {
        let p = prog(&format!("vars X1, X2; {src}"));
        assert!(decide_multivariate(&p, 0, &"1".parse().unwrap(), CAP).unwrap().attainable);
    }
}

#[test]
fn bounds_of_quadratic_loop() {
    let p = prog("loop X3 { X2 := X2 + X4; X4 := X3; choose {X1 := X1+X3} or {X2 := X2+X3} }");
    let b = generate_multivariate(&p, 0, 2, CAP).unwrap();
    assert_eq!(b.vertices, set(&[&[1, 0, 0, 0], &[0, 0, 2, 0]]));
    assert_eq!(b.interior, set(&[&[0, 0, 1, 0]]));
    assert_eq!(b.upper_bound(), "max(x3^2, x1)");
}

#[test]
fn bounds_of_skip_and_square() {
    let b = generate_multivariate(&prog("vars X1, X2, X3; skip"), 2, 1, CAP).unwrap();
    assert_eq!(b.vertices, set(&[&[0, 0, 1]]));
    assert!(b.interior.is_empty());
    let b = generate_multivariate(&prog(SQUARE_OF_SUM), 1, 2, CAP).unwrap();
    assert_eq!(b.vertices, set(&[&[2, 0], &[0, 2]]));
    assert!(b.interior.is_empty());
}

#[test]
fn univariate_route_on_square_of_sum() {
    let p = prog(SQUARE_OF_SUM);
    let cfg = EngineConfig::default();
    assert!(decide_via_univariate(&p, 1, &[1, 1], 2, 1 << 20, cfg).unwrap());
    assert!(!decide_via_univariate(&p, 1, &[2, 1], 2, 1 << 20, cfg).unwrap());
    assert!(decide_via_univariate(&p, 1, &[2, 0], 5, 1 << 20, cfg).unwrap());
    assert!(matches!(
        decide_via_univariate(&p, 1, &[1, 1], 9, 10, cfg),
        Err(AnalysisError::BoundTooLarge { needed: 100, budget: 10 })
    ));
}

#[test]
fn weight_bounds() {
    assert_eq!(u_bound_bits(2, 3), 4 * 4 * (2 + 2));
    assert_eq!(clipped_umax(3, 4, 6), 63);
    assert_eq!(clipped_umax(1, 0, 64), 15);
    assert_eq!(clipped_umax(8, 1000, 64), u32::MAX);
}

/// Corpus programs that only mention X1..X3, re-declared over three variables.
fn small_corpus() -> Vec<(String, Program)> {
    common::corpus()
        .into_iter()
        .filter(|(_, p)| !p.to_inline().contains("X4"))
        .map(|(name, p)| {
            let src = format!("vars X1, X2, X3; {}", p.to_inline());
            (name, parse(&src, ParseOptions::default()).unwrap())
        })
        .collect()
}

#[test]
fn routes_agree_on_small_corpus() {
    let umax = 3;
    let small = small_corpus();
    assert!(small.len() >= 8);
    for (name, p) in small {
        for j in 0..3 {
            let att = attainable_monomials(&p, j, CAP).unwrap();
            let g = PolyhedronGen::new(3, att.vectors.clone());
            for d in common::degree_grid(3, 3) {
                let d: Vec<u32> = d.iter().map(|x| x - 1).collect();
                let lp = g.contains_int(&d).unwrap();
                let via = decide_via_univariate(&p, j, &d, umax, 1 << 20, EngineConfig::default()).unwrap();
                assert_eq!(lp, via, "{name} X{} d={d:?}", j + 1);
            }
        }
    }
}

#[test]
fn weighted_maximum_matches_univariate_maximum() {
    for (name, p) in small_corpus() {
        let att = attainable_monomials(&p, 0, CAP).unwrap();
        for u in common::degree_grid(3, 3) {
            let best = att.vectors.iter().map(|v| v.iter().zip(&u).map(|(a, b)| a * b).sum::<u32>()).max();
            let init: Vec<UniVal> = u.iter().map(|&x| UniVal::Ord(x)).collect();
            let outs = ev_m(&p.body, 3, &init, 256, EngineConfig::default());
            let uni = outs.iter().filter_map(|o| o.state[0].degree()).max();
            assert_eq!(best, uni, "{name} u={u:?}");
        }
    }
}

proptest! {
    #[test]
    fn points_are_members_and_boxes_are_downward_closed(
        pts in prop::collection::btree_set(prop::collection::vec(0u32..5, 3), 1..6),
        shrink in prop::collection::vec(0u32..5, 3),
    ) {
        let g = PolyhedronGen::new(3, pts.clone());
        let verts = g.vertices();
        prop_assert!(verts.is_subset(&pts));
        prop_assert!(!verts.is_empty());
        for p in &pts {
            prop_assert!(g.contains_int(p).unwrap());
            let lower: Vec<u32> = p.iter().zip(&shrink).map(|(a, b)| a.saturating_sub(*b)).collect();
            prop_assert!(g.contains_int(&lower).unwrap());
        }
        let only_vertices = PolyhedronGen::new(3, verts);
        for p in &pts {
            prop_assert!(only_vertices.contains_int(p).unwrap());
        }
    }
}
