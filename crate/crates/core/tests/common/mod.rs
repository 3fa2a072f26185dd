#![allow(dead_code)]

use polybound::lang::{parse, ParseOptions, Program};

const CORPUS: &str = include_str!("../data/corpus.txt");

/// Every corpus program, declared over X1..X4.
pub fn corpus() -> Vec<(String, Program)> {
    let mut out = Vec::new();
    for block in CORPUS.split("\n== ").skip(1) {
        let (name, src) = block.split_once('\n').expect("named block");
        let src = format!("vars X1, X2, X3, X4; {}", src.trim());
        let prog = parse(&src, ParseOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        out.push((name.trim().to_string(), prog));
    }
    out
}

/// All univariate states with entries in `1..=max`.
pub fn degree_grid(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (1..=max).map(move |d| [v.clone(), vec![d]].concat())).collect();
    }
    out
}

const BOOLEAN: &str = include_str!("../data/boolean.txt");

/// The hand-built Boolean programs with their expected termination.
pub fn boolean_programs() -> Vec<(String, polybound::hardness::BoolProgram, bool)> {
    BOOLEAN
        .split("\n== ")
        .skip(1)
        .map(|block| {
            let (head, src) = block.split_once('\n').expect("named block");
            let (name, verdict) = head.trim().split_once(' ').expect("verdict");
            let b = src.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
            (name.to_string(), b, verdict == "terminates")
        })
        .collect()
}
