use std::collections::BTreeSet;

use num_bigint::BigUint;
use polybound::closure::{sem_s, ClosureConfig};
use polybound::error::{ExecError, LangError};
use polybound::lang::{
    enumerate_executions, instrument_counter, parse, worst_case_u64, Command, ExecConfig, Expr, ParseOptions, Program,
};
use proptest::prelude::*;

fn prog(src: &str) -> Program {
    parse(src, ParseOptions::default()).unwrap()
}

fn states(rows: &[&[u64]]) -> BTreeSet<Vec<BigUint>> {
    rows.iter().map(|r| r.iter().map(|&x| BigUint::from(x)).collect()).collect()
}

fn big(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

#[test]
fn parses_skip() {
    assert_eq!(prog("skip").body, Command::Skip);
}

#[test]
fn parses_nested_loop_program() {
    let p = prog("loop X3 { X2 := X2 + X4; X4 := X3; choose {X1 := X1+X3} or {X2 := X2+X3} }");
    let want = Command::looped(
        2,
        Command::seq(
            Command::add(1, 1, 3),
            Command::seq(Command::copy(3, 2), Command::choose(Command::add(0, 0, 2), Command::add(1, 1, 2))),
        ),
    );
    assert_eq!(p.body, want);
    assert_eq!(p.n(), 4);
}

#[test]
fn names_follow_header_or_first_use() {
    let p = prog("vars a, b; loop b { a := a + b }   # comment");
    assert_eq!(p.names, vec!["a", "b"]);
    assert_eq!(p.body, Command::looped(1, Command::add(0, 0, 1)));
    let q = prog("y := x * x");
    assert_eq!(q.names, vec!["y", "x"]);
    assert_eq!(q.body, Command::Assign(0, Expr::Mul(1, 1)));
}

#[test]
fn rejects_bad_programs() {
    assert!(matches!(
        parse("loop X1 { X1 := X1 + X2 }", ParseOptions::default()),
        Err(LangError::LoopVarAssigned { .. })
    ));
    assert!(matches!(
        parse("loop X2 { skip; loop X1 { X2 := X1 } }", ParseOptions::default()),
        Err(LangError::LoopVarAssigned { .. })
    ));
    assert!(matches!(parse("X1 := 0", ParseOptions::default()), Err(LangError::ExtensionDisabled { .. })));
    assert!(matches!(parse("X1 := *", ParseOptions::default()), Err(LangError::ExtensionDisabled { .. })));
    assert!(matches!(parse("vars a; a := b", ParseOptions::default()), Err(LangError::UnknownVariable { .. })));
    assert!(matches!(parse("X1 := X2 +", ParseOptions::default()), Err(LangError::Syntax { line: 1, .. })));
    assert!(matches!(
        parse("choose { skip }\n or skip", ParseOptions::default()),
        Err(LangError::Syntax { line: 2, .. })
    ));
    assert!(parse("vars a, a; skip", ParseOptions::default()).is_err());
}

#[test]
fn extension_commands_parse_with_flag() {
    let p = parse("X1 := 0; X2 := *", ParseOptions { ext: true }).unwrap();
    assert_eq!(p.body, Command::seq(Command::Reset(0), Command::Havoc(1)));
    assert!(p.body.uses_extension());
}

#[test]
fn skip_and_choice_executions() {
    let two = Program::new(2, Command::Skip);
    let cfg = ExecConfig::with_budget(10);
    assert_eq!(enumerate_executions(&two, &big(&[3, 5]), cfg).unwrap(), states(&[&[3, 5]]));
    let ch = Program::new(2, Command::choose(Command::copy(0, 1), Command::Skip));
    assert_eq!(enumerate_executions(&ch, &big(&[3, 5]), cfg).unwrap(), states(&[&[5, 5], &[3, 5]]));
}

#[test]
fn loop_executions() {
    let p = Program::new(2, Command::looped(1, Command::add(0, 0, 1)));
    let cfg = ExecConfig::with_budget(10);
    let want = states(&[&[0, 4], &[4, 4], &[8, 4], &[12, 4], &[16, 4]]);
    assert_eq!(enumerate_executions(&p, &big(&[0, 4]), cfg).unwrap(), want);
    assert_eq!(worst_case_u64(&p, &[0, 4], cfg, 0).unwrap(), BigUint::from(16u32));
    assert_eq!(worst_case_u64(&p, &[0, 4], ExecConfig::with_budget(2), 0).unwrap(), BigUint::from(8u32));
}

#[test]
fn worst_cases() {
    let one = Program::new(1, Command::Skip);
    assert_eq!(worst_case_u64(&one, &[7], ExecConfig::with_budget(1), 0).unwrap(), BigUint::from(7u32));
    let sq = Program::new(2, Command::mul(0, 1, 1));
    assert_eq!(worst_case_u64(&sq, &[1, 3], ExecConfig::with_budget(1), 0).unwrap(), BigUint::from(9u32));
}

#[test]
fn execution_errors() {
    let p = Program::new(2, Command::Skip);
    assert!(matches!(
        enumerate_executions(&p, &big(&[1]), ExecConfig::default()),
        Err(ExecError::StateLength { got: 1, n: 2 })
    ));
    let wide = prog("loop X2 { choose { X1 := X1 + X2 } or { X1 := X1 + X3 } }");
    let cfg = ExecConfig { limit: 10, ..ExecConfig::default() };
    assert!(matches!(enumerate_executions(&wide, &big(&[0, 30, 7]), cfg), Err(ExecError::BudgetBlowup { .. })));
}

#[test]
fn havoc_and_reset_executions() {
    let p = parse("X1 := *; X2 := 0", ParseOptions { ext: true }).unwrap();
    let cfg = ExecConfig { havoc_max: 2, ..ExecConfig::default() };
    assert_eq!(enumerate_executions(&p, &big(&[9, 9]), cfg).unwrap(), states(&[&[0, 0], &[1, 0], &[2, 0]]));
}

fn counter_entry(p: &Program, counter: usize) -> String {
    let amps = sem_s(p, &ClosureConfig::default()).unwrap();
    let mut top = amps.iter().map(|a| a.entry(counter).clone()).collect::<Vec<_>>();
    top.sort_by_key(|e| e.max_total_degree());
    top.last().unwrap().to_string()
}

#[test]
fn instrumented_counters() {
    let skip = Program::new(1, Command::Skip);
    let ins = instrument_counter(&skip, &|_| true, None);
    assert_eq!(counter_entry(&ins.program, ins.counter), "x2 + x3");

    let single = Program::new(2, Command::looped(1, Command::copy(0, 0)));
    let ins = instrument_counter(&single, &|c| matches!(c, Command::Assign(..)), None);
    assert_eq!(ins.program.n(), 4);
    assert_eq!(counter_entry(&ins.program, ins.counter), "x2*x4 + x3 + x4");
    let mut s = big(&[1, 6, 0, 1]);
    let cfg = ExecConfig::default();
    assert_eq!(polybound::lang::worst_case(&ins.program, &s, cfg, ins.counter).unwrap(), BigUint::from(6u32));

    let nested = Program::new(2, Command::looped(1, Command::looped(1, Command::copy(0, 0))));
    let ins = instrument_counter(&nested, &|c| matches!(c, Command::Assign(..)), None);
    assert!(counter_entry(&ins.program, ins.counter).contains("x2^2*x4"));
    s[1] = BigUint::from(5u32);
    assert_eq!(polybound::lang::worst_case(&ins.program, &s, cfg, ins.counter).unwrap(), BigUint::from(25u32));
}

#[test]
fn instrumentation_avoids_name_clashes() {
    let p = prog("vars cnt, one; loop one { cnt := cnt + one }");
    let ins = instrument_counter(&p, &|_| false, Some(1));
    assert_eq!(ins.program.names, vec!["cnt", "one", "cnt1"]);
    assert_eq!(ins.unit, 1);
}

fn arb_command(n: usize) -> impl Strategy<Value = Command> {
    let atom = prop_oneof![
        Just(Command::Skip),
        (0..n, 0..n).prop_map(|(i, j)| Command::copy(i, j)),
        (0..n, 0..n, 0..n).prop_map(|(i, j, k)| Command::add(i, j, k)),
        (0..n, 0..n, 0..n).prop_map(|(i, j, k)| Command::mul(i, j, k)),
    ];
    atom.prop_recursive(3, 16, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Command::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Command::choose(a, b)),
            (0..n, inner).prop_map(|(l, b)| if b.assigned_vars().contains(&l) { b } else { Command::looped(l, b) }),
        ]
    })
}

proptest! {
    #[test]
    fn source_round_trip(body in arb_command(3)) {
        let p = Program::new(3, body);
        prop_assume!(p.validate(false).is_ok());
        let back = parse(&p.to_source(), ParseOptions::default()).unwrap();
        prop_assert_eq!(&back.body, &p.body.normalize());
        let inline = parse(&format!("vars X1, X2, X3; {}", p.to_inline()), ParseOptions::default()).unwrap();
        prop_assert_eq!(inline.body, p.body.normalize());
    }

    #[test]
    fn sequencing_is_relational_composition(
        a in arb_command(2),
        b in arb_command(2),
        s in prop::collection::vec(0u64..4, 2),
    ) {
        let (pa, pb) = (Program::new(2, a.clone()), Program::new(2, b.clone()));
        prop_assume!(pa.validate(false).is_ok() && pb.validate(false).is_ok());
        let cfg = ExecConfig::with_budget(3);
        let whole = enumerate_executions(&Program::new(2, Command::seq(a, b)), &big(&s), cfg).unwrap();
        let mut composed = BTreeSet::new();
        for t in enumerate_executions(&pa, &big(&s), cfg).unwrap() {
            composed.extend(enumerate_executions(&pb, &t, cfg).unwrap());
        }
        prop_assert_eq!(whole, composed);
    }

    #[test]
    fn fewer_iterations_give_subsets(
        body in arb_command(3),
        s in prop::collection::vec(0u64..4, 3),
        budget in 0u64..4,
    ) {
        prop_assume!(!body.assigned_vars().contains(&2));
        let p = Program::new(3, Command::looped(2, body));
        prop_assume!(p.validate(false).is_ok());
        let small = enumerate_executions(&p, &big(&s), ExecConfig::with_budget(budget)).unwrap();
        let large = enumerate_executions(&p, &big(&s), ExecConfig::with_budget(budget + 1)).unwrap();
        prop_assert!(small.is_subset(&large));
    }
}
