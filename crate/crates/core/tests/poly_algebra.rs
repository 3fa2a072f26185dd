use polybound::poly::{AbsPoly, Amp, Capper, DegreeCap, Monomial};

fn amp(s: &str) -> Amp {
    s.parse().unwrap()
}

fn poly(s: &str) -> AbsPoly {
    s.parse().unwrap()
}

/// Body AMPs of `loop X3 { X2 := X2 + X4; X4 := X3; choose {X1 := X1+X3} or {X2 := X2+X3} }`.
fn body_pair() -> (Amp, Amp) {
    (amp("<x1 + x3, x2 + x4, x3, x3>"), amp("<x1, x2 + x3 + x4, x3, x3>"))
}

#[test]
fn abstract_sum_is_union() {
    assert_eq!(poly("x1 + x2").add(&poly("x2 + x3")), poly("x1 + x2 + x3"));
    let p = poly("x1*x2 + t*x3");
    assert_eq!(p.add(&AbsPoly::zero()), p);
    assert_eq!(p.add(&p), p);
}

#[test]
fn compose_body_pair() {
    let (p, q) = body_pair();
    let want = amp("<x1 + x3, x2 + x3 + x4, x3, x3>");
    assert_eq!(p.compose_unbounded(&q), want);
    assert_eq!(q.compose_unbounded(&p), want);
}

#[test]
fn identity_is_neutral() {
    let (p, _) = body_pair();
    let id = Amp::identity(4);
    assert_eq!(p.compose_unbounded(&id), p);
    assert_eq!(id.compose_unbounded(&p), p);
}

#[test]
fn generalized_kernel_composed_with_body() {
    let p = amp("<x1 + x3, x2 + x3 + x4, x3, x3>");
    let ker = p.iterative_kernel();
    assert_eq!(ker, amp("<x1 + x3, x2 + x3, x3, x3>"));
    let g = ker.generalize().unwrap();
    assert_eq!(g.compose_unbounded(&p), amp("<x1 + x3 + t*x3, x2 + x3 + x4 + t*x3, x3, x3>"));
}

#[test]
fn tau_substitution() {
    let p = amp("<x1 + x3 + t*x3, x2 + x3 + x4 + t*x3, x3, x3>");
    assert_eq!(p.substitute_tau(2), amp("<x1 + x3 + x3^2, x2 + x3 + x4 + x3^2, x3, x3>"));
    let q = amp("<x1 + x2, x2>");
    assert_eq!(q.substitute_tau(0), q);
    assert_eq!(amp("<x1 + t*x2, x2>").substitute_tau(1), amp("<x1 + x2^2, x2>"));
}

#[test]
fn support_of_polynomials() {
    let s: Vec<usize> = poly("x1*x3 + x4").support().into_iter().collect();
    assert_eq!(s, vec![0, 2, 3]);
    assert!(AbsPoly::zero().support().is_empty());
    assert!(poly("1").support().is_empty());
}

#[test]
fn self_dependent_sets() {
    let p = amp("<x1, x2, x2, x4 + t*x2 + t*x1 + x1*x2>");
    assert_eq!(p.self_dependent().into_iter().collect::<Vec<_>>(), vec![0, 1, 3]);
    assert_eq!(Amp::identity(3).self_dependent().len(), 3);
    assert!(amp("<x2, x1>").self_dependent().is_empty());
}

#[test]
fn doubling_freedom() {
    assert!(amp("<x1 + x2, x2>").doubling_free());
    assert!(!amp("<x1*x2, x2>").doubling_free());
    assert!(Amp::identity(3).doubling_free());
}

#[test]
fn iterative_kernels() {
    assert_eq!(amp("<x3, x2, x1 + x2>").iterative_kernel(), amp("<0, x2, x2>"));
    let it = amp("<x1 + x3, x2 + x3, x3, x3>");
    assert_eq!(it.iterative_kernel(), it);
}

#[test]
fn generalization() {
    let p = amp("<x1, x2 + x1, x3 + x1*x2>");
    assert_eq!(p.generalize().unwrap(), amp("<x1, x2 + t*x1, x3 + t*x1*x2>"));
    assert_eq!(Amp::identity(3).generalize().unwrap(), Amp::identity(3));
    let z = amp("<0, x2, x2>");
    assert_eq!(z.generalize().unwrap(), z);
    assert!(amp("<x2, x1>").generalize().is_err());
}

#[test]
fn idempotent_generalization() {
    let p = amp("<x1, x2, x2, x4 + t*x2 + t*x1 + x1*x2>");
    assert!(p.is_idempotent());
    assert_eq!(p.generalize_idempotent(), amp("<x1, x2, x2, x4 + t*x2 + t*x1 + t*x1*x2>"));
    assert_eq!(Amp::identity(2).generalize_idempotent(), Amp::identity(2));
}

#[test]
fn fragment_versus_subsumption() {
    let p = amp("<x1*x2>");
    let q = amp("<t*x1*x2 + x3>");
    assert!(p.fragment_le(&p));
    assert!(!p.fragment_le(&q));
    assert!(p.subsumed_by(&q));
    assert!(amp("<x1 + t*x1>").subsumed_by(&amp("<t*x1>")));
    assert!(amp("<0, 0>").fragment_le(&amp("<x1, x2>")));
}

#[test]
fn text_round_trip() {
    for s in ["<x1 + t*x3, x2^2*x3, 0, 1>", "<inf, x1>", "<t^2*x1*x4^3>"] {
        assert_eq!(amp(s).to_string(), s);
    }
    let m: Monomial = "t^2*x1*x3^4".parse().unwrap();
    assert_eq!(m.total_degree(), 7);
    assert!("x0".parse::<Monomial>().is_err());
}

#[test]
fn cap_policies() {
    let sat = Capper::new(DegreeCap::saturate(3));
    let sq = poly("x1^2");
    assert_eq!(sq.mul(&sq, &sat), AbsPoly::saturated());
    assert!(sat.saturated());
    let cut = Capper::new(DegreeCap::truncate(3));
    assert_eq!(poly("x1^2 + x2").mul(&poly("x1^2"), &cut), poly("x1^2*x2"));
    assert!(cut.truncated());
    assert_eq!(AbsPoly::saturated().mul(&AbsPoly::zero(), &sat), AbsPoly::zero());
}
