//! Multivariate monomial evaluation: which single monomials each variable can
//! attain, tracked alongside linear data-flow matrices.

use std::collections::BTreeSet;

use crate::closure::default_cap;
use crate::engine::{Domain, Engine, EngineConfig, MonoDomain, MonoVal, Outcome, UniDomain, UniVal};
use crate::error::AnalysisError;
use crate::lang::{Command, Expr, Program};
use crate::matrix::DFMatrix;
use crate::poly::Monomial;

pub type MonoState = Vec<MonoVal>;
pub type MonoOutcome = Outcome<MonoVal>;
pub type MonoSet = BTreeSet<MonoOutcome>;

/// `⟨x1, …, xn⟩`.
pub fn id_state(n: usize) -> MonoState {
    (0..n).map(|i| MonoDomain { cap: u64::MAX }.var(i)).collect()
}

/// Total-degree cap chosen from the program size, with the classifier's ceiling.
pub fn cap_for(prog: &Program) -> u64 {
    default_cap(prog, crate::closure::DEFAULT_CEILING).0.cap
}

/// Interpreter route: run the generic engine from the identity state.
pub fn ev_mm(prog: &Program, cap: u64, cfg: EngineConfig) -> Vec<MonoOutcome> {
    Engine::new(MonoDomain { cap }, prog.n(), cfg).run(&prog.body, &id_state(prog.n()))
}

/// Equational route over (monomial state, matrix) pairs. Covers the core language only.
pub fn sem_m(prog: &Program, cap: u64) -> Result<MonoSet, AnalysisError> {
    if prog.body.uses_extension() {
        return Err(AnalysisError::InvalidQuery("the equational semantics covers the core language only".into()));
    }
    Ok(Equational { dom: MonoDomain { cap }, n: prog.n() }.sem(&prog.body))
}

struct Equational {
    dom: MonoDomain,
    n: usize,
}

impl Equational {
    fn id(&self) -> MonoState {
        id_state(self.n)
    }

    fn with(&self, i: usize, v: MonoVal) -> MonoState {
        let mut s = self.id();
        s[i] = v;
        s
    }

    /// `q` evaluated at `p`, entry by entry.
    fn apply(&self, q: &MonoState, p: &MonoState) -> MonoState {
        q.iter()
            .map(|v| match v {
                MonoVal::Mono(m) => m.vars().fold(MonoVal::Mono(Monomial::one()), |acc, (i, e)| {
                    (0..e).fold(acc, |a, _| self.dom.mul(&a, &p[i]))
                }),
                other => other.clone(),
            })
            .collect()
    }

    /// `a` followed by `b`.
    fn then(&self, a: &MonoOutcome, b: &MonoOutcome) -> MonoOutcome {
        Outcome { state: self.apply(&b.state, &a.state), matrix: a.matrix.mul(&b.matrix) }
    }

    fn sem(&self, c: &Command) -> MonoSet {
        let n = self.n;
        let one = |state: MonoState, matrix: DFMatrix| Outcome { state, matrix };
        match c {
            Command::Skip => MonoSet::from([one(self.id(), DFMatrix::identity(n))]),
            Command::Assign(i, Expr::Var(j)) => {
                MonoSet::from([one(self.with(*i, self.dom.var(*j)), DFMatrix::assign(n, *j, *i))])
            }
            Command::Assign(i, Expr::Mul(j, k)) => {
                let v = self.dom.mul(&self.dom.var(*j), &self.dom.var(*k));
                MonoSet::from([one(self.with(*i, v), DFMatrix::erase(n, *i))])
            }
            Command::Assign(i, Expr::Add(j, k)) => {
                let m = DFMatrix::assign(n, *j, *i).or(&DFMatrix::assign(n, *k, *i));
                MonoSet::from([
                    one(self.with(*i, self.dom.var(*j)), m.clone()),
                    one(self.with(*i, self.dom.var(*k)), m),
                ])
            }
            Command::Reset(i) => MonoSet::from([one(self.with(*i, MonoVal::DZero), DFMatrix::erase(n, *i))]),
            Command::Havoc(i) => MonoSet::from([one(self.with(*i, MonoVal::Star), DFMatrix::erase(n, *i))]),
            Command::Seq(a, b) => {
                let (sa, sb) = (self.sem(a), self.sem(b));
                sa.iter().flat_map(|x| sb.iter().map(move |y| (x, y))).map(|(x, y)| self.then(x, y)).collect()
            }
            Command::Choose(a, b) => {
                let mut s = self.sem(a);
                s.extend(self.sem(b));
                s
            }
            Command::Loop(l, body) => {
                let inner = self.closure(self.sem(body));
                let zpool: Vec<usize> = body.assigned_vars().into_iter().collect();
                let mut gens = MonoSet::new();
                for o in &inner {
                    for bits in 0u64..1 << zpool.len() {
                        let z: BTreeSet<usize> =
                            zpool.iter().enumerate().filter(|(b, _)| bits >> b & 1 == 1).map(|(_, &v)| v).collect();
                        gens.insert(self.gen(&z, *l, o));
                    }
                }
                self.closure(gens)
            }
        }
    }

    fn gen(&self, z: &BTreeSet<usize>, l: usize, o: &MonoOutcome) -> MonoOutcome {
        let mut zeroed = self.id();
        for &i in z {
            zeroed[i] = MonoVal::Zero;
        }
        let p = self.apply(&o.state, &zeroed);
        let m = &o.matrix;
        if !(0..self.n).all(|i| z.contains(&i) || m.diag(i)) {
            return Outcome { state: p, matrix: m.clone() };
        }
        let mut out = p.clone();
        for &i in z {
            if m.diag(i) {
                out[i] = self.dom.mul(&p[i], &p[l]);
            }
        }
        Outcome { state: out, matrix: m.gen_matrix() }
    }

    /// Closure under sequential composition, including the identity pair.
    fn closure(&self, s: MonoSet) -> MonoSet {
        let mut all = MonoSet::from([Outcome { state: self.id(), matrix: DFMatrix::identity(self.n) }]);
        let mut work: Vec<MonoOutcome> = Vec::new();
        for o in s {
            if all.insert(o.clone()) {
                work.push(o);
            }
        }
        while let Some(x) = work.pop() {
            let mut fresh = Vec::new();
            for y in &all {
                fresh.push(self.then(&x, y));
                fresh.push(self.then(y, &x));
            }
            for f in fresh {
                if all.insert(f.clone()) {
                    work.push(f);
                }
            }
        }
        all
    }
}

/// Degree vectors a variable can attain as a single monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Attainable {
    pub vectors: BTreeSet<Vec<u32>>,
    /// Some outcome exceeded the cap or came from havoc.
    pub unbounded: bool,
}

/// Degree vectors of variable `j` over all outcomes. Core programs use the
/// equational route; programs with reset or havoc use the interpreter.
pub fn attainable_monomials(prog: &Program, j: usize, cap: u64) -> Result<Attainable, AnalysisError> {
    let n = prog.n();
    if j >= n {
        return Err(AnalysisError::InvalidQuery(format!("variable index {} out of range", j + 1)));
    }
    let outs: Vec<MonoOutcome> = if prog.body.uses_extension() {
        ev_mm(prog, cap, EngineConfig::default())
    } else {
        sem_m(prog, cap)?.into_iter().collect()
    };
    let mut res = Attainable::default();
    for o in outs {
        match &o.state[j] {
            MonoVal::Mono(m) => {
                res.vectors.insert(m.exponents(n));
            }
            MonoVal::Star => res.unbounded = true,
            _ => {}
        }
    }
    Ok(res)
}

/// A monomial state evaluated at a univariate state.
pub fn at_univariate(s: &[MonoVal], u: &[UniVal], limit: u32) -> Vec<UniVal> {
    let dom = UniDomain { limit };
    s.iter()
        .map(|v| match v {
            MonoVal::Zero => UniVal::Zero,
            MonoVal::DZero => UniVal::DZero,
            MonoVal::Star => UniVal::Star,
            MonoVal::Mono(m) => {
                m.vars().fold(UniVal::Ord(0), |acc, (i, e)| (0..e).fold(acc, |a, _| dom.mul(&a, &u[i])))
            }
        })
        .collect()
}
