//! Univariate evaluation: attainable degrees of each variable when every input
//! is a power of a single variable `x`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closure::{classify, linear_doubling, ClosureConfig, GrowthClass};
use crate::engine::{Domain, Engine, EngineConfig, Outcome, UniDomain, UniVal};
use crate::error::AnalysisError;
use crate::lang::{Command, Program};
use crate::matrix::DFMatrix;
use crate::poly::{AbsPoly, Amp};

pub type UniState = Vec<UniVal>;

/// Degree ceiling used by the evaluators when none is requested.
pub const DEFAULT_LIMIT: u32 = 64;

/// All outcomes of `c` from `s`, with degrees clamped at `limit`.
pub fn ev_m(c: &Command, n: usize, s: &[UniVal], limit: u32, cfg: EngineConfig) -> Vec<Outcome<UniVal>> {
    Engine::new(UniDomain { limit }, n, cfg).run(c, s)
}

/// Outcomes of zero or more passes through `body`.
pub fn ev_star(body: &Command, n: usize, s: &[UniVal], limit: u32) -> Vec<Outcome<UniVal>> {
    Engine::new(UniDomain { limit }, n, EngineConfig::default()).star(body, s)
}

/// All outcomes of `loop X<l> { body }` from `s`.
pub fn ev_oast(body: &Command, l: usize, n: usize, s: &[UniVal], limit: u32) -> Vec<Outcome<UniVal>> {
    ev_m(&Command::looped(l, body.clone()), n, s, limit, EngineConfig::default())
}

/// One generalization step. `entry` is the state the round started from.
pub fn gen(z: &BTreeSet<usize>, l: usize, entry: &[UniVal], o: &Outcome<UniVal>, limit: u32) -> Outcome<UniVal> {
    Engine::new(UniDomain { limit }, entry.len(), EngineConfig::default()).gen(z, l, entry, o)
}

/// Value of an abstract polynomial at a univariate state.
pub fn eval_poly(p: &AbsPoly, x: &[UniVal], limit: u32) -> UniVal {
    let dom = UniDomain { limit };
    if p.is_saturated() {
        return UniVal::Star;
    }
    let mut best: Option<UniVal> = None;
    for m in p.monomials() {
        let v = m.vars().fold(UniVal::Ord(0), |acc, (i, e)| (0..e).fold(acc, |a, _| dom.mul(&a, &x[i])));
        best = Some(match best {
            None => v,
            Some(b) => join(b, v),
        });
    }
    best.unwrap_or(UniVal::Zero)
}

/// Componentwise value of an AMP at a univariate state.
pub fn eval_amp(p: &Amp, x: &[UniVal], limit: u32) -> UniState {
    p.entries().iter().map(|e| eval_poly(e, x, limit)).collect()
}

fn join(a: UniVal, b: UniVal) -> UniVal {
    use UniVal::*;
    match (a, b) {
        (Star, _) | (_, Star) => Star,
        (Ord(x), Ord(y)) => Ord(x.max(y)),
        (Ord(x), _) | (_, Ord(x)) => Ord(x),
        (DZero, DZero) => DZero,
        _ => Zero,
    }
}

/// Componentwise maximal states.
pub fn maximal_states(states: impl IntoIterator<Item = UniState>) -> Vec<UniState> {
    let eng = Engine::new(UniDomain { limit: u32::MAX }, 0, EngineConfig::default());
    eng.maximal(states.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniAnswer {
    pub answer: bool,
    /// Set when the classifier proved the variable super-polynomial.
    pub unbounded: bool,
    pub witness: Option<Outcome<UniVal>>,
    /// Set when the reduced zeroing family was used, so a negative answer may be wrong.
    pub heuristic_used: bool,
}

fn meets(v: &UniVal, d: u32) -> bool {
    match v {
        UniVal::Ord(x) => *x >= d,
        UniVal::Star => true,
        _ => false,
    }
}

fn clamp(v: UniVal, limit: u32) -> UniVal {
    match v {
        UniVal::Ord(x) => UniVal::Ord(x.min(limit)),
        other => other,
    }
}

fn check_init(prog: &Program, init: &[UniVal], j: usize) -> Result<(), AnalysisError> {
    let n = prog.n();
    if init.len() != n {
        return Err(AnalysisError::Dimension(init.len(), n));
    }
    if j >= n {
        return Err(AnalysisError::InvalidQuery(format!("variable index {} out of range", j + 1)));
    }
    if init.contains(&UniVal::Zero) {
        return Err(AnalysisError::InvalidQuery("initial state must be positive".into()));
    }
    Ok(())
}

/// Can variable `j` reach degree at least `d` from `init`?
pub fn decide_univariate(
    prog: &Program,
    init: &[UniVal],
    j: usize,
    d: u32,
    cfg: EngineConfig,
) -> Result<UniAnswer, AnalysisError> {
    check_init(prog, init, j)?;
    let adds_in_loop = prog.body.any(|c| matches!(c, Command::Loop(_, b) if b.contains_add()));
    if adds_in_loop && !linear_doubling(prog).is_empty() {
        let cls = classify(prog, &ClosureConfig::masked());
        if cls.classes[j] == GrowthClass::SuperPoly {
            return Ok(UniAnswer { answer: true, unbounded: true, witness: None, heuristic_used: false });
        }
    }
    let limit = d.max(1);
    let init: UniState = init.iter().map(|v| clamp(*v, limit)).collect();
    let mut eng = Engine::new(UniDomain { limit }, prog.n(), EngineConfig { prune: true, ..cfg });
    let states = eng.run_states(&prog.body, &init);
    let answer = states.iter().any(|s| meets(&s[j], d));
    Ok(UniAnswer { answer, unbounded: false, witness: None, heuristic_used: eng.heuristic_used })
}

/// A maximal attainable state whose entry `j` has degree at least `d`, with its matrix.
pub fn generate_univariate(
    prog: &Program,
    init: &[UniVal],
    j: usize,
    d: u32,
    cfg: EngineConfig,
) -> Result<Option<Outcome<UniVal>>, AnalysisError> {
    check_init(prog, init, j)?;
    let untracked = EngineConfig { prune: true, ..cfg };
    let mut probe = Engine::new(UniDomain { limit: d.max(1) }, prog.n(), untracked);
    let clamped: UniState = init.iter().map(|v| clamp(*v, d.max(1))).collect();
    if !probe.run_states(&prog.body, &clamped).iter().any(|s| meets(&s[j], d)) {
        return Ok(None);
    }
    let limit = d.max(1).max(init.iter().filter_map(UniVal::degree).max().unwrap_or(0));
    // A pruned tracked run is much cheaper and usually keeps a witness.
    for prune in [true, false] {
        let mut eng = Engine::new(UniDomain { limit }, prog.n(), EngineConfig { prune, ..cfg });
        let outs = eng.run(&prog.body, init);
        let good: Vec<&Outcome<UniVal>> = outs.iter().filter(|o| meets(&o.state[j], d)).collect();
        let maxi = eng.maximal(good.iter().map(|o| o.state.clone()).collect());
        if let Some(s) = maxi.first() {
            return Ok(good.iter().find(|o| &o.state == s).map(|o| (*o).clone()));
        }
    }
    Ok(None)
}

/// One nondeterministic run, resolving every choice with a seeded generator.
pub fn random_walk(prog: &Program, init: &[UniVal], limit: u32, seed: u64) -> Outcome<UniVal> {
    let mut w = Walker { dom: UniDomain { limit }, n: prog.n(), rng: ChaCha8Rng::seed_from_u64(seed) };
    let (state, matrix) = w.walk(&prog.body, init.to_vec());
    Outcome { state, matrix }
}

struct Walker {
    dom: UniDomain,
    n: usize,
    rng: ChaCha8Rng,
}

impl Walker {
    fn walk(&mut self, c: &Command, s: UniState) -> (UniState, DFMatrix) {
        match c {
            Command::Seq(a, b) => {
                let (t, m1) = self.walk(a, s);
                let (u, m2) = self.walk(b, t);
                (u, m1.mul(&m2))
            }
            Command::Choose(a, b) => {
                if self.rng.gen_bool(0.5) {
                    self.walk(a, s)
                } else {
                    self.walk(b, s)
                }
            }
            _ => {
                let outs = Engine::new(self.dom, self.n, EngineConfig::default()).run(c, &s);
                let pick = outs.choose(&mut self.rng).expect("every command has an outcome");
                (pick.state.clone(), pick.matrix.clone())
            }
        }
    }
}
