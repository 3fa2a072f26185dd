//! Brute-force concrete semantics, used as a test oracle.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::Zero;

use super::ast::{Command, Expr, Program};
use crate::error::ExecError;

pub type ConcreteState = Vec<BigUint>;

#[derive(Clone, Copy, Debug)]
pub struct ExecConfig {
    /// Each loop runs at most `min(bound value, iter_budget)` times.
    pub iter_budget: u64,
    /// Havoc picks every value in `0..=havoc_max`.
    pub havoc_max: u64,
    /// Largest state set any sub-command may produce.
    pub limit: usize,
}

impl ExecConfig {
    pub fn with_budget(iter_budget: u64) -> Self {
        ExecConfig { iter_budget, ..ExecConfig::default() }
    }
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig { iter_budget: u64::MAX, havoc_max: 3, limit: 200_000 }
    }
}

type StateSet = BTreeSet<ConcreteState>;

struct Exec {
    cfg: ExecConfig,
    memo: HashMap<(*const Command, ConcreteState), Rc<StateSet>>,
}

/// All final states reachable from `s`, with every loop's iteration count capped.
pub fn enumerate_executions(prog: &Program, s: &[BigUint], cfg: ExecConfig) -> Result<StateSet, ExecError> {
    if s.len() != prog.n() {
        return Err(ExecError::StateLength { got: s.len(), n: prog.n() });
    }
    let mut ex = Exec { cfg, memo: HashMap::new() };
    let out = ex.run(&prog.body, s.to_vec())?;
    Ok(Rc::try_unwrap(out).unwrap_or_else(|rc| (*rc).clone()))
}

/// Maximum of `var` over all executions.
pub fn worst_case(prog: &Program, s: &[BigUint], cfg: ExecConfig, var: usize) -> Result<BigUint, ExecError> {
    let states = enumerate_executions(prog, s, cfg)?;
    Ok(states.iter().map(|t| t[var].clone()).max().unwrap_or_default())
}

/// Convenience wrapper for small machine-integer states.
pub fn worst_case_u64(prog: &Program, s: &[u64], cfg: ExecConfig, var: usize) -> Result<BigUint, ExecError> {
    let s: Vec<BigUint> = s.iter().map(|&v| BigUint::from(v)).collect();
    worst_case(prog, &s, cfg, var)
}

impl Exec {
    fn check(&self, set: StateSet) -> Result<Rc<StateSet>, ExecError> {
        if set.len() > self.cfg.limit {
            return Err(ExecError::BudgetBlowup { limit: self.cfg.limit });
        }
        Ok(Rc::new(set))
    }

    fn run(&mut self, c: &Command, s: ConcreteState) -> Result<Rc<StateSet>, ExecError> {
        let key = (c as *const Command, s);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(Rc::clone(hit));
        }
        let s = key.1.clone();
        let out = match c {
            Command::Skip => Rc::new(BTreeSet::from([s])),
            Command::Assign(i, e) => {
                let mut t = s.clone();
                t[*i] = match *e {
                    Expr::Var(j) => s[j].clone(),
                    Expr::Add(j, k) => &s[j] + &s[k],
                    Expr::Mul(j, k) => &s[j] * &s[k],
                };
                Rc::new(BTreeSet::from([t]))
            }
            Command::Reset(i) => {
                let mut t = s;
                t[*i] = BigUint::zero();
                Rc::new(BTreeSet::from([t]))
            }
            Command::Havoc(i) => {
                let set = (0..=self.cfg.havoc_max)
                    .map(|v| {
                        let mut t = s.clone();
                        t[*i] = BigUint::from(v);
                        t
                    })
                    .collect();
                Rc::new(set)
            }
            Command::Seq(a, b) => {
                let mid = self.run(a, s)?;
                let mut set = BTreeSet::new();
                for t in mid.iter() {
                    set.extend(self.run(b, t.clone())?.iter().cloned());
                }
                self.check(set)?
            }
            Command::Choose(a, b) => {
                let mut set = (*self.run(a, s.clone())?).clone();
                set.extend(self.run(b, s)?.iter().cloned());
                self.check(set)?
            }
            Command::Loop(l, body) => {
                let bound = iterations(&s[*l], self.cfg.iter_budget);
                let mut all = BTreeSet::from([s.clone()]);
                let mut frontier = BTreeSet::from([s]);
                for _ in 0..bound {
                    let mut next = BTreeSet::new();
                    for t in &frontier {
                        next.extend(self.run(body, t.clone())?.iter().cloned());
                    }
                    // A state seen earlier already had at least as many iterations left.
                    next.retain(|t| !all.contains(t));
                    if next.is_empty() {
                        break;
                    }
                    all.extend(next.iter().cloned());
                    if all.len() > self.cfg.limit {
                        return Err(ExecError::BudgetBlowup { limit: self.cfg.limit });
                    }
                    frontier = next;
                }
                Rc::new(all)
            }
        };
        self.memo.insert(key, Rc::clone(&out));
        Ok(out)
    }
}

fn iterations(bound: &BigUint, budget: u64) -> u64 {
    let digits = bound.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0].min(budget),
        _ => budget,
    }
}
