//! Fixpoint evaluator over symbolic states and data-flow matrices.
//!
//! The nondeterministic evaluation rules are determinized by collecting every
//! outcome. Loops are handled by repeated rounds: pick a set `Z` of variables to
//! zero, run the body any number of times, then apply the generalization step.

mod values;

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

pub use values::{Domain, MonoDomain, MonoVal, UniDomain, UniVal};

use crate::lang::{Command, Expr};
use crate::matrix::DFMatrix;

/// A final state with its linear data-flow matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Outcome<V> {
    pub state: Vec<V>,
    pub matrix: DFMatrix,
}

/// Which zeroing sets a loop round may choose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZPolicy {
    /// Subsets of the variables the body assigns; a reduced family above `zmax`.
    Assigned,
    /// Every subset of all variables.
    All,
}

#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    pub zpolicy: ZPolicy,
    /// Above this many candidate variables only a heuristic family of sets is
    /// tried, and completeness is lost.
    pub zmax: usize,
    /// Keep only outcomes with maximal states. Tracked runs stay sound but may
    /// miss outcomes.
    pub prune: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { zpolicy: ZPolicy::Assigned, zmax: 12, prune: false }
    }
}

type State<V> = Vec<V>;
type Out<V> = (State<V>, Option<DFMatrix>);
type MemoKey<V> = (*const Command, State<V>, bool);
type Memo<V> = HashMap<MemoKey<V>, Rc<Vec<Out<V>>>>;
type StarMemo<V> = HashMap<(*const Command, State<V>), Rc<Vec<Outcome<V>>>>;

pub struct Engine<D: Domain> {
    pub dom: D,
    pub cfg: EngineConfig,
    n: usize,
    memo: Memo<D::Val>,
    star_memo: StarMemo<D::Val>,
    /// Set when the reduced zeroing family had to be used.
    pub heuristic_used: bool,
}

impl<D: Domain> Engine<D> {
    pub fn new(dom: D, n: usize, cfg: EngineConfig) -> Self {
        Engine { dom, cfg, n, memo: HashMap::new(), star_memo: HashMap::new(), heuristic_used: false }
    }

    /// All outcomes of `c` from `s`, with matrices.
    pub fn run(&mut self, c: &Command, s: &[D::Val]) -> Vec<Outcome<D::Val>> {
        self.eval(c, s.to_vec(), true)
            .iter()
            .map(|(state, m)| Outcome { state: state.clone(), matrix: m.clone().expect("tracked run") })
            .collect()
    }

    /// Final states of `c` from `s`, without matrices; dominated states are
    /// dropped when pruning is enabled.
    pub fn run_states(&mut self, c: &Command, s: &[D::Val]) -> Vec<State<D::Val>> {
        let out = self.eval(c, s.to_vec(), false);
        let states: Vec<State<D::Val>> = out.iter().map(|(st, _)| st.clone()).collect();
        if self.cfg.prune {
            self.maximal(states)
        } else {
            states
        }
    }

    /// Outcomes of any number of passes through `body`, starting with `(s, I)`.
    pub fn star(&mut self, body: &Command, s: &[D::Val]) -> Vec<Outcome<D::Val>> {
        self.star_cached(body, s).to_vec()
    }

    fn star_cached(&mut self, body: &Command, s: &[D::Val]) -> Rc<Vec<Outcome<D::Val>>> {
        let key = (body as *const Command, s.to_vec());
        if let Some(hit) = self.star_memo.get(&key) {
            return Rc::clone(hit);
        }
        let out = Rc::new(self.star_uncached(body, s));
        self.star_memo.insert(key, Rc::clone(&out));
        out
    }

    fn star_uncached(&mut self, body: &Command, s: &[D::Val]) -> Vec<Outcome<D::Val>> {
        let n = self.n;
        let mut seen: BTreeSet<(State<D::Val>, DFMatrix)> = BTreeSet::new();
        let mut work = vec![(s.to_vec(), DFMatrix::identity(n))];
        seen.insert(work[0].clone());
        while let Some((t, m)) = work.pop() {
            let step = self.eval(body, t, true);
            for (u, nm) in step.iter() {
                let next = (u.clone(), m.mul(nm.as_ref().expect("tracked")));
                if seen.insert(next.clone()) {
                    work.push(next);
                }
            }
        }
        seen.into_iter().map(|(state, matrix)| Outcome { state, matrix }).collect()
    }

    /// The generalization step of a loop round. `entry` is the state at the start
    /// of the round, before zeroing; it decides which entries count as definitely zero.
    pub fn gen(&self, z: &BTreeSet<usize>, l: usize, entry: &[D::Val], o: &Outcome<D::Val>) -> Outcome<D::Val> {
        let (state, matrix) = self.gen_parts(z, l, entry, &o.state, &o.matrix);
        Outcome { state, matrix }
    }

    fn gen_parts(
        &self,
        z: &BTreeSet<usize>,
        l: usize,
        entry: &[D::Val],
        u: &[D::Val],
        m: &DFMatrix,
    ) -> (State<D::Val>, DFMatrix) {
        let dz = |i: usize| self.dom.is_dzero(&entry[i]);
        let ok = (0..self.n).all(|i| z.contains(&i) || dz(i) || m.diag(i));
        if !ok {
            return (u.to_vec(), m.clone());
        }
        let mut out = u.to_vec();
        for i in 0..self.n {
            if m.diag(i) && (z.contains(&i) || dz(i)) {
                out[i] = self.dom.mul(&u[i], &u[l]);
            }
        }
        (out, m.gen_matrix())
    }

    fn eval(&mut self, c: &Command, s: State<D::Val>, track: bool) -> Rc<Vec<Out<D::Val>>> {
        let key = (c as *const Command, s, track);
        if let Some(hit) = self.memo.get(&key) {
            return Rc::clone(hit);
        }
        let s = key.1.clone();
        let out = Rc::new(self.eval_uncached(c, s, track));
        self.memo.insert(key, Rc::clone(&out));
        out
    }

    fn eval_uncached(&mut self, c: &Command, s: State<D::Val>, track: bool) -> Vec<Out<D::Val>> {
        let n = self.n;
        let mat = |m: DFMatrix| if track { Some(m) } else { None };
        let set = |mut s: State<D::Val>, i: usize, v: D::Val| {
            s[i] = v;
            s
        };
        match c {
            Command::Skip => vec![(s, mat(DFMatrix::identity(n)))],
            Command::Assign(i, Expr::Var(j)) => {
                let v = s[*j].clone();
                vec![(set(s, *i, v), mat(DFMatrix::assign(n, *j, *i)))]
            }
            Command::Assign(i, Expr::Mul(j, k)) => {
                let v = self.dom.mul(&s[*j], &s[*k]);
                vec![(set(s, *i, v), mat(DFMatrix::erase(n, *i)))]
            }
            Command::Assign(i, Expr::Add(j, k)) => {
                let m = mat(DFMatrix::assign(n, *j, *i).or(&DFMatrix::assign(n, *k, *i)));
                let pick = |a: usize, b: usize| if self.dom.is_dzero(&s[a]) { s[b].clone() } else { s[a].clone() };
                let (vj, vk) = (pick(*j, *k), pick(*k, *j));
                let mut out = vec![(set(s.clone(), *i, vj.clone()), m.clone())];
                if vk != vj {
                    out.push((set(s, *i, vk), m));
                }
                out
            }
            Command::Reset(i) => {
                let v = self.dom.dzero();
                vec![(set(s, *i, v), mat(DFMatrix::erase(n, *i)))]
            }
            Command::Havoc(i) => {
                let v = self.dom.star();
                vec![(set(s, *i, v), mat(DFMatrix::erase(n, *i)))]
            }
            Command::Seq(a, b) => {
                let first = self.eval(a, s, track);
                let mut seen = BTreeSet::new();
                for (t, m1) in first.iter() {
                    let second = self.eval(b, t.clone(), track);
                    for (u, m2) in second.iter() {
                        let m = match (m1, m2) {
                            (Some(x), Some(y)) => Some(x.mul(y)),
                            _ => None,
                        };
                        seen.insert((u.clone(), m));
                    }
                }
                self.finish(seen)
            }
            Command::Choose(a, b) => {
                let mut seen: BTreeSet<Out<D::Val>> = self.eval(a, s.clone(), track).iter().cloned().collect();
                seen.extend(self.eval(b, s, track).iter().cloned());
                self.finish(seen)
            }
            Command::Loop(l, body) => {
                if self.dom.is_dzero(&s[*l]) {
                    return vec![(s, mat(DFMatrix::identity(n)))];
                }
                if !track && !body.contains_add() {
                    self.reach(body, s)
                } else {
                    self.rounds(body, *l, s, track)
                }
            }
        }
    }

    /// With pruning, keeps one outcome per maximal state; tracked runs then
    /// return a subset of the true outcomes.
    fn finish(&self, seen: BTreeSet<Out<D::Val>>) -> Vec<Out<D::Val>> {
        if !self.cfg.prune {
            return seen.into_iter().collect();
        }
        let mut keep: Vec<Out<D::Val>> = Vec::new();
        for (s, m) in seen {
            if keep.iter().any(|(k, _)| self.state_le(&s, k)) {
                continue;
            }
            keep.retain(|(k, _)| !self.state_le(k, &s));
            keep.push((s, m));
        }
        keep
    }

    /// States reachable by repeating `body`. Used for untracked loops over
    /// addition-free bodies, where only the empty zeroing set can contribute a
    /// maximal state and generalization leaves states unchanged.
    fn reach(&mut self, body: &Command, s: State<D::Val>) -> Vec<Out<D::Val>> {
        let mut seen: BTreeSet<State<D::Val>> = BTreeSet::from([s.clone()]);
        let mut work = vec![s];
        while let Some(t) = work.pop() {
            let step = self.eval(body, t, false);
            for (u, _) in step.iter() {
                if seen.contains(u) {
                    continue;
                }
                if self.cfg.prune && seen.iter().any(|v| self.state_le(u, v)) {
                    continue;
                }
                if self.cfg.prune {
                    let dominated: Vec<State<D::Val>> = seen.iter().filter(|v| self.state_le(v, u)).cloned().collect();
                    for v in dominated {
                        seen.remove(&v);
                    }
                }
                seen.insert(u.clone());
                work.push(u.clone());
            }
        }
        seen.into_iter().map(|s| (s, None)).collect()
    }

    fn rounds(&mut self, body: &Command, l: usize, s: State<D::Val>, track: bool) -> Vec<Out<D::Val>> {
        let n = self.n;
        let start: Out<D::Val> = (s, if track { Some(DFMatrix::identity(n)) } else { None });
        let mut seen: BTreeSet<Out<D::Val>> = BTreeSet::from([start.clone()]);
        let mut work = vec![start];
        let assigned = body.assigned_vars();
        while let Some((t, m)) = work.pop() {
            for z in self.zero_sets(&assigned, &t) {
                let mut t0 = t.clone();
                for &i in &z {
                    t0[i] = self.dom.zero();
                }
                for o in self.star_cached(body, &t0).iter() {
                    let (u, nm) = self.gen_parts(&z, l, &t, &o.state, &o.matrix);
                    let acc = m.as_ref().map(|m| m.mul(&nm));
                    let next = (u, acc);
                    if seen.contains(&next) {
                        continue;
                    }
                    if self.cfg.prune && seen.iter().any(|(v, _)| self.state_le(&next.0, v)) {
                        continue;
                    }
                    seen.insert(next.clone());
                    work.push(next);
                }
            }
        }
        let seen: BTreeSet<Out<D::Val>> = seen.into_iter().collect();
        self.finish(seen)
    }

    fn zero_sets(&mut self, assigned: &BTreeSet<usize>, t: &[D::Val]) -> Vec<BTreeSet<usize>> {
        let pool: Vec<usize> = match self.cfg.zpolicy {
            ZPolicy::All => (0..self.n).collect(),
            ZPolicy::Assigned => assigned.iter().copied().filter(|&i| !self.dom.is_dzero(&t[i])).collect(),
        };
        if pool.len() <= self.cfg.zmax {
            return (0u64..1 << pool.len())
                .map(|bits| pool.iter().enumerate().filter(|(b, _)| bits >> b & 1 == 1).map(|(_, &v)| v).collect())
                .collect();
        }
        self.heuristic_used = true;
        let all: BTreeSet<usize> = pool.iter().copied().collect();
        let mut out = vec![BTreeSet::new(), all.clone()];
        for &i in &pool {
            out.push(BTreeSet::from([i]));
            let mut rest = all.clone();
            rest.remove(&i);
            out.push(rest);
        }
        out
    }

    pub fn state_le(&self, a: &[D::Val], b: &[D::Val]) -> bool {
        a.iter().zip(b).all(|(x, y)| self.dom.le(x, y))
    }

    /// Maximal elements under the componentwise order.
    pub fn maximal(&self, states: Vec<State<D::Val>>) -> Vec<State<D::Val>> {
        let mut keep: Vec<State<D::Val>> = Vec::new();
        for s in states {
            if keep.iter().any(|k| self.state_le(&s, k)) {
                continue;
            }
            keep.retain(|k| !self.state_le(k, &s));
            keep.push(s);
        }
        keep.sort();
        keep
    }
}
