//! Symbolic abstract semantics: sets of AMPs, composition closure, loop
//! generalization, and the growth classifier built on top of them.

mod count;

use std::collections::BTreeSet;

use crate::error::AnalysisError;
use crate::lang::{Command, Expr, Program};
use crate::poly::{Amp, Capper, DegreeCap};

pub type AmpSet = BTreeSet<Amp>;

/// Default upper limit on the automatically chosen degree cap.
pub const DEFAULT_CEILING: u64 = 256;

#[derive(Clone, Copy, Debug)]
pub struct ClosureConfig {
    /// Explicit degree cap; `None` derives one from the program.
    pub cap: Option<DegreeCap>,
    /// Clamp for the derived cap.
    pub ceiling: u64,
    /// Replace super-polynomial variables by the saturated value instead of failing.
    pub mask: bool,
    /// Drop AMPs subsumed by another member after each loop.
    pub prune: bool,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { cap: None, ceiling: DEFAULT_CEILING, mask: false, prune: false }
    }
}

impl ClosureConfig {
    pub fn masked() -> Self {
        ClosureConfig { mask: true, ..Self::default() }
    }
}

/// Output of [`analyze`].
#[derive(Clone, Debug)]
pub struct SemResult {
    pub amps: AmpSet,
    pub cap: DegreeCap,
    /// The derived cap hit the ceiling.
    pub cap_clipped: bool,
    /// Some monomial exceeded the cap and was saturated.
    pub cap_fired: bool,
    /// Variables found to grow super-polynomially in some loop.
    pub doubling: BTreeSet<usize>,
}

/// Least superset of `s ∪ {Id}` closed under composition.
pub fn closure(s: &AmpSet, n: usize, capper: &Capper) -> AmpSet {
    let mut all = s.clone();
    all.insert(Amp::identity(n));
    let mut frontier: Vec<Amp> = all.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        let snapshot: Vec<Amp> = all.iter().cloned().collect();
        for q in &snapshot {
            for r in [p.compose(q, capper), q.compose(&p, capper)] {
                if !all.contains(&r) {
                    all.insert(r.clone());
                    frontier.push(r);
                }
            }
        }
    }
    all
}

/// Adds the generalized iterative kernel of every member.
pub fn gen_set(s: &AmpSet) -> AmpSet {
    let mut out = s.clone();
    out.extend(s.iter().map(|p| p.iterative_kernel().generalize_unchecked()));
    out
}

/// Loop summary before `t` is replaced by the bound: `Cl(Gen(Cl(S)))`.
pub fn lc_unsubstituted(s: &AmpSet, n: usize, capper: &Capper) -> AmpSet {
    closure(&gen_set(&closure(s, n, capper)), n, capper)
}

/// Loop summary for bound variable `l`.
pub fn lc(s: &AmpSet, l: usize, n: usize, capper: &Capper) -> AmpSet {
    lc_unsubstituted(s, n, capper).iter().map(|p| p.substitute_tau(l)).collect()
}

/// The older loop-summary procedure, generalizing idempotent members until stable.
pub fn sdl_legacy(s: &AmpSet, n: usize, capper: &Capper) -> AmpSet {
    let mut t = s.clone();
    loop {
        t = closure(&t, n, capper);
        let extra: Vec<Amp> = t.iter().filter(|p| p.is_idempotent()).map(Amp::generalize_idempotent).collect();
        let before = t.len();
        t.extend(extra);
        if t.len() == before {
            return t;
        }
    }
}

/// Keeps only members not strictly subsumed by another member.
pub fn prune_subsumed(s: &AmpSet) -> AmpSet {
    s.iter().filter(|p| !s.iter().any(|q| q != *p && p.subsumed_by(q) && !q.subsumed_by(p))).cloned().collect()
}

/// Program size: products count 1, loops multiply their body by `n²`.
pub fn size_measure(c: &Command, n: usize) -> u64 {
    match c {
        Command::Assign(_, Expr::Mul(..)) => 1,
        Command::Skip | Command::Assign(..) | Command::Reset(_) | Command::Havoc(_) => 0,
        Command::Choose(a, b) => size_measure(a, n).max(size_measure(b, n)),
        Command::Seq(a, b) => size_measure(a, n).saturating_add(size_measure(b, n)),
        Command::Loop(_, body) => (n as u64 * n as u64).saturating_mul(size_measure(body, n)),
    }
}

/// Variant of [`size_measure`] that also charges loops over additions, which
/// can raise the degree by one without any multiplication.
pub fn corrected_measure(c: &Command, n: usize) -> u64 {
    match c {
        Command::Assign(_, Expr::Mul(..)) => 1,
        Command::Skip | Command::Assign(..) | Command::Reset(_) | Command::Havoc(_) => 0,
        Command::Choose(a, b) => corrected_measure(a, n).max(corrected_measure(b, n)),
        Command::Seq(a, b) => corrected_measure(a, n).saturating_add(corrected_measure(b, n)),
        Command::Loop(_, body) => (n as u64 * n as u64).saturating_mul(corrected_measure(body, n).saturating_add(1)),
    }
}

/// `2^size_measure`, saturating at `u64::MAX`.
pub fn degree_bound(c: &Command, n: usize) -> u64 {
    pow2(size_measure(c, n))
}

fn pow2(e: u64) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        1 << e
    }
}

/// Cap derived from the corrected measure, clamped to `ceiling`; the flag
/// reports whether clamping happened.
pub fn default_cap(prog: &Program, ceiling: u64) -> (DegreeCap, bool) {
    let want = pow2(corrected_measure(&prog.body, prog.n()));
    if want > ceiling {
        (DegreeCap::saturate(ceiling), true)
    } else {
        (DegreeCap::saturate(want), false)
    }
}

struct Ctx<'a> {
    n: usize,
    capper: &'a Capper,
    cfg: &'a ClosureConfig,
    doubling: BTreeSet<usize>,
}

/// Full symbolic analysis of a program.
pub fn analyze(prog: &Program, cfg: &ClosureConfig) -> Result<SemResult, AnalysisError> {
    let (cap, cap_clipped) = match cfg.cap {
        Some(c) => (c, false),
        None => default_cap(prog, cfg.ceiling),
    };
    let capper = Capper::new(cap);
    let mut ctx = Ctx { n: prog.n(), capper: &capper, cfg, doubling: BTreeSet::new() };
    let (amps, _) = sem(&prog.body, &mut ctx)?;
    let doubling = ctx.doubling;
    Ok(SemResult { amps, cap, cap_clipped, cap_fired: capper.saturated() || capper.truncated(), doubling })
}

/// The set of AMPs describing the program.
pub fn sem_s(prog: &Program, cfg: &ClosureConfig) -> Result<AmpSet, AnalysisError> {
    analyze(prog, cfg).map(|r| r.amps)
}

fn sem(c: &Command, ctx: &mut Ctx<'_>) -> Result<(AmpSet, count::CountSet), AnalysisError> {
    let n = ctx.n;
    let single = |p: Amp| BTreeSet::from([p]);
    Ok(match c {
        Command::Skip => (single(Amp::identity(n)), count::atom(n, c)),
        Command::Assign(i, Expr::Var(j)) => (single(Amp::copy(n, *i, *j)), count::atom(n, c)),
        Command::Assign(i, Expr::Add(j, k)) => (single(Amp::sum(n, *i, *j, *k)), count::atom(n, c)),
        Command::Assign(i, Expr::Mul(j, k)) => (single(Amp::mul(n, *i, *j, *k)), count::atom(n, c)),
        Command::Reset(i) => (single(Amp::reset(n, *i)), count::atom(n, c)),
        Command::Havoc(i) => (single(Amp::havoc(n, *i)), count::atom(n, c)),
        Command::Seq(a, b) => {
            let (sa, ca) = sem(a, ctx)?;
            let (sb, cb) = sem(b, ctx)?;
            let amps =
                sb.iter().flat_map(|q| sa.iter().map(move |p| (q, p))).map(|(q, p)| q.compose(p, ctx.capper)).collect();
            (amps, count::product(&ca, &cb))
        }
        Command::Choose(a, b) => {
            let (mut sa, mut ca) = sem(a, ctx)?;
            let (sb, cb) = sem(b, ctx)?;
            sa.extend(sb);
            ca.extend(cb);
            (sa, ca)
        }
        Command::Loop(l, body) => {
            let (sb, cb) = sem(body, ctx)?;
            let counts = count::close(&cb, n);
            let mut bad = count::doubling(&counts);
            if !ctx.cfg.mask {
                if let Some(&v) = bad.iter().next() {
                    return Err(AnalysisError::SuperPolyDetected(v));
                }
            }
            let c1 = guarded_closure(&sb, &bad, n, ctx.capper, ctx.cfg.mask)?;
            bad.extend(c1.1);
            let c1 = c1.0;
            let summary: AmpSet = closure(&gen_set(&c1), n, ctx.capper).iter().map(|p| p.substitute_tau(*l)).collect();
            let summary = if ctx.cfg.prune { prune_subsumed(&summary) } else { summary };
            let loop_counts = count::loop_effect(&counts, &bad, n);
            ctx.doubling.extend(bad);
            (summary, loop_counts)
        }
    })
}

/// Closure of a loop body that saturates any entry found to double itself.
/// Returns the closed set and the variables that were saturated.
fn guarded_closure(
    s: &AmpSet,
    known: &BTreeSet<usize>,
    n: usize,
    capper: &Capper,
    mask: bool,
) -> Result<(AmpSet, BTreeSet<usize>), AnalysisError> {
    let mut bad = known.clone();
    let mut seed: AmpSet = s.iter().map(|p| p.saturate_entries(&bad)).collect();
    loop {
        let direct: BTreeSet<usize> = seed.iter().flat_map(Amp::doubling_violations).collect();
        if let Some(&v) = direct.iter().next() {
            if !mask {
                return Err(AnalysisError::SuperPolyDetected(v));
            }
            bad.extend(direct);
            seed = seed.iter().map(|p| p.saturate_entries(&bad)).collect();
            continue;
        }
        let mut all = seed.clone();
        all.insert(Amp::identity(n).saturate_entries(&bad));
        let mut frontier: Vec<Amp> = all.iter().cloned().collect();
        let mut found = BTreeSet::new();
        'outer: while let Some(p) = frontier.pop() {
            let snapshot: Vec<Amp> = all.iter().cloned().collect();
            for q in &snapshot {
                for r in [p.compose(q, capper), q.compose(&p, capper)] {
                    if all.contains(&r) {
                        continue;
                    }
                    let v = r.doubling_violations();
                    if !v.is_empty() {
                        if !mask {
                            return Err(AnalysisError::SuperPolyDetected(v[0]));
                        }
                        found.extend(v);
                        break 'outer;
                    }
                    all.insert(r.clone());
                    frontier.push(r);
                }
            }
        }
        if found.is_empty() {
            return Ok((all, bad.difference(known).copied().collect()));
        }
        bad.extend(found);
        seed = seed.iter().map(|p| p.saturate_entries(&bad)).collect();
    }
}

/// Growth of one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    /// Bounded by a polynomial of this degree.
    Poly(u64),
    SuperPoly,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<GrowthClass>,
    pub amps: AmpSet,
    pub cap: DegreeCap,
    pub warnings: Vec<String>,
}

impl Classification {
    pub fn super_poly(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().enumerate().filter(|(_, c)| **c == GrowthClass::SuperPoly).map(|(i, _)| i)
    }
}

/// Tags each variable as polynomially or super-polynomially bounded.
pub fn classify(prog: &Program, cfg: &ClosureConfig) -> Classification {
    let cfg = ClosureConfig { mask: true, ..*cfg };
    let res = analyze(prog, &cfg).expect("masked analysis does not fail");
    let n = prog.n();
    let classes = (0..n)
        .map(|j| {
            if res.amps.iter().any(|p| p.is_saturated_at(j)) {
                GrowthClass::SuperPoly
            } else {
                GrowthClass::Poly(res.amps.iter().filter_map(|p| p.entry(j).max_var_degree()).max().unwrap_or(0))
            }
        })
        .collect::<Vec<_>>();
    let mut warnings = Vec::new();
    if res.cap_clipped && res.cap_fired {
        warnings.push(format!(
            "degree cap clamped to {}; variables reaching it are reported as super-polynomial",
            res.cap.cap
        ));
    }
    Classification { classes, amps: res.amps, cap: res.cap, warnings }
}

/// Cheap check for additive doubling inside loops, using only path counts.
pub fn linear_doubling(prog: &Program) -> BTreeSet<usize> {
    fn walk(c: &Command, n: usize, out: &mut BTreeSet<usize>) -> count::CountSet {
        match c {
            Command::Seq(a, b) => {
                let ca = walk(a, n, out);
                count::product(&ca, &walk(b, n, out))
            }
            Command::Choose(a, b) => {
                let mut ca = walk(a, n, out);
                ca.extend(walk(b, n, out));
                ca
            }
            Command::Loop(_, body) => {
                let closed = count::close(&walk(body, n, out), n);
                let bad = count::doubling(&closed);
                out.extend(bad.iter().copied());
                count::loop_effect(&closed, &bad, n)
            }
            atom => count::atom(n, atom),
        }
    }
    let mut out = BTreeSet::new();
    walk(&prog.body, prog.n(), &mut out);
    out
}
