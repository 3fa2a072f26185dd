//! Boolean programs and their compilation into degree queries: a Boolean
//! program terminates exactly when the compiled program's output reaches
//! degree `2k`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::BoolProgramError;
use crate::lang::{Command, Program};

/// One instruction. Variables are 0-based; locations run over `0..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolInstr {
    Not(usize),
    If { var: usize, then_loc: usize, else_loc: usize },
}

/// Instructions at locations `1..=m` over `k` variables, all initially false.
/// Location 0 halts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolProgram {
    pub k: usize,
    pub instrs: Vec<BoolInstr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolRun {
    Terminates {
        steps: u64,
        store: Vec<bool>,
    },
    /// A configuration repeated, or the budget ran out first.
    Runs {
        steps: u64,
    },
}

impl BoolRun {
    pub fn terminates(&self) -> bool {
        matches!(self, BoolRun::Terminates { .. })
    }
}

impl BoolProgram {
    pub fn new(k: usize, instrs: Vec<BoolInstr>) -> Result<Self, BoolProgramError> {
        let b = BoolProgram { k, instrs };
        b.check()?;
        Ok(b)
    }

    pub fn m(&self) -> usize {
        self.instrs.len()
    }

    fn check(&self) -> Result<(), BoolProgramError> {
        let m = self.m();
        if m == 0 {
            return Err(BoolProgramError::Malformed { loc: 0, msg: "program has no instructions".into() });
        }
        for (idx, ins) in self.instrs.iter().enumerate() {
            let loc = idx + 1;
            let bad = |msg: String| Err(BoolProgramError::Malformed { loc, msg });
            let var = match ins {
                BoolInstr::Not(v) => *v,
                BoolInstr::If { var, .. } => *var,
            };
            if var >= self.k {
                return bad(format!("variable B{} out of range", var + 1));
            }
            if let BoolInstr::If { then_loc, else_loc, .. } = *ins {
                if then_loc > m || else_loc > m {
                    return bad("jump target out of range".into());
                }
                if then_loc == else_loc || then_loc == loc || else_loc == loc {
                    return bad("locations must be pairwise distinct".into());
                }
            }
        }
        Ok(())
    }

    /// Runs from location 1 with every variable false.
    pub fn run(&self, step_budget: u64) -> BoolRun {
        let m = self.m();
        let mut loc = 1;
        let mut store = vec![false; self.k];
        let mut seen = HashSet::new();
        let mut steps = 0;
        while loc != 0 {
            if steps >= step_budget || !seen.insert((loc, store.clone())) {
                return BoolRun::Runs { steps };
            }
            loc = match self.instrs[loc - 1] {
                BoolInstr::Not(v) => {
                    store[v] = !store[v];
                    (loc + 1) % (m + 1)
                }
                BoolInstr::If { var, then_loc, else_loc } => {
                    if store[var] {
                        then_loc
                    } else {
                        else_loc
                    }
                }
            };
            steps += 1;
        }
        BoolRun::Terminates { steps, store }
    }

    /// Appends a reset block so that a terminating run ends with every variable
    /// false. Only variables that some instruction negates get a block.
    pub fn normalize(&self) -> BoolProgram {
        let mut flipped: Vec<usize> =
            self.instrs.iter().filter_map(|i| if let BoolInstr::Not(v) = i { Some(*v) } else { None }).collect();
        flipped.sort_unstable();
        flipped.dedup();
        if flipped.is_empty() {
            return self.clone();
        }
        let start = self.m() + 1;
        let redirect = |l: usize| if l == 0 { start } else { l };
        let mut instrs: Vec<BoolInstr> = self
            .instrs
            .iter()
            .map(|i| match *i {
                BoolInstr::If { var, then_loc, else_loc } => {
                    BoolInstr::If { var, then_loc: redirect(then_loc), else_loc: redirect(else_loc) }
                }
                other => other,
            })
            .collect();
        let last = flipped.len() - 1;
        for (t, &v) in flipped.iter().enumerate() {
            let at = start + 2 * t;
            let next = if t == last { 0 } else { at + 2 };
            instrs.push(BoolInstr::If { var: v, then_loc: at + 1, else_loc: next });
            instrs.push(BoolInstr::Not(v));
        }
        BoolProgram { k: self.k, instrs }
    }
}

impl fmt::Display for BoolProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.k)?;
        for (idx, ins) in self.instrs.iter().enumerate() {
            match ins {
                BoolInstr::Not(v) => writeln!(f, "{}: not B{}", idx + 1, v + 1)?,
                BoolInstr::If { var, then_loc, else_loc } => {
                    writeln!(f, "{}: if B{} goto {} else {}", idx + 1, var + 1, then_loc, else_loc)?
                }
            }
        }
        Ok(())
    }
}

impl FromStr for BoolProgram {
    type Err = BoolProgramError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let mut k = None;
        let mut instrs = Vec::new();
        for (ln, raw) in src.lines().enumerate() {
            let line = ln + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: &str| BoolProgramError::Syntax { line, msg: msg.into() };
            let words: Vec<&str> = text.split_whitespace().collect();
            if k.is_none() {
                match words.as_slice() {
                    ["k", n] => k = Some(n.parse::<usize>().map_err(|_| err("bad variable count"))?),
                    _ => return Err(err("expected header `k <count>`")),
                }
                continue;
            }
            let (label, rest) = text.split_once(':').ok_or_else(|| err("expected `<location>: <instruction>`"))?;
            let label: usize = label.trim().parse().map_err(|_| err("bad location label"))?;
            if label != instrs.len() + 1 {
                return Err(err("locations must be numbered 1, 2, … in order"));
            }
            let var = |w: &str| -> Result<usize, BoolProgramError> {
                let idx: usize = w
                    .strip_prefix('B')
                    .or_else(|| w.strip_prefix('b'))
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| err("expected a variable B<i>"))?;
                idx.checked_sub(1).ok_or_else(|| err("variables are numbered from 1"))
            };
            let loc = |w: &str| w.parse::<usize>().map_err(|_| err("bad jump target"));
            let words: Vec<&str> = rest.split_whitespace().collect();
            let ins = match words.as_slice() {
                ["not", v] => BoolInstr::Not(var(v)?),
                ["if", v, "goto", a, "else", b] => BoolInstr::If { var: var(v)?, then_loc: loc(a)?, else_loc: loc(b)? },
                _ => return Err(err("expected `not B<i>` or `if B<i> goto <l> else <l>`")),
            };
            instrs.push(ins);
        }
        let k = k.ok_or(BoolProgramError::Syntax { line: 1, msg: "missing header `k <count>`".into() })?;
        BoolProgram::new(k, instrs)
    }
}

/// A degree query: does `program`'s variable `query_var` reach degree `degree`
/// from the all-`x` state?
#[derive(Clone, Debug)]
pub struct DegInstance {
    pub program: Program,
    pub query_var: usize,
    pub degree: u32,
}

/// Index of the variable recording "at location `loc`, `B_var` had value `val`".
pub fn sim_var(k: usize, loc: usize, var: usize, val: bool) -> usize {
    2 + (loc * k + var) * 2 + usize::from(val)
}

/// Compiles `b` as given; it should already end with every variable false.
pub fn compile(b: &BoolProgram) -> DegInstance {
    let (k, m) = (b.k, b.m());
    let n = 2 + 2 * k * (m + 1);
    let x = |l, i, v| sim_var(k, l, i, v);
    let mut init = Vec::new();
    for l in 0..=m {
        for i in 0..k {
            for v in [false, true] {
                init.push(if l == 1 && !v { Command::mul(x(l, i, v), 0, 0) } else { Command::copy(x(l, i, v), 0) });
            }
        }
    }
    let branches = b.instrs.iter().enumerate().map(|(idx, ins)| {
        let l = idx + 1;
        let mut cmds = Vec::new();
        match *ins {
            BoolInstr::Not(i) => {
                let next = (l + 1) % (m + 1);
                for j in 0..k {
                    for v in [false, true] {
                        let src = if j == i { !v } else { v };
                        cmds.push(Command::copy(x(next, j, v), x(l, j, src)));
                    }
                }
            }
            BoolInstr::If { var: i, then_loc, else_loc } => {
                cmds.push(Command::copy(x(then_loc, i, false), 0));
                cmds.push(Command::copy(x(then_loc, i, true), x(l, i, true)));
                cmds.push(Command::copy(x(else_loc, i, true), 0));
                cmds.push(Command::copy(x(else_loc, i, false), x(l, i, false)));
                for j in (0..k).filter(|&j| j != i) {
                    for v in [false, true] {
                        cmds.push(Command::copy(x(then_loc, j, v), x(l, j, v)));
                        cmds.push(Command::copy(x(else_loc, j, v), x(l, j, v)));
                    }
                }
            }
        }
        Command::seq_all(cmds)
    });
    let looped = Command::looped(0, Command::choose_all(branches));
    let finals: Vec<usize> = (0..k).map(|i| x(0, i, false)).collect();
    let product = match finals.as_slice() {
        [] => Command::Skip,
        [only] => Command::copy(1, *only),
        [a, rest @ ..] => {
            let mut cmds = vec![Command::mul(1, *a, rest[0])];
            cmds.extend(rest[1..].iter().map(|&r| Command::mul(1, 1, r)));
            Command::seq_all(cmds)
        }
    };
    let body = Command::seq_all(vec![Command::seq_all(init), looped, product]);
    DegInstance { program: Program::new(n, body), query_var: 1, degree: 2 * k as u32 }
}

/// Normalizes, then compiles.
pub fn reduce(b: &BoolProgram) -> DegInstance {
    compile(&b.normalize())
}
