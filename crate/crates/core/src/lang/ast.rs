use std::collections::BTreeSet;

use crate::error::LangError;

/// Right-hand side of an assignment. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Add(usize, usize),
    Mul(usize, usize),
}

impl Expr {
    pub fn operands(&self) -> Vec<usize> {
        match *self {
            Expr::Var(j) => vec![j],
            Expr::Add(j, k) | Expr::Mul(j, k) => vec![j, k],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Skip,
    Assign(usize, Expr),
    Seq(Box<Command>, Box<Command>),
    Choose(Box<Command>, Box<Command>),
    Loop(usize, Box<Command>),
    /// `x := 0`, only with the extension enabled.
    Reset(usize),
    /// `x := *`, only with the extension enabled.
    Havoc(usize),
}

impl Command {
    pub fn copy(i: usize, j: usize) -> Command {
        Command::Assign(i, Expr::Var(j))
    }

    pub fn add(i: usize, j: usize, k: usize) -> Command {
        Command::Assign(i, Expr::Add(j, k))
    }

    pub fn mul(i: usize, j: usize, k: usize) -> Command {
        Command::Assign(i, Expr::Mul(j, k))
    }

    pub fn seq(a: Command, b: Command) -> Command {
        Command::Seq(Box::new(a), Box::new(b))
    }

    pub fn choose(a: Command, b: Command) -> Command {
        Command::Choose(Box::new(a), Box::new(b))
    }

    pub fn looped(bound: usize, body: Command) -> Command {
        Command::Loop(bound, Box::new(body))
    }

    /// Right-nested sequence; `Skip` for an empty list.
    pub fn seq_all(cmds: impl IntoIterator<Item = Command>) -> Command {
        Self::fold_right(cmds.into_iter().collect(), Command::seq)
    }

    /// Right-nested choice; `Skip` for an empty list.
    pub fn choose_all(cmds: impl IntoIterator<Item = Command>) -> Command {
        Self::fold_right(cmds.into_iter().collect(), Command::choose)
    }

    fn fold_right(mut cmds: Vec<Command>, join: fn(Command, Command) -> Command) -> Command {
        let Some(mut acc) = cmds.pop() else {
            return Command::Skip;
        };
        while let Some(c) = cmds.pop() {
            acc = join(c, acc);
        }
        acc
    }

    /// Variables written anywhere inside the command.
    pub fn assigned_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |c| match c {
            Command::Assign(i, _) | Command::Reset(i) | Command::Havoc(i) => {
                out.insert(*i);
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Command)) {
        f(self);
        match self {
            Command::Seq(a, b) | Command::Choose(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Command::Loop(_, body) => body.visit(f),
            _ => {}
        }
    }

    pub fn any(&self, pred: impl Fn(&Command) -> bool) -> bool {
        let mut found = false;
        self.visit(&mut |c| found |= pred(c));
        found
    }

    pub fn uses_extension(&self) -> bool {
        self.any(|c| matches!(c, Command::Reset(_) | Command::Havoc(_)))
    }

    pub fn contains_add(&self) -> bool {
        self.any(|c| matches!(c, Command::Assign(_, Expr::Add(..))))
    }

    pub fn contains_loop(&self) -> bool {
        self.any(|c| matches!(c, Command::Loop(..)))
    }

    pub fn loop_depth(&self) -> usize {
        match self {
            Command::Seq(a, b) | Command::Choose(a, b) => a.loop_depth().max(b.loop_depth()),
            Command::Loop(_, body) => 1 + body.loop_depth(),
            _ => 0,
        }
    }

    /// Re-associates every sequence to the right, the shape the parser produces.
    pub fn normalize(&self) -> Command {
        match self {
            Command::Seq(..) => {
                let mut items = Vec::new();
                self.flatten_seq(&mut items);
                Command::seq_all(items.into_iter().map(Command::normalize))
            }
            Command::Choose(a, b) => Command::choose(a.normalize(), b.normalize()),
            Command::Loop(l, body) => Command::looped(*l, body.normalize()),
            other => other.clone(),
        }
    }

    pub(crate) fn flatten_seq<'a>(&'a self, out: &mut Vec<&'a Command>) {
        match self {
            Command::Seq(a, b) => {
                a.flatten_seq(out);
                b.flatten_seq(out);
            }
            other => out.push(other),
        }
    }

    /// Checks variable ranges, the loop-variable rule, and extension use.
    pub fn validate(&self, n: usize, ext: bool) -> Result<(), LangError> {
        let check = |i: usize| if i < n { Ok(()) } else { Err(LangError::VarOutOfRange { index: i, n }) };
        match self {
            Command::Skip => Ok(()),
            Command::Assign(i, e) => {
                check(*i)?;
                e.operands().into_iter().try_for_each(check)
            }
            Command::Reset(i) | Command::Havoc(i) => {
                if !ext {
                    return Err(LangError::ExtensionRequired);
                }
                check(*i)
            }
            Command::Seq(a, b) | Command::Choose(a, b) => {
                a.validate(n, ext)?;
                b.validate(n, ext)
            }
            Command::Loop(l, body) => {
                check(*l)?;
                if body.assigned_vars().contains(l) {
                    return Err(LangError::LoopVarModified(*l));
                }
                body.validate(n, ext)
            }
        }
    }
}

/// A command together with its variable names; the names fix `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub names: Vec<String>,
    pub body: Command,
}

impl Program {
    /// A program over `X1..Xn`.
    pub fn new(n: usize, body: Command) -> Self {
        Program { names: (1..=n).map(|i| format!("X{i}")).collect(), body }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn validate(&self, ext: bool) -> Result<(), LangError> {
        self.body.validate(self.n(), ext)
    }
}
