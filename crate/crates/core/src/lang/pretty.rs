use std::fmt::Write;

use super::ast::{Command, Expr, Program};

impl Program {
    /// Source text with a `vars` header; parses back to the normalized AST.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        if !self.names.is_empty() {
            let _ = writeln!(out, "vars {};", self.names.join(", "));
        }
        write_cmd(&mut out, &self.body, &self.names, 0);
        out
    }

    /// Source text on a single line, without header.
    pub fn to_inline(&self) -> String {
        inline(&self.body, &self.names)
    }
}

fn name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("X{}", i + 1))
}

fn atom(c: &Command, names: &[String]) -> Option<String> {
    let n = |i| name(names, i);
    Some(match c {
        Command::Skip => "skip".into(),
        Command::Assign(i, Expr::Var(j)) => format!("{} := {}", n(*i), n(*j)),
        Command::Assign(i, Expr::Add(j, k)) => format!("{} := {} + {}", n(*i), n(*j), n(*k)),
        Command::Assign(i, Expr::Mul(j, k)) => format!("{} := {} * {}", n(*i), n(*j), n(*k)),
        Command::Reset(i) => format!("{} := 0", n(*i)),
        Command::Havoc(i) => format!("{} := *", n(*i)),
        _ => return None,
    })
}

fn write_cmd(out: &mut String, c: &Command, names: &[String], indent: usize) {
    let pad = "  ".repeat(indent);
    let mut items = Vec::new();
    c.flatten_seq(&mut items);
    for (idx, item) in items.iter().enumerate() {
        let sep = if idx + 1 < items.len() { ";" } else { "" };
        if let Some(a) = atom(item, names) {
            let _ = writeln!(out, "{pad}{a}{sep}");
            continue;
        }
        match item {
            Command::Loop(l, body) => {
                let _ = writeln!(out, "{pad}loop {} {{", name(names, *l));
                write_cmd(out, body, names, indent + 1);
                let _ = writeln!(out, "{pad}}}{sep}");
            }
            Command::Choose(a, b) => {
                let _ = writeln!(out, "{pad}choose {{");
                write_cmd(out, a, names, indent + 1);
                let _ = writeln!(out, "{pad}}} or {{");
                write_cmd(out, b, names, indent + 1);
                let _ = writeln!(out, "{pad}}}{sep}");
            }
            _ => unreachable!("sequences are flattened"),
        }
    }
}

fn inline(c: &Command, names: &[String]) -> String {
    if let Some(a) = atom(c, names) {
        return a;
    }
    match c {
        Command::Seq(a, b) => format!("{}; {}", inline(a, names), inline(b, names)),
        Command::Loop(l, body) => format!("loop {} {{ {} }}", name(names, *l), inline(body, names)),
        Command::Choose(a, b) => format!("choose {{ {} }} or {{ {} }}", inline(a, names), inline(b, names)),
        _ => unreachable!(),
    }
}
