use super::ast::{Command, Program};

/// Result of [`instrument_counter`]: the new program and the indices it introduced.
#[derive(Clone, Debug)]
pub struct Instrumented {
    pub program: Program,
    pub counter: usize,
    /// Variable used as the increment; the caller must start it at 1.
    pub unit: usize,
}

/// Adds a counter that is bumped on entry to every node matching `mark`.
///
/// The language has no constants, so the increment is `counter := counter + unit`.
/// With `unit = None` a fresh helper variable is appended for that purpose.
pub fn instrument_counter(prog: &Program, mark: &dyn Fn(&Command) -> bool, unit: Option<usize>) -> Instrumented {
    let n = prog.n();
    let counter = n;
    let mut names = prog.names.clone();
    names.push(fresh(&names, "cnt"));
    let unit = match unit {
        Some(u) => u,
        None => {
            names.push(fresh(&names, "one"));
            n + 1
        }
    };
    let body = walk(&prog.body, mark, counter, unit);
    Instrumented { program: Program { names, body }, counter, unit }
}

fn fresh(names: &[String], base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while names.contains(&name) {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

fn walk(c: &Command, mark: &dyn Fn(&Command) -> bool, counter: usize, unit: usize) -> Command {
    let inner = match c {
        Command::Seq(a, b) => Command::seq(walk(a, mark, counter, unit), walk(b, mark, counter, unit)),
        Command::Choose(a, b) => Command::choose(walk(a, mark, counter, unit), walk(b, mark, counter, unit)),
        Command::Loop(l, body) => Command::looped(*l, walk(body, mark, counter, unit)),
        other => other.clone(),
    };
    if mark(c) {
        Command::seq(Command::add(counter, counter, unit), inner)
    } else {
        inner
    }
}
