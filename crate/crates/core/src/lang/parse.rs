use std::collections::HashMap;

use super::ast::{Command, Program};
use crate::error::LangError;

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `x := 0` and `x := *`.
    pub ext: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Assign,
    Semi,
    Comma,
    LBrace,
    RBrace,
    Plus,
    Star,
    Zero,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, LangError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: tl, col: tc });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            ':' if chars.get(i + 1) == Some(&'=') => push(Tok::Assign, 2, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '0' if !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric() || *c == '_') => {
                push(Tok::Zero, 1, &mut i, &mut col)
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Ident(word), line: tl, col: tc });
            }
            other => {
                return Err(LangError::Syntax { line, col, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["vars", "skip", "loop", "choose", "or"];

/// Parses a program. Without a `vars` header, names of the form `X<k>` map to
/// index `k`; any other naming assigns indices by first occurrence.
pub fn parse(src: &str, opts: ParseOptions) -> Result<Program, LangError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, opts, names: Vec::new(), index: HashMap::new(), fixed: false };
    p.header()?;
    if !p.fixed {
        p.numbered_names();
    }
    let body = p.command()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(Program { names: p.names, body })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    opts: ParseOptions,
    names: Vec<String>,
    index: HashMap<String, usize>,
    fixed: bool,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, LangError> {
        Err(LangError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, LangError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            self.error(&t, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == word)
    }

    fn ident(&mut self) -> Result<(String, Token), LangError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => Ok((w.clone(), t)),
            other => self.error(&t, format!("expected a variable, found {}", describe(other))),
        }
    }

    fn header(&mut self) -> Result<(), LangError> {
        if !self.is_keyword("vars") {
            return Ok(());
        }
        self.next();
        loop {
            let (name, t) = self.ident()?;
            if self.index.contains_key(&name) {
                return self.error(&t, format!("variable `{name}` declared twice"));
            }
            self.index.insert(name.clone(), self.names.len());
            self.names.push(name);
            if self.peek().tok == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::Semi, "`;` after the variable list")?;
        self.fixed = true;
        Ok(())
    }

    /// If every identifier is `X<k>` (or `x<k>`) with `k >= 1`, declares `X1..Xmax`.
    fn numbered_names(&mut self) {
        let mut max = 0;
        for t in &self.tokens {
            if let Tok::Ident(w) = &t.tok {
                if KEYWORDS.contains(&w.as_str()) {
                    continue;
                }
                match numbered(w) {
                    Some(k) => max = max.max(k),
                    None => return,
                }
            }
        }
        for k in 1..=max {
            self.index.insert(format!("X{k}"), k - 1);
            self.index.insert(format!("x{k}"), k - 1);
            self.names.push(format!("X{k}"));
        }
        self.fixed = max > 0;
    }

    fn var(&mut self) -> Result<(usize, Token), LangError> {
        let (name, t) = self.ident()?;
        if let Some(&i) = self.index.get(&name) {
            return Ok((i, t));
        }
        if self.fixed {
            return Err(LangError::UnknownVariable { name, line: t.line, col: t.col });
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok((i, t))
    }

    fn command(&mut self) -> Result<Command, LangError> {
        let mut items = vec![self.simple()?];
        while self.peek().tok == Tok::Semi {
            self.next();
            if matches!(self.peek().tok, Tok::RBrace | Tok::Eof) {
                break;
            }
            items.push(self.simple()?);
        }
        Ok(Command::seq_all(items))
    }

    fn block(&mut self) -> Result<Command, LangError> {
        self.expect(Tok::LBrace, "`{`")?;
        let c = self.command()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(c)
    }

    fn simple(&mut self) -> Result<Command, LangError> {
        if self.is_keyword("skip") {
            self.next();
            return Ok(Command::Skip);
        }
        if self.is_keyword("loop") {
            let at = self.next();
            let (bound, _) = self.var()?;
            let body = self.block()?;
            if body.assigned_vars().contains(&bound) {
                return Err(LangError::LoopVarAssigned { var: self.names[bound].clone(), line: at.line, col: at.col });
            }
            return Ok(Command::looped(bound, body));
        }
        if self.is_keyword("choose") {
            self.next();
            let mut arms = vec![self.block()?];
            if !self.is_keyword("or") {
                let t = self.peek().clone();
                return self.error(&t, "expected `or`");
            }
            while self.is_keyword("or") {
                self.next();
                arms.push(self.block()?);
            }
            return Ok(Command::choose_all(arms));
        }
        let (target, _) = self.var()?;
        self.expect(Tok::Assign, "`:=`")?;
        self.rhs(target)
    }

    fn rhs(&mut self, target: usize) -> Result<Command, LangError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Zero | Tok::Star => {
                self.next();
                if !self.opts.ext {
                    let what = if t.tok == Tok::Zero { "0" } else { "*" };
                    return Err(LangError::ExtensionDisabled { what: what.into(), line: t.line, col: t.col });
                }
                Ok(if t.tok == Tok::Zero { Command::Reset(target) } else { Command::Havoc(target) })
            }
            _ => {
                let (j, _) = self.var()?;
                match self.peek().tok {
                    Tok::Plus => {
                        self.next();
                        let (k, _) = self.var()?;
                        Ok(Command::add(target, j, k))
                    }
                    Tok::Star => {
                        self.next();
                        let (k, _) = self.var()?;
                        Ok(Command::mul(target, j, k))
                    }
                    _ => Ok(Command::copy(target, j)),
                }
            }
        }
    }
}

fn numbered(w: &str) -> Option<usize> {
    let digits = w.strip_prefix('X').or_else(|| w.strip_prefix('x'))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(w) => format!("`{w}`"),
        Tok::Assign => "`:=`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Comma => "`,`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Star => "`*`".into(),
        Tok::Zero => "`0`".into(),
        Tok::Eof => "end of input".into(),
    }
}
