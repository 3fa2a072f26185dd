//! The core language: syntax, parsing, printing and concrete semantics.

mod ast;
pub mod concrete;
mod instrument;
mod parse;
mod pretty;

pub use ast::{Command, Expr, Program};
pub use concrete::{enumerate_executions, worst_case, worst_case_u64, ConcreteState, ExecConfig};
pub use instrument::{instrument_counter, Instrumented};
pub use parse::{parse, ParseOptions};
