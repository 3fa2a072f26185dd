use thiserror::Error;

/// Failure to read one of the textual formats (polynomials, AMPs, matrices).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}`: {reason}")]
pub struct TextError {
    pub input: String,
    pub reason: String,
}

impl TextError {
    pub fn new(input: &str, reason: &str) -> Self {
        TextError { input: input.to_string(), reason: reason.to_string() }
    }
}

/// Errors raised by the program parser and validity checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("loop variable `{var}` of the loop at {line}:{col} is assigned inside its body")]
    LoopVarAssigned { var: String, line: usize, col: usize },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("`{what}` at {line}:{col} requires the reset/havoc extension")]
    ExtensionDisabled { what: String, line: usize, col: usize },
    #[error("variable index {index} out of range for {n} variables")]
    VarOutOfRange { index: usize, n: usize },
    #[error("loop variable x{} is assigned inside its body", .0 + 1)]
    LoopVarModified(usize),
    #[error("reset/havoc used without the extension flag")]
    ExtensionRequired,
}

/// Errors raised by the abstract analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("x{} grows super-polynomially", .0 + 1)]
    SuperPolyDetected(usize),
    #[error("AMP is not iterative")]
    NotIterative,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("polyhedron has no generating points")]
    EmptyGenerators,
    #[error("enumeration of {needed} weight vectors exceeds the budget of {budget}")]
    BoundTooLarge { needed: u128, budget: u128 },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

/// Errors raised by the concrete interpreter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("execution set exceeded {limit} states")]
    BudgetBlowup { limit: usize },
    #[error("initial state has {got} values, program has {n} variables")]
    StateLength { got: usize, n: usize },
}

/// Errors raised while reading or compiling Boolean programs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolProgramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("instruction {loc}: {msg}")]
    Malformed { loc: usize, msg: String },
}
