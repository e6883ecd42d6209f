use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol {symbol:?} is not in the alphabet {alphabet:?}")]
    InvalidSymbol { symbol: char, alphabet: String },
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generator {0} is the empty word")]
    EmptyWord(usize),
    #[error("graph is not irreducible")]
    NotIrreducible,
    #[error("not a generator: {0}")]
    NotAGenerator(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("part {0} is not an allowed block")]
    PartNotAllowed(usize),
    #[error("part {index} has length {actual}, expected {expected}")]
    BadLength { index: usize, expected: usize, actual: usize },
    #[error("nothing found within budget {0}")]
    NotFoundInBudget(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
