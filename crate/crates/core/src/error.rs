use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value violates an operation's input contract (mismatched alphabets,
    /// a nondeterministic automaton where a DFA is required, ...).
    #[error("input error: {0}")]
    Input(String),

    /// Malformed automaton file.
    #[error("nfa parse error at line {line}: {message}")]
    NfaParse { line: usize, message: String },

    /// Malformed regular expression.
    #[error("regex parse error at position {position}: {message}")]
    RegexParse { position: usize, message: String },

    /// Malformed DIMACS CNF input.
    #[error("dimacs parse error at line {line}: {message}")]
    DimacsParse { line: usize, message: String },

    /// The instance exceeds a configured resource bound (alphabet or state
    /// caps of the exponential algorithms, table sizes, ...).
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
