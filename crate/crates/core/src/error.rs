use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` already carries a loop")]
    SecondLoop(String),

    #[error("player index {player} out of range 1..={players}")]
    PlayerOutOfRange { player: usize, players: usize },
    #[error("a positional structure needs at least one player")]
    NoPlayers,
    #[error("non-terminal vertex `{0}` has no owner")]
    MissingOwner(String),
    #[error("terminal vertex `{0}` cannot have an owner")]
    OwnerOnTerminal(String),
    #[error("owner map covers {got} vertices, digraph has {expected}")]
    OwnerMapSize { expected: usize, got: usize },
    #[error("two components produce the same outcome name `{0}`")]
    DuplicateOutcome(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("operation requires a two-person structure, got {0} players")]
    NotTwoPerson(usize),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("utility is not zero-sum: u1 + u2 differs between outcomes `{0}` and `{1}`")]
    NotZeroSum(String, String),
    #[error("utility does not match the structure: {0}")]
    UtilityShape(String),

    #[error("enumeration needs {needed} profiles, cap is {cap}")]
    CapExceeded { needed: u64, cap: u64 },
    #[error("component exit to `{0}` has no value")]
    UnvaluedExit(String),
    #[error("{0} outcomes are too many for exhaustive partition enumeration")]
    TooManyOutcomes(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Io(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
