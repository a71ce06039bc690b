use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported game: {0}")]
    UnsupportedGame(String),

    #[error("game tree failed validation: {0}")]
    InvalidTree(String),

    #[error("policy domain mismatch: expected {expected} action slots, got {actual}")]
    PolicyDomain { expected: usize, actual: usize },

    #[error("invalid policy at infoset {infoset}: {reason}")]
    InvalidPolicy { infoset: usize, reason: String },

    #[error("invalid player index {player} for a {num_players}-player game")]
    InvalidPlayer { player: usize, num_players: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
