use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown instruction `{0}`")]
    UnknownInstruction(String),
    #[error("unknown instruction set `{0}`")]
    UnknownSet(String),
    #[error("unknown environment `{0}`")]
    UnknownEnvironment(String),
    #[error("invalid instruction set: {0}")]
    InvalidSet(String),
    #[error("invalid genome: {0}")]
    InvalidGenome(String),
    #[error("invalid config at `{path}`: {msg}")]
    Config { path: String, msg: String },
    #[error("world already seeded")]
    AlreadySeeded,
    #[error("no ancestor available for instruction set `{0}`")]
    MissingAncestor(String),
    #[error("mismatched environments: {0} vs {1}")]
    MismatchedEnvironments(String, String),
    #[error("malformed csv {file}: {msg}")]
    Csv { file: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
