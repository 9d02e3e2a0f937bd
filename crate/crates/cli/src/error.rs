use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{msg} at position {pos}")]
    Parse { pos: usize, msg: String },
    #[error("{file}:{line}: {msg}")]
    Presentation { file: String, line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] ncham_core::Error),
}

impl CliError {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        CliError::Parse { pos, msg: msg.into() }
    }

    /// 1 for a mathematical negative, 2 for anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        use ncham_core::Error as E;
        match self {
            CliError::Core(E::NotHamiltonian(_) | E::Singular(_) | E::NotClosed | E::InconsistentDerivation(_)) => 1,
            _ => 2,
        }
    }
}
