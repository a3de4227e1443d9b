pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] fairfilter::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("no connected sample after {attempts} attempts")]
    Disconnected { attempts: usize },
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("training sample holds no positive node")]
    EmptyPrior,
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("thread pool: {0}")]
    Pool(String),
}
