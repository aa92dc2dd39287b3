use thiserror::Error;

pub type Result<T> = std::result::Result<T, OpfError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpfError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Operands handed to the support calculation cannot be fused, or one of
    /// them has already been pruned.
    #[error("invalid fusion: {0}")]
    InvalidFusion(String),

    #[error("clustering index undefined: {0}")]
    UndefinedIndex(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("series {id}: {source}")]
    Series {
        id: String,
        #[source]
        source: Box<OpfError>,
    },
}

impl OpfError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        OpfError::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        OpfError::InvalidConfig(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        OpfError::Internal(msg.into())
    }

    /// True for configuration problems, including those wrapped with a series id.
    pub fn is_config(&self) -> bool {
        match self {
            OpfError::InvalidConfig(_) => true,
            OpfError::Series { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
