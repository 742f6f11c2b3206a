use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid word token `{0}`")]
    BadToken(String),

    #[error("letter `{letter}` is out of range for a surface of genus {genus} with {marked} marked points")]
    LetterOutOfRange {
        letter: String,
        genus: usize,
        marked: usize,
    },

    #[error("empty word")]
    EmptyWord,

    #[error("word contains marked-point letter `{0}`")]
    MarkedLetter(String),

    #[error("invalid permutation for `{gen}`: {reason}")]
    InvalidPermutation { gen: String, reason: String },

    #[error("representation does not send the surface relator to the identity")]
    RelatorNotTrivial,

    #[error("cover disconnected: monodromy is not transitive")]
    Disconnected,

    #[error(
        "cover is not regular; deck transformations are only available for abelian regular covers"
    )]
    NotRegular,

    #[error("unsupported curve type `{0}`")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
