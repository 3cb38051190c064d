use thiserror::Error;

use crate::latin::LatinError;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {letter} is outside the alphabet of size {alphabet_size}")]
    LetterOutOfRange { letter: usize, alphabet_size: usize },

    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("morphism over {alphabet_size} letters was given {images} images")]
    ImageCountMismatch { alphabet_size: usize, images: usize },

    #[error("image of letter {letter} is empty")]
    EmptyImage { letter: usize },

    #[error("morphism is not prolongable on letter {letter}: {reason}")]
    NotProlongable { letter: usize, reason: &'static str },

    #[error("iterate length exceeds 2^62 letters")]
    LengthOverflow,

    #[error("tiling requires every image to have the same length")]
    UnsupportedTiling,

    #[error("tiling must start at the beginning of the stream (stream is at position {position})")]
    MisalignedStream { position: u64 },

    #[error("offset {offset} is outside [1, {step}]")]
    OffsetOutOfRange { offset: usize, step: usize },

    #[error("column {column} is outside [1, {order}]")]
    ColumnOutOfRange { column: usize, order: usize },

    #[error("invalid order {0}")]
    InvalidOrder(usize),

    #[error("order-1 squares have the overlapping fixed point 111..., certification needs n >= 2")]
    DegenerateOrder,

    #[error("prefix length {length} is shorter than the tile length {order}")]
    PrefixTooShort { length: usize, order: usize },

    #[error("detector reported an overlap at start {start} with period {period} that does not check out")]
    UncertifiedWitness { start: usize, period: usize },

    #[error("latin square: {0}")]
    Latin(#[from] LatinError),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
