use thiserror::Error;

use crate::dna_codec::Quad;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // image_io
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated PGM payload: expected {expected} sample bytes, found {actual}")]
    TruncatedPayload { expected: usize, actual: usize },
    #[error("PGM payload has {extra} trailing bytes after the {expected} expected samples")]
    TrailingBytes { expected: usize, extra: usize },
    #[error("unsupported PGM maxval {0} (only 8-bit images are supported)")]
    UnsupportedMaxval(u32),

    // zigzag / shapes
    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,
    #[error("length mismatch: expected {expected} elements, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{rows}x{cols} grid is not a multiple of the {block}x{block} block size")]
    NotBlockAligned {
        rows: usize,
        cols: usize,
        block: usize,
    },

    // keystore
    #[error("FASTA input has no '>' header line")]
    NoHeader,
    #[error("FASTA input contains no residues")]
    EmptySequence,
    #[error("key sequence has {0} bases; at least 4 are required")]
    SequenceTooShort(usize),
    #[error("key sequence has {0} bases; positions must fit in 32 bits")]
    SequenceTooLong(usize),
    #[error("key sequence does not contain quad {quad} (byte value {byte}); it cannot encrypt this plaintext")]
    KeyCoverage { byte: u8, quad: Quad },
    #[error("malformed keystore file: {0}")]
    MalformedKeystore(String),

    // cipher
    #[error("ciphertext was produced under a different key (fingerprint mismatch)")]
    KeyMismatch,
    #[error("ciphertext index {index} at position {position} is outside the key sequence")]
    IndexOutOfRange { position: usize, index: u32 },
    #[error("malformed ciphertext file: {0}")]
    MalformedCiphertext(String),

    // genbank_client
    #[error("invalid fetch request: {0}")]
    InvalidRequest(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("accession not found: {0}")]
    NotFound(String),
    #[error("rate limited by the E-utilities endpoint (HTTP 429); retry with backoff")]
    RateLimited,

    // analysis
    #[error("degenerate input: a constant sequence has no defined correlation")]
    DegenerateInput,
    #[error("raster of {width}x{height} is too small for {direction} adjacency")]
    TooSmall {
        width: usize,
        height: usize,
        direction: &'static str,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
