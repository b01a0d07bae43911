use thiserror::Error;

/// Every failure the library can report. Variants are grouped so the CLI can
/// map each to a stable exit code: capacity, integrity, authentication, usage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("key material must be exactly 24 octets, got {actual}")]
    WrongKeyLength { actual: usize },

    #[error("ciphertext length {actual} is not a positive multiple of 8")]
    BadCiphertextLength { actual: usize },

    #[error("padding check failed: wrong secret key or corrupted ciphertext")]
    BadPadding,

    #[error("passphrase must not be empty")]
    EmptyPassphrase,

    #[error("plaintext of {actual} octets exceeds the envelope limit")]
    PlaintextTooLarge { actual: usize },

    #[error("envelope CRC mismatch: payload corrupted (stored {stored:08x}, computed {computed:08x})")]
    CrcMismatch { stored: u32, computed: u32 },

    #[error("not an envelope: bad magic bytes")]
    BadMagic,

    #[error("unsupported envelope version {actual}")]
    BadVersion { actual: u8 },

    #[error("envelope truncated: need {needed} octets, have {available}")]
    TruncatedEnvelope { needed: usize, available: usize },

    #[error("envelope length field is invalid ({ct_len})")]
    BadLengthField { ct_len: u32 },

    #[error("payload of {payload} octets exceeds cover capacity of {capacity} octets")]
    PayloadTooLarge { payload: usize, capacity: usize },

    #[error("no embedded payload found in image")]
    NoFrameFound,

    #[error("embedded frame truncated: declares {declared} payload octets but image holds {available}")]
    TruncatedFrame { declared: usize, available: usize },

    #[error("image shapes differ: {a_width}x{a_height}x{a_channels} vs {b_width}x{b_height}x{b_channels}")]
    ShapeMismatch {
        a_width: u32,
        a_height: u32,
        a_channels: u8,
        b_width: u32,
        b_height: u32,
        b_channels: u8,
    },

    #[error("unsupported channel count {channels}: images must be RGB or RGBA")]
    BadChannelCount { channels: u8 },

    #[error("sample buffer length {actual} does not match {width}x{height}x{channels}")]
    BadSampleCount {
        width: u32,
        height: u32,
        channels: u8,
        actual: usize,
    },
}
