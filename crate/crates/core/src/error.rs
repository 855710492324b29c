use thiserror::Error;

/// Errors produced while reading the Gauss-code text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input; write `()` for the 0-chord diagram")]
    Empty,
    #[error("malformed token `{token}` at byte {offset}")]
    BadToken { token: String, offset: usize },
    #[error("label {label} is used {count} times (expected 2)")]
    LabelCount { label: u64, count: usize },
    #[error("label {label} mixes precrossing and classical tokens")]
    MixedStates { label: u64 },
    #[error("label {label} has disagreeing signs on its two visits")]
    SignMismatch { label: u64 },
    #[error("label {label} must be visited once over and once under")]
    SameSide { label: u64 },
    #[error("{0} chords exceed the supported maximum of 64")]
    TooManyChords(usize),
}

/// Errors from operations on a well-formed diagram.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown chord id {0}")]
    UnknownChord(usize),
    #[error("chord ids must be distinct")]
    SameChord,
    #[error("chord {0} is already classical")]
    AlreadyClassical(usize),
    #[error("diagram has no precrossings")]
    NoPrecrossings,
    #[error("diagram still contains precrossings")]
    HasPrecrossings,
    #[error("virtual resolution is only allowed in über mode")]
    VirtualOutsideUber,
    #[error("rotation offset {k} is out of range for {len} endpoint slots")]
    BadRotation { k: usize, len: usize },
    #[error("{0} chords exceed the supported maximum of 64")]
    TooManyChords(usize),
    #[error("shadow input required")]
    NotAShadow,
    #[error("input is not a classical (genus 0) shadow; use the general brute-force search")]
    NotClassicalShadow,
    #[error("{what} of size {size} exceeds the configured limit {limit}")]
    LimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("illegal move: {0}")]
    IllegalMove(String),
}
