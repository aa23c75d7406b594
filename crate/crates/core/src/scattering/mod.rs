//! Two-layer wavelet scattering transform on one-second segments.
//!
//! A first filterbank of analytic Morlet wavelets decomposes the signal,
//! a modulus extracts each sub-band envelope, and a second filterbank
//! decomposes those envelopes again before everything is averaged by a
//! low-pass filter `phi` and decimated to the output frame rate. The
//! channel layout, FLOP model and processing lag are exposed alongside the
//! coefficients so that pipeline budgets can be audited.

mod config;
mod cost;
mod filterbank;
mod params;
mod paths;
mod transform;

pub use config::ScatterConfig;
pub use cost::{estimate_cost, CostReport};
pub use filterbank::{build_filterbank, littlewood_paley, Filterbank, Wavelet};
pub use paths::{enumerate_paths, Path, PathTable, ScatterOrder};
pub use transform::{scatter_segment, scatter_stream, scatter_stream_with, ScatteringOutput};

/// Errors raised by scattering configuration and execution.
#[derive(Debug, thiserror::Error)]
pub enum ScatterError {
    #[error("filters per octave must be at least 1")]
    ZeroQ,
    #[error("scale exponent must be at least 1")]
    ZeroJ,
    #[error("segment length {0} samples is not a power of two")]
    SegmentNotPowerOfTwo(usize),
    #[error("output rate {output} Hz does not divide input rate {input} Hz into a power of two")]
    BadRateRatio { input: u32, output: u32 },
    #[error(
        "averaging filter support ({support} samples) exceeds the segment ({segment} samples); \
         increase the output rate or the segment length"
    )]
    PhiExceedsSegment { support: usize, segment: usize },
    #[error("segment has {got} samples, expected {expected}")]
    SegmentLength { got: usize, expected: usize },
    #[error("scatter_segment expects a single channel, got {0}")]
    MultiChannel(usize),
    #[error("signal of {got} samples is shorter than one segment ({need})")]
    TooShort { got: usize, need: usize },
    #[error("signal rate {got} Hz does not match the configured input rate {expected} Hz")]
    RateMismatch { got: u32, expected: u32 },
}
