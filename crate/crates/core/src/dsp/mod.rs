//! Deterministic DSP primitives shared by all frontends.
//!
//! Everything here is a pure function of its inputs: no shared mutable
//! state, safe to call concurrently per channel or per segment.

mod fft;
mod filt;
mod pad;
mod resample;

pub use fft::{fft, ifft};
pub use filt::{filter_decimate, zero_phase_bandpass, BandResponse};
pub use pad::{reflect_index, reflect_pad};
pub use resample::resample_pow2;

pub(crate) use fft::ifft_in_place;

/// Errors raised by the DSP primitives.
#[derive(Debug, thiserror::Error)]
pub enum DspError {
    #[error("input length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("kernel has {kernel} bins but the segment FFT size is {signal}")]
    KernelMismatch { kernel: usize, signal: usize },
    #[error("decimation factor {factor} does not divide segment length {len}")]
    FactorDoesNotDivide { factor: usize, len: usize },
    #[error("decimation factor must be positive")]
    ZeroFactor,
    #[error("invalid band edges: require 0 < {lo} < {hi} < {nyquist} (Nyquist)")]
    InvalidBand { lo: f64, hi: f64, nyquist: f64 },
    #[error("target rate must be positive")]
    ZeroTargetRate,
    #[error("upsampling from {from} Hz to {to} Hz exceeds the 4x single-step guard")]
    UpsampleTooLarge { from: u32, to: u32 },
    #[error("signal too short: {len} samples, need at least {need}")]
    TooShort { len: usize, need: usize },
}
