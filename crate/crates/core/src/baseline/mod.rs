//! Conventional preprocessing: mean re-referencing, 1-32 Hz bandpass and
//! 64 Hz decimation for EEG, and the auditory-inspired gammatone envelope
//! for audio.

mod eeg;
mod gammatone;

pub use eeg::{eeg_baseline, eeg_baseline_with, re_reference, ArtifactStage, NoArtifactRemoval, EEG_CHANNELS};
pub use gammatone::{
    erb_bandwidth_hz, erb_number, erb_number_inverse, estimate_baseline_cost, gammatone_compressed_sum,
    gammatone_envelope, EnvelopeConfig, GammatoneBank,
};

use crate::dsp::DspError;

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("gammatone envelope expects a single audio channel, got {0}")]
    NotMono(usize),
    #[error("sample rate {rate} Hz too low for the {top} Hz analysis band")]
    RateTooLow { rate: u32, top: f64 },
    #[error("expected {expected} EEG channels, got {got} (use the override to accept)")]
    ChannelCount { got: usize, expected: usize },
    #[error("invalid envelope configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Dsp(#[from] DspError),
}
