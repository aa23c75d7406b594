//! Multichannel sampled waveforms and their spectra.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::num::Real;

/// What a [`Signal`] carries. Some pipeline stages are modality-specific
/// (the gammatone envelope expects audio, re-referencing expects EEG).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    Audio,
    Eeg,
}

/// Errors raised by [`Signal`] construction.
#[derive(Debug, thiserror::Error)]
pub enum SignalError {
    #[error("sample rate must be positive")]
    ZeroRate,
    #[error("signal must have at least one channel")]
    NoChannels,
    #[error("all channels must have the same length (channel {channel} has {got}, expected {expected})")]
    RaggedChannels {
        channel: usize,
        got: usize,
        expected: usize,
    },
    #[error("non-finite sample at channel {channel}, index {index}")]
    NonFinite { channel: usize, index: usize },
}

/// A real-valued multichannel waveform with a sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    channels: Vec<Vec<T>>,
    sample_rate: u32,
    kind: SignalKind,
}

impl<T: Real> Signal<T> {
    /// Builds a signal, validating rate, channel count, equal channel
    /// lengths and finiteness of every sample.
    pub fn new(channels: Vec<Vec<T>>, sample_rate: u32, kind: SignalKind) -> Result<Self, SignalError> {
        if sample_rate == 0 {
            return Err(SignalError::ZeroRate);
        }
        if channels.is_empty() {
            return Err(SignalError::NoChannels);
        }
        let expected = channels[0].len();
        for (c, ch) in channels.iter().enumerate() {
            if ch.len() != expected {
                return Err(SignalError::RaggedChannels {
                    channel: c,
                    got: ch.len(),
                    expected,
                });
            }
            if let Some(index) = ch.iter().position(|v| !v.is_finite()) {
                return Err(SignalError::NonFinite { channel: c, index });
            }
        }
        Ok(Self {
            channels,
            sample_rate,
            kind,
        })
    }

    /// Single-channel convenience constructor.
    pub fn mono(samples: Vec<T>, sample_rate: u32, kind: SignalKind) -> Result<Self, SignalError> {
        Self::new(vec![samples], sample_rate, kind)
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn num_samples(&self) -> usize {
        self.channels[0].len()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.num_samples() as f64 / self.sample_rate as f64
    }

    pub fn channel(&self, c: usize) -> &[T] {
        &self.channels[c]
    }

    pub fn channels(&self) -> &[Vec<T>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Vec<T>> {
        self.channels
    }

    /// Rebuilds with the same rate/kind, without re-validating finiteness.
    /// For internal use by stages whose output is finite by construction.
    pub(crate) fn from_processed(channels: Vec<Vec<T>>, sample_rate: u32, kind: SignalKind) -> Self {
        debug_assert!(!channels.is_empty());
        Self {
            channels,
            sample_rate,
            kind,
        }
    }
}

/// Errors raised by [`Spectrum`] construction.
#[derive(Debug, thiserror::Error)]
pub enum SpectrumError {
    #[error("FFT size must be a power of two, got {0}")]
    NotPowerOfTwo(usize),
    #[error("declared time-domain length {length} exceeds FFT size {size}")]
    LengthExceedsSize { length: usize, size: usize },
}

/// Complex spectrum of one signal segment, tagged with the sample rate and
/// the original (pre-padding) time-domain length.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    bins: Vec<Complex<T>>,
    sample_rate: u32,
    length: usize,
}

impl<T: Real> Spectrum<T> {
    pub fn new(bins: Vec<Complex<T>>, sample_rate: u32, length: usize) -> Result<Self, SpectrumError> {
        if !bins.len().is_power_of_two() {
            return Err(SpectrumError::NotPowerOfTwo(bins.len()));
        }
        if length > bins.len() {
            return Err(SpectrumError::LengthExceedsSize {
                length,
                size: bins.len(),
            });
        }
        Ok(Self {
            bins,
            sample_rate,
            length,
        })
    }

    pub fn bins(&self) -> &[Complex<T>] {
        &self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Original time-domain length the spectrum was computed from.
    pub fn time_length(&self) -> usize {
        self.length
    }

    /// Frequency in Hz of bin `k` (negative for the upper half).
    pub fn bin_freq_hz(&self, k: usize) -> f64 {
        let n = self.bins.len();
        let rate = self.sample_rate as f64;
        if k <= n / 2 {
            k as f64 * rate / n as f64
        } else {
            (k as f64 - n as f64) * rate / n as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_invariants_enforced() {
        assert!(matches!(
            Signal::<f64>::new(vec![vec![0.0]], 0, SignalKind::Eeg),
            Err(SignalError::ZeroRate)
        ));
        assert!(matches!(
            Signal::<f64>::new(vec![], 128, SignalKind::Eeg),
            Err(SignalError::NoChannels)
        ));
        assert!(matches!(
            Signal::new(vec![vec![0.0, 1.0], vec![0.0]], 128, SignalKind::Eeg),
            Err(SignalError::RaggedChannels { channel: 1, .. })
        ));
        assert!(matches!(
            Signal::new(vec![vec![0.0, f64::NAN]], 128, SignalKind::Eeg),
            Err(SignalError::NonFinite { channel: 0, index: 1 })
        ));
        let s = Signal::new(vec![vec![0.0; 256], vec![1.0; 256]], 128, SignalKind::Eeg).unwrap();
        assert_eq!(s.num_channels(), 2);
        assert_eq!(s.num_samples(), 256);
        assert_eq!(s.duration_seconds(), 2.0);
    }

    #[test]
    fn spectrum_requires_power_of_two() {
        let bins = vec![Complex::new(0.0f64, 0.0); 12];
        assert!(matches!(
            Spectrum::new(bins, 128, 12),
            Err(SpectrumError::NotPowerOfTwo(12))
        ));
    }

    #[test]
    fn bin_freqs_wrap_negative() {
        let bins = vec![Complex::new(0.0f64, 0.0); 8];
        let sp = Spectrum::new(bins, 64, 8).unwrap();
        assert_eq!(sp.bin_freq_hz(0), 0.0);
        assert_eq!(sp.bin_freq_hz(1), 8.0);
        assert_eq!(sp.bin_freq_hz(4), 32.0);
        assert_eq!(sp.bin_freq_hz(7), -8.0);
    }
}
