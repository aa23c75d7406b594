//! Scattering transform configuration.

use serde::{Deserialize, Serialize};

use super::ScatterError;

/// Parameters of the two-layer scattering transform.
///
/// The decimation `input_rate / output_rate` fixes the averaging filter and
/// therefore the lowest wavelet bandwidth; it must be a power of two. The
/// second filterbank always uses one filter per octave.
///
/// `j` is the scale exponent carried in reports. The filter ladder itself
/// is derived from the decimation, which is the only reading under which
/// the published channel counts are reproducible for every configuration;
/// when `input_rate / 2^j != output_rate` the two disagree and the
/// decimation wins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    /// Filters per octave in the first filterbank.
    pub q: u32,
    /// Scale exponent (downsampling 2^j in the nominal parametrization).
    pub j: u32,
    /// Output frame rate in Hz.
    pub output_rate: u32,
    /// Input sample rate in Hz.
    pub input_rate: u32,
    /// Segment duration in seconds; segments are processed independently.
    pub segment_seconds: f64,
}

impl ScatterConfig {
    /// One-second-segment configuration.
    pub fn new(q: u32, j: u32, output_rate: u32, input_rate: u32) -> Result<Self, ScatterError> {
        Self {
            q,
            j,
            output_rate,
            input_rate,
            segment_seconds: 1.0,
        }
        .validated()
    }

    /// Standard audio frontend: 16384 Hz input.
    pub fn audio(q: u32, output_rate: u32) -> Result<Self, ScatterError> {
        let input = 16384;
        Self::new(q, (input / output_rate).ilog2(), output_rate, input)
    }

    /// Standard EEG frontend: 128 Hz input.
    pub fn eeg(q: u32, output_rate: u32) -> Result<Self, ScatterError> {
        let input = 128;
        Self::new(q, (input / output_rate).ilog2(), output_rate, input)
    }

    pub fn with_segment_seconds(mut self, seconds: f64) -> Result<Self, ScatterError> {
        self.segment_seconds = seconds;
        self.validated()
    }

    fn validated(self) -> Result<Self, ScatterError> {
        if self.q == 0 {
            return Err(ScatterError::ZeroQ);
        }
        if self.j == 0 {
            return Err(ScatterError::ZeroJ);
        }
        let n = self.input_rate as f64 * self.segment_seconds;
        if n <= 0.0 || n.fract() != 0.0 || !(n as usize).is_power_of_two() {
            return Err(ScatterError::SegmentNotPowerOfTwo(n.max(0.0) as usize));
        }
        if self.output_rate == 0
            || self.input_rate % self.output_rate != 0
            || !(self.input_rate / self.output_rate).is_power_of_two()
            || self.input_rate == self.output_rate
        {
            return Err(ScatterError::BadRateRatio {
                input: self.input_rate,
                output: self.output_rate,
            });
        }
        let support = 8 * self.decimation();
        if support > self.segment_len() {
            return Err(ScatterError::PhiExceedsSegment {
                support,
                segment: self.segment_len(),
            });
        }
        Ok(self)
    }

    /// Samples per segment (a power of two).
    pub fn segment_len(&self) -> usize {
        (self.input_rate as f64 * self.segment_seconds) as usize
    }

    /// Decimation factor `input_rate / output_rate` (a power of two).
    pub fn decimation(&self) -> usize {
        (self.input_rate / self.output_rate) as usize
    }

    /// Output frames produced per segment.
    pub fn frames_per_segment(&self) -> usize {
        self.segment_len() / self.decimation()
    }

    /// Processing lag: half the averaging-filter support.
    pub fn lag_seconds(&self) -> f64 {
        4.0 / self.output_rate as f64
    }
}
