//! Frequency-domain filtering: kernel application with decimation and
//! zero-phase bandpass filtering.

use num_complex::Complex;

use super::fft::{fft_in_place, fold_spectrum, ifft_in_place};
use super::pad::reflect_pad;
use super::DspError;
use crate::num::Real;
use crate::signal::{Signal, Spectrum};

/// Applies a frequency-domain kernel to every channel and decimates the
/// result by `factor` (circular convolution followed by sample picking,
/// both fused in the frequency domain).
pub fn filter_decimate<T: Real>(
    signal: &Signal<T>,
    kernel_hat: &Spectrum<T>,
    factor: usize,
) -> Result<Signal<T>, DspError> {
    if factor == 0 {
        return Err(DspError::ZeroFactor);
    }
    let n = signal.num_samples();
    if !n.is_power_of_two() {
        return Err(DspError::NotPowerOfTwo(n));
    }
    if kernel_hat.len() != n {
        return Err(DspError::KernelMismatch {
            kernel: kernel_hat.len(),
            signal: n,
        });
    }
    if n % factor != 0 {
        return Err(DspError::FactorDoesNotDivide { factor, len: n });
    }

    let mut out = Vec::with_capacity(signal.num_channels());
    for ch in signal.channels() {
        let mut buf: Vec<Complex<T>> = ch.iter().map(|&v| Complex::new(v, T::zero())).collect();
        fft_in_place(&mut buf);
        for (b, k) in buf.iter_mut().zip(kernel_hat.bins()) {
            *b *= *k;
        }
        let mut folded = if factor > 1 { fold_spectrum(&buf, factor) } else { buf };
        ifft_in_place(&mut folded);
        out.push(folded.into_iter().map(|v| v.re).collect());
    }
    Ok(Signal::from_processed(
        out,
        signal.sample_rate() / factor as u32,
        signal.kind(),
    ))
}

/// Real, symmetric magnitude response of a bandpass with raised-cosine
/// transitions placed inside the band edges. Unity in the passband, exactly
/// zero outside `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub struct BandResponse {
    pub lo_hz: f64,
    pub hi_hz: f64,
    pub transition_hz: f64,
}

impl BandResponse {
    /// Transition width: 5% of Nyquist, capped at a quarter of the band.
    pub fn for_band(lo_hz: f64, hi_hz: f64, sample_rate: u32) -> Self {
        let nyquist = sample_rate as f64 / 2.0;
        let transition_hz = (0.05 * nyquist).min((hi_hz - lo_hz) / 4.0);
        Self {
            lo_hz,
            hi_hz,
            transition_hz,
        }
    }

    pub fn magnitude(&self, freq_hz: f64) -> f64 {
        let f = freq_hz.abs();
        let w = self.transition_hz;
        if f < self.lo_hz || f > self.hi_hz {
            0.0
        } else if f < self.lo_hz + w {
            let t = (f - self.lo_hz) / w;
            0.5 * (1.0 - (std::f64::consts::PI * t).cos())
        } else if f > self.hi_hz - w {
            let t = (self.hi_hz - f) / w;
            0.5 * (1.0 - (std::f64::consts::PI * t).cos())
        } else {
            1.0
        }
    }
}

/// Applies a real symmetric magnitude response `|H(f)|` to every channel
/// with zero phase shift. The signal is reflection-padded by `pad` samples
/// on each side before the transform, and the pad is cropped afterwards.
pub(crate) fn apply_zero_phase<T: Real>(
    signal: &Signal<T>,
    pad: usize,
    response: impl Fn(f64) -> f64,
) -> Signal<T> {
    let rate = signal.sample_rate() as f64;
    let n = signal.num_samples() + 2 * pad;
    // Sample the response once per bin; symmetric by construction.
    let mut gains = vec![T::zero(); n];
    for (k, g) in gains.iter_mut().enumerate() {
        let f = if k <= n / 2 {
            k as f64 * rate / n as f64
        } else {
            (n - k) as f64 * rate / n as f64
        };
        *g = T::of(response(f));
    }

    let mut out = Vec::with_capacity(signal.num_channels());
    for ch in signal.channels() {
        let padded = reflect_pad(ch, pad, pad);
        let mut buf: Vec<Complex<T>> = padded.iter().map(|&v| Complex::new(v, T::zero())).collect();
        fft_in_place(&mut buf);
        for (b, g) in buf.iter_mut().zip(&gains) {
            *b = b.scale(*g);
        }
        ifft_in_place(&mut buf);
        out.push(buf[pad..pad + signal.num_samples()].iter().map(|v| v.re).collect());
    }
    Signal::from_processed(out, signal.sample_rate(), signal.kind())
}

/// Zero-phase bandpass between `lo_hz` and `hi_hz`. The response is unity
/// inside the band with raised-cosine transitions and exactly zero outside,
/// applied in the frequency domain for a strictly zero group delay.
pub fn zero_phase_bandpass<T: Real>(
    signal: &Signal<T>,
    lo_hz: f64,
    hi_hz: f64,
) -> Result<Signal<T>, DspError> {
    let nyquist = signal.sample_rate() as f64 / 2.0;
    if !(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < nyquist) {
        return Err(DspError::InvalidBand {
            lo: lo_hz,
            hi: hi_hz,
            nyquist,
        });
    }
    let resp = BandResponse::for_band(lo_hz, hi_hz, signal.sample_rate());
    // Half the effective filter support; the response's sharpest feature is
    // the transition band.
    let pad = ((signal.sample_rate() as f64 / resp.transition_hz).ceil() as usize)
        .min(signal.num_samples());
    Ok(apply_zero_phase(signal, pad, |f| resp.magnitude(f)))
}
