//! ERB-spaced gammatone filterbank and the compressed-envelope audio
//! frontend: 28 analytic sub-bands, magnitude envelopes raised to 0.6 and
//! summed, bandpassed 1-32 Hz with a zero-phase Butterworth magnitude, and
//! decimated to 64 Hz.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::BaselineError;
use crate::dsp::{ifft_in_place, reflect_pad, resample_pow2};
use crate::num::Real;
use crate::scattering::CostReport;
use crate::signal::Signal;

/// ERB-number of a frequency (Glasberg-Moore scale).
pub fn erb_number(freq_hz: f64) -> f64 {
    21.4 * (1.0 + 0.00437 * freq_hz).log10()
}

/// Frequency whose ERB-number is `e`.
pub fn erb_number_inverse(e: f64) -> f64 {
    (10f64.powf(e / 21.4) - 1.0) / 0.00437
}

/// Equivalent rectangular bandwidth at a center frequency.
pub fn erb_bandwidth_hz(freq_hz: f64) -> f64 {
    24.7 * (1.0 + 0.00437 * freq_hz)
}

/// Bank of 4th-order gammatone magnitude responses with centers uniformly
/// spaced on the ERB scale.
#[derive(Debug, Clone, PartialEq)]
pub struct GammatoneBank<T> {
    centers_hz: Vec<f64>,
    lo_hz: f64,
    hi_hz: f64,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real> GammatoneBank<T> {
    /// `n_bands` centers uniformly spaced in ERB-number over `[lo, hi]`,
    /// endpoints included.
    pub fn new(n_bands: usize, lo_hz: f64, hi_hz: f64) -> Self {
        let e_lo = erb_number(lo_hz);
        let e_hi = erb_number(hi_hz);
        let centers_hz = (0..n_bands)
            .map(|i| {
                let frac = if n_bands > 1 {
                    i as f64 / (n_bands - 1) as f64
                } else {
                    0.5
                };
                erb_number_inverse(e_lo + frac * (e_hi - e_lo))
            })
            .collect();
        Self {
            centers_hz,
            lo_hz,
            hi_hz,
            _marker: std::marker::PhantomData,
        }
    }

    /// The speech-envelope reference bank: 28 bands over 50-5000 Hz.
    pub fn speech_default() -> Self {
        Self::new(28, 50.0, 5000.0)
    }

    pub fn n_bands(&self) -> usize {
        self.centers_hz.len()
    }

    pub fn centers_hz(&self) -> &[f64] {
        &self.centers_hz
    }

    /// 4th-order gammatone magnitude response of band `b`, peak 1 at the
    /// center frequency.
    pub fn magnitude(&self, b: usize, freq_hz: f64) -> f64 {
        let fc = self.centers_hz[b];
        let bw = 1.019 * erb_bandwidth_hz(fc);
        let d = (freq_hz - fc) / bw;
        (1.0 + d * d).powi(-2)
    }
}

/// Parameters of the envelope frontend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConfig {
    pub n_bands: usize,
    pub compression_exponent: f64,
    pub band_lo_hz: f64,
    pub band_hi_hz: f64,
    pub out_rate: u32,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self {
            n_bands: 28,
            compression_exponent: 0.6,
            band_lo_hz: 1.0,
            band_hi_hz: 32.0,
            out_rate: 64,
        }
    }
}

impl EnvelopeConfig {
    fn validate(&self) -> Result<(), BaselineError> {
        if !(self.compression_exponent > 0.0 && self.compression_exponent <= 1.0) {
            return Err(BaselineError::BadConfig(format!(
                "compression exponent {} outside (0, 1]",
                self.compression_exponent
            )));
        }
        if !(self.band_lo_hz > 0.0 && self.band_lo_hz < self.band_hi_hz
            && self.band_hi_hz < self.out_rate as f64 / 2.0)
        {
            return Err(BaselineError::BadConfig(format!(
                "band [{}, {}] incompatible with output rate {}",
                self.band_lo_hz, self.band_hi_hz, self.out_rate
            )));
        }
        Ok(())
    }
}

const BAND_TOP_HZ: f64 = 5000.0;

/// Sum of compressed sub-band envelopes at the input rate: the nonlinear
/// core of the envelope frontend, before the final bandpass/decimation.
/// Scales as `a^exponent` when the input scales by `a`.
pub fn gammatone_compressed_sum<T: Real>(
    audio: &Signal<T>,
    bank: &GammatoneBank<T>,
    exponent: f64,
) -> Result<Signal<T>, BaselineError> {
    if audio.num_channels() != 1 {
        return Err(BaselineError::NotMono(audio.num_channels()));
    }
    let rate = audio.sample_rate();
    if (rate as f64) < 2.0 * BAND_TOP_HZ {
        return Err(BaselineError::RateTooLow {
            rate,
            top: BAND_TOP_HZ,
        });
    }

    let x = audio.channel(0);
    let pad = (rate as usize / 4).min(x.len());
    let padded = reflect_pad(x, pad, pad);
    let n = padded.len();
    let mut spec: Vec<Complex<T>> = padded.iter().map(|&v| Complex::new(v, T::zero())).collect();
    rustfft::FftPlanner::new().plan_fft_forward(n).process(&mut spec);

    let mut sum = vec![T::zero(); x.len()];
    let exp_t = T::of(exponent);
    for b in 0..bank.n_bands() {
        // One-sided (analytic) band spectrum.
        let mut band = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, out) in band.iter_mut().enumerate().take(n / 2 + 1) {
            let f = k as f64 * rate as f64 / n as f64;
            let h = bank.magnitude(b, f);
            let scale = if k == 0 || k == n / 2 { h } else { 2.0 * h };
            *out = spec[k].scale(T::of(scale));
        }
        ifft_in_place(&mut band);
        for (acc, z) in sum.iter_mut().zip(band[pad..pad + x.len()].iter()) {
            *acc += z.norm().powf(exp_t);
        }
    }
    Ok(Signal::from_processed(vec![sum], rate, audio.kind()))
}

fn butterworth_bandpass_magnitude(f: f64, lo: f64, hi: f64) -> f64 {
    if f <= 0.0 {
        return 0.0;
    }
    let hp = 1.0 / (1.0 + (lo / f).powi(8)).sqrt();
    let lp = 1.0 / (1.0 + (f / hi).powi(8)).sqrt();
    hp * lp
}

/// The full audio-envelope frontend: analytic gammatone sub-bands,
/// magnitude envelopes compressed and summed, a zero-phase 4th-order
/// Butterworth bandpass magnitude, and decimation to the output rate.
pub fn gammatone_envelope<T: Real>(
    audio: &Signal<T>,
    cfg: &EnvelopeConfig,
) -> Result<Signal<T>, BaselineError> {
    cfg.validate()?;
    let bank = GammatoneBank::new(cfg.n_bands, 50.0, BAND_TOP_HZ);
    let summed = gammatone_compressed_sum(audio, &bank, cfg.compression_exponent)?;
    let rate = summed.sample_rate();
    let pad = ((rate as f64 / cfg.band_lo_hz).ceil() as usize).min(summed.num_samples());
    let banded = crate::dsp::apply_zero_phase(&summed, pad, |f| {
        butterworth_bandpass_magnitude(f, cfg.band_lo_hz, cfg.band_hi_hz)
    });
    Ok(resample_pow2(&banded, cfg.out_rate)?)
}

/// FLOP model for the envelope frontend on a one-second window at
/// 16384 Hz, under the crate-wide conventions (complex multiply-add = 8,
/// FFT of length L = 5 L log2 L, modulus = 4, compression = 8 per sample).
/// Per-band work is modeled with a nominal quarter-spectrum support and a
/// 2048-sample envelope block, so the band component is exactly linear in
/// the band count.
pub fn estimate_baseline_cost(n_bands: usize) -> CostReport {
    let n = 16384usize;
    let env_block = 2048usize;
    let fft = |len: usize| 5.0 * len as f64 * (len as f64).log2();

    let forward = fft(n);
    let per_band = 8.0 * (n / 4) as f64 // sparse spectral multiply
        + fft(env_block)                 // inverse FFT of the band block
        + 4.0 * env_block as f64         // modulus
        + 8.0 * env_block as f64         // compression
        + 2.0 * env_block as f64; // accumulate into the sum
    let bandpass = fft(env_block) + 8.0 * env_block as f64 + fft(env_block);
    let decimate = fft(64);

    let flops = forward + n_bands as f64 * per_band + bandpass + decimate;
    CostReport {
        flops_per_second_window: flops as u64,
        lag_seconds: 4.0 / 64.0,
        channels: (1, 0, 0, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::SignalKind;

    fn tone(freq: f64, rate: u32, secs: f64, amp: f64) -> Signal<f64> {
        let n = (rate as f64 * secs) as usize;
        let x = (0..n)
            .map(|i| amp * (2.0 * std::f64::consts::PI * freq * i as f64 / rate as f64).sin())
            .collect();
        Signal::mono(x, rate, SignalKind::Audio).unwrap()
    }

    #[test]
    fn bank_spans_the_erb_interval() {
        let bank = GammatoneBank::<f64>::speech_default();
        assert_eq!(bank.n_bands(), 28);
        let c = bank.centers_hz();
        assert!((c[0] - 50.0).abs() < 1e-6);
        assert!((c[27] - 5000.0).abs() < 1e-3);
        assert!(c.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn silence_gives_zero_envelope() {
        let sig = Signal::mono(vec![0.0; 16384], 16384, SignalKind::Audio).unwrap();
        let out = gammatone_envelope(&sig, &EnvelopeConfig::default()).unwrap();
        assert_eq!(out.sample_rate(), 64);
        assert!(out.channel(0).iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn pure_tone_matches_analytic_band_response_then_vanishes() {
        let rate = 16384;
        let amp = 0.5;
        let sig = tone(1000.0, rate, 2.0, amp);
        let bank = GammatoneBank::<f64>::speech_default();
        let summed = gammatone_compressed_sum(&sig, &bank, 0.6).unwrap();
        // Analytic oracle: per band the envelope of a steady tone is
        // amp * |H_b(1000 Hz)|.
        let expected: f64 = (0..bank.n_bands())
            .map(|b| (amp * bank.magnitude(b, 1000.0)).powf(0.6))
            .sum();
        let mid = &summed.channel(0)[rate as usize / 2..3 * rate as usize / 2];
        let mean = mid.iter().sum::<f64>() / mid.len() as f64;
        assert!(
            (mean - expected).abs() / expected < 0.01,
            "mean {mean} vs analytic {expected}"
        );

        // The final bandpass removes the DC envelope almost entirely.
        let out = gammatone_envelope(&sig, &EnvelopeConfig::default()).unwrap();
        let n = out.num_samples();
        let peak = out.channel(0)[n / 4..3 * n / 4]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(peak < 0.02 * expected, "residual {peak} vs level {expected}");
    }

    #[test]
    fn amplitude_modulation_rate_dominates_the_output() {
        let rate = 16384u32;
        let n = 4 * rate as usize;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / rate as f64;
                let carrier = (2.0 * std::f64::consts::PI * 1000.0 * t).sin();
                let env = 1.0 + 0.8 * (2.0 * std::f64::consts::PI * 4.0 * t).sin();
                env * carrier
            })
            .collect();
        let sig = Signal::mono(x, rate, SignalKind::Audio).unwrap();
        let out = gammatone_envelope(&sig, &EnvelopeConfig::default()).unwrap();
        // FFT-peak oracle on the 64 Hz output.
        let y = out.channel(0);
        let m = y.len();
        let mut best = (0.0f64, 0.0f64);
        let mut bin = 0.25;
        while bin <= 32.0 {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &v) in y.iter().enumerate() {
                let p = 2.0 * std::f64::consts::PI * bin * i as f64 / 64.0;
                re += v * p.cos();
                im += v * p.sin();
            }
            let mag = (re * re + im * im).sqrt() / m as f64;
            if mag > best.1 {
                best = (bin, mag);
            }
            bin += 0.25;
        }
        assert!((best.0 - 4.0).abs() <= 0.5, "peak at {} Hz", best.0);
    }

    #[test]
    fn compression_scaling_law() {
        let rate = 16384;
        let mut sig_small = tone(700.0, rate, 1.0, 0.2);
        let bank = GammatoneBank::<f64>::speech_default();
        let a = 3.7f64;
        let scaled: Vec<f64> = sig_small.channel(0).iter().map(|v| v * a).collect();
        let sig_big = Signal::mono(scaled, rate, SignalKind::Audio).unwrap();
        let small = gammatone_compressed_sum(&sig_small, &bank, 0.6).unwrap();
        let big = gammatone_compressed_sum(&sig_big, &bank, 0.6).unwrap();
        let factor = a.powf(0.6);
        for (s, b) in small.channel(0).iter().zip(big.channel(0)) {
            assert!(s >= &0.0);
            assert!((b - factor * s).abs() <= 1e-6 * s.abs().max(1e-9));
        }
        sig_small = tone(700.0, 8000, 1.0, 0.2);
        assert!(matches!(
            gammatone_compressed_sum(&sig_small, &bank, 0.6),
            Err(BaselineError::RateTooLow { .. })
        ));
    }

    #[test]
    fn cost_within_budget_and_linear_in_bands() {
        let full = estimate_baseline_cost(28);
        let flops = full.flops_per_second_window as f64;
        assert!(
            (2.75e6..=11e6).contains(&flops),
            "envelope model {flops:.2e} outside factor 2 of 5.5M"
        );
        let zero = estimate_baseline_cost(0);
        let one = estimate_baseline_cost(1);
        let two = estimate_baseline_cost(2);
        let band1 = one.flops_per_second_window - zero.flops_per_second_window;
        let band2 = two.flops_per_second_window - zero.flops_per_second_window;
        assert_eq!(band2, 2 * band1);
    }
}
