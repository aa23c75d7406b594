//! EEG side of the conventional pipeline: mean re-reference, zero-phase
//! 1-32 Hz bandpass, decimation to 64 Hz.

use super::BaselineError;
use crate::dsp::{resample_pow2, zero_phase_bandpass};
use crate::num::Real;
use crate::signal::Signal;

/// Standard montage size expected by the pipeline.
pub const EEG_CHANNELS: usize = 64;

/// Dataset-specific artifact suppression slot. The toolkit itself ships
/// only the pass-through; real recordings bring their own method.
pub trait ArtifactStage<T>: Sync {
    fn apply(&self, eeg: Signal<T>) -> Signal<T>;
    fn name(&self) -> &'static str;
}

pub struct NoArtifactRemoval;

impl<T> ArtifactStage<T> for NoArtifactRemoval {
    fn apply(&self, eeg: Signal<T>) -> Signal<T> {
        eeg
    }
    fn name(&self) -> &'static str {
        "none"
    }
}

/// Subtracts the instantaneous mean over channels from every channel.
/// Idempotent: re-referencing twice equals re-referencing once.
pub fn re_reference<T: Real>(eeg: &Signal<T>) -> Signal<T> {
    let n_ch = eeg.num_channels();
    let inv = T::one() / T::of(n_ch as f64);
    let mut out: Vec<Vec<T>> = eeg.channels().to_vec();
    for i in 0..eeg.num_samples() {
        let mut mean = T::zero();
        for ch in out.iter() {
            mean += ch[i];
        }
        mean *= inv;
        for ch in out.iter_mut() {
            ch[i] -= mean;
        }
    }
    Signal::from_processed(out, eeg.sample_rate(), eeg.kind())
}

/// The standard EEG pipeline for 64-channel recordings.
pub fn eeg_baseline<T: Real>(eeg: &Signal<T>) -> Result<Signal<T>, BaselineError> {
    eeg_baseline_with(eeg, &NoArtifactRemoval, false)
}

/// Pipeline with an artifact-suppression stage and an escape hatch for
/// nonstandard montages.
pub fn eeg_baseline_with<T: Real>(
    eeg: &Signal<T>,
    artifacts: &dyn ArtifactStage<T>,
    allow_any_channels: bool,
) -> Result<Signal<T>, BaselineError> {
    if !allow_any_channels && eeg.num_channels() != EEG_CHANNELS {
        return Err(BaselineError::ChannelCount {
            got: eeg.num_channels(),
            expected: EEG_CHANNELS,
        });
    }
    let referenced = artifacts.apply(re_reference(eeg));
    let banded = zero_phase_bandpass(&referenced, 1.0, 32.0)?;
    Ok(resample_pow2(&banded, 64)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::SignalKind;

    fn sine(freq: f64, rate: u32, n: usize, amp: f64) -> Vec<f64> {
        (0..n)
            .map(|i| amp * (2.0 * std::f64::consts::PI * freq * i as f64 / rate as f64).sin())
            .collect()
    }

    fn sine_fit_amplitude(x: &[f64], freq: f64, rate: u32) -> f64 {
        let w = 2.0 * std::f64::consts::PI * freq / rate as f64;
        let (mut ss, mut sc) = (0.0, 0.0);
        for (i, &v) in x.iter().enumerate() {
            ss += v * (w * i as f64).sin();
            sc += v * (w * i as f64).cos();
        }
        let half = x.len() as f64 / 2.0;
        ((ss / half).powi(2) + (sc / half).powi(2)).sqrt()
    }

    #[test]
    fn common_mode_is_removed_entirely() {
        let common = sine(7.0, 128, 512, 1.0);
        let sig = Signal::new(vec![common; 64], 128, SignalKind::Eeg).unwrap();
        let out = eeg_baseline(&sig).unwrap();
        assert_eq!(out.num_channels(), 64);
        assert_eq!(out.sample_rate(), 64);
        for c in 0..64 {
            assert!(out.channel(c).iter().all(|v| v.abs() < 1e-10));
        }
    }

    #[test]
    fn single_channel_component_follows_the_closed_form() {
        let rate = 128;
        let n = 1024;
        let common = sine(3.0, rate, n, 0.5);
        let private = sine(10.0, rate, n, 1.0);
        let mut chans = vec![common.clone(); 64];
        for (a, b) in chans[5].iter_mut().zip(&private) {
            *a += b;
        }
        let sig = Signal::new(chans, rate, SignalKind::Eeg).unwrap();
        let referenced = re_reference(&sig);
        // Channel 5 keeps (1 - 1/64) of its private sine, everyone else
        // carries -1/64 of it; the common mode disappears exactly.
        for c in 0..64 {
            let expect = if c == 5 { 63.0 / 64.0 } else { 1.0 / 64.0 };
            let amp = sine_fit_amplitude(referenced.channel(c), 10.0, rate);
            assert!(
                (amp - expect).abs() < 1e-9,
                "channel {c}: {amp} vs {expect}"
            );
            let common_left = sine_fit_amplitude(referenced.channel(c), 3.0, rate);
            assert!(common_left < 1e-9);
        }
    }

    #[test]
    fn line_noise_attenuated_by_40_db() {
        let rate = 128;
        let n = 2048;
        let mut chans: Vec<Vec<f64>> = Vec::new();
        for c in 0..64 {
            let mut x = sine(50.0, rate, n, 1.0);
            // Distinct per-channel content so re-referencing keeps the noise.
            for (i, v) in x.iter_mut().enumerate() {
                *v *= if c % 2 == 0 { 1.0 } else { -1.0 };
                *v += 0.1 * (2.0 * std::f64::consts::PI * 9.0 * i as f64 / rate as f64).sin();
            }
            chans.push(x);
        }
        let sig = Signal::new(chans, rate, SignalKind::Eeg).unwrap();
        let out = eeg_baseline(&sig).unwrap();
        // 50 Hz is above the 32 Hz output Nyquist; verify it is gone from
        // the pre-decimation band: fit at the aliased position too.
        for c in [0usize, 1, 63] {
            let residual = sine_fit_amplitude(out.channel(c), 14.0, 64);
            assert!(residual < 0.01, "channel {c}: {residual}");
            let kept = sine_fit_amplitude(out.channel(c), 9.0, 64);
            assert!((kept - 0.1).abs() < 0.002, "channel {c}: kept {kept}");
        }
    }

    #[test]
    fn re_reference_is_idempotent() {
        let mut chans = Vec::new();
        for c in 0..8 {
            chans.push(sine(2.0 + c as f64, 128, 256, 1.0 + 0.1 * c as f64));
        }
        let sig = Signal::new(chans, 128, SignalKind::Eeg).unwrap();
        let once = re_reference(&sig);
        let twice = re_reference(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn channel_count_guard_with_override() {
        let sig = Signal::new(vec![vec![0.0; 256]; 8], 128, SignalKind::Eeg).unwrap();
        assert!(matches!(
            eeg_baseline(&sig),
            Err(BaselineError::ChannelCount { got: 8, .. })
        ));
        assert!(eeg_baseline_with(&sig, &NoArtifactRemoval, true).is_ok());
    }
}
