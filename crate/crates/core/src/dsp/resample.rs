//! FFT-based resampling with a brick-wall anti-alias filter.

use num_complex::Complex;

use super::fft::{fft_in_place, ifft_in_place};
use super::pad::reflect_pad;
use super::DspError;
use crate::num::Real;
use crate::signal::Signal;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Changes the sample rate by resynthesis in the frequency domain. When
/// reducing the rate, a brick-wall low-pass with a raised-cosine transition
/// of width 5% of the target Nyquist is applied first, so no energy aliases.
///
/// Upsampling is limited to 4x per call; larger ratios are almost always a
/// parameter mistake in this pipeline.
pub fn resample_pow2<T: Real>(signal: &Signal<T>, target_rate: u32) -> Result<Signal<T>, DspError> {
    if target_rate == 0 {
        return Err(DspError::ZeroTargetRate);
    }
    let rate = signal.sample_rate();
    if target_rate == rate {
        return Ok(signal.clone());
    }
    if target_rate > 4 * rate {
        return Err(DspError::UpsampleTooLarge {
            from: rate,
            to: target_rate,
        });
    }

    // Pad with a whole number of "exchange units" so the padded length maps
    // to an integer number of output samples and the pad crops exactly.
    let unit = (rate as u64 / gcd(rate as u64, target_rate as u64)) as usize;
    let min_pad = (rate as usize / 8).max(32).min(signal.num_samples().saturating_sub(1).max(1));
    let pad = unit * min_pad.div_ceil(unit);

    let len = signal.num_samples();
    let n = len + 2 * pad;
    let m_exact = n as u128 * target_rate as u128 / rate as u128;
    let m_rem = (n as u128 * target_rate as u128) % rate as u128;
    let m = if m_rem * 2 >= rate as u128 { m_exact as usize + 1 } else { m_exact as usize };
    let pad_out = pad * target_rate as usize / rate as usize;
    let out_len = m - 2 * pad_out;

    let downsampling = target_rate < rate;
    let target_nyq = target_rate as f64 / 2.0;
    let trans = 0.05 * target_nyq;
    let gain = |f: f64| -> f64 {
        if !downsampling {
            return 1.0;
        }
        let f = f.abs();
        if f <= target_nyq - trans {
            1.0
        } else if f < target_nyq {
            let t = (target_nyq - f) / trans;
            0.5 * (1.0 - (std::f64::consts::PI * t).cos())
        } else {
            0.0
        }
    };

    let scale = T::of(m as f64 / n as f64);
    let mut out = Vec::with_capacity(signal.num_channels());
    for ch in signal.channels() {
        let padded = reflect_pad(ch, pad, pad);
        let mut buf: Vec<Complex<T>> = padded.iter().map(|&v| Complex::new(v, T::zero())).collect();
        fft_in_place(&mut buf);

        let mut resampled = vec![Complex::new(T::zero(), T::zero()); m];
        let half = m.min(n) / 2;
        for k in 0..=half {
            let f = k as f64 * rate as f64 / n as f64;
            let g = T::of(gain(f));
            if k < resampled.len() {
                resampled[k] = buf[k].scale(g);
            }
            if k > 0 && k < m - k && n - k < n {
                resampled[m - k] = buf[n - k].scale(g);
            }
        }
        // A shared Nyquist bin between the grids is split evenly.
        if m > n && n % 2 == 0 {
            let v = buf[n / 2].scale(T::of(0.5));
            resampled[n / 2] = v;
            resampled[m - n / 2] = v;
        }

        ifft_in_place(&mut resampled);
        out.push(
            resampled[pad_out..pad_out + out_len]
                .iter()
                .map(|v| v.re * scale)
                .collect(),
        );
    }
    Ok(Signal::from_processed(out, target_rate, signal.kind()))
}
