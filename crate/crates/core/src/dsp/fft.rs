//! FFT wrappers with the crate's normalization conventions.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! length, so `ifft(fft(x)) == x`.

use num_complex::Complex;
use rustfft::FftPlanner;

use super::DspError;
use crate::num::Real;
use crate::signal::Spectrum;

pub(crate) fn fft_in_place<T: Real>(data: &mut [Complex<T>]) {
    FftPlanner::new().plan_fft_forward(data.len()).process(data);
}

pub(crate) fn ifft_in_place<T: Real>(data: &mut [Complex<T>]) {
    FftPlanner::new().plan_fft_inverse(data.len()).process(data);
    let scale = T::one() / T::of(data.len() as f64);
    for v in data.iter_mut() {
        *v = v.scale(scale);
    }
}

/// Forward FFT of a real segment whose length must be a power of two.
pub fn fft<T: Real>(segment: &[T], sample_rate: u32) -> Result<Spectrum<T>, DspError> {
    if !segment.len().is_power_of_two() {
        return Err(DspError::NotPowerOfTwo(segment.len()));
    }
    let mut buf: Vec<Complex<T>> = segment.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft_in_place(&mut buf);
    Ok(Spectrum::new(buf, sample_rate, segment.len()).expect("power of two checked"))
}

/// Inverse FFT returning the real part, normalized by `1/N`.
pub fn ifft<T: Real>(spectrum: &Spectrum<T>) -> Vec<T> {
    let mut buf = spectrum.bins().to_vec();
    ifft_in_place(&mut buf);
    buf.into_iter().map(|v| v.re).collect()
}

/// Folds an `N`-bin spectrum into `N/factor` bins so that the inverse FFT of
/// the result equals every `factor`-th sample of the inverse FFT of the
/// input. This is decimation performed in the frequency domain.
pub(crate) fn fold_spectrum<T: Real>(bins: &[Complex<T>], factor: usize) -> Vec<Complex<T>> {
    debug_assert_eq!(bins.len() % factor, 0);
    let m = bins.len() / factor;
    let inv = T::one() / T::of(factor as f64);
    let mut out = vec![Complex::new(T::zero(), T::zero()); m];
    for (i, &b) in bins.iter().enumerate() {
        out[i % m] += b;
    }
    for v in out.iter_mut() {
        *v = v.scale(inv);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn impulse_has_flat_spectrum() {
        let mut x = vec![0.0f64; 8];
        x[0] = 1.0;
        let sp = fft(&x, 8).unwrap();
        for b in sp.bins() {
            assert!((b.re - 1.0).abs() < 1e-12 && b.im.abs() < 1e-12);
        }
    }

    #[test]
    fn constant_concentrates_in_dc() {
        let x = vec![1.0f64; 8];
        let sp = fft(&x, 8).unwrap();
        assert!((sp.bins()[0].re - 8.0).abs() < 1e-12);
        for b in &sp.bins()[1..] {
            assert!(b.norm() < 1e-12);
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        let x = vec![0.0f64; 12];
        assert!(matches!(fft(&x, 8), Err(DspError::NotPowerOfTwo(12))));
    }

    #[test]
    fn parseval_and_inversion_on_seeded_noise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let x: Vec<f64> = (0..1024).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // Independent oracle: direct summation of time-domain energy.
        let time_energy: f64 = x.iter().map(|v| v * v).sum();
        let sp = fft(&x, 1024).unwrap();
        let spec_energy: f64 = sp.bins().iter().map(|b| b.norm_sqr()).sum::<f64>() / 1024.0;
        assert!((time_energy - spec_energy).abs() / time_energy < 1e-9);

        let back = ifft(&sp);
        let err: f64 = x
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err / time_energy.sqrt() < 1e-9);
    }

    #[test]
    fn folding_matches_sample_picking() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sp = fft(&x, 64).unwrap();
        let folded = fold_spectrum(sp.bins(), 4);
        let mut buf = folded;
        ifft_in_place(&mut buf);
        for (n, v) in buf.iter().enumerate() {
            assert!((v.re - x[4 * n]).abs() < 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }
}
