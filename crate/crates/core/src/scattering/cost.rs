//! FLOP, channel and latency accounting for the transform.
//!
//! Conventions: one complex multiply-add costs 8 FLOPs, a real one 2, a
//! modulus 4, and an FFT of length `L` costs `5 L log2 L`. The model counts
//! the nominal segment pipeline: one forward FFT, then per filter a sparse
//! spectral multiply over the filter's support, an inverse FFT at that
//! band's decimated block length, the modulus, and the shared averaging
//! stage down to the frame rate.

use serde::{Deserialize, Serialize};

use super::config::ScatterConfig;
use super::filterbank::plan_layout;
use super::params::{filterbank_params, SIGMA0};
use super::paths::enumerate_paths;

/// Cost summary for one configuration processing a one-second window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub flops_per_second_window: u64,
    pub lag_seconds: f64,
    /// Channels per scattering order `(n0, n1, n2, total)`.
    pub channels: (usize, usize, usize, usize),
}

fn fft_flops(len: usize) -> f64 {
    5.0 * len as f64 * (len as f64).log2()
}

/// Symbolic cost model for the scattering transform.
pub fn estimate_cost(config: &ScatterConfig) -> CostReport {
    let n = config.segment_len();
    let t = config.decimation();
    let frames = n / t;
    let sigma_min = SIGMA0 / t as f64;
    let params1 = filterbank_params(config.q, sigma_min);
    let params2 = filterbank_params(1, sigma_min);
    let (layout1, layout2) = plan_layout(&params1, &params2, t, n, 1.0);

    let phi_support = (n / t).min(n);
    // Averaging stage shared by every path: sparse multiply with phi, fold,
    // and the short inverse FFT to the frame grid.
    let average = 8.0 * phi_support as f64 + fft_flops(frames);

    let mut flops = fft_flops(n); // forward FFT of the segment
    flops += average; // order 0

    for (p1, l1) in params1.iter().zip(&layout1) {
        let b = l1.block;
        flops += 8.0 * l1.width() as f64; // spectral multiply
        flops += fft_flops(b); // inverse FFT of the band block
        flops += 4.0 * b as f64; // modulus
        flops += fft_flops(b); // envelope spectrum for phi / layer 2
        flops += average;

        for (p2, l2) in params2.iter().zip(&layout2) {
            if p2.j > p1.j {
                let b2 = l2.block.min(b);
                flops += 8.0 * l2.width().min(b2) as f64;
                flops += fft_flops(b2);
                flops += 4.0 * b2 as f64;
                flops += fft_flops(b2);
                flops += average;
            }
        }
    }

    let counts = enumerate_paths(config).counts;
    CostReport {
        flops_per_second_window: (flops / config.segment_seconds) as u64,
        lag_seconds: config.lag_seconds(),
        channels: (counts.0, counts.1, counts.2, counts.0 + counts.1 + counts.2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audio_budget_and_lag() {
        let cfg = ScatterConfig::new(8, 9, 8, 16384).unwrap();
        let report = estimate_cost(&cfg);
        assert_eq!(report.lag_seconds, 0.5);
        assert_eq!(report.channels, (1, 78, 377, 456));
        let flops = report.flops_per_second_window as f64;
        assert!(
            (10e6..=40e6).contains(&flops),
            "audio model {flops:.2e} outside factor 2 of 20M"
        );
    }

    #[test]
    fn eeg_budget_and_lag() {
        let cfg = ScatterConfig::new(8, 4, 8, 128).unwrap();
        let report = estimate_cost(&cfg);
        assert_eq!(report.lag_seconds, 0.5);
        let all64 = 64.0 * report.flops_per_second_window as f64;
        assert!(
            (2e6..=8e6).contains(&all64),
            "64-channel EEG model {all64:.2e} outside factor 2 of 4M"
        );
    }

    #[test]
    fn shallow_eeg_lag() {
        let cfg = ScatterConfig::new(8, 1, 64, 128).unwrap();
        let report = estimate_cost(&cfg);
        assert_eq!(report.lag_seconds, 0.0625);
        assert_eq!(report.channels.3, 8);
    }
}
