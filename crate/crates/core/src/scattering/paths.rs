//! Path enumeration: which scattering channels a configuration produces.

use serde::{Deserialize, Serialize};

use super::config::ScatterConfig;
use super::params::{filterbank_params, SIGMA0};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScatterOrder {
    Zero,
    One,
    Two,
}

/// One output channel of the transform, identified by its wavelet chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub order: ScatterOrder,
    /// First-layer center frequency in Hz (orders 1 and 2).
    pub lambda1_hz: Option<f64>,
    /// Second-layer center frequency in Hz (order 2 only).
    pub lambda2_hz: Option<f64>,
    /// Indices into the filterbank, used by the transform.
    #[serde(skip)]
    pub(crate) bank_index: (usize, usize),
}

/// Deterministically ordered list of paths: order 0 first, then order-1
/// channels by descending first-layer frequency, then order-2 channels by
/// descending first- and second-layer frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTable {
    pub paths: Vec<Path>,
    /// Channel counts per order.
    pub counts: (usize, usize, usize),
}

impl PathTable {
    pub fn total(&self) -> usize {
        self.counts.0 + self.counts.1 + self.counts.2
    }
}

/// Enumerates the output channels for a configuration without building the
/// filters. A second-order path `(l1, l2)` exists when the second wavelet
/// is slow enough to see the first band's envelope, which the discrete
/// ladder expresses as `j2 > j1`.
pub fn enumerate_paths(config: &ScatterConfig) -> PathTable {
    let sigma_min = SIGMA0 / config.decimation() as f64;
    let rate = config.input_rate as f64;
    let psi1 = filterbank_params(config.q, sigma_min);
    let psi2 = filterbank_params(1, sigma_min);

    let mut paths = vec![Path {
        order: ScatterOrder::Zero,
        lambda1_hz: None,
        lambda2_hz: None,
        bank_index: (0, 0),
    }];
    for (i, p) in psi1.iter().enumerate() {
        paths.push(Path {
            order: ScatterOrder::One,
            lambda1_hz: Some(p.xi * rate),
            lambda2_hz: None,
            bank_index: (i, 0),
        });
    }
    let mut n2 = 0;
    for (i, p1) in psi1.iter().enumerate() {
        for (k, p2) in psi2.iter().enumerate() {
            if p2.j > p1.j {
                paths.push(Path {
                    order: ScatterOrder::Two,
                    lambda1_hz: Some(p1.xi * rate),
                    lambda2_hz: Some(p2.xi * rate),
                    bank_index: (i, k),
                });
                n2 += 1;
            }
        }
    }
    PathTable {
        counts: (1, psi1.len(), n2),
        paths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(q: u32, output_rate: u32, input_rate: u32) -> (usize, usize, usize) {
        let j = (input_rate / output_rate).ilog2();
        let cfg = ScatterConfig::new(q, j, output_rate, input_rate).unwrap();
        enumerate_paths(&cfg).counts
    }

    #[test]
    fn eeg_reference_rows() {
        assert_eq!(counts(8, 32, 128), (1, 7, 0));
        assert_eq!(counts(8, 8, 128), (1, 22, 27));
        assert_eq!(counts(4, 8, 128), (1, 14, 14));
        assert_eq!(counts(1, 8, 128), (1, 5, 7));
    }

    #[test]
    fn audio_reference_rows() {
        assert_eq!(counts(8, 8, 16384), (1, 78, 377));
        assert_eq!(counts(4, 8, 16384), (1, 42, 189));
        assert_eq!(counts(1, 8, 16384), (1, 12, 63));
    }

    #[test]
    fn second_order_vanishes_for_shallow_scales() {
        for (fo, rate) in [(64u32, 128u32), (32, 128)] {
            let c = counts(8, fo, rate);
            assert_eq!(c.2, 0, "fo={fo}");
        }
    }

    #[test]
    fn ordering_is_order_then_descending_frequencies() {
        let cfg = ScatterConfig::new(8, 4, 8, 128).unwrap();
        let table = enumerate_paths(&cfg);
        assert_eq!(table.paths[0].order, ScatterOrder::Zero);
        let order1: Vec<f64> = table
            .paths
            .iter()
            .filter(|p| p.order == ScatterOrder::One)
            .map(|p| p.lambda1_hz.unwrap())
            .collect();
        assert!(order1.windows(2).all(|w| w[1] < w[0]));
        let order2: Vec<(f64, f64)> = table
            .paths
            .iter()
            .filter(|p| p.order == ScatterOrder::Two)
            .map(|p| (p.lambda1_hz.unwrap(), p.lambda2_hz.unwrap()))
            .collect();
        assert!(order2
            .windows(2)
            .all(|w| w[1].0 < w[0].0 || (w[1].0 == w[0].0 && w[1].1 < w[0].1)));
        // Paths unique.
        for (a, pa) in order2.iter().enumerate() {
            for pb in order2.iter().skip(a + 1) {
                assert_ne!(pa, pb);
            }
        }
    }

    #[test]
    fn counts_monotone_in_q_and_scale() {
        let mut prev = 0;
        for q in [1, 2, 4, 8] {
            let total = {
                let c = counts(q, 8, 128);
                c.0 + c.1 + c.2
            };
            assert!(total >= prev);
            prev = total;
        }
        let mut prev = 0;
        for fo in [64, 32, 16, 8] {
            let c = counts(8, fo, 128);
            let total = c.0 + c.1 + c.2;
            assert!(total >= prev);
            prev = total;
        }
    }
}
