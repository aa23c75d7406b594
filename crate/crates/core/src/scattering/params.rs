//! Wavelet parameter ladders.
//!
//! Frequencies here are normalized to the sample rate (cycles per sample,
//! Nyquist at 0.5). A bank is a geometric ladder of constant-Q filters from
//! `xi_max` downwards, continued by `Q - 1` linearly spaced filters of
//! constant bandwidth once the constant-Q bandwidth would drop below the
//! bandwidth of the averaging filter.

/// Neighboring filters cross at -3 dB.
const CROSSING: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Bandwidth of the averaging filter for decimation T is SIGMA0 / T.
pub(crate) const SIGMA0: f64 = 0.1;
/// Width multiplier used when deciding how far a filter may be decimated.
const ALPHA: f64 = 5.0;

/// Frequency-domain parameters of one wavelet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct WaveletParam {
    /// Center frequency, cycles per sample.
    pub xi: f64,
    /// Gaussian bandwidth, cycles per sample.
    pub sigma: f64,
    /// Largest dyadic decimation that keeps the filter's band alias-free.
    pub j: u32,
}

/// Center frequency of the highest wavelet for a given Q.
fn xi_max(q: u32) -> f64 {
    (1.0 / (1.0 + 2f64.powf(3.0 / q as f64))).max(0.35)
}

/// Bandwidth of a wavelet at center `xi` so that adjacent filters of the
/// geometric ladder cross at the configured level.
fn sigma_for(xi: f64, q: u32) -> f64 {
    let factor = 2f64.powf(-1.0 / q as f64);
    let term1 = (1.0 - factor) / (1.0 + factor);
    let term2 = 1.0 / (2.0 * (1.0 / CROSSING).ln()).sqrt();
    xi * term1 * term2
}

fn max_dyadic_decimation(xi: f64, sigma: f64) -> u32 {
    let upper = (xi + ALPHA * sigma).min(0.5);
    let j = (-upper.log2()).floor() - 1.0;
    j.max(0.0) as u32
}

/// Builds the parameter ladder for one filterbank.
pub(crate) fn filterbank_params(q: u32, sigma_min: f64) -> Vec<WaveletParam> {
    let xm = xi_max(q);
    let sm = sigma_for(xm, q);
    let step = 2f64.powf(-1.0 / q as f64);

    let mut params = Vec::new();
    let mut last_xi = xm;
    if sm > sigma_min {
        let (mut xi, mut sigma) = (xm, sm);
        while sigma > sigma_min {
            params.push(WaveletParam {
                xi,
                sigma,
                j: max_dyadic_decimation(xi, sigma),
            });
            xi *= step;
            sigma *= step;
        }
        last_xi = params.last().unwrap().xi;
    }
    for k in 1..q {
        let xi = last_xi * (q - k) as f64 / q as f64;
        params.push(WaveletParam {
            xi,
            sigma: sigma_min,
            j: max_dyadic_decimation(xi, sigma_min),
        });
    }
    params
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_strictly_decreasing_and_positive() {
        for q in [1, 2, 4, 8, 12] {
            for t in [2usize, 16, 256, 2048] {
                let params = filterbank_params(q, SIGMA0 / t as f64);
                assert!(!params.is_empty());
                for w in params.windows(2) {
                    assert!(w[1].xi < w[0].xi, "q={q} t={t}");
                }
                assert!(params.last().unwrap().xi > 0.0);
            }
        }
    }

    #[test]
    fn minimal_bank_has_at_least_one_wavelet() {
        let params = filterbank_params(1, SIGMA0 / 2.0);
        assert!(!params.is_empty());
    }

    #[test]
    fn deeper_scales_add_filters() {
        for q in [1, 2, 4, 8] {
            let mut prev = 0;
            for log_t in 1..=11 {
                let n = filterbank_params(q, SIGMA0 / (1usize << log_t) as f64).len();
                assert!(n >= prev, "q={q} log_t={log_t}: {n} < {prev}");
                prev = n;
            }
        }
    }
}
