//! Realization of the wavelet filterbanks in the frequency domain.
//!
//! Filters are analytic Morlet wavelets: a Gaussian bump at the center
//! frequency minus a scaled copy of the Gaussian at DC so the response is
//! exactly zero at frequency zero. After construction the wavelet gains are
//! equalized so that the Littlewood-Paley sum
//! `|phi|^2 + 0.5 * sum(|psi(w)|^2 + |psi(-w)|^2)` is flat at 1 wherever
//! the bank carries energy; `phi` itself stays a pure Gaussian so its time
//! kernel is nonnegative and averaged coefficients keep their sign.

use std::collections::HashMap;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::config::ScatterConfig;
use super::params::{filterbank_params, WaveletParam, SIGMA0};
use super::paths::{enumerate_paths, PathTable};
use super::ScatterError;
use crate::num::Real;

/// Amplitudes below this fraction of the peak are clipped from the support.
const SUPPORT_EPS: f64 = 1e-4;

/// Frequency support and working block length of one filter, in bins of a
/// reference grid. `start..=end` are signed bin indices (negative indices
/// address the upper half of the spectrum).
#[derive(Debug, Clone, Copy)]
pub(crate) struct FilterLayout {
    pub start: isize,
    pub end: isize,
    /// Power-of-two length of the demodulated envelope block.
    pub block: usize,
}

impl FilterLayout {
    pub fn width(&self) -> usize {
        (self.end - self.start + 1) as usize
    }
}

fn pow2_ceil(x: f64) -> usize {
    let mut p = 1usize;
    while (p as f64) < x {
        p <<= 1;
    }
    p
}

fn support_edges(param: &WaveletParam, is_top: bool) -> (f64, f64) {
    let hi = if is_top {
        0.5
    } else {
        (param.xi + 5.0 * param.sigma).min(0.5)
    };
    let mut lo = param.xi - 5.0 * param.sigma;
    // The zero-mean correction leaves a mirrored tail near DC whose height
    // is exp(-xi^2 / (2 sigma^2)); widen the support when it is visible.
    let kappa = (-param.xi * param.xi / (2.0 * param.sigma * param.sigma)).exp();
    if kappa > SUPPORT_EPS {
        let ext = param.sigma * (2.0 * (kappa / SUPPORT_EPS).ln()).sqrt();
        lo = lo.min(-ext);
    }
    (lo, hi)
}

fn support_range(param: &WaveletParam, is_top: bool, grid: usize) -> (isize, isize) {
    let (lo, hi) = support_edges(param, is_top);
    let half = (grid / 2) as isize;
    let start = ((lo * grid as f64).floor() as isize).max(-(half - 1));
    let end = ((hi * grid as f64).ceil() as isize).min(half);
    (start, end)
}

/// Computes supports and block lengths for both banks on a grid of `grid`
/// bins with decimation `t`. The filter builder uses the padded grid with
/// a 2x block margin so envelope harmonics stay alias-free; the cost model
/// uses the nominal grid with margin 1 (the minimal bandwidth-decimated
/// pipeline).
pub(crate) fn plan_layout(
    params1: &[WaveletParam],
    params2: &[WaveletParam],
    t: usize,
    grid: usize,
    margin: f64,
) -> (Vec<FilterLayout>, Vec<FilterLayout>) {
    let floor_len = (grid / t).max(16).min(grid) as f64;

    let psi2: Vec<FilterLayout> = params2
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let (start, end) = support_range(p, k == 0, grid);
            let width = (end - start + 1) as f64;
            let block = pow2_ceil((margin * width).max(floor_len)).min(grid);
            FilterLayout { start, end, block }
        })
        .collect();

    let psi1 = params1
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (start, end) = support_range(p, i == 0, grid);
            let width = (end - start + 1) as f64;
            // The block must also hold every admissible second-layer band.
            let child_edge = params2
                .iter()
                .filter(|c| c.j > p.j)
                .map(|c| c.xi + 4.0 * c.sigma)
                .fold(0.0f64, f64::max);
            let need = (margin * width)
                .max(2.0 * child_edge * grid as f64)
                .max(floor_len);
            let block = pow2_ceil(need).min(grid);
            FilterLayout { start, end, block }
        })
        .collect();

    (psi1, psi2)
}

/// One realized wavelet: a real, nonnegative frequency response stored
/// densely over its support.
#[derive(Debug, Clone)]
pub struct Wavelet<T> {
    /// Center frequency in Hz.
    pub center_hz: f64,
    pub(crate) param: WaveletParam,
    pub(crate) layout: FilterLayout,
    pub(crate) values: Vec<T>,
}

impl<T: Real> Wavelet<T> {
    /// Response at a physical bin index of the full padded grid.
    pub(crate) fn response_at(&self, bin: usize, grid: usize) -> T {
        let signed = if bin <= grid / 2 {
            bin as isize
        } else {
            bin as isize - grid as isize
        };
        if signed >= self.layout.start && signed <= self.layout.end {
            self.values[(signed - self.layout.start) as usize]
        } else {
            T::zero()
        }
    }
}

/// The immutable filter set for one configuration: two wavelet banks, the
/// averaging filter at every working resolution, and the FFT plans the
/// transform needs. Built once, shared across threads.
pub struct Filterbank<T> {
    pub config: ScatterConfig,
    pub psi1: Vec<Wavelet<T>>,
    pub psi2: Vec<Wavelet<T>>,
    pub(crate) phi_full: Vec<T>,
    pub(crate) phi_at: HashMap<usize, Vec<T>>,
    pub(crate) path_table: PathTable,
    pub(crate) padded_len: usize,
    pub(crate) plans_fwd: HashMap<usize, Arc<dyn Fft<T>>>,
    pub(crate) plans_inv: HashMap<usize, Arc<dyn Fft<T>>>,
}

impl<T> std::fmt::Debug for Filterbank<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Filterbank")
            .field("config", &self.config)
            .field("psi1", &self.psi1.len())
            .field("psi2", &self.psi2.len())
            .field("padded_len", &self.padded_len)
            .finish()
    }
}

fn gauss_periodized(omega: f64, sigma: f64) -> f64 {
    let mut acc = 0.0;
    for m in -2..=2 {
        let d = omega - m as f64;
        acc += (-d * d / (2.0 * sigma * sigma)).exp();
    }
    acc
}

/// Morlet response over `start..=end` signed bins of a `grid`-bin spectrum,
/// peak-normalized to 1.
fn morlet_values(param: &WaveletParam, start: isize, end: isize, grid: usize) -> Vec<f64> {
    let g0 = gauss_periodized(0.0, param.sigma);
    let kappa = gauss_periodized(-param.xi, param.sigma) / g0;
    let mut values: Vec<f64> = (start..=end)
        .map(|s| {
            let omega = s as f64 / grid as f64;
            gauss_periodized(omega - param.xi, param.sigma) - kappa * gauss_periodized(omega, param.sigma)
        })
        .collect();
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    if peak > 0.0 {
        for v in values.iter_mut() {
            *v /= peak;
        }
    }
    values
}

fn realize_bank<T: Real>(
    params: &[WaveletParam],
    layouts: &[FilterLayout],
    grid: usize,
    rate: f64,
) -> Vec<Wavelet<T>> {
    params
        .iter()
        .zip(layouts)
        .map(|(p, l)| Wavelet {
            center_hz: p.xi * rate,
            param: *p,
            layout: *l,
            values: morlet_values(p, l.start, l.end, grid)
                .into_iter()
                .map(T::of)
                .collect(),
        })
        .collect()
}

/// `0.5 * sum(|psi(w)|^2 + |psi(-w)|^2)` over a bank, per bin.
fn wavelet_energy<T: Real>(bank: &[Wavelet<T>], grid: usize) -> Vec<f64> {
    let mut sum = vec![0.0f64; grid];
    for w in bank {
        for (i, &v) in w.values.iter().enumerate() {
            let signed = w.layout.start + i as isize;
            let bin = signed.rem_euclid(grid as isize) as usize;
            let v = v.to_f64();
            sum[bin] += 0.5 * v * v;
            sum[(grid - bin) % grid] += 0.5 * v * v;
        }
    }
    sum
}

/// Scales every wavelet so the Littlewood-Paley sum with `phi` is exactly 1
/// wherever the bank has support.
fn equalize<T: Real>(bank: &mut [Wavelet<T>], phi: &[T], grid: usize) {
    let energy = wavelet_energy(bank, grid);
    let gain: Vec<f64> = (0..grid)
        .map(|k| {
            if energy[k] > 1e-12 {
                let head = phi[k].to_f64().powi(2);
                ((1.0 - head).max(0.0) / energy[k]).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    for w in bank.iter_mut() {
        for (i, v) in w.values.iter_mut().enumerate() {
            let signed = w.layout.start + i as isize;
            let bin = signed.rem_euclid(grid as isize) as usize;
            *v = *v * T::of(gain[bin]);
        }
    }
}

fn truncate_to<T: Real>(full: &[T], len: usize) -> Vec<T> {
    let grid = full.len();
    (0..len)
        .map(|k| {
            if k <= len / 2 {
                full[k]
            } else {
                full[grid - (len - k)]
            }
        })
        .collect()
}

/// Builds the filterbank for a configuration. Filters are realized on the
/// reflection-padded grid (twice the segment length).
pub fn build_filterbank<T: Real>(config: &ScatterConfig) -> Result<Filterbank<T>, ScatterError> {
    let n = config.segment_len();
    let t = config.decimation();
    let grid = 2 * n;
    let rate = config.input_rate as f64;
    let sigma_min = SIGMA0 / t as f64;

    let params1 = filterbank_params(config.q, sigma_min);
    let params2 = filterbank_params(1, sigma_min);
    let (layout1, layout2) = plan_layout(&params1, &params2, t, grid, 2.0);

    let sigma_phi = sigma_min;
    let phi_full: Vec<T> = (0..grid)
        .map(|k| {
            let omega = if k <= grid / 2 {
                k as f64 / grid as f64
            } else {
                k as f64 / grid as f64 - 1.0
            };
            T::of(gauss_periodized(omega, sigma_phi) / gauss_periodized(0.0, sigma_phi))
        })
        .collect();

    let mut psi1 = realize_bank::<T>(&params1, &layout1, grid, rate);
    let mut psi2 = realize_bank::<T>(&params2, &layout2, grid, rate);
    equalize(&mut psi1, &phi_full, grid);
    equalize(&mut psi2, &phi_full, grid);

    let frames_padded = grid / t;
    let mut lengths: std::collections::BTreeSet<usize> = [grid, frames_padded].into();
    for l in layout1.iter().chain(layout2.iter()) {
        lengths.insert(l.block);
        for m2 in layout2.iter().map(|c| c.block.min(l.block)) {
            lengths.insert(m2);
        }
    }

    let mut planner = FftPlanner::new();
    let mut plans_fwd = HashMap::new();
    let mut plans_inv = HashMap::new();
    let mut phi_at = HashMap::new();
    for &len in &lengths {
        plans_fwd.insert(len, planner.plan_fft_forward(len));
        plans_inv.insert(len, planner.plan_fft_inverse(len));
        phi_at.insert(len, truncate_to(&phi_full, len));
    }

    Ok(Filterbank {
        config: *config,
        psi1,
        psi2,
        phi_full,
        phi_at,
        path_table: enumerate_paths(config),
        padded_len: grid,
        plans_fwd,
        plans_inv,
    })
}

impl<T: Real> Filterbank<T> {
    pub fn path_table(&self) -> &PathTable {
        &self.path_table
    }

    pub(crate) fn forward(&self, len: usize) -> &Arc<dyn Fft<T>> {
        &self.plans_fwd[&len]
    }

    pub(crate) fn inverse(&self, len: usize) -> &Arc<dyn Fft<T>> {
        &self.plans_inv[&len]
    }
}

/// Littlewood-Paley sum of the first filterbank (with the averaging
/// filter), evaluated on `0..=grid/2`. Index `k` is the frequency
/// `k * input_rate / grid` Hz.
pub fn littlewood_paley<T: Real>(fb: &Filterbank<T>) -> Vec<f64> {
    let grid = fb.padded_len;
    let energy = wavelet_energy(&fb.psi1, grid);
    (0..=grid / 2)
        .map(|k| fb.phi_full[k].to_f64().powi(2) + energy[k])
        .collect()
}
