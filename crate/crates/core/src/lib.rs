//! Signal-processing frontends, evaluation protocols and computational
//! audits for EEG-based auditory attention decoding (AAD).

pub mod dsp;
pub mod scattering;
pub mod stats;
pub mod num;
pub mod signal;

pub use num::Real;
pub use signal::SignalKind;

/// Double-precision aliases used by the pipelines and the CLI.
pub type Signal = signal::Signal<f64>;
pub type Spectrum = signal::Spectrum<f64>;
