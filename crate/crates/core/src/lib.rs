//! Dispersive response of a single-sided optical cavity coupled to a
//! three-level dipole emitter.
//!
//! A strongly coupled dipole makes an otherwise lossy cavity transparent to
//! its own input channel: on resonance the reflected phase flips from pi to
//! 0 and the reflectivity recovers to near unity (dipole induced
//! transparency). A second field Stark-shifts the dipole and translates the
//! whole response spectrum by about `2 g2^2 / Delta` per intracavity photon,
//! which acts as a giant Kerr nonlinearity at the single-photon level.
//!
//! The crate computes:
//!
//! - [`spectrum`]: the analytic complex reflection coefficient, reflectivity
//!   and phase spectra, and the Purcell-factor diagnostics that govern the
//!   phase flip;
//! - [`stark`]: the complex Stark operator, shifted spectra, and Kerr sweeps
//!   over sets of drives;
//! - [`oracle`]: a deterministic time-domain mean-field integrator that
//!   cross-validates every closed form against brute-force steady states;
//! - [`params`]: the parameter set with report-style validation.
//!
//! All rates and frequencies are angular, in rad/ps; interfaces label them
//! "THz" since the numbers are used interchangeably at that scale. The
//! model is generic over the scalar type through [`float::Float`]
//! (implemented for `f32` and `f64`); the `*64` aliases below fix the
//! common choice.
//!
//! ```
//! use dit_core::{params::SystemParams, spectrum};
//!
//! let params = SystemParams::<f64>::default();
//! let resonant = spectrum::reflection(&params, 0.0).unwrap();
//! // The coupled dipole flips the reflected phase from pi to 0.
//! assert_eq!(resonant.phase, 0.0);
//! assert!(resonant.reflectivity > 0.93);
//! ```

pub mod error;
pub mod float;
pub mod oracle;
pub mod params;
pub mod spectrum;
pub mod stark;

pub use error::{Error, Result};
pub use float::Float;

/// Double-precision parameter set.
pub type SystemParams64 = params::SystemParams<f64>;
/// Double-precision single-point response.
pub type ComplexResponse64 = spectrum::ComplexResponse<f64>;
/// Double-precision sweep result.
pub type SpectrumGrid64 = spectrum::SpectrumGrid<f64>;
/// Double-precision Stark drive.
pub type StarkDrive64 = stark::StarkDrive<f64>;
/// Double-precision Stark operator value.
pub type StarkValue64 = stark::StarkValue<f64>;
/// Double-precision oracle job.
pub type OracleConfig64 = oracle::OracleConfig<f64>;
/// Double-precision oracle result.
pub type OracleRun64 = oracle::OracleRun<f64>;
/// Double-precision cross-validation report.
pub type GridCheckReport64 = oracle::GridCheckReport<f64>;
