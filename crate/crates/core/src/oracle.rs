//! Brute-force time-domain oracle that cross-validates the analytic spectra.
//!
//! Instead of trusting the closed forms, this module integrates the
//! mean-field equations of the driven cavity-dipole pair in the frame
//! rotating at the drive frequency,
//!
//! ```text
//! db/dt     = -(i dw + (gamma+kappa)/2) b - sqrt(gamma) a_in - i g1 sigma
//! dsigma/dt = -(i (dw + delta + S) + tau2/2) sigma - i g1 b
//! ```
//!
//! from `b = sigma = 0` to steady state with a fixed-step classical
//! Runge-Kutta scheme, and reads the reflection off the input-output
//! relation `a_out = a_in + sqrt(gamma) b`. The steady state of this linear
//! system reproduces the analytic reflection coefficient exactly, so any
//! disagreement beyond the integration tolerance exposes a defect in one of
//! the closed forms (or in the integrator). `S` is an optional complex
//! dipole shift so Stark-shifted spectra can be validated the same way.
//!
//! Everything here is deterministic: fixed step, fixed evaluation order,
//! no randomness.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::Float;
use crate::params::SystemParams;
use crate::spectrum::reflection_amplitude;

/// One time-domain integration job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig<T> {
    pub params: SystemParams<T>,
    /// Drive detuning from the cavity resonance (rad/ps).
    pub drive_frequency_detuning: T,
    /// Input field amplitude; |a_in|^2 is the input photon flux per ps.
    pub drive_amplitude: Complex<T>,
    /// Fixed integrator step (ps).
    pub dt: T,
    /// Hard stop time (ps) if convergence is not reached earlier.
    pub t_max: T,
    /// Convergence threshold on the relative change of `b` per window.
    pub convergence_tol: T,
    /// Complex dipole shift S added to the dipole detuning (zero when the
    /// Stark drive is off).
    pub effective_dipole_shift: Complex<T>,
}

impl<T: Float> OracleConfig<T> {
    /// Largest step the fixed-step scheme accepts:
    /// 0.01 / max(gamma+kappa, tau2, |detuning|, g1).
    pub fn stable_dt(params: &SystemParams<T>, delta_omega: T) -> T {
        let fastest = (params.gamma + params.kappa)
            .max(params.tau2)
            .max(delta_omega.abs())
            .max(params.g1);
        T::of(0.01) / fastest
    }

    /// Ready-to-run config for one detuning: stability-rule step, a drive at
    /// half the weak-excitation refusal threshold (or a nominal weak drive
    /// when the dipole is decoupled), a generous time cap, and no Stark
    /// shift.
    pub fn for_detuning(params: &SystemParams<T>, delta_omega: T, convergence_tol: T) -> Self {
        let flux_bound = params.weak_excitation_bound();
        let amplitude = if flux_bound > T::zero() {
            (T::of(0.05) * flux_bound).sqrt()
        } else {
            T::of(1e-3)
        };
        let slowest = params.tau2.min(params.gamma + params.kappa);
        OracleConfig {
            params: *params,
            drive_frequency_detuning: delta_omega,
            drive_amplitude: Complex::from(amplitude),
            dt: Self::stable_dt(params, delta_omega),
            t_max: T::of(40.0) / slowest,
            convergence_tol,
            effective_dipole_shift: Complex::from(T::zero()),
        }
    }

    /// Same config with a complex dipole shift applied.
    pub fn with_shift(mut self, shift: Complex<T>) -> Self {
        self.effective_dipole_shift = shift;
        self
    }

    /// Checks every precondition of [`integrate`].
    pub fn ensure_usable(&self) -> Result<()> {
        self.params.ensure_usable()?;
        if !self.drive_frequency_detuning.is_finite() {
            return Err(Error::rejected("drive frequency detuning must be finite"));
        }
        if !self.dt.is_finite() || self.dt <= T::zero() {
            return Err(Error::rejected("dt must be positive and finite"));
        }
        let limit = Self::stable_dt(&self.params, self.drive_frequency_detuning);
        if self.dt > limit * (T::one() + T::of(1e-12)) {
            return Err(Error::rejected(
                "dt exceeds the stability rule 0.01 / max(gamma+kappa, tau2, |detuning|, g1)",
            ));
        }
        if !self.t_max.is_finite() || self.t_max <= T::zero() {
            return Err(Error::rejected("t_max must be positive and finite"));
        }
        if !self.convergence_tol.is_finite() || self.convergence_tol <= T::zero() {
            return Err(Error::rejected("convergence_tol must be positive and finite"));
        }
        if !self.effective_dipole_shift.re.is_finite() || !self.effective_dipole_shift.im.is_finite()
        {
            return Err(Error::rejected("effective dipole shift must be finite"));
        }
        if !self.drive_amplitude.re.is_finite() || !self.drive_amplitude.im.is_finite() {
            return Err(Error::rejected("drive amplitude must be finite"));
        }
        let flux = self.drive_amplitude.norm_sqr();
        if flux == T::zero() {
            return Err(Error::degenerate(
                "zero drive amplitude: the reflection ratio a_out/a_in is undefined",
            ));
        }
        // The linear dipole model assumes weak excitation; refuse drives that
        // saturate it. A decoupled dipole (g1 = 0) has no such limit.
        if self.params.g1 > T::zero() {
            let bound = T::of(0.1) * self.params.weak_excitation_bound();
            if flux > bound {
                return Err(Error::rejected(
                    "drive flux exceeds the weak-excitation bound 0.1 g1^2/gamma",
                ));
            }
        }
        Ok(())
    }
}

/// Result of one time-domain integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRun<T> {
    /// Intracavity field at the final step.
    pub steady_b: Complex<T>,
    /// Dipole coherence at the final step (needed for the energy balance).
    pub steady_sigma: Complex<T>,
    /// Reflection coefficient a_out/a_in = 1 + sqrt(gamma) b / a_in.
    pub steady_r: Complex<T>,
    /// Whether the convergence detector fired before `t_max`.
    pub converged: bool,
    /// Number of RK4 steps taken.
    pub iterations: u64,
    /// Last relative change of `b` over a detector window.
    pub residual: T,
}

impl<T: Float> OracleRun<T> {
    /// Steady-state photon bookkeeping
    /// |r|^2 + (kappa |b|^2 + tau2 |sigma|^2) / |a_in|^2,
    /// which equals 1 when the run truly reached steady state: reflected
    /// flux plus parasitic cavity loss plus dipole dephasing loss must
    /// exhaust the input flux.
    pub fn energy_balance(&self, config: &OracleConfig<T>) -> T {
        let input_flux = config.drive_amplitude.norm_sqr();
        let lost = config.params.kappa * self.steady_b.norm_sqr()
            + config.params.tau2 * self.steady_sigma.norm_sqr();
        self.steady_r.norm_sqr() + lost / input_flux
    }
}

#[derive(Clone, Copy)]
struct State<T> {
    b: Complex<T>,
    sigma: Complex<T>,
}

impl<T: Float> State<T> {
    fn zero() -> Self {
        State {
            b: Complex::from(T::zero()),
            sigma: Complex::from(T::zero()),
        }
    }

    fn axpy(self, k: State<T>, h: T) -> Self {
        State {
            b: self.b + k.b * h,
            sigma: self.sigma + k.sigma * h,
        }
    }
}

/// Integrates the mean-field equations to steady state.
///
/// Runs fixed-step RK4 from `b = sigma = 0`, watching the relative change of
/// `b` over windows of one cavity lifetime `1/(gamma+kappa)`; the run counts
/// as converged once two consecutive windows change by less than
/// `convergence_tol`. Reaching `t_max` first reports `converged = false`
/// in the result rather than an error.
pub fn integrate<T: Float>(config: &OracleConfig<T>) -> Result<OracleRun<T>> {
    config.ensure_usable()?;
    let p = &config.params;
    let half = T::of(0.5);
    let dw = config.drive_frequency_detuning;

    let decay_b = Complex::new((p.gamma + p.kappa) * half, dw);
    let sigma_detuning = Complex::from(p.delta + dw) + config.effective_dipole_shift;
    let decay_sigma = Complex::<T>::i() * sigma_detuning + p.tau2 * half;
    let sqrt_gamma = p.gamma.sqrt();
    let drive = config.drive_amplitude * sqrt_gamma;
    let coupling = Complex::new(T::zero(), p.g1);

    let f = |s: State<T>| State {
        b: -(decay_b * s.b) - drive - coupling * s.sigma,
        sigma: -(decay_sigma * s.sigma) - coupling * s.b,
    };

    let dt = config.dt;
    let half_dt = dt * half;
    let sixth_dt = dt / T::of(6.0);
    let two = T::of(2.0);

    let max_steps = (config.t_max / dt)
        .floor()
        .to_u64()
        .unwrap_or(u64::MAX)
        .max(1);
    let window_steps = ((T::one() / (p.gamma + p.kappa)) / dt)
        .ceil()
        .to_u64()
        .unwrap_or(1)
        .max(1);

    let mut state = State::zero();
    let mut prev_b = state.b;
    let mut iterations: u64 = 0;
    let mut residual = T::infinity();
    let mut quiet_windows = 0u32;
    let mut converged = false;

    while iterations < max_steps {
        let chunk = window_steps.min(max_steps - iterations);
        for _ in 0..chunk {
            let k1 = f(state);
            let k2 = f(state.axpy(k1, half_dt));
            let k3 = f(state.axpy(k2, half_dt));
            let k4 = f(state.axpy(k3, dt));
            let combined = State {
                b: k1.b + (k2.b + k3.b) * two + k4.b,
                sigma: k1.sigma + (k2.sigma + k3.sigma) * two + k4.sigma,
            };
            state = state.axpy(combined, sixth_dt);
        }
        iterations += chunk;
        if chunk == window_steps {
            let change = (state.b - prev_b).norm();
            let scale = state.b.norm();
            residual = if scale > T::zero() { change / scale } else { change };
            prev_b = state.b;
            if residual <= config.convergence_tol {
                quiet_windows += 1;
                // Two consecutive quiet windows: one alone can be a lucky
                // plateau of a slow transient.
                if quiet_windows >= 2 {
                    converged = true;
                    break;
                }
            } else {
                quiet_windows = 0;
            }
        }
    }

    let steady_r = Complex::from(T::one()) + state.b * sqrt_gamma / config.drive_amplitude;
    Ok(OracleRun {
        steady_b: state.b,
        steady_sigma: state.sigma,
        steady_r,
        converged,
        iterations,
        residual,
    })
}

/// One grid point of a cross-validation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCheckPoint<T> {
    pub detuning: T,
    pub analytic_r: Complex<T>,
    pub oracle_r: Complex<T>,
    pub abs_dev: T,
    pub converged: bool,
}

/// Aggregate verdict of a cross-validation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCheckSummary<T> {
    pub max_dev: T,
    pub pass: bool,
}

/// Full cross-validation report, ordered by detuning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCheckReport<T> {
    pub points: Vec<GridCheckPoint<T>>,
    pub summary: GridCheckSummary<T>,
}

impl<T: Float + Serialize> GridCheckReport<T> {
    /// Pretty JSON rendering of the report.
    pub fn to_json(&self) -> String {
        let mut json =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        json.push('\n');
        json
    }
}

/// Cross-validates the analytic reflection against the time-domain steady
/// state at every grid detuning.
///
/// A point passes when its integration converged and
/// |r_oracle - r_analytic| <= tol; the report carries every point sorted by
/// detuning plus the aggregate verdict. Points run concurrently; the report
/// is independent of thread count.
pub fn oracle_grid_check<T: Float>(
    params: &SystemParams<T>,
    grid: &[T],
    tol: T,
) -> Result<GridCheckReport<T>> {
    oracle_grid_check_shifted(params, Complex::from(T::zero()), grid, tol)
}

/// [`oracle_grid_check`] with a complex dipole shift applied to both the
/// analytic formula and the integrator, validating Stark-shifted spectra.
pub fn oracle_grid_check_shifted<T: Float>(
    params: &SystemParams<T>,
    shift: Complex<T>,
    grid: &[T],
    tol: T,
) -> Result<GridCheckReport<T>> {
    params.ensure_usable()?;
    if grid.is_empty() {
        return Err(Error::rejected("empty detuning grid"));
    }
    if grid.iter().any(|d| !d.is_finite()) {
        return Err(Error::rejected("detuning grid must be finite"));
    }
    if !tol.is_finite() || tol <= T::zero() {
        return Err(Error::rejected("tolerance must be positive and finite"));
    }
    if !shift.re.is_finite() || !shift.im.is_finite() {
        return Err(Error::rejected("effective dipole shift must be finite"));
    }

    let mut detunings = grid.to_vec();
    detunings.sort_by(|a, b| a.partial_cmp(b).expect("grid checked finite"));

    // The integrator must resolve r well below the comparison tolerance;
    // measured headroom on the reference grids is ~400x between the window
    // residual and the resulting deviation of r.
    let convergence_tol = (tol / T::of(5000.0)).max(T::epsilon() * T::of(100.0));
    let dipole_detuning = Complex::from(params.delta) + shift;

    let points: Vec<GridCheckPoint<T>> = detunings
        .par_iter()
        .map(|&dw| {
            let config = OracleConfig::for_detuning(params, dw, convergence_tol).with_shift(shift);
            let run = integrate(&config)?;
            let analytic_r = reflection_amplitude(params, dw, dipole_detuning);
            Ok(GridCheckPoint {
                detuning: dw,
                analytic_r,
                oracle_r: run.steady_r,
                abs_dev: (run.steady_r - analytic_r).norm(),
                converged: run.converged,
            })
        })
        .collect::<Result<_>>()?;

    let summary = summarize(&points, tol);
    Ok(GridCheckReport { points, summary })
}

/// Aggregates per-point results: the report passes only when every point
/// converged and sits within the tolerance.
pub fn summarize<T: Float>(points: &[GridCheckPoint<T>], tol: T) -> GridCheckSummary<T> {
    let mut max_dev = T::zero();
    let mut pass = true;
    for point in points {
        max_dev = max_dev.max(point.abs_dev);
        pass = pass && point.converged && point.abs_dev <= tol;
    }
    GridCheckSummary { max_dev, pass }
}
