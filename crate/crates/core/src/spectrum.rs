//! Analytic frequency-domain response of the dipole-loaded cavity.
//!
//! The central quantity is the complex reflection coefficient of a
//! single-sided cavity whose mode is coupled to a two-level dipole
//! transition:
//!
//! ```text
//! r(dw) = [i dw + g1^2/(i (dw + delta) + tau2/2) - gamma/2 + kappa/2]
//!         -----------------------------------------------------------
//!         [i dw + g1^2/(i (dw + delta) + tau2/2) + gamma/2 + kappa/2]
//! ```
//!
//! where `dw` is the drive detuning from the cavity resonance. On resonance
//! the dipole term turns the lossy-cavity amplitude `-(gamma-kappa)/(gamma+kappa)`
//! into `(F_p - r0)/(F_p + 1)` with Purcell factor `F_p = 4 g1^2/(tau2 (gamma+kappa))`:
//! a strongly coupled dipole flips the reflected phase by pi and restores
//! near-unity reflectivity.

use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::Float;
use crate::params::SystemParams;

/// Reflection response at a single drive detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexResponse<T> {
    /// Complex reflection amplitude a_out / a_in.
    pub r: Complex<T>,
    /// Reflectivity |r|^2.
    pub reflectivity: T,
    /// Principal-value phase of `r`, in (-pi, pi].
    pub phase: T,
    /// Phase continued along the sweep that produced this point; equal to
    /// `phase` for point queries and for the first point of a sweep.
    pub phase_unwrapped: T,
}

impl<T: Float> ComplexResponse<T> {
    pub(crate) fn from_amplitude(r: Complex<T>) -> Self {
        let phase = principal_phase(r);
        ComplexResponse {
            r,
            reflectivity: r.norm_sqr(),
            phase,
            phase_unwrapped: phase,
        }
    }
}

/// Principal argument mapped to (-pi, pi]: `atan2` returns exactly -pi for a
/// negative real with negative-zero imaginary part, which belongs to +pi.
fn principal_phase<T: Float>(z: Complex<T>) -> T {
    let phi = z.arg();
    if phi <= -T::PI() {
        phi + T::TAU()
    } else {
        phi
    }
}

/// Reflection amplitude with an arbitrary complex dipole detuning, shared by
/// the plain and Stark-shifted evaluations so a zero shift is bit-identical.
pub(crate) fn reflection_amplitude<T: Float>(
    params: &SystemParams<T>,
    delta_omega: T,
    dipole_detuning: Complex<T>,
) -> Complex<T> {
    let half = T::of(0.5);
    let g1_sq = params.g1 * params.g1;
    let dipole_pole = Complex::<T>::i() * (dipole_detuning + delta_omega) + params.tau2 * half;
    let dipole = Complex::from(g1_sq) / dipole_pole;
    let common = Complex::new(T::zero(), delta_omega) + dipole;
    let half_gamma = params.gamma * half;
    let half_kappa = params.kappa * half;
    (common - half_gamma + half_kappa) / (common + half_gamma + half_kappa)
}

/// Complex reflection coefficient at drive detuning `delta_omega` from the
/// cavity resonance.
pub fn reflection<T: Float>(
    params: &SystemParams<T>,
    delta_omega: T,
) -> Result<ComplexResponse<T>> {
    params.ensure_usable()?;
    if !delta_omega.is_finite() {
        return Err(Error::rejected("delta_omega must be finite"));
    }
    Ok(ComplexResponse::from_amplitude(reflection_amplitude(
        params,
        delta_omega,
        Complex::from(params.delta),
    )))
}

/// Purcell factor F_p = 4 g1^2 / (tau2 (gamma + kappa)): the factor by which
/// the cavity enhances the dipole's emission rate.
pub fn purcell_factor<T: Float>(params: &SystemParams<T>) -> Result<T> {
    let denom = params.tau2 * (params.gamma + params.kappa);
    if denom <= T::zero() || !denom.is_finite() {
        return Err(Error::rejected(
            "purcell factor needs tau2 > 0 and gamma + kappa > 0",
        ));
    }
    Ok(T::of(4.0) * params.g1 * params.g1 / denom)
}

/// Resonant reflection amplitude of the bare (dipole-free) cavity, up to
/// sign: r0 = (gamma - kappa) / (gamma + kappa).
pub fn bare_reflectivity<T: Float>(params: &SystemParams<T>) -> Result<T> {
    let denom = params.gamma + params.kappa;
    if denom <= T::zero() || !denom.is_finite() {
        return Err(Error::rejected("bare reflectivity needs gamma + kappa > 0"));
    }
    Ok((params.gamma - params.kappa) / denom)
}

/// Closed-form resonant reflection amplitude (F_p - r0) / (F_p + 1) of the
/// dipole-loaded cavity; defined for a dipole exactly on resonance.
pub fn resonant_reflection<T: Float>(params: &SystemParams<T>) -> Result<T> {
    if params.delta != T::zero() {
        return Err(Error::rejected(
            "resonant reflection is defined for delta = 0",
        ));
    }
    let fp = purcell_factor(params)?;
    let r0 = bare_reflectivity(params)?;
    Ok((fp - r0) / (fp + T::one()))
}

/// Detuning scale g1^2 / ((gamma + kappa)/2) at which the dipole-induced
/// phase has moved half way (the reflected phase passes +-pi/2).
pub fn crossover_detuning<T: Float>(params: &SystemParams<T>) -> Result<T> {
    let half_linewidth = (params.gamma + params.kappa) * T::of(0.5);
    if half_linewidth <= T::zero() || !half_linewidth.is_finite() {
        return Err(Error::rejected(
            "crossover detuning needs gamma + kappa > 0",
        ));
    }
    Ok(params.g1 * params.g1 / half_linewidth)
}

/// Phase picked up by the dipole: the principal-value difference between the
/// reflected phase with and without the dipole (g1 = 0), in (-pi, pi].
pub fn phase_contrast<T: Float>(params: &SystemParams<T>, delta_omega: T) -> Result<T> {
    let with_dipole = reflection(params, delta_omega)?;
    let bare = SystemParams {
        g1: T::zero(),
        ..*params
    };
    let without = reflection(&bare, delta_omega)?;
    let mut diff = with_dipole.phase - without.phase;
    while diff > T::PI() {
        diff -= T::TAU();
    }
    while diff <= -T::PI() {
        diff += T::TAU();
    }
    Ok(diff)
}

/// Reflection responses over a detuning grid, with the phase unwrapped along
/// the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid<T> {
    /// Strictly increasing drive detunings (rad/ps).
    pub detunings: Vec<T>,
    /// Response at each detuning, same order as `detunings`.
    pub responses: Vec<ComplexResponse<T>>,
    /// Parameter snapshot the sweep was evaluated with.
    pub params: SystemParams<T>,
}

pub(crate) fn validate_grid<T: Float>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::rejected("empty detuning grid"));
    }
    if grid.iter().any(|d| !d.is_finite()) {
        return Err(Error::rejected("detuning grid must be finite"));
    }
    // Finiteness was checked above, so a plain comparison is NaN-safe here.
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::rejected(
            "detuning grid must be strictly increasing",
        ));
    }
    Ok(())
}

/// Continues principal phases across branch jumps: any step larger than pi
/// in magnitude is brought back by whole turns. The first point keeps its
/// principal value.
pub(crate) fn unwrap_phases<T: Float>(responses: &mut [ComplexResponse<T>]) {
    for i in 1..responses.len() {
        let mut step = responses[i].phase - responses[i - 1].phase;
        while step > T::PI() {
            step -= T::TAU();
        }
        while step < -T::PI() {
            step += T::TAU();
        }
        responses[i].phase_unwrapped = responses[i - 1].phase_unwrapped + step;
    }
}

pub(crate) fn sweep_amplitudes<T: Float>(
    params: &SystemParams<T>,
    grid: &[T],
    dipole_detuning: Complex<T>,
) -> Vec<ComplexResponse<T>> {
    // Embarrassingly parallel; per-point work is identical to the sequential
    // path, so the result is bit-identical regardless of thread count.
    let mut responses: Vec<ComplexResponse<T>> = grid
        .par_iter()
        .map(|&dw| {
            ComplexResponse::from_amplitude(reflection_amplitude(params, dw, dipole_detuning))
        })
        .collect();
    unwrap_phases(&mut responses);
    responses
}

/// Evaluates the reflection over a strictly increasing detuning grid.
pub fn sweep<T: Float>(params: &SystemParams<T>, grid: &[T]) -> Result<SpectrumGrid<T>> {
    params.ensure_usable()?;
    validate_grid(grid)?;
    let responses = sweep_amplitudes(params, grid, Complex::from(params.delta));
    Ok(SpectrumGrid {
        detunings: grid.to_vec(),
        responses,
        params: *params,
    })
}

/// 17 significant digits: enough to reproduce an f64 bit pattern exactly.
pub(crate) fn fmt_full<T: Float>(value: T) -> String {
    format!("{value:.16e}")
}

impl<T: Float> SpectrumGrid<T> {
    /// Serializes the sweep as CSV with the fixed header
    /// `detuning_thz,re_r,im_r,reflectivity,phase_rad,phase_unwrapped_rad`
    /// and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 + 140 * self.detunings.len());
        out.push_str("detuning_thz,re_r,im_r,reflectivity,phase_rad,phase_unwrapped_rad\n");
        for (dw, resp) in self.detunings.iter().zip(&self.responses) {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_full(*dw),
                fmt_full(resp.r.re),
                fmt_full(resp.r.im),
                fmt_full(resp.reflectivity),
                fmt_full(resp.phase),
                fmt_full(resp.phase_unwrapped),
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    /// Detunings where the principal-value phase crosses `level`, linearly
    /// interpolated between grid points; segments that wrap the branch cut
    /// (step larger than pi) are skipped.
    pub fn phase_crossings(&self, level: T) -> Vec<T> {
        let mut crossings = Vec::new();
        for i in 1..self.responses.len() {
            let d0 = self.responses[i - 1].phase - level;
            let d1 = self.responses[i].phase - level;
            if (d1 - d0).abs() > T::PI() {
                continue;
            }
            if d0 == T::zero() && d1 == T::zero() {
                continue;
            }
            if d0 * d1 <= T::zero() && d1 != T::zero() {
                let x0 = self.detunings[i - 1];
                let x1 = self.detunings[i];
                let t = d0 / (d0 - d1);
                let x = x0 + t * (x1 - x0);
                if crossings.last() != Some(&x) {
                    crossings.push(x);
                }
            } else if d1 == T::zero() && d0 != T::zero() {
                let x = self.detunings[i];
                if crossings.last() != Some(&x) {
                    crossings.push(x);
                }
            }
        }
        crossings
    }
}

/// Evenly spaced grid of `points >= 1` detunings covering [min, max].
pub fn linspace<T: Float>(min: T, max: T, points: usize) -> Vec<T> {
    if points <= 1 {
        return vec![min];
    }
    let span = max - min;
    let last = T::of((points - 1) as f64);
    (0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                min + span * (T::of(i as f64) / last)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = SystemParams<f64>;

    const TOL: f64 = 1e-12;

    // Values frozen from a 50-digit independent evaluation of the closed
    // forms at the default parameter set.
    const BARE_R0: f64 = 0.967_213_114_754_098_3;
    const BARE_REFLECTIVITY: f64 = 0.935_501_209_352_324_6;
    const PURCELL: f64 = 59.016_393_442_622_95;
    const RESONANT_R: f64 = 0.967_222_070_472_548_5;
    const CROSSOVER: f64 = 0.029_508_196_721_311_476;
    const HALF_PHASE_AT_CROSSOVER: f64 = -1.563_708_411_605_616_6;

    fn defaults() -> P {
        P::default()
    }

    fn bare() -> P {
        P {
            g1: 0.0,
            ..P::default()
        }
    }

    #[test]
    fn coupled_cavity_reflects_in_phase_on_resonance() {
        let resp = reflection(&defaults(), 0.0).unwrap();
        assert_eq!(resp.r.im, 0.0);
        assert!((resp.r.re - RESONANT_R).abs() < TOL);
        assert_eq!(resp.phase, 0.0);
        assert_eq!(resp.phase_unwrapped, 0.0);
        assert!((resp.reflectivity - RESONANT_R * RESONANT_R).abs() < TOL);
    }

    #[test]
    fn bare_cavity_reflects_with_a_pi_phase_on_resonance() {
        let resp = reflection(&bare(), 0.0).unwrap();
        assert!((resp.r.re + BARE_R0).abs() < TOL);
        assert_eq!(resp.r.im, 0.0);
        assert_eq!(resp.phase, std::f64::consts::PI);
        assert!((resp.reflectivity - BARE_REFLECTIVITY).abs() < TOL);
    }

    #[test]
    fn lossless_bare_cavity_is_a_perfect_mirror() {
        let p = P {
            g1: 0.0,
            kappa: 0.0,
            ..P::default()
        };
        let resp = reflection(&p, 0.0).unwrap();
        assert_eq!(resp.r, Complex::new(-1.0, 0.0));
        assert_eq!(resp.reflectivity, 1.0);
    }

    #[test]
    fn far_detuned_drive_sees_a_plain_mirror() {
        let p = defaults();
        let resp = reflection(&p, 1000.0 * p.gamma).unwrap();
        assert!((resp.r - Complex::new(1.0, 0.0)).norm() <= 1e-2);
        assert!(resp.phase.abs() < 1e-2);
    }

    #[test]
    fn reflection_rejects_bad_inputs() {
        assert!(matches!(
            reflection(&defaults(), f64::NAN),
            Err(Error::Rejected(_))
        ));
        let p = P {
            gamma: -1.0,
            ..P::default()
        };
        assert!(matches!(reflection(&p, 0.0), Err(Error::Rejected(_))));
    }

    #[test]
    fn purcell_factor_examples() {
        assert!((purcell_factor(&defaults()).unwrap() - PURCELL).abs() < TOL);
        assert_eq!(purcell_factor(&bare()).unwrap(), 0.0);
        let unit = P {
            g1: 0.5,
            tau2: 1.0,
            gamma: 1.0,
            kappa: 0.0,
            ..P::default()
        };
        assert_eq!(purcell_factor(&unit).unwrap(), 1.0);
        let degenerate = P {
            tau2: 0.0,
            ..P::default()
        };
        assert!(matches!(
            purcell_factor(&degenerate),
            Err(Error::Rejected(_))
        ));
    }

    #[test]
    fn bare_reflectivity_examples() {
        assert!((bare_reflectivity(&defaults()).unwrap() - BARE_R0).abs() < TOL);
        let lossless = P {
            kappa: 0.0,
            ..P::default()
        };
        assert_eq!(bare_reflectivity(&lossless).unwrap(), 1.0);
        let critical = P {
            kappa: 6.0,
            ..P::default()
        };
        assert_eq!(bare_reflectivity(&critical).unwrap(), 0.0);
        let degenerate = P {
            gamma: 0.0,
            kappa: 0.0,
            ..P::default()
        };
        assert!(matches!(
            bare_reflectivity(&degenerate),
            Err(Error::Rejected(_))
        ));
    }

    #[test]
    fn resonant_reflection_matches_the_direct_evaluation() {
        let p = defaults();
        let closed = resonant_reflection(&p).unwrap();
        assert!((closed - RESONANT_R).abs() < TOL);
        let direct = reflection(&p, 0.0).unwrap().r;
        assert!((direct.re - closed).abs() <= 1e-12 * (1.0 + closed.abs()));
        assert!(matches!(
            resonant_reflection(&P {
                delta: 0.1,
                ..P::default()
            }),
            Err(Error::Rejected(_))
        ));
    }

    #[test]
    fn crossover_detuning_examples() {
        assert!((crossover_detuning(&defaults()).unwrap() - CROSSOVER).abs() < TOL);
        assert_eq!(crossover_detuning(&bare()).unwrap(), 0.0);
        let unit = P {
            g1: 1.0,
            gamma: 2.0,
            kappa: 0.0,
            ..P::default()
        };
        assert_eq!(crossover_detuning(&unit).unwrap(), 1.0);
    }

    #[test]
    fn phase_at_the_crossover_detuning_is_half_way() {
        let p = defaults();
        let dw = crossover_detuning(&p).unwrap();
        let resp = reflection(&p, dw).unwrap();
        assert!((resp.phase - HALF_PHASE_AT_CROSSOVER).abs() < TOL);
        assert!((resp.phase.abs() - std::f64::consts::FRAC_PI_2).abs() <= 0.35);
    }

    #[test]
    fn phase_contrast_examples() {
        let p = defaults();
        let on_resonance = phase_contrast(&p, 0.0).unwrap();
        assert!((on_resonance - std::f64::consts::PI).abs() < TOL);
        assert_eq!(phase_contrast(&bare(), 0.0).unwrap(), 0.0);
        assert!(phase_contrast(&p, 100.0 * p.gamma).unwrap().abs() < 0.01);
    }

    #[test]
    fn sweep_handles_degenerate_grids() {
        let p = bare();
        assert!(matches!(sweep(&p, &[]), Err(Error::Rejected(_))));
        assert!(matches!(
            sweep(&p, &[0.0, 0.0]),
            Err(Error::Rejected(_))
        ));
        assert!(matches!(
            sweep(&p, &[1.0, -1.0]),
            Err(Error::Rejected(_))
        ));
        assert!(matches!(
            sweep(&p, &[0.0, f64::INFINITY]),
            Err(Error::Rejected(_))
        ));

        let single = sweep(&p, &[0.0]).unwrap();
        assert_eq!(single.responses.len(), 1);
        let resp = single.responses[0];
        assert!((resp.reflectivity - BARE_REFLECTIVITY).abs() < TOL);
        assert_eq!(resp.phase, std::f64::consts::PI);
        assert_eq!(resp.phase_unwrapped, resp.phase);
    }

    #[test]
    fn symmetric_sweep_is_conjugate_symmetric_for_a_resonant_dipole() {
        let p = defaults();
        let grid = sweep(&p, &[-0.5, 0.5]).unwrap();
        let left = grid.responses[0].r;
        let right = grid.responses[1].r;
        assert!((left - right.conj()).norm() <= 1e-12);
    }

    #[test]
    fn sweep_matches_point_queries_bit_for_bit() {
        let p = defaults();
        let grid_points = linspace(-3.0, 3.0, 41);
        let swept = sweep(&p, &grid_points).unwrap();
        for (dw, resp) in grid_points.iter().zip(&swept.responses) {
            let point = reflection(&p, *dw).unwrap();
            assert_eq!(point.r, resp.r);
            assert_eq!(point.reflectivity, resp.reflectivity);
            assert_eq!(point.phase, resp.phase);
        }
    }

    #[test]
    fn unwrapped_phase_is_continuous_across_the_branch_cut() {
        let p = defaults();
        // The principal phase of the coupled cavity wraps between -3 and 3.
        let grid_points = linspace(-3.0, 3.0, 601);
        let swept = sweep(&p, &grid_points).unwrap();
        for pair in swept.responses.windows(2) {
            let step = pair[1].phase_unwrapped - pair[0].phase_unwrapped;
            assert!(step.abs() <= std::f64::consts::PI);
        }
        let first = &swept.responses[0];
        assert_eq!(first.phase_unwrapped, first.phase);
    }

    #[test]
    fn csv_header_and_row_format_are_fixed() {
        let p = bare();
        let grid = sweep(&p, &[0.0]).unwrap();
        let csv = grid.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "detuning_thz,re_r,im_r,reflectivity,phase_rad,phase_unwrapped_rad"
        );
        let row = lines.next().unwrap();
        assert_eq!(lines.next(), None);
        let fields: Vec<_> = row.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], "0.0000000000000000e0");
        let r = grid.responses[0];
        assert_eq!(fields[1].parse::<f64>().unwrap(), r.r.re);
        assert_eq!(fields[3].parse::<f64>().unwrap(), r.reflectivity);
        assert_eq!(fields[4].parse::<f64>().unwrap(), r.phase);
    }

    #[test]
    fn phase_crossings_locate_the_half_phase_points() {
        let p = defaults();
        let grid_points = linspace(-1.0, 1.0, 2001);
        let swept = sweep(&p, &grid_points).unwrap();
        let crossings = swept.phase_crossings(std::f64::consts::FRAC_PI_2);
        assert_eq!(crossings.len(), 1);
        // The positive-phase crossing sits at minus the crossover detuning.
        assert!((crossings[0] + CROSSOVER).abs() < 2e-3);
    }

    #[test]
    fn linspace_covers_the_endpoints() {
        let g = linspace(-3.0, 3.0, 2001);
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -3.0);
        assert_eq!(g[2000], 3.0);
        assert_eq!(g[1000], 0.0);
        assert_eq!(linspace(1.5, 2.0, 1), vec![1.5]);
    }

    #[test]
    fn float32_instantiation_agrees_with_f64_at_reduced_precision() {
        let p64 = defaults();
        let p32 = SystemParams::<f32> {
            gamma: 6.0,
            kappa: 0.1,
            tau2: 0.001,
            tau3: 0.001,
            g1: 0.3,
            g2: 0.3,
            delta: 0.0,
            omega0: 1000.0,
            nu: 1000.0,
        };
        let r64 = reflection(&p64, 0.25).unwrap().r;
        let r32 = reflection(&p32, 0.25).unwrap().r;
        assert!((r64.re - r32.re as f64).abs() < 1e-5);
        assert!((r64.im - r32.im as f64).abs() < 1e-5);
    }
}
