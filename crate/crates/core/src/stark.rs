//! Optical Stark shift of the dipole and the giant Kerr response it creates.
//!
//! A second field, detuned by `Delta` from the emitter's 2-3 transition,
//! dresses level 2. To lowest order in the drive the dipole resonance picks
//! up the complex operator
//!
//! ```text
//! S = 2 g2^2 n (Delta + i tau3/2) / (Delta^2 + tau3^2/4)
//! ```
//!
//! per intracavity photon number `n`: `Re S` shifts the dipole frequency and
//! `Im S >= 0` is two-photon absorption through level 3. Substituting
//! `delta -> delta + S` into the reflection formula translates the whole
//! response spectrum, so one intracavity photon moves the pi-flip feature by
//! about `2 g2^2 / Delta`, a Kerr-type nonlinearity at the single-photon
//! level. An infinite `Delta` is the first-class "drive off" sentinel with
//! `S = 0` exactly.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::Float;
use crate::params::SystemParams;
use crate::spectrum::{
    reflection_amplitude, sweep_amplitudes, validate_grid, ComplexResponse, SpectrumGrid,
};

/// How the strength of the Stark drive is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveStrength<T> {
    /// Intracavity photon number of the drive field.
    PhotonNumber(T),
    /// Input photon flux (photons/ps); the intracavity number is flux/gamma.
    InputFlux(T),
}

/// The field driving the 2-3 transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Float + Serialize",
    deserialize = "T: Float + Deserialize<'de>"
))]
pub struct StarkDrive<T> {
    /// Detuning of the drive from the 2-3 transition (rad/ps). Infinity is
    /// the "drive off" sentinel.
    #[serde(with = "detuning_serde")]
    pub detuning: T,
    /// Drive strength, as a photon number or an input flux.
    pub strength: DriveStrength<T>,
}

impl<T: Float> StarkDrive<T> {
    /// Drive with a fixed intracavity photon number.
    pub fn photon_number(detuning: T, n: T) -> Self {
        StarkDrive {
            detuning,
            strength: DriveStrength::PhotonNumber(n),
        }
    }

    /// Drive specified by its input photon flux.
    pub fn input_flux(detuning: T, flux: T) -> Self {
        StarkDrive {
            detuning,
            strength: DriveStrength::InputFlux(flux),
        }
    }

    /// The "drive off" sentinel: infinitely detuned, zero effect.
    pub fn off() -> Self {
        StarkDrive::photon_number(T::infinity(), T::one())
    }

    /// Intracavity photon number, resolving a flux against `gamma`.
    pub fn photon_count(&self, params: &SystemParams<T>) -> T {
        match self.strength {
            DriveStrength::PhotonNumber(n) => n,
            DriveStrength::InputFlux(flux) => flux / params.gamma,
        }
    }
}

/// Serializes possibly infinite detunings as the string "inf" / "-inf"
/// (JSON has no infinity literal) and numbers otherwise.
mod detuning_serde {
    use super::Float;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T, S>(value: &T, serializer: S) -> Result<S::Ok, S::Error>
    where
        T: Float + Serialize,
        S: Serializer,
    {
        if value.is_infinite() {
            serializer.serialize_str(if value.is_sign_positive() { "inf" } else { "-inf" })
        } else {
            value.serialize(serializer)
        }
    }

    pub fn deserialize<'de, T, D>(deserializer: D) -> Result<T, D::Error>
    where
        T: Float + Deserialize<'de>,
        D: Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw<T> {
            Number(T),
            Text(String),
        }
        match Raw::<T>::deserialize(deserializer)? {
            Raw::Number(x) => Ok(x),
            Raw::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" => Ok(T::infinity()),
                "-inf" | "-infinity" => Ok(T::neg_infinity()),
                other => Err(serde::de::Error::custom(format!(
                    "invalid detuning string {other:?}; expected a number or \"inf\""
                ))),
            },
        }
    }
}

/// Value of the Stark operator for one drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarkValue<T> {
    /// S = 2 g2^2 n (Delta + i tau3/2) / (Delta^2 + tau3^2/4).
    pub s: Complex<T>,
    /// Re(S): frequency shift of the dipole resonance (rad/ps).
    pub shift: T,
    /// Im(S): two-photon absorption rate through level 3 (rad/ps).
    pub two_photon_loss: T,
}

impl<T: Float> StarkValue<T> {
    fn new(s: Complex<T>) -> Self {
        StarkValue {
            s,
            shift: s.re,
            two_photon_loss: s.im,
        }
    }
}

/// Intracavity response of the Stark drive itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityDriveResponse<T> {
    /// Exact amplitude ratio b/a = -sqrt(gamma) / (i (omega0 - nu - Delta) + gamma).
    pub exact: Complex<T>,
    /// Wideband approximation -1/sqrt(gamma), valid when the drive lands
    /// near the cavity resonance.
    pub approximate: Complex<T>,
    /// |exact - approximate| / |approximate|.
    pub relative_error: T,
}

/// Ratio of the intracavity drive amplitude to the input drive amplitude.
///
/// The drive enters the same single-sided cavity, so its buildup depends on
/// how far `omega0 - nu - Delta` (the drive's offset from the cavity line)
/// falls within the cavity response of width `gamma`.
pub fn cavity_amplitude_ratio<T: Float>(
    params: &SystemParams<T>,
    drive_detuning: T,
) -> Result<CavityDriveResponse<T>> {
    params.ensure_usable()?;
    if drive_detuning.is_nan() {
        return Err(Error::rejected("stark drive detuning must not be NaN"));
    }
    let sqrt_gamma = params.gamma.sqrt();
    let approximate = Complex::from(-(T::one() / sqrt_gamma));
    let mismatch = params.omega0 - params.nu - drive_detuning;
    let exact = if drive_detuning.is_infinite() {
        // Infinitely detuned drive builds up no intracavity amplitude.
        Complex::from(T::zero())
    } else if mismatch == T::zero() {
        // On the cavity line the ratio reduces algebraically to -1/sqrt(gamma).
        approximate
    } else {
        Complex::from(-sqrt_gamma) / Complex::new(params.gamma, mismatch)
    };
    let relative_error = (exact - approximate).norm() * sqrt_gamma;
    Ok(CavityDriveResponse {
        exact,
        approximate,
        relative_error,
    })
}

/// Evaluates the Stark operator S for one drive.
///
/// Exactly linear in the photon number by construction: the unit-photon
/// value is computed once and scaled by `n` as the final operation.
pub fn stark_operator<T: Float>(
    params: &SystemParams<T>,
    drive: &StarkDrive<T>,
) -> Result<StarkValue<T>> {
    // Report the structural singularity before general validation so the
    // caller learns the precise reason this corner has no value.
    if drive.detuning == T::zero() && params.tau3 == T::zero() {
        return Err(Error::singular(
            "stark drive exactly on the 2-3 resonance with tau3 = 0",
        ));
    }
    params.ensure_usable()?;
    if drive.detuning.is_nan() {
        return Err(Error::rejected("stark drive detuning must not be NaN"));
    }
    let n = drive.photon_count(params);
    if !n.is_finite() || n < T::zero() {
        return Err(Error::rejected(
            "stark drive photon number must be finite and non-negative",
        ));
    }
    if drive.detuning.is_infinite() {
        return Ok(StarkValue::new(Complex::from(T::zero())));
    }
    let half_tau3 = params.tau3 * T::of(0.5);
    let denom = drive.detuning * drive.detuning + half_tau3 * half_tau3;
    let scale = T::of(2.0) * params.g2 * params.g2 / denom;
    let per_photon = Complex::new(drive.detuning, half_tau3) * scale;
    Ok(StarkValue::new(per_photon * n))
}

/// Sign convention for Im(S) inside the dipole denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossSign {
    /// Substitute S literally: i (dw + delta + S) + tau2/2, so Im(S)
    /// subtracts from the dipole damping. Matches the closed forms this
    /// crate cross-validates; the default.
    #[default]
    Literal,
    /// Conjugate S so two-photon absorption adds damping instead. Physically
    /// motivated alternative reading; changes |r| at order Im(S)/tau2.
    Damping,
}

fn effective_dipole_detuning<T: Float>(
    params: &SystemParams<T>,
    value: StarkValue<T>,
    loss_sign: LossSign,
) -> Complex<T> {
    let s = match loss_sign {
        LossSign::Literal => value.s,
        LossSign::Damping => value.s.conj(),
    };
    Complex::from(params.delta) + s
}

/// Reflection with the dipole Stark-shifted by `drive`, using the literal
/// Im(S) sign convention.
pub fn shifted_reflection<T: Float>(
    params: &SystemParams<T>,
    drive: &StarkDrive<T>,
    delta_omega: T,
) -> Result<ComplexResponse<T>> {
    shifted_reflection_with(params, drive, delta_omega, LossSign::Literal)
}

/// Reflection with the dipole Stark-shifted by `drive` under an explicit
/// Im(S) sign convention.
pub fn shifted_reflection_with<T: Float>(
    params: &SystemParams<T>,
    drive: &StarkDrive<T>,
    delta_omega: T,
    loss_sign: LossSign,
) -> Result<ComplexResponse<T>> {
    let value = stark_operator(params, drive)?;
    if !delta_omega.is_finite() {
        return Err(Error::rejected("delta_omega must be finite"));
    }
    let detuning = effective_dipole_detuning(params, value, loss_sign);
    Ok(ComplexResponse::from_amplitude(reflection_amplitude(
        params,
        delta_omega,
        detuning,
    )))
}

/// Sweeps the Stark-shifted reflection over a detuning grid for each drive,
/// using the literal Im(S) sign convention.
pub fn kerr_sweep<T: Float>(
    params: &SystemParams<T>,
    drives: &[StarkDrive<T>],
    grid: &[T],
) -> Result<Vec<SpectrumGrid<T>>> {
    kerr_sweep_with(params, drives, grid, LossSign::Literal)
}

/// Sweeps the Stark-shifted reflection over a detuning grid for each drive
/// under an explicit Im(S) sign convention.
pub fn kerr_sweep_with<T: Float>(
    params: &SystemParams<T>,
    drives: &[StarkDrive<T>],
    grid: &[T],
    loss_sign: LossSign,
) -> Result<Vec<SpectrumGrid<T>>> {
    params.ensure_usable()?;
    if drives.is_empty() {
        return Err(Error::rejected("empty stark drive list"));
    }
    validate_grid(grid)?;
    let mut sweeps = Vec::with_capacity(drives.len());
    for drive in drives {
        let value = stark_operator(params, drive)?;
        let detuning = effective_dipole_detuning(params, value, loss_sign);
        let responses = sweep_amplitudes(params, grid, detuning);
        sweeps.push(SpectrumGrid {
            detunings: grid.to_vec(),
            responses,
            params: *params,
        });
    }
    Ok(sweeps)
}

/// Drive description attached to each Kerr sweep (the JSON sidecar schema).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Float + Serialize",
    deserialize = "T: Float + Deserialize<'de>"
))]
pub struct DriveSidecar<T> {
    /// Drive detuning from the 2-3 transition; "inf" when the drive is off.
    #[serde(with = "detuning_serde")]
    pub delta: T,
    /// Resolved intracavity photon number.
    pub n_photons: T,
    /// Re(S) actually applied.
    pub s_re: T,
    /// Im(S) actually applied.
    pub s_im: T,
}

impl<T: Float> DriveSidecar<T> {
    /// Resolves a drive against the parameter set.
    pub fn describe(params: &SystemParams<T>, drive: &StarkDrive<T>) -> Result<Self> {
        let value = stark_operator(params, drive)?;
        Ok(DriveSidecar {
            delta: drive.detuning,
            n_photons: drive.photon_count(params),
            s_re: value.s.re,
            s_im: value.s.im,
        })
    }
}
