//! System parameters and their validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::Float;

/// Rates and frequencies of the coupled cavity-emitter system.
///
/// All values are angular rates in rad/ps; interfaces label them THz since
/// the two are numerically interchangeable here. The emitter is a three-level
/// system: ground state 1, excited state 2 reached through the cavity-coupled
/// 1-2 transition, and a level 3 addressed by a separate field on the 2-3
/// transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T> {
    /// Cavity decay rate into the input/output waveguide.
    pub gamma: T,
    /// Cavity loss rate to all other channels (absorption, scattering).
    pub kappa: T,
    /// Dipole dephasing rate of the 1-2 transition.
    pub tau2: T,
    /// Dephasing rate of the 2-3 coherence seen by the Stark field.
    pub tau3: T,
    /// Vacuum Rabi coupling between the cavity mode and the 1-2 transition.
    pub g1: T,
    /// Coupling between the Stark field and the 2-3 transition.
    pub g2: T,
    /// Dipole detuning from the cavity resonance, omega_dipole - omega0.
    pub delta: T,
    /// Cavity resonance frequency.
    pub omega0: T,
    /// Frequency of the 2-3 transition.
    pub nu: T,
}

impl<T: Float> Default for SystemParams<T> {
    /// Experimentally motivated defaults: a Q = 10,000 photonic-crystal
    /// cavity (`gamma` = 6, `kappa` = 0.1, `omega0` = 1000) strongly coupled
    /// to a quantum-dot-like emitter (`g1` = `g2` = 0.3, `tau2` = `tau3` =
    /// 0.001), dipole on resonance (`delta` = 0) and the 2-3 transition at
    /// the cavity center (`nu` = `omega0`).
    fn default() -> Self {
        SystemParams {
            gamma: T::of(6.0),
            kappa: T::of(0.1),
            tau2: T::of(0.001),
            tau3: T::of(0.001),
            g1: T::of(0.3),
            g2: T::of(0.3),
            delta: T::zero(),
            omega0: T::of(1000.0),
            nu: T::of(1000.0),
        }
    }
}

/// Severity of a single validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// The parameter set cannot be used at all.
    Hard,
    /// The parameter set is usable but sits in a regime the model was not
    /// built for.
    Warning,
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

/// Outcome of [`SystemParams::validate`]: every finding, never a panic or an
/// early return, so callers can report all problems at once.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    fn push(&mut self, severity: Severity, message: impl Into<String>) {
        self.findings.push(Finding {
            severity,
            message: message.into(),
        });
    }

    /// True when no hard failure was found (warnings allowed).
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    /// Hard-failure messages.
    pub fn errors(&self) -> impl Iterator<Item = &str> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Hard)
            .map(|f| f.message.as_str())
    }

    /// Warning messages.
    pub fn warnings(&self) -> impl Iterator<Item = &str> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Warning)
            .map(|f| f.message.as_str())
    }
}

impl<T: Float> SystemParams<T> {
    /// Checks every invariant and collects findings instead of failing fast.
    ///
    /// Hard failures: any non-finite field; `gamma`, `tau2`, `tau3` not
    /// strictly positive; `kappa`, `g1`, `g2` negative. Warnings: the dipole
    /// or the 2-3 transition detuned from the cavity by at least the total
    /// linewidth `gamma + kappa`, where the single-mode model loses meaning.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let fields = [
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("tau2", self.tau2),
            ("tau3", self.tau3),
            ("g1", self.g1),
            ("g2", self.g2),
            ("delta", self.delta),
            ("omega0", self.omega0),
            ("nu", self.nu),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                report.push(Severity::Hard, format!("{name} must be finite"));
            }
        }
        if self.gamma.is_finite() && self.gamma <= T::zero() {
            report.push(Severity::Hard, "gamma must be positive");
        }
        if self.kappa.is_finite() && self.kappa < T::zero() {
            report.push(Severity::Hard, "kappa must be non-negative");
        }
        if self.tau2.is_finite() && self.tau2 <= T::zero() {
            report.push(Severity::Hard, "tau2 must be positive");
        }
        if self.tau3.is_finite() && self.tau3 <= T::zero() {
            report.push(Severity::Hard, "tau3 must be positive");
        }
        if self.g1.is_finite() && self.g1 < T::zero() {
            report.push(Severity::Hard, "g1 must be non-negative");
        }
        if self.g2.is_finite() && self.g2 < T::zero() {
            report.push(Severity::Hard, "g2 must be non-negative");
        }
        if report.is_valid() {
            let linewidth = self.gamma + self.kappa;
            if self.delta.abs() >= linewidth {
                report.push(
                    Severity::Warning,
                    format!(
                        "dipole outside cavity linewidth: |delta| = {} >= gamma + kappa = {}",
                        self.delta.abs(),
                        linewidth
                    ),
                );
            }
            if (self.omega0 - self.nu).abs() >= linewidth {
                report.push(
                    Severity::Warning,
                    format!(
                        "stark transition outside cavity linewidth: |omega0 - nu| = {} >= gamma + kappa = {}",
                        (self.omega0 - self.nu).abs(),
                        linewidth
                    ),
                );
            }
        }
        report
    }

    /// Fails with the first hard validation finding, if any.
    pub fn ensure_usable(&self) -> Result<()> {
        let report = self.validate();
        let first = report.errors().next().map(str::to_owned);
        match first {
            None => Ok(()),
            Some(msg) => Err(Error::Rejected(msg)),
        }
    }

    /// Largest input photon flux (per ps) for which the weak-excitation
    /// treatment of the dipole holds: g1^2 / gamma.
    pub fn weak_excitation_bound(&self) -> T {
        self.g1 * self.g1 / self.gamma
    }

    /// Cavity quality factor omega0 / kappa (infinite for a lossless cavity).
    pub fn quality_factor(&self) -> T {
        self.omega0 / self.kappa
    }

    /// Total cavity linewidth gamma + kappa.
    pub fn total_linewidth(&self) -> T {
        self.gamma + self.kappa
    }
}
