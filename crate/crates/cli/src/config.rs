//! Run configuration: defaults per command, text/manifest config files,
//! flag overrides, and the serializable manifest echoed with every run.

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use dit_core::stark::LossSign;
use dit_core::{StarkDrive64, SystemParams64};

use crate::args::{Cli, CommonArgs};

/// Which pipeline a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Phase,
    Kerr,
    OracleCheck,
    Figures,
}

/// Detuning grid specification in THz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if self.min >= self.max {
            return Err(format!("grid needs min < max, got {}:{}", self.min, self.max));
        }
        if self.points < 2 {
            return Err(format!("grid needs at least 2 points, got {}", self.points));
        }
        Ok(())
    }

    pub fn to_vec(&self) -> Vec<f64> {
        dit_core::spectrum::linspace(self.min, self.max, self.points)
    }
}

/// Output artifact kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// Complete, self-describing description of one run. Serialized as
/// `manifest.json` next to the outputs; feeding that file back through
/// `--config` reproduces the run byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: SystemParams64,
    pub grid: GridSpec,
    pub drives: Vec<StarkDrive64>,
    pub tol: f64,
    pub loss_sign: LossSign,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl RunConfig {
    /// Per-command defaults: spectra sweep +-3 THz, Kerr sweeps +-1 THz,
    /// the oracle checks 41 points at 1e-6.
    pub fn defaults_for(command: CommandKind) -> Self {
        let grid = match command {
            CommandKind::Spectrum | CommandKind::Phase | CommandKind::Figures => GridSpec {
                min: -3.0,
                max: 3.0,
                points: 2001,
            },
            CommandKind::Kerr => GridSpec {
                min: -1.0,
                max: 1.0,
                points: 2001,
            },
            CommandKind::OracleCheck => GridSpec {
                min: -1.0,
                max: 1.0,
                points: 41,
            },
        };
        let formats = match command {
            CommandKind::OracleCheck => vec![OutputFormat::Json],
            CommandKind::Figures => {
                vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg]
            }
            _ => vec![OutputFormat::Csv, OutputFormat::Json],
        };
        RunConfig {
            command,
            params: SystemParams64::default(),
            grid,
            drives: Vec::new(),
            tol: 1e-6,
            loss_sign: LossSign::Literal,
            output_dir: PathBuf::from("out"),
            formats,
        }
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }

    /// The drive series swept when none is given explicitly: drive off plus
    /// red detunings -20 g2, -10 g2, -6 g2 at one intracavity photon.
    pub fn preset_drives(params: &SystemParams64) -> Vec<StarkDrive64> {
        vec![
            StarkDrive64::off(),
            StarkDrive64::photon_number(-20.0 * params.g2, 1.0),
            StarkDrive64::photon_number(-10.0 * params.g2, 1.0),
            StarkDrive64::photon_number(-6.0 * params.g2, 1.0),
        ]
    }
}

/// Parses a rate/frequency with an optional THz/GHz/MHz suffix (THz when
/// bare); case-insensitive, spaces between number and unit allowed.
pub fn parse_rate(input: &str) -> Result<f64, String> {
    let lower = input.trim().to_ascii_lowercase();
    let (number, scale) = if let Some(n) = lower.strip_suffix("thz") {
        (n, 1.0)
    } else if let Some(n) = lower.strip_suffix("ghz") {
        (n, 1e-3)
    } else if let Some(n) = lower.strip_suffix("mhz") {
        (n, 1e-6)
    } else {
        (lower.as_str(), 1.0)
    };
    number
        .trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| format!("invalid rate {input:?}: expected a number with optional THz/GHz/MHz suffix"))
}

/// Parses MIN:MAX:POINTS.
pub fn parse_grid(input: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = input.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("invalid grid {input:?}: expected MIN:MAX:POINTS"));
    }
    let min = parse_rate(parts[0])?;
    let max = parse_rate(parts[1])?;
    let points = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("invalid grid point count {:?}", parts[2]))?;
    Ok(GridSpec { min, max, points })
}

/// Parses DETUNING:PHOTONS where DETUNING may be "inf" / "-inf".
pub fn parse_drive(input: &str) -> Result<StarkDrive64, String> {
    let parts: Vec<&str> = input.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("invalid drive {input:?}: expected DETUNING:PHOTONS"));
    }
    let detuning = match parts[0].trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        "-inf" | "-infinity" => f64::NEG_INFINITY,
        _ => parse_rate(parts[0])?,
    };
    let photons = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("invalid photon number {:?}", parts[1]))?;
    if !photons.is_finite() || photons < 0.0 {
        return Err(format!("photon number must be non-negative, got {photons}"));
    }
    Ok(StarkDrive64::photon_number(detuning, photons))
}

/// Parses the comma-separated format list into a deduplicated canonical
/// order (csv, json, svg).
pub fn parse_formats(input: &str) -> Result<Vec<OutputFormat>, String> {
    let mut formats = Vec::new();
    for piece in input.split(',') {
        let format = match piece.trim().to_ascii_lowercase().as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            "svg" => OutputFormat::Svg,
            other => return Err(format!("unknown format {other:?}: expected csv, json or svg")),
        };
        if !formats.contains(&format) {
            formats.push(format);
        }
    }
    if formats.is_empty() {
        return Err("format list is empty".into());
    }
    formats.sort();
    Ok(formats)
}

pub fn parse_loss_sign(input: &str) -> Result<LossSign, String> {
    match input.trim().to_ascii_lowercase().as_str() {
        "literal" => Ok(LossSign::Literal),
        "damping" => Ok(LossSign::Damping),
        other => Err(format!("unknown loss sign {other:?}: expected literal or damping")),
    }
}

/// Applies a flat `key = value` parameter file. Unknown keys and bad values
/// report the offending line number. `#` starts a comment.
pub fn apply_text_config(params: &mut SystemParams64, text: &str) -> Result<(), String> {
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {line_no}: expected `key = value`, got {raw:?}"));
        };
        let value = parse_rate(value).map_err(|e| format!("config line {line_no}: {e}"))?;
        match key.trim() {
            "gamma" => params.gamma = value,
            "kappa" => params.kappa = value,
            "tau2" => params.tau2 = value,
            "tau3" => params.tau3 = value,
            "g1" => params.g1 = value,
            "g2" => params.g2 = value,
            "delta" => params.delta = value,
            "omega0" => params.omega0 = value,
            "nu" => params.nu = value,
            other => {
                return Err(format!("config line {line_no}: unknown key {other:?}"));
            }
        }
    }
    Ok(())
}

/// Builds the effective run configuration: per-command defaults, then the
/// config file (flat text or JSON manifest), then flag overrides, and
/// finally the preset drive series for Kerr runs that specify none.
pub fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let (kind, common) = cli.command.split();
    let mut rc = RunConfig::defaults_for(kind);

    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        if text.trim_start().starts_with('{') {
            rc = serde_json::from_str(&text)
                .map_err(|e| format!("invalid manifest {}: {e}", path.display()))?;
            // The subcommand actually typed wins over the recorded one.
            rc.command = kind;
        } else {
            apply_text_config(&mut rc.params, &text)
                .map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }

    apply_flags(&mut rc, common)?;

    if rc.drives.is_empty()
        && matches!(rc.command, CommandKind::Kerr | CommandKind::Figures)
    {
        rc.drives = RunConfig::preset_drives(&rc.params);
    }

    rc.grid.validate()?;
    if rc.tol <= 0.0 || !rc.tol.is_finite() {
        return Err(format!("tolerance must be positive, got {}", rc.tol));
    }
    Ok(rc)
}

type ParamSetter = fn(&mut SystemParams64, f64);

fn apply_flags(rc: &mut RunConfig, common: &CommonArgs) -> Result<(), String> {
    let fields: [(&str, &Option<String>, ParamSetter); 9] = [
        ("gamma", &common.gamma, |p, v| p.gamma = v),
        ("kappa", &common.kappa, |p, v| p.kappa = v),
        ("g1", &common.g1, |p, v| p.g1 = v),
        ("g2", &common.g2, |p, v| p.g2 = v),
        ("tau2", &common.tau2, |p, v| p.tau2 = v),
        ("tau3", &common.tau3, |p, v| p.tau3 = v),
        ("delta", &common.delta, |p, v| p.delta = v),
        ("omega0", &common.omega0, |p, v| p.omega0 = v),
        ("nu", &common.nu, |p, v| p.nu = v),
    ];
    for (name, raw, set) in fields {
        if let Some(raw) = raw {
            let value = parse_rate(raw).map_err(|e| format!("--{name}: {e}"))?;
            set(&mut rc.params, value);
        }
    }
    if let Some(raw) = &common.grid {
        rc.grid = parse_grid(raw).map_err(|e| format!("--grid: {e}"))?;
    }
    if let Some(points) = common.points {
        rc.grid.points = points;
    }
    if !common.drives.is_empty() {
        let mut drives = Vec::with_capacity(common.drives.len());
        for raw in &common.drives {
            drives.push(parse_drive(raw).map_err(|e| format!("--drive: {e}"))?);
        }
        rc.drives = drives;
    }
    if let Some(tol) = common.tol {
        rc.tol = tol;
    }
    if let Some(out) = &common.out {
        rc.output_dir = out.clone();
    }
    if let Some(raw) = &common.formats {
        rc.formats = parse_formats(raw).map_err(|e| format!("--formats: {e}"))?;
    }
    if let Some(raw) = &common.loss_sign {
        rc.loss_sign = parse_loss_sign(raw).map_err(|e| format!("--loss-sign: {e}"))?;
    }
    Ok(())
}
