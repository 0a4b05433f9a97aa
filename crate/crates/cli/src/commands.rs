//! Executes a run configuration and writes its artifacts.
//!
//! Exit codes: 0 on success, 1 for rejected input or I/O failure, 2 when an
//! oracle check ran to completion and failed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use dit_core::spectrum::{self, SpectrumGrid};
use dit_core::stark::{kerr_sweep_with, DriveSidecar};
use dit_core::{oracle, StarkDrive64, SpectrumGrid64, SystemParams64};

use crate::config::{CommandKind, GridSpec, OutputFormat, RunConfig};
use crate::svg::{Curve, Plot};

/// Couplings of the preset figure bundle (THz), with their file labels.
const FIGURE_COUPLINGS: [(&str, f64); 4] = [
    ("0", 0.0),
    ("0.03", 0.03),
    ("0.1", 0.1),
    ("0.3", 0.3),
];

/// Runs one configured command, translating every failure into an exit code.
pub fn run(config: &RunConfig) -> i32 {
    match try_run(config) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn try_run(config: &RunConfig) -> anyhow::Result<i32> {
    let report = config.params.validate();
    for warning in report.warnings() {
        eprintln!("warning: {warning}");
    }
    if !report.is_valid() {
        for error in report.errors() {
            eprintln!("error: {error}");
        }
        return Ok(1);
    }
    if let Err(msg) = config.grid.validate() {
        eprintln!("error: {msg}");
        return Ok(1);
    }

    fs::create_dir_all(&config.output_dir).with_context(|| {
        format!("cannot create output directory {}", config.output_dir.display())
    })?;

    let code = match config.command {
        CommandKind::Spectrum => run_spectrum(config)?,
        CommandKind::Phase => run_phase(config)?,
        CommandKind::Kerr => run_kerr(config)?,
        CommandKind::OracleCheck => run_oracle_check(config)?,
        CommandKind::Figures => run_figures(config)?,
    };

    if code == 0 && config.wants(OutputFormat::Json) {
        let mut manifest =
            serde_json::to_string_pretty(config).context("manifest serialization")?;
        manifest.push('\n');
        write_artifact(&config.output_dir, "manifest.json", &manifest)?;
    }
    Ok(code)
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn full(value: f64) -> String {
    format!("{value:.16e}")
}

fn sweep_grid(config: &RunConfig) -> anyhow::Result<SpectrumGrid64> {
    let grid = config.grid.to_vec();
    spectrum::sweep(&config.params, &grid).context("sweep")
}

fn run_spectrum(config: &RunConfig) -> anyhow::Result<i32> {
    let sweep = sweep_grid(config)?;
    if config.wants(OutputFormat::Csv) {
        write_artifact(&config.output_dir, "spectrum.csv", &sweep.to_csv())?;
    }
    if config.wants(OutputFormat::Svg) {
        let plot = Plot {
            title: "cavity reflectivity".into(),
            x_label: "detuning (THz)".into(),
            y_label: "|r|^2".into(),
            curves: vec![reflectivity_curve(&sweep, format!("g1 = {}", config.params.g1))],
        };
        write_artifact(&config.output_dir, "reflectivity.svg", &plot.render())?;
    }
    Ok(0)
}

fn run_phase(config: &RunConfig) -> anyhow::Result<i32> {
    let sweep = sweep_grid(config)?;
    if config.wants(OutputFormat::Csv) {
        write_artifact(&config.output_dir, "phase.csv", &sweep.to_csv())?;
    }
    if config.wants(OutputFormat::Svg) {
        let plot = Plot {
            title: "reflected phase".into(),
            x_label: "detuning (THz)".into(),
            y_label: "phase (rad)".into(),
            curves: vec![phase_curve(&sweep, format!("g1 = {}", config.params.g1))],
        };
        write_artifact(&config.output_dir, "phase.svg", &plot.render())?;
    }
    Ok(0)
}

/// File stem for one drive: the detuning to four decimals, "inf"/"-inf" for
/// the sentinel, with an index suffix if two drives collide.
fn drive_labels(drives: &[StarkDrive64]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::with_capacity(drives.len());
    for (index, drive) in drives.iter().enumerate() {
        let base = if drive.detuning.is_infinite() {
            if drive.detuning > 0.0 { "inf".to_owned() } else { "-inf".to_owned() }
        } else {
            format!("{:.4}", drive.detuning)
        };
        let label = if labels.contains(&base) {
            format!("{base}_{index}")
        } else {
            base
        };
        labels.push(label);
    }
    labels
}

fn write_kerr_bundle(
    config: &RunConfig,
    grid: &GridSpec,
    svg_name: &str,
) -> anyhow::Result<()> {
    let detunings = grid.to_vec();
    let sweeps = kerr_sweep_with(&config.params, &config.drives, &detunings, config.loss_sign)
        .context("kerr sweep")?;
    let labels = drive_labels(&config.drives);

    let mut curves = Vec::with_capacity(sweeps.len());
    for ((sweep, drive), label) in sweeps.iter().zip(&config.drives).zip(&labels) {
        if config.wants(OutputFormat::Csv) {
            write_artifact(
                &config.output_dir,
                &format!("kerr_delta_{label}.csv"),
                &sweep.to_csv(),
            )?;
        }
        if config.wants(OutputFormat::Json) {
            let sidecar =
                DriveSidecar::describe(&config.params, drive).context("drive sidecar")?;
            let mut json =
                serde_json::to_string_pretty(&sidecar).context("sidecar serialization")?;
            json.push('\n');
            write_artifact(
                &config.output_dir,
                &format!("kerr_delta_{label}.drive.json"),
                &json,
            )?;
        }
        curves.push(phase_curve(sweep, format!("delta = {label}")));
    }

    if config.wants(OutputFormat::Svg) {
        let plot = Plot {
            title: "stark-shifted reflected phase".into(),
            x_label: "detuning (THz)".into(),
            y_label: "phase (rad)".into(),
            curves,
        };
        write_artifact(&config.output_dir, svg_name, &plot.render())?;
    }
    Ok(())
}

fn run_kerr(config: &RunConfig) -> anyhow::Result<i32> {
    write_kerr_bundle(config, &config.grid, "kerr_phase.svg")?;
    Ok(0)
}

fn run_oracle_check(config: &RunConfig) -> anyhow::Result<i32> {
    let grid = config.grid.to_vec();
    let report = oracle::oracle_grid_check(&config.params, &grid, config.tol)
        .context("oracle check")?;
    if config.wants(OutputFormat::Json) {
        write_artifact(&config.output_dir, "oracle_check.json", &report.to_json())?;
    }
    let verdict = if report.summary.pass { "PASS" } else { "FAIL" };
    println!(
        "oracle check: max |r_oracle - r_analytic| = {:.3e} over {} points, tol {:.3e}: {verdict}",
        report.summary.max_dev,
        report.points.len(),
        config.tol,
    );
    Ok(if report.summary.pass { 0 } else { 2 })
}

fn run_figures(config: &RunConfig) -> anyhow::Result<i32> {
    if config.params.delta != 0.0 {
        eprintln!("error: the figure bundle needs the dipole on resonance (delta = 0)");
        return Ok(1);
    }

    let detunings = config.grid.to_vec();
    let mut reflectivity_curves = Vec::with_capacity(FIGURE_COUPLINGS.len());
    let mut phase_curves = Vec::with_capacity(FIGURE_COUPLINGS.len());
    let mut summary =
        String::from("g1_thz,purcell_factor,bare_reflectivity,resonant_reflection,reflection_at_zero_re,crossover_detuning_thz\n");

    for (label, g1) in FIGURE_COUPLINGS {
        let params = SystemParams64 {
            g1,
            ..config.params
        };
        let sweep = spectrum::sweep(&params, &detunings).context("coupling series sweep")?;
        if config.wants(OutputFormat::Csv) {
            write_artifact(
                &config.output_dir,
                &format!("spectrum_g1_{label}.csv"),
                &sweep.to_csv(),
            )?;
        }
        let name = format!("g1 = {label}");
        reflectivity_curves.push(reflectivity_curve(&sweep, name.clone()));
        phase_curves.push(phase_curve(&sweep, name));

        let row = [
            params.g1,
            spectrum::purcell_factor(&params).context("purcell factor")?,
            spectrum::bare_reflectivity(&params).context("bare reflectivity")?,
            spectrum::resonant_reflection(&params).context("resonant reflection")?,
            spectrum::reflection(&params, 0.0).context("resonant point")?.r.re,
            spectrum::crossover_detuning(&params).context("crossover detuning")?,
        ];
        let row: Vec<String> = row.iter().copied().map(full).collect();
        summary.push_str(&row.join(","));
        summary.push('\n');
    }

    if config.wants(OutputFormat::Csv) {
        write_artifact(&config.output_dir, "resonance_summary.csv", &summary)?;
    }
    if config.wants(OutputFormat::Svg) {
        let plot = Plot {
            title: "cavity reflectivity vs coupling".into(),
            x_label: "detuning (THz)".into(),
            y_label: "|r|^2".into(),
            curves: reflectivity_curves,
        };
        write_artifact(&config.output_dir, "reflectivity.svg", &plot.render())?;
        let plot = Plot {
            title: "reflected phase vs coupling".into(),
            x_label: "detuning (THz)".into(),
            y_label: "phase (rad)".into(),
            curves: phase_curves,
        };
        write_artifact(&config.output_dir, "phase.svg", &plot.render())?;
    }

    // The Kerr members of the bundle sweep the preset narrow grid so the
    // single-photon displacement is resolved.
    let kerr_grid = GridSpec {
        min: -1.0,
        max: 1.0,
        points: 2001,
    };
    write_kerr_bundle(config, &kerr_grid, "kerr_phase.svg")?;
    Ok(0)
}

fn reflectivity_curve(sweep: &SpectrumGrid<f64>, label: String) -> Curve {
    Curve {
        label,
        points: sweep
            .detunings
            .iter()
            .zip(&sweep.responses)
            .map(|(&dw, resp)| (dw, resp.reflectivity))
            .collect(),
    }
}

fn phase_curve(sweep: &SpectrumGrid<f64>, label: String) -> Curve {
    Curve {
        label,
        points: sweep
            .detunings
            .iter()
            .zip(&sweep.responses)
            .map(|(&dw, resp)| (dw, resp.phase))
            .collect(),
    }
}
