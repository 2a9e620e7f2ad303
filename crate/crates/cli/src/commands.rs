use std::path::{Path, PathBuf};

use ncphase_core::algebra::{DeformationParams, FormKind, PhaseSpaceForm, SkewPattern};
use ncphase_core::capacity::{wigner_capacity, CapacityReport};
use ncphase_core::covariance::{certify, CertificationReport, CovarianceState};
use ncphase_core::darboux::{build_map, oscillator_map, DarbouxMap, MapFamily};
use ncphase_core::oscillator::{
    energy, ground_sigma_standard, moments_quadrature, sigma_extended, wigner_bound_check,
    wigner_grid, FockState, GridSpec, QuadratureRule, SlicePlane, WignerSample,
};
use ncphase_core::williamson::{normal_form, omega_spectrum, AchievedForm, SymplecticSpectrum};
use ncphase_core::{Error as CoreError, Mat};
use serde_json::{json, Value};

use crate::document::StateDocument;
use crate::error::{CliError, Result};
use crate::report::matrix;
use crate::{Cli, Command, DarbouxArgs, OscillatorArgs};

pub const MAX_CLI_LEVEL: u32 = 16;
pub const MAX_GRID: usize = 256;
pub const MAX_FULL_GRID: usize = 32;

pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
    /// Where to write the report; stdout when `None`.
    pub report_path: Option<PathBuf>,
}

impl Outcome {
    fn new(mut report: Value, pass: bool) -> Self {
        let exit_code = if pass { 0 } else { 1 };
        report["exit_status"] = json!(exit_code);
        Self {
            report,
            exit_code,
            report_path: None,
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Input(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    match &cli.command {
        Command::Check { file } => check(file, tol),
        Command::Darboux(args) => darboux(args, tol),
        Command::Williamson { file } => williamson(file, tol),
        Command::Capacity { file } => capacity(file, tol),
        Command::Oscillator(args) => oscillator(args, tol),
    }
}

fn kind_name(kind: FormKind) -> &'static str {
    match kind {
        FormKind::Standard => "standard",
        FormKind::AntiSymplectic => "anti_symplectic",
        FormKind::Symplectic => "symplectic",
        FormKind::General => "general",
    }
}

fn form_json(form: &PhaseSpaceForm) -> Value {
    json!({
        "kind": kind_name(form.kind()),
        "f": form.f(),
        "theta": form.theta(),
        "eta": form.eta(),
        "conformal_scale": form.conformal_scale(),
        "omega": matrix(form.omega()),
    })
}

fn certification_json(r: &CertificationReport) -> Value {
    json!({
        "psd_ok": r.psd_ok,
        "sigma_pd_ok": r.sigma_pd_ok,
        "det_ok": r.det_ok,
        "min_hermitian_eigenvalue": r.min_hermitian_eigenvalue,
        "min_sigma_eigenvalue": r.min_sigma_eigenvalue,
        "hermitian_eigenvalues": r.hermitian_eigenvalues,
        "rsup_det": r.rsup_det,
        "rsup_det_imag": r.rsup_det_imag,
    })
}

fn spectrum_json(s: &SymplecticSpectrum) -> Value {
    json!({ "nus": s.nus, "min": s.min(), "max": s.max() })
}

fn capacity_json(r: &CapacityReport) -> Value {
    json!({
        "c_lin": r.c_lin,
        "c_lin_dual": r.c_lin_dual,
        "lower_bound": r.lower_bound,
        "upper_bound_dual": r.upper_bound_dual,
        "lower_ok": r.lower_ok,
        "dual_ok": r.dual_ok,
    })
}

fn bounds_pass(r: &CapacityReport) -> bool {
    r.lower_ok != Some(false) && r.dual_ok != Some(false)
}

fn load(file: &Path, tol: f64) -> Result<CovarianceState> {
    StateDocument::read(file)?.to_state(tol)
}

/// A spectrum or capacity that cannot be computed for a valid document is
/// reported inline: non-positive `Σ` counts as a violation, a missing
/// conformal scale as not applicable.
fn optional<T>(
    r: std::result::Result<T, CoreError>,
    to_json: impl Fn(&T) -> Value,
) -> Result<(Value, Option<T>)> {
    match r {
        Ok(x) => Ok((to_json(&x), Some(x))),
        Err(e @ (CoreError::NotPositiveDefinite { .. } | CoreError::NoConformalScale)) => {
            Ok((json!({ "error": e.to_string() }), None))
        }
        Err(e) => Err(e.into()),
    }
}

fn check(file: &Path, tol: f64) -> Result<Outcome> {
    let state = load(file, tol)?;
    let cert = certify(&state, tol);
    let (spectrum, _) = optional(omega_spectrum(&state), spectrum_json)?;
    let (cap, cap_report) = optional(wigner_capacity(&state, tol), capacity_json)?;
    let bounds_ok = cap_report.as_ref().is_none_or(bounds_pass);
    let pass = cert.psd_ok && cert.sigma_pd_ok && bounds_ok;
    let report = json!({
        "command": "check",
        "input": file.display().to_string(),
        "tolerance": tol,
        "form": form_json(state.form()),
        "certification": certification_json(&cert),
        "spectrum": spectrum,
        "capacity": cap,
        "verdicts": {
            "psd": cert.psd_ok,
            "sigma_positive_definite": cert.sigma_pd_ok,
            "determinant": cert.det_ok,
            "capacity_bounds": bounds_ok,
        },
        "pass": pass,
    });
    Ok(Outcome::new(report, pass))
}

fn williamson(file: &Path, tol: f64) -> Result<Outcome> {
    let state = load(file, tol)?;
    let (spectrum, spec) = optional(omega_spectrum(&state), spectrum_json)?;
    let nf = match spec {
        Some(_) => Some(normal_form(&state, tol)?),
        None => None,
    };
    let normal = nf.as_ref().map_or(Value::Null, |nf| {
        json!({
            "p": matrix(&nf.p),
            "w": nf.w,
            "achieved_form": match nf.achieved_form {
                AchievedForm::OmegaPreserving => "omega_preserving",
                AchievedForm::ScaledJ => "scaled_j",
            },
            "conformal_scale": nf.conformal_scale,
            "diag_residual": nf.diag_residual,
            "form_residual": nf.form_residual,
        })
    });
    let pass = nf.is_some();
    let report = json!({
        "command": "williamson",
        "input": file.display().to_string(),
        "tolerance": tol,
        "form": form_json(state.form()),
        "spectrum": spectrum,
        "normal_form": normal,
        "pass": pass,
    });
    Ok(Outcome::new(report, pass))
}

fn capacity(file: &Path, tol: f64) -> Result<Outcome> {
    let state = load(file, tol)?;
    let cap = wigner_capacity(&state, tol)?;
    let pass = bounds_pass(&cap);
    let report = json!({
        "command": "capacity",
        "input": file.display().to_string(),
        "tolerance": tol,
        "form": form_json(state.form()),
        "spectrum": spectrum_json(&cap.spectrum),
        "capacity": capacity_json(&cap),
        "pass": pass,
    });
    Ok(Outcome::new(report, pass))
}

fn map_json(map: &DarbouxMap) -> Value {
    let family = match map.family() {
        MapFamily::Block { a, b, c, d } => {
            json!({ "name": "block", "a": a, "b": b, "c": c, "d": d })
        }
        MapFamily::Oscillator { hbar, theta } => {
            json!({ "name": "oscillator", "hbar": hbar, "theta": theta })
        }
    };
    json!({
        "matrix": matrix(map.matrix()),
        "g": map.g(),
        "family": family,
        "residual": map.residual(),
        "relative_residual": map.relative_residual(),
        "determinant": map.determinant(),
        "orthogonal": map.orthogonal().is_some(),
        "in_so4l": map.in_so4l(),
        "form": form_json(map.target_form()),
    })
}

fn darboux(args: &DarbouxArgs, tol: f64) -> Result<Outcome> {
    let map = match args.g {
        None => {
            if (args.eta + args.theta).abs() > tol * args.theta.abs().max(1.0) {
                return Err(CliError::Input(
                    "--g is required unless --eta equals -theta".into(),
                ));
            }
            if args.a != 1.0 {
                return Err(CliError::Input(
                    "--a applies to the block family; pass --g to select it".into(),
                ));
            }
            oscillator_map(args.hbar, args.theta, tol)?
        }
        Some(g) => {
            let params = DeformationParams::new(args.hbar, args.theta, args.eta, g)?;
            let e = SkewPattern::canonical(2)?;
            build_map(&params, args.a, &e, &e, tol)?
        }
    };
    let report = json!({
        "command": "darboux",
        "tolerance": tol,
        "params": { "hbar": args.hbar, "theta": args.theta, "eta": args.eta, "g": args.g, "a": args.a },
        "map": map_json(&map),
        "pass": true,
    });
    let mut outcome = Outcome::new(report, true);
    outcome.report_path = args.out.clone();
    Ok(outcome)
}

fn grid_spec(args: &OscillatorArgs) -> Result<GridSpec> {
    let limit = if args.full { MAX_FULL_GRID } else { MAX_GRID };
    if args.grid == 0 || args.grid > limit {
        return Err(CliError::Input(format!(
            "--grid must be between 1 and {limit}{}, got {}",
            if args.full { " with --full" } else { "" },
            args.grid
        )));
    }
    let slice = if args.full {
        None
    } else {
        Some(args.slice.parse::<SlicePlane>()?)
    };
    let base = match &args.base {
        None => [0.0; 4],
        Some(v) => {
            let b: [f64; 4] = v
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Input(format!("--base needs 4 values, got {}", v.len())))?;
            if b.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Input("--base values must be finite".into()));
            }
            b
        }
    };
    Ok(GridSpec {
        points: args.grid,
        extent: args.extent,
        slice,
        base,
    })
}

/// Shortest round-trip decimal, switching to exponent form for small and large magnitudes.
fn shortest(x: f64) -> String {
    serde_json::to_string(&x).expect("grid values are finite")
}

const AXES: [&str; 4] = ["q1", "q2", "p1", "p2"];

fn write_csv(path: &Path, spec: &GridSpec, samples: &[WignerSample]) -> Result<()> {
    let fail = |e: csv::Error| CliError::Write {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let axes: Vec<usize> = match spec.slice {
        Some(plane) => {
            let (a, b) = plane.axes();
            vec![a, b]
        }
        None => vec![0, 1, 2, 3],
    };
    let mut w = csv::Writer::from_path(path).map_err(fail)?;
    let mut header: Vec<&str> = axes.iter().map(|&i| AXES[i]).collect();
    header.push("w");
    w.write_record(&header).map_err(fail)?;
    for s in samples {
        let z = s.z();
        let mut row: Vec<String> = axes.iter().map(|&i| shortest(z[i])).collect();
        row.push(shortest(s.value));
        w.write_record(&row).map_err(fail)?;
    }
    w.flush().map_err(|e| fail(e.into()))
}

fn moments_json(norm: f64, means: &[f64], sigma: &Mat) -> Value {
    json!({ "norm": norm, "means": means, "sigma": matrix(sigma) })
}

fn oscillator(args: &OscillatorArgs, tol: f64) -> Result<Outcome> {
    if args.n1 > MAX_CLI_LEVEL || args.n2 > MAX_CLI_LEVEL {
        return Err(CliError::Input(format!(
            "--n1 and --n2 must not exceed {MAX_CLI_LEVEL}, got ({}, {})",
            args.n1, args.n2
        )));
    }
    let state = FockState::new(args.n1, args.n2, args.m_omega, args.hbar, args.theta)?;
    let spec = grid_spec(args)?;
    let samples = wigner_grid(&state, &spec)?;
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.value), hi.max(s.value))
        });
    let bound = wigner_bound_check(&state, &samples, tol)?;

    let quad = moments_quadrature(&state, &QuadratureRule::for_state(&state))?;
    let map = state.map(tol)?;
    let sigma_omega = map.matrix() * &quad.sigma * map.matrix().transpose();
    let excited_j = CovarianceState::new(quad.sigma.clone(), state.standard_form(), tol)?;
    let excited_omega = CovarianceState::new(sigma_omega.clone(), state.extended_form(tol)?, tol)?;

    let ground = FockState::ground(args.m_omega, args.hbar, args.theta)?;
    let ground_j = ground_sigma_standard(&ground, tol)?;
    let ground_omega = sigma_extended(&ground, tol)?;
    let ground_cap = wigner_capacity(&ground_omega, tol)?;
    let e = energy(&state);

    let csv_rows = if let Some(path) = &args.out {
        write_csv(path, &spec, &samples)?;
        Some(samples.len())
    } else {
        None
    };

    let report = json!({
        "command": "oscillator",
        "tolerance": tol,
        "state": {
            "n1": state.n1, "n2": state.n2, "m_omega": state.m_omega,
            "hbar": state.hbar, "theta": state.theta, "c": state.c(),
        },
        "grid": {
            "points": spec.points,
            "extent": spec.extent,
            "slice": spec.slice.map_or("full", |p| p.name()),
            "base": spec.base,
            "samples": samples.len(),
            "min": min,
            "max": max,
            "negative": min < 0.0,
            "csv": args.out.as_ref().map(|p| p.display().to_string()),
            "csv_rows": csv_rows,
        },
        "bound": {
            "bound": bound.bound,
            "max_abs": bound.max_abs,
            "origin_value": bound.origin_value,
            "origin_expected": bound.origin_expected,
            "parity_ok": bound.parity_ok,
        },
        "energy": { "value": e.value, "area_min": e.area_min },
        "moments": moments_json(quad.norm, &quad.means, &quad.sigma),
        "sigma_omega": matrix(&sigma_omega),
        "certification": {
            "standard": certification_json(&certify(&excited_j, tol)),
            "extended": certification_json(&certify(&excited_omega, tol)),
        },
        "spectrum": {
            "standard": spectrum_json(&omega_spectrum(&excited_j)?),
            "extended": spectrum_json(&omega_spectrum(&excited_omega)?),
        },
        "ground": {
            "sigma_standard": matrix(ground_j.sigma()),
            "sigma_extended": matrix(ground_omega.sigma()),
            "spectrum": spectrum_json(&ground_cap.spectrum),
            "capacity": capacity_json(&ground_cap),
        },
        "pass": bound.parity_ok,
    });
    Ok(Outcome::new(report, bound.parity_ok))
}
