//! JSON state documents.
//!
//! ```json
//! {
//!   "n": 2,
//!   "params": { "hbar": 1.0, "theta": 0.5, "eta": -0.5 },
//!   "sigma": [[0.559, 0, 0, 0], [0, 0.559, 0, 0], [0, 0, 0.559, 0], [0, 0, 0, 0.559]]
//! }
//! ```
//!
//! Without `g` the oscillator algebra is assumed: `η = −θ`, `f = ħ`,
//! `g = √(ħ² + θ²)`. With `g`, `f = g(1 − θη/(4g²))`. `E` and `Eprime` default
//! to the canonical block pattern.

use std::path::Path;

use nalgebra::DVector;
use ncphase_core::algebra::{build_form, DeformationParams, PhaseSpaceForm, SkewPattern};
use ncphase_core::covariance::CovarianceState;
use ncphase_core::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub hbar: f64,
    pub theta: f64,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub n: usize,
    pub params: ParamsDoc,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Eprime", default, skip_serializing_if = "Option::is_none")]
    pub e_prime: Option<Vec<Vec<f64>>>,
    pub sigma: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<f64>>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn matrix(rows: &[Vec<f64>], dim: usize, field: &str) -> Result<Mat> {
    if rows.len() != dim {
        return Err(input(format!(
            "field `{field}`: expected {dim} rows, found {}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(input(format!(
                "field `{field}`: row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|x| !x.is_finite()) {
            return Err(input(format!(
                "field `{field}`: entry ({i}, {j}) is not finite"
            )));
        }
    }
    Ok(Mat::from_fn(dim, dim, |i, j| rows[i][j]))
}

impl StateDocument {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Input(msg) => input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        // serde_json reports line and column of the offending token.
        serde_json::from_str(text).map_err(|e| input(format!("invalid state document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    fn pattern(&self, rows: &Option<Vec<Vec<f64>>>, field: &str) -> Result<SkewPattern> {
        match rows {
            Some(rows) => Ok(SkewPattern::new(matrix(rows, self.n, field)?)?),
            None => Ok(SkewPattern::canonical(self.n)?),
        }
    }

    pub fn form(&self, tol: f64) -> Result<PhaseSpaceForm> {
        let p = &self.params;
        if self.n == 0 {
            return Err(input("field `n`: must be positive"));
        }
        if self.n % 2 == 1 {
            if p.theta != 0.0 || p.eta != 0.0 || self.e.is_some() || self.e_prime.is_some() {
                return Err(input(format!(
                    "field `n`: odd n = {} is only supported without deformation (theta = eta = 0)",
                    self.n
                )));
            }
            return Ok(PhaseSpaceForm::standard(self.n, p.g.unwrap_or(p.hbar))?);
        }
        let e = self.pattern(&self.e, "E")?;
        let e_prime = self.pattern(&self.e_prime, "Eprime")?;
        match p.g {
            None => {
                if (p.eta + p.theta).abs() > tol * p.theta.abs().max(1.0) {
                    return Err(input(
                        "field `params.g`: required unless eta = -theta (oscillator algebra)",
                    ));
                }
                // Validates ħ and θ.
                DeformationParams::toy(p.hbar, p.theta)?;
                Ok(PhaseSpaceForm::with_f(
                    p.hbar, p.theta, p.eta, &e, &e_prime, tol,
                )?)
            }
            Some(g) => {
                let params = DeformationParams::new(p.hbar, p.theta, p.eta, g)?;
                Ok(build_form(&params, &e, &e_prime, tol)?)
            }
        }
    }

    pub fn to_state(&self, tol: f64) -> Result<CovarianceState> {
        let form = self.form(tol)?;
        let sigma = matrix(&self.sigma, 2 * self.n, "sigma")?;
        let state = CovarianceState::new(sigma, form, tol)?;
        match &self.means {
            None => Ok(state),
            Some(m) if m.len() == 2 * self.n => {
                Ok(state.with_means(DVector::from_column_slice(m))?)
            }
            Some(m) => Err(input(format!(
                "field `means`: expected {} entries, found {}",
                2 * self.n,
                m.len()
            ))),
        }
    }
}
