//! Covariance matrices paired with a skew form, and their physicality test
//! `Σ + (i/2)Ω ⪰ 0`.

use nalgebra::DVector;

use crate::algebra::{standard_j, PhaseSpaceForm};
use crate::darboux::DarbouxMap;
use crate::error::{shape_mismatch, Error, Result};
use crate::linalg::{
    asymmetry, complex_det, ensure_dim, hermitian_eigenvalues, min_sym_eigenvalue, symmetrize,
    within, Mat,
};

/// Symmetric second central moments `Σ` together with the form `Ω` they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    sigma: Mat,
    form: PhaseSpaceForm,
    means: Option<DVector<f64>>,
}

impl CovarianceState {
    pub fn new(sigma: Mat, form: PhaseSpaceForm, tol: f64) -> Result<Self> {
        ensure_dim(&sigma, form.dim(), "covariance")?;
        let residual = asymmetry(&sigma);
        if !within(residual, sigma.norm(), tol) {
            return Err(Error::NotSymmetric { residual });
        }
        Ok(Self {
            sigma: symmetrize(&sigma),
            form,
            means: None,
        })
    }

    pub fn with_means(mut self, means: DVector<f64>) -> Result<Self> {
        if means.len() != self.form.dim() {
            return Err(shape_mismatch(self.form.dim(), means.len()));
        }
        self.means = Some(means);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }
    pub fn sigma(&self) -> &Mat {
        &self.sigma
    }
    pub fn form(&self) -> &PhaseSpaceForm {
        &self.form
    }
    pub fn means(&self) -> Option<&DVector<f64>> {
        self.means.as_ref()
    }

    /// Same form, covariance replaced.
    pub fn with_sigma(&self, sigma: Mat, tol: f64) -> Result<Self> {
        let mut out = Self::new(sigma, self.form.clone(), tol)?;
        out.means = self.means.clone();
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            sigma: &self.sigma * s,
            form: self.form.clone(),
            means: self.means.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    /// `Σ + (i/2)Ω ⪰ 0` within tolerance.
    pub psd_ok: bool,
    /// `Σ ≻ 0`, strictly: `λ_min(Σ) > tol·‖Σ‖`.
    pub sigma_pd_ok: bool,
    /// `Re det(Σ + (i/2)Ω) ≥ −tol`.
    pub det_ok: bool,
    pub min_hermitian_eigenvalue: f64,
    pub min_sigma_eigenvalue: f64,
    /// Ascending spectrum of the Hermitian matrix.
    pub hermitian_eigenvalues: Vec<f64>,
    pub rsup_det: f64,
    /// Imaginary part of the determinant; zero up to rounding for Hermitian input.
    pub rsup_det_imag: f64,
    pub tol: f64,
}

fn certify_parts(sigma: &Mat, omega: &Mat, s: f64, tol: f64) -> CertificationReport {
    let half = omega * (0.5 * s);
    let eigenvalues = hermitian_eigenvalues(sigma, &half);
    let min_h = eigenvalues[0];
    let scale = sigma.norm() + half.norm();
    let min_sigma = min_sym_eigenvalue(sigma);
    let det = complex_det(sigma, &half);
    let dim = sigma.nrows() as i32;
    CertificationReport {
        psd_ok: min_h >= -tol * scale.max(1.0),
        sigma_pd_ok: min_sigma > tol * sigma.norm(),
        det_ok: det.re >= -tol * scale.max(1.0).powi(dim),
        min_hermitian_eigenvalue: min_h,
        min_sigma_eigenvalue: min_sigma,
        hermitian_eigenvalues: eigenvalues,
        rsup_det: det.re,
        rsup_det_imag: det.im,
        tol,
    }
}

/// Builds `H = Σ + (i/2)Ω` and reports its spectrum, determinant and the
/// definiteness of `Σ`.
pub fn certify(state: &CovarianceState, tol: f64) -> CertificationReport {
    certify_parts(&state.sigma, state.form.omega(), 1.0, tol)
}

/// Certifies `Σ + (i s/2)Ω`, the state seen with all commutators scaled by `s`.
pub fn scaling_psd(state: &CovarianceState, s: f64, tol: f64) -> Result<CertificationReport> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "scale s must lie in (0, 1], got {s}"
        )));
    }
    Ok(certify_parts(&state.sigma, state.form.omega(), s, tol))
}

/// `Σ_Ω = M Σ_J Mᵀ`; means map as `M·μ`.
pub fn transform(state_j: &CovarianceState, map: &DarbouxMap, tol: f64) -> Result<CovarianceState> {
    let form_j = state_j.form();
    let m = map.matrix();
    if form_j.dim() != m.nrows() {
        return Err(shape_mismatch(m.nrows(), form_j.dim()));
    }
    let expected = standard_j(form_j.n()) * map.g();
    let gap = (form_j.omega() - &expected).norm();
    if !within(gap, expected.norm(), tol) {
        return Err(Error::FormMismatch(format!(
            "state form differs from g·J with g = {} (gap {gap:.3e})",
            map.g()
        )));
    }
    let sigma = m * state_j.sigma() * m.transpose();
    let mut out = CovarianceState::new(sigma, map.target_form().clone(), tol)?;
    out.means = state_j.means().map(|mu| m * mu);
    Ok(out)
}

/// `Var Q · Var P − Cov² − g²/4`; non-negative when the two-dimensional
/// uncertainty relation holds.
pub fn rsup2_residual(var_q: f64, var_p: f64, cov: f64, g: f64) -> f64 {
    var_q * var_p - cov * cov - g * g / 4.0
}

/// `∏ᵢ(VarQᵢ VarPᵢ) − (c²/4) Σᵢ(VarQᵢ VarPᵢ) + c⁴/16` for two modes, with `c2 = c²`.
pub fn rsup4_residual(var_q1: f64, var_p1: f64, var_q2: f64, var_p2: f64, c2: f64) -> f64 {
    let a = var_q1 * var_p1;
    let b = var_q2 * var_p2;
    a * b - 0.25 * c2 * (a + b) + c2 * c2 / 16.0
}

/// `(|det Cov_Ω − det Cov_J|, |Tr Cov_Ω − Tr Cov_J|)` under the orthogonal
/// representative `M̃` of `map`, with `Cov_Ω = M̃Σ_JM̃ᵀ + (i/2)Ω` and
/// `Cov_J = Σ_J + (i/2)g_eff·J`.
pub fn invariance_check(state_j: &CovarianceState, map: &DarbouxMap) -> Result<(f64, f64)> {
    let ortho = map.orthogonal().ok_or(Error::NotOrthogonalDarboux)?;
    let dim = map.matrix().nrows();
    ensure_dim(state_j.sigma(), dim, "covariance")?;
    let m = &ortho.matrix;
    let sigma_j = state_j.sigma();
    let sigma_o = m * sigma_j * m.transpose();
    let omega_half = map.target_form().omega() * 0.5;
    let j_half = standard_j(dim / 2) * (0.5 * ortho.g_eff);
    let det_o = complex_det(&sigma_o, &omega_half);
    let det_j = complex_det(sigma_j, &j_half);
    // Skew parts are traceless, so the traces are those of the real parts.
    let trace_gap = (sigma_o.trace() + omega_half.trace() - sigma_j.trace() - j_half.trace()).abs();
    Ok(((det_o - det_j).norm(), trace_gap))
}

/// Certifies `PᵀΣP + (i/2)Ω` for an `Ω`-preserving `P`.
pub fn conjugated_certify(
    p: &Mat,
    state: &CovarianceState,
    tol: f64,
) -> Result<CertificationReport> {
    let omega = state.form.omega();
    ensure_dim(p, omega.nrows(), "conjugator")?;
    let residual = (p.transpose() * omega * p - omega).norm();
    if !within(residual, p.norm().powi(2) * omega.norm(), tol) {
        return Err(Error::NotOmegaSymplectic { residual });
    }
    let sigma = symmetrize(&(p.transpose() * &state.sigma * p));
    Ok(certify_parts(&sigma, omega, 1.0, tol))
}
