//! Symplectic spectra and Williamson normal forms relative to a deformed form `Ω`.
//!
//! The spectrum `ν₁ ≥ … ≥ νₙ` of `Σ ≻ 0` is defined by `det(ΩΣ ± iν) = 0`.
//! It is computed from the skew matrix `Σ^{1/2} Ω Σ^{1/2}`, which is similar to
//! `ΩΣ` and whose eigenvalues come in exact `±iν` pairs.
//!
//! When `ΩᵀΩ = c²I`, the normal form diagonal `W` and the spectrum are related
//! by `νⱼ = c·Wⱼ`.

use crate::algebra::{canonical_pairs, standard_j};
use crate::covariance::CovarianceState;
use crate::error::{Error, Result};
use crate::linalg::{min_sym_eigenvalue, skew_part, sym_function, within, Mat};

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    /// Descending.
    pub nus: Vec<f64>,
    pub form_scale: Option<f64>,
    pub source_dim: usize,
}

impl SymplecticSpectrum {
    pub fn max(&self) -> f64 {
        self.nus[0]
    }
    pub fn min(&self) -> f64 {
        *self.nus.last().expect("non-empty spectrum")
    }
}

fn require_pd(sigma: &Mat) -> Result<()> {
    let min_eigenvalue = min_sym_eigenvalue(sigma);
    if min_eigenvalue <= 0.0 || !min_eigenvalue.is_finite() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(())
}

pub fn omega_spectrum(state: &CovarianceState) -> Result<SymplecticSpectrum> {
    let sigma = state.sigma();
    require_pd(sigma)?;
    let root = sym_function(sigma, f64::sqrt);
    let a = skew_part(&(&root * state.form().omega() * &root));
    let pairs = canonical_pairs(&a)?;
    Ok(SymplecticSpectrum {
        nus: pairs.lambdas,
        form_scale: state.form().conformal_scale(),
        source_dim: sigma.nrows(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AchievedForm {
    /// `PᵀΩP = Ω`.
    OmegaPreserving,
    /// `PᵀΩP = cJ`.
    ScaledJ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub p: Mat,
    /// Descending; `PᵀΣP = diag(W, W)`.
    pub w: Vec<f64>,
    pub achieved_form: AchievedForm,
    pub conformal_scale: f64,
    /// `‖PᵀΣP − diag(W, W)‖_F`.
    pub diag_residual: f64,
    /// `‖PᵀΩP − Ω‖_F` or `‖PᵀΩP − cJ‖_F`, matching `achieved_form`.
    pub form_residual: f64,
}

/// Standard Williamson form of `b ≻ 0` against `J`: returns `(S, W)` with
/// `SᵀJS = J` and `SᵀbS = diag(W, W)`, `W` descending.
fn standard_williamson(b: &Mat) -> Result<(Mat, Vec<f64>)> {
    let n = b.nrows() / 2;
    let inv_root = sym_function(b, |x| 1.0 / x.sqrt());
    let a = skew_part(&(&inv_root * standard_j(n) * &inv_root));
    // λⱼ = 1/Wⱼ; canonical_pairs sorts λ descending, so reverse for W descending.
    let pairs = canonical_pairs(&a)?;
    let mut o = Mat::zeros(2 * n, 2 * n);
    let mut w = Vec::with_capacity(n);
    for (slot, j) in (0..n).rev().enumerate() {
        let lam = pairs.lambdas[j];
        if lam <= 0.0 {
            return Err(Error::PairingFailed { residual: lam });
        }
        let scale = 1.0 / lam.sqrt();
        o.set_column(slot, &(&pairs.first[j] * scale));
        o.set_column(n + slot, &(&pairs.second[j] * scale));
        w.push(1.0 / lam);
    }
    Ok((inv_root * o, w))
}

/// Orthogonal `R` with `RᵀJ′R = J` for an orthogonal skew `J′`.
fn darboux_frame(j_prime: &Mat) -> Result<Mat> {
    Ok(canonical_pairs(j_prime)?.split())
}

/// Williamson normal form for `Ω = c·J′` with `J′` orthogonal.
///
/// The diagonalizer preserves `Ω` itself when `Ω = cJ` or when the spectrum is
/// isotropic; otherwise it maps `Ω` to `cJ`.
pub fn normal_form(state: &CovarianceState, tol: f64) -> Result<NormalForm> {
    let form = state.form();
    let c = form.conformal_scale().ok_or(Error::NoConformalScale)?;
    let sigma = state.sigma();
    require_pd(sigma)?;
    let n = form.n();
    let j = standard_j(n);

    let scaled_j = form.is_scaled_j(tol);
    let r = if scaled_j {
        Mat::identity(2 * n, 2 * n)
    } else {
        darboux_frame(&(form.omega() / c))?
    };
    let b = crate::linalg::symmetrize(&(r.transpose() * sigma * &r));
    let (s, w) = standard_williamson(&b)?;

    let spread = w[0] - w[n - 1];
    let isotropic = spread <= tol * w[0].max(1.0);
    let (p, achieved_form) = if scaled_j {
        (s, AchievedForm::OmegaPreserving)
    } else if isotropic {
        (&r * s * r.transpose(), AchievedForm::OmegaPreserving)
    } else {
        (r * s, AchievedForm::ScaledJ)
    };

    let mut diag = Mat::zeros(2 * n, 2 * n);
    for (k, &wk) in w.iter().enumerate() {
        diag[(k, k)] = wk;
        diag[(n + k, n + k)] = wk;
    }
    let diag_residual = (p.transpose() * sigma * &p - diag).norm();
    let pop = p.transpose() * form.omega() * &p;
    let form_residual = match achieved_form {
        AchievedForm::OmegaPreserving => (pop - form.omega()).norm(),
        AchievedForm::ScaledJ => (pop - j * c).norm(),
    };
    Ok(NormalForm {
        p,
        w,
        achieved_form,
        conformal_scale: c,
        diag_residual,
        form_residual,
    })
}

/// Roots `μ(±,±) = ¼(1/λ₁ + 1/λ₂ ± √((1/λ₁ − 1/λ₂ ± 2f)² + 4θ²))` of
/// `det(½D⁻¹ + (i/2)(fJ + S(θ, −θ)) − μ) = 0`, ascending.
pub fn hermitian_mu_roots(lam1: f64, lam2: f64, f: f64, theta: f64) -> [f64; 4] {
    let (a, b) = (1.0 / lam1, 1.0 / lam2);
    let mut roots = [0.0; 4];
    let mut k = 0;
    for inner in [1.0, -1.0] {
        let root = ((a - b + inner * 2.0 * f).powi(2) + 4.0 * theta * theta).sqrt();
        for outer in [1.0, -1.0] {
            roots[k] = 0.25 * (a + b + outer * root);
            k += 1;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Coefficients `[1, c₃, c₂, c₁, c₀]` (highest degree first) of
/// `F₁(μ)F₂(μ) + (θ²/16)(1/λ₁ − 1/λ₂)²`, where
/// `Fⱼ(μ) = μ² − μ/λⱼ + ¼(1/λⱼ² − (f² + θ²))`.
pub fn quartic_coefficients(lam1: f64, lam2: f64, f: f64, theta: f64) -> [f64; 5] {
    let (a1, a2) = (1.0 / lam1, 1.0 / lam2);
    let c2 = f * f + theta * theta;
    let k1 = 0.25 * (a1 * a1 - c2);
    let k2 = 0.25 * (a2 * a2 - c2);
    [
        1.0,
        -(a1 + a2),
        k1 + k2 + a1 * a2,
        -(a1 * k2 + a2 * k1),
        k1 * k2 + theta * theta / 16.0 * (a1 - a2).powi(2),
    ]
}

pub fn quartic_value(coefficients: &[f64; 5], mu: f64) -> f64 {
    coefficients.iter().fold(0.0, |acc, c| acc * mu + c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinorChain {
    /// `[f² + θ², 1/λ₁², 1/(λ₁λ₂), 1/λ₂²]`.
    pub links: [f64; 4],
    pub passes: bool,
    pub coefficients: [f64; 5],
    /// Signs of the quartic's coefficients alternate (zeros allowed).
    pub alternating: bool,
}

/// Checks `f² + θ² ≤ 1/λ₁² ≤ 1/(λ₁λ₂) ≤ 1/λ₂²`.
///
/// Passing is sufficient for `½D⁻¹ + (i/2)Ω ⪰ 0`; for `λ₁ = λ₂` it is also
/// necessary.
pub fn minor_chain(lam1: f64, lam2: f64, f: f64, theta: f64) -> MinorChain {
    let links = [
        f * f + theta * theta,
        1.0 / (lam1 * lam1),
        1.0 / (lam1 * lam2),
        1.0 / (lam2 * lam2),
    ];
    let slack = 1e-12;
    let passes = links
        .windows(2)
        .all(|w| w[0] <= w[1] + slack * w[1].abs().max(1.0));
    let coefficients = quartic_coefficients(lam1, lam2, f, theta);
    let scale = coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let alternating = coefficients
        .iter()
        .enumerate()
        .all(|(k, c)| if k % 2 == 0 { *c } else { -*c } >= -slack * scale);
    MinorChain {
        links,
        passes,
        coefficients,
        alternating,
    }
}

/// `ν` from the normal-form diagonal: `ν = c·W`.
pub fn spectrum_from_normal_form(nf: &NormalForm) -> Vec<f64> {
    nf.w.iter().map(|w| w * nf.conformal_scale).collect()
}

/// True when `Pᵀ Ω P = Ω` within `tol`.
pub fn preserves_form(p: &Mat, omega: &Mat, tol: f64) -> bool {
    within(
        (p.transpose() * omega * p - omega).norm(),
        p.norm().powi(2) * omega.norm(),
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PhaseSpaceForm, SkewPattern};
    use crate::DEFAULT_TOL;
    use nalgebra::DVector;

    fn diag(v: &[f64]) -> Mat {
        Mat::from_diagonal(&DVector::from_row_slice(v))
    }

    fn anti_form(f: f64, theta: f64) -> PhaseSpaceForm {
        let e = SkewPattern::canonical(2).unwrap();
        PhaseSpaceForm::with_f(f, theta, -theta, &e, &e, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn standard_spectrum_by_hand() {
        // JΣ for Σ = diag(1,1,4,4) has eigenvalues ±2i (twice).
        let form = PhaseSpaceForm::standard(2, 1.0).unwrap();
        let st = CovarianceState::new(diag(&[1.0, 1.0, 4.0, 4.0]), form, DEFAULT_TOL).unwrap();
        let spec = omega_spectrum(&st).unwrap();
        assert!((spec.nus[0] - 2.0).abs() < 1e-12 && (spec.nus[1] - 2.0).abs() < 1e-12);

        let nf = normal_form(&st, DEFAULT_TOL).unwrap();
        assert_eq!(nf.achieved_form, AchievedForm::OmegaPreserving);
        assert!((nf.w[0] - 2.0).abs() < 1e-12 && (nf.w[1] - 2.0).abs() < 1e-12);
        assert!(nf.diag_residual < 1e-10 && nf.form_residual < 1e-10);
    }

    #[test]
    fn toy_ground_state_spectrum_and_normal_form() {
        let c = 1.25f64.sqrt();
        let st = CovarianceState::new(
            Mat::identity(4, 4) * (c / 2.0),
            anti_form(1.0, 0.5),
            DEFAULT_TOL,
        )
        .unwrap();
        let spec = omega_spectrum(&st).unwrap();
        for nu in &spec.nus {
            assert!((nu - 0.625).abs() < 1e-12);
        }
        let nf = normal_form(&st, DEFAULT_TOL).unwrap();
        assert_eq!(nf.achieved_form, AchievedForm::OmegaPreserving);
        for w in &nf.w {
            assert!((w - 0.559017).abs() < 1e-6);
            assert!((w * c - 0.625).abs() < 1e-12);
        }
        assert!(nf.diag_residual < 1e-10 && nf.form_residual < 1e-10);
    }

    #[test]
    fn anisotropic_anti_symplectic_uses_scaled_j() {
        let form = anti_form(1.0, 0.5);
        let st = CovarianceState::new(diag(&[1.0, 2.0, 3.0, 4.0]), form, DEFAULT_TOL).unwrap();
        let spec = omega_spectrum(&st).unwrap();
        let product = spec.nus[0] * spec.nus[1];
        assert!((product - (1.5625f64 * 24.0).sqrt()).abs() < 1e-10);
        assert!((product - 6.123724).abs() < 1e-6);

        let nf = normal_form(&st, DEFAULT_TOL).unwrap();
        assert_eq!(nf.achieved_form, AchievedForm::ScaledJ);
        assert!(nf.diag_residual < 1e-10 && nf.form_residual < 1e-10);
        for (nu, nu_nf) in spec.nus.iter().zip(spectrum_from_normal_form(&nf)) {
            assert!((nu - nu_nf).abs() < 1e-10);
        }
    }

    #[test]
    fn normal_form_needs_conformal_scale_and_pd() {
        let e = SkewPattern::canonical(2).unwrap();
        let sym = PhaseSpaceForm::with_f(1.0, 0.3, 0.3, &e, &e, DEFAULT_TOL).unwrap();
        let st = CovarianceState::new(Mat::identity(4, 4), sym, DEFAULT_TOL).unwrap();
        assert_eq!(normal_form(&st, DEFAULT_TOL), Err(Error::NoConformalScale));
        // Spectra still exist without a conformal scale.
        assert!(omega_spectrum(&st).is_ok());

        let st = CovarianceState::new(
            diag(&[1.0, -1.0, 1.0, 1.0]),
            anti_form(1.0, 0.5),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(matches!(
            omega_spectrum(&st),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn mu_roots_isotropic_and_decoupled() {
        let r = hermitian_mu_roots(0.8, 0.8, 1.0, 0.5);
        let lo = (2.5 - 5f64.sqrt()) / 4.0;
        let hi = (2.5 + 5f64.sqrt()) / 4.0;
        for (got, want) in r.iter().zip([lo, lo, hi, hi]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((hi - 1.184017).abs() < 1e-6 && (lo - 0.065983).abs() < 1e-6);

        let lam = 0.7;
        let r = hermitian_mu_roots(lam, lam, 1.0, 0.0);
        let (lo, hi) = (1.0 / (2.0 * lam) - 0.5, 1.0 / (2.0 * lam) + 0.5);
        for (got, want) in r.iter().zip([lo, lo, hi, hi]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_examples() {
        let (f, theta) = (1.0f64, 0.5f64);
        let lam = 1.0 / (f * f + theta * theta).sqrt();
        let chain = minor_chain(lam, lam, f, theta);
        assert!(chain.passes && chain.alternating);
        assert!((chain.links[0] - chain.links[1]).abs() < 1e-12);

        let chain = minor_chain(0.8, 0.8, f, theta);
        assert!(chain.passes);
        assert_eq!(chain.links[0], 1.25);
        assert!((chain.links[1] - 1.5625).abs() < 1e-12);

        let chain = minor_chain(1.0, 1.0, f, theta);
        assert!(!chain.passes);
    }

    #[test]
    fn quartic_vanishes_at_roots() {
        for &(l1, l2, f, t) in &[
            (0.8, 0.8, 1.0, 0.5),
            (0.6, 1.0, 1.0, 0.25),
            (0.5, 0.4, 0.7, -0.3),
        ] {
            let coeffs = quartic_coefficients(l1, l2, f, t);
            for mu in hermitian_mu_roots(l1, l2, f, t) {
                assert!(quartic_value(&coeffs, mu).abs() < 1e-12);
            }
        }
    }
}
