//! Linear Darboux maps `M` with `g·MJMᵀ = Ω`.

use crate::algebra::{build_form, standard_j, DeformationParams, PhaseSpaceForm, SkewPattern};
use crate::error::{shape_mismatch, Error, Result};
use crate::linalg::{ensure_dim, from_blocks, orthogonality_defect, within, Mat};

/// How the map was constructed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapFamily {
    /// `A = aI, B = bEᵀ, C = cE′, D = dI`.
    Block { a: f64, b: f64, c: f64, d: f64 },
    /// The isotropic oscillator map: a rotation by `atan(θ/ħ)` in the `(q₂, p₁)` plane.
    Oscillator { hbar: f64, theta: f64 },
}

/// A determinant-normalised orthogonal representative of a Darboux map.
///
/// Rescaling `M → M/s` with `s = (det M)^{1/2n}` turns `g·MJMᵀ = Ω` into
/// `g s²·M̃JM̃ᵀ = Ω`, so the reference scale moves to `g_eff = g s²`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap {
    pub matrix: Mat,
    pub g_eff: f64,
    pub det_root: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxMap {
    matrix: Mat,
    family: MapFamily,
    g: f64,
    target_form: PhaseSpaceForm,
    residual: f64,
    orthogonal: Option<OrthogonalMap>,
}

impl DarbouxMap {
    /// Dimension of the deformation patterns (`2n × 2n` phase space, `n` here).
    pub fn n(&self) -> usize {
        self.target_form.n()
    }
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
    pub fn family(&self) -> MapFamily {
        self.family
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn target_form(&self) -> &PhaseSpaceForm {
        &self.target_form
    }
    /// `‖gMJMᵀ − Ω‖_F` of the raw map.
    pub fn residual(&self) -> f64 {
        self.residual
    }
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.target_form.omega().norm()
    }
    pub fn orthogonal(&self) -> Option<&OrthogonalMap> {
        self.orthogonal.as_ref()
    }
    /// Set when the phase-space dimension is a multiple of four and the
    /// rescaled map is special orthogonal.
    pub fn in_so4l(&self) -> bool {
        self.orthogonal.is_some() && self.matrix.nrows().is_multiple_of(4)
    }
    pub fn determinant(&self) -> f64 {
        self.matrix.clone().determinant()
    }

    fn finish(
        matrix: Mat,
        family: MapFamily,
        g: f64,
        target_form: PhaseSpaceForm,
        tol: f64,
    ) -> Self {
        let residual = verify_map(&matrix, g, &target_form).expect("shapes agree by construction");
        let dim = matrix.nrows();
        let det = matrix.clone().determinant();
        let orthogonal = (det > 0.0)
            .then(|| {
                let det_root = det.powf(1.0 / dim as f64);
                let rescaled = &matrix / det_root;
                (orthogonality_defect(&rescaled) <= tol * (dim as f64).sqrt()).then_some({
                    OrthogonalMap {
                        matrix: rescaled,
                        g_eff: g * det_root * det_root,
                        det_root,
                    }
                })
            })
            .flatten();
        Self {
            matrix,
            family,
            g,
            target_form,
            residual,
            orthogonal,
        }
    }
}

/// `σ` with `E′E = σI`, if any.
fn pattern_product_sign(e: &SkewPattern, e_prime: &SkewPattern) -> Option<f64> {
    let n = e.dim();
    if e_prime.dim() != n {
        return None;
    }
    let prod = e_prime.matrix() * e.matrix();
    let id = Mat::identity(n, n);
    if prod == id {
        Some(1.0)
    } else if prod == -id {
        Some(-1.0)
    } else {
        None
    }
}

/// The one-parameter block family: `d = 1/a`, `b = θ/(2ga)`, `c = ηa/(2g)`.
///
/// The family closes only when `E′E = σI` with `σ = ±1`; the `(q, p)` block of
/// `g·MJMᵀ` is then `g(1 − σθη/(4g²))·I`. The target form carries that `f`,
/// which agrees with [`build_form`] when `E′E = I` (e.g. `E′ = Eᵀ`). For the
/// default `E′ = E` it is `g(1 + θη/(4g²))`.
pub fn build_map(
    params: &DeformationParams,
    a: f64,
    e: &SkewPattern,
    e_prime: &SkewPattern,
    tol: f64,
) -> Result<DarbouxMap> {
    if !(a.is_finite() && a != 0.0) {
        return Err(Error::InvalidParams(format!("a must be nonzero, got {a}")));
    }
    let sigma = pattern_product_sign(e, e_prime).ok_or_else(|| {
        Error::InvalidParams("the block family needs patterns with E′E = ±I".into())
    })?;
    let g = params.g;
    let f = g * (1.0 - sigma * params.theta * params.eta / (4.0 * g * g));
    if f.abs() <= tol * g {
        return Err(Error::DegenerateDeformation { f });
    }
    let form = if sigma > 0.0 {
        build_form(params, e, e_prime, tol)?
    } else {
        PhaseSpaceForm::with_f(f, params.theta, params.eta, e, e_prime, tol)?
    };
    let d = 1.0 / a;
    let b = params.theta / (2.0 * g * a);
    let c = params.eta * a / (2.0 * g);
    let n = e.dim();
    let id = Mat::identity(n, n);
    let m = from_blocks(
        &(&id * a),
        &(e.matrix().transpose() * b),
        &(e_prime.matrix() * c),
        &(&id * d),
    );
    Ok(DarbouxMap::finish(
        m,
        MapFamily::Block { a, b, c, d },
        g,
        form,
        tol,
    ))
}

/// The oscillator Darboux map onto `Ω = ħJ + S(θ, −θ)` with `g = √(ħ² + θ²)`.
///
/// In `(q₁, q₂, p₁, p₂)` ordering:
/// ```text
/// [ 1    0     0    0 ]
/// [ 0   ħ/g   θ/g   0 ]
/// [ 0  −θ/g   ħ/g   0 ]
/// [ 0    0     0    1 ]
/// ```
pub fn oscillator_map(hbar: f64, theta: f64, tol: f64) -> Result<DarbouxMap> {
    let params = DeformationParams::toy(hbar, theta)?;
    let g = params.g;
    let e = SkewPattern::canonical(2)?;
    let form = PhaseSpaceForm::with_f(hbar, theta, -theta, &e, &e, tol)?;
    let (cs, sn) = (hbar / g, theta / g);
    let mut m = Mat::identity(4, 4);
    m[(1, 1)] = cs;
    m[(1, 2)] = sn;
    m[(2, 1)] = -sn;
    m[(2, 2)] = cs;
    Ok(DarbouxMap::finish(
        m,
        MapFamily::Oscillator { hbar, theta },
        g,
        form,
        tol,
    ))
}

/// `‖g·MJMᵀ − Ω‖_F`.
pub fn verify_map(m: &Mat, g: f64, form: &PhaseSpaceForm) -> Result<f64> {
    let dim = form.dim();
    ensure_dim(m, dim, "Darboux matrix")?;
    let j = standard_j(form.n());
    Ok((m * j * m.transpose() * g - form.omega()).norm())
}

/// `P = M S Mᵀ` from the orthogonal representative of `map`; preserves `Ω`.
pub fn compose_pomega(map: &DarbouxMap, ssym: &Mat, tol: f64) -> Result<Mat> {
    let dim = map.matrix.nrows();
    if ssym.nrows() != dim || ssym.ncols() != dim {
        return Err(shape_mismatch(
            format!("{dim}x{dim}"),
            format!("{}x{}", ssym.nrows(), ssym.ncols()),
        ));
    }
    let j = standard_j(dim / 2);
    let residual = (ssym.transpose() * &j * ssym - &j).norm();
    if !within(residual, ssym.norm().powi(2), tol) {
        return Err(Error::NotSymplectic { residual });
    }
    let ortho = map.orthogonal.as_ref().ok_or(Error::NotOrthogonalDarboux)?;
    Ok(&ortho.matrix * ssym * ortho.matrix.transpose())
}
