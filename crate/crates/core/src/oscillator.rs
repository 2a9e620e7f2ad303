//! The isotropic two-dimensional oscillator on the toy algebra
//! `[q̂₁, q̂₂] = iθ`, `[p̂₁, p̂₂] = −iθ`, `[q̂ᵢ, p̂ⱼ] = iħδᵢⱼ`.
//!
//! In the standard frame the Fock states `|n₁, n₂⟩` have Wigner functions
//!
//! ```text
//! W(Q, P) = C · e^{−(Z₁+Z₂)/2} · L_{n₁}(Z₁) · L_{n₂}(Z₂),
//! Zᵢ = 2(Qᵢ²/α² + α²Pᵢ²/c²),   α² = c/(mω),   c = √(ħ² + θ²),
//! C = (−1)^{n₁+n₂} / (π²c²).
//! ```
//!
//! Coordinates are ordered `(q₁, q₂, p₁, p₂)` everywhere.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algebra::{DeformationParams, PhaseSpaceForm, SkewPattern};
use crate::covariance::{transform, CovarianceState};
use crate::darboux::{oscillator_map, DarbouxMap};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::quadrature::{tensor_moments, AxisRule, Moments};

/// Largest Laguerre degree supported.
pub const MAX_LEVEL: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockState {
    pub n1: u32,
    pub n2: u32,
    pub m_omega: f64,
    pub hbar: f64,
    pub theta: f64,
}

impl FockState {
    pub fn new(n1: u32, n2: u32, m_omega: f64, hbar: f64, theta: f64) -> Result<Self> {
        if n1 > MAX_LEVEL || n2 > MAX_LEVEL {
            return Err(Error::InvalidParams(format!(
                "levels must not exceed {MAX_LEVEL}, got ({n1}, {n2})"
            )));
        }
        if !(m_omega.is_finite() && m_omega > 0.0) {
            return Err(Error::InvalidParams(format!(
                "m_omega must be positive, got {m_omega}"
            )));
        }
        // Validates ħ and θ.
        DeformationParams::toy(hbar, theta)?;
        Ok(Self {
            n1,
            n2,
            m_omega,
            hbar,
            theta,
        })
    }

    pub fn ground(m_omega: f64, hbar: f64, theta: f64) -> Result<Self> {
        Self::new(0, 0, m_omega, hbar, theta)
    }

    /// `√(ħ² + θ²)`.
    pub fn c(&self) -> f64 {
        self.hbar.hypot(self.theta)
    }

    pub fn alpha2(&self) -> f64 {
        self.c() / self.m_omega
    }

    pub fn params(&self) -> DeformationParams {
        DeformationParams::toy(self.hbar, self.theta).expect("validated in constructor")
    }

    /// `c·J`, the form of the standard-frame variables.
    pub fn standard_form(&self) -> PhaseSpaceForm {
        PhaseSpaceForm::standard(2, self.c()).expect("c > 0")
    }

    /// `ħJ + S(θ, −θ)`.
    pub fn extended_form(&self, tol: f64) -> Result<PhaseSpaceForm> {
        let e = SkewPattern::canonical(2)?;
        PhaseSpaceForm::with_f(self.hbar, self.theta, -self.theta, &e, &e, tol)
    }

    pub fn map(&self, tol: f64) -> Result<DarbouxMap> {
        oscillator_map(self.hbar, self.theta, tol)
    }

    fn require_ground(&self) -> Result<()> {
        if self.n1 != 0 || self.n2 != 0 {
            return Err(Error::NotGroundState {
                n1: self.n1,
                n2: self.n2,
            });
        }
        Ok(())
    }

    /// Per-axis Laguerre length scales `(α, α, c/α, c/α)`; the ground-state
    /// variance along each axis is half its square.
    pub fn axis_scales(&self) -> [f64; 4] {
        let a = self.alpha2().sqrt();
        let b = self.c() / a;
        [a, a, b, b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerSample {
    pub q: [f64; 2],
    pub p: [f64; 2],
    pub value: f64,
}

impl WignerSample {
    pub fn at(state: &FockState, q: [f64; 2], p: [f64; 2]) -> Self {
        Self {
            q,
            p,
            value: wigner_fock(state, q, p),
        }
    }
    pub fn z(&self) -> [f64; 4] {
        [self.q[0], self.q[1], self.p[0], self.p[1]]
    }
}

/// `Lₖ(x)` from `(k+1)L_{k+1} = (2k+1−x)Lₖ − kL_{k−1}`.
pub fn laguerre(k: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - x) * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn plane_factor(n: u32, q: f64, p: f64, alpha2: f64, c2: f64) -> f64 {
    let z = 2.0 * (q * q / alpha2 + alpha2 * p * p / c2);
    (-0.5 * z).exp() * laguerre(n, z)
}

fn normalisation(state: &FockState) -> f64 {
    let sign = if (state.n1 + state.n2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let c = state.c();
    sign / (PI * PI * c * c)
}

pub fn wigner_fock(state: &FockState, q: [f64; 2], p: [f64; 2]) -> f64 {
    let (a2, c) = (state.alpha2(), state.c());
    let c2 = c * c;
    normalisation(state)
        * plane_factor(state.n1, q[0], p[0], a2, c2)
        * plane_factor(state.n2, q[1], p[1], a2, c2)
}

fn wigner_z(state: &FockState, z: &[f64]) -> f64 {
    wigner_fock(state, [z[0], z[1]], [z[2], z[3]])
}

/// Analytic ground-state covariance in the standard frame, paired with `c·J`.
pub fn ground_sigma_standard(state: &FockState, tol: f64) -> Result<CovarianceState> {
    state.require_ground()?;
    let c = state.c();
    let var_q = c / (2.0 * state.m_omega);
    let var_p = state.m_omega * c / 2.0;
    let mut sigma = Mat::zeros(4, 4);
    sigma[(0, 0)] = var_q;
    sigma[(1, 1)] = var_q;
    sigma[(2, 2)] = var_p;
    sigma[(3, 3)] = var_p;
    CovarianceState::new(sigma, state.standard_form(), tol)
}

/// `Σ_Ω = M Σ_J Mᵀ` through the oscillator Darboux map, paired with `ħJ + S(θ, −θ)`.
pub fn sigma_extended(state: &FockState, tol: f64) -> Result<CovarianceState> {
    let sigma_j = ground_sigma_standard(state, tol)?;
    transform(&sigma_j, &state.map(tol)?, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    /// `mω·c·(n₁ + n₂ + 1)`.
    pub value: f64,
    /// Minimal section area of the ground-state ellipsoid, `2πc`.
    pub area_min: f64,
}

pub fn energy(state: &FockState) -> Energy {
    let c = state.c();
    Energy {
        value: state.m_omega * c * f64::from(state.n1 + state.n2 + 1),
        area_min: 2.0 * PI * c,
    }
}

/// Tensor Gauss–Legendre rule: `nodes` points per axis on `[−extent·s, extent·s]`,
/// with `s` the axis' Laguerre scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    pub nodes: usize,
    pub extent: f64,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self {
            nodes: 64,
            extent: 6.0,
        }
    }
}

impl QuadratureRule {
    /// The default rule widened for higher levels. The Laguerre factor
    /// oscillates out to radius `√(2n + 1)` in axis units.
    pub fn for_state(state: &FockState) -> Self {
        let n = state.n1.max(state.n2);
        let base = Self::default();
        Self {
            nodes: base.nodes + 4 * n as usize,
            extent: base.extent.max(f64::from(2 * n + 1).sqrt() + 5.0),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nodes == 0 || !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(Error::InvalidParams(format!(
                "quadrature needs nodes ≥ 1 and extent > 0, got {} and {}",
                self.nodes, self.extent
            )));
        }
        Ok(())
    }
}

const NORM_TOLERANCE: f64 = 1e-4;

// Negated comparisons route NaN to the error branch.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_norm(m: Moments) -> Result<Moments> {
    if !((m.norm - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::QuadratureDiverged { norm: m.norm });
    }
    Ok(m)
}

/// Norm and second central moments of the standard-frame Wigner function.
///
/// The density factorises over the `(q₁, p₁)` and `(q₂, p₂)` planes, so the
/// four-dimensional tensor sum is evaluated as a product of planar sums.
pub fn moments_quadrature(state: &FockState, rule: &QuadratureRule) -> Result<Moments> {
    rule.validate()?;
    let s = state.axis_scales();
    let (a2, c2) = (state.alpha2(), state.c().powi(2));
    let plane = |n: u32| {
        let axes = [
            AxisRule::new(rule.nodes, rule.extent * s[0]),
            AxisRule::new(rule.nodes, rule.extent * s[2]),
        ];
        tensor_moments(&axes, |z| plane_factor(n, z[0], z[1], a2, c2))
    };
    let (m1, m2) = (plane(state.n1), plane(state.n2));

    let norm = normalisation(state) * m1.norm * m2.norm;
    let means = vec![m1.means[0], m2.means[0], m1.means[1], m2.means[1]];
    let mut sigma = Mat::zeros(4, 4);
    for (m, (iq, ip)) in [(&m1, (0, 2)), (&m2, (1, 3))] {
        sigma[(iq, iq)] = m.sigma[(0, 0)];
        sigma[(ip, ip)] = m.sigma[(1, 1)];
        sigma[(iq, ip)] = m.sigma[(0, 1)];
        sigma[(ip, iq)] = m.sigma[(0, 1)];
    }
    check_norm(Moments { norm, means, sigma })
}

/// Moments of the pulled-back density `W(M⁻¹z)/|det M|` by a full 4D tensor sum.
///
/// Axis half-widths are `extent·√(Σₖ Mᵢₖ² sₖ²)`, the image of the standard
/// Laguerre scales.
pub fn pullback_moments(state: &FockState, rule: &QuadratureRule, m: &Mat) -> Result<Moments> {
    rule.validate()?;
    crate::linalg::ensure_dim(m, 4, "pullback map")?;
    let det = m.clone().determinant();
    let inv = m
        .clone()
        .try_inverse()
        .ok_or(Error::NonInvertibleForm { det })?;
    let s = state.axis_scales();
    let axes: Vec<AxisRule> = (0..4)
        .map(|i| {
            let h = (0..4)
                .map(|k| (m[(i, k)] * s[k]).powi(2))
                .sum::<f64>()
                .sqrt();
            AxisRule::new(rule.nodes, rule.extent * h)
        })
        .collect();
    let jac = 1.0 / det.abs();
    let moments = tensor_moments(&axes, |z| {
        let mut w = [0.0; 4];
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = (0..4).map(|k| inv[(i, k)] * z[k]).sum();
        }
        jac * wigner_z(state, &w)
    });
    check_norm(moments)
}

/// `(2/(πc))²`.
pub fn wigner_bound(state: &FockState) -> f64 {
    (2.0 / (PI * state.c())).powi(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: f64,
    pub max_abs: f64,
    pub origin_value: f64,
    /// `(−1)^{n₁+n₂}/(πc)²`, the extremal value attained at the origin.
    pub origin_expected: f64,
    pub parity_ok: bool,
}

/// Checks `|W| ≤ (2/(πc))²` on `samples` and the parity value at the origin.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn wigner_bound_check(
    state: &FockState,
    samples: &[WignerSample],
    tol: f64,
) -> Result<BoundReport> {
    let bound = wigner_bound(state);
    let mut max_abs = 0.0f64;
    for s in samples {
        if !(s.value.abs() <= bound + tol) {
            return Err(Error::BoundViolated {
                value: s.value,
                bound,
                q1: s.q[0],
                q2: s.q[1],
                p1: s.p[0],
                p2: s.p[1],
            });
        }
        max_abs = max_abs.max(s.value.abs());
    }
    let origin_value = wigner_fock(state, [0.0; 2], [0.0; 2]);
    let origin_expected = normalisation(state);
    let parity_ok = (origin_value - origin_expected).abs() <= tol * origin_expected.abs().max(1.0);
    Ok(BoundReport {
        bound,
        max_abs,
        origin_value,
        origin_expected,
        parity_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlicePlane {
    Q1P1,
    Q2P2,
    Q1Q2,
    P1P2,
}

impl SlicePlane {
    /// Indices of the two varying axes in `(q₁, q₂, p₁, p₂)`.
    pub fn axes(self) -> (usize, usize) {
        match self {
            Self::Q1P1 => (0, 2),
            Self::Q2P2 => (1, 3),
            Self::Q1Q2 => (0, 1),
            Self::P1P2 => (2, 3),
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            Self::Q1P1 => "q1p1",
            Self::Q2P2 => "q2p2",
            Self::Q1Q2 => "q1q2",
            Self::P1P2 => "p1p2",
        }
    }
}

impl FromStr for SlicePlane {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q1p1" => Ok(Self::Q1P1),
            "q2p2" => Ok(Self::Q2P2),
            "q1q2" => Ok(Self::Q1Q2),
            "p1p2" => Ok(Self::P1P2),
            other => Err(Error::InvalidParams(format!(
                "unknown slice plane '{other}' (expected q1p1, q2p2, q1q2 or p1p2)"
            ))),
        }
    }
}

/// A uniform grid of `points` values per axis spanning `[−extent·s, extent·s]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub extent: f64,
    /// `None` for the full four-dimensional grid.
    pub slice: Option<SlicePlane>,
    /// Values of the fixed axes for slices.
    pub base: [f64; 4],
}

fn linspace(points: usize, half: f64) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let step = 2.0 * half / (points - 1) as f64;
    (0..points).map(|i| -half + step * i as f64).collect()
}

/// Wigner values on a uniform grid, row-major with the last varying axis fastest.
pub fn wigner_grid(state: &FockState, spec: &GridSpec) -> Result<Vec<WignerSample>> {
    if spec.points == 0 || !(spec.extent.is_finite() && spec.extent > 0.0) {
        return Err(Error::InvalidParams(format!(
            "grid needs points ≥ 1 and extent > 0, got {} and {}",
            spec.points, spec.extent
        )));
    }
    let s = state.axis_scales();
    let axes: Vec<Vec<f64>> = s
        .iter()
        .map(|si| linspace(spec.points, spec.extent * si))
        .collect();
    let varying: Vec<usize> = match spec.slice {
        Some(plane) => {
            let (a, b) = plane.axes();
            vec![a, b]
        }
        None => vec![0, 1, 2, 3],
    };
    let total = spec.points.pow(varying.len() as u32);
    let out = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut z = spec.base;
            let mut rest = flat;
            for &axis in varying.iter().rev() {
                z[axis] = axes[axis][rest % spec.points];
                rest /= spec.points;
            }
            WignerSample::at(state, [z[0], z[1]], [z[2], z[3]])
        })
        .collect();
    Ok(out)
}
