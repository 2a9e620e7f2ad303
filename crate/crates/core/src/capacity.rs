//! Linear symplectic capacities of Wigner ellipsoids `½⟨z, Σ⁻¹z⟩ ≤ 1` and
//! their duals, measured against a conformal form `Ω = c·J′`.
//!
//! With `λⱼ = c/(2νⱼ)` the capacities read `c_lin = π/λ_max = 2πν_min/c` and
//! `c_lin* = 2πλ_min = πc/ν_max`. For four-dimensional anti-symplectic (or
//! undeformed) forms, physicality of `Σ` is equivalent to `c_lin ≥ πc` and to
//! `c_lin* ≤ 2π/c`.

use std::f64::consts::PI;

use crate::algebra::FormKind;
use crate::covariance::CovarianceState;
use crate::error::{shape_mismatch, Error, Result};
use crate::linalg::{min_sym_eigenvalue, within};
use crate::williamson::{omega_spectrum, SymplecticSpectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub c_lin: f64,
    pub c_lin_dual: f64,
    /// `πc`.
    pub lower_bound: f64,
    /// `2π/c`.
    pub upper_bound_dual: f64,
    /// `None` outside the four-dimensional anti-symplectic setting.
    pub lower_ok: Option<bool>,
    pub dual_ok: Option<bool>,
    pub spectrum: SymplecticSpectrum,
}

impl CapacityReport {
    pub fn bounds_checked(&self) -> bool {
        self.lower_ok.is_some()
    }
}

pub fn wigner_capacity(state: &CovarianceState, tol: f64) -> Result<CapacityReport> {
    let form = state.form();
    let c = form.conformal_scale().ok_or(Error::NoConformalScale)?;
    let spectrum = omega_spectrum(state)?;
    let c_lin = 2.0 * PI * spectrum.min() / c;
    let c_lin_dual = PI * c / spectrum.max();
    let lower_bound = PI * c;
    let upper_bound_dual = 2.0 * PI / c;

    let gated =
        form.n() == 2 && matches!(form.kind(), FormKind::Standard | FormKind::AntiSymplectic);
    let (lower_ok, dual_ok) = if gated {
        (
            Some(c_lin >= lower_bound - tol * lower_bound.max(1.0)),
            Some(c_lin_dual <= upper_bound_dual + tol * upper_bound_dual.max(1.0)),
        )
    } else {
        (None, None)
    };
    Ok(CapacityReport {
        c_lin,
        c_lin_dual,
        lower_bound,
        upper_bound_dual,
        lower_ok,
        dual_ok,
        spectrum,
    })
}

/// `E_inner ⊆ E_outer`, i.e. `Σ_inner ⪯ Σ_outer`.
pub fn ellipsoid_contains(
    inner: &CovarianceState,
    outer: &CovarianceState,
    tol: f64,
) -> Result<bool> {
    let (a, b) = (inner.sigma(), outer.sigma());
    if a.shape() != b.shape() {
        return Err(shape_mismatch(
            format!("{}x{}", b.nrows(), b.ncols()),
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    for s in [a, b] {
        let min_eigenvalue = min_sym_eigenvalue(s);
        if min_eigenvalue <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
    }
    let gap = min_sym_eigenvalue(&(b - a));
    Ok(gap >= -tol * b.norm().max(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monotonicity {
    pub contained: bool,
    pub inner: f64,
    pub outer: f64,
    /// `inner ≤ outer + tol` (vacuously true when not contained).
    pub monotone: bool,
}

pub fn monotonicity_check(
    inner: &CovarianceState,
    outer: &CovarianceState,
    tol: f64,
) -> Result<Monotonicity> {
    if inner.form().omega() != outer.form().omega() {
        return Err(Error::FormMismatch(
            "monotonicity needs a shared form".into(),
        ));
    }
    let contained = ellipsoid_contains(inner, outer, tol)?;
    let a = wigner_capacity(inner, tol)?.c_lin;
    let b = wigner_capacity(outer, tol)?.c_lin;
    Ok(Monotonicity {
        contained,
        inner: a,
        outer: b,
        monotone: !contained || a <= b + tol * b.max(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering3 {
    Less,
    Equal,
    Greater,
}

fn order(a: f64, b: f64, tol: f64) -> Ordering3 {
    if within((a - b).abs(), a.abs().max(b.abs()), tol) {
        Ordering3::Equal
    } else if a < b {
        Ordering3::Less
    } else {
        Ordering3::Greater
    }
}

/// Side-by-side capacities of two states, each measured against its own form.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityComparison {
    pub a: CapacityReport,
    pub b: CapacityReport,
    pub c_lin: Ordering3,
    pub c_lin_dual: Ordering3,
    /// Smallest `λ = c/(2ν)` of `a` against the largest of `b`.
    pub lambda_min_a_vs_max_b: Ordering3,
}

pub fn capacity_compare(
    a: &CovarianceState,
    b: &CovarianceState,
    tol: f64,
) -> Result<CapacityComparison> {
    let ra = wigner_capacity(a, tol)?;
    let rb = wigner_capacity(b, tol)?;
    let lam_min_a = ra.c_lin_dual / (2.0 * PI);
    let lam_max_b = PI / rb.c_lin;
    Ok(CapacityComparison {
        c_lin: order(ra.c_lin, rb.c_lin, tol),
        c_lin_dual: order(ra.c_lin_dual, rb.c_lin_dual, tol),
        lambda_min_a_vs_max_b: order(lam_min_a, lam_max_b, tol),
        a: ra,
        b: rb,
    })
}
