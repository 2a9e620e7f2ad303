//! Structure matrices of the extended Heisenberg-Weyl algebra.
//!
//! Phase-space vectors are ordered `(q₁, …, qₙ, p₁, …, pₙ)`. The commutators
//! `[ẑₐ, ẑᵦ] = i Ωₐᵦ` are encoded by the skew matrix `Ω = fJ + S(θ, η)` with
//! `S = diag(θE, ηE′)`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{
    asymmetry, block_diag, ensure_square, from_blocks, skewness_defect, within, Mat,
};

/// Scalar data of the deformed algebra, in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    pub hbar: f64,
    pub theta: f64,
    pub eta: f64,
    /// Commutator scale of the reference algebra, `[Q̂, P̂] = i g`.
    pub g: f64,
    pub epsilon_max: Option<f64>,
}

impl DeformationParams {
    pub fn new(hbar: f64, theta: f64, eta: f64, g: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParams(format!(
                "hbar must be > 0, got {hbar}"
            )));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidParams(format!("g must be > 0, got {g}")));
        }
        if !(theta.is_finite() && eta.is_finite()) {
            return Err(Error::InvalidParams("theta and eta must be finite".into()));
        }
        Ok(Self {
            hbar,
            theta,
            eta,
            g,
            epsilon_max: None,
        })
    }

    /// The isotropic oscillator algebra: `η = −θ`, `g = √(ħ² + θ²)`.
    pub fn toy(hbar: f64, theta: f64) -> Result<Self> {
        Self::new(hbar, theta, -theta, hbar.hypot(theta))
    }

    /// Enables the smallness check `|θη| ≤ (ε_max g)²`.
    pub fn with_epsilon_max(mut self, epsilon_max: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon_max) {
            return Err(Error::InvalidParams(format!(
                "epsilon_max must lie in [0, 1), got {epsilon_max}"
            )));
        }
        let limit = (epsilon_max * self.g).powi(2);
        if (self.theta * self.eta).abs() > limit {
            return Err(Error::InvalidParams(format!(
                "|theta*eta| = {} exceeds (epsilon_max*g)^2 = {limit}",
                (self.theta * self.eta).abs()
            )));
        }
        self.epsilon_max = Some(epsilon_max);
        Ok(self)
    }

    /// `f = g (1 − θη / 4g²)`.
    pub fn f(&self) -> f64 {
        self.g * (1.0 - self.theta * self.eta / (4.0 * self.g * self.g))
    }
}

/// An even-dimensional antisymmetric pattern with entries in {−1, 0, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewPattern {
    entries: Mat,
}

impl SkewPattern {
    pub fn new(entries: Mat) -> Result<Self> {
        let n = ensure_square(&entries, "skew pattern")?;
        if n == 0 || n % 2 != 0 {
            return Err(Error::OddDimension(n));
        }
        let residual = skewness_defect(&entries);
        if residual != 0.0 {
            return Err(Error::NotSkew { residual });
        }
        if let Some(bad) = entries.iter().find(|v| ![-1.0, 0.0, 1.0].contains(*v)) {
            return Err(Error::InvalidParams(format!(
                "skew pattern entries must be -1, 0 or 1, found {bad}"
            )));
        }
        Ok(Self { entries })
    }

    /// `⊕ [[0, 1], [−1, 0]]` of dimension `n`.
    pub fn canonical(n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        Self::from_block_signs(&vec![1; n / 2])
    }

    /// `⊕ⱼ sⱼ [[0, 1], [−1, 0]]` for signs `sⱼ = ±1`.
    pub fn from_block_signs(signs: &[i8]) -> Result<Self> {
        let n = 2 * signs.len();
        if n == 0 {
            return Err(Error::OddDimension(0));
        }
        let mut m = Mat::zeros(n, n);
        for (j, &s) in signs.iter().enumerate() {
            let s = f64::from(s.signum());
            m[(2 * j, 2 * j + 1)] = s;
            m[(2 * j + 1, 2 * j)] = -s;
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.entries
    }

    pub fn is_orthogonal(&self) -> bool {
        let n = self.dim();
        (self.entries.transpose() * &self.entries - Mat::identity(n, n)).norm() == 0.0
    }
}

/// Algebraic type of the deformation block `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `S = 0`.
    Standard,
    /// `{S, J} = 0`; covers `η = −θ`, `E′ = E`.
    AntiSymplectic,
    /// `[S, J] = 0`; covers `η = θ`, `E′ = E`.
    Symplectic,
    General,
}

/// The skew form `Ω = fJ + S` together with its building blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceForm {
    n: usize,
    j: Mat,
    s: Mat,
    omega: Mat,
    f: f64,
    theta: f64,
    eta: f64,
    conformal_scale: Option<f64>,
    kind: FormKind,
}

impl PhaseSpaceForm {
    /// `Ω = gJ` on a phase space of dimension `2n`.
    pub fn standard(n: usize, g: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        Self::assemble(
            g,
            0.0,
            0.0,
            standard_j(n),
            Mat::zeros(2 * n, 2 * n),
            crate::DEFAULT_TOL,
        )
    }

    /// `Ω = fJ + diag(θE, ηE′)` with an explicitly supplied `f`.
    pub fn with_f(
        f: f64,
        theta: f64,
        eta: f64,
        e: &SkewPattern,
        e_prime: &SkewPattern,
        tol: f64,
    ) -> Result<Self> {
        if e.dim() != e_prime.dim() {
            return Err(crate::error::shape_mismatch(
                format!("E' of dimension {}", e.dim()),
                e_prime.dim(),
            ));
        }
        let n = e.dim();
        let s = block_diag(&(e.matrix() * theta), &(e_prime.matrix() * eta));
        Self::assemble(f, theta, eta, standard_j(n), s, tol)
    }

    fn assemble(f: f64, theta: f64, eta: f64, j: Mat, s: Mat, tol: f64) -> Result<Self> {
        let dim = j.nrows();
        let omega = &j * f + &s;
        // Distance to singularity relative to size: σ_min(Ω) against σ_max(Ω).
        let sv = omega.singular_values();
        let (smin, smax) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        if !smin.is_finite() || smin <= tol * smax.max(f64::MIN_POSITIVE) {
            return Err(Error::NonInvertibleForm {
                det: omega.clone().determinant(),
            });
        }
        let gram = omega.transpose() * &omega;
        let c2 = gram.trace() / dim as f64;
        let defect = (&gram - Mat::identity(dim, dim) * c2).norm();
        let conformal_scale = within(defect, c2 * (dim as f64).sqrt(), tol).then(|| c2.sqrt());

        let sj = &s * &j;
        let js = &j * &s;
        let scale = s.norm();
        let kind = if scale == 0.0 {
            FormKind::Standard
        } else if within((&sj + &js).norm(), scale, tol) {
            FormKind::AntiSymplectic
        } else if within((&sj - &js).norm(), scale, tol) {
            FormKind::Symplectic
        } else {
            FormKind::General
        };
        Ok(Self {
            n: dim / 2,
            j,
            s,
            omega,
            f,
            theta,
            eta,
            conformal_scale,
            kind,
        })
    }

    /// Half the phase-space dimension.
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        2 * self.n
    }
    pub fn j(&self) -> &Mat {
        &self.j
    }
    pub fn s(&self) -> &Mat {
        &self.s
    }
    pub fn omega(&self) -> &Mat {
        &self.omega
    }
    pub fn f(&self) -> f64 {
        self.f
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    /// `c` with `ΩᵀΩ = c² I`, when it exists.
    pub fn conformal_scale(&self) -> Option<f64> {
        self.conformal_scale
    }
    pub fn kind(&self) -> FormKind {
        self.kind
    }

    /// True when `Ω` is a positive multiple of `J`.
    pub fn is_scaled_j(&self, tol: f64) -> bool {
        match self.conformal_scale {
            Some(c) => within((&self.omega - &self.j * c).norm(), c, tol),
            None => false,
        }
    }
}

/// `f = g(1 − θη/4g²)`, `S = diag(θE, ηE′)`, `Ω = fJ + S`.
pub fn build_form(
    params: &DeformationParams,
    e: &SkewPattern,
    e_prime: &SkewPattern,
    tol: f64,
) -> Result<PhaseSpaceForm> {
    PhaseSpaceForm::with_f(params.f(), params.theta, params.eta, e, e_prime, tol)
}

/// `[[0, I], [−I, 0]]` in `n × n` blocks.
pub fn standard_j(n: usize) -> Mat {
    let i = Mat::identity(n, n);
    let z = Mat::zeros(n, n);
    from_blocks(&z, &i, &(-&i), &z)
}

fn check_skew(a: &Mat, tol: f64) -> Result<usize> {
    let n = ensure_square(a, "skew matrix")?;
    let residual = skewness_defect(a);
    if !within(residual, a.norm(), tol) {
        return Err(Error::NotSkew { residual });
    }
    Ok(n)
}

/// Pfaffian by recursive expansion along the first row.
///
/// Cost grows like `(2k − 1)!!`; intended for dimensions up to 16.
pub fn pfaffian(a: &Mat, tol: f64) -> Result<f64> {
    let n = check_skew(a, tol)?;
    if n % 2 != 0 {
        return Ok(0.0);
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pfaffian_rec(a, &idx))
}

fn pfaffian_rec(a: &Mat, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let rest = &idx[1..];
    let mut total = 0.0;
    let mut minor = Vec::with_capacity(rest.len().saturating_sub(1));
    for (pos, &col) in rest.iter().enumerate() {
        let entry = 0.5 * (a[(first, col)] - a[(col, first)]);
        if entry == 0.0 {
            continue;
        }
        minor.clear();
        minor.extend(rest.iter().copied().filter(|&c| c != col));
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * entry * pfaffian_rec(a, &minor);
    }
    total
}

/// Orthonormal pairs `(uⱼ, vⱼ)` with `uⱼᵀ A vⱼ = λⱼ ≥ 0`, spanning `A`-invariant
/// planes, sorted by `λ` descending. `det` of the assembled basis may be −1.
#[derive(Debug, Clone)]
pub(crate) struct CanonicalPairs {
    pub first: Vec<DVector<f64>>,
    pub second: Vec<DVector<f64>>,
    pub lambdas: Vec<f64>,
}

impl CanonicalPairs {
    /// Columns ordered `u₁, v₁, u₂, v₂, …`.
    pub fn interleaved(&self) -> Mat {
        let k = self.lambdas.len();
        let mut o = Mat::zeros(2 * k, 2 * k);
        for j in 0..k {
            o.set_column(2 * j, &self.first[j]);
            o.set_column(2 * j + 1, &self.second[j]);
        }
        o
    }

    /// Columns ordered `u₁, …, u_k, v₁, …, v_k` (the `(q, p)` layout).
    pub fn split(&self) -> Mat {
        let k = self.lambdas.len();
        let mut o = Mat::zeros(2 * k, 2 * k);
        for j in 0..k {
            o.set_column(j, &self.first[j]);
            o.set_column(k + j, &self.second[j]);
        }
        o
    }
}

fn project_out(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    // Two Gram-Schmidt sweeps.
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(v);
            v.axpy(-c, b, 1.0);
        }
    }
}

/// Builds the real canonical basis of a skew matrix from the eigenvectors of
/// `AᵀA`: each eigenvector `u` with `‖Au‖ = λ > 0` spans, with `−Au/λ`, an
/// invariant plane on which `A` acts as `[[0, λ], [−λ, 0]]`.
pub(crate) fn canonical_pairs(a: &Mat) -> Result<CanonicalPairs> {
    let dim = a.nrows();
    let k = dim / 2;
    let scale = a.norm();
    let (_, vecs) = crate::linalg::sym_eigen_sorted(&(a.transpose() * a));
    let zero_cut = 1e-12 * scale.max(f64::MIN_POSITIVE);

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut first = Vec::with_capacity(k);
    let mut second = Vec::with_capacity(k);

    for col in (0..dim).rev() {
        if first.len() == k {
            break;
        }
        let mut u: DVector<f64> = vecs.column(col).into_owned();
        project_out(&mut u, &chosen);
        let norm = u.norm();
        if norm < 0.5 {
            continue;
        }
        u /= norm;
        let mut w = a * &u;
        project_out(&mut w, &chosen);
        let lam = w.norm();
        if lam <= zero_cut {
            // Remaining directions belong to the kernel.
            break;
        }
        let mut v = -w / lam;
        project_out(&mut v, std::slice::from_ref(&u));
        v.normalize_mut();
        chosen.push(u.clone());
        chosen.push(v.clone());
        first.push(u);
        second.push(v);
    }

    if first.len() < k {
        // Complete the basis with kernel directions, paired arbitrarily.
        let mut pending: Option<DVector<f64>> = None;
        for col in 0..dim {
            if first.len() == k {
                break;
            }
            let mut u: DVector<f64> = vecs.column(col).into_owned();
            project_out(&mut u, &chosen);
            let norm = u.norm();
            if norm < 0.5 {
                continue;
            }
            u /= norm;
            chosen.push(u.clone());
            match pending.take() {
                None => pending = Some(u),
                Some(p) => {
                    first.push(p);
                    second.push(u);
                }
            }
        }
    }
    if first.len() != k {
        return Err(Error::PairingFailed {
            residual: f64::INFINITY,
        });
    }

    let mut pairs: Vec<(f64, DVector<f64>, DVector<f64>)> = first
        .into_iter()
        .zip(second)
        .map(|(u, v)| {
            let lam = u.dot(&(a * &v));
            if lam < 0.0 {
                (-lam, v, u)
            } else {
                (lam, u, v)
            }
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    let out = CanonicalPairs {
        lambdas: pairs.iter().map(|p| p.0).collect(),
        first: pairs.iter().map(|p| p.1.clone()).collect(),
        second: pairs.into_iter().map(|p| p.2).collect(),
    };
    let o = out.interleaved();
    let residual = (o.transpose() * a * &o - block_form(&out.lambdas, &vec![1.0; k])).norm();
    if !within(residual, scale, 1e-8) {
        return Err(Error::PairingFailed { residual });
    }
    Ok(out)
}

fn block_form(lambdas: &[f64], signs: &[f64]) -> Mat {
    let k = lambdas.len();
    let mut m = Mat::zeros(2 * k, 2 * k);
    for j in 0..k {
        m[(2 * j, 2 * j + 1)] = signs[j] * lambdas[j];
        m[(2 * j + 1, 2 * j)] = -signs[j] * lambdas[j];
    }
    m
}

/// Real canonical form `Oᵀ A O = ⊕ⱼ sⱼ [[0, λⱼ], [−λⱼ, 0]]` of a skew matrix.
#[derive(Debug, Clone)]
pub struct SkewCanonical {
    /// Special orthogonal; columns grouped in consecutive pairs.
    pub o: Mat,
    /// Non-negative, descending.
    pub lambdas: Vec<f64>,
    /// `+1` for every block except possibly the last, which carries `sign Pf(A)`.
    pub signs: Vec<f64>,
}

impl SkewCanonical {
    pub fn block_form(&self) -> Mat {
        block_form(&self.lambdas, &self.signs)
    }
}

pub fn skew_canonical(a: &Mat, tol: f64) -> Result<SkewCanonical> {
    let n = check_skew(a, tol)?;
    if n % 2 != 0 || n == 0 {
        return Err(Error::OddDimension(n));
    }
    let a = crate::linalg::skew_part(a);
    let pairs = canonical_pairs(&a)?;
    let mut o = pairs.interleaved();
    let k = pairs.lambdas.len();
    let mut signs = vec![1.0; k];
    if o.clone().determinant() < 0.0 {
        o.swap_columns(2 * k - 2, 2 * k - 1);
        signs[k - 1] = -1.0;
    }
    Ok(SkewCanonical {
        o,
        lambdas: pairs.lambdas,
        signs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symplecticity {
    Symplectic,
    AntiSymplectic,
    Neither,
}

/// Compares `MᵀJM` against `±J`.
pub fn classify_symplectic(m: &Mat, tol: f64) -> Symplecticity {
    let dim = m.nrows();
    if dim != m.ncols() || !dim.is_multiple_of(2) || dim == 0 {
        return Symplecticity::Neither;
    }
    let j = standard_j(dim / 2);
    let mjm = m.transpose() * &j * m;
    let scale = m.norm().powi(2);
    if within((&mjm - &j).norm(), scale, tol) {
        Symplecticity::Symplectic
    } else if within((&mjm + &j).norm(), scale, tol) {
        Symplecticity::AntiSymplectic
    } else {
        Symplecticity::Neither
    }
}

/// `T = diag(I, −I)`.
pub fn reflection_t(n: usize) -> Mat {
    block_diag(&Mat::identity(n, n), &(-Mat::identity(n, n)))
}

/// Splits an anti-symplectic `M` as `M = T·S` with `S` symplectic.
pub fn anti_symplectic_split(m: &Mat, tol: f64) -> Result<(Mat, Mat)> {
    if classify_symplectic(m, tol) != Symplecticity::AntiSymplectic {
        return Err(Error::NotAntiSymplectic);
    }
    let t = reflection_t(m.nrows() / 2);
    // T⁻¹ = T.
    let s = &t * m;
    Ok((t, s))
}

/// `exp(Ω⁻¹K)` for symmetric `K`; always preserves `Ω` by congruence.
pub fn symplectic_from_generator(omega: &Mat, k: &Mat) -> Result<Mat> {
    let inv = omega
        .clone()
        .try_inverse()
        .ok_or(Error::NonInvertibleForm { det: 0.0 })?;
    let residual = asymmetry(k);
    if !within(residual, k.norm(), 1e-12) {
        return Err(Error::NotSymmetric { residual });
    }
    Ok((inv * crate::linalg::symmetrize(k)).exp())
}
