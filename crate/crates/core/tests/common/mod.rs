#![allow(dead_code)]

use ncphase_core::algebra::{symplectic_from_generator, PhaseSpaceForm, SkewPattern};
use ncphase_core::covariance::CovarianceState;
use ncphase_core::{Mat, DEFAULT_TOL};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_skew(rng: &mut impl Rng, dim: usize) -> Mat {
    let a = uniform_matrix(rng, dim, dim);
    &a - a.transpose()
}

pub fn random_symmetric(rng: &mut impl Rng, dim: usize, scale: f64) -> Mat {
    let a = uniform_matrix(rng, dim, dim);
    (&a + a.transpose()) * (0.5 * scale)
}

/// `AAᵀ + floor·I`.
pub fn random_spd(rng: &mut impl Rng, dim: usize, floor: f64) -> Mat {
    let a = uniform_matrix(rng, dim, dim);
    &a * a.transpose() + Mat::identity(dim, dim) * floor
}

/// `ħJ + S(θ, −θ)` with canonical blocks.
pub fn toy_form(hbar: f64, theta: f64) -> PhaseSpaceForm {
    let e = SkewPattern::canonical(2).unwrap();
    PhaseSpaceForm::with_f(hbar, theta, -theta, &e, &e, DEFAULT_TOL).unwrap()
}

/// A random element of the group preserving `omega` by congruence.
pub fn random_form_preserving(rng: &mut impl Rng, omega: &Mat, strength: f64) -> Mat {
    let k = random_symmetric(rng, omega.nrows(), strength);
    symplectic_from_generator(omega, &k).unwrap()
}

/// `s·PᵀΣ₀P` with `Σ₀ = (c/2)I` the saturated vacuum of `form`.
pub fn conjugated_vacuum(form: &PhaseSpaceForm, p: &Mat, s: f64) -> CovarianceState {
    let c = form.conformal_scale().unwrap();
    let dim = form.dim();
    let sigma = p.transpose() * Mat::identity(dim, dim) * (0.5 * c * s) * p;
    CovarianceState::new(
        ncphase_core::linalg::symmetrize(&sigma),
        form.clone(),
        DEFAULT_TOL,
    )
    .unwrap()
}

/// Classification predicted by the block-count parity rule for `⊕ sⱼ[[0,1],[−1,0]]`.
pub fn parity_rule(signs: &[i8]) -> ncphase_core::algebra::Symplecticity {
    use ncphase_core::algebra::Symplecticity::*;
    let k = signs.len();
    if k == 1 {
        return Symplectic;
    }
    if k % 2 == 1 {
        return Neither;
    }
    let h = k / 2;
    let products: Vec<i8> = (0..h).map(|j| signs[j] * signs[j + h]).collect();
    if products.iter().all(|&p| p == 1) {
        Symplectic
    } else if products.iter().all(|&p| p == -1) {
        AntiSymplectic
    } else {
        Neither
    }
}

pub fn all_sign_patterns(k: usize) -> Vec<Vec<i8>> {
    (0..1u32 << k)
        .map(|bits| {
            (0..k)
                .map(|j| if bits >> j & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}
