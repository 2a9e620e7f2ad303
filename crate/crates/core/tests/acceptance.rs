//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails. Tolerances are fixed here.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::{Complex, DMatrix};
use ncphase_core::algebra::{
    classify_symplectic, pfaffian, DeformationParams, PhaseSpaceForm, SkewPattern,
};
use ncphase_core::capacity::wigner_capacity;
use ncphase_core::covariance::{certify, rsup4_residual, CovarianceState};
use ncphase_core::darboux::{build_map, oscillator_map};
use ncphase_core::oscillator::{
    moments_quadrature, pullback_moments, sigma_extended, FockState, QuadratureRule,
};
use ncphase_core::williamson::{
    hermitian_mu_roots, minor_chain, normal_form, omega_spectrum, quartic_coefficients,
    quartic_value, spectrum_from_normal_form, AchievedForm,
};
use ncphase_core::{Mat, DEFAULT_TOL};
use rand::Rng;

const HBAR: f64 = 1.0;
const THETA: f64 = 0.5;
const M_OMEGAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// States certified along the way; criterion 8 re-checks all of them.
type Corpus = Vec<CovarianceState>;

fn criterion_1(corpus: &mut Corpus) -> Outcome {
    let start = Instant::now();
    let c2 = HBAR * HBAR + THETA * THETA;
    let (mut worst_eig, mut worst_det, mut worst_rsup) = (0.0f64, 0.0f64, 0.0f64);
    for &mw in &M_OMEGAS {
        let st = FockState::ground(mw, HBAR, THETA).unwrap();
        let so = sigma_extended(&st, DEFAULT_TOL).unwrap();
        let rep = certify(&so, DEFAULT_TOL);
        worst_eig = worst_eig.max(rep.min_hermitian_eigenvalue.abs());
        worst_det = worst_det.max(rep.rsup_det.hypot(rep.rsup_det_imag));
        let (vq, vp) = (c2.sqrt() / (2.0 * mw), mw * c2.sqrt() / 2.0);
        worst_rsup = worst_rsup.max(rsup4_residual(vq, vp, vq, vp, c2).abs());
        corpus.push(so);
    }
    let elapsed = start.elapsed();
    let pass = worst_eig <= 1e-9
        && worst_det <= 1e-9
        && worst_rsup <= 1e-12
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!("max |min eig| {worst_eig:.2e}, max |det| {worst_det:.2e}, max |rsup4| {worst_rsup:.2e}, {elapsed:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let target = (HBAR * HBAR + THETA * THETA) / 2.0;
    let mut worst = 0.0f64;
    let mut sizes_ok = true;
    for &mw in &M_OMEGAS {
        let so = sigma_extended(&FockState::ground(mw, HBAR, THETA).unwrap(), DEFAULT_TOL).unwrap();
        let spec = omega_spectrum(&so).unwrap();
        sizes_ok &= spec.nus.len() == 2;
        for nu in &spec.nus {
            worst = worst.max((nu - target).abs());
        }
    }
    outcome(
        sizes_ok && worst <= 1e-10,
        format!("ν = {target} (×2) for mω ∈ {M_OMEGAS:?}, max deviation {worst:.2e}"),
    )
}

fn criterion_3(corpus: &mut Corpus) -> Outcome {
    let start = Instant::now();
    let so = sigma_extended(&FockState::ground(1.0, HBAR, THETA).unwrap(), DEFAULT_TOL).unwrap();
    let cap = wigner_capacity(&so, DEFAULT_TOL).unwrap();
    let c = HBAR.hypot(THETA);
    let lower_gap = (cap.c_lin - PI * c).abs();
    let dual_gap = (cap.c_lin_dual - 2.0 * PI / c).abs();

    let mut r = rng(3);
    let mut disagreements = 0;
    let mut physical = 0;
    for k in 0..200 {
        let theta = r.gen_range(-1.0..1.0);
        let form = toy_form(HBAR, theta);
        let p = random_form_preserving(&mut r, form.omega(), 0.5);
        // Every tenth state sits exactly on the saturation boundary.
        let s = if k % 10 == 0 {
            1.0
        } else {
            r.gen_range(0.5..1.5)
        };
        let st = conjugated_vacuum(&form, &p, s);
        let psd = certify(&st, DEFAULT_TOL).psd_ok;
        let cap = wigner_capacity(&st, DEFAULT_TOL).unwrap();
        let both = cap.lower_ok == Some(true) && cap.dual_ok == Some(true);
        if psd != both {
            disagreements += 1;
        }
        physical += usize::from(psd);
        corpus.push(st);
    }
    let elapsed = start.elapsed();
    let pass = lower_gap <= 1e-9
        && dual_gap <= 1e-9
        && disagreements == 0
        && elapsed < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "c_lin {:.6} (gap {lower_gap:.1e}), c_lin* {:.6} (gap {dual_gap:.1e}); {disagreements} disagreements in 200 ({physical} physical), {elapsed:.2?}",
            cap.c_lin, cap.c_lin_dual
        ),
    )
}

fn criterion_4(corpus: &mut Corpus) -> Outcome {
    let mut r = rng(4);
    let (mut worst_diag, mut worst_form, mut worst_nu) = (0.0f64, 0.0f64, 0.0f64);
    let mut kinds_ok = true;
    for _ in 0..100 {
        let g = r.gen_range(0.5..2.0);
        let form = PhaseSpaceForm::standard(2, g).unwrap();
        let st = CovarianceState::new(random_spd(&mut r, 4, 0.3), form, DEFAULT_TOL).unwrap();
        let nf = normal_form(&st, DEFAULT_TOL).unwrap();
        kinds_ok &= nf.achieved_form == AchievedForm::OmegaPreserving;
        worst_diag = worst_diag.max(nf.diag_residual);
        worst_form = worst_form.max(nf.form_residual);
        corpus.push(st);
    }
    for _ in 0..100 {
        let form = toy_form(r.gen_range(0.5..1.5), r.gen_range(-1.0..1.0));
        let st = CovarianceState::new(random_spd(&mut r, 4, 0.3), form, DEFAULT_TOL).unwrap();
        let nf = normal_form(&st, DEFAULT_TOL).unwrap();
        kinds_ok &= nf.achieved_form == AchievedForm::ScaledJ;
        worst_diag = worst_diag.max(nf.diag_residual);
        worst_form = worst_form.max(nf.form_residual);
        let spec = omega_spectrum(&st).unwrap();
        for (nu, cw) in spec.nus.iter().zip(spectrum_from_normal_form(&nf)) {
            worst_nu = worst_nu.max((nu - cw).abs());
        }
        corpus.push(st);
    }
    outcome(
        kinds_ok && worst_diag <= 1e-10 && worst_form <= 1e-10 && worst_nu <= 1e-10,
        format!("diag {worst_diag:.2e}, form {worst_form:.2e}, |ν − cW| {worst_nu:.2e}, kinds ok {kinds_ok}"),
    )
}

fn dense_mu(l1: f64, l2: f64, f: f64, theta: f64) -> Vec<f64> {
    let omega = toy_form(f, theta).omega().clone();
    let d = [1.0 / l1, 1.0 / l2, 1.0 / l1, 1.0 / l2];
    let h = DMatrix::from_fn(4, 4, |i, j| {
        Complex::new(if i == j { 0.5 * d[i] } else { 0.0 }, 0.5 * omega[(i, j)])
    });
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let (mut worst_root, mut worst_quartic) = (0.0f64, 0.0f64);
    let mut tuples = 0;
    while tuples < 500 {
        let f = r.gen_range(0.5..1.5);
        let theta = r.gen_range(-1.0..1.0);
        let c = f64::hypot(f, theta);
        let l1 = r.gen_range(0.3..1.0) / c;
        let l2 = l1 * r.gen_range(0.3..1.0);
        if !minor_chain(l1, l2, f, theta).passes {
            continue;
        }
        tuples += 1;
        let roots = hermitian_mu_roots(l1, l2, f, theta);
        for (a, b) in dense_mu(l1, l2, f, theta).iter().zip(roots) {
            worst_root = worst_root.max((a - b).abs());
        }
        let coeffs = quartic_coefficients(l1, l2, f, theta);
        for mu in roots {
            worst_quartic = worst_quartic.max(quartic_value(&coeffs, mu).abs());
        }
    }
    outcome(
        worst_root <= 1e-10 && worst_quartic <= 1e-9,
        format!(
            "500 tuples: max root gap {worst_root:.2e}, max quartic residual {worst_quartic:.2e}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let e = SkewPattern::canonical(2).unwrap();
    let et = SkewPattern::new(e.matrix().transpose()).unwrap();
    let values = [0.1, -0.1, 0.5, -0.5];
    let mut worst = 0.0f64;
    for pattern in [&e, &et] {
        for &theta in &values {
            for &eta in &values {
                for &a in &[1.0, -1.0, 2.0] {
                    let p = DeformationParams::new(HBAR, theta, eta, 1.0).unwrap();
                    let map = build_map(&p, a, &e, pattern, DEFAULT_TOL).unwrap();
                    worst = worst.max(map.relative_residual());
                }
            }
        }
    }
    let toy = oscillator_map(HBAR, THETA, DEFAULT_TOL).unwrap();
    let m = &toy.orthogonal().unwrap().matrix;
    let entries_gap = [
        (m[(1, 1)], 0.894427),
        (m[(2, 2)], 0.894427),
        (m[(1, 2)], 0.447214),
        (m[(2, 1)], -0.447214),
    ]
    .iter()
    .map(|(got, want)| (got - want).abs())
    .fold(toy.relative_residual(), f64::max);
    outcome(
        worst <= 1e-12 && entries_gap <= 1e-6,
        format!(
            "max relative residual {worst:.2e} over 96 maps, toy entries gap {entries_gap:.1e}"
        ),
    )
}

/// Fock-state variances: `(2n + 1)` times the ground-state value along each axis.
fn excited_sigma_oracle(st: &FockState) -> Mat {
    let c = st.c();
    let (vq, vp) = (c / (2.0 * st.m_omega), st.m_omega * c / 2.0);
    let (k1, k2) = (f64::from(2 * st.n1 + 1), f64::from(2 * st.n2 + 1));
    Mat::from_diagonal(&nalgebra::DVector::from_row_slice(&[
        k1 * vq,
        k2 * vq,
        k1 * vp,
        k2 * vp,
    ]))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let rule = QuadratureRule::default();
    let (mut worst_norm, mut worst_sigma) = (0.0f64, 0.0f64);
    for n1 in 0..=3 {
        for n2 in 0..=3 {
            let st = FockState::new(n1, n2, 1.0, HBAR, THETA).unwrap();
            let m = moments_quadrature(&st, &rule).unwrap();
            worst_norm = worst_norm.max((m.norm - 1.0).abs());
            worst_sigma = worst_sigma.max((m.sigma - excited_sigma_oracle(&st)).amax());
        }
    }
    let mut worst_pull = 0.0f64;
    for &(n1, n2, mw) in &[(0, 0, 1.0), (0, 0, 2.0), (1, 2, 2.0)] {
        let st = FockState::new(n1, n2, mw, HBAR, THETA).unwrap();
        let map = st.map(DEFAULT_TOL).unwrap();
        let m = map.matrix();
        let pulled = pullback_moments(&st, &rule, m).unwrap();
        let expected = m * excited_sigma_oracle(&st) * m.transpose();
        worst_norm = worst_norm.max((pulled.norm - 1.0).abs());
        worst_pull = worst_pull.max((pulled.sigma - expected).amax());
    }
    let elapsed = start.elapsed();
    outcome(
        worst_norm <= 1e-8 && worst_sigma <= 1e-8 && worst_pull <= 1e-8 && elapsed < Duration::from_secs(30),
        format!("norm {worst_norm:.2e}, Σ_J {worst_sigma:.2e}, pullback {worst_pull:.2e}, {elapsed:.2?}"),
    )
}

fn criterion_8(corpus: &Corpus) -> Outcome {
    let mut r = rng(8);
    let mut worst_pf = 0.0f64;
    for k in 0..1000 {
        let dim = 2 * (1 + k % 4);
        let a = random_skew(&mut r, dim);
        let pf = pfaffian(&a, DEFAULT_TOL).unwrap();
        let det = a.clone().determinant();
        worst_pf = worst_pf.max((pf * pf - det).abs() / det.abs());
    }
    let mut mismatches = 0;
    for k in 1..=4 {
        for signs in all_sign_patterns(k) {
            let e = SkewPattern::from_block_signs(&signs).unwrap();
            if classify_symplectic(e.matrix(), DEFAULT_TOL) != parity_rule(&signs) {
                mismatches += 1;
            }
        }
    }
    let mut certified = 0;
    let mut violations = 0;
    for st in corpus {
        let rep = certify(st, DEFAULT_TOL);
        if rep.psd_ok {
            certified += 1;
            violations += usize::from(!rep.sigma_pd_ok);
        }
    }
    outcome(
        worst_pf <= 1e-9 && mismatches == 0 && violations == 0,
        format!(
            "Pf² = det max rel error {worst_pf:.2e}; {mismatches} parity mismatches (k ≤ 4); PSD ⟹ Σ ≻ 0 on {certified}/{} corpus states, {violations} violations",
            corpus.len()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let mut corpus = Corpus::new();
    let results = [
        ("1 toy-model saturation", criterion_1(&mut corpus)),
        ("2 symplectic spectrum", criterion_2()),
        ("3 capacity bounds", criterion_3(&mut corpus)),
        ("4 williamson contracts", criterion_4(&mut corpus)),
        ("5 characteristic roots", criterion_5()),
        ("6 darboux fidelity", criterion_6()),
        ("7 quadrature oracle", criterion_7()),
    ];
    let c8 = ("8 structural properties", criterion_8(&corpus));
    let mut failed = Vec::new();
    for (name, o) in results.iter().chain(std::iter::once(&c8)) {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
