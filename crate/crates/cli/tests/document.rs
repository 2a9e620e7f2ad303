use ncphase_cli::document::{ParamsDoc, StateDocument};
use ncphase_cli::{CliError, Result};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

fn square(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(finite(), dim), dim)
}

prop_compose! {
    fn document()(n in 1usize..4)(
        n in Just(n),
        hbar in finite(), theta in finite(), eta in finite(),
        g in proptest::option::of(finite()),
        e in proptest::option::of(square(n)),
        sigma in square(2 * n),
        means in proptest::option::of(proptest::collection::vec(finite(), 2 * n)),
    ) -> StateDocument {
        StateDocument { n, params: ParamsDoc { hbar, theta, eta, g }, e_prime: e.clone(), e, sigma, means }
    }
}

proptest! {
    #[test]
    fn round_trip_is_lossless(doc in document()) {
        let back = StateDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        // Every float survives a 17-significant-digit rendering too.
        for row in &doc.sigma {
            for &x in row {
                let printed = format!("{x:.16e}");
                prop_assert_eq!(printed.parse::<f64>().unwrap(), x);
            }
        }
    }

    #[test]
    fn file_round_trip(doc in document()) {
        let dir = tempfile::TempDir::new().unwrap();
        let path = dir.path().join("state.json");
        std::fs::write(&path, doc.to_json()).unwrap();
        prop_assert_eq!(StateDocument::read(&path).unwrap(), doc);
    }
}

#[test]
fn toy_document_builds_the_oscillator_form() -> Result<()> {
    let doc = StateDocument::parse(
        r#"{"n": 2, "params": {"hbar": 1, "theta": 0.5, "eta": -0.5},
            "sigma": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    )?;
    let form = doc.form(1e-10)?;
    assert_eq!(form.f(), 1.0);
    assert!((form.conformal_scale().unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
    Ok(())
}

#[test]
fn explicit_g_uses_the_deformed_f() -> Result<()> {
    let doc = StateDocument::parse(
        r#"{"n": 2, "params": {"hbar": 1, "theta": 0.5, "eta": 0.5, "g": 1},
            "sigma": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    )?;
    assert!((doc.form(1e-10)?.f() - (1.0 - 0.25 / 4.0)).abs() < 1e-15);
    Ok(())
}

#[test]
fn odd_dimension_only_without_deformation() {
    let ok = r#"{"n": 1, "params": {"hbar": 2, "theta": 0, "eta": 0}, "sigma": [[1,0],[0,1]]}"#;
    let state = StateDocument::parse(ok).unwrap().to_state(1e-10).unwrap();
    assert_eq!(state.form().f(), 2.0);
    let bad =
        r#"{"n": 1, "params": {"hbar": 2, "theta": 0.1, "eta": -0.1}, "sigma": [[1,0],[0,1]]}"#;
    let err = StateDocument::parse(bad)
        .unwrap()
        .to_state(1e-10)
        .unwrap_err();
    assert!(matches!(err, CliError::Input(_)));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn means_length_is_checked() {
    let doc = r#"{"n": 2, "params": {"hbar": 1, "theta": 0, "eta": 0},
        "sigma": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]], "means": [0, 0, 0]}"#;
    let err = StateDocument::parse(doc)
        .unwrap()
        .to_state(1e-10)
        .unwrap_err();
    assert!(err.to_string().contains("means"), "{err}");
}

#[test]
fn violations_and_input_errors_map_to_distinct_codes() {
    use ncphase_core::Error;
    assert_eq!(
        CliError::from(Error::QuadratureDiverged { norm: 0.9 }).exit_code(),
        1
    );
    assert_eq!(
        CliError::from(Error::NotPositiveDefinite {
            min_eigenvalue: -1.0
        })
        .exit_code(),
        1
    );
    assert_eq!(
        CliError::from(Error::DegenerateDeformation { f: 0.0 }).exit_code(),
        2
    );
    assert_eq!(
        CliError::from(Error::NotSymmetric { residual: 0.1 }).exit_code(),
        2
    );
    assert_eq!(CliError::Input("x".into()).exit_code(), 2);
}
