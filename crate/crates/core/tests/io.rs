use kleinrec::catalog::{catalog_entries, catalog_get};
use kleinrec::io::{
    cmd_catalog_entry, cmd_cohomology, cmd_extract, cmd_reconstruct, cmd_verify, error_exit_code, input_from_json,
    load_input, Format, Input, Status,
};
use kleinrec::lie::invariants_subspace;
use kleinrec::reconstruction::ReconstructOptions;
use kleinrec::Error;
use serde_json::Value;

#[test]
fn export_then_import_is_identity() {
    for e in catalog_entries() {
        let out = cmd_catalog_entry(&e.name, true).unwrap();
        let back = input_from_json(&out.text).unwrap();
        assert_eq!(back.to_payload(), e.payload, "{}", e.name);
    }
}

#[test]
fn equal_manifests_give_identical_reports() {
    let opts = ReconstructOptions::default();
    for input in ["catalog:sl3-borel", "catalog:sol2-almost-complex-4d"] {
        let a = cmd_reconstruct(input, &opts).unwrap();
        let b = cmd_reconstruct(input, &opts).unwrap();
        assert_eq!(a.render(Format::Structured), b.render(Format::Structured));
        assert_eq!(a.render(Format::Text), b.render(Format::Text));
        // timing never reaches the report
        assert!(!a.render(Format::Structured).contains("timing"));
    }
}

#[test]
fn cohomology_examples() {
    let dim = |input: &str, module: &str, degree: usize| {
        let out = cmd_cohomology(input, Some(module), degree).unwrap();
        out.report["spaces"][0]["dim"].as_u64().unwrap() as usize
    };
    assert_eq!(dim("catalog:sol2-almost-complex-4d", "m*⊗h", 1), 2);
    assert_eq!(dim("catalog:sl3-borel", "Λ²m*⊗h", 1), 0);
    for name in ["sl3-borel", "sl2-cartan", "sol2-almost-complex-4d"] {
        let d = catalog_get(name).unwrap().isotropy().unwrap();
        for module in ["m", "m*⊗h", "Λ²m*⊗m"] {
            let v = kleinrec::io::ModuleExpr::parse(module).unwrap().build(&d);
            assert_eq!(
                dim(&format!("catalog:{name}"), module, 0),
                invariants_subspace(&v).len()
            );
        }
    }
}

#[test]
fn bad_module_expression_reports_position() {
    match cmd_cohomology("catalog:sl3-borel", Some("m ⊗ k"), 1) {
        Err(e @ Error::ModuleExpr { position: 4, .. }) => {
            assert!(e.to_string().contains("grammar"));
            assert_eq!(error_exit_code(&e), 2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_errors_carry_line_and_column() {
    let text = "{\n  \"dim\": 2,\n  \"basis\": [\"a\", \"b\"],\n  \"brackets\": [{\"i\": 0 \"j\": 1}]\n}";
    let e = input_from_json(text).unwrap_err();
    assert!(e.to_string().contains("line 4"), "{e}");
    let e = input_from_json("{\"dim\": 2, \"basis\": [\"a\"], \"brackets\": []}").unwrap_err();
    assert!(matches!(e, Error::DimensionMismatch(_)), "{e}");
}

#[test]
fn extract_sl2_cartan() {
    let out = cmd_extract("catalog:sl2", Some(&[0]), None).unwrap();
    assert_eq!(
        out.report["isotropy"]["rho"],
        serde_json::json!([[["2", "0"], ["0", "-2"]]])
    );
    let out = cmd_extract("catalog:sl3", Some(&[0, 1, 2, 3, 4]), None).unwrap();
    assert_eq!(out.report["phi_class"], serde_json::json!(["1"]));
}

#[test]
fn extract_names_the_violating_bracket() {
    // [E12, E21] = H1 leaves the span of E12 and E21
    let e = cmd_extract("catalog:sl3", Some(&[2, 5]), None).unwrap_err();
    assert!(matches!(e, Error::NotSubalgebra { i: 2, j: 5, k: 0, .. }), "{e}");
    assert!(e.to_string().contains("[e2, e5]"));
    assert_eq!(error_exit_code(&e), 1);
}

#[test]
fn verify_flat_and_perturbed() {
    let out = cmd_verify("catalog:sl3-cartan-flat").unwrap();
    assert_eq!(out.status, Status::Ok);

    let mut doc: Value = serde_json::from_str(&cmd_catalog_entry("sl2", true).unwrap().text).unwrap();
    // [H, E] = 3E breaks Jacobi on (H, E, F)
    doc["brackets"][0]["coeffs"]["1"] = Value::String("3".into());
    let path = std::env::temp_dir().join(format!("kleinrec-perturbed-{}.json", std::process::id()));
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = cmd_verify(path.to_str().unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status, Status::Violation);
    assert_eq!(out.exit_code(), 1);
    assert_eq!(out.report["violations"][0]["triple"], serde_json::json!([0, 1, 2]));
}

#[test]
fn digest_tracks_the_document() {
    let (a, da) = load_input("catalog:sl2-borel").unwrap();
    let (_, db) = load_input("catalog:sl2-cartan").unwrap();
    assert_ne!(da, db);
    assert_eq!(da.len(), 64);
    assert!(matches!(a, Input::Algebra { h_indices: Some(ref h), .. } if h == &[0, 1]));
}
