use qkick::harness::SweepMode;
use qkick_web::{curve, summarize, zoo_names, MAX_KICKS};

#[test]
fn summary_of_triangle() {
    let s = summarize("E_triangle").unwrap();
    assert_eq!(s.dim, 3);
    assert_eq!(s.eigenvalues.len(), 9);
    assert_eq!(s.peripheral.len(), 3);
    assert!(s.classification.irreducible);
    let text = serde_json::to_string(&s).unwrap();
    assert!(text.contains("\"name\":\"E_triangle\""));
}

#[test]
fn curves_have_one_value_per_kick_count() {
    let dd = curve("E_updown", SweepMode::Dd, 3, 12, 1.0).unwrap();
    assert_eq!(dd.metric, "purity");
    assert_eq!(dd.values.len(), 12);
    assert!(dd.values.iter().all(|p| (0.25 - 1e-12..=1.0 + 1e-12).contains(p)));
    let z = curve("E_dephase", SweepMode::Zeno, 3, 40, 1.0).unwrap();
    assert!(z.values[39] < z.values[4]);
}

#[test]
fn rejects_bad_requests() {
    assert!(curve("E_updown", SweepMode::Dd, 0, 0, 1.0).is_err());
    assert!(curve("E_updown", SweepMode::Dd, 0, MAX_KICKS + 1, 1.0).is_err());
    assert!(summarize("E_unknown").is_err());
    let names: Vec<String> = serde_json::from_str(&zoo_names()).unwrap();
    assert_eq!(names.len(), 9);
}
