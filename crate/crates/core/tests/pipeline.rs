use monop_core::catalog;
use monop_core::config::AnalysisConfig;
use monop_core::measure::{band_sup, decide, LineMeasure, SearchConfig, Settings, WindowTable};
use monop_core::report::run_analyze;
use monop_core::symbols::{affine_symbols, Classification, MonomialSpec, SpecDocument};
use monop_core::Error;

fn doc(coeff: &str, a: f64, b: f64, h: Option<&str>) -> SpecDocument {
    SpecDocument {
        name: None,
        coeff_expr: coeff.into(),
        coeff_head: Vec::new(),
        a,
        b,
        h_expr: h.map(Into::into),
    }
}

#[test]
fn scaling_h_scales_masses_by_square() {
    let base = MonomialSpec::from_document(&doc("1/(n+1)", 1.0, 1.0, Some("1/(s+1/2)"))).unwrap();
    let big = MonomialSpec::from_document(&doc("3/(n+1)", 1.0, 1.0, Some("3/(s+1/2)"))).unwrap();
    let (sb, sg) = (affine_symbols(&base), affine_symbols(&big));
    let (mb, mg) = (
        LineMeasure::from_symbols(&sb).unwrap(),
        LineMeasure::from_symbols(&sg).unwrap(),
    );
    let search = SearchConfig::default();
    let (tb, tg) = (WindowTable::scan(&mb, &search), WindowTable::scan(&mg, &search));
    for k in (0..tb.len()).step_by(97) {
        let (x, y) = (tb.ratio(k), tg.ratio(k));
        assert!((y - 9.0 * x).abs() <= 1e-12 * y.max(1.0), "{k}: {x} {y}");
    }
    assert!((band_sup(&mg, &search).sup - 9.0 * band_sup(&mb, &search).sup).abs() < 1e-9);
    let settings = Settings::default();
    assert_eq!(decide(&base, &sb, &settings).class, decide(&big, &sg, &settings).class);
}

#[test]
fn empty_coefficient_rule_is_spec_error() {
    let cfg = AnalysisConfig::for_spec(doc("  ", 1.0, 1.0, None));
    let err = run_analyze(&cfg).unwrap_err();
    assert_eq!(err.class(), "spec-error");
}

#[test]
fn malformed_expression_is_expression_error() {
    let cfg = AnalysisConfig::for_spec(doc("1/(n+", 1.0, 1.0, None));
    assert!(matches!(run_analyze(&cfg), Err(Error::Parse(_))));
}

#[test]
fn missing_weight_is_inconclusive() {
    let mut cfg = AnalysisConfig::for_spec(doc("1/(n+1)", 1.0, 1.0, None));
    cfg.oracle.sizes = vec![4];
    assert_eq!(run_analyze(&cfg).unwrap().class(), Classification::Inconclusive);
}

#[test]
fn intercept_note_only_when_slope_differs_from_one() {
    for (name, noted) in [("volterra", false), ("t3", true)] {
        let mut cfg = AnalysisConfig::for_spec(catalog::entry(name).unwrap().document());
        cfg.oracle.sizes.clear();
        let r = run_analyze(&cfg).unwrap();
        assert_eq!(r.symbols.intercept_note.is_some(), noted, "{name}");
        assert!(r.oracle.is_none());
    }
}

#[test]
fn report_is_stable_json() {
    let mut cfg = AnalysisConfig::for_spec(catalog::entry("t1").unwrap().document());
    cfg.oracle.sizes = vec![4, 8];
    let a = run_analyze(&cfg).unwrap().to_json();
    let b = run_analyze(&cfg).unwrap().to_json();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "monop.analysis/1");
    assert_eq!(v["config_hash"], cfg.hash());
    assert_eq!(v["verdict"]["class"], "Unbounded");
}
