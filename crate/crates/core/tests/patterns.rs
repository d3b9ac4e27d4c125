mod common;

use std::collections::BTreeMap;

use common::{formula, p};
use edgeltl_core::analyzer::{analyze, check_proof, RuleName, Verdict};
use edgeltl_core::falsifier::{falsify, SearchBounds};
use edgeltl_core::patterns::{
    catalog, check_catalog, instantiate, load_user_templates, parse_binding, template_id, Binding, Catalog,
    PatternError, Scope,
};
use edgeltl_core::syntax::{parse, render};
use proptest::prelude::*;

fn bind(pairs: &[(&str, &str)]) -> Binding {
    pairs.iter().map(|(k, v)| (k.to_string(), p(v))).collect()
}

/// Replaces whole identifiers in `text`.
fn substitute_text(text: &str, map: &BTreeMap<&str, &str>) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        out.push_str(map.get(word.as_str()).copied().unwrap_or(word));
        word.clear();
    };
    for c in text.chars() {
        if c.is_ascii_alphanumeric() || c == '_' {
            word.push(c);
        } else {
            flush(&mut word, &mut out);
            out.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

#[test]
fn bodies_match_the_golden_file() {
    let rendered: String = catalog().iter().map(|t| format!("{} {}\n", t.id, render(&t.body))).collect();
    assert_eq!(rendered, include_str!("golden/existence.txt"));
}

#[test]
fn catalog_examples() {
    let c = Catalog::builtin();
    assert_eq!(c.get("existence/A/2").unwrap().body, p("F up p"));
    assert_eq!(c.get("existence/D/1").unwrap().body, p("G((up q & F up r) -> X(!(up r) U p) & !(up r))"));
    assert_eq!(c.get("existence/B/0").unwrap().body, p("F r -> !(!p U r)"));
    assert_eq!(template_id("existence", "D", "1"), "existence/D/1");
    let scopes: Vec<Scope> = c.templates().iter().filter_map(|t| t.scope).collect();
    assert_eq!(scopes.len(), 20);
    assert!(c.templates().iter().all(|t| t.combination.is_some_and(|k| k <= 3)));
}

#[test]
fn instantiate_examples() {
    let robot = instantiate("existence/D/1", &bind(&[("P", "scl"), ("Q", "mgn"), ("R", "!mgn")])).unwrap();
    assert_eq!(robot.formula, p("G((up mgn & F down mgn) -> X(!(down mgn) U scl) & !(down mgn))"));
    assert!(robot.warnings.is_empty());

    let a0 = instantiate("existence/A/0", &bind(&[("P", "p")])).unwrap();
    assert_eq!(a0.formula, p("F p"));

    let b1 = instantiate("existence/B/1", &bind(&[("P", "p"), ("R", "X r")])).unwrap();
    assert_eq!(b1.warnings.len(), 1);
    assert_eq!(b1.warnings[0].metavariable, "R");
    assert!(b1.warnings[0].to_string().starts_with("warning: R = X r"));
}

#[test]
fn instantiate_errors() {
    let e = instantiate("existence/Z/9", &bind(&[("P", "p")])).unwrap_err();
    assert_eq!(e, PatternError::UnknownTemplate("existence/Z/9".into()));
    let e = instantiate("existence/B/0", &bind(&[("P", "p")])).unwrap_err();
    assert!(matches!(e, PatternError::MissingBinding { .. }));
    let e = instantiate("existence/A/0", &bind(&[("P", "p"), ("Q", "q")])).unwrap_err();
    assert!(matches!(e, PatternError::ExtraBinding { .. }));
    assert!(matches!(parse_binding("P"), Err(PatternError::InvalidBinding(_))));
    assert!(matches!(parse_binding("P=a &"), Err(PatternError::InvalidBinding(_))));
    assert_eq!(parse_binding("p=up x").unwrap(), ("P".into(), p("up x")));
}

#[test]
fn check_catalog_examples() {
    let report = check_catalog();
    assert!(report.all_closed());
    let get = |id: &str| report.entries.iter().find(|e| e.id == id).unwrap();
    let a0 = get("existence/A/0").verdict.proof().unwrap();
    assert_eq!(a0.rules(), [RuleName::CusEvent, RuleName::CusVar]);
    let d1 = get("existence/D/1").verdict.proof().unwrap();
    for r in [RuleName::CusAnd, RuleName::PropA, RuleName::PropE, RuleName::PropU, RuleName::CusNot] {
        assert!(d1.rules().contains(&r));
    }
    for e in &report.entries {
        check_proof(e.verdict.proof().unwrap()).unwrap();
    }
}

#[test]
fn falsifier_agrees_on_three_templates() {
    for id in ["existence/B/1", "existence/D/1", "existence/E/3"] {
        let body = &Catalog::builtin().get(id).unwrap().body.clone();
        assert_eq!(falsify(body, &SearchBounds::default()).unwrap(), None, "{id}");
    }
}

#[test]
fn fresh_atom_instances_are_closed() {
    for t in catalog() {
        let b: Binding = t
            .metavariables
            .iter()
            .map(|m| (m.clone(), p(&format!("fresh_{}", m.to_lowercase()))))
            .collect();
        let inst = instantiate(&t.id, &b).unwrap();
        assert!(analyze(&inst.formula).is_closed(), "{}", t.id);
    }
}

#[test]
fn instantiation_commutes_with_rendering() {
    let map = BTreeMap::from([("p", "scl"), ("q", "mgn"), ("r", "x_1")]);
    for t in catalog() {
        let b: Binding = t
            .metavariables
            .iter()
            .map(|m| (m.clone(), p(map[m.to_lowercase().as_str()])))
            .collect();
        let via_ast = instantiate(&t.id, &b).unwrap().formula;
        let via_text = parse(&substitute_text(&render(&t.body), &map)).unwrap();
        assert_eq!(via_ast, via_text, "{}", t.id);
        assert_eq!(render(&via_ast), substitute_text(&render(&t.body), &map));
    }
}

#[test]
fn user_template_examples() {
    let mut c = Catalog::builtin();
    let ids = c
        .load_user_templates(
            r#"[{"id": "universality/up", "metavariables": ["A", "B"], "body": "G(up a -> b)"},
                {"id": "next", "metavariables": ["P"], "body": "X p", "notes": "not closed"}]"#,
        )
        .unwrap();
    assert_eq!(ids, ["user/universality/up", "user/next"]);
    assert!(c.user_verdict("user/universality/up").unwrap().is_closed());
    assert!(matches!(c.user_verdict("user/next").unwrap(), Verdict::Unknown(_)));
    assert_eq!(c.templates().len(), 22);

    let e = load_user_templates(
        r#"[{"id": "x", "metavariables": ["P"], "body": "p"}, {"id": "x", "metavariables": ["P"], "body": "p"}]"#,
    )
    .unwrap_err();
    assert_eq!(e, PatternError::DuplicateId("user/x".into()));
    assert!(matches!(
        load_user_templates(r#"[{"id": "x", "metavariables": ["P"], "body": "p &"}]"#),
        Err(PatternError::Body { .. })
    ));
    assert!(matches!(
        load_user_templates(r#"[{"id": "x", "metavariables": ["P"], "body": "p & q"}]"#),
        Err(PatternError::UnboundAtom { .. })
    ));
    assert!(matches!(load_user_templates("{"), Err(PatternError::Document(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn next_free_bindings_keep_templates_closed(seed in any::<u64>(), pick in 0usize..20) {
        let t = &catalog()[pick];
        let b: Binding = t
            .metavariables
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), formula(seed.wrapping_add(k as u64), &["a", "b"], 3, true)))
            .collect();
        let inst = instantiate(&t.id, &b).unwrap();
        prop_assert!(inst.warnings.is_empty());
        prop_assert!(analyze(&inst.formula).is_closed(), "{} with {:?}", t.id, b);
    }
}
