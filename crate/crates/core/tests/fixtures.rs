//! The committed fixture files are exact renderings of the builders.

use std::fs;

use capakb::fixtures::{bless_requested, build_pepper, fixtures_dir};

fn check(name: &str, expected: &str) {
    let path = fixtures_dir().join(name);
    if bless_requested() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, expected).unwrap();
        return;
    }
    let actual = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with CAPAKB_BLESS=1 to create it)", path.display()));
    assert!(
        actual == expected,
        "{} is stale; rerun with CAPAKB_BLESS=1",
        path.display()
    );
}

#[test]
fn pepper_ontology_file_matches_builder() {
    check("pepper.ttl", &build_pepper().turtle);
}

#[test]
fn pepper_rules_file_matches_builder() {
    check("pepper.rules", &build_pepper().rules_text);
}

#[test]
fn golden_materialization_matches_naive_oracle() {
    check("golden/pepper_materialized.ttl", &build_pepper().golden());
}

#[test]
fn committed_ontology_parses_to_the_builder_document() {
    let text = fs::read_to_string(fixtures_dir().join("pepper.ttl")).unwrap();
    let doc = capakb::parser::parse_turtle(&text).unwrap();
    assert_eq!(doc, build_pepper().document);
}
