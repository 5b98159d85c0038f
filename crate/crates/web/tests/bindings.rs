use circulant_web::{circulant_view, classification_grid, isomorphism_check};
use serde_json::{json, Value};

fn parse(text: String) -> Value {
    serde_json::from_str(&text).unwrap()
}

#[test]
fn view_of_a_non_ci_set() {
    let v = parse(circulant_view(8, "1,2,5", "digraph"));
    assert_eq!(v["key"], json!([[0, 0, 1]]));
    assert_eq!(v["verdict"]["ci"], false);
    assert_eq!(v["verdict"]["witness"], json!([2, 3, 7]));
    assert_eq!(v["arcs"], 24);
    let classes: usize = v["partition"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_array().unwrap().len())
        .sum();
    assert_eq!(classes, 8);
}

#[test]
fn graph_mode_closes_inverses() {
    let v = parse(circulant_view(16, "1,2,7", "graph"));
    assert_eq!(v["set"], json!([1, 2, 7, 9, 14, 15]));
    assert_eq!(v["verdict"]["ci"], false);
}

#[test]
fn iso_with_oracle() {
    let v = parse(isomorphism_check(8, "1,2,5", "2,3,7", "digraph"));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["multiplier"], json!([[1, 1, 3]]));
    assert_eq!(v["oracle"], true);
    let v = parse(isomorphism_check(8, "1,2,5", "1,2,3", "digraph"));
    assert_eq!(v["isomorphic"], false);
    assert_eq!(v["oracle"], false);
    let v = parse(isomorphism_check(20, "1,2", "3,6", "digraph"));
    assert_eq!(v["oracle"], Value::Null);
}

#[test]
fn grid_matches_predicates() {
    let v = parse(classification_grid(12, 6, "digraph"));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 11 * 4);
    assert!(rows.iter().all(|r| r["agree"] == true));
}

#[test]
fn errors_are_reported_as_json() {
    for text in [
        circulant_view(8, "1,x", "digraph"),
        circulant_view(8, "", "digraph"),
        circulant_view(1000, "1", "digraph"),
        circulant_view(8, "1", "hypergraph"),
        isomorphism_check(8, "1,2", "9", "digraph"),
        classification_grid(200, 6, "graph"),
    ] {
        assert!(parse(text)["error"].is_string());
    }
}
