//! Output assembly for the three formats.

use circulant_ci::engine::{Counterexample, Witness, WitnessFamily};
use circulant_ci::ClassificationReport;
use serde::Serialize;

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string(value).expect("values serialize");
    out.push('\n');
    out
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

pub fn compact<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("values serialize")
}

pub fn opt_bool(value: Option<bool>) -> String {
    value.map(|b| b.to_string()).unwrap_or_default()
}

fn counterexamples(list: &[Counterexample]) -> String {
    list.iter()
        .map(|c| format!("{}->{}", c.set, c.witness))
        .collect::<Vec<_>>()
        .join(";")
}

pub const REPORT_HEADER: [&str; 8] = [
    "n",
    "m",
    "mode",
    "property",
    "predicate",
    "agree",
    "failing_valency",
    "counterexamples",
];

pub fn report_row(r: &ClassificationReport) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.m.to_string(),
        r.mode.to_string(),
        r.property_holds.to_string(),
        opt_bool(r.predicate_value),
        opt_bool(r.agreement),
        r.failing_valency.map(|m| m.to_string()).unwrap_or_default(),
        counterexamples(&r.counterexamples),
    ]
}

pub fn report_text(r: &ClassificationReport) -> String {
    let mut line = format!("Z_{} m={} {}: property {}", r.n, r.m, r.mode, r.property_holds);
    if let Some(m) = r.failing_valency {
        line.push_str(&format!(" (fails at valency {m})"));
    }
    match (r.predicate_value, r.agreement) {
        (Some(p), Some(true)) => line.push_str(&format!(", predicate {p}, agree")),
        (Some(p), _) => line.push_str(&format!(", predicate {p}, DISAGREE")),
        (None, _) => line.push_str(", no predicate"),
    }
    if let Some(c) = r.counterexamples.first() {
        line.push_str(&format!(", e.g. {} ≅ {}", c.set, c.witness));
    }
    line.push('\n');
    line
}

pub fn family_name(family: &WitnessFamily) -> (&'static str, Option<u64>) {
    match *family {
        WitnessFamily::Z8Lift => ("z8-lift", None),
        WitnessFamily::PrimeSquareDigraph { p } => ("prime-square-digraph", Some(p)),
        WitnessFamily::EightDividesGraph => ("eight-divides-graph", None),
        WitnessFamily::NineDividesGraph => ("nine-divides-graph", None),
        WitnessFamily::PrimeSquareGraph { p } => ("prime-square-graph", Some(p)),
    }
}

pub fn witness_row(w: &Witness) -> Vec<String> {
    let (name, p) = family_name(&w.family);
    vec![
        name.to_string(),
        p.map(|p| p.to_string()).unwrap_or_default(),
        compact(&w.set),
        w.confirmed().to_string(),
        w.verdict.witness.as_ref().map(compact).unwrap_or_default(),
    ]
}

pub fn witness_text(w: &Witness) -> String {
    let (name, p) = family_name(&w.family);
    let label = match p {
        Some(p) => format!("{name} (p = {p})"),
        None => name.to_string(),
    };
    match &w.verdict.witness {
        Some(mate) if w.confirmed() => {
            format!("{label} {}: non-CI confirmed, isomorphic to {mate}\n", w.set)
        }
        _ => format!("{label} {}: NOT confirmed\n", w.set),
    }
}
