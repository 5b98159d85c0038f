//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a JSON
//! string; failures come back as `{"error": "..."}`. The `*_value` functions
//! are the same operations without the wasm boundary, so they can be tested
//! natively.

use circulant_ci::cayley::{parse_residues, DEFAULT_ORACLE_CUTOFF};
use circulant_ci::keyspace::key_partition;
use circulant_ci::{CiVerdict, ClassificationReport, ConnectionSet, Engine, IsoVerdict, Key, Mode};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest modulus the page will draw and analyse.
pub const MAX_VIEW_N: u64 = 64;
/// Largest sweep the page will run; beyond this the browser stalls.
pub const MAX_GRID_N: u64 = 20;
pub const MAX_GRID_M: usize = 8;

#[derive(Debug, Serialize)]
pub struct View {
    pub n: u64,
    pub set: ConnectionSet,
    pub key: Key,
    pub partition: Vec<Vec<u64>>,
    pub arcs: usize,
    pub verdict: CiVerdict,
}

#[derive(Debug, Serialize)]
pub struct IsoCheck {
    #[serde(flatten)]
    pub verdict: IsoVerdict,
    /// Brute-force answer, only for `n` within the oracle cutoff.
    pub oracle: Option<bool>,
}

fn parse_mode(mode: &str) -> Result<Mode, String> {
    mode.parse().map_err(|_| format!("unknown mode {mode:?}"))
}

fn parse_set(n: u64, text: &str, mode: Mode) -> Result<ConnectionSet, String> {
    if !(2..=MAX_VIEW_N).contains(&n) {
        return Err(format!("n must lie in 2..={MAX_VIEW_N}"));
    }
    let members = parse_residues(text).map_err(|e| e.to_string())?;
    match mode {
        Mode::Graph => ConnectionSet::with_inverses(n, members, mode),
        Mode::Digraph => ConnectionSet::new(n, members, mode),
    }
    .map_err(|e| e.to_string())
}

/// Key, key partition and CI verdict of `S`. Graph mode closes `S` under inverses.
pub fn view_value(n: u64, set: &str, mode: &str) -> Result<View, String> {
    let mode = parse_mode(mode)?;
    let set = parse_set(n, set, mode)?;
    if set.is_empty() {
        return Err("connection set is empty".into());
    }
    let engine = Engine::default();
    let key = engine.key_of_set(&set).map_err(|e| e.to_string())?;
    let verdict = engine.decide_ci(&set).map_err(|e| e.to_string())?;
    Ok(View {
        n,
        partition: key_partition(&key).classes().to_vec(),
        arcs: n as usize * set.len(),
        set,
        key,
        verdict,
    })
}

pub fn iso_value(n: u64, s: &str, t: &str, mode: &str) -> Result<IsoCheck, String> {
    let mode = parse_mode(mode)?;
    let (s, t) = (parse_set(n, s, mode)?, parse_set(n, t, mode)?);
    if s.is_empty() || t.is_empty() {
        return Err("connection set is empty".into());
    }
    let engine = Engine::default();
    let verdict = engine.muzychuk_isomorphic(&s, &t).map_err(|e| e.to_string())?;
    let oracle = if n <= DEFAULT_ORACLE_CUTOFF {
        Some(
            engine
                .oracle_isomorphic(&s, &t)
                .map_err(|e| e.to_string())?
                .is_some(),
        )
    } else {
        None
    };
    Ok(IsoCheck { verdict, oracle })
}

pub fn grid_value(n_max: u64, m_max: usize, mode: &str) -> Result<Vec<ClassificationReport>, String> {
    let mode = parse_mode(mode)?;
    if !(2..=MAX_GRID_N).contains(&n_max) || m_max > MAX_GRID_M {
        return Err(format!("grid limited to n ≤ {MAX_GRID_N} and m ≤ {MAX_GRID_M}"));
    }
    Engine::default()
        .verify_theorems(n_max, m_max, mode)
        .map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(value) => serde_json::to_string(&value).expect("values serialize"),
        Err(error) => serde_json::json!({ "error": error }).to_string(),
    }
}

#[wasm_bindgen]
pub fn circulant_view(n: u32, set: &str, mode: &str) -> String {
    to_json(view_value(n.into(), set, mode))
}

#[wasm_bindgen]
pub fn isomorphism_check(n: u32, s: &str, t: &str, mode: &str) -> String {
    to_json(iso_value(n.into(), s, t, mode))
}

#[wasm_bindgen]
pub fn classification_grid(n_max: u32, m_max: u32, mode: &str) -> String {
    to_json(grid_value(n_max.into(), m_max as usize, mode))
}
