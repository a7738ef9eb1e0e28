//! WebAssembly bindings used by the static page in `www/`.
//!
//! Every exported function returns a JSON string; errors surface as thrown
//! JavaScript exceptions carrying the library's error message.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qkick::classify::{classify_decomposition, Classification};
use qkick::error::Result;
use qkick::hamiltonian::random_hamiltonian;
use qkick::harness::{Evaluator, Reference, SweepMode};
use qkick::spectral::{analyze_peripheral, DEFAULT_PERIPHERAL_TOL};
use qkick::zoo;

/// Largest kick count the page may request.
pub const MAX_KICKS: u64 = 200;

#[derive(Debug, Serialize)]
pub struct ChannelSummary {
    pub dim: usize,
    pub classification: Classification,
    pub eigenvalues: Vec<[f64; 2]>,
    pub peripheral: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub channel: String,
    pub metric: &'static str,
    pub seed: u64,
    pub t: f64,
    pub n: Vec<u64>,
    pub values: Vec<f64>,
}

pub fn summarize(spec: &str) -> Result<ChannelSummary> {
    let entry = zoo::from_spec(spec)?;
    let dec = analyze_peripheral(entry.channel.superoperator(), DEFAULT_PERIPHERAL_TOL)?;
    let classification = classify_decomposition(&dec)?.with_name(entry.name);
    Ok(ChannelSummary {
        dim: dec.dim(),
        classification,
        eigenvalues: dec.spectrum().iter().map(|z| [z.re, z.im]).collect(),
        peripheral: dec.peripheral_values().iter().map(|z| [z.re, z.im]).collect(),
    })
}

/// Purity (bath decoupling, one qubit of system) or Choi distance to the
/// peripheral power (Zeno) for n = 1..=n_max kicks.
pub fn curve(spec: &str, mode: SweepMode, seed: u64, n_max: u64, t: f64) -> Result<Curve> {
    if n_max == 0 || n_max > MAX_KICKS {
        return Err(qkick::error::Error::InvalidParameter(format!(
            "number of kicks must lie in 1..={MAX_KICKS}"
        )));
    }
    let entry = zoo::from_spec(spec)?;
    let d1 = (mode == SweepMode::Dd).then_some(2);
    let eval = Evaluator::new(entry.channel.superoperator(), mode, d1, Reference::PeripheralPower)?;
    let h = random_hamiltonian(eval.dim(), seed)?;
    let n: Vec<u64> = (1..=n_max).collect();
    let values = eval.evaluate(std::slice::from_ref(&h), t, &n)?.remove(0);
    Ok(Curve {
        channel: entry.name,
        metric: eval.metric_name(),
        seed,
        t,
        n,
        values,
    })
}

fn to_js<T: Serialize>(value: Result<T>) -> std::result::Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// Classification record and spectrum of a zoo channel, e.g. `E_square(p=0.3)`.
#[wasm_bindgen(js_name = classifyChannel)]
pub fn classify_channel(spec: &str) -> std::result::Result<String, JsError> {
    to_js(summarize(spec))
}

/// System purity when the channel kicks the bath of a random two-qubit-system
/// Hamiltonian.
#[wasm_bindgen(js_name = ddCurve)]
pub fn dd_curve(spec: &str, seed: u64, n_max: u64, t: f64) -> std::result::Result<String, JsError> {
    to_js(curve(spec, SweepMode::Dd, seed, n_max, t))
}

/// Distance of the kicked evolution from the bare kicks for a random Hamiltonian.
#[wasm_bindgen(js_name = zenoCurve)]
pub fn zeno_curve(spec: &str, seed: u64, n_max: u64, t: f64) -> std::result::Result<String, JsError> {
    to_js(curve(spec, SweepMode::Zeno, seed, n_max, t))
}

#[wasm_bindgen(js_name = zooNames)]
pub fn zoo_names() -> String {
    let mut names: Vec<&str> = zoo::TABLE_NAMES.to_vec();
    names.push("E_half");
    serde_json::to_string(&names).expect("string list serializes")
}
