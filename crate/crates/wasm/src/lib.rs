//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export takes plain numbers and comma-separated strings and returns a
//! JSON document. The work is done by the functions in [`demo`], which are
//! ordinary Rust and tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Exhaustive secrecy report for a Vandermonde or trivial scheme.
#[wasm_bindgen]
pub fn analyze(
    q: u32,
    n: usize,
    k: usize,
    scheme: &str,
    pmf: &str,
    epsilon: f64,
) -> Result<String, JsValue> {
    to_js(demo::analyze(q, n, k, scheme, pmf, epsilon))
}

/// Rate, leakage and symbol secrecy for every list size `k = 0..=n`.
#[wasm_bindgen]
pub fn rate_list_curve(q: u32, n: usize, pmf: &str) -> Result<String, JsValue> {
    to_js(demo::rate_list_curve(q, n, pmf))
}

/// Two-phase encryption with a one-time pad, then decryption with the right
/// key and with a wrong one.
#[wasm_bindgen]
pub fn two_phase(
    q: u32,
    n: usize,
    k: usize,
    message: &str,
    key: &str,
    wrong_key: &str,
) -> Result<String, JsValue> {
    to_js(demo::two_phase(q, n, k, message, key, wrong_key))
}
