//! Three operations for the browser page in `www/`. Each returns a JSON
//! string; the plain functions are the same operations for native callers.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sqrtcf::analytic::period_bound_check;
use sqrtcf::family::family_report;
use sqrtcf::int::is_squarefree;
use sqrtcf::{expand_sqrt, Error};

/// Largest `D` the bound curve accepts; the page stays responsive below it.
pub const CURVE_LIMIT: u64 = 5000;

/// Largest radicand [`expand_json`] accepts.
pub const EXPAND_LIMIT: i64 = i64::MAX / 4;

pub fn expand_json(d: &str) -> Result<String, String> {
    let d: i64 = d.trim().parse().map_err(|_| format!("{d:?} is not an integer"))?;
    if !(2..=EXPAND_LIMIT).contains(&d) {
        return Err(format!("D must lie in 2..={EXPAND_LIMIT}"));
    }
    let e = expand_sqrt(&d).map_err(|e: Error| e.to_string())?;
    Ok(json!({"D": d, "a0": e.a0, "period": e.period, "T": e.t()}).to_string())
}

pub fn family_json(word: &str, count: usize) -> Result<String, String> {
    let letters = word
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("bad letter {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let report = family_report(&letters, count.min(50)).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

/// `[{D, T, rhs, h}]` for squarefree `D` in `2..=max_d`.
pub fn bound_curve_json(max_d: u64) -> Result<String, String> {
    if max_d > CURVE_LIMIT {
        return Err(format!("max D is {CURVE_LIMIT} in the browser"));
    }
    let points = (2..=max_d)
        .filter(|&d| is_squarefree(d))
        .map(|d| {
            let r = period_bound_check(d)?;
            Ok(json!({"D": d, "T": r.t, "rhs": r.bound_rhs, "h": r.h, "holds": r.holds}))
        })
        .collect::<Result<Vec<Value>, Error>>()
        .map_err(|e| e.to_string())?;
    Ok(Value::Array(points).to_string())
}

#[wasm_bindgen]
pub fn expand(d: &str) -> Result<String, JsError> {
    expand_json(d).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn family(word: &str, count: usize) -> Result<String, JsError> {
    family_json(word, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bound_curve(max_d: u32) -> Result<String, JsError> {
    bound_curve_json(max_d.into()).map_err(|e| JsError::new(&e))
}
