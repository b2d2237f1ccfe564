//! Browser bindings: factor a matrix, tabulate the Euler cocycle of
//! rotations, refute a greedy order. Every entry point returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use orderlab::circle::{check_cocycle_identity, ActionBall, EulerCocycleTable, PlCircleHomeo};
use orderlab::decomposition::{decompose, Ring};
use orderlab::exact::rational::{format_rational, parse_rational};
use orderlab::exact::{SpecialLinearElement, SquareMatrix};
use orderlab::order::witte::{witte_pipeline, WitteOutcome, WitteSystem};
use orderlab::order::GreedyOracle;

/// Largest matrix and ball the page accepts.
const MAX_N: usize = 6;
const MAX_RADIUS: u64 = 4;

fn js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// One row per line, entries separated by spaces or commas.
pub fn parse_matrix(text: &str) -> Result<SpecialLinearElement, String> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| parse_rational(t).map_err(|e| format!("'{t}': {e}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.len() > MAX_N {
        return Err(format!("at most {MAX_N} rows"));
    }
    let m = SquareMatrix::from_rows(rows).map_err(|e| e.to_string())?;
    SpecialLinearElement::new(m).map_err(|e| e.to_string())
}

pub fn decompose_json(text: &str, ring: &str) -> Result<Value, String> {
    let ring = match ring {
        "z" => Ring::Integers,
        "q" => Ring::Rationals,
        _ => return Err(format!("ring must be z or q, got '{ring}'")),
    };
    let m = parse_matrix(text)?;
    let d = decompose(&m, ring).map_err(|e| e.to_string())?;
    Ok(json!({"decomposition": d.to_json(), "roundTrip": d.product() == m}))
}

/// Angles as rationals, separated by spaces or commas.
pub fn euler_json(angles: &str, radius: u64) -> Result<Value, String> {
    if radius > MAX_RADIUS {
        return Err(format!("radius at most {MAX_RADIUS}"));
    }
    let gens = angles
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            parse_rational(t)
                .map(PlCircleHomeo::rotation)
                .map_err(|e| format!("'{t}': {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if gens.is_empty() {
        return Err("give at least one angle".into());
    }
    let ball = ActionBall::image(&gens, radius);
    let table = EulerCocycleTable::from_ball(&ball);
    let report =
        check_cocycle_identity(&table, &table.closed_triples()).map_err(|e| e.to_string())?;
    Ok(json!({"table": table, "cocycle": report, "valuesInRange": table.values_in_range()}))
}

pub fn witte_json(k: i64, seed: u64, witness_bound: u64) -> Result<Value, String> {
    let group = WitteSystem::new(k)
        .map_err(|e| e.to_string())?
        .group()
        .clone();
    let report = witte_pipeline(k, GreedyOracle::seeded(group.clone(), seed), witness_bound)
        .map_err(|e| e.to_string())?;
    Ok(match &report.outcome {
        WitteOutcome::Certificate(cert) => {
            let replayed = cert
                .replay(&mut GreedyOracle::seeded(group.clone(), seed))
                .is_ok();
            json!({
                "outcome": "certificate",
                "certificate": cert,
                "checked": cert.check(&group).is_ok(),
                "replayed": replayed,
                "queries": report.queries,
            })
        }
        WitteOutcome::Inconclusive { bound, .. } => {
            json!({"outcome": "inconclusive", "bound": bound})
        }
    })
}

#[wasm_bindgen]
pub fn decompose_matrix(text: &str, ring: &str) -> Result<String, JsValue> {
    js(decompose_json(text, ring))
}

#[wasm_bindgen]
pub fn euler_rotations(angles: &str, radius: u32) -> Result<String, JsValue> {
    js(euler_json(angles, radius as u64))
}

#[wasm_bindgen]
pub fn refute_greedy(k: i32, seed: u32, witness_bound: u32) -> Result<String, JsValue> {
    js(witte_json(k as i64, seed as u64, witness_bound as u64))
}

/// Formats a rational for display, e.g. to echo parsed input.
#[wasm_bindgen]
pub fn normalize_rational(text: &str) -> Result<String, JsValue> {
    parse_rational(text)
        .map(|r| format_rational(&r))
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposes_pasted_matrix() {
        let v = decompose_json("2 0 0\n0 3 0\n0 0 1/6", "q").unwrap();
        assert_eq!(v["roundTrip"], true);
        assert!(decompose_json("2 0\n0 1", "q").is_err());
        assert!(decompose_json("1 1\n0 1", "r").is_err());
    }

    #[test]
    fn rotation_table_is_a_cocycle() {
        let v = euler_json("1/3, 1/4", 2).unwrap();
        assert_eq!(v["valuesInRange"], true);
        assert!(v["cocycle"]["firstFailure"].is_null());
        assert!(euler_json("", 2).is_err());
    }

    #[test]
    fn greedy_order_is_refuted() {
        let v = witte_json(1, 0, 50).unwrap();
        assert_eq!(v["outcome"], "certificate");
        assert_eq!(v["checked"], true);
        assert_eq!(v["replayed"], true);
    }
}
