//! Browser bindings: encode a categorical column, aggregate a small quality
//! table, and compare two strings through MinHash.

use catbench::aggregation::{consensus, QualityTable, Strategy};
use catbench::encoders::{gram_jaccard, minhash_encode, EncoderSpec, FittedEncoder, DEFAULT_GRAM};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn split(text: &str) -> Vec<&str> {
    text.split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Fits `spec` on comma-separated `levels` and 0/1 `targets` and returns the
/// per-level encoding table as JSON.
pub fn encode_table(spec: &str, levels: &str, targets: &str, seed: u64) -> Result<String, String> {
    let spec: EncoderSpec = spec.trim().parse().map_err(|e| format!("{e}"))?;
    let values: Vec<Option<&str>> = split(levels)
        .into_iter()
        .map(|v| if v == "?" { None } else { Some(v) })
        .collect();
    let target: Vec<u8> = split(targets)
        .into_iter()
        .map(|t| match t {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(format!("target `{other}` is not 0 or 1")),
        })
        .collect::<Result<_, _>>()?;
    if spec.is_supervised() && target.len() != values.len() {
        return Err(format!(
            "{} levels but {} targets",
            values.len(),
            target.len()
        ));
    }
    let target = spec.is_supervised().then_some(target.as_slice());
    let (fitted, train) =
        FittedEncoder::fit(&spec, &values, target, seed).map_err(|e| e.to_string())?;
    let table: Vec<_> = fitted
        .domain()
        .levels()
        .iter()
        .map(|l| json!({"level": l, "vector": fitted.encode_level(Some(l))}))
        .collect();
    let rows: Vec<Vec<f64>> = (0..train.rows()).map(|i| train.row(i).to_vec()).collect();
    Ok(json!({
        "spec": spec.to_string(),
        "width": fitted.width(),
        "levels": table,
        "unseen": fitted.fallback(),
        "train_rows": rows,
    })
    .to_string())
}

/// Parses `encoder,q1,q2,...` lines (empty cell = missing) and aggregates
/// them with the named strategy.
pub fn consensus_table(table: &str, strategy: &str) -> Result<String, String> {
    let mut encoders = Vec::new();
    let mut values = Vec::new();
    for line in table.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let mut cells = line.split(',').map(str::trim);
        encoders.push(cells.next().unwrap_or_default().to_string());
        let row = cells
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>()
                        .map(Some)
                        .map_err(|_| format!("`{c}` is not a number"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        values.push(row);
    }
    let m = values.first().map_or(0, Vec::len);
    if encoders.len() < 2 || m == 0 || values.iter().any(|r| r.len() != m) {
        return Err("need at least two encoders with the same number of datasets".into());
    }
    let datasets = (1..=m).map(|j| format!("D{j}")).collect();
    let table = QualityTable::new(encoders, datasets, values).map_err(|e| e.to_string())?;
    let strategies = if strategy.eq_ignore_ascii_case("all") {
        Strategy::all()
    } else {
        vec![strategy.parse::<Strategy>().map_err(|e| e.to_string())?]
    };
    let results: Vec<_> = strategies
        .iter()
        .map(|s| match consensus(s, &table) {
            Ok(c) => json!({
                "strategy": s.to_string(),
                "ranks": c.order.ranks(),
                "scores": c.scores,
                "diagnostics": c.diagnostics,
            }),
            Err(e) => json!({"strategy": s.to_string(), "error": e.to_string()}),
        })
        .collect();
    Ok(json!({"encoders": table.encoders(), "results": results}).to_string())
}

/// Gram-set Jaccard of two strings next to the MinHash agreement rate.
pub fn minhash_compare(a: &str, b: &str, components: usize) -> Result<String, String> {
    let ea = minhash_encode(a, components, DEFAULT_GRAM).map_err(|e| e.to_string())?;
    let eb = minhash_encode(b, components, DEFAULT_GRAM).map_err(|e| e.to_string())?;
    let agree = ea.iter().zip(&eb).filter(|(x, y)| x == y).count();
    Ok(json!({
        "jaccard": gram_jaccard(a, b, DEFAULT_GRAM),
        "match_rate": agree as f64 / components as f64,
        "components": components,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn encode_levels(
    spec: &str,
    levels: &str,
    targets: &str,
    seed: u32,
) -> Result<String, JsValue> {
    encode_table(spec, levels, targets, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn rank_encoders(table: &str, strategy: &str) -> Result<String, JsValue> {
    consensus_table(table, strategy).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn minhash_similarity(a: &str, b: &str, components: u32) -> Result<String, JsValue> {
    minhash_compare(a, b, components as usize).map_err(|e| JsValue::from_str(&e))
}
