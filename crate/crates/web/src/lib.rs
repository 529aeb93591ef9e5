//! wasm-bindgen entry points for `www/index.html`. Every export returns a
//! JSON string; the `*_json` functions hold the logic so they can be tested
//! natively. Seeds are `u32` on the JS side to stay plain numbers.

use nofdm_core::berlab::{self, CorrelationRow, SweepSpec};
use nofdm_core::modem::ModemConfig;
use nofdm_core::stats::antipodal_ber;
use nofdm_core::{Execution, TransformKind};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Res = Result<String, String>;

fn kind(s: &str) -> Result<TransformKind, String> {
    s.parse::<TransformKind>().map_err(|e| e.to_string())
}

fn json<T: Serialize>(v: &T) -> Res {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct RowView {
    abs_c: Vec<f64>,
    ici_power: f64,
}

pub fn correlation_row_json(kind_name: &str, n: usize, alpha: f64, k: usize) -> Res {
    let row = CorrelationRow::new(kind(kind_name)?, n, alpha, k).map_err(|e| e.to_string())?;
    let ici_power = row
        .abs_c
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != k)
        .map(|(_, v)| v * v)
        .sum();
    json(&RowView {
        abs_c: row.abs_c,
        ici_power,
    })
}

#[derive(Serialize)]
struct PsdView {
    freqs_hz: Vec<f64>,
    density_db: Vec<f64>,
    edge_hz: f64,
}

pub fn psd_json(kind_name: &str, alpha: f64, frames: usize, seed: u64) -> Res {
    let config = ModemConfig {
        kind: kind(kind_name)?,
        ..ModemConfig::baseline(alpha)
    };
    let psd = berlab::estimate_psd(&config, frames, seed, 512, 0.5).map_err(|e| e.to_string())?;
    json(&PsdView {
        edge_hz: psd.edge_hz(-10.0),
        freqs_hz: psd.freqs_hz,
        density_db: psd.density_db,
    })
}

#[derive(Serialize)]
struct BerView {
    ebn0_db: f64,
    ber: f64,
    ci_lo: f64,
    ci_hi: f64,
    orthogonal: f64,
}

/// BER at Eb/N0 = 0, 2, ..., `max_db` for a 64-subcarrier system.
pub fn ber_curve_json(kind_name: &str, alpha: f64, iterations: usize, max_db: f64, seed: u64) -> Res {
    let base = ModemConfig {
        n: 64,
        cp_len: 0,
        kind: kind(kind_name)?,
        ..ModemConfig::baseline(alpha)
    };
    let points = (max_db / 2.0).floor().max(0.0) as usize + 1;
    let spec = SweepSpec {
        ebn0_db: (0..points).map(|i| 2.0 * i as f64).collect(),
        iterations: vec![iterations],
        max_bits: 200_000,
        min_errors: 100,
        batch_symbols: 32,
        seed,
        ..SweepSpec::new(base)
    };
    let result = berlab::run_ber_sweep(&spec, Execution::Sequential).map_err(|e| e.to_string())?;
    let view: Vec<BerView> = result
        .records
        .iter()
        .map(|p| BerView {
            ebn0_db: p.ebn0_db,
            ber: p.ber,
            ci_lo: p.ci_lo,
            ci_hi: p.ci_hi,
            orthogonal: antipodal_ber(p.ebn0_db),
        })
        .collect();
    json(&view)
}

fn js(r: Res) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn correlation_row(kind: &str, n: usize, alpha: f64, k: usize) -> Result<String, JsError> {
    js(correlation_row_json(kind, n, alpha, k))
}

#[wasm_bindgen]
pub fn psd_curve(kind: &str, alpha: f64, frames: usize, seed: u32) -> Result<String, JsError> {
    js(psd_json(kind, alpha, frames, seed.into()))
}

#[wasm_bindgen]
pub fn ber_curve(kind: &str, alpha: f64, iterations: usize, max_db: f64, seed: u32) -> Result<String, JsError> {
    js(ber_curve_json(kind, alpha, iterations, max_db, seed.into()))
}
