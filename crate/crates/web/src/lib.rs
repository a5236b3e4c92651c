//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; errors come back as JS exceptions
//! carrying the message.

use nonforcing::cli::{compute_roots, run_demo, DemoArgs, OutputArgs, Route, RootsArgs, Format};
use nonforcing::defexp::{eval_deformed_exp, eval_truncated, truncated_coefficients, DensityParam};
use nonforcing::spectrum::{find_roots_truncated, weights_for_tail, RootOptions, RootTable};
use nonforcing::ExtReal;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn no_output() -> OutputArgs {
    OutputArgs {
        out: None,
        out_dir: None,
    }
}

/// Roots and weights. `route` is `truncated` (degree `k`) or `entire`
/// (`m` roots, or enough for a 1e-9 tail when `m` is 0).
pub fn roots_json(p: &str, k: usize, route: &str, m: usize) -> Result<String, String> {
    let report = match route {
        "truncated" => compute_roots(&RootsArgs {
            p: p.to_string(),
            k: Some(k),
            m: None,
            precision_bits: None,
            force: false,
            format: Format::Json,
            output: no_output(),
        })
        .map_err(|e| e.to_string())?,
        "entire" if m > 0 => compute_roots(&RootsArgs {
            p: p.to_string(),
            k: None,
            m: Some(m),
            precision_bits: None,
            force: false,
            format: Format::Json,
            output: no_output(),
        })
        .map_err(|e| e.to_string())?,
        "entire" => {
            let dp = DensityParam::parse(p).map_err(|e| e.to_string())?;
            let (roots, ws) = weights_for_tail(&dp, 1e-9, &RootOptions::default()).map_err(|e| e.to_string())?;
            return serde_json::to_string(&RootTable::new(&roots, Some(&ws))).map_err(|e| e.to_string());
        }
        other => return Err(format!("unknown route {other:?}")),
    };
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    full: Vec<Option<f64>>,
    truncated: Vec<Option<f64>>,
    truncated_roots: Vec<f64>,
}

/// Samples of `f_p` and `f_{p,k}` on `[x_min, x_max]`, plus the roots of
/// `f_{p,k}` when they are certified.
pub fn curve_json(p: &str, k: usize, x_min: f64, x_max: f64, points: usize) -> Result<String, String> {
    if !(x_min < x_max) || !(2..=4000).contains(&points) {
        return Err("need x_min < x_max and 2..=4000 points".into());
    }
    let dp = DensityParam::parse(p).map_err(|e| e.to_string())?;
    let coeffs = truncated_coefficients(&dp, k).map_err(|e| e.to_string())?;
    let tol = ExtReal::from_f64(1e-9, 64);
    let finite = |v: f64| v.is_finite().then_some(v);
    let mut curve = Curve {
        x: Vec::with_capacity(points),
        full: Vec::with_capacity(points),
        truncated: Vec::with_capacity(points),
        truncated_roots: Vec::new(),
    };
    for i in 0..points {
        let x = x_min + (x_max - x_min) * i as f64 / (points - 1) as f64;
        let xe = ExtReal::from_f64(x, 128);
        let full = eval_deformed_exp(&dp, &xe, &tol).map_err(|e| e.to_string())?;
        curve.x.push(x);
        curve.full.push(finite(full.to_f64()));
        curve.truncated.push(finite(eval_truncated(&coeffs, &xe).to_f64()));
    }
    if let Ok(roots) = find_roots_truncated(&dp, k, &RootOptions::default()) {
        curve.truncated_roots = roots.roots.iter().map(ExtReal::to_f64).collect();
    }
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

/// Builds the graph for `p` and audits it; `route` is `auto`, `truncated` or `graphon`.
pub fn demo_json(p: &str, k: usize, n: usize, seed: u64, route: &str) -> Result<String, String> {
    let mut args = DemoArgs::new(p, k, n);
    args.seed = seed;
    args.route = match route {
        "auto" => Route::Auto,
        "truncated" => Route::Truncated,
        "graphon" => Route::Graphon,
        other => return Err(format!("unknown route {other:?}")),
    };
    let report = run_demo(&args).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn roots(p: &str, k: usize, route: &str, m: usize) -> Result<String, JsError> {
    roots_json(p, k, route, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn curve(p: &str, k: usize, x_min: f64, x_max: f64, points: usize) -> Result<String, JsError> {
    curve_json(p, k, x_min, x_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn demo(p: &str, k: usize, n: usize, seed: u32, route: &str) -> Result<String, JsError> {
    demo_json(p, k, n, seed as u64, route).map_err(|e| JsError::new(&e))
}
