//! Browser bindings for the enclosure demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; the plain functions in [`demo`] carry the
//! logic and are what the native tests call.

pub mod demo;

use wasm_bindgen::prelude::*;

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Upper boundary of a region as `[re0, im0, re1, im1, ...]`.
#[wasm_bindgen]
pub fn region_boundary(kind: &str, a: f64, b: f64, gamma: f64, resolution: usize) -> Result<Vec<f64>, JsError> {
    js(demo::region_boundary(kind, a, b, gamma, resolution))
}

/// Upper boundary of the coarser prior hull, same layout.
#[wasm_bindgen]
pub fn prior_boundary(a: f64, b: f64, resolution: usize) -> Result<Vec<f64>, JsError> {
    js(demo::prior_boundary(a, b, resolution))
}

/// `[inside, margin]` for the point `re + i·im`; `inside` is 0 or 1.
#[wasm_bindgen]
pub fn probe(kind: &str, a: f64, b: f64, gamma: f64, re: f64, im: f64) -> Result<Vec<f64>, JsError> {
    js(demo::probe(kind, a, b, gamma, re, im).map(|p| vec![f64::from(u8::from(p.inside)), p.margin]))
}

/// Rows `[p, im_coef, half_diagonal, bst_im, bst_abs]` for `points` log-spaced p in `[2, max_p]`.
#[wasm_bindgen]
pub fn constants_curve(max_p: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(demo::constants_curve(max_p, points))
}

#[wasm_bindgen]
pub fn version() -> String {
    krein_enclosure::VERSION.to_string()
}
