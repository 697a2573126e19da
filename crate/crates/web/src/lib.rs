//! wasm entry points for the static demo page in `www/`. Each export returns a
//! standalone SVG string; the plain functions underneath are what the native
//! tests exercise.

use wasm_bindgen::prelude::*;

use mingap_core::figures::{band_diagram, eigenvector_chart, spectrum_scatter};
use mingap_core::Family;

/// Largest order the page accepts; dense eigensolves beyond this stall a tab.
pub const MAX_ORDER: usize = 242;

fn family(name: &str) -> Result<Family, String> {
    Family::parse(name).map_err(|e| e.to_string())
}

pub fn bands_svg(name: &str, samples: usize) -> Result<String, String> {
    if !(8..=4096).contains(&samples) {
        return Err(format!("samples must lie in 8..=4096, got {samples}"));
    }
    band_diagram(family(name)?, samples)
        .and_then(|c| c.to_svg())
        .map_err(|e| e.to_string())
}

/// Eigenvalues of every admissible order in `lo..=hi`.
pub fn scatter_svg(name: &str, lo: usize, hi: usize) -> Result<String, String> {
    let f = family(name)?;
    if hi > MAX_ORDER {
        return Err(format!("orders above {MAX_ORDER} are not offered here"));
    }
    let ns: Vec<usize> = (lo..=hi).filter(|&n| f.admits(n)).collect();
    if ns.is_empty() {
        return Err(format!("no {} orders in {lo}..={hi}", f.as_str()));
    }
    spectrum_scatter(f, &ns)
        .and_then(|c| c.to_svg())
        .map_err(|e| e.to_string())
}

pub fn eigenvector_svg(name: &str, n: usize, count: usize) -> Result<String, String> {
    if n > MAX_ORDER {
        return Err(format!("orders above {MAX_ORDER} are not offered here"));
    }
    eigenvector_chart(family(name)?, n, count.clamp(1, 6))
        .and_then(|c| c.to_svg())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = bandDiagram)]
pub fn band_diagram_js(family: &str, samples: usize) -> Result<String, JsError> {
    bands_svg(family, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = spectrumScatter)]
pub fn spectrum_scatter_js(family: &str, lo: usize, hi: usize) -> Result<String, JsError> {
    scatter_svg(family, lo, hi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = eigenvectorChart)]
pub fn eigenvector_chart_js(family: &str, n: usize, count: usize) -> Result<String, JsError> {
    eigenvector_svg(family, n, count).map_err(|e| JsError::new(&e))
}
