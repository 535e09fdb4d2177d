//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function returns a JSON string. The plain-Rust functions in
//! this module do the work and are what the native tests exercise; the
//! `#[wasm_bindgen]` wrappers only convert errors into JS exceptions.
//!
//! All scans run on one thread, since `wasm32-unknown-unknown` has none to spare.

use practical_numbers::arith::factorize;
use practical_numbers::density::{f_histogram_with, rho_table_with, to_f64};
use practical_numbers::hs::hs_threshold;
use practical_numbers::practical::decompose_factorization;
use practical_numbers::{ScanConfig, Sieve};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest `n` accepted by [`explore`].
pub const MAX_EXPLORE_N: u64 = 1_000_000_000_000_000;

/// Largest `x` accepted by the scanning operations.
pub const MAX_SCAN_X: u64 = 5_000_000;

/// Largest `m` accepted by [`density_table`].
pub const MAX_DENSITY_M: u64 = 2_000;

fn check(flag: &str, v: u64, lo: u64, hi: u64) -> Result<(), String> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(format!("{flag}: value {v} out of range {lo}..={hi}"))
    }
}

fn sieve(x: u64) -> Result<Sieve, String> {
    Sieve::new(x, ScanConfig::single_threaded()).map_err(|e| e.to_string())
}

/// Factorisation, practical decomposition and threshold ratio of `n`.
pub fn explore(n: u64) -> Result<String, String> {
    check("n", n, 1, MAX_EXPLORE_N)?;
    let fact = factorize(n, None).map_err(|e| e.to_string())?;
    let d = decompose_factorization(&fact).map_err(|e| e.to_string())?;
    let factors: Vec<Value> = fact.factors().iter().map(|&(p, e)| json!([p, e])).collect();
    let (threshold, ratio) = match hs_threshold(n) {
        Ok(t) => (json!(t), json!(d.f_value as f64 / t)),
        Err(_) => (Value::Null, Value::Null),
    };
    Ok(json!({
        "n": n,
        "factors": factors,
        "practical": d.is_practical,
        "f": d.f_value,
        "component": d.component,
        "cofactor": d.cofactor,
        "threshold": threshold,
        "ratio": ratio,
    })
    .to_string())
}

/// `N(x, y) · log y / x` for each `y` in `ys`, in the given order.
pub fn ratio_curve(x: u64, ys: &[u64]) -> Result<String, String> {
    check("x", x, 4, MAX_SCAN_X)?;
    for &y in ys {
        check("y", y, 4, x)?;
    }
    let grid = sieve(x)?
        .ratio_grid(&[x], ys)
        .map_err(|e| e.to_string())?;
    let rows: Vec<Value> = grid
        .points
        .iter()
        .map(|p| json!({"y": p.y, "count": p.count, "normalized": p.normalized}))
        .collect();
    Ok(Value::Array(rows).to_string())
}

/// Exact densities `ρ_m` for `m <= m_max` next to the frequency of
/// `f(n) = m` among `n <= sample_x`. Only endpoints (`ρ_m > 0`) are listed.
pub fn density_table(m_max: u64, sample_x: u64) -> Result<String, String> {
    check("m_max", m_max, 1, MAX_DENSITY_M)?;
    check("sample_x", sample_x, 1, MAX_SCAN_X)?;
    let sv = sieve(sample_x.max(m_max))?;
    let rho = rho_table_with(&sv, m_max).map_err(|e| e.to_string())?;
    let hist = f_histogram_with(&sv, sample_x, m_max).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = rho
        .iter()
        .map(|(m, r)| {
            json!({
                "m": m,
                "rho_num": r.numer().to_string(),
                "rho_den": r.denom().to_string(),
                "rho_float": to_f64(r),
                "empirical": hist.density(*m),
            })
        })
        .collect();
    Ok(Value::Array(rows).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = explore)]
pub fn explore_js(n: f64) -> Result<String, JsValue> {
    js(to_u64("n", n).and_then(explore))
}

#[wasm_bindgen(js_name = ratioCurve)]
pub fn ratio_curve_js(x: f64, ys: Vec<f64>) -> Result<String, JsValue> {
    js((|| {
        let ys = ys
            .iter()
            .map(|&y| to_u64("y", y))
            .collect::<Result<Vec<_>, _>>()?;
        ratio_curve(to_u64("x", x)?, &ys)
    })())
}

#[wasm_bindgen(js_name = densityTable)]
pub fn density_table_js(m_max: f64, sample_x: f64) -> Result<String, JsValue> {
    js((|| density_table(to_u64("m_max", m_max)?, to_u64("sample_x", sample_x)?))())
}

/// JS numbers arrive as doubles; anything above 2^53 has already lost digits.
fn to_u64(flag: &str, v: f64) -> Result<u64, String> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 9_007_199_254_740_992.0 {
        Ok(v as u64)
    } else {
        Err(format!("{flag}: {v} is not a non-negative integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_conversion() {
        assert_eq!(to_u64("n", 12.0), Ok(12));
        assert!(to_u64("n", -1.0).is_err());
        assert!(to_u64("n", 1.5).is_err());
        assert!(to_u64("n", f64::NAN).is_err());
        assert!(to_u64("n", 1e17).is_err());
    }

    #[test]
    fn range_messages_name_the_flag() {
        assert_eq!(
            explore(0).unwrap_err(),
            format!("n: value 0 out of range 1..={MAX_EXPLORE_N}")
        );
        assert!(ratio_curve(100, &[3]).unwrap_err().starts_with("y:"));
        assert!(ratio_curve(100, &[101]).unwrap_err().starts_with("y:"));
        assert!(density_table(0, 10).unwrap_err().starts_with("m_max:"));
    }
}
