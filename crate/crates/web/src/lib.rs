//! Browser bindings for the demo page in `www/`: element normalization,
//! suite runs and fibers over sampled points of the variety.
//!
//! Each binding wraps a plain function returning JSON text, so the same code
//! is testable natively.

use qroots_core::center_azumaya::{
    fiber_data, is_full_matrix_algebra, omega_geometric, sample_v_points, v_contains, ClassicalFn,
    FrobeniusConvention,
};
use qroots_core::diffops::Which;
use qroots_core::qcoord::{ChartAlgebra, CoordRing};
use qroots_core::rootdata::CartanType;
use qroots_core::suites::{dump_element, run_suite, Config};
use qroots_core::uqalg::Uq;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn config(cartan_type: &str, ell: u32) -> Result<Config, String> {
    let t = CartanType::parse(cartan_type).map_err(|e| e.to_string())?;
    Config::new(t, ell).map_err(|e| e.to_string())
}

/// Canonical and divided-power printouts of `expr`, as JSON.
pub fn normalize_json(expr: &str, cartan_type: &str, ell: u32) -> Result<String, String> {
    let d = dump_element(expr, &config(cartan_type, ell)?)?;
    Ok(serde_json::to_string(&d).expect("dump serializes"))
}

/// The JSON report of one suite.
pub fn verify_json(suite: &str, cartan_type: &str, ell: u32) -> Result<String, String> {
    let r = run_suite(suite, &config(cartan_type, ell)?).map_err(|e| e.to_string())?;
    Ok(r.to_json(false))
}

/// A sampled point of the variety for `A1`, `ell = 3`, the `Omega` values of
/// the two classical coordinates there and the fiber's matrix-algebra report.
pub fn fiber_json(seed: u64) -> Result<String, String> {
    let cfg = config("A1", 3)?;
    let rc = cfg.root_config().map_err(|e| e.to_string())?;
    let u = Uq::with_bound(cfg.root_datum().map_err(|e| e.to_string())?, cfg.ht_bound);
    let ring = CoordRing::new(&u, Some(rc));
    let chart = ChartAlgebra::new(&ring, &[], 1).map_err(|e| e.to_string())?;
    let conv = FrobeniusConvention::new(&u, &rc).map_err(|e| e.to_string())?;
    let p = sample_v_points(3, 1, seed).remove(0);
    let fd = fiber_data(&chart, &conv, &p).map_err(|e| e.to_string())?;
    let report = is_full_matrix_algebra(&fd.algebra());
    let omegas: Vec<_> = [("x", ClassicalFn::monomial(1, 0)), ("y", ClassicalFn::monomial(1, 1))]
        .iter()
        .map(|(name, phi)| {
            json!({
                "phi": name,
                "omega1": omega_geometric(phi, Which::One, &p, 3).to_string(),
                "omega2": omega_geometric(phi, Which::Two, &p, 3).to_string(),
            })
        })
        .collect();
    Ok(json!({ "point": p, "on_variety": v_contains(&p, 3), "omega": omegas, "fiber": report }).to_string())
}

#[wasm_bindgen]
pub fn normalize(expr: &str, cartan_type: &str, ell: u32) -> Result<String, JsError> {
    normalize_json(expr, cartan_type, ell).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(suite: &str, cartan_type: &str, ell: u32) -> Result<String, JsError> {
    verify_json(suite, cartan_type, ell).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fiber(seed: u32) -> Result<String, JsError> {
    fiber_json(seed as u64).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_reports_canonical_form() {
        let v: serde_json::Value = serde_json::from_str(&normalize_json("k[0]", "A1", 3).unwrap()).unwrap();
        assert_eq!(v["canonical"], "1");
        assert!(normalize_json("e*", "A1", 3).is_err());
        assert!(normalize_json("e", "A2", 2).unwrap_err().contains("condition (a)"));
    }

    #[test]
    fn verify_runs_a_suite() {
        let v: serde_json::Value = serde_json::from_str(&verify_json("braid", "A1", 3).unwrap()).unwrap();
        assert_eq!(v["suite"], "braid");
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
    }

    #[test]
    fn fiber_is_a_full_matrix_algebra() {
        let v: serde_json::Value = serde_json::from_str(&fiber_json(3).unwrap()).unwrap();
        assert_eq!(v["on_variety"], true);
        assert_eq!(v["fiber"]["full"], true);
        assert_eq!(v["fiber"]["dim"], 9);
        for o in v["omega"].as_array().unwrap() {
            assert_eq!(o["omega1"], o["omega2"]);
        }
    }
}
