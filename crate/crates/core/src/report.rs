//! `melikyan info` and `melikyan grade`.

use serde_json::{json, Value};

use crate::error::Result;
use crate::grading::{gamma_bar, gamma_m, standard_grading};
use crate::group::{character_group, subgroup_generated, AbelianGroup, GroupHom};
use crate::json::{algebra_to_json, group_element_to_json, hom_spec_to_json, monomial_grading_to_json};
use crate::melikyan::MelikyanAlgebra;

pub const SCHEMA_INFO: &str = "melikyan.info/1";
pub const SCHEMA_GRADE: &str = "melikyan.grade/1";

/// Dimensions, degree ranges and the support of the standard Z^2-grading.
pub fn info(alg: &MelikyanAlgebra) -> Value {
    let d = alg.block_dim();
    let (lo, hi) = alg.canonical_degree_range();
    let gm = gamma_m(alg);
    let support = gm.support();
    let bar_index = subgroup_generated(&AbelianGroup::free(2), &gamma_bar(alg).support()).ok().and_then(|s| s.index());
    json!({
        "schema": SCHEMA_INFO,
        "algebra": algebra_to_json(alg),
        "field": alg.field().descriptor(),
        "dims": {"O": d, "W": 2 * d, "Wtilde": 2 * d, "M": alg.dim()},
        "canonical_degree_range": [lo, hi],
        "gamma_m_support_size": support.len(),
        "gamma_m_support": support.iter().map(|g| [g.free[0], g.free[1]]).collect::<Vec<_>>(),
        "gamma_bar_support_index": bar_index,
    })
}

pub fn info_table(v: &Value) -> String {
    let dims = &v["dims"];
    format!(
        "M(2; ({}, {})) over GF(5^{})\n  dim O = {}, dim W = {}, dim W~ = {}, dim M = {}\n  canonical degrees {} .. {}\n  support of the standard Z^2-grading: {} labels\n  index of the support of the deg_zz grading: {}\n",
        v["algebra"]["n"][0],
        v["algebra"]["n"][1],
        v["field"]["k"],
        dims["O"],
        dims["W"],
        dims["Wtilde"],
        dims["M"],
        v["canonical_degree_range"][0],
        v["canonical_degree_range"][1],
        v["gamma_m_support_size"],
        v["gamma_bar_support_index"],
    )
}

/// The standard grading induced by `phi`, its verdict and support, and
/// whether the character group of the target can act over `field`.
pub struct GradeOutput {
    pub json: Value,
    pub passed: bool,
}

pub fn grade(alg: &MelikyanAlgebra, phi: &GroupHom) -> Result<GradeOutput> {
    let g = standard_grading(alg, phi)?;
    let verdict = g.verify();
    let passed = verdict.is_ok();
    let target = phi.codomain();
    let duality = if target.is_finite() {
        match character_group(target, alg.field()) {
            Ok(chars) => json!({"available": true, "characters": chars.len()}),
            Err(e) => json!({"available": false, "reason": e.to_string()}),
        }
    } else {
        json!({"available": false, "reason": "infinite group: characters are not finitely many"})
    };
    let json = json!({
        "schema": SCHEMA_GRADE,
        "hom_spec": hom_spec_to_json(phi),
        "verdict": if passed { "pass" } else { "fail" },
        "witness": verdict.err().map(|w| w.to_string()),
        "support": g.support().iter().map(group_element_to_json).collect::<Vec<_>>(),
        "duality": duality,
        "grading": monomial_grading_to_json(&g),
    });
    Ok(GradeOutput { json, passed })
}
