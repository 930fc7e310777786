//! JSON documents: field elements, algebra elements, groups, gradings,
//! endomorphisms, torus parameters and homomorphism specs. Every top-level
//! document carries a `"schema"` tag.
//!
//! Coefficients inside gradings and matrices are written as integers: the
//! element with coordinates `(r_0, ..., r_{k-1})` in the polynomial basis is
//! `r_0 + r_1 p + ... + r_{k-1} p^{k-1}`, interpreted against the document's
//! `"field"` descriptor.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphism::{Endomorphism, TorusParameter};
use crate::divided_power::{DividedPowerPoly, MultiIndex, Shape};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, Fq, GaloisField};
use crate::grading::{Component, Grading, MonomialGrading};
use crate::group::{AbelianGroup, GroupElement, GroupHom};
use crate::linalg::Matrix;
use crate::melikyan::{MelikyanAlgebra, MelikyanElement};
use crate::witt::{TildeField, VectorField};

pub const SCHEMA_ALGEBRA: &str = "melikyan.algebra/1";
pub const SCHEMA_ELEMENT: &str = "melikyan.element/1";
pub const SCHEMA_GRADING: &str = "melikyan.grading/1";
pub const SCHEMA_ENDOMORPHISM: &str = "melikyan.endomorphism/1";
pub const SCHEMA_TORUS: &str = "melikyan.torus-parameter/1";
pub const SCHEMA_HOM_SPEC: &str = "melikyan.hom-spec/1";

fn parse<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn field_from_descriptor(d: &FieldDescriptor) -> Result<GaloisField> {
    let f = GaloisField::new(d.p, d.k)?;
    if f.modulus() != d.modulus.as_slice() {
        return Err(Error::Parse(format!("unsupported modulus {:?} for GF({}^{})", d.modulus, d.p, d.k)));
    }
    Ok(f)
}

fn check_field(v: &Value, field: &GaloisField) -> Result<()> {
    if let Some(d) = v.get("field") {
        let d: FieldDescriptor = parse(d, "field")?;
        field.ensure_same(&field_from_descriptor(&d)?)?;
    }
    Ok(())
}

fn decode(field: &GaloisField, v: &Value) -> Result<Fq> {
    let n = v.as_u64().ok_or_else(|| Error::Parse(format!("coefficient {v} is not a non-negative integer")))?;
    u32::try_from(n).ok().and_then(|n| field.decode(n)).ok_or_else(|| Error::Parse(format!("coefficient {n} out of range")))
}

pub fn field_element_to_json(field: &GaloisField, a: Fq) -> Value {
    serde_json::to_value(field.element(a)).expect("serializable")
}

pub fn field_element_from_json(field: &GaloisField, v: &Value) -> Result<Fq> {
    let e: FieldElement = parse(v, "field element")?;
    Ok(field.from_element(&e)?)
}

pub fn algebra_to_json(alg: &MelikyanAlgebra) -> Value {
    json!({"schema": SCHEMA_ALGEBRA, "algebra": "melikyan", "p": 5, "n": alg.n()})
}

#[derive(Deserialize)]
struct AlgebraDoc {
    algebra: String,
    p: u32,
    n: [u32; 2],
}

/// Reads an algebra descriptor; the field is supplied separately.
pub fn algebra_from_json(v: &Value, field: &GaloisField) -> Result<MelikyanAlgebra> {
    let d: AlgebraDoc = parse(v, "algebra descriptor")?;
    if d.algebra != "melikyan" {
        return Err(Error::Parse(format!("unknown algebra {:?}", d.algebra)));
    }
    if d.p != field.characteristic() {
        return Err(Error::FieldMismatch);
    }
    MelikyanAlgebra::new(d.n, field)
}

pub fn poly_to_json(f: &DividedPowerPoly) -> Value {
    let field = f.field();
    Value::Array(f.terms().map(|(a, c)| json!({"a": a.entries(), "coeff": field_element_to_json(field, c)})).collect())
}

#[derive(Deserialize)]
struct TermDoc {
    a: Vec<u32>,
    coeff: Value,
}

pub fn poly_from_json(shape: &Shape, field: &GaloisField, v: &Value) -> Result<DividedPowerPoly> {
    let terms: Vec<TermDoc> = parse(v, "polynomial")?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        out.push((MultiIndex::new(shape, &t.a)?, field_element_from_json(field, &t.coeff)?));
    }
    Ok(DividedPowerPoly::from_terms(shape, field, out))
}

pub fn vector_field_to_json(d: &VectorField) -> Value {
    json!({"kind": "W", "components": d.components().iter().map(poly_to_json).collect::<Vec<_>>()})
}

pub fn tilde_field_to_json(d: &TildeField) -> Value {
    json!({"kind": "Wtilde", "components": d.components().iter().map(poly_to_json).collect::<Vec<_>>()})
}

fn components_from_json(shape: &Shape, field: &GaloisField, v: &Value, kind: &str) -> Result<Vec<DividedPowerPoly>> {
    if v.get("kind").and_then(Value::as_str) != Some(kind) {
        return Err(Error::Parse(format!("expected kind {kind:?}")));
    }
    let comps = v.get("components").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing components".into()))?;
    comps.iter().map(|c| poly_from_json(shape, field, c)).collect()
}

pub fn vector_field_from_json(shape: &Shape, field: &GaloisField, v: &Value) -> Result<VectorField> {
    VectorField::new(components_from_json(shape, field, v, "W")?)
}

pub fn tilde_field_from_json(shape: &Shape, field: &GaloisField, v: &Value) -> Result<TildeField> {
    let mut c = components_from_json(shape, field, v, "Wtilde")?;
    if c.len() != 2 {
        return Err(Error::RequiresTwoVariables(c.len()));
    }
    let f2 = c.pop().unwrap();
    let f1 = c.pop().unwrap();
    TildeField::new(f1, f2)
}

pub fn element_to_json(y: &MelikyanElement) -> Value {
    json!({
        "schema": SCHEMA_ELEMENT,
        "o": poly_to_json(y.o_part()),
        "w": vector_field_to_json(y.w_part()),
        "wt": tilde_field_to_json(y.wt_part()),
    })
}

pub fn element_from_json(alg: &MelikyanAlgebra, v: &Value) -> Result<MelikyanElement> {
    let (s, f) = (alg.shape(), alg.field());
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing {k:?}")));
    MelikyanElement::new(
        poly_from_json(s, f, get("o")?)?,
        vector_field_from_json(s, f, get("w")?)?,
        tilde_field_from_json(s, f, get("wt")?)?,
    )
}

pub fn group_to_json(g: &AbelianGroup) -> Value {
    serde_json::to_value(g).expect("serializable")
}

pub fn group_from_json(v: &Value) -> Result<AbelianGroup> {
    #[derive(Deserialize)]
    struct Doc {
        rank: usize,
        torsion: Vec<u64>,
    }
    let d: Doc = parse(v, "group")?;
    AbelianGroup::new(d.rank, &d.torsion)
}

pub fn group_element_to_json(g: &GroupElement) -> Value {
    serde_json::to_value(g).expect("serializable")
}

pub fn group_element_from_json(group: &AbelianGroup, v: &Value) -> Result<GroupElement> {
    #[derive(Deserialize)]
    struct Doc {
        #[serde(default)]
        free: Vec<i64>,
        #[serde(default)]
        torsion: Vec<i64>,
    }
    let d: Doc = parse(v, "group element")?;
    group.element(&d.free, &d.torsion)
}

pub fn grading_to_json(g: &Grading) -> Value {
    let f = g.field();
    let components: Vec<Value> = g
        .components()
        .iter()
        .map(|c| {
            let basis: Vec<Vec<u32>> = c.basis.iter().map(|v| v.iter().map(|&x| f.encode(x)).collect()).collect();
            json!({"label": group_element_to_json(&c.label), "basis": basis})
        })
        .collect();
    json!({
        "schema": SCHEMA_GRADING,
        "field": f.descriptor(),
        "algebra": algebra_to_json(g.algebra()),
        "group": group_to_json(g.group()),
        "components": components,
    })
}

/// Compact form: one label per canonical basis index.
pub fn monomial_grading_to_json(g: &MonomialGrading) -> Value {
    json!({
        "schema": SCHEMA_GRADING,
        "field": g.algebra().field().descriptor(),
        "algebra": algebra_to_json(g.algebra()),
        "group": group_to_json(g.group()),
        "degrees": g.degrees().iter().map(group_element_to_json).collect::<Vec<_>>(),
    })
}

/// Reads either form of grading document for the given algebra.
pub fn grading_from_json(alg: &MelikyanAlgebra, v: &Value) -> Result<Grading> {
    check_field(v, alg.field())?;
    let group = group_from_json(v.get("group").ok_or_else(|| Error::Parse("missing group".into()))?)?;
    if let Some(degrees) = v.get("degrees") {
        let degrees = degrees.as_array().ok_or_else(|| Error::Parse("degrees must be a list".into()))?;
        let degrees = degrees.iter().map(|d| group_element_from_json(&group, d)).collect::<Result<Vec<_>>>()?;
        return Ok(MonomialGrading::new(alg, &group, degrees)?.to_grading());
    }
    let comps = v.get("components").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing components".into()))?;
    let mut components = Vec::with_capacity(comps.len());
    for c in comps {
        let label = group_element_from_json(&group, c.get("label").ok_or_else(|| Error::Parse("missing label".into()))?)?;
        let basis = c.get("basis").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing basis".into()))?;
        let basis = basis
            .iter()
            .map(|row| {
                let row = row.as_array().ok_or_else(|| Error::Parse("basis vector must be a list".into()))?;
                row.iter().map(|x| decode(alg.field(), x)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        components.push(Component { label, basis });
    }
    Grading::new(alg, &group, components)
}

pub fn endomorphism_to_json(psi: &Endomorphism) -> Value {
    let f = psi.algebra().field();
    let m = psi.matrix();
    let mut entries = Vec::with_capacity(m.nnz());
    for (j, col) in m.sparse_columns().iter().enumerate() {
        for &(i, x) in col {
            entries.push(json!([i, j, f.encode(x)]));
        }
    }
    let flags = psi.flags();
    json!({
        "schema": SCHEMA_ENDOMORPHISM,
        "field": f.descriptor(),
        "algebra": algebra_to_json(psi.algebra()),
        "dim": m.rows(),
        "entries": entries,
        "flags": {
            "invertible": flags.invertible,
            "bracket_preserving": flags.bracket_preserving,
            "w_preserving": flags.w_preserving,
        },
    })
}

/// Reads the matrix only; flags are recomputed, and `bracket_preserving` is
/// re-established through [`Endomorphism::verified`] when the document claims it.
pub fn endomorphism_from_json(alg: &MelikyanAlgebra, v: &Value) -> Result<Endomorphism> {
    check_field(v, alg.field())?;
    let entries: Vec<(usize, usize, Value)> = parse(v.get("entries").unwrap_or(&Value::Null), "entries")?;
    let d = alg.dim();
    let mut m = Matrix::zeros(alg.field(), d, d);
    for (i, j, x) in entries {
        if i >= d || j >= d {
            return Err(Error::Parse(format!("entry ({i}, {j}) outside {d}x{d}")));
        }
        m[(i, j)] = decode(alg.field(), &x)?;
    }
    let psi = Endomorphism::new(alg, m)?;
    let claimed = v.pointer("/flags/bracket_preserving").and_then(Value::as_bool) == Some(true);
    if claimed {
        psi.verified()
    } else {
        Ok(psi)
    }
}

#[derive(Serialize, Deserialize)]
struct TorusDoc {
    schema: String,
    t1: FieldElement,
    t2: FieldElement,
}

pub fn torus_parameter_to_json(field: &GaloisField, t: &TorusParameter) -> Value {
    serde_json::to_value(TorusDoc { schema: SCHEMA_TORUS.into(), t1: field.element(t.t1), t2: field.element(t.t2) })
        .expect("serializable")
}

pub fn torus_parameter_from_json(field: &GaloisField, v: &Value) -> Result<TorusParameter> {
    let d: TorusDoc = parse(v, "torus parameter")?;
    TorusParameter::new(field.from_element(&d.t1)?, field.from_element(&d.t2)?)
}

/// A homomorphism `Z^2 -> G` given by the images of `e_1, e_2`:
/// `{"group": {"rank": r, "torsion": [...]}, "images": [g1, g2]}`.
pub fn hom_spec_from_json(v: &Value) -> Result<GroupHom> {
    let group = group_from_json(v.get("group").ok_or_else(|| Error::Parse("hom-spec: missing group".into()))?)?;
    let images = v.get("images").and_then(Value::as_array).ok_or_else(|| Error::Parse("hom-spec: missing images".into()))?;
    if images.len() != 2 {
        return Err(Error::Parse(format!("hom-spec: expected 2 images, got {}", images.len())));
    }
    let images = images.iter().map(|g| group_element_from_json(&group, g)).collect::<Result<Vec<_>>>()?;
    GroupHom::new(&AbelianGroup::free(2), &group, images)
}

pub fn hom_spec_to_json(phi: &GroupHom) -> Value {
    json!({
        "schema": SCHEMA_HOM_SPEC,
        "group": group_to_json(phi.codomain()),
        "images": phi.images().iter().map(group_element_to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{lambda, theta};
    use crate::grading::{gamma_bar, gamma_m};
    use crate::melikyan::Block;

    fn alg() -> MelikyanAlgebra {
        MelikyanAlgebra::new([1, 1], &GaloisField::new(5, 2).unwrap()).unwrap()
    }

    #[test]
    fn element_round_trip() {
        let a = alg();
        let f = a.field();
        let y = a.element(a.index(Block::T2, [3, 1]).unwrap()).scale(f.primitive_element());
        let z = y.add(&a.element(a.index(Block::O, [0, 4]).unwrap())).unwrap();
        let back = element_from_json(&a, &element_to_json(&z)).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn grading_round_trips() {
        let a = alg();
        let g = gamma_m(&a).to_grading();
        assert!(grading_from_json(&a, &grading_to_json(&g)).unwrap().same_as(&g));
        let gb = gamma_bar(&a);
        assert!(grading_from_json(&a, &monomial_grading_to_json(&gb)).unwrap().same_as(&gb.to_grading()));
        let other = MelikyanAlgebra::new([1, 1], &GaloisField::new(5, 1).unwrap()).unwrap();
        assert!(grading_from_json(&other, &grading_to_json(&g)).is_err());
    }

    #[test]
    fn endomorphism_and_torus_round_trip() {
        let a = alg();
        let f = a.field();
        let th = theta(&a).unwrap();
        let back = endomorphism_from_json(&a, &endomorphism_to_json(&th)).unwrap();
        assert_eq!(back, th);
        assert!(back.is_verified_automorphism());
        let t = TorusParameter::new(f.primitive_element(), f.from_int(3)).unwrap();
        assert_eq!(torus_parameter_from_json(f, &torus_parameter_to_json(f, &t)).unwrap(), t);
        let l = lambda(&a, &t).unwrap();
        assert!(!endomorphism_from_json(&a, &endomorphism_to_json(&l)).unwrap().is_verified_automorphism());
    }

    #[test]
    fn hom_spec_parsing() {
        let v = json!({"group": {"rank": 0, "torsion": [4]}, "images": [{"torsion": [1]}, {"torsion": [3]}]});
        let phi = hom_spec_from_json(&v).unwrap();
        assert_eq!(phi.codomain(), &AbelianGroup::cyclic(4).unwrap());
        let again = hom_spec_from_json(&hom_spec_to_json(&phi)).unwrap();
        assert_eq!(again.images(), phi.images());
        assert!(hom_spec_from_json(&json!({"group": {"rank": 0, "torsion": [4]}, "images": []})).is_err());
        assert!(hom_spec_from_json(&json!({"images": []})).is_err());
    }
}
