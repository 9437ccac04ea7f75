//! JSON documents. Every top-level document carries `"format": 1` and an
//! `"object"` tag. Series are arrays of coefficient strings (lowest degree
//! first); the precision is stored once per document.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::forms::SesquilinearForm;
use crate::hom::ABMorphism;
use crate::matrix::BMatrix;
use crate::module::ABModule;
use crate::saito::PairingFamily;
use crate::scalar::Scalar;
use crate::series::BSeries;

pub const FORMAT_VERSION: u64 = 1;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn series_to_json(s: &BSeries) -> Value {
    Value::Array(s.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn matrix_to_json(m: &BMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(series_to_json).collect()))
            .collect(),
    )
}

fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::from_int)
            .ok_or_else(|| bad(format!("non-integer number {n}; write fractions as strings"))),
        other => Err(bad(format!("expected a scalar, found {other}"))),
    }
}

pub fn series_from_json(v: &Value, precision: usize) -> Result<BSeries> {
    match v {
        Value::Array(cs) => {
            let coeffs = cs.iter().map(scalar_from_json).collect::<Result<Vec<_>>>()?;
            Ok(BSeries::new(coeffs, precision))
        }
        other => Ok(BSeries::constant(scalar_from_json(other)?, precision)),
    }
}

pub fn matrix_from_json(v: &Value, precision: usize) -> Result<BMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let rows: Vec<Vec<BSeries>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("matrix row must be an array"))?
                .iter()
                .map(|x| series_from_json(x, precision))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(BMatrix::zeros(0, 0, precision));
    }
    BMatrix::from_rows(rows)
}

/// Starts a document with the version and object tag.
pub fn document(object: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("format".into(), json!(FORMAT_VERSION));
    m.insert("object".into(), json!(object));
    m
}

fn check_document<'a>(v: &'a Value, object: &str) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| bad("document must be an object"))?;
    match m.get("format").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        Some(other) => return Err(bad(format!("unsupported format version {other}"))),
        None => return Err(bad("missing \"format\" field")),
    }
    match m.get("object").and_then(Value::as_str) {
        Some(o) if o == object => Ok(m),
        Some(o) => Err(bad(format!("expected a {object} document, found {o}"))),
        None => Err(bad("missing \"object\" field")),
    }
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| bad(format!("missing \"{key}\" field")))
}

fn precision_field(m: &Map<String, Value>) -> Result<usize> {
    field(m, "precision")?
        .as_u64()
        .map(|p| p as usize)
        .filter(|&p| p >= 1)
        .ok_or_else(|| bad("precision must be a positive integer"))
}

fn module_body(e: &ABModule) -> Map<String, Value> {
    let mut m = document("module");
    m.insert("precision".into(), json!(e.precision()));
    m.insert("labels".into(), json!(e.labels()));
    m.insert("a".into(), matrix_to_json(e.a_matrix()));
    m.insert("relations".into(), json!(e.relations()));
    m
}

pub fn module_to_json(e: &ABModule) -> Value {
    Value::Object(module_body(e))
}

pub fn module_from_json(v: &Value) -> Result<ABModule> {
    let m = check_document(v, "module")?;
    let p = precision_field(m)?;
    let a = matrix_from_json(field(m, "a")?, p)?;
    match m.get("labels") {
        Some(l) => {
            let labels: Vec<String> = serde_json::from_value(l.clone()).map_err(|e| bad(format!("labels: {e}")))?;
            ABModule::new(a, labels)
        }
        None => ABModule::from_matrix(a),
    }
}

pub fn morphism_to_json(f: &ABMorphism) -> Value {
    let mut m = document("morphism");
    m.insert("precision".into(), json!(f.precision()));
    m.insert("domain".into(), module_to_json(f.domain()));
    m.insert("codomain".into(), module_to_json(f.codomain()));
    m.insert("matrix".into(), matrix_to_json(f.matrix()));
    Value::Object(m)
}

/// Reads a morphism and checks the intertwining identity.
pub fn morphism_from_json(v: &Value) -> Result<ABMorphism> {
    let m = check_document(v, "morphism")?;
    let p = precision_field(m)?;
    let dom = module_from_json(field(m, "domain")?)?;
    let cod = module_from_json(field(m, "codomain")?)?;
    let mat = matrix_from_json(field(m, "matrix")?, p)?;
    ABMorphism::checked(dom, cod, mat)
}

pub fn form_to_json(h: &SesquilinearForm) -> Value {
    let mut m = document("form");
    m.insert("precision".into(), json!(h.precision()));
    m.insert("module".into(), module_to_json(&h.module));
    m.insert("pairing".into(), matrix_to_json(&h.pairing));
    m.insert("kind".into(), json!(h.hermitian_type().name()));
    m.insert("nondegenerate".into(), json!(h.is_nondegenerate()));
    Value::Object(m)
}

pub fn form_from_json(v: &Value) -> Result<SesquilinearForm> {
    let m = check_document(v, "form")?;
    let p = precision_field(m)?;
    let module = module_from_json(field(m, "module")?)?;
    let pairing = matrix_from_json(field(m, "pairing")?, p)?;
    SesquilinearForm::checked(module, pairing)
}

/// A pairing family, with the module it lives on when known.
pub fn family_to_json(f: &PairingFamily, module: Option<&ABModule>) -> Value {
    let mut m = document("pairing_family");
    m.insert("precision".into(), json!(f.precision()));
    m.insert("delta".into(), json!(f.delta.to_string()));
    m.insert("normalization".into(), json!(f.normalization.to_string()));
    m.insert("S".into(), matrix_to_json(&f.s));
    if let Some(e) = module {
        m.insert("module".into(), module_to_json(e));
    }
    Value::Object(m)
}

pub fn family_from_json(v: &Value) -> Result<(PairingFamily, Option<ABModule>)> {
    let m = check_document(v, "pairing_family")?;
    let p = precision_field(m)?;
    let delta = scalar_from_json(field(m, "delta")?)?;
    let normalization = scalar_from_json(field(m, "normalization")?)?;
    let s = matrix_from_json(field(m, "S")?, p)?;
    let module = m.get("module").map(module_from_json).transpose()?;
    Ok((PairingFamily::new(delta, normalization, s)?, module))
}

/// The `object` tag of a document, after checking its version.
pub fn object_kind(v: &Value) -> Result<String> {
    let m = v.as_object().ok_or_else(|| bad("document must be an object"))?;
    if m.get("format").and_then(Value::as_u64) != Some(FORMAT_VERSION) {
        return Err(bad("missing or unsupported \"format\" field"));
    }
    m.get("object")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| bad("missing \"object\" field"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_round_trip() {
        let a = BMatrix::from_int_polys(&[&[&[0], &[1, 1]], &[&[0], &[0, -1, 2]]], 7);
        let e = ABModule::from_matrix(a).unwrap();
        let text = serde_json::to_string(&module_to_json(&e)).unwrap();
        let back = module_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.labels(), e.labels());
        assert_eq!(back.precision(), 7);
    }

    #[test]
    fn morphism_round_trip_and_check() {
        let e = ABModule::elementary(&Scalar::one(), 6);
        let f = ABModule::elementary(&Scalar::zero(), 6);
        let m = ABMorphism::checked(e, f, BMatrix::from_int_polys(&[&[&[0, 1]]], 6)).unwrap();
        let v = morphism_to_json(&m);
        assert_eq!(morphism_from_json(&v).unwrap().matrix(), m.matrix());
        let mut broken = v.clone();
        broken["matrix"] = json!([[["1"]]]);
        assert!(matches!(morphism_from_json(&broken), Err(Error::NotCompatible { .. })));
    }

    #[test]
    fn version_is_checked() {
        let e = ABModule::elementary(&Scalar::one(), 3);
        let mut v = module_to_json(&e);
        v["format"] = json!(2);
        assert!(matches!(module_from_json(&v), Err(Error::Format(_))));
        assert!(matches!(form_from_json(&module_to_json(&e)), Err(Error::Format(_))));
    }
}
