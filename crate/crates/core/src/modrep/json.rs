//! JSON form of modules and maps.
//!
//! A module is `{"p","e","modulus","r","dim","convention","generators"}` with
//! each generator a row-major array of field elements; an element is an
//! integer over a prime field and an array of `e` power-basis coefficients
//! otherwise.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{field_with_modulus, make_field, Elem, FieldSpec, Matrix};

use super::{Convention, ModuleHom, ModuleRep};

pub fn element_to_json(field: &FieldSpec, x: Elem) -> Value {
    if field.is_prime_field() {
        json!(x)
    } else {
        json!(field.coeffs(x))
    }
}

pub fn element_from_json(field: &FieldSpec, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| Error::Malformed(format!("bad field element {n}")))?;
            Ok(field.from_i64(i))
        }
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| {
                    c.as_i64()
                        .map(|i| i.rem_euclid(field.p() as i64) as u32)
                        .ok_or_else(|| Error::Malformed(format!("bad coefficient {c}")))
                })
                .collect::<Result<Vec<_>>>()?;
            field.from_coeffs(&coeffs)
        }
        other => Err(Error::Malformed(format!("bad field element {other}"))),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.data().iter().map(|&x| element_to_json(m.field(), x)).collect())
}

pub fn matrix_from_json(field: &FieldSpec, rows: usize, cols: usize, v: &Value) -> Result<Matrix> {
    let items = v.as_array().ok_or_else(|| Error::Malformed("matrix must be an array".into()))?;
    let data = items.iter().map(|x| element_from_json(field, x)).collect::<Result<Vec<_>>>()?;
    Matrix::from_data(field, rows, cols, data)
}

pub fn field_from_json(v: &Value) -> Result<FieldSpec> {
    let p = v["p"].as_u64().ok_or_else(|| Error::Malformed("missing \"p\"".into()))?;
    let e = v.get("e").and_then(Value::as_u64).unwrap_or(1) as u32;
    match v.get("modulus").and_then(Value::as_array) {
        Some(m) if e > 1 => {
            let modulus = m
                .iter()
                .map(|c| c.as_u64().map(|c| c as u32).ok_or_else(|| Error::Malformed("bad modulus".into())))
                .collect::<Result<Vec<_>>>()?;
            let f = field_with_modulus(p, &modulus)?;
            if f.e() != e {
                return Err(Error::Malformed(format!("modulus degree {} but e = {e}", f.e())));
            }
            Ok(f)
        }
        _ => make_field(p, e),
    }
}

pub fn module_to_json(m: &ModuleRep) -> Value {
    let f = m.field();
    json!({
        "p": f.p(),
        "e": f.e(),
        "modulus": f.modulus(),
        "r": m.r(),
        "dim": m.dim(),
        "convention": m.convention(),
        "generators": m.gens().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn module_from_json(v: &Value) -> Result<ModuleRep> {
    let field = field_from_json(v)?;
    let dim = v["dim"].as_u64().ok_or_else(|| Error::Malformed("missing \"dim\"".into()))? as usize;
    let gens_json = v["generators"].as_array().ok_or_else(|| Error::Malformed("missing \"generators\"".into()))?;
    if let Some(r) = v.get("r").and_then(Value::as_u64) {
        if r as usize != gens_json.len() {
            return Err(Error::Malformed(format!("r = {r} but {} generators", gens_json.len())));
        }
    }
    let convention = match v.get("convention") {
        None => Convention::Primitive,
        Some(c) => serde_json::from_value(c.clone()).map_err(|e| Error::Malformed(format!("convention: {e}")))?,
    };
    let gens = gens_json.iter().map(|g| matrix_from_json(&field, dim, dim, g)).collect::<Result<Vec<_>>>()?;
    ModuleRep::new(&field, gens, convention)
}

pub fn hom_to_json(h: &ModuleHom) -> Value {
    json!({
        "source_dim": h.source().dim(),
        "target_dim": h.target().dim(),
        "matrix": matrix_to_json(h.matrix()),
    })
}

/// Reads a map between known modules, checking that it intertwines.
pub fn hom_from_json(
    v: &Value,
    source: std::sync::Arc<ModuleRep>,
    target: std::sync::Arc<ModuleRep>,
) -> Result<ModuleHom> {
    let (s, t) = (v["source_dim"].as_u64(), v["target_dim"].as_u64());
    if s != Some(source.dim() as u64) || t != Some(target.dim() as u64) {
        return Err(Error::DimensionMismatch("map dimensions do not match the modules".into()));
    }
    let matrix = matrix_from_json(source.field(), target.dim(), source.dim(), &v["matrix"])?;
    ModuleHom::new(source, target, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_round_trip_over_extension() {
        let f = make_field(3, 2).unwrap();
        let mut a = Matrix::zeros(&f, 2, 2);
        a.set(1, 0, 7);
        let m = ModuleRep::new(&f, vec![a], Convention::Group).unwrap();
        let v = module_to_json(&m);
        assert_eq!(v["generators"][0][2], json!([1, 2]));
        assert_eq!(module_from_json(&v).unwrap(), m);
    }

    #[test]
    fn rejects_non_commuting_input() {
        let v = json!({"p": 3, "e": 1, "r": 2, "dim": 2, "convention": "primitive",
                       "generators": [[0, 0, 1, 0], [0, 1, 0, 0]]});
        assert!(module_from_json(&v).is_err());
    }
}
