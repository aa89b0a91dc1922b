//! JSON formats for algebras, functionals, vectors and subspaces.
//!
//! Rationals are strings `"p/q"` or `"p"`; sparse maps are keyed by 0-based
//! indices written as strings and are emitted in numeric key order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::{LieAlgebra, LieAlgebraBuilder, Parity};
use crate::coadjoint::Functional;
use crate::error::{Error, Result};
use crate::linalg::{zero_vec, Subspace, Vector};
use crate::scalar::{self, Scalar};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraJson {
    name: String,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<Vec<u8>>,
    basis: Vec<String>,
    brackets: Vec<BracketJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketJson {
    i: usize,
    j: usize,
    coeffs: Map<String, Value>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parses a sparse `{"index": "p/q"}` map into a dense vector.
pub fn sparse_from_value(map: &Map<String, Value>, dim: usize) -> Result<Vector> {
    let mut v = zero_vec(dim);
    for (key, val) in map {
        let k: usize = key.parse().map_err(|_| Error::Parse(format!("index {key:?} is not a non-negative integer")))?;
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let text = val.as_str().ok_or_else(|| Error::Parse(format!("value at index {k} must be a \"p/q\" string")))?;
        v[k] = scalar::parse(text)?;
    }
    Ok(v)
}

/// Nonzero entries as a `{"index": "p/q"}` map in numeric key order.
pub fn sparse_to_value(v: &[Scalar]) -> Map<String, Value> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k.to_string(), Value::String(scalar::render(c))))
        .collect()
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let raw: AlgebraJson = serde_json::from_str(text).map_err(parse_err)?;
    if raw.basis.len() != raw.dim {
        return Err(Error::InvalidAlgebra(format!("dim is {} but {} basis names given", raw.dim, raw.basis.len())));
    }
    let mut builder = LieAlgebraBuilder::new(raw.name, raw.basis);
    if let Some(bits) = raw.parity {
        if bits.len() != raw.dim {
            return Err(Error::InvalidAlgebra(format!("parity has length {}, expected {}", bits.len(), raw.dim)));
        }
        builder = builder.parity(bits.into_iter().map(Parity::from_bit).collect::<Result<_>>()?);
    }
    let mut seen = BTreeSet::new();
    for br in raw.brackets {
        let (i, j) = (br.i, br.j);
        if i >= raw.dim || j >= raw.dim {
            return Err(Error::IndexOutOfRange { index: i.max(j), dim: raw.dim });
        }
        if i > j {
            return Err(Error::InvalidAlgebra(format!("bracket ({i}, {j}) must be listed with i <= j")));
        }
        if !seen.insert((i, j)) {
            return Err(Error::InvalidAlgebra(format!("bracket ({i}, {j}) listed twice")));
        }
        let coeffs = sparse_from_value(&br.coeffs, raw.dim)?;
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                builder.add(i, j, k, c)?;
            }
        }
    }
    builder.build()
}

pub fn algebra_to_value(alg: &LieAlgebra) -> Value {
    let d = alg.dim();
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in i..d {
            let entries = alg.stored_bracket(i, j);
            if entries.is_empty() {
                continue;
            }
            let mut v = zero_vec(d);
            for (k, c) in entries {
                v[*k] = c.clone();
            }
            brackets.push(BracketJson { i, j, coeffs: sparse_to_value(&v) });
        }
    }
    let raw = AlgebraJson {
        name: alg.name().to_string(),
        dim: d,
        parity: alg.is_graded().then(|| alg.parity().iter().map(|p| p.bit()).collect()),
        basis: alg.basis_names().to_vec(),
        brackets,
    };
    serde_json::to_value(raw).expect("algebra serialises")
}

pub fn algebra_to_json(alg: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_to_value(alg)).expect("algebra serialises")
}

fn coords_object(text: &str) -> Result<Map<String, Value>> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let Value::Object(mut obj) = value else {
        return Err(Error::Parse("expected a JSON object with a \"coords\" field".into()));
    };
    match obj.remove("coords") {
        Some(Value::Object(m)) if obj.is_empty() => Ok(m),
        _ => Err(Error::Parse("expected exactly one field \"coords\" holding an object".into())),
    }
}

/// `{"coords": {"index": "p/q", ...}}`.
pub fn parse_functional(text: &str, dim: usize) -> Result<Functional> {
    Ok(Functional::from_coords(parse_vector(text, dim)?))
}

/// Vectors of `g` use the same sparse `{"coords": ...}` format as functionals.
pub fn parse_vector(text: &str, dim: usize) -> Result<Vector> {
    sparse_from_value(&coords_object(text)?, dim)
}

pub fn vector_to_value(v: &[Scalar]) -> Value {
    let mut obj = Map::new();
    obj.insert("coords".into(), Value::Object(sparse_to_value(v)));
    Value::Object(obj)
}

pub fn functional_to_value(f: &Functional) -> Value {
    vector_to_value(f.coords())
}

/// `{"rows": [{"index": "p/q", ...}, ...]}`; the rows may be any spanning set.
pub fn parse_subspace(text: &str, dim: usize) -> Result<Subspace> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let rows = value
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected an object with a \"rows\" array".into()))?;
    let vecs = rows
        .iter()
        .map(|r| {
            r.as_object()
                .ok_or_else(|| Error::Parse("each row must be an object".into()))
                .and_then(|m| sparse_from_value(m, dim))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(dim, vecs))
}

/// The canonical echelon rows.
pub fn subspace_to_value(s: &Subspace) -> Value {
    let rows: Vec<Value> = s.basis().iter().map(|r| Value::Object(sparse_to_value(r))).collect();
    let mut obj = Map::new();
    obj.insert("rows".into(), Value::Array(rows));
    Value::Object(obj)
}

/// Dense rendering used by reports: index → "p/q" for every coordinate.
pub fn dense_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(scalar::render).collect()
}

/// Parses the output of [`dense_strings`].
pub fn parse_dense(v: &[String]) -> Result<Vector> {
    v.iter().map(|s| scalar::parse(s)).collect()
}

/// Basis-name lookup for error messages and reports.
pub fn names_of(alg: &LieAlgebra, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&i| alg.basis_name(i).to_string()).collect()
}

/// Multiset of bracket entries, for comparing algebras built in different
/// ways.
pub fn structure_table(alg: &LieAlgebra) -> BTreeMap<(usize, usize, usize), String> {
    let mut out = BTreeMap::new();
    for i in 0..alg.dim() {
        for j in i..alg.dim() {
            for (k, c) in alg.stored_bracket(i, j) {
                out.insert((i, j, *k), scalar::render(c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_n_m;
    use crate::scalar::{frac, int};
    use crate::superalgebra::build_super_heisenberg;

    const N3: &str = r#"{"name": "heis", "dim": 3, "basis": ["x", "y", "z"],
        "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}]}"#;

    #[test]
    fn parse_n3() {
        let g = parse_algebra(N3).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.bracket_basis(1, 0), vec![(2, int(-1))]);
        assert!(g.validate().is_valid_nilpotent());
    }

    #[test]
    fn rejects_malformed() {
        let cases = [
            r#"{"name": "a", "dim": 2, "basis": ["x"], "brackets": []}"#,
            r#"{"name": "a", "dim": 2, "basis": ["x", "y"], "brackets": [{"i": 1, "j": 0, "coeffs": {}}]}"#,
            r#"{"name": "a", "dim": 2, "basis": ["x", "y"], "brackets": [{"i": 0, "j": 5, "coeffs": {}}]}"#,
            r#"{"name": "a", "dim": 2, "basis": ["x", "y"], "brackets": [{"i": 0, "j": 1, "coeffs": {"7": "1"}}]}"#,
            r#"{"name": "a", "dim": 2, "basis": ["x", "y"], "brackets": [{"i": 0, "j": 1, "coeffs": {"1": "1/0"}}]}"#,
            r#"{"name": "a", "dim": 2, "basis": ["x", "y"], "brackets": [{"i": 0, "j": 1, "coeffs": {}}, {"i": 0, "j": 1, "coeffs": {}}]}"#,
            r#"{"name": "a", "dim": 2, "parity": [0], "basis": ["x", "y"], "brackets": []}"#,
            r#"{"name": "a", "dim": 2, "parity": [0, 2], "basis": ["x", "y"], "brackets": []}"#,
            r#"{"name": "a", "dim": 0, "basis": [], "brackets": []}"#,
            r#"not json"#,
        ];
        for c in cases {
            assert!(parse_algebra(c).is_err(), "{c}");
        }
    }

    #[test]
    fn algebra_round_trip() {
        for g in [build_n_m(5).unwrap(), build_super_heisenberg()] {
            let text = algebra_to_json(&g);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(structure_table(&g), structure_table(&back));
            assert_eq!(back.parity(), g.parity());
            assert_eq!(algebra_to_json(&back), text);
        }
    }

    #[test]
    fn numeric_key_order() {
        let mut v = zero_vec(12);
        v[10] = int(1);
        v[2] = frac(-1, 3);
        let text = serde_json::to_string(&vector_to_value(&v)).unwrap();
        assert_eq!(text, r#"{"coords":{"2":"-1/3","10":"1"}}"#);
        assert_eq!(parse_vector(&text, 12).unwrap(), v);
    }

    #[test]
    fn functional_and_subspace() {
        let f = parse_functional(r#"{"coords":{"2":"1"}}"#, 3).unwrap();
        assert_eq!(f, Functional::dual_basis(3, 2));
        assert!(parse_functional(r#"{"coords":{"3":"1"}}"#, 3).is_err());
        assert!(parse_functional(r#"{"coords":{"0":1}}"#, 3).is_err());
        let s = parse_subspace(r#"{"rows":[{"1":"2"},{"2":"1","1":"1"}]}"#, 3).unwrap();
        assert_eq!(s, Subspace::coordinate(3, &[1, 2]));
        let back = parse_subspace(&subspace_to_value(&s).to_string(), 3).unwrap();
        assert_eq!(back, s);
        assert!(parse_subspace(r#"{"rows":[{"1":"2"}]}"#, 1).is_err());
    }
}
