//! JSON matroid descriptors.
//!
//! ```json
//! {"type":"graphic","vertices":3,"edges":[[0,1],[1,2],[2,0]]}
//! {"type":"uniform","n":4,"r":2}
//! {"type":"explicit","ground":["a","b","c"],"bases":[["a","b"],["a","c"]]}
//! {"type":"dual","of":{...}}
//! {"type":"truncate","t":2,"of":{...}}
//! {"type":"minor","delete":["e1"],"contract":["e2"],"of":{...}}
//! {"type":"sum","parts":[{...},{...}]}
//! ```
//!
//! Any descriptor may carry `"prefix"` (prepended to its element identifiers)
//! and `"labels"` (replacement identifiers). The top level may carry
//! `"weights"`: an array of numbers or `"p/q"` strings in element order.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::matroid::{GroundSet, MatroidHandle};
use crate::rational::{self, Rational};
use crate::weights::WeightVector;

pub struct Parsed {
    pub matroid: MatroidHandle,
    pub weights: Option<WeightVector>,
}

pub fn parse(text: &str) -> Result<Parsed> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let matroid = build(&v, "$")?;
    let weights = match v.get("weights") {
        None => None,
        Some(w) => {
            let arr = w.as_array().ok_or_else(|| Error::input("$.weights must be an array"))?;
            let vals = arr.iter().map(|x| number(x, "$.weights[]")).collect::<Result<Vec<_>>>()?;
            let w = WeightVector::new(vals)?;
            w.check_len(matroid.len())?;
            Some(w)
        }
    };
    Ok(Parsed { matroid, weights })
}

fn number(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) => rational::parse(&n.to_string()),
        _ => Err(Error::input(format!("{path}: expected a number or \"p/q\" string"))),
    }
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::input(format!("{path}: missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str, path: &str) -> Result<usize> {
    field(v, key, path)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::input(format!("{path}.{key}: expected a nonnegative integer")))
}

fn label(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::input(format!("{path}: element identifiers are strings or integers"))),
    }
}

fn labels(v: &Value, path: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::input(format!("{path}: expected an array")))?
        .iter()
        .map(|x| label(x, path))
        .collect()
}

fn build(v: &Value, path: &str) -> Result<MatroidHandle> {
    let ty = field(v, "type", path)?.as_str().ok_or_else(|| Error::input(format!("{path}.type: expected a string")))?;
    let inner = |key: &str| build(field(v, key, path)?, &format!("{path}.{key}"));
    let of = || inner("of").or_else(|_| inner("matroid"));
    let mut m = match ty {
        "graphic" => {
            let n = usize_field(v, "vertices", path)?;
            let edges = field(v, "edges", path)?
                .as_array()
                .ok_or_else(|| Error::input(format!("{path}.edges: expected an array")))?
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let pair =
                        e.as_array().filter(|a| a.len() == 2).and_then(|a| Some((a[0].as_u64()?, a[1].as_u64()?)));
                    pair.map(|(a, b)| (a as usize, b as usize))
                        .ok_or_else(|| Error::input(format!("{path}.edges[{i}]: expected [u, v]")))
                })
                .collect::<Result<Vec<_>>>()?;
            MatroidHandle::graphic(n, &edges)?
        }
        "uniform" => MatroidHandle::uniform(usize_field(v, "n", path)?, usize_field(v, "r", path)?)?,
        "explicit" => {
            let ground = GroundSet::new(labels(field(v, "ground", path)?, &format!("{path}.ground"))?)?;
            let bases = field(v, "bases", path)?
                .as_array()
                .ok_or_else(|| Error::input(format!("{path}.bases: expected an array")))?
                .iter()
                .map(|b| labels(b, &format!("{path}.bases[]")))
                .collect::<Result<Vec<_>>>()?;
            MatroidHandle::explicit_from_labels(ground, &bases)?
        }
        "dual" => of()?.dual(),
        "truncate" | "truncation" => of()?.truncation(usize_field(v, "t", path)?)?,
        "minor" => {
            let m = of()?;
            let set = |key: &str| match v.get(key) {
                None => Ok(m.empty_set()),
                Some(x) => m.ground().mask(&labels(x, &format!("{path}.{key}"))?),
            };
            m.minor(&set("delete")?, &set("contract")?)?
        }
        "sum" => {
            let parts = field(v, "parts", path)?
                .as_array()
                .ok_or_else(|| Error::input(format!("{path}.parts: expected an array")))?
                .iter()
                .enumerate()
                .map(|(i, p)| build(p, &format!("{path}.parts[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            MatroidHandle::direct_sum(&parts)?
        }
        other => return Err(Error::input(format!("{path}.type: unknown matroid type {other:?}"))),
    };
    if let Some(l) = v.get("labels") {
        m = m.relabeled(GroundSet::new(labels(l, &format!("{path}.labels"))?)?)?;
    }
    if let Some(p) = v.get("prefix") {
        let p = p.as_str().ok_or_else(|| Error::input(format!("{path}.prefix: expected a string")))?;
        m = m.prefixed(p)?;
    }
    Ok(m)
}
