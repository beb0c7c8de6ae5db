use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Flattened integer series `n -> a_n` (zeros omitted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSeries {
    pub ell: u64,
    pub d: i64,
    pub bound: u64,
    pub terms: BTreeMap<u64, BigInt>,
}

impl IntegerSeries {
    pub fn get(&self, n: u64) -> BigInt {
        self.terms.get(&n).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `n,coefficient` per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (n, c) in &self.terms {
            let _ = writeln!(s, "{n},{c}");
        }
        s
    }

    /// `{ell, D, X, terms: [{n, c}]}`; coefficients beyond i64 are written as strings.
    pub fn to_json(&self) -> String {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(n, c)| match c.to_i64() {
                Some(v) => json!({"n": n, "c": v}),
                None => json!({"n": n, "c": c.to_string()}),
            })
            .collect();
        json!({"ell": self.ell, "D": self.d, "X": self.bound, "terms": terms}).to_string()
    }
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|e| Error::input(format!("bad integer {s:?}: {e}")))
}

pub fn read_csv(text: &str) -> Result<BTreeMap<u64, BigInt>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (n, c) = line
            .split_once(',')
            .ok_or_else(|| Error::input(format!("line {}: expected n,coefficient", i + 1)))?;
        let n: u64 = n.trim().parse().map_err(|_| Error::input(format!("line {}: bad index {n:?}", i + 1)))?;
        let c = parse_big(c)?;
        if !c.is_zero() {
            out.insert(n, c);
        }
    }
    Ok(out)
}

pub fn read_json(text: &str) -> Result<IntegerSeries> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::input(format!("bad JSON: {e}")))?;
    let field = |k: &str| v.get(k).ok_or_else(|| Error::input(format!("missing key {k}")));
    let ell = field("ell")?.as_u64().ok_or_else(|| Error::input("ell must be an integer"))?;
    let d = field("D")?.as_i64().ok_or_else(|| Error::input("D must be an integer"))?;
    let bound = field("X")?.as_u64().ok_or_else(|| Error::input("X must be an integer"))?;
    let mut terms = BTreeMap::new();
    for t in field("terms")?.as_array().ok_or_else(|| Error::input("terms must be an array"))? {
        let n = t.get("n").and_then(Value::as_u64).ok_or_else(|| Error::input("term without n"))?;
        let c = match t.get("c") {
            Some(Value::Number(x)) => parse_big(&x.to_string())?,
            Some(Value::String(s)) => parse_big(s)?,
            _ => return Err(Error::input("term without c")),
        };
        if !c.is_zero() {
            terms.insert(n, c);
        }
    }
    Ok(IntegerSeries { ell, d, bound, terms })
}
