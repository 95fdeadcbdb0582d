//! JSON literals for every value the command line reads or writes.
//!
//! Rationals are strings `"p"` or `"p/q"` in lowest terms; readers also
//! accept JSON integers. Objects are emitted with sorted keys, so equal
//! values always print to identical bytes.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fitting::{FittingRank, PresentedModule, PrincipalIdeal};
use crate::forms::{BinaryForm, DivisorP1};
use crate::higgs::{CanonicalNilpotent, HiggsField};
use crate::poly::UniPoly;
use crate::rational::{format_q, parse_q, Q};
use crate::sheaves::{LineSubsheaf, QuasiMapClass, SheafMap, SplitBundle};
use crate::springer::{FiberDescription, FiberPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

impl JsonError {
    pub fn new(path: &str, message: impl Into<String>) -> Self {
        JsonError {
            path: if path.is_empty() { "$".into() } else { path.into() },
            message: message.into(),
        }
    }
}

pub trait JsonCodec: Sized {
    fn to_json(&self) -> Value;

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError>;

    fn from_json(value: &Value) -> Result<Self, JsonError> {
        Self::from_json_at(value, "$")
    }
}

fn field<'a>(value: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    let obj = value
        .as_object()
        .ok_or_else(|| JsonError::new(path, "expected an object"))?;
    obj.get(key)
        .ok_or_else(|| JsonError::new(path, format!("missing key {key:?}")))
}

fn sub(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    value
        .as_array()
        .ok_or_else(|| JsonError::new(path, "expected an array"))
}

pub fn int_at(value: &Value, path: &str) -> Result<i64, JsonError> {
    value
        .as_i64()
        .ok_or_else(|| JsonError::new(path, "expected an integer"))
}

fn usize_at(value: &Value, path: &str) -> Result<usize, JsonError> {
    value
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| JsonError::new(path, "expected a nonnegative integer"))
}

fn bool_at(value: &Value, path: &str) -> Result<bool, JsonError> {
    value
        .as_bool()
        .ok_or_else(|| JsonError::new(path, "expected a boolean"))
}

fn list_of<T: JsonCodec>(value: &Value, path: &str) -> Result<Vec<T>, JsonError> {
    array(value, path)?
        .iter()
        .enumerate()
        .map(|(i, v)| T::from_json_at(v, &idx(path, i)))
        .collect()
}

fn domain<E: std::fmt::Display>(path: &str) -> impl Fn(E) -> JsonError + '_ {
    move |e| JsonError::new(path, e.to_string())
}

impl JsonCodec for Q {
    fn to_json(&self) -> Value {
        Value::String(format_q(self))
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        match value {
            Value::String(s) => parse_q(s).map_err(domain(path)),
            Value::Number(n) => n
                .as_i64()
                .map(|i| Q::from_integer(i.into()))
                .ok_or_else(|| JsonError::new(path, "numbers must be integers; write fractions as \"p/q\"")),
            _ => Err(JsonError::new(path, "expected a rational")),
        }
    }
}

impl JsonCodec for UniPoly {
    fn to_json(&self) -> Value {
        Value::Array(self.coeffs().iter().map(JsonCodec::to_json).collect())
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        Ok(UniPoly::new(list_of(value, path)?))
    }
}

impl JsonCodec for BinaryForm {
    fn to_json(&self) -> Value {
        json!({
            "degree": self.degree(),
            "coeffs": self.coeffs().iter().map(JsonCodec::to_json).collect::<Vec<_>>(),
        })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let degree = int_at(field(value, "degree", path)?, &sub(path, "degree"))?;
        let cpath = sub(path, "coeffs");
        let coeffs: Vec<Q> = list_of(field(value, "coeffs", path)?, &cpath)?;
        // negative degrees only hold zero, written with no coefficients
        if degree < 0 && coeffs.is_empty() {
            return Ok(BinaryForm::zero(degree));
        }
        BinaryForm::new(degree, coeffs).map_err(domain(path))
    }
}

impl JsonCodec for DivisorP1 {
    fn to_json(&self) -> Value {
        self.form().to_json()
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        DivisorP1::new(&BinaryForm::from_json_at(value, path)?).map_err(domain(path))
    }
}

impl JsonCodec for PresentedModule {
    fn to_json(&self) -> Value {
        json!({
            "b": self.target_rank(),
            "a": self.source_rank(),
            "entries": self
                .matrix()
                .iter()
                .map(|row| row.iter().map(JsonCodec::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let b = usize_at(field(value, "b", path)?, &sub(path, "b"))?;
        let a = usize_at(field(value, "a", path)?, &sub(path, "a"))?;
        let epath = sub(path, "entries");
        let rows = array(field(value, "entries", path)?, &epath)?
            .iter()
            .enumerate()
            .map(|(i, row)| list_of(row, &idx(&epath, i)))
            .collect::<Result<Vec<Vec<UniPoly>>, _>>()?;
        PresentedModule::new(b, a, rows).map_err(domain(path))
    }
}

impl JsonCodec for PrincipalIdeal {
    fn to_json(&self) -> Value {
        let kind = if self.is_zero() {
            "zero"
        } else if self.is_unit() {
            "unit"
        } else {
            "proper"
        };
        json!({ "kind": kind, "generator": self.generator().to_json() })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let g = UniPoly::from_json_at(field(value, "generator", path)?, &sub(path, "generator"))?;
        Ok(PrincipalIdeal::new(&g))
    }
}

impl JsonCodec for FittingRank {
    fn to_json(&self) -> Value {
        match self {
            FittingRank::Rank(h) => json!({ "kind": "Rank", "rank": h }),
            FittingRank::NoZeroIdeal => json!({ "kind": "NoZeroIdeal" }),
        }
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        match field(value, "kind", path)?.as_str() {
            Some("Rank") => Ok(FittingRank::Rank(usize_at(
                field(value, "rank", path)?,
                &sub(path, "rank"),
            )?)),
            Some("NoZeroIdeal") => Ok(FittingRank::NoZeroIdeal),
            _ => Err(JsonError::new(&sub(path, "kind"), "expected \"Rank\" or \"NoZeroIdeal\"")),
        }
    }
}

impl JsonCodec for SplitBundle {
    fn to_json(&self) -> Value {
        json!({ "twists": self.twists() })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let tpath = sub(path, "twists");
        let twists = array(field(value, "twists", path)?, &tpath)?
            .iter()
            .enumerate()
            .map(|(i, v)| int_at(v, &idx(&tpath, i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SplitBundle::new(twists))
    }
}

impl JsonCodec for SheafMap {
    fn to_json(&self) -> Value {
        json!({
            "source": self.source().to_json(),
            "target": self.target().to_json(),
            "entries": self
                .entries()
                .iter()
                .map(|row| row.iter().map(JsonCodec::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let source = SplitBundle::from_json_at(field(value, "source", path)?, &sub(path, "source"))?;
        let target = SplitBundle::from_json_at(field(value, "target", path)?, &sub(path, "target"))?;
        let epath = sub(path, "entries");
        let rows = array(field(value, "entries", path)?, &epath)?
            .iter()
            .enumerate()
            .map(|(i, row)| list_of(row, &idx(&epath, i)))
            .collect::<Result<Vec<Vec<BinaryForm>>, _>>()?;
        SheafMap::new(source, target, rows).map_err(domain(path))
    }
}

impl JsonCodec for LineSubsheaf {
    fn to_json(&self) -> Value {
        self.embedding().to_json()
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        LineSubsheaf::new(SheafMap::from_json_at(value, path)?).map_err(domain(path))
    }
}

impl JsonCodec for QuasiMapClass {
    fn to_json(&self) -> Value {
        match self {
            QuasiMapClass::GenuineMap => json!({ "kind": "GenuineMap" }),
            QuasiMapClass::QuasiMapWithDefect(d) => {
                json!({ "kind": "QuasiMapWithDefect", "defect": d.to_json() })
            }
        }
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        match field(value, "kind", path)?.as_str() {
            Some("GenuineMap") => Ok(QuasiMapClass::GenuineMap),
            Some("QuasiMapWithDefect") => Ok(QuasiMapClass::QuasiMapWithDefect(
                DivisorP1::from_json_at(field(value, "defect", path)?, &sub(path, "defect"))?,
            )),
            _ => Err(JsonError::new(
                &sub(path, "kind"),
                "expected \"GenuineMap\" or \"QuasiMapWithDefect\"",
            )),
        }
    }
}

impl JsonCodec for HiggsField {
    fn to_json(&self) -> Value {
        json!({
            "d": self.d(),
            "ell": self.ell(),
            "p": self.p().to_json(),
            "q": self.q().to_json(),
            "r": self.r().to_json(),
        })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let d = int_at(field(value, "d", path)?, &sub(path, "d"))?;
        let ell = int_at(field(value, "ell", path)?, &sub(path, "ell"))?;
        let form = |key: &str| BinaryForm::from_json_at(field(value, key, path)?, &sub(path, key));
        HiggsField::new(d, ell, form("p")?, form("q")?, form("r")?).map_err(domain(path))
    }
}

impl JsonCodec for CanonicalNilpotent {
    fn to_json(&self) -> Value {
        json!({
            "s": self.s.to_json(),
            "t": self.t.to_json(),
            "h": self.h.to_json(),
            "k": self.k,
        })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let form = |key: &str| BinaryForm::from_json_at(field(value, key, path)?, &sub(path, key));
        Ok(CanonicalNilpotent {
            s: form("s")?,
            t: form("t")?,
            h: form("h")?,
            k: int_at(field(value, "k", path)?, &sub(path, "k"))?,
        })
    }
}

impl JsonCodec for FiberDescription {
    fn to_json(&self) -> Value {
        json!({
            "higgs": self.higgs.to_json(),
            "m": self.component_degree,
            "points": self
                .points
                .iter()
                .map(|p| json!({ "lambda": p.lambda().to_json() }))
                .collect::<Vec<_>>(),
            "unresolved": self.unresolved,
        })
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self, JsonError> {
        let higgs = HiggsField::from_json_at(field(value, "higgs", path)?, &sub(path, "higgs"))?;
        let m = int_at(field(value, "m", path)?, &sub(path, "m"))?;
        let unresolved = bool_at(field(value, "unresolved", path)?, &sub(path, "unresolved"))?;
        let ppath = sub(path, "points");
        let points = array(field(value, "points", path)?, &ppath)?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let at = idx(&ppath, i);
                let lambda = LineSubsheaf::from_json_at(field(p, "lambda", &at)?, &sub(&at, "lambda"))?;
                if lambda.source_degree() != m {
                    return Err(JsonError::new(&at, format!("point lies outside component {m}")));
                }
                FiberPoint::new(higgs.clone(), lambda).map_err(domain(&at))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiberDescription {
            higgs,
            component_degree: m,
            points,
            unresolved,
        })
    }
}

/// Parses a document into a JSON value, reporting the location of syntax
/// errors.
pub fn parse_document(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text)
        .map_err(|e| JsonError::new("$", format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column())))
}

/// Compact rendering with sorted keys.
pub fn render(value: &Value) -> String {
    fn sorted(value: &Value) -> Value {
        match value {
            Value::Object(map) => {
                let mut keys: Vec<&String> = map.keys().collect();
                keys.sort();
                let mut out = Map::new();
                for k in keys {
                    out.insert(k.clone(), sorted(&map[k]));
                }
                Value::Object(out)
            }
            Value::Array(items) => Value::Array(items.iter().map(sorted).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string(&sorted(value)).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use crate::forms::tests::form_strategy;
    use proptest::prelude::*;

    fn round_trip<T: JsonCodec + PartialEq + std::fmt::Debug>(x: &T) {
        let text = render(&x.to_json());
        let back = T::from_json(&parse_document(&text).unwrap()).unwrap();
        assert_eq!(&back, x);
        assert_eq!(render(&back.to_json()), text);
    }

    #[test]
    fn rationals() {
        assert_eq!(q_frac(-6, 4).to_json(), json!("-3/2"));
        assert_eq!(Q::from_json(&json!(7)).unwrap(), q_frac(7, 1));
        assert_eq!(Q::from_json(&json!("4/-6")).unwrap(), q_frac(-2, 3));
        assert!(Q::from_json(&json!(1.5)).is_err());
        assert!(Q::from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn form_literal() {
        let f = BinaryForm::from_ints(&[1, 0, -1]);
        assert_eq!(
            render(&f.to_json()),
            r#"{"coeffs":["1","0","-1"],"degree":2}"#
        );
        round_trip(&f);
        round_trip(&BinaryForm::zero(-2));
        let err = BinaryForm::from_json(&json!({"degree": 2, "coeffs": [1, 2]})).unwrap_err();
        assert_eq!(err.path, "$");
        let err = BinaryForm::from_json(&json!({"degree": 1, "coeffs": [1, "x"]})).unwrap_err();
        assert_eq!(err.path, "$.coeffs[1]");
    }

    #[test]
    fn higgs_slot_errors_name_the_slot() {
        let v = json!({
            "d": 0, "ell": 2,
            "p": {"degree": 2, "coeffs": [0, 0, 0]},
            "q": {"degree": 1, "coeffs": [1, 0]},
            "r": {"degree": 2, "coeffs": [0, 0, 0]},
        });
        let err = HiggsField::from_json(&v).unwrap_err();
        assert!(err.message.contains("q"), "{err}");
    }

    #[test]
    fn classification_literals() {
        assert_eq!(
            render(&QuasiMapClass::GenuineMap.to_json()),
            r#"{"kind":"GenuineMap"}"#
        );
        let d = DivisorP1::new(&BinaryForm::z()).unwrap();
        round_trip(&QuasiMapClass::QuasiMapWithDefect(d));
    }

    #[test]
    fn structured_round_trips() {
        let m = PresentedModule::diagonal(&[UniPoly::from_ints(&[0, 1]), UniPoly::from_ints(&[-1, 1])]);
        round_trip(&m);
        round_trip(&m.fitting_ideal(0));
        round_trip(&m.fitting_rank());
        round_trip(&PresentedModule::free(2).fitting_rank());
        let phi = HiggsField::new(
            0,
            2,
            BinaryForm::from_ints(&[0, 1, 0]),
            BinaryForm::from_ints(&[1, 0, 0]),
            BinaryForm::from_ints(&[0, 0, -1]),
        )
        .unwrap();
        round_trip(&phi);
        round_trip(&phi.canonical_form().unwrap());
        round_trip(&phi.kernel_subbundle().unwrap());
        round_trip(&crate::springer::enumerate_fiber(&phi, -1).unwrap());
    }

    proptest! {
        #[test]
        fn forms_round_trip(f in form_strategy(5)) {
            round_trip(&f);
        }
    }
}
