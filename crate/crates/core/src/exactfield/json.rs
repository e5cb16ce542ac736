//! Nested JSON encoding of tower elements.
//!
//! A rational is `{"q": "n/d"}`; an element `a + b t` of a level with
//! `t^2 = p t + s` is `{"a": .., "b": .., "min": [p, s]}`, where `a`, `b`,
//! `p`, `s` are encoded over the level below. Elements are always written at
//! the full depth of their tower so decoding reproduces the same tower.

use serde_json::{json, Map, Value};

use super::rational::{parse_rational, Rational};
use super::tower::{adjoin_root, Tower, TowerDescriptor, TowerElement};
use super::FieldError;

pub fn rational_to_json(q: &Rational) -> Value {
    json!({ "q": q.to_string() })
}

pub fn to_json(x: &TowerElement) -> Value {
    match x.split() {
        None => rational_to_json(&x.coeffs()[0]),
        Some((a, b)) => {
            let k = x.tower().depth();
            let (p, s) = x.tower().level_poly(k - 1);
            let mut m = Map::new();
            m.insert("a".into(), to_json(&a));
            m.insert("b".into(), to_json(&b));
            m.insert("min".into(), Value::Array(vec![to_json(&p), to_json(&s)]));
            Value::Object(m)
        }
    }
}

fn malformed(msg: &str) -> FieldError {
    FieldError::Malformed(msg.to_string())
}

/// Decodes an element; the returned element carries a freshly built tower.
pub fn from_json(v: &Value) -> Result<TowerElement, FieldError> {
    let obj = v.as_object().ok_or_else(|| malformed("expected object"))?;
    if let Some(q) = obj.get("q") {
        let s = q.as_str().ok_or_else(|| malformed("rational must be a string"))?;
        let r = parse_rational(s).ok_or_else(|| malformed("bad rational"))?;
        return Ok(TowerElement::from_rational(&TowerDescriptor::rational(), r));
    }
    let a = from_json(obj.get("a").ok_or_else(|| malformed("missing a"))?)?;
    let b = from_json(obj.get("b").ok_or_else(|| malformed("missing b"))?)?;
    let min = obj
        .get("min")
        .and_then(Value::as_array)
        .filter(|m| m.len() == 2)
        .ok_or_else(|| malformed("min must be [p, s]"))?;
    let p = from_json(&min[0])?;
    let s = from_json(&min[1])?;
    let base = a.tower().clone();
    for e in [&b, &p, &s] {
        if **e.tower() != *base {
            return Err(malformed("inconsistent lower towers"));
        }
    }
    let tower = adjoin_root(&base, &p, &s)?;
    TowerElement::from_pair(&tower, &a, &b)
}

/// Decodes an element and re-expresses it in `tower`.
pub fn from_json_in(v: &Value, tower: &Tower) -> Result<TowerElement, FieldError> {
    from_json(v)?.lift(tower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};
    use crate::exactfield::tower::adjoin_rational_sqrt;

    #[test]
    fn rational_roundtrip() {
        let x = TowerElement::from_rational(&TowerDescriptor::rational(), rat(-7, 8));
        let v = to_json(&x);
        assert_eq!(v, json!({"q": "-7/8"}));
        assert_eq!(from_json(&v).unwrap(), x);
    }

    #[test]
    fn depth_two_roundtrip() {
        let (t1, s) = adjoin_rational_sqrt(&int(201)).unwrap();
        let t2 = adjoin_root(&t1, &s.scale(&rat(1, 5)), &TowerElement::from_int(&t1, -1)).unwrap();
        let w = TowerElement::generator(&t2, 1);
        let x = &(&w * &s) + &TowerElement::from_rational(&t2, rat(3, 2));
        let back = from_json(&to_json(&x)).unwrap();
        assert_eq!(back, x);
        assert_eq!(**back.tower(), *t2);
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_json(&json!({"q": "1/0"})).is_err());
        assert!(from_json(&json!({"a": {"q": "1"}})).is_err());
        // reducible minimal polynomial t^2 = 4
        let v = json!({"a": {"q": "0"}, "b": {"q": "1"}, "min": [{"q": "0"}, {"q": "4"}]});
        assert_eq!(from_json(&v).unwrap_err(), FieldError::Reducible);
    }
}
