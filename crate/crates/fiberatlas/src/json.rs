//! Deterministic JSON: insertion-ordered objects and floats written as
//! `%.12e` (`1.500000000000e+00`); non-finite floats become `null`.

use std::str::FromStr;

use fiberatlas_core::Complex64;
use serde_json::{Map, Number, Value};

/// C-style `%.12e`.
pub fn format_e(x: f64) -> String {
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format_e(x)).expect("valid JSON number"))
    } else {
        Value::Null
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn complexes(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().copied().map(complex).collect())
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

pub fn ints<T: Copy + Into<i64>>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(x.into())).collect())
}

pub fn usizes(xs: &[usize]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(x as u64)).collect())
}

pub fn matrix(rows: &[Vec<i64>]) -> Value {
    Value::Array(rows.iter().map(|r| ints(r)).collect())
}

/// Builds an object from `(key, value)` pairs in order.
pub fn object<const N: usize>(fields: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Pretty-printed with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponents() {
        assert_eq!(format_e(1.5), "1.500000000000e+00");
        assert_eq!(format_e(-0.00012345), "-1.234500000000e-04");
        assert_eq!(format_e(6.02e23), "6.020000000000e+23");
        assert_eq!(format_e(1e-300), "1.000000000000e-300");
        assert_eq!(format_e(0.0), "0.000000000000e+00");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn numbers_keep_their_text() {
        let v = object([("x", num(3.0)), ("a", num(f64::INFINITY))]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"x":3.000000000000e+00,"a":null}"#);
    }
}
