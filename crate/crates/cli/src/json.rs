//! JSON output with every float written to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};
use snf_core::{Complex, MatPoly, Poly};

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub fn complex(w: Complex) -> Value {
    json!({ "re": w.re, "im": w.im })
}

pub fn poly(p: &Poly) -> Value {
    json!(p.coeffs())
}

/// Row-major grid of ascending coefficient lists padded to the degree bound.
pub fn matpoly(a: &MatPoly) -> Value {
    let d = a.degree_bound();
    let rows: Vec<Vec<Vec<f64>>> = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| (0..=d).map(|k| a.coeff(i, j, k)).collect())
                .collect()
        })
        .collect();
    json!(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = to_string(&json!({ "x": 0.1 }));
        assert_eq!(s, r#"{"x":1.0000000000000001e-1}"#);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_string(&json!({ "x": f64::NAN })), r#"{"x":null}"#);
    }
}
