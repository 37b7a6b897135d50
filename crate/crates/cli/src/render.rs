//! Exact numbers as JSON: integers as numbers when they fit, rationals as "num/den".

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use soliton_core::linalg::Rational;
use soliton_core::Matrix;
use num_bigint::BigInt;

pub fn int(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

pub fn frac(x: &Rational) -> Value {
    if x.is_integer() {
        int(x.numer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

/// Always "num/den", as printed by `averages`.
pub fn frac_text(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn fracs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(frac).collect())
}

/// Row-major nested arrays.
pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| int(m.get(i, j))).collect())).collect())
}

pub fn block(id: soliton_core::BlockId) -> Value {
    json!({ "color": id.color, "block": id.block })
}
