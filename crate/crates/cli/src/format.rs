//! Fixed-notation rendering. Lower ends of brackets round down and upper
//! ends round up, so a printed bracket always contains the true one.

use betashift::interval::Real;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{Number, Value};

#[derive(Clone, Copy)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

pub fn decimal(r: &BigRational, digits: usize, mode: Round) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let n = match mode {
        Round::Down => scaled.floor(),
        Round::Up => scaled.ceil(),
        Round::Nearest => scaled.round(),
    }
    .to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let (int, frac) = n.abs().div_rem(&scale);
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>digits$}", frac.to_string())
}

pub fn float(x: f64, digits: usize, mode: Round) -> String {
    match BigRational::from_float(x) {
        Some(r) => decimal(&r, digits, mode),
        None => x.to_string(),
    }
}

pub fn number(text: String) -> Value {
    // `arbitrary_precision` keeps the fixed-notation text as written.
    Value::Number(text.parse::<Number>().expect("decimal text"))
}

pub fn bracket(r: &Real, digits: usize) -> Value {
    Value::Array(vec![
        number(decimal(&r.lo_ratio(), digits, Round::Down)),
        number(decimal(&r.hi_ratio(), digits, Round::Up)),
    ])
}

/// The value itself when the enclosure is a single number, else `null`.
pub fn exact_or_null(r: &Real, digits: usize) -> Value {
    if r.is_exact() {
        number(decimal(&r.lo_ratio(), digits, Round::Nearest))
    } else {
        Value::Null
    }
}
