//! Number formatting shared by all output formats.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Significant digits in machine-readable output; enough to round-trip any f64.
pub const MACHINE_DIGITS: usize = 17;
/// Significant digits in human-readable output.
pub const TEXT_DIGITS: usize = 6;

/// `printf("%.*g")`: `digits` significant digits, trailing zeros dropped,
/// scientific notation outside `1e-4 <= |x| < 10^digits`.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn machine(x: f64) -> String {
    sig(x, MACHINE_DIGITS)
}

pub fn text(x: f64) -> String {
    sig(x, TEXT_DIGITS)
}

/// Serializes through serde_json with exactly the [`machine`] digits.
#[derive(Debug, Clone, Copy)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("cannot encode {} as a JSON number", self.0)));
        }
        RawValue::from_string(machine(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    Sig17(*x).serialize(s)
}

pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    x.map(Sig17).serialize(s)
}

pub fn ser_vec_f64<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().copied().map(Sig17))
}
