//! Full-precision float output for JSON reports: 17 significant digits.

use serde::ser::{Error, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// `x` with 17 significant digits in scientific notation, `null` when not finite.
pub fn format_sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

struct Sig17(f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(format_sig17(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

pub fn sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    Sig17(*x).serialize(s)
}

pub fn sig17_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => Sig17(*v).serialize(s),
        None => s.serialize_none(),
    }
}

pub fn sig17_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for &x in xs {
        seq.serialize_element(&Sig17(x))?;
    }
    seq.end()
}
