use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::num::fmt_g17;

/// `f64` serialized with 17 significant digits; non-finite becomes `null`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct G17(pub f64);

impl Serialize for G17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(fmt_g17(self.0)).map_err(serde::ser::Error::custom)?.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

pub(crate) fn g17(v: Option<f64>) -> Option<G17> {
    v.map(G17)
}

pub(crate) fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
