//! Interchange formats: the canonical CSV edge list, GEXF and DOT exports,
//! and the JSON report document.

mod dot;
mod edgelist;
mod gexf;

pub use dot::export_dot;
pub use edgelist::{
    parse_csv, write_csv, CsvOptions, Diagnostic, IngestError, ParseOutcome, Severity, CSV_HEADER,
};
pub use gexf::export_gexf;

use crate::temporal::WindowReport;

/// Serializes reports as pretty-printed JSON. Field order follows the struct
/// definitions; reals carry exactly six decimals.
pub fn write_report_json(reports: &[WindowReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports contain only finite reals")
}

pub fn read_report_json(text: &str) -> Result<Vec<WindowReport>, serde_json::Error> {
    serde_json::from_str(text)
}

/// Serde adapter writing an `f64` as a JSON number with six decimals.
pub mod fixed6 {
    use serde::de::Deserialize;
    use serde::ser::Error as _;
    use serde::{Deserializer, Serialize, Serializer};
    use serde_json::value::RawValue;

    pub(crate) fn raw(v: f64) -> Result<Box<RawValue>, String> {
        if !v.is_finite() {
            return Err(format!("non-finite value {v}"));
        }
        RawValue::from_string(format!("{v:.6}")).map_err(|e| e.to_string())
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        raw(*v).map_err(S::Error::custom)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d)
    }

    /// The same for maps with real values.
    pub mod map {
        use std::collections::BTreeMap;

        use serde::de::Deserialize;
        use serde::ser::{Error as _, SerializeMap};
        use serde::{Deserializer, Serializer};

        use crate::graph::UserId;

        pub fn serialize<S: Serializer>(
            m: &BTreeMap<UserId, f64>,
            s: S,
        ) -> Result<S::Ok, S::Error> {
            let mut out = s.serialize_map(Some(m.len()))?;
            for (k, v) in m {
                out.serialize_entry(k, &super::raw(*v).map_err(S::Error::custom)?)?;
            }
            out.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<BTreeMap<UserId, f64>, D::Error> {
            BTreeMap::deserialize(d)
        }
    }
}

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
