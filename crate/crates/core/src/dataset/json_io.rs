//! JSON encoding: one object with `unit`, optional `provenance`, and a
//! `records` array. A missing window has `"payload": null`.

use serde::{Deserialize, Serialize};

use super::{CountryWindowRecord, Dataset, Payload, Window, DEFAULT_SCENARIO};
use crate::error::{Error, Result};
use crate::measures::{EntropyTerms, Unit};
use crate::overlap::InclusiveCounts;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    #[serde(default = "default_unit")]
    unit: Unit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
    records: Vec<JsonRecord>,
}

fn default_unit() -> Unit {
    Unit::Mbit
}

fn default_scenario() -> String {
    DEFAULT_SCENARIO.to_string()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRecord {
    country: String,
    #[serde(default = "default_scenario")]
    scenario: String,
    py_start: i32,
    py_end: i32,
    payload: Option<JsonPayload>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum JsonPayload {
    Counts(JsonCounts),
    Entropies(JsonEntropies),
    T(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonCounts {
    u0: u64,
    i0: u64,
    g0: u64,
    ui0: u64,
    ug0: u64,
    ig0: u64,
    uig0: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    total_n: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEntropies {
    h_u: f64,
    h_i: f64,
    h_g: f64,
    h_ui: f64,
    h_ig: f64,
    h_ug: f64,
    h_uig: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_uig: Option<f64>,
}

impl From<JsonPayload> for Payload {
    fn from(p: JsonPayload) -> Self {
        match p {
            JsonPayload::Counts(c) => Payload::Counts {
                counts: InclusiveCounts::new(c.u0, c.i0, c.g0, c.ui0, c.ug0, c.ig0, c.uig0),
                total_n: c.total_n,
            },
            JsonPayload::Entropies(e) => Payload::Entropies {
                h: EntropyTerms { h_u: e.h_u, h_i: e.h_i, h_g: e.h_g, h_ui: e.h_ui, h_ug: e.h_ug, h_ig: e.h_ig, h_uig: e.h_uig },
                t_uig: e.t_uig,
            },
            JsonPayload::T(t) => Payload::TOnly(t),
        }
    }
}

fn to_json(p: &Payload) -> Option<JsonPayload> {
    match p {
        Payload::Counts { counts: c, total_n } => Some(JsonPayload::Counts(JsonCounts {
            u0: c.u0,
            i0: c.i0,
            g0: c.g0,
            ui0: c.ui0,
            ug0: c.ug0,
            ig0: c.ig0,
            uig0: c.uig0,
            total_n: *total_n,
        })),
        Payload::Entropies { h, t_uig } => Some(JsonPayload::Entropies(JsonEntropies {
            h_u: h.h_u,
            h_i: h.h_i,
            h_g: h.h_g,
            h_ui: h.h_ui,
            h_ig: h.h_ig,
            h_ug: h.h_ug,
            h_uig: h.h_uig,
            t_uig: *t_uig,
        })),
        Payload::TOnly(t) => Some(JsonPayload::T(*t)),
        Payload::Missing => None,
    }
}

pub(super) fn parse(input: &[u8]) -> Result<Dataset> {
    let doc: FileDoc = serde_json::from_slice(input)
        .map_err(|e| Error::parse(e.line(), "-", e.to_string()))?;
    let mut records = Vec::with_capacity(doc.records.len());
    for (n, r) in doc.records.into_iter().enumerate() {
        let row = n + 1;
        if r.py_start > r.py_end {
            return Err(Error::parse(row, "py_end", "window reversed"));
        }
        let window = Window::new(r.py_start, r.py_end).map_err(|e| Error::parse(row, "py_start", e.to_string()))?;
        let payload = r.payload.map_or(Payload::Missing, Payload::from);
        records.push(CountryWindowRecord::new(r.country, r.scenario, window, payload));
    }
    Dataset::new(doc.unit, doc.provenance, records).map_err(|e| match e {
        Error::Invalid(msg) => Error::parse(0, "-", msg),
        other => other,
    })
}

pub(super) fn serialize(d: &Dataset) -> Vec<u8> {
    let doc = FileDoc {
        unit: d.unit,
        provenance: d.provenance.clone(),
        records: d
            .records
            .iter()
            .map(|r| JsonRecord {
                country: r.country.clone(),
                scenario: r.scenario.clone(),
                py_start: r.window.start,
                py_end: r.window.end,
                payload: to_json(&r.payload),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("dataset serializes to JSON");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Format;

    #[test]
    fn parses_each_payload() {
        let text = r#"{
          "unit": "mbit",
          "records": [
            {"country": "USA", "py_start": 2006, "py_end": 2010, "payload": {"t": -33.71}},
            {"country": "RUSSIA", "scenario": "default", "py_start": 1971, "py_end": 1975, "payload": null},
            {"country": "X", "py_start": 2011, "py_end": 2011,
             "payload": {"counts": {"u0": 11, "i0": 10, "g0": 6, "ui0": 5, "ug0": 2, "ig0": 3, "uig0": 1}}},
            {"country": "Y", "py_start": 2011, "py_end": 2011,
             "payload": {"entropies": {"h_u": 1, "h_i": 1, "h_g": 1, "h_ui": 2, "h_ug": 2, "h_ig": 2, "h_uig": 3, "t_uig": 0}}}
          ]
        }"#;
        let d = Dataset::parse(text.as_bytes(), Format::Json).unwrap();
        let kinds: Vec<_> = d.records().iter().map(|r| r.payload.kind()).collect();
        assert_eq!(kinds, ["t-only", "missing", "counts", "entropies"]);
        assert_eq!(d.records()[0].payload, Payload::TOnly(-33.71));
    }

    #[test]
    fn rejects_reversed_and_unknown() {
        let rev = r#"{"records": [{"country": "USA", "py_start": 2010, "py_end": 2006, "payload": null}]}"#;
        assert!(matches!(Dataset::parse(rev.as_bytes(), Format::Json), Err(Error::Parse { .. })));
        let unk = r#"{"records": [{"country": "USA", "py_start": 2010, "py_end": 2010, "payload": {"z": 1}}]}"#;
        assert!(Dataset::parse(unk.as_bytes(), Format::Json).is_err());
        assert!(Dataset::parse(b"[1,2", Format::Json).is_err());
    }

    #[test]
    fn empty_dataset() {
        let bytes = Dataset::empty(Unit::Bit).serialize(Format::Json);
        let back = Dataset::parse(&bytes, Format::Json).unwrap();
        assert_eq!(back, Dataset::empty(Unit::Bit));
    }
}
