//! Country/window/scenario records and their CSV and JSON encodings.
//!
//! A record carries one of three payload granularities: raw retrieval counts,
//! seven precomputed entropies (optionally with the published T(UIG) for
//! cross-checking), or a T(UIG) value alone. Entropy-valued payloads are kept
//! as plain numbers in the dataset's declared unit so that files round-trip
//! bit for bit; [`Dataset::unit`] tells how to read them.

mod check;
mod csv_io;
mod json_io;
mod reference;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{
    indicator_set, EntropyTerms, EntropyValue, IndicatorSet, IndicatorSource, Unit, UniversePolicy,
};
use crate::overlap::{to_exclusive, ExclusiveCells, InclusiveCounts};

pub use check::{rounding_budget, Finding};
pub use reference::{reference_table1, reference_table2};

pub const DEFAULT_SCENARIO: &str = "default";
pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

/// An inclusive range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Window {
    pub start: i32,
    pub end: i32,
}

impl Window {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidYearRange { start, end });
        }
        for y in [start, end] {
            if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
                return Err(Error::InvalidYearRange { start, end });
            }
        }
        Ok(Window { start, end })
    }

    pub fn single(year: i32) -> Result<Self> {
        Window::new(year, year)
    }

    pub fn midpoint(&self) -> f64 {
        (self.start as f64 + self.end as f64) / 2.0
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}-{}", self.start, self.end)
        }
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Accepts `2001-2005` or a single year `2011`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(0, "window", format!("cannot read window '{s}'"));
        let year = |t: &str| t.trim().parse::<i32>().map_err(|_| bad());
        match s.split_once('-') {
            Some((a, b)) => Window::new(year(a)?, year(b)?),
            None => Window::single(year(s)?),
        }
    }
}

/// Country plus attribution scenario; unique together with the window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RecordKey {
    pub country: String,
    pub scenario: String,
}

impl RecordKey {
    pub fn new(country: impl Into<String>, scenario: impl Into<String>) -> Self {
        RecordKey { country: country.into(), scenario: scenario.into() }
    }

    pub fn country(country: impl Into<String>) -> Self {
        RecordKey::new(country, DEFAULT_SCENARIO)
    }
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scenario == DEFAULT_SCENARIO {
            f.write_str(&self.country)
        } else {
            write!(f, "{}({})", self.country, self.scenario)
        }
    }
}

impl FromStr for RecordKey {
    type Err = Error;

    /// Parses `CHINA(CAS-as-U)` or a bare `USA`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_suffix(')').and_then(|x| x.split_once('(')) {
            Some((c, sc)) if !c.trim().is_empty() => Ok(RecordKey::new(c.trim(), sc.trim())),
            _ if !s.is_empty() => Ok(RecordKey::country(s)),
            _ => Err(Error::EmptyCountry),
        }
    }
}

/// What a record knows about its country and window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Payload {
    /// Retrieval counts; `total_n` is the optional size of the whole universe.
    Counts { counts: InclusiveCounts, total_n: Option<u64> },
    /// Seven entropies in the dataset unit; `t_uig` is a published value kept for cross-checks.
    Entropies { h: EntropyTerms, t_uig: Option<f64> },
    /// T(UIG) alone, in the dataset unit.
    TOnly(f64),
    /// The source marks this window as not available.
    Missing,
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Counts { .. } => "counts",
            Payload::Entropies { .. } => "entropies",
            Payload::TOnly(_) => "t-only",
            Payload::Missing => "missing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryWindowRecord {
    pub country: String,
    pub scenario: String,
    pub window: Window,
    pub payload: Payload,
}

/// How to build the probability universe for counts records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PolicyMode {
    #[default]
    Union,
    WithNone,
}

impl FromStr for PolicyMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "union" | "union-only" => Ok(PolicyMode::Union),
            "with-none" => Ok(PolicyMode::WithNone),
            other => Err(format!("unknown policy '{other}' (expected union or with-none)")),
        }
    }
}

impl CountryWindowRecord {
    pub fn new(
        country: impl Into<String>,
        scenario: impl Into<String>,
        window: Window,
        payload: Payload,
    ) -> Self {
        CountryWindowRecord { country: country.into(), scenario: scenario.into(), window, payload }
    }

    pub fn key(&self) -> RecordKey {
        RecordKey::new(self.country.clone(), self.scenario.clone())
    }

    fn label(&self) -> String {
        format!("{} {}", self.key(), self.window)
    }

    /// Disjoint cells and universe for a counts payload.
    pub fn cells(&self, mode: PolicyMode) -> Result<(ExclusiveCells, UniversePolicy)> {
        let Payload::Counts { counts, total_n } = &self.payload else {
            return Err(Error::PayloadUnavailable {
                key: self.label(),
                reason: format!("{} payload carries no retrieval counts", self.payload.kind()),
            });
        };
        let mut cells = to_exclusive(counts)?;
        let policy = match mode {
            PolicyMode::Union => UniversePolicy::UnionOnly,
            PolicyMode::WithNone => {
                let total = total_n.ok_or_else(|| Error::PayloadUnavailable {
                    key: self.label(),
                    reason: "with-none policy needs a total_n column".into(),
                })?;
                let union = cells.union_total();
                if total < union {
                    return Err(Error::UniverseTooSmall { total, union });
                }
                cells.none = Some(total - union);
                UniversePolicy::WithNone { total }
            }
        };
        Ok((cells, policy))
    }

    /// All indicators, for counts or entropies payloads.
    pub fn indicators(&self, unit: Unit, mode: PolicyMode) -> Result<IndicatorSet> {
        match &self.payload {
            Payload::Counts { .. } => {
                let (cells, policy) = self.cells(mode)?;
                indicator_set(IndicatorSource::Cells(cells, policy))
            }
            Payload::Entropies { h, .. } => indicator_set(IndicatorSource::Entropies(*h, unit)),
            other => Err(Error::PayloadUnavailable {
                key: self.label(),
                reason: format!("{} payload has no entropies", other.kind()),
            }),
        }
    }

    /// T(UIG) for ranking and series work. A published value takes precedence
    /// over one recomputed from entropies; `None` for missing windows.
    pub fn t_uig(&self, unit: Unit, mode: PolicyMode) -> Result<Option<EntropyValue>> {
        Ok(match &self.payload {
            Payload::TOnly(t) | Payload::Entropies { t_uig: Some(t), .. } => {
                Some(EntropyValue::new(*t, unit))
            }
            Payload::Entropies { .. } | Payload::Counts { .. } => {
                Some(self.indicators(unit, mode)?.t_uig)
            }
            Payload::Missing => None,
        })
    }
}

/// An immutable, key-unique collection of records.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    unit: Unit,
    provenance: Option<String>,
    records: Vec<CountryWindowRecord>,
}

fn check_name(what: &str, s: &str) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Invalid(format!("{what} must not be empty")));
    }
    if s.trim() != s || s.contains(['\n', '\r']) {
        return Err(Error::Invalid(format!("{what} '{s}' has surrounding whitespace or line breaks")));
    }
    Ok(())
}

fn check_record(r: &CountryWindowRecord) -> Result<()> {
    check_name("country", &r.country)?;
    check_name("scenario", &r.scenario)?;
    Window::new(r.window.start, r.window.end)?;
    let finite = |x: f64| {
        if x.is_finite() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{}: non-finite value", r.label())))
        }
    };
    match &r.payload {
        Payload::Entropies { h, t_uig } => {
            h.as_array().into_iter().try_for_each(finite)?;
            t_uig.map_or(Ok(()), finite)
        }
        Payload::TOnly(t) => finite(*t),
        _ => Ok(()),
    }
}

impl Dataset {
    pub fn new(
        unit: Unit,
        provenance: Option<String>,
        records: Vec<CountryWindowRecord>,
    ) -> Result<Self> {
        if let Some(p) = &provenance {
            if p.contains(['\n', '\r']) {
                return Err(Error::Invalid("provenance must be a single line".into()));
            }
        }
        let mut seen = HashSet::new();
        for r in &records {
            check_record(r)?;
            if !seen.insert((r.key(), r.window)) {
                return Err(Error::DuplicateKey(r.label()));
            }
        }
        Ok(Dataset { unit, provenance, records })
    }

    pub fn empty(unit: Unit) -> Self {
        Dataset { unit, provenance: None, records: Vec::new() }
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn records(&self) -> &[CountryWindowRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, key: &RecordKey, window: Window) -> Option<&CountryWindowRecord> {
        self.records
            .iter()
            .find(|r| r.window == window && r.country == key.country && r.scenario == key.scenario)
    }

    /// Distinct keys in order of first appearance.
    pub fn keys(&self) -> Vec<RecordKey> {
        let mut seen = HashSet::new();
        self.records.iter().map(CountryWindowRecord::key).filter(|k| seen.insert(k.clone())).collect()
    }

    /// Distinct windows, ascending.
    pub fn windows(&self) -> Vec<Window> {
        let mut w: Vec<Window> = self.records.iter().map(|r| r.window).collect();
        w.sort();
        w.dedup();
        w
    }

    /// Records of one key, in window order. Country matching ignores ASCII case.
    pub fn series(&self, key: &RecordKey) -> Vec<&CountryWindowRecord> {
        let mut out: Vec<&CountryWindowRecord> = self
            .records
            .iter()
            .filter(|r| r.country.eq_ignore_ascii_case(&key.country) && r.scenario.eq_ignore_ascii_case(&key.scenario))
            .collect();
        out.sort_by_key(|r| r.window);
        out
    }

    /// Records falling in `window`.
    pub fn in_window(&self, window: Window) -> Vec<&CountryWindowRecord> {
        self.records.iter().filter(|r| r.window == window).collect()
    }

    pub fn parse(input: &[u8], format: Format) -> Result<Self> {
        match format {
            Format::Csv => csv_io::parse(input),
            Format::Json => json_io::parse(input),
        }
    }

    pub fn serialize(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => csv_io::serialize(self),
            Format::Json => json_io::serialize(self),
        }
    }

    /// Consistency findings for every record; empty when the data is clean.
    pub fn check(&self) -> Vec<Finding> {
        check::check(self)
    }
}

/// File encodings understood by [`Dataset::parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}
