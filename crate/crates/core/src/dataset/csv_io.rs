//! CSV encoding.
//!
//! ```text
//! # unit: mbit
//! # provenance: free text
//! country,scenario,py_start,py_end,u0,i0,g0,ui0,ug0,ig0,uig0,total_n,h_u,h_i,h_g,h_ui,h_ig,h_ug,h_uig,t_mbit
//! ```
//!
//! Leading `#` lines carry the declared unit and provenance. Which payload
//! columns exist is up to the file; each row fills exactly one group, or marks
//! itself missing with `n.a.` (or leaves every payload cell empty).

use std::collections::HashMap;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use super::{CountryWindowRecord, Dataset, Payload, Window};
use crate::error::{Error, Result};
use crate::measures::{EntropyTerms, Unit};
use crate::overlap::InclusiveCounts;

const COUNT_COLS: [&str; 7] = ["u0", "i0", "g0", "ui0", "ug0", "ig0", "uig0"];
const H_COLS: [&str; 7] = ["h_u", "h_i", "h_g", "h_ui", "h_ig", "h_ug", "h_uig"];
const MISSING: &str = "n.a.";

fn is_missing(cell: &str) -> bool {
    cell.eq_ignore_ascii_case(MISSING)
}

struct Preamble<'a> {
    unit: Option<Unit>,
    provenance: Option<String>,
    lines: usize,
    body: &'a str,
}

fn read_preamble(text: &str) -> Result<Preamble<'_>> {
    let mut unit = None;
    let mut provenance = None;
    let mut consumed = 0;
    let mut lines = 0;
    for line in text.split_inclusive('\n') {
        let t = line.trim();
        if !(t.is_empty() || t.starts_with('#')) {
            break;
        }
        consumed += line.len();
        lines += 1;
        let Some(body) = t.strip_prefix('#') else { continue };
        let Some((k, v)) = body.split_once([':', '=']) else { continue };
        match k.trim().to_ascii_lowercase().as_str() {
            "unit" => {
                unit = Some(v.parse().map_err(|e: String| Error::parse(lines, "unit", e))?);
            }
            "provenance" => provenance = Some(v.trim().to_string()),
            _ => {}
        }
    }
    Ok(Preamble { unit, provenance, lines, body: &text[consumed..] })
}

#[derive(Default)]
struct Columns {
    country: usize,
    scenario: Option<usize>,
    start: usize,
    end: usize,
    counts: Option<[usize; 7]>,
    total_n: Option<usize>,
    h: Option<[usize; 7]>,
    t: Option<(usize, Unit)>,
}

fn group(
    index: &HashMap<String, usize>,
    names: [&str; 7],
    row: usize,
) -> Result<Option<[usize; 7]>> {
    let found: Vec<Option<usize>> = names.iter().map(|n| index.get(*n).copied()).collect();
    if found.iter().all(Option::is_none) {
        return Ok(None);
    }
    match found.iter().position(Option::is_none) {
        Some(i) => Err(Error::parse(row, names[i], "column group is incomplete")),
        None => Ok(Some(std::array::from_fn(|i| found[i].unwrap()))),
    }
}

fn read_columns(header: &StringRecord, row: usize) -> Result<Columns> {
    let mut index = HashMap::new();
    let mut t = None;
    for (i, name) in header.iter().enumerate() {
        let name = name.to_ascii_lowercase();
        let known = ["country", "scenario", "py_start", "py_end", "total_n"].contains(&name.as_str())
            || COUNT_COLS.contains(&name.as_str())
            || H_COLS.contains(&name.as_str());
        if let Some(suffix) = name.strip_prefix("t_") {
            let unit = suffix.parse().map_err(|e: String| Error::parse(row, &name, e))?;
            if t.replace((i, unit)).is_some() {
                return Err(Error::parse(row, &name, "more than one T column"));
            }
            continue;
        }
        if !known {
            return Err(Error::parse(row, &name, "unknown column"));
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::parse(row, &name, "duplicate column"));
        }
    }
    let required = |n: &str| index.get(n).copied().ok_or_else(|| Error::parse(row, n, "required column missing"));
    Ok(Columns {
        country: required("country")?,
        scenario: index.get("scenario").copied(),
        start: required("py_start")?,
        end: required("py_end")?,
        counts: group(&index, COUNT_COLS, row)?,
        total_n: index.get("total_n").copied(),
        h: group(&index, H_COLS, row)?,
        t,
    })
}

struct Row<'a> {
    rec: &'a StringRecord,
    line: usize,
    header: &'a StringRecord,
}

impl Row<'_> {
    fn cell(&self, i: usize) -> &str {
        self.rec.get(i).unwrap_or("")
    }

    fn name(&self, i: usize) -> String {
        self.header.get(i).unwrap_or("?").to_string()
    }

    fn err(&self, i: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.name(i), msg)
    }

    fn int<T: std::str::FromStr>(&self, i: usize) -> Result<T> {
        self.cell(i).parse().map_err(|_| self.err(i, format!("'{}' is not a valid integer", self.cell(i))))
    }

    fn real(&self, i: usize) -> Result<f64> {
        match self.cell(i).parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.err(i, format!("'{}' is not a finite number", self.cell(i)))),
        }
    }
}

fn read_payload(cols: &Columns, row: &Row) -> Result<Payload> {
    let mut payload_cols: Vec<usize> = Vec::new();
    payload_cols.extend(cols.counts.iter().flatten());
    payload_cols.extend(cols.total_n);
    payload_cols.extend(cols.h.iter().flatten());
    payload_cols.extend(cols.t.map(|(i, _)| i));

    let filled = |i: &usize| !row.cell(*i).is_empty();
    if let Some(&i) = payload_cols.iter().find(|&&i| is_missing(row.cell(i))) {
        return match payload_cols.iter().find(|&&j| filled(&j) && !is_missing(row.cell(j))) {
            Some(&j) => Err(row.err(j, format!("value next to an {MISSING} marker in column {}", row.name(i)))),
            None => Ok(Payload::Missing),
        };
    }

    let any = |group: &[usize]| group.iter().any(filled);
    let counts_set = cols.counts.is_some_and(|g| any(&g)) || cols.total_n.is_some_and(|i| filled(&i));
    let h_set = cols.h.is_some_and(|g| any(&g));
    let t_set = cols.t.is_some_and(|(i, _)| filled(&i));

    if counts_set {
        if let Some(j) = cols.h.iter().flatten().chain(cols.t.as_ref().map(|(i, _)| i)).find(|i| filled(i)) {
            return Err(row.err(*j, "row mixes counts with entropy values"));
        }
        let Some(g) = cols.counts else {
            return Err(row.err(cols.total_n.unwrap(), "total_n without count columns"));
        };
        let v: Vec<u64> = g.iter().map(|&i| row.int(i)).collect::<Result<_>>()?;
        let total_n = cols.total_n.filter(filled).map(|i| row.int(i)).transpose()?;
        return Ok(Payload::Counts {
            counts: InclusiveCounts::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6]),
            total_n,
        });
    }
    if h_set {
        let g = cols.h.unwrap();
        let v: Vec<f64> = g.iter().map(|&i| row.real(i)).collect::<Result<_>>()?;
        // Column order: h_u, h_i, h_g, h_ui, h_ig, h_ug, h_uig.
        let h = EntropyTerms { h_u: v[0], h_i: v[1], h_g: v[2], h_ui: v[3], h_ig: v[4], h_ug: v[5], h_uig: v[6] };
        let t_uig = cols.t.filter(|(i, _)| filled(i)).map(|(i, _)| row.real(i)).transpose()?;
        return Ok(Payload::Entropies { h, t_uig });
    }
    if t_set {
        return Ok(Payload::TOnly(row.real(cols.t.unwrap().0)?));
    }
    Ok(Payload::Missing)
}

pub(super) fn parse(input: &[u8]) -> Result<Dataset> {
    let text = std::str::from_utf8(input).map_err(|e| Error::parse(0, "-", format!("input is not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let pre = read_preamble(text)?;

    let mut rdr = ReaderBuilder::new().flexible(true).trim(Trim::All).from_reader(pre.body.as_bytes());
    let header_line = pre.lines + 1;
    let header = rdr
        .headers()
        .map_err(|e| Error::parse(header_line, "-", e.to_string()))?
        .clone();
    if header.iter().all(str::is_empty) {
        return Err(Error::parse(header_line, "-", "missing header row"));
    }
    let cols = read_columns(&header, header_line)?;

    let unit = match (pre.unit, cols.t) {
        (Some(declared), Some((i, t_unit))) if declared != t_unit => {
            return Err(Error::parse(
                header_line,
                header.get(i).unwrap_or("t"),
                format!("T column unit {t_unit} disagrees with declared unit {declared}"),
            ))
        }
        (Some(u), _) | (None, Some((_, u))) => u,
        (None, None) => Unit::Mbit,
    };

    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize + pre.lines);
            Error::parse(line, "-", e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize) + pre.lines;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = Row { rec: &rec, line, header: &header };
        let country = row.cell(cols.country);
        if country.is_empty() {
            return Err(row.err(cols.country, "country must not be empty"));
        }
        let scenario = match cols.scenario.map(|i| row.cell(i)) {
            Some("") | None => super::DEFAULT_SCENARIO,
            Some(s) => s,
        };
        let (start, end): (i32, i32) = (row.int(cols.start)?, row.int(cols.end)?);
        let window = if start > end {
            return Err(row.err(cols.end, "window reversed"));
        } else {
            Window::new(start, end).map_err(|_| {
                row.err(cols.start, format!("years must lie in {}..={}", super::MIN_YEAR, super::MAX_YEAR))
            })?
        };
        let payload = read_payload(&cols, &row)?;
        records.push(CountryWindowRecord::new(country, scenario, window, payload));
    }
    Dataset::new(unit, pre.provenance, records).map_err(|e| match e {
        Error::Invalid(msg) => Error::parse(0, "-", msg),
        other => other,
    })
}

pub(super) fn serialize(d: &Dataset) -> Vec<u8> {
    let has = |f: fn(&Payload) -> bool| d.records.iter().any(|r| f(&r.payload));
    let counts = has(|p| matches!(p, Payload::Counts { .. }));
    let total_n = has(|p| matches!(p, Payload::Counts { total_n: Some(_), .. }));
    let h = has(|p| matches!(p, Payload::Entropies { .. }));
    let t = has(|p| matches!(p, Payload::TOnly(_) | Payload::Entropies { t_uig: Some(_), .. }))
        || !(counts || h);
    let t_name = format!("t_{}", d.unit);

    let mut header: Vec<&str> = vec!["country", "scenario", "py_start", "py_end"];
    if counts {
        header.extend(COUNT_COLS);
        if total_n {
            header.push("total_n");
        }
    }
    if h {
        header.extend(H_COLS);
    }
    if t {
        header.push(&t_name);
    }
    let width = header.len();

    let mut out = format!("# unit: {}\n", d.unit).into_bytes();
    if let Some(p) = &d.provenance {
        out.extend(format!("# provenance: {p}\n").bytes());
    }
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(&header).expect("in-memory write");

    for r in &d.records {
        let mut row = vec![r.country.clone(), r.scenario.clone(), r.window.start.to_string(), r.window.end.to_string()];
        let mut counts_cells = vec![String::new(); if counts { 7 + usize::from(total_n) } else { 0 }];
        let mut h_cells = vec![String::new(); if h { 7 } else { 0 }];
        let mut t_cell = vec![String::new(); usize::from(t)];
        match &r.payload {
            Payload::Counts { counts: c, total_n: n } => {
                for (slot, v) in counts_cells.iter_mut().zip(c.as_array()) {
                    *slot = v.to_string();
                }
                if let Some(n) = n {
                    counts_cells[7] = n.to_string();
                }
            }
            Payload::Entropies { h: e, t_uig } => {
                let v = [e.h_u, e.h_i, e.h_g, e.h_ui, e.h_ig, e.h_ug, e.h_uig];
                for (slot, x) in h_cells.iter_mut().zip(v) {
                    *slot = x.to_string();
                }
                if let Some(x) = t_uig {
                    t_cell[0] = x.to_string();
                }
            }
            Payload::TOnly(x) => t_cell[0] = x.to_string(),
            Payload::Missing => {}
        }
        row.extend(counts_cells);
        row.extend(h_cells);
        row.extend(t_cell);
        if r.payload == Payload::Missing {
            row[4] = MISSING.to_string();
        }
        debug_assert_eq!(row.len(), width);
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Format, DEFAULT_SCENARIO};

    fn parse_str(s: &str) -> Result<Dataset> {
        Dataset::parse(s.as_bytes(), Format::Csv)
    }

    #[test]
    fn t_only_row() {
        let d = parse_str("country,scenario,py_start,py_end,t_mbit\nUSA,default,2006,2010,-33.71\n").unwrap();
        assert_eq!(d.unit(), Unit::Mbit);
        assert_eq!(d.records()[0].payload, Payload::TOnly(-33.71));
        assert_eq!(d.records()[0].window, Window::new(2006, 2010).unwrap());
    }

    #[test]
    fn missing_marker_row() {
        for cell in ["n.a.", "N.A.", ""] {
            let d = parse_str(&format!("country,scenario,py_start,py_end,t_mbit\nRUSSIA,default,1971,1975,{cell}\n")).unwrap();
            assert_eq!(d.records()[0].payload, Payload::Missing, "cell {cell:?}");
        }
        // Short row: trailing payload cells omitted entirely.
        let d = parse_str("country,scenario,py_start,py_end,h_u,h_i,h_g,h_ui,h_ig,h_ug,h_uig\nRUSSIA,default,1971,1975,n.a.\n").unwrap();
        assert_eq!(d.records()[0].payload, Payload::Missing);
    }

    #[test]
    fn reversed_window() {
        let err = parse_str("country,scenario,py_start,py_end,t_mbit\nUSA,default,2010,2006,-1\n").unwrap_err();
        match err {
            Error::Parse { row, column, message } => {
                assert_eq!(row, 2);
                assert_eq!(column, "py_end");
                assert_eq!(message, "window reversed");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn counts_row_with_total() {
        let d = parse_str("country,scenario,py_start,py_end,u0,i0,g0,ui0,ug0,ig0,uig0,total_n\nX,default,2011,2011,11,10,6,5,2,3,1,40\n").unwrap();
        assert_eq!(
            d.records()[0].payload,
            Payload::Counts { counts: InclusiveCounts::new(11, 10, 6, 5, 2, 3, 1), total_n: Some(40) }
        );
    }

    #[test]
    fn entropies_column_order() {
        let d = parse_str("# unit: mbit\ncountry,scenario,py_start,py_end,h_u,h_i,h_g,h_ui,h_ig,h_ug,h_uig,t_mbit\nUSA,default,2011,2011,254.1,215.4,362.9,451,578.1,508.6,675.4,-29.96\n").unwrap();
        let Payload::Entropies { h, t_uig } = &d.records()[0].payload else { panic!() };
        assert_eq!(h.h_ig, 578.1);
        assert_eq!(h.h_ug, 508.6);
        assert_eq!(*t_uig, Some(-29.96));
    }

    #[test]
    fn error_rows_are_file_lines() {
        let err = parse_str("# unit: mbit\n# provenance: x\ncountry,py_start,py_end,t_mbit\nA,2001,2005,1\nB,2001,2005,abc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { row: 5, ref column, .. } if column == "t_mbit"), "{err:?}");
    }

    #[test]
    fn scenario_column_optional() {
        let d = parse_str("country,py_start,py_end,t_bit\nUSA,2006,2010,-0.03371\n").unwrap();
        assert_eq!(d.records()[0].scenario, DEFAULT_SCENARIO);
        assert_eq!(d.unit(), Unit::Bit);
    }

    #[test]
    fn rejects_bad_headers_and_cells() {
        assert!(parse_str("").is_err());
        assert!(parse_str("country,py_start,py_end,colour\n").is_err());
        assert!(parse_str("country,py_start,py_end,u0,i0\n").is_err());
        assert!(parse_str("# unit: bit\ncountry,py_start,py_end,t_mbit\n").is_err());
        assert!(parse_str("country,py_start,py_end,t_mbit\nUSA,2006,2010,inf\n").is_err());
        assert!(parse_str("country,py_start,py_end,t_mbit\n,2006,2010,1\n").is_err());
        assert!(parse_str("country,py_start,py_end,u0,i0,g0,ui0,ug0,ig0,uig0\nX,2011,2011,1,2,3\n").is_err());
        assert!(parse_str("country,py_start,py_end,u0,i0,g0,ui0,ug0,ig0,uig0\nX,2011,2011,-1,0,0,0,0,0,0\n").is_err());
        assert!(parse_str("country,py_start,py_end,u0,i0,g0,ui0,ug0,ig0,uig0,t_mbit\nX,2011,2011,1,0,0,0,0,0,0,5\n").is_err());
        assert!(parse_str("country,py_start,py_end,t_mbit\nX,1850,1855,1\n").is_err());
    }

    #[test]
    fn duplicate_rows_rejected() {
        let err = parse_str("country,py_start,py_end,t_mbit\nUSA,2006,2010,1\nUSA,2006,2010,2\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateKey(_)));
    }

    #[test]
    fn empty_dataset_is_header_only() {
        let text = String::from_utf8(Dataset::empty(Unit::Mbit).serialize(Format::Csv)).unwrap();
        assert_eq!(text, "# unit: mbit\ncountry,scenario,py_start,py_end,t_mbit\n");
        assert_eq!(parse_str(&text).unwrap(), Dataset::empty(Unit::Mbit));
    }

    #[test]
    fn single_record_full_precision() {
        let r = CountryWindowRecord::new("USA", "default", Window::new(2006, 2010).unwrap(), Payload::TOnly(-33.71234567890124));
        let d = Dataset::new(Unit::Mbit, None, vec![r]).unwrap();
        let text = String::from_utf8(d.serialize(Format::Csv)).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.ends_with("USA,default,2006,2010,-33.71234567890124\n"), "{text}");
        assert_eq!(parse_str(&text).unwrap(), d);
    }
}
