//! Web of Science search programs for U/I/G retrieval.
//!
//! Five direct address searches followed by five boolean combinations that
//! yield G0, UI0, UG0, IG0 and UIG0. Text is emitted only; nothing here talks
//! to a database.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

const UNIVERSITY: &[&str] = &["UNIV*", "COLL*"];
const INDUSTRY: &[&str] = &["GMBH*", "CORP*", "LTD*", "AG*"];
const GOVERNMENT: &[&str] = &["NATL*", "NACL*", "NAZL*", "GOVT*", "MINIST*", "ACAD*", "NIH*"];

const UK_EXPANSION: &str = "(England OR Scotland OR Wales OR North Ireland)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    DirectSearch,
    BooleanCombination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryStep {
    pub label: String,
    pub kind: StepKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryPlan {
    pub country: String,
    pub start: i32,
    pub end: i32,
    pub steps: Vec<QueryStep>,
}

impl fmt::Display for QueryPlan {
    /// One `#N: text` line per step.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{}: {}", s.label, s.text)?;
        }
        Ok(())
    }
}

/// Extra abbreviations appended to each sector's OR-list, and formatting switches.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlanOptions {
    pub extra_university: Vec<String>,
    pub extra_industry: Vec<String>,
    pub extra_government: Vec<String>,
    /// Write `PY=2011` instead of `PY=2011-2011` for single-year plans.
    pub bare_single_year: bool,
}

/// Expands the WoS address form of a country; only the UK needs it.
pub fn expand_country(name: &str) -> String {
    let name = name.trim();
    if name.eq_ignore_ascii_case("UK") {
        UK_EXPANSION.to_string()
    } else {
        name.to_string()
    }
}

/// The three country groups covered by the reference data.
pub fn country_groups() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("G7", vec!["CANADA", "FRANCE", "GERMANY", "ITALY", "JAPAN", "UK", "USA"]),
        ("BRICS", vec!["BRAZIL", "RUSSIA", "INDIA", "CHINA", "SOUTH AFRICA"]),
        ("INS", vec!["INDONESIA", "NETHERLANDS", "SOUTH KOREA"]),
    ]
}

fn or_list(base: &[&str], extra: &[String]) -> String {
    let terms: Vec<&str> = base.iter().copied().chain(extra.iter().map(String::as_str)).collect();
    format!("({})", terms.join(" OR "))
}

pub fn build_plan(country: &str, start: i32, end: i32) -> Result<QueryPlan> {
    build_plan_with(country, start, end, &PlanOptions::default())
}

pub fn build_plan_with(country: &str, start: i32, end: i32, opts: &PlanOptions) -> Result<QueryPlan> {
    if country.trim().is_empty() {
        return Err(Error::EmptyCountry);
    }
    if start > end {
        return Err(Error::InvalidYearRange { start, end });
    }
    let c = expand_country(country);
    let py = if opts.bare_single_year && start == end {
        format!("PY={start}")
    } else {
        format!("PY={start}-{end}")
    };
    let univ = or_list(UNIVERSITY, &opts.extra_university);
    let ind = or_list(INDUSTRY, &opts.extra_industry);
    let gov = or_list(GOVERNMENT, &opts.extra_government);

    let direct = |clauses: &[&str]| format!("{py} AND AD=({c} SAME {})", clauses.join(" SAME "));
    let texts = [
        direct(&[&univ]),
        direct(&[&ind]),
        direct(&[&gov]),
        direct(&[&gov, &univ]),
        direct(&[&gov, &ind]),
    ];
    let combos = ["#3 NOT #4 NOT #5", "#1 AND #2", "#1 AND #6", "#2 AND #6", "#1 AND #2 AND #6"];

    let steps: Vec<QueryStep> = texts
        .into_iter()
        .map(|text| (StepKind::DirectSearch, text))
        .chain(combos.iter().map(|t| (StepKind::BooleanCombination, t.to_string())))
        .enumerate()
        .map(|(n, (kind, text))| QueryStep { label: format!("#{}", n + 1), kind, text })
        .collect();

    Ok(QueryPlan { country: c, start, end, steps })
}
