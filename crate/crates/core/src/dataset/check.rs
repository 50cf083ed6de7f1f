//! Record-level consistency rules used by `Dataset::check`.

use serde::Serialize;

use super::{CountryWindowRecord, Dataset, Payload};
use crate::measures::EntropyTerms;
use crate::overlap::validate;

/// Published values carry four significant figures.
const PUBLISHED_DIGITS: i32 = 4;

/// One broken rule in one record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub record: String,
    pub rule: String,
    pub detail: String,
}

/// Worst-case error from rounding each of `values` to four significant
/// figures: half a unit in the last printed place, summed.
pub fn rounding_budget(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|x| **x != 0.0)
        .map(|x| {
            let magnitude = x.abs().log10().floor() as i32;
            0.5 * 10f64.powi(magnitude + 1 - PUBLISHED_DIGITS)
        })
        .sum()
}

fn entropy_findings(h: &EntropyTerms, t_uig: Option<f64>, push: &mut impl FnMut(String, String)) {
    for (name, v) in ["H(U)", "H(I)", "H(G)", "H(UI)", "H(UG)", "H(IG)", "H(UIG)"].iter().zip(h.as_array()) {
        if v < 0.0 {
            push(format!("{name} < 0"), format!("{name}={v}"));
        }
    }
    let pairs = [
        ("H(UI)", h.h_ui, "H(U)", h.h_u, "H(I)", h.h_i),
        ("H(UG)", h.h_ug, "H(U)", h.h_u, "H(G)", h.h_g),
        ("H(IG)", h.h_ig, "H(I)", h.h_i, "H(G)", h.h_g),
    ];
    for (xy_name, xy, x_name, x, y_name, y) in pairs {
        let slack = rounding_budget(&[x, y, xy]);
        if xy < x.max(y) - slack {
            push(
                format!("{xy_name} < max({x_name},{y_name})"),
                format!("{xy_name}={xy}, {x_name}={x}, {y_name}={y}"),
            );
        }
        if xy > x + y + slack {
            push(
                format!("{xy_name} > {x_name}+{y_name}"),
                format!("{xy_name}={xy}, {x_name}={x}, {y_name}={y}"),
            );
        }
        let slack = rounding_budget(&[xy, h.h_uig]);
        if h.h_uig < xy - slack {
            push(format!("H(UIG) < {xy_name}"), format!("H(UIG)={}, {xy_name}={xy}", h.h_uig));
        }
    }
    if let Some(t) = t_uig {
        let computed = h.configurational();
        let mut terms = h.as_array().to_vec();
        terms.push(t);
        let slack = rounding_budget(&terms);
        if (computed - t).abs() > slack {
            push(
                "T(UIG) disagrees with entropies".to_string(),
                format!("recorded {t}, recomputed {computed}, rounding budget {slack}"),
            );
        }
    }
}

fn record_findings(r: &CountryWindowRecord, out: &mut Vec<Finding>) {
    let label = r.label();
    let mut push = |rule: String, detail: String| out.push(Finding { record: label.clone(), rule, detail });
    match &r.payload {
        Payload::Counts { counts, total_n } => {
            for v in validate(counts) {
                push(v.rule, v.detail);
            }
            if let (Some(n), Some(union)) = (total_n, counts.union_total()) {
                if *n < union {
                    push("total_n < union".into(), format!("total_n={n}, union={union}"));
                }
            }
        }
        Payload::Entropies { h, t_uig } => entropy_findings(h, *t_uig, &mut push),
        Payload::TOnly(_) | Payload::Missing => {}
    }
}

pub(super) fn check(d: &Dataset) -> Vec<Finding> {
    let mut out = Vec::new();
    for r in &d.records {
        record_findings(r, &mut out);
    }
    out
}
