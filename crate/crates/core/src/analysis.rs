//! Ranking, trend classification, scenario comparison, bilateral
//! decomposition and output growth across countries and windows.

use std::cmp::Ordering;

use serde::Serialize;

use crate::dataset::{CountryWindowRecord, Dataset, Payload, PolicyMode, RecordKey, Window};
use crate::error::{Error, Result};
use crate::measures::{transmission2, Axis, EntropyValue, Unit};
use crate::measures::cells_to_joint3;

/// One window's T(UIG), or `None` where the source has no value.
pub type SeriesPoint = (Window, Option<EntropyValue>);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub key: RecordKey,
    pub t_uig: EntropyValue,
    pub position: usize,
}

/// Orders countries from most negative T(UIG) (most nationally integrated) to
/// least negative. Ties fall back to the key, alphabetically.
pub fn rank_by_synergy(entries: &[(RecordKey, Option<EntropyValue>)]) -> Result<Vec<RankEntry>> {
    let mut values = entries
        .iter()
        .map(|(k, t)| t.map(|t| (k.clone(), t)).ok_or_else(|| Error::MissingValue(k.to_string())))
        .collect::<Result<Vec<_>>>()?;
    values.sort_by(|(ka, a), (kb, b)| a.in_bits().total_cmp(&b.in_bits()).then_with(|| ka.cmp(kb)));
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, (key, t_uig))| RankEntry { key, t_uig, position: i + 1 })
        .collect())
}

/// T(UIG) of every record in `window`, keyed for [`rank_by_synergy`].
pub fn window_values(d: &Dataset, window: Window, mode: PolicyMode) -> Result<Vec<(RecordKey, Option<EntropyValue>)>> {
    d.in_window(window).into_iter().map(|r| Ok((r.key(), r.t_uig(d.unit(), mode)?))).collect()
}

/// The window-ordered T(UIG) series of one key.
pub fn t_series(d: &Dataset, key: &RecordKey, mode: PolicyMode) -> Result<Vec<SeriesPoint>> {
    d.series(key).into_iter().map(|r| Ok((r.window, r.t_uig(d.unit(), mode)?))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendClass {
    TowardZero,
    AwayFromZero,
    Mixed,
    InsufficientData,
}

impl TrendClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TrendClass::TowardZero => "toward-zero",
            TrendClass::AwayFromZero => "away-from-zero",
            TrendClass::Mixed => "mixed",
            TrendClass::InsufficientData => "insufficient-data",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSummary {
    pub key: RecordKey,
    pub first: Option<SeriesPoint>,
    pub last: Option<SeriesPoint>,
    /// |T_last| − |T_first| in the series' unit.
    pub abs_delta: Option<f64>,
    /// Least-squares slope of |T| against window midpoint year.
    pub abs_slope: Option<f64>,
    pub classification: TrendClass,
}

/// Slope of `ys` on `xs`. The response is centred on its first value, so a
/// constant series has a slope of exactly zero.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let y0 = ys[0];
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - y0)).sum();
    let den: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    num / den
}

/// Whether |T(UIG)| shrinks over the series.
///
/// Toward zero needs both a smaller last magnitude than first and a negative
/// least-squares slope of |T|; away from zero needs both reversed. Anything
/// else is mixed. Missing windows are dropped, not interpolated.
pub fn trend(key: &RecordKey, series: &[SeriesPoint]) -> TrendSummary {
    let unit = series.iter().find_map(|(_, t)| t.map(|t| t.unit)).unwrap_or(Unit::Bit);
    let mut points: Vec<(Window, EntropyValue)> =
        series.iter().filter_map(|&(w, t)| t.map(|t| (w, t.to(unit)))).collect();
    points.sort_by_key(|(w, _)| *w);

    if points.len() < 2 || points.first().map(|p| p.0) == points.last().map(|p| p.0) {
        return TrendSummary {
            key: key.clone(),
            first: points.first().map(|&(w, t)| (w, Some(t))),
            last: points.last().map(|&(w, t)| (w, Some(t))),
            abs_delta: None,
            abs_slope: None,
            classification: TrendClass::InsufficientData,
        };
    }
    let xs: Vec<f64> = points.iter().map(|(w, _)| w.midpoint()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.value.abs()).collect();
    let (first, last) = (ys[0], ys[ys.len() - 1]);
    let s = slope(&xs, &ys);
    let classification = match (last.partial_cmp(&first), s.partial_cmp(&0.0)) {
        (Some(Ordering::Less), Some(Ordering::Less)) => TrendClass::TowardZero,
        (Some(Ordering::Greater), Some(Ordering::Greater)) => TrendClass::AwayFromZero,
        _ => TrendClass::Mixed,
    };
    TrendSummary {
        key: key.clone(),
        first: Some((points[0].0, Some(points[0].1))),
        last: Some((points[points.len() - 1].0, Some(points[points.len() - 1].1))),
        abs_delta: Some(last - first),
        abs_slope: Some(s),
        classification,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioDelta {
    pub window: Window,
    pub a: EntropyValue,
    pub b: EntropyValue,
    /// B − A, in A's unit.
    pub difference: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SignPattern {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioComparison {
    pub deltas: Vec<ScenarioDelta>,
    pub pattern: SignPattern,
}

/// Window-by-window B − A over the windows both series have values for.
pub fn compare_scenarios(a: &[SeriesPoint], b: &[SeriesPoint]) -> Result<ScenarioComparison> {
    let mut deltas: Vec<ScenarioDelta> = a
        .iter()
        .filter_map(|&(w, ta)| {
            let ta = ta?;
            let tb = b.iter().find(|(wb, _)| *wb == w)?.1?;
            let difference = tb.to(ta.unit).value - ta.value;
            Some(ScenarioDelta { window: w, a: ta, b: tb, difference })
        })
        .collect();
    if deltas.is_empty() {
        return Err(Error::NoOverlap);
    }
    deltas.sort_by_key(|d| d.window);
    let mut pattern = SignPattern::default();
    for d in &deltas {
        match d.difference.partial_cmp(&0.0) {
            Some(Ordering::Greater) => pattern.positive += 1,
            Some(Ordering::Less) => pattern.negative += 1,
            _ => pattern.zero += 1,
        }
    }
    Ok(ScenarioComparison { deltas, pattern })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilateralPoint {
    pub window: Window,
    pub t_ui: EntropyValue,
    pub t_ug: EntropyValue,
    pub t_ig: EntropyValue,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct BilateralSeries {
    pub points: Vec<BilateralPoint>,
}

fn counts_only(r: &CountryWindowRecord) -> Result<()> {
    match r.payload {
        Payload::Counts { .. } | Payload::Missing => Ok(()),
        ref p => Err(Error::PayloadUnavailable {
            key: format!("{} {}", r.key(), r.window),
            reason: format!("{} payload carries no retrieval counts", p.kind()),
        }),
    }
}

/// T(U,I), T(U,G) and T(I,G) per window from the pairwise marginals of the
/// cell distribution. Missing windows are skipped.
pub fn bilateral_decomposition(records: &[&CountryWindowRecord], mode: PolicyMode) -> Result<BilateralSeries> {
    let mut points = Vec::new();
    for r in records {
        counts_only(r)?;
        if r.payload == Payload::Missing {
            continue;
        }
        let (cells, policy) = r.cells(mode)?;
        let j = cells_to_joint3(&cells, policy)?;
        let t = |a, b| transmission2(&j.pair(a, b), Unit::Bit);
        points.push(BilateralPoint {
            window: r.window,
            t_ui: t(Axis::U, Axis::I),
            t_ug: t(Axis::U, Axis::G),
            t_ig: t(Axis::I, Axis::G),
        });
    }
    points.sort_by_key(|p| p.window);
    Ok(BilateralSeries { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthPoint {
    pub window: Window,
    pub u0: u64,
    pub i0: u64,
    pub g0: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GrowthSeries {
    pub points: Vec<GrowthPoint>,
}

/// Inclusive U, I and G output per window, in window order.
pub fn growth_series(records: &[&CountryWindowRecord]) -> Result<GrowthSeries> {
    let mut points = Vec::new();
    for r in records {
        counts_only(r)?;
        if let Payload::Counts { counts, .. } = r.payload {
            points.push(GrowthPoint { window: r.window, u0: counts.u0, i0: counts.i0, g0: counts.g0 });
        }
    }
    points.sort_by_key(|p| p.window);
    Ok(GrowthSeries { points })
}
