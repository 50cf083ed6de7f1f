//! Triple-Helix synergy indicators.
//!
//! Turns university/industry/government retrieval counts into disjoint Venn
//! cells ([`overlap`]), computes entropies, transmissions and the signed
//! configurational information T(UIG) ([`measures`]), loads and stores
//! country/window datasets ([`dataset`]), and ranks, trends and decomposes
//! the results ([`analysis`]). [`query`] emits the search programs that
//! produce the counts.

pub mod analysis;
pub mod dataset;
mod error;
pub mod measures;
pub mod overlap;
pub mod query;

pub use analysis::{
    bilateral_decomposition, compare_scenarios, growth_series, rank_by_synergy, t_series, trend, window_values,
    BilateralPoint, BilateralSeries, GrowthPoint, GrowthSeries, RankEntry, ScenarioComparison, ScenarioDelta,
    SeriesPoint, SignPattern, TrendClass, TrendSummary,
};
pub use dataset::{
    reference_table1, reference_table2, rounding_budget, CountryWindowRecord, Dataset, Finding, Format, Payload,
    PolicyMode, RecordKey, Window,
};
pub use error::{Error, Result};
pub use measures::{
    cells_to_joint3, conditional_entropy, conditional_transmission, configurational_information, convert_unit,
    entropy, format_sig, indicator_set, joint_entropy, transmission2, Axis, EntropyTerms, EntropyValue, IndicatorSet, Given, IndicatorSource, Joint2, Joint3,
    ProbDist, Unit, UniversePolicy,
};
pub use overlap::{to_exclusive, to_inclusive, validate, Cell, ExclusiveCells, InclusiveCounts, Violation};
pub use query::{build_plan, build_plan_with, country_groups, expand_country, PlanOptions, QueryPlan, QueryStep, StepKind};
