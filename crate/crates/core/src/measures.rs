//! Shannon entropy, transmission and the signed three-way configurational
//! information over the joint U/I/G membership distribution.
//!
//! Entropies are computed in bits with base-2 logarithms; [`Unit`] is applied
//! only when a value is handed out. Entropy sums are accumulated over sorted terms
//! so that every measure is an exact symmetric function of its cells: relabelling
//! the axes of a [`Joint3`] gives bit-identical results.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::ExclusiveCells;

/// Tolerance for a distribution's total mass.
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Bit,
    Mbit,
    Nat,
}

impl Unit {
    /// How many of this unit make up one bit.
    pub fn per_bit(self) -> f64 {
        match self {
            Unit::Bit => 1.0,
            Unit::Mbit => 1000.0,
            Unit::Nat => std::f64::consts::LN_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Bit => "bit",
            Unit::Mbit => "mbit",
            Unit::Nat => "nat",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bit" | "bits" => Ok(Unit::Bit),
            "mbit" | "mbits" => Ok(Unit::Mbit),
            "nat" | "nats" => Ok(Unit::Nat),
            other => Err(format!("unknown unit '{other}' (expected bit, mbit or nat)")),
        }
    }
}

/// An amount of information tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub value: f64,
    pub unit: Unit,
}

impl EntropyValue {
    pub fn new(value: f64, unit: Unit) -> Self {
        EntropyValue { value, unit }
    }

    pub fn bits(value: f64) -> Self {
        EntropyValue { value, unit: Unit::Bit }
    }

    pub fn in_bits(&self) -> f64 {
        if self.unit == Unit::Bit {
            self.value
        } else {
            self.value / self.unit.per_bit()
        }
    }

    pub fn to(self, unit: Unit) -> Self {
        convert_unit(self, unit)
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", format_sig(self.value, 4), self.unit)
    }
}

/// Rescales `v` into `target`. Same-unit conversion returns `v` untouched.
pub fn convert_unit(v: EntropyValue, target: Unit) -> EntropyValue {
    if v.unit == target {
        return v;
    }
    EntropyValue { value: v.in_bits() * target.per_bit(), unit: target }
}

/// Formats `x` with `digits` significant figures, dropping trailing zeros
/// after the decimal point (`451.0` prints as `451`, `-109.52` as `-109.5`).
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i64 + 1;
    let decimals = (digits as i64 - magnitude).max(0) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn check_mass(p: &mut [f64]) -> Result<()> {
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
    }
    let total: f64 = p.iter().sum();
    let drift = (total - 1.0).abs();
    if drift > MASS_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("mass sums to {total}, not 1")));
    }
    if drift > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    }
    if let Some(bad) = p.iter().find(|x| **x > 1.0) {
        return Err(Error::InvalidDistribution(format!("entry {bad} exceeds 1")));
    }
    Ok(())
}

/// Sums after sorting, so the result does not depend on term order.
fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn entropy_bits(p: &[f64]) -> f64 {
    let terms = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).collect();
    sorted_sum(terms).max(0.0)
}

/// A discrete distribution over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        let mut p = probabilities;
        if p.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        check_mass(&mut p)?;
        Ok(ProbDist(p))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }
}

/// A joint distribution of two discrete variables, rows indexing the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint2 {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

/// Which variable of a [`Joint2`] is being conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Given {
    /// Condition on the row variable: H(col | row).
    Rows,
    /// Condition on the column variable: H(row | col).
    Cols,
}

impl Joint2 {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution("empty table".into()));
        }
        if table.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged table".into()));
        }
        let mut p: Vec<f64> = table.into_iter().flatten().collect();
        check_mass(&mut p)?;
        Ok(Joint2 { rows, cols, p })
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.p[row * self.cols + col]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn cells(&self) -> &[f64] {
        &self.p
    }

    pub fn row_marginal(&self) -> ProbDist {
        let m = (0..self.rows)
            .map(|r| sorted_sum((0..self.cols).map(|c| self.get(r, c)).collect()))
            .collect();
        ProbDist(m)
    }

    pub fn col_marginal(&self) -> ProbDist {
        let m = (0..self.cols)
            .map(|c| sorted_sum((0..self.rows).map(|r| self.get(r, c)).collect()))
            .collect();
        ProbDist(m)
    }

    pub fn transpose(&self) -> Joint2 {
        let mut p = Vec::with_capacity(self.p.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                p.push(self.get(r, c));
            }
        }
        Joint2 { rows: self.cols, cols: self.rows, p }
    }
}

/// One of the three sector-membership variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    U,
    I,
    G,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::U, Axis::I, Axis::G];

    fn shift(self) -> usize {
        match self {
            Axis::U => 2,
            Axis::I => 1,
            Axis::G => 0,
        }
    }
}

/// Joint distribution of binary U, I, G membership.
///
/// Cell `(u, i, g)` lives at index `u << 2 | i << 1 | g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Joint3 {
    p: [f64; 8],
}

impl Joint3 {
    pub fn new(p: [f64; 8]) -> Result<Self> {
        let mut p = p;
        check_mass(&mut p)?;
        Ok(Joint3 { p })
    }

    pub fn index(u: bool, i: bool, g: bool) -> usize {
        (usize::from(u) << 2) | (usize::from(i) << 1) | usize::from(g)
    }

    pub fn get(&self, u: bool, i: bool, g: bool) -> f64 {
        self.p[Self::index(u, i, g)]
    }

    pub fn cells(&self) -> &[f64; 8] {
        &self.p
    }

    fn bit(idx: usize, axis: Axis) -> usize {
        (idx >> axis.shift()) & 1
    }

    pub fn marginal(&self, axis: Axis) -> ProbDist {
        let mut parts = [Vec::new(), Vec::new()];
        for (idx, &x) in self.p.iter().enumerate() {
            parts[Self::bit(idx, axis)].push(x);
        }
        let [zero, one] = parts;
        ProbDist(vec![sorted_sum(zero), sorted_sum(one)])
    }

    /// The 2×2 marginal of `(rows, cols)`; the axes must differ.
    pub fn pair(&self, rows: Axis, cols: Axis) -> Joint2 {
        assert_ne!(rows, cols, "pair marginal needs two distinct axes");
        let mut p = vec![Vec::new(); 4];
        for (idx, &x) in self.p.iter().enumerate() {
            p[Self::bit(idx, rows) * 2 + Self::bit(idx, cols)].push(x);
        }
        Joint2 { rows: 2, cols: 2, p: p.into_iter().map(sorted_sum).collect() }
    }

    /// Relabels axes: the result's `(u, i, g)` axes are `order[0..3]` of `self`.
    pub fn permuted(&self, order: [Axis; 3]) -> Joint3 {
        let mut p = [0.0; 8];
        for (idx, &x) in self.p.iter().enumerate() {
            let b = |k: usize| Self::bit(idx, order[k]) == 1;
            p[Self::index(b(0), b(1), b(2))] = x;
        }
        Joint3 { p }
    }
}

/// Shannon entropy of a single distribution.
pub fn entropy(d: &ProbDist, unit: Unit) -> EntropyValue {
    EntropyValue::bits(entropy_bits(&d.0)).to(unit)
}

/// Anything whose cells form one probability distribution.
pub trait JointTable {
    fn mass(&self) -> &[f64];
}

impl JointTable for ProbDist {
    fn mass(&self) -> &[f64] {
        &self.0
    }
}

impl JointTable for Joint2 {
    fn mass(&self) -> &[f64] {
        &self.p
    }
}

impl JointTable for Joint3 {
    fn mass(&self) -> &[f64] {
        &self.p
    }
}

/// Entropy over all cells of a joint table.
pub fn joint_entropy<T: JointTable + ?Sized>(j: &T, unit: Unit) -> EntropyValue {
    EntropyValue::bits(entropy_bits(j.mass())).to(unit)
}

fn conditional_bits(j: &Joint2, given: Given) -> f64 {
    let conditioner = match given {
        Given::Rows => j.row_marginal(),
        Given::Cols => j.col_marginal(),
    };
    (entropy_bits(&j.p) - entropy_bits(&conditioner.0)).max(0.0)
}

/// H(Y|X) = H(X,Y) − H(X), with X chosen by `given`.
pub fn conditional_entropy(j: &Joint2, given: Given, unit: Unit) -> EntropyValue {
    EntropyValue::bits(conditional_bits(j, given)).to(unit)
}

fn transmission_bits(j: &Joint2) -> f64 {
    let hx = entropy_bits(&j.row_marginal().0);
    let hy = entropy_bits(&j.col_marginal().0);
    hx + hy - entropy_bits(&j.p)
}

/// Two-way mutual information T(X,Y) = H(X) + H(Y) − H(X,Y).
pub fn transmission2(j: &Joint2, unit: Unit) -> EntropyValue {
    EntropyValue::bits(transmission_bits(j)).to(unit)
}

/// T(a,b | given) = H(a,given) + H(b,given) − H(given) − H(a,b,given).
pub fn conditional_transmission(j: &Joint3, a: Axis, b: Axis, given: Axis, unit: Unit) -> EntropyValue {
    let h_ag = entropy_bits(&j.pair(a, given).p);
    let h_bg = entropy_bits(&j.pair(b, given).p);
    let h_g = entropy_bits(&j.marginal(given).0);
    let h_all = entropy_bits(&j.p);
    EntropyValue::bits(h_ag + h_bg - h_g - h_all).to(unit)
}

fn configurational_bits(j: &Joint3) -> f64 {
    let singles = sorted_sum(Axis::ALL.iter().map(|&a| entropy_bits(&j.marginal(a).0)).collect());
    let pairs = sorted_sum(vec![
        entropy_bits(&j.pair(Axis::U, Axis::I).p),
        entropy_bits(&j.pair(Axis::U, Axis::G).p),
        entropy_bits(&j.pair(Axis::I, Axis::G).p),
    ]);
    singles - pairs + entropy_bits(&j.p)
}

/// Signed three-dimensional mutual information T(UIG).
///
/// Negative values mean the three-way configuration reduces uncertainty
/// relative to the bilateral relations.
pub fn configurational_information(j: &Joint3, unit: Unit) -> EntropyValue {
    EntropyValue::bits(configurational_bits(j)).to(unit)
}

/// Which documents make up the probability space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniversePolicy {
    /// Only documents in at least one sector; the (0,0,0) cell is empty.
    #[default]
    UnionOnly,
    /// A known universe size; documents outside every sector fill (0,0,0).
    WithNone { total: u64 },
}

/// Turns disjoint cell counts into a joint membership distribution.
pub fn cells_to_joint3(cells: &ExclusiveCells, policy: UniversePolicy) -> Result<Joint3> {
    let union = cells.union_total();
    let (n, outside) = match policy {
        UniversePolicy::UnionOnly => (union, 0),
        UniversePolicy::WithNone { total } => {
            if total < union {
                return Err(Error::UniverseTooSmall { total, union });
            }
            if let Some(none) = cells.none {
                if union + none != total {
                    return Err(Error::InvalidDistribution(format!(
                        "none-of-three cell {none} disagrees with total {total} - union {union}"
                    )));
                }
            }
            (total, total - union)
        }
    };
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    let n = n as f64;
    let mut p = [0.0; 8];
    let mut put = |u, i, g, count: u64| p[Joint3::index(u, i, g)] = count as f64 / n;
    put(false, false, false, outside);
    put(true, false, false, cells.u);
    put(false, true, false, cells.i);
    put(false, false, true, cells.g);
    put(true, true, false, cells.ui);
    put(true, false, true, cells.ug);
    put(false, true, true, cells.ig);
    put(true, true, true, cells.uig);
    Joint3::new(p)
}

/// The seven entropies of the U/I/G system as plain numbers in one unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyTerms {
    pub h_u: f64,
    pub h_i: f64,
    pub h_g: f64,
    pub h_ui: f64,
    pub h_ug: f64,
    pub h_ig: f64,
    pub h_uig: f64,
}

impl EntropyTerms {
    pub fn as_array(&self) -> [f64; 7] {
        [self.h_u, self.h_i, self.h_g, self.h_ui, self.h_ug, self.h_ig, self.h_uig]
    }

    /// H(U) + H(I) + H(G) − H(UI) − H(UG) − H(IG) + H(UIG), in the terms' own unit.
    pub fn configurational(&self) -> f64 {
        self.h_u + self.h_i + self.h_g - self.h_ui - self.h_ug - self.h_ig + self.h_uig
    }
}

/// Everything reported for one country and window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorSet {
    pub h_u: EntropyValue,
    pub h_i: EntropyValue,
    pub h_g: EntropyValue,
    pub h_ui: EntropyValue,
    pub h_ug: EntropyValue,
    pub h_ig: EntropyValue,
    pub h_uig: EntropyValue,
    pub t_ui: EntropyValue,
    pub t_ug: EntropyValue,
    pub t_ig: EntropyValue,
    pub t_uig: EntropyValue,
}

/// Input to [`indicator_set`].
#[derive(Debug, Clone, Copy)]
pub enum IndicatorSource {
    Cells(ExclusiveCells, UniversePolicy),
    Entropies(EntropyTerms, Unit),
}

impl IndicatorSet {
    fn from_terms(h: EntropyTerms, unit: Unit) -> Self {
        let b = |x| EntropyValue::new(x, unit);
        IndicatorSet {
            h_u: b(h.h_u),
            h_i: b(h.h_i),
            h_g: b(h.h_g),
            h_ui: b(h.h_ui),
            h_ug: b(h.h_ug),
            h_ig: b(h.h_ig),
            h_uig: b(h.h_uig),
            t_ui: b(h.h_u + h.h_i - h.h_ui),
            t_ug: b(h.h_u + h.h_g - h.h_ug),
            t_ig: b(h.h_i + h.h_g - h.h_ig),
            t_uig: b(h.configurational()),
        }
    }

    /// The seven entropies, in bits.
    pub fn entropies(&self) -> EntropyTerms {
        EntropyTerms {
            h_u: self.h_u.in_bits(),
            h_i: self.h_i.in_bits(),
            h_g: self.h_g.in_bits(),
            h_ui: self.h_ui.in_bits(),
            h_ug: self.h_ug.in_bits(),
            h_ig: self.h_ig.in_bits(),
            h_uig: self.h_uig.in_bits(),
        }
    }

    /// All eleven fields in order H(U), H(I), H(G), H(UI), H(UG), H(IG), H(UIG),
    /// T(UI), T(UG), T(IG), T(UIG).
    pub fn fields(&self) -> [EntropyValue; 11] {
        [
            self.h_u, self.h_i, self.h_g, self.h_ui, self.h_ug, self.h_ig, self.h_uig, self.t_ui,
            self.t_ug, self.t_ig, self.t_uig,
        ]
    }

    pub fn to(&self, unit: Unit) -> IndicatorSet {
        let [h_u, h_i, h_g, h_ui, h_ug, h_ig, h_uig, t_ui, t_ug, t_ig, t_uig] =
            self.fields().map(|v| v.to(unit));
        IndicatorSet { h_u, h_i, h_g, h_ui, h_ug, h_ig, h_uig, t_ui, t_ug, t_ig, t_uig }
    }
}

/// Computes all indicators, either from cell counts or from seven given entropies.
pub fn indicator_set(source: IndicatorSource) -> Result<IndicatorSet> {
    match source {
        IndicatorSource::Entropies(h, unit) => {
            if h.as_array().iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidDistribution("non-finite entropy value".into()));
            }
            // The combinations are linear, so they are formed in the input unit
            // and the given entropies are kept exactly as supplied.
            Ok(IndicatorSet::from_terms(h, unit))
        }
        IndicatorSource::Cells(cells, policy) => {
            let j = cells_to_joint3(&cells, policy)?;
            let hm = |a: Axis| entropy_bits(&j.marginal(a).0);
            let hp = |a: Axis, b: Axis| entropy_bits(&j.pair(a, b).p);
            let h = EntropyTerms {
                h_u: hm(Axis::U),
                h_i: hm(Axis::I),
                h_g: hm(Axis::G),
                h_ui: hp(Axis::U, Axis::I),
                h_ug: hp(Axis::U, Axis::G),
                h_ig: hp(Axis::I, Axis::G),
                h_uig: entropy_bits(&j.p),
            };
            let mut set = IndicatorSet::from_terms(h, Unit::Bit);
            set.t_ui = EntropyValue::bits(transmission_bits(&j.pair(Axis::U, Axis::I)));
            set.t_ug = EntropyValue::bits(transmission_bits(&j.pair(Axis::U, Axis::G)));
            set.t_ig = EntropyValue::bits(transmission_bits(&j.pair(Axis::I, Axis::G)));
            set.t_uig = EntropyValue::bits(configurational_bits(&j));
            Ok(set)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= EPS
    }

    fn j2(rows: &[&[f64]]) -> Joint2 {
        Joint2::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn j3(cells: &[((bool, bool, bool), f64)]) -> Joint3 {
        let mut p = [0.0; 8];
        for &((u, i, g), x) in cells {
            p[Joint3::index(u, i, g)] = x;
        }
        Joint3::new(p).unwrap()
    }

    // Hand-evaluated -Σ p log2 p for the [[0.4,0.1],[0.1,0.4]] table.
    fn h_correlated_table() -> f64 {
        -(2.0 * 0.4 * 0.4f64.log2() + 2.0 * 0.1 * 0.1f64.log2())
    }

    #[test]
    fn entropy_examples() {
        let h = |p: &[f64]| entropy(&ProbDist::new(p.to_vec()).unwrap(), Unit::Bit).value;
        assert!(close(h(&[0.5, 0.5]), 1.0));
        assert_eq!(h(&[1.0, 0.0]), 0.0);
        assert!(close(h(&[0.5, 0.25, 0.25]), 1.5));
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![1.5, -0.5]).is_err());
        assert!(ProbDist::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbDist::new(vec![]).is_err());
        assert!(Joint2::new(vec![vec![0.5], vec![0.25, 0.25]]).is_err());
        assert!(Joint3::new([0.2; 8]).is_err());
    }

    #[test]
    fn renormalizes_small_drift() {
        let d = ProbDist::new(vec![0.5, 0.5 + 1e-12]).unwrap();
        let total: f64 = d.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn joint_entropy_examples() {
        assert!(close(joint_entropy(&j2(&[&[0.25, 0.25], &[0.25, 0.25]]), Unit::Bit).value, 2.0));
        assert!(close(joint_entropy(&j2(&[&[0.5, 0.0], &[0.0, 0.5]]), Unit::Bit).value, 1.0));
        let uniform = Joint3::new([0.125; 8]).unwrap();
        assert!(close(joint_entropy(&uniform, Unit::Bit).value, 3.0));
    }

    #[test]
    fn conditional_entropy_examples() {
        let c = |t: &Joint2| conditional_entropy(t, Given::Rows, Unit::Bit).value;
        assert!(close(c(&j2(&[&[0.25, 0.25], &[0.25, 0.25]])), 1.0));
        assert!(close(c(&j2(&[&[0.5, 0.0], &[0.0, 0.5]])), 0.0));
        let t = j2(&[&[0.4, 0.1], &[0.1, 0.4]]);
        let expected = h_correlated_table() - 1.0;
        assert!(close(c(&t), expected));
        assert!((c(&t) - 0.721928).abs() < 1e-6);
    }

    #[test]
    fn transmission_examples() {
        let t = |t: &Joint2| transmission2(t, Unit::Bit).value;
        assert!(close(t(&j2(&[&[0.25, 0.25], &[0.25, 0.25]])), 0.0));
        assert!(close(t(&j2(&[&[0.5, 0.0], &[0.0, 0.5]])), 1.0));
        let corr = j2(&[&[0.4, 0.1], &[0.1, 0.4]]);
        assert!(close(t(&corr), 2.0 - h_correlated_table()));
        assert!((t(&corr) - 0.278072).abs() < 1e-6);
    }

    #[test]
    fn configurational_examples() {
        let t = |j: &Joint3| configurational_information(j, Unit::Bit).value;
        let copies = j3(&[((false, false, false), 0.5), ((true, true, true), 0.5)]);
        assert!(close(t(&copies), 1.0));
        let xor = j3(&[
            ((false, false, false), 0.25),
            ((false, true, true), 0.25),
            ((true, false, true), 0.25),
            ((true, true, false), 0.25),
        ]);
        assert!(close(t(&xor), -1.0));
        assert!(close(t(&Joint3::new([0.125; 8]).unwrap()), 0.0));
    }

    #[test]
    fn cells_to_joint_examples() {
        let j = cells_to_joint3(&ExclusiveCells::new(1, 1, 1, 0, 0, 0, 0), UniversePolicy::UnionOnly)
            .unwrap();
        for (u, i, g) in [(true, false, false), (false, true, false), (false, false, true)] {
            assert!(close(j.get(u, i, g), 1.0 / 3.0));
        }
        assert_eq!(j.get(true, true, true), 0.0);
        assert_eq!(j.get(false, false, false), 0.0);

        let j = cells_to_joint3(&ExclusiveCells::new(0, 0, 0, 0, 0, 0, 5), UniversePolicy::UnionOnly)
            .unwrap();
        assert_eq!(j.get(true, true, true), 1.0);

        let cells = ExclusiveCells::new(5, 3, 2, 4, 1, 2, 1);
        let j = cells_to_joint3(&cells, UniversePolicy::UnionOnly).unwrap();
        assert_eq!(j.get(true, true, true), 1.0 / 18.0);
        assert_eq!(j.get(true, false, false), 5.0 / 18.0);
        assert_eq!(j.get(true, true, false), 4.0 / 18.0);
        assert_eq!(j.get(true, false, true), 1.0 / 18.0);
        assert_eq!(j.get(false, true, true), 2.0 / 18.0);
    }

    #[test]
    fn with_none_policy() {
        let cells = ExclusiveCells::new(5, 3, 2, 4, 1, 2, 1);
        let j = cells_to_joint3(&cells, UniversePolicy::WithNone { total: 36 }).unwrap();
        assert_eq!(j.get(false, false, false), 0.5);
        assert_eq!(j.get(true, false, false), 5.0 / 36.0);
        assert!(matches!(
            cells_to_joint3(&cells, UniversePolicy::WithNone { total: 10 }),
            Err(Error::UniverseTooSmall { total: 10, union: 18 })
        ));
        assert!(cells_to_joint3(&cells.with_none(18), UniversePolicy::WithNone { total: 36 }).is_ok());
        assert!(cells_to_joint3(&cells.with_none(3), UniversePolicy::WithNone { total: 36 }).is_err());
    }

    #[test]
    fn empty_universe() {
        assert!(matches!(
            cells_to_joint3(&ExclusiveCells::default(), UniversePolicy::UnionOnly),
            Err(Error::EmptyUniverse)
        ));
        assert!(cells_to_joint3(&ExclusiveCells::default(), UniversePolicy::WithNone { total: 4 }).is_ok());
    }

    #[test]
    fn indicator_set_from_usa_entropies() {
        let h = EntropyTerms {
            h_u: 254.1,
            h_i: 215.4,
            h_g: 362.9,
            h_ui: 451.0,
            h_ug: 508.6,
            h_ig: 578.1,
            h_uig: 675.4,
        };
        let set = indicator_set(IndicatorSource::Entropies(h, Unit::Mbit)).unwrap().to(Unit::Mbit);
        assert!((set.t_uig.value - -29.9).abs() < 1e-9);
        assert!((set.t_uig.value - -29.96).abs() <= 0.4);
        assert!((set.t_ui.value - 18.5).abs() < 1e-9);
        assert_eq!(set.h_ug.value, 508.6);
    }

    #[test]
    fn indicator_set_from_uk_entropies() {
        let h = EntropyTerms {
            h_u: 225.3,
            h_i: 280.3,
            h_g: 186.9,
            h_ui: 439.1,
            h_ug: 362.3,
            h_ig: 467.0,
            h_uig: 542.5,
        };
        let set = indicator_set(IndicatorSource::Entropies(h, Unit::Mbit)).unwrap();
        assert!((set.t_uig.to(Unit::Mbit).value - -33.4).abs() < 1e-9);
    }

    #[test]
    fn single_cell_universe_is_all_zero() {
        let src = IndicatorSource::Cells(ExclusiveCells::new(0, 0, 0, 0, 0, 0, 5), UniversePolicy::UnionOnly);
        let set = indicator_set(src).unwrap();
        assert!(set.fields().iter().all(|v| v.value == 0.0), "{set:?}");
    }

    #[test]
    fn cells_mode_matches_direct_evaluation() {
        // Brute force: entropies straight from the 18-document cell histogram.
        let n = 18.0;
        let h = |counts: &[f64]| -> f64 {
            counts.iter().filter(|&&c| c > 0.0).map(|&c| -(c / n) * (c / n).log2()).sum()
        };
        // u=5 i=3 g=2 ui=4 ug=1 ig=2 uig=1
        let h_u = h(&[5.0 + 4.0 + 1.0 + 1.0, 3.0 + 2.0 + 2.0]);
        let h_i = h(&[3.0 + 4.0 + 2.0 + 1.0, 5.0 + 2.0 + 1.0]);
        let h_g = h(&[2.0 + 1.0 + 2.0 + 1.0, 5.0 + 3.0 + 4.0]);
        let h_ui = h(&[5.0 + 1.0, 3.0 + 2.0, 4.0 + 1.0, 2.0]);
        let h_ug = h(&[5.0 + 4.0, 2.0 + 2.0, 1.0 + 1.0, 3.0]);
        let h_ig = h(&[3.0 + 4.0, 2.0 + 1.0, 2.0 + 1.0, 5.0]);
        let h_uig = h(&[5.0, 3.0, 2.0, 4.0, 1.0, 2.0, 1.0]);
        let src = IndicatorSource::Cells(ExclusiveCells::new(5, 3, 2, 4, 1, 2, 1), UniversePolicy::UnionOnly);
        let set = indicator_set(src).unwrap();
        assert!(close(set.h_u.value, h_u));
        assert!(close(set.h_i.value, h_i));
        assert!(close(set.h_g.value, h_g));
        assert!(close(set.h_ui.value, h_ui));
        assert!(close(set.h_ug.value, h_ug));
        assert!(close(set.h_ig.value, h_ig));
        assert!(close(set.h_uig.value, h_uig));
        assert!(close(set.t_ui.value, h_u + h_i - h_ui));
        assert!(close(set.t_uig.value, h_u + h_i + h_g - h_ui - h_ug - h_ig + h_uig));
    }

    #[test]
    fn unit_conversion() {
        assert_eq!(EntropyValue::bits(1.0).to(Unit::Mbit).value, 1000.0);
        assert_eq!(EntropyValue::new(0.0, Unit::Nat).to(Unit::Bit).value, 0.0);
        assert!((EntropyValue::bits(1.0).to(Unit::Nat).value - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!("MBIT".parse::<Unit>().unwrap(), Unit::Mbit);
        assert!("byte".parse::<Unit>().is_err());
    }

    #[test]
    fn significant_figures() {
        assert_eq!(format_sig(254.1, 4), "254.1");
        assert_eq!(format_sig(451.0, 4), "451");
        assert_eq!(format_sig(52.3649, 4), "52.36");
        assert_eq!(format_sig(-109.52, 4), "-109.5");
        assert_eq!(format_sig(1137.6, 4), "1138");
        assert_eq!(format_sig(-29.9, 4), "-29.9");
        assert_eq!(format_sig(0.0, 4), "0");
        assert_eq!(format_sig(0.000123456, 4), "0.0001235");
        assert_eq!(format_sig(-1e-12, 4), "-0.000000000001");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn normalize(w: &[f64]) -> Vec<f64> {
            let s: f64 = w.iter().sum();
            w.iter().map(|x| x / s).collect()
        }

        fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], n)
                .prop_filter("some mass", |w| w.iter().sum::<f64>() > 1e-3)
        }

        fn joint3() -> impl Strategy<Value = Joint3> {
            weights(8).prop_map(|w| {
                let p = normalize(&w);
                Joint3::new(p.try_into().unwrap()).unwrap()
            })
        }

        fn joint2() -> impl Strategy<Value = Joint2> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                weights(r * c).prop_map(move |w| {
                    let p = normalize(&w);
                    Joint2::new(p.chunks(c).map(<[f64]>::to_vec).collect()).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn entropy_bounds(w in (1usize..12).prop_flat_map(weights)) {
                let d = ProbDist::new(normalize(&w)).unwrap();
                let h = entropy(&d, Unit::Bit).value;
                prop_assert!(h >= 0.0);
                prop_assert!(h <= (w.len() as f64).log2() + EPS);
            }

            #[test]
            fn chain_rule(j in joint2()) {
                let hxy = joint_entropy(&j, Unit::Bit).value;
                let hx = entropy(&j.row_marginal(), Unit::Bit).value;
                let hy = entropy(&j.col_marginal(), Unit::Bit).value;
                prop_assert!(close(hxy, hx + conditional_entropy(&j, Given::Rows, Unit::Bit).value));
                prop_assert!(close(hxy, hy + conditional_entropy(&j, Given::Cols, Unit::Bit).value));
                let t = transmission2(&j, Unit::Bit).value;
                prop_assert!(t >= -EPS);
                prop_assert!(close(t, hx - conditional_entropy(&j, Given::Cols, Unit::Bit).value));
                prop_assert!(close(t, transmission2(&j.transpose(), Unit::Bit).value));
            }

            #[test]
            fn product_joint_has_zero_transmission(a in weights(3), b in weights(4)) {
                let (a, b) = (normalize(&a), normalize(&b));
                let table = a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect();
                let j = Joint2::new(table).unwrap();
                prop_assert!(transmission2(&j, Unit::Bit).value.abs() <= EPS);
            }

            #[test]
            fn decomposition(j in joint3()) {
                let t = configurational_information(&j, Unit::Bit).value;
                let tui = transmission2(&j.pair(Axis::U, Axis::I), Unit::Bit).value;
                let tui_g = conditional_transmission(&j, Axis::U, Axis::I, Axis::G, Unit::Bit).value;
                prop_assert!(close(t, tui - tui_g));
            }

            #[test]
            fn axis_symmetry(j in joint3()) {
                let t = configurational_information(&j, Unit::Bit).value;
                use Axis::*;
                for order in [[U, G, I], [I, U, G], [I, G, U], [G, U, I], [G, I, U]] {
                    prop_assert_eq!(configurational_information(&j.permuted(order), Unit::Bit).value, t);
                }
            }

            #[test]
            fn unit_round_trip(x in -1e6..1e6f64) {
                for unit in [Unit::Mbit, Unit::Nat] {
                    let back = EntropyValue::bits(x).to(unit).to(Unit::Bit).value;
                    prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
                }
            }

            #[test]
            fn indicator_invariants(c in proptest::array::uniform7(0u64..1000)) {
                let cells = ExclusiveCells::new(c[0], c[1], c[2], c[3], c[4], c[5], c[6]);
                prop_assume!(cells.union_total() > 0);
                let s = indicator_set(IndicatorSource::Cells(cells, UniversePolicy::UnionOnly)).unwrap();
                prop_assert!(s.t_ui.value >= -EPS && s.t_ug.value >= -EPS && s.t_ig.value >= -EPS);
                let h = s.entropies();
                prop_assert!(close(s.t_uig.value, h.configurational()));
                for (x, y, xy) in [(h.h_u, h.h_i, h.h_ui), (h.h_u, h.h_g, h.h_ug), (h.h_i, h.h_g, h.h_ig)] {
                    prop_assert!(xy >= x.max(y) - EPS && xy <= x + y + EPS);
                }
            }
        }
    }
}
