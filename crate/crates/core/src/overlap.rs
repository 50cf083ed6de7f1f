//! Conversion between multiply-counted retrieval totals and disjoint Venn cells.
//!
//! A retrieval such as `#1 AND #2` counts every document carrying both a
//! university and an industry address, including those that also carry a
//! governmental one. The probability space, however, needs each document in
//! exactly one region. [`to_exclusive`] peels the overlaps apart and
//! [`to_inclusive`] rebuilds the retrieval totals from the cells.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Retrieval totals in which overlapping documents are counted once per matching set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InclusiveCounts {
    pub u0: u64,
    pub i0: u64,
    pub g0: u64,
    pub ui0: u64,
    pub ug0: u64,
    pub ig0: u64,
    pub uig0: u64,
}

/// The seven disjoint regions of the U/I/G Venn diagram.
///
/// `none` holds documents in the universe that match no sector at all. It is
/// never produced by [`to_exclusive`]; callers supply it from an external
/// country total when they want it in the probability space.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExclusiveCells {
    pub u: u64,
    pub i: u64,
    pub g: u64,
    pub ui: u64,
    pub ug: u64,
    pub ig: u64,
    pub uig: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub none: Option<u64>,
}

impl InclusiveCounts {
    pub fn new(u0: u64, i0: u64, g0: u64, ui0: u64, ug0: u64, ig0: u64, uig0: u64) -> Self {
        InclusiveCounts { u0, i0, g0, ui0, ug0, ig0, uig0 }
    }

    pub fn as_array(&self) -> [u64; 7] {
        [self.u0, self.i0, self.g0, self.ui0, self.ug0, self.ig0, self.uig0]
    }

    /// Size of the union U ∪ I ∪ G by inclusion–exclusion, or `None` if the
    /// counts are inconsistent enough to make it negative.
    pub fn union_total(&self) -> Option<u64> {
        let plus = self.u0 as i128 + self.i0 as i128 + self.g0 as i128 + self.uig0 as i128;
        let minus = self.ui0 as i128 + self.ug0 as i128 + self.ig0 as i128;
        u64::try_from(plus - minus).ok()
    }
}

impl ExclusiveCells {
    pub fn new(u: u64, i: u64, g: u64, ui: u64, ug: u64, ig: u64, uig: u64) -> Self {
        ExclusiveCells { u, i, g, ui, ug, ig, uig, none: None }
    }

    pub fn with_none(mut self, none: u64) -> Self {
        self.none = Some(none);
        self
    }

    /// Number of documents in at least one sector.
    pub fn union_total(&self) -> u64 {
        self.u + self.i + self.g + self.ui + self.ug + self.ig + self.uig
    }
}

/// Which cell of the correction came out negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    U,
    I,
    G,
    UI,
    UG,
    IG,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Cell::U => "U",
            Cell::I => "I",
            Cell::G => "G",
            Cell::UI => "UI",
            Cell::UG => "UG",
            Cell::IG => "IG",
        };
        f.write_str(name)
    }
}

fn cell(which: Cell, value: i128) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::NegativeCell { cell: which, value })
}

/// Removes double counting from retrieval totals.
///
/// Fails with [`Error::NegativeCell`] when the totals cannot come from any
/// set of documents; nothing is clamped.
pub fn to_exclusive(c: &InclusiveCounts) -> Result<ExclusiveCells> {
    let [u0, i0, g0, ui0, ug0, ig0, uig0] = c.as_array().map(i128::from);
    Ok(ExclusiveCells {
        u: cell(Cell::U, u0 - ui0 - ug0 + uig0)?,
        i: cell(Cell::I, i0 - ui0 - ig0 + uig0)?,
        g: cell(Cell::G, g0 - ig0 - ug0 + uig0)?,
        ui: cell(Cell::UI, ui0 - uig0)?,
        ug: cell(Cell::UG, ug0 - uig0)?,
        ig: cell(Cell::IG, ig0 - uig0)?,
        uig: c.uig0,
        none: None,
    })
}

/// Rebuilds the retrieval totals a set of disjoint cells would produce.
pub fn to_inclusive(cells: &ExclusiveCells) -> InclusiveCounts {
    let ExclusiveCells { u, i, g, ui, ug, ig, uig, .. } = *cells;
    InclusiveCounts {
        u0: u + ui + ug + uig,
        i0: i + ui + ig + uig,
        g0: g + ug + ig + uig,
        ui0: ui + uig,
        ug0: ug + uig,
        ig0: ig + uig,
        uig0: uig,
    }
}

/// A broken consistency rule in a set of retrieval totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The failing inequality, e.g. `ui0 > min(u0,i0)`.
    pub rule: String,
    /// The values involved.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.rule, self.detail)
    }
}

/// Lists every way `c` fails to describe a real set of documents.
///
/// An empty result means the subset inequalities hold and [`to_exclusive`]
/// succeeds.
pub fn validate(c: &InclusiveCounts) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut pair = |name: &str, a: &str, b: &str, v: u64, x: u64, y: u64| {
        if v > x.min(y) {
            out.push(Violation {
                rule: format!("{name} > min({a},{b})"),
                detail: format!("{name}={v}, {a}={x}, {b}={y}"),
            });
        }
    };
    pair("ui0", "u0", "i0", c.ui0, c.u0, c.i0);
    pair("ug0", "u0", "g0", c.ug0, c.u0, c.g0);
    pair("ig0", "i0", "g0", c.ig0, c.i0, c.g0);

    if c.uig0 > c.ui0.min(c.ug0).min(c.ig0) {
        out.push(Violation {
            rule: "uig0 > min(ui0,ug0,ig0)".to_string(),
            detail: format!("uig0={}, ui0={}, ug0={}, ig0={}", c.uig0, c.ui0, c.ug0, c.ig0),
        });
    }

    if let Err(Error::NegativeCell { cell, value }) = to_exclusive(c) {
        out.push(Violation {
            rule: format!("corrected cell {cell} < 0"),
            detail: format!("{cell}={value}"),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sector membership of one synthetic document, as (u, i, g) flags.
    type Doc = (bool, bool, bool);

    // Oracle: count a document multiset the way the boolean retrieval does.
    fn count_inclusive(docs: &[Doc]) -> InclusiveCounts {
        let n = |f: &dyn Fn(&Doc) -> bool| docs.iter().filter(|d| f(d)).count() as u64;
        InclusiveCounts {
            u0: n(&|d| d.0),
            i0: n(&|d| d.1),
            g0: n(&|d| d.2),
            ui0: n(&|d| d.0 && d.1),
            ug0: n(&|d| d.0 && d.2),
            ig0: n(&|d| d.1 && d.2),
            uig0: n(&|d| d.0 && d.1 && d.2),
        }
    }

    fn multiset(cells: [(Doc, usize); 7]) -> Vec<Doc> {
        cells.iter().flat_map(|&(d, k)| std::iter::repeat_n(d, k)).collect()
    }

    fn synthetic() -> Vec<Doc> {
        multiset([
            ((true, false, false), 5),
            ((false, true, false), 3),
            ((false, false, true), 2),
            ((true, true, false), 4),
            ((true, false, true), 1),
            ((false, true, true), 2),
            ((true, true, true), 1),
        ])
    }

    #[test]
    fn enumeration_oracle_matches_worked_example() {
        let counts = count_inclusive(&synthetic());
        assert_eq!(counts, InclusiveCounts::new(11, 10, 6, 5, 2, 3, 1));
    }

    #[test]
    fn corrects_worked_example() {
        let cells = to_exclusive(&InclusiveCounts::new(11, 10, 6, 5, 2, 3, 1)).unwrap();
        assert_eq!(cells, ExclusiveCells::new(5, 3, 2, 4, 1, 2, 1));
        assert_eq!(cells.none, None);
    }

    #[test]
    fn zero_overlap_is_identity() {
        let cells = to_exclusive(&InclusiveCounts::new(7, 4, 9, 0, 0, 0, 0)).unwrap();
        assert_eq!(cells, ExclusiveCells::new(7, 4, 9, 0, 0, 0, 0));
    }

    #[test]
    fn fully_overlapping_pair() {
        let cells = to_exclusive(&InclusiveCounts::new(3, 3, 0, 3, 0, 0, 0)).unwrap();
        assert_eq!(cells, ExclusiveCells::new(0, 0, 0, 3, 0, 0, 0));
    }

    #[test]
    fn inclusive_of_worked_example() {
        let counts = to_inclusive(&ExclusiveCells::new(5, 3, 2, 4, 1, 2, 1));
        assert_eq!(counts, count_inclusive(&synthetic()));
    }

    #[test]
    fn inclusive_edge_cases() {
        assert_eq!(to_inclusive(&ExclusiveCells::default()), InclusiveCounts::default());
        assert_eq!(
            to_inclusive(&ExclusiveCells::new(0, 0, 0, 0, 0, 0, 7)),
            InclusiveCounts::new(7, 7, 7, 7, 7, 7, 7)
        );
    }

    #[test]
    fn negative_cell_is_an_error() {
        let err = to_exclusive(&InclusiveCounts::new(2, 5, 5, 2, 2, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::NegativeCell { cell: Cell::U, value: -2 }));
    }

    #[test]
    fn validate_pair_violation() {
        let v = validate(&InclusiveCounts::new(2, 2, 2, 5, 0, 0, 0));
        assert!(v.iter().any(|x| x.rule == "ui0 > min(u0,i0)"), "{v:?}");
        assert!(v[0].detail.contains("ui0=5"));
    }

    #[test]
    fn validate_triple_violation() {
        let v = validate(&InclusiveCounts::new(20, 20, 20, 4, 4, 4, 5));
        assert!(v.iter().any(|x| x.rule == "uig0 > min(ui0,ug0,ig0)"), "{v:?}");
    }

    #[test]
    fn validate_clean_counts() {
        assert!(validate(&InclusiveCounts::default()).is_empty());
        assert!(validate(&InclusiveCounts::new(11, 10, 6, 5, 2, 3, 1)).is_empty());
    }

    #[test]
    fn validate_reports_negative_correction() {
        // Pairwise rules hold, but U-only would be negative.
        let v = validate(&InclusiveCounts::new(2, 5, 5, 2, 2, 0, 0));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "corrected cell U < 0");
    }

    #[test]
    fn union_total_matches_cells() {
        let c = InclusiveCounts::new(11, 10, 6, 5, 2, 3, 1);
        assert_eq!(c.union_total(), Some(18));
        assert_eq!(to_exclusive(&c).unwrap().union_total(), 18);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn doc() -> impl Strategy<Value = Doc> {
            (any::<bool>(), any::<bool>(), any::<bool>())
                .prop_filter("non-empty sector set", |d| d.0 || d.1 || d.2)
        }

        fn cells() -> impl Strategy<Value = ExclusiveCells> {
            proptest::array::uniform7(0u64..=1_000_000_000)
                .prop_map(|c| ExclusiveCells::new(c[0], c[1], c[2], c[3], c[4], c[5], c[6]))
        }

        proptest! {
            #[test]
            fn round_trip(x in cells()) {
                prop_assert_eq!(to_exclusive(&to_inclusive(&x)).unwrap(), x);
            }

            #[test]
            fn recovers_histogram(docs in proptest::collection::vec(doc(), 0..200)) {
                let cells = to_exclusive(&count_inclusive(&docs)).unwrap();
                let n = |d: Doc| docs.iter().filter(|&&x| x == d).count() as u64;
                prop_assert_eq!(cells, ExclusiveCells::new(
                    n((true, false, false)), n((false, true, false)), n((false, false, true)),
                    n((true, true, false)), n((true, false, true)), n((false, true, true)),
                    n((true, true, true)),
                ));
                prop_assert!(validate(&count_inclusive(&docs)).is_empty());
            }

            #[test]
            fn union_is_conserved(x in cells()) {
                prop_assert_eq!(to_inclusive(&x).union_total(), Some(x.union_total()));
            }
        }
    }
}
