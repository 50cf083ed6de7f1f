//! Deterministic workloads for the benchmarks.

use helix_core::{CountryWindowRecord, Dataset, InclusiveCounts, Payload, Unit, Window};

/// Small linear congruential generator; benchmarks only need repeatable noise.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self, bound: u64) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 33) % bound
    }
}

/// Consistent inclusive counts built from random disjoint cells.
pub fn counts(seed: u64) -> InclusiveCounts {
    let mut r = Lcg(seed);
    let [u, i, g, ui, ug, ig, uig] = [0; 7].map(|_: u64| r.next(50_000));
    InclusiveCounts::new(u + ui + ug + uig, i + ui + ig + uig, g + ug + ig + uig, ui + uig, ug + uig, ig + uig, uig)
}

/// `countries` keys over eight five-year windows, all with counts payloads.
pub fn counts_dataset(countries: usize) -> Dataset {
    let mut records = Vec::with_capacity(countries * 8);
    for c in 0..countries {
        for w in 0..8 {
            let start = 1971 + 5 * w as i32;
            let window = Window::new(start, start + 4).expect("window in range");
            let counts = counts((c * 8 + w) as u64);
            records.push(CountryWindowRecord::new(
                format!("COUNTRY {c:04}"),
                "default",
                window,
                Payload::Counts { counts, total_n: None },
            ));
        }
    }
    Dataset::new(Unit::Mbit, None, records).expect("unique keys")
}
