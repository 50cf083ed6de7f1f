//! Published reference values: the 2011 static indicators for sixteen
//! country/scenario rows, and five-year T(UIG) series for 1971–2010.
//! All values in mbit.

use super::{CountryWindowRecord, Dataset, Payload, Window};
use crate::measures::{EntropyTerms, Unit};

pub const CAS_AS_G: &str = "CAS-as-G";
pub const CAS_AS_U: &str = "CAS-as-U";

// country, scenario, H(U), H(I), H(G), H(UI), H(IG), H(UG), H(UIG), T(UIG)
const TABLE1: [(&str, &str, [f64; 8]); 16] = [
    ("USA", "default", [254.1, 215.4, 362.9, 451.0, 578.1, 508.6, 675.4, -29.96]),
    ("UK", "default", [225.3, 280.3, 186.9, 439.1, 467.0, 362.3, 542.5, -33.4]),
    ("FRANCE", "default", [359.6, 299.7, 354.9, 581.5, 654.2, 611.3, 769.5, -63.17]),
    ("GERMANY", "default", [306.7, 468.8, 52.36, 598.1, 521.1, 351.4, 626.5, -16.09]),
    ("ITALY", "default", [300.6, 285.5, 476.0, 575.1, 759.1, 655.7, 894.8, -32.93]),
    ("CANADA", "default", [213.4, 321.1, 188.4, 474.1, 509.6, 361.1, 591.7, -30.1]),
    ("JAPAN", "default", [473.0, 710.5, 548.4, 1138.0, 1258.0, 940.2, 1529.0, -75.4]),
    ("BRAZIL", "default", [206.9, 455.9, 298.3, 647.3, 752.1, 444.3, 855.4, -27.11]),
    ("RUSSIA", "default", [998.1, 157.0, 972.9, 1153.0, 1120.0, 1508.0, 1595.0, -58.16]),
    ("INDIA", "default", [650.9, 480.7, 654.5, 1099.0, 1128.0, 1027.0, 1359.0, -109.5]),
    ("CHINA", CAS_AS_G, [410.5, 397.1, 604.8, 805.3, 999.0, 830.8, 1187.0, -36.01]),
    ("CHINA", CAS_AS_U, [152.2, 397.1, 252.5, 537.0, 649.2, 359.8, 724.9, -19.45]),
    ("SOUTH AFRICA", "default", [176.1, 334.5, 338.4, 495.7, 672.1, 464.4, 761.9, -21.35]),
    ("INDONESIA", "default", [492.9, 704.4, 342.4, 1120.0, 1042.0, 730.7, 1270.0, -83.17]),
    ("NETHERLANDS", "default", [172.8, 217.9, 242.1, 365.7, 459.3, 358.3, 527.6, -22.92]),
    ("SOUTH KOREA", "default", [179.8, 359.6, 190.1, 519.2, 549.3, 304.5, 620.8, -22.55]),
];

/// Windows 1971–1975 through 2006–2010.
const WINDOWS: [(i32, i32); 8] = [
    (1971, 1975),
    (1976, 1980),
    (1981, 1985),
    (1986, 1990),
    (1991, 1995),
    (1996, 2000),
    (2001, 2005),
    (2006, 2010),
];

const NA: f64 = f64::NAN;

const TABLE2: [(&str, &str, [f64; 8]); 16] = [
    ("USA", "default", [-82.03, -88.34, -89.75, -85.7, -92.37, -53.03, -43.18, -33.71]),
    ("UK", "default", [-104.2, -101.8, -96.07, -81.15, -77.05, -47.69, -39.77, -34.41]),
    ("FRANCE", "default", [-120.9, -115.6, -128.2, -119.1, -105.4, -98.43, -93.58, -72.72]),
    ("GERMANY", "default", [-25.41, -93.11, -40.21, -109.3, -28.33, -22.71, -22.55, -18.35]),
    ("ITALY", "default", [-29.75, -24.83, -25.97, -29.37, -29.59, -28.89, -32.05, -31.71]),
    ("CANADA", "default", [-105.1, -111.8, -106.3, -87.51, -68.27, -49.81, -43.65, -35.22]),
    ("JAPAN", "default", [-113.2, -114.8, -116.5, -114.3, -106.6, -96.55, -87.16, -80.01]),
    ("BRAZIL", "default", [-52.05, -68.52, -118.4, -106.3, -79.09, -52.32, -38.27, -30.97]),
    ("RUSSIA", "default", [NA, NA, NA, NA, -61.54, -54.46, -45.23, -56.92]),
    ("INDIA", "default", [-101.9, -95.23, -106.7, -113.1, -118.7, -125.3, -124.2, -118.7]),
    ("CHINA", CAS_AS_G, [-173.9, -76.78, -80.53, -55.75, -47.13, -40.03, -30.29, -32.11]),
    ("CHINA", CAS_AS_U, [-173.9, -79.16, -80.11, -49.68, -44.35, -28.83, -15.34, -15.87]),
    ("SOUTH AFRICA", "default", [-79.44, -97.29, -88.21, -69.52, -47.32, -36.88, -32.17, -24.82]),
    ("INDONESIA", "default", [-229.7, -157.9, -157.6, -233.0, -135.9, -132.7, -125.0, -115.0]),
    ("NETHERLANDS", "default", [-26.16, -38.24, -44.66, -43.38, -53.3, -47.1, -35.58, -29.76]),
    ("SOUTH KOREA", "default", [-252.6, -48.52, -45.96, -17.21, -27.9, -19.91, -23.81, -25.91]),
];

/// Static 2011 indicators; entropies with the published T(UIG) retained.
pub fn reference_table1() -> Dataset {
    let window = Window::single(2011).expect("2011 is in range");
    let records = TABLE1
        .iter()
        .map(|&(country, scenario, v)| {
            // Source column order is H(UI), H(IG), H(UG).
            let h = EntropyTerms { h_u: v[0], h_i: v[1], h_g: v[2], h_ui: v[3], h_ig: v[4], h_ug: v[5], h_uig: v[6] };
            CountryWindowRecord::new(country, scenario, window, Payload::Entropies { h, t_uig: Some(v[7]) })
        })
        .collect();
    Dataset::new(Unit::Mbit, Some("2011 static indicators, G7 + BRICS + INS".into()), records)
        .expect("reference table 1 is well formed")
}

/// Five-year T(UIG) series 1971–2010; pre-1991 Russia is missing.
pub fn reference_table2() -> Dataset {
    let records = TABLE2
        .iter()
        .flat_map(|&(country, scenario, values)| {
            WINDOWS.iter().zip(values).map(move |(&(start, end), t)| {
                let window = Window::new(start, end).expect("window in range");
                let payload = if t.is_nan() { Payload::Missing } else { Payload::TOnly(t) };
                CountryWindowRecord::new(country, scenario, window, payload)
            })
        })
        .collect();
    Dataset::new(Unit::Mbit, Some("T(UIG) five-year windows 1971-2010".into()), records)
        .expect("reference table 2 is well formed")
}
