//! The `helix` command line.
//!
//! Exit codes: 0 on success, 1 when `check` finds violations, 2 for usage,
//! parse and validation errors.

pub mod chart;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use helix_core::{
    bilateral_decomposition, build_plan_with, compare_scenarios, format_sig, rank_by_synergy, reference_table1,
    reference_table2, t_series, trend, window_values, CountryWindowRecord, Dataset, EntropyTerms, EntropyValue,
    Format, IndicatorSet, Payload, PlanOptions, PolicyMode, RecordKey, Unit, Window,
};
use rayon::prelude::*;
use serde::Serialize;

const DIGITS: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "helix", version, about = "Triple-Helix synergy indicators from U/I/G publication data")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reference {
    /// Static entropies and T(UIG), 2011
    Table1,
    /// T(UIG) per five-year window, 1971-2010
    Table2,
}

#[derive(Debug, Args)]
struct Source {
    /// Dataset file, CSV or JSON
    #[arg(long, conflicts_with = "reference")]
    input: Option<PathBuf>,
    /// Use a bundled reference dataset instead of a file
    #[arg(long, value_enum)]
    reference: Option<Reference>,
    /// Input format (csv or json); taken from the file extension when omitted
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct Display {
    /// Display unit: bit, mbit or nat
    #[arg(long, default_value = "mbit")]
    unit: Unit,
    /// Universe for counts records: union or with-none
    #[arg(long, default_value = "union")]
    policy: PolicyMode,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Seven entropies and four transmissions per record
    Compute {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        display: Display,
        /// Only records in this window, e.g. 2011 or 2001-2005
        #[arg(long)]
        window: Option<Window>,
        /// Write the results as a dataset (format from the extension)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Compute records on all cores
        #[arg(long)]
        parallel: bool,
    },
    /// Order countries by T(UIG), most negative first
    Rank {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        display: Display,
        /// Window to rank; may be omitted when the dataset has only one
        #[arg(long)]
        window: Option<Window>,
        /// Write an SVG bar chart
        #[arg(long)]
        chart: Option<PathBuf>,
        /// Write the ranked values as a dataset
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// T(UIG) over time for one key, with its trend
    Series {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        display: Display,
        /// Country, or country(scenario)
        #[arg(long)]
        key: RecordKey,
        /// Second key to difference against the first (second minus first)
        #[arg(long)]
        compare: Option<RecordKey>,
        /// Write an SVG line chart
        #[arg(long)]
        chart: Option<PathBuf>,
        /// Write the series as a dataset
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bilateral transmissions T(UI), T(UG), T(IG) per window
    Decompose {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        display: Display,
        /// Country, or country(scenario)
        #[arg(long)]
        key: RecordKey,
        /// Write an SVG line chart
        #[arg(long)]
        chart: Option<PathBuf>,
        /// Write the values as CSV or JSON (format from the extension)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the ten-step search program for a country and year range
    Queries {
        #[arg(long)]
        country: String,
        #[arg(long)]
        start: i32,
        #[arg(long)]
        end: i32,
        /// Write PY=2011 rather than PY=2011-2011 when start equals end
        #[arg(long)]
        bare_single_year: bool,
        /// Extra university abbreviation, repeatable
        #[arg(long = "extra-university", value_name = "TERM")]
        extra_university: Vec<String>,
        /// Extra industry abbreviation, repeatable
        #[arg(long = "extra-industry", value_name = "TERM")]
        extra_industry: Vec<String>,
        /// Extra government abbreviation, repeatable
        #[arg(long = "extra-government", value_name = "TERM")]
        extra_government: Vec<String>,
        /// Emit the plan as JSON
        #[arg(long)]
        json: bool,
    },
    /// Validate a dataset and list every violation
    Check {
        #[command(flatten)]
        source: Source,
    },
}

/// Why a command stopped, and with which exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<helix_core::Error> for Failure {
    fn from(e: helix_core::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Files are only written once every value has been computed.
#[derive(Default)]
struct Pending(Vec<(PathBuf, Vec<u8>)>);

impl Pending {
    fn add(&mut self, path: Option<&PathBuf>, bytes: impl FnOnce() -> Result<Vec<u8>, Failure>) -> Result<(), Failure> {
        if let Some(p) = path {
            self.0.push((p.clone(), bytes()?));
        }
        Ok(())
    }

    fn flush(self) -> Result<(), Failure> {
        for (path, bytes) in self.0 {
            fs::write(&path, bytes).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut text = String::new();
    let result = execute(cli.command, &mut text);
    let _ = out.write_all(text.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut String) -> Outcome {
    match command {
        Command::Compute { source, display, window, output, parallel } => {
            compute(&load(&source)?, &display, window, output.as_ref(), parallel, out)
        }
        Command::Rank { source, display, window, chart, output } => {
            rank(&load(&source)?, &display, window, chart.as_ref(), output.as_ref(), out)
        }
        Command::Series { source, display, key, compare, chart, output } => {
            series(&load(&source)?, &display, &key, compare.as_ref(), chart.as_ref(), output.as_ref(), out)
        }
        Command::Decompose { source, display, key, chart, output } => {
            decompose(&load(&source)?, &display, &key, chart.as_ref(), output.as_ref(), out)
        }
        Command::Queries {
            country,
            start,
            end,
            bare_single_year,
            extra_university,
            extra_industry,
            extra_government,
            json,
        } => {
            let opts = PlanOptions { extra_university, extra_industry, extra_government, bare_single_year };
            let plan = build_plan_with(&country, start, end, &opts)?;
            if json {
                let text = serde_json::to_string_pretty(&plan).map_err(|e| Failure::usage(e.to_string()))?;
                let _ = writeln!(out, "{text}");
            } else {
                let _ = write!(out, "{plan}");
            }
            Ok(0)
        }
        Command::Check { source } => check(&load(&source)?, out),
    }
}

fn load(src: &Source) -> Result<Dataset, Failure> {
    match (&src.input, src.reference) {
        (Some(path), _) => {
            let bytes = fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let format = src.format.unwrap_or_else(|| Format::from_path(path));
            Dataset::parse(&bytes, format).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        (None, Some(Reference::Table1)) => Ok(reference_table1()),
        (None, Some(Reference::Table2)) => Ok(reference_table2()),
        (None, None) => Err(Failure::usage("one of --input or --reference is required")),
    }
}

fn fmt(v: EntropyValue, unit: Unit) -> String {
    format_sig(v.to(unit).value, DIGITS)
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i < 2 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for r in rows {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
}

fn dataset_bytes(d: &Dataset, path: &Path) -> Result<Vec<u8>, Failure> {
    Ok(d.serialize(Format::from_path(path)))
}

fn provenance(d: &Dataset, what: &str) -> Option<String> {
    Some(match d.provenance() {
        Some(p) => format!("{what} of: {p}"),
        None => what.to_string(),
    })
}

fn compute(
    d: &Dataset,
    display: &Display,
    window: Option<Window>,
    output: Option<&PathBuf>,
    parallel: bool,
    out: &mut String,
) -> Outcome {
    let records: Vec<&CountryWindowRecord> =
        d.records().iter().filter(|r| window.is_none_or(|w| r.window == w)).collect();
    if let Some(w) = window {
        if records.is_empty() {
            return Err(Failure::usage(format!("window {w} is not in the dataset")));
        }
    }
    let one = |r: &&CountryWindowRecord| -> Result<Option<IndicatorSet>, Failure> {
        match r.payload {
            Payload::Missing => Ok(None),
            _ => r
                .indicators(d.unit(), display.policy)
                .map(|s| Some(s.to(display.unit)))
                .map_err(|e| Failure::usage(format!("{} {}: {e}", r.key(), r.window))),
        }
    };
    // indexed collect keeps input order either way
    let sets: Vec<Option<IndicatorSet>> = if parallel {
        records.par_iter().map(one).collect::<Result<_, _>>()?
    } else {
        records.iter().map(one).collect::<Result<_, _>>()?
    };

    let header = [
        "key", "window", "H(U)", "H(I)", "H(G)", "H(UI)", "H(UG)", "H(IG)", "H(UIG)", "T(UI)", "T(UG)", "T(IG)",
        "T(UIG)",
    ];
    let rows: Vec<Vec<String>> = records
        .iter()
        .zip(&sets)
        .map(|(r, s)| {
            let mut row = vec![r.key().to_string(), r.window.to_string()];
            match s {
                Some(s) => row.extend(s.fields().iter().map(|v| fmt(*v, display.unit))),
                None => row.extend(std::iter::repeat_n("n.a.".to_string(), 11)),
            }
            row
        })
        .collect();
    let _ = writeln!(out, "# unit: {}", display.unit);
    table(out, &header, &rows);

    let mut files = Pending::default();
    files.add(output, || {
        let records = records
            .iter()
            .zip(&sets)
            .map(|(r, s)| {
                let payload = match s {
                    Some(s) => {
                        let [h_u, h_i, h_g, h_ui, h_ug, h_ig, h_uig, _, _, _, t] = s.fields().map(|v| v.value);
                        Payload::Entropies { h: EntropyTerms { h_u, h_i, h_g, h_ui, h_ug, h_ig, h_uig }, t_uig: Some(t) }
                    }
                    None => Payload::Missing,
                };
                CountryWindowRecord::new(r.country.clone(), r.scenario.clone(), r.window, payload)
            })
            .collect();
        let result = Dataset::new(display.unit, provenance(d, "computed indicators"), records)?;
        dataset_bytes(&result, output.unwrap())
    })?;
    files.flush()?;
    Ok(0)
}

fn rank(
    d: &Dataset,
    display: &Display,
    window: Option<Window>,
    chart: Option<&PathBuf>,
    output: Option<&PathBuf>,
    out: &mut String,
) -> Outcome {
    let windows = d.windows();
    let window = match window {
        Some(w) if windows.contains(&w) => w,
        Some(w) => return Err(Failure::usage(format!("window {w} is not in the dataset"))),
        None if windows.len() == 1 => windows[0],
        None => {
            let list: Vec<String> = windows.iter().map(Window::to_string).collect();
            return Err(Failure::usage(format!("--window is required; available: {}", list.join(", "))));
        }
    };
    let values = window_values(d, window, display.policy)?;
    let (present, missing): (Vec<_>, Vec<_>) = values.into_iter().partition(|(_, t)| t.is_some());
    let ranked = rank_by_synergy(&present)?;

    let rows: Vec<Vec<String>> = ranked
        .iter()
        .map(|e| vec![e.position.to_string(), e.key.to_string(), fmt(e.t_uig, display.unit)])
        .collect();
    let _ = writeln!(out, "# window: {window}  unit: {}", display.unit);
    table(out, &["rank", "key", "T(UIG)"], &rows);
    for (k, _) in &missing {
        let _ = writeln!(out, "-  {k}  n.a.");
    }

    let mut files = Pending::default();
    files.add(chart, || {
        let bars: Vec<(String, f64)> =
            ranked.iter().map(|e| (e.key.to_string(), e.t_uig.to(display.unit).value)).collect();
        Ok(chart::bar_chart(&format!("T(UIG), {window}"), display.unit.as_str(), &bars).into_bytes())
    })?;
    files.add(output, || {
        let records = ranked
            .iter()
            .map(|e| {
                let t = e.t_uig.to(display.unit).value;
                CountryWindowRecord::new(e.key.country.clone(), e.key.scenario.clone(), window, Payload::TOnly(t))
            })
            .chain(missing.iter().map(|(k, _)| {
                CountryWindowRecord::new(k.country.clone(), k.scenario.clone(), window, Payload::Missing)
            }))
            .collect();
        let result = Dataset::new(display.unit, provenance(d, "ranking"), records)?;
        dataset_bytes(&result, output.unwrap())
    })?;
    files.flush()?;
    Ok(0)
}

fn resolve_key(d: &Dataset, key: &RecordKey) -> Result<RecordKey, Failure> {
    let found = d.series(key).first().map(|r| r.key());
    found.ok_or_else(|| {
        let keys: Vec<String> = d.keys().iter().map(RecordKey::to_string).collect();
        Failure::usage(format!("unknown key {key}; available: {}", keys.join(", ")))
    })
}

fn series(
    d: &Dataset,
    display: &Display,
    key: &RecordKey,
    compare: Option<&RecordKey>,
    chart: Option<&PathBuf>,
    output: Option<&PathBuf>,
    out: &mut String,
) -> Outcome {
    let unit = display.unit;
    let key = resolve_key(d, key)?;
    let points = t_series(d, &key, display.policy)?;
    let other = match compare {
        Some(k) => {
            let k = resolve_key(d, k)?;
            let s = t_series(d, &k, display.policy)?;
            Some((k, s))
        }
        None => None,
    };

    let show = |t: Option<EntropyValue>| t.map_or("n.a.".to_string(), |t| fmt(t, unit));
    let _ = writeln!(out, "# key: {key}  unit: {unit}");
    let rows: Vec<Vec<String>> = points.iter().map(|(w, t)| vec![w.to_string(), show(*t)]).collect();
    table(out, &["window", "T(UIG)"], &rows);
    let summary = trend(&key, &points);
    let _ = write!(out, "trend: {}", summary.classification.as_str());
    if let (Some((fw, Some(f))), Some((lw, Some(l))), Some(slope)) = (summary.first, summary.last, summary.abs_slope) {
        let slope = EntropyValue::new(slope, f.unit).to(unit).value;
        let _ = write!(
            out,
            " (|T| {} in {fw} to {} in {lw}, slope {} {unit}/year)",
            format_sig(f.to(unit).value.abs(), DIGITS),
            format_sig(l.to(unit).value.abs(), DIGITS),
            format_sig(slope, DIGITS)
        );
    }
    let _ = writeln!(out);

    let mut comparison = None;
    if let Some((other_key, other_points)) = &other {
        let cmp = compare_scenarios(&points, other_points)?;
        let _ = writeln!(out, "\n# {other_key} minus {key}");
        let rows: Vec<Vec<String>> = cmp
            .deltas
            .iter()
            .map(|x| {
                let diff = EntropyValue::new(x.difference, x.a.unit);
                vec![x.window.to_string(), fmt(x.a, unit), fmt(x.b, unit), fmt(diff, unit)]
            })
            .collect();
        table(out, &["window", "first", "second", "difference"], &rows);
        let p = cmp.pattern;
        let _ = writeln!(out, "signs: {} positive, {} negative, {} zero", p.positive, p.negative, p.zero);
        comparison = Some(other_points.clone());
    }

    let mut files = Pending::default();
    files.add(chart, || {
        let labels: Vec<String> = points.iter().map(|(w, _)| w.to_string()).collect();
        let values = |s: &[(Window, Option<EntropyValue>)]| -> Vec<Option<f64>> {
            points
                .iter()
                .map(|(w, _)| s.iter().find(|(x, _)| x == w).and_then(|(_, t)| t.map(|t| t.to(unit).value)))
                .collect()
        };
        let mut lines = vec![(key.to_string(), values(&points))];
        if let (Some((k, _)), Some(s)) = (&other, &comparison) {
            lines.push((k.to_string(), values(s)));
        }
        Ok(chart::line_chart(&format!("T(UIG), {key}"), unit.as_str(), &labels, &lines).into_bytes())
    })?;
    files.add(output, || {
        let records = points
            .iter()
            .map(|(w, t)| {
                let payload = t.map_or(Payload::Missing, |t| Payload::TOnly(t.to(unit).value));
                CountryWindowRecord::new(key.country.clone(), key.scenario.clone(), *w, payload)
            })
            .collect();
        let result = Dataset::new(unit, provenance(d, "series"), records)?;
        dataset_bytes(&result, output.unwrap())
    })?;
    files.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct BilateralRow {
    window: String,
    unit: &'static str,
    t_ui: f64,
    t_ug: f64,
    t_ig: f64,
}

fn decompose(
    d: &Dataset,
    display: &Display,
    key: &RecordKey,
    chart: Option<&PathBuf>,
    output: Option<&PathBuf>,
    out: &mut String,
) -> Outcome {
    let unit = display.unit;
    let key = resolve_key(d, key)?;
    let records = d.series(&key);
    let series = bilateral_decomposition(&records, display.policy).map_err(|e| {
        Failure::usage(format!("{e}; decomposition needs counts (u0..uig0), not entropies or T values"))
    })?;
    let rows: Vec<BilateralRow> = series
        .points
        .iter()
        .map(|p| BilateralRow {
            window: p.window.to_string(),
            unit: unit.as_str(),
            t_ui: p.t_ui.to(unit).value,
            t_ug: p.t_ug.to(unit).value,
            t_ig: p.t_ig.to(unit).value,
        })
        .collect();
    let _ = writeln!(out, "# key: {key}  unit: {unit}");
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let v = |x: f64| format_sig(x, DIGITS);
            vec![r.window.clone(), v(r.t_ui), v(r.t_ug), v(r.t_ig)]
        })
        .collect();
    table(out, &["window", "T(UI)", "T(UG)", "T(IG)"], &text);

    let mut files = Pending::default();
    files.add(chart, || {
        let labels: Vec<String> = rows.iter().map(|r| r.window.clone()).collect();
        let lines = vec![
            ("T(UI)".to_string(), rows.iter().map(|r| Some(r.t_ui)).collect()),
            ("T(UG)".to_string(), rows.iter().map(|r| Some(r.t_ug)).collect()),
            ("T(IG)".to_string(), rows.iter().map(|r| Some(r.t_ig)).collect()),
        ];
        Ok(chart::line_chart(&format!("Bilateral transmissions, {key}"), unit.as_str(), &labels, &lines).into_bytes())
    })?;
    files.add(output, || {
        let path = output.unwrap();
        Ok(match Format::from_path(path) {
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(&rows).map_err(|e| Failure::usage(e.to_string()))?;
                v.push(b'\n');
                v
            }
            Format::Csv => {
                let mut s = String::from("window,unit,t_ui,t_ug,t_ig\n");
                for r in &rows {
                    let _ = writeln!(s, "{},{},{},{},{}", r.window, r.unit, r.t_ui, r.t_ug, r.t_ig);
                }
                s.into_bytes()
            }
        })
    })?;
    files.flush()?;
    Ok(0)
}

fn check(d: &Dataset, out: &mut String) -> Outcome {
    let findings = d.check();
    for f in &findings {
        let _ = writeln!(out, "{}: {} ({})", f.record, f.rule, f.detail);
    }
    let _ = writeln!(out, "{} records, {} violations", d.len(), findings.len());
    Ok(if findings.is_empty() { 0 } else { 1 })
}
