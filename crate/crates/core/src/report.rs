//! Flat report rows and their CSV / JSON encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{CountReport, CountSemantics, MismatchClass};
use crate::error::{Error, Result};
use crate::stats::{AvgPoint, DensityPoint, GrowthPoint, Ratio};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

const UNDEFINED: &str = "undefined";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Run metadata; `config` holds only the parameters that affect row content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub command: String,
    pub tool_version: String,
    pub config_hash: String,
    pub config: BTreeMap<String, String>,
}

impl RunMeta {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        let config_hash = config_hash(command, &config);
        RunMeta { command: command.to_string(), tool_version: TOOL_VERSION.to_string(), config_hash, config }
    }
}

/// First 16 hex digits of SHA-256 over `command` and the sorted `key=value` lines.
pub fn config_hash(command: &str, config: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    for (k, v) in config {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One report line. Columns that do not apply to a row's kind are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub kind: String,
    pub family: String,
    pub semantics: String,
    pub condition: String,
    pub c: i64,
    pub p: Option<u64>,
    pub d: Option<u64>,
    pub c_mod_p: Option<u64>,
    pub residue_class: Option<String>,
    pub fixed_count: Option<u64>,
    pub exact2_count: Option<u64>,
    pub root2_count: Option<u64>,
    pub count: Option<u64>,
    pub paper_claim: Option<u64>,
    pub matches_paper: Option<bool>,
    pub witnesses: String,
    pub numerator: Option<u128>,
    pub paper_numerator: Option<u128>,
    pub denominator: Option<u64>,
    pub value: Option<String>,
    pub paper_value: Option<String>,
    pub ratio: Option<f64>,
    pub paper_ratio: Option<f64>,
    pub omega_odd: Option<u64>,
    pub odd_prime_sum: Option<u128>,
    pub asymptotic_reference: Option<f64>,
    pub config_hash: String,
    pub tool_version: String,
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn ratio_text(r: Option<Ratio>) -> String {
    r.map_or_else(|| UNDEFINED.to_string(), |r| r.to_string())
}

impl ReportRow {
    fn blank(kind: &str, family: &str, semantics: &str, condition: &str, c: i64, meta: &RunMeta) -> Self {
        ReportRow {
            kind: kind.to_string(),
            family: family.to_string(),
            semantics: semantics.to_string(),
            condition: condition.to_string(),
            c,
            p: None,
            d: None,
            c_mod_p: None,
            residue_class: None,
            fixed_count: None,
            exact2_count: None,
            root2_count: None,
            count: None,
            paper_claim: None,
            matches_paper: None,
            witnesses: String::new(),
            numerator: None,
            paper_numerator: None,
            denominator: None,
            value: None,
            paper_value: None,
            ratio: None,
            paper_ratio: None,
            omega_odd: None,
            odd_prime_sum: None,
            asymptotic_reference: None,
            config_hash: meta.config_hash.clone(),
            tool_version: meta.tool_version.clone(),
        }
    }

    pub fn from_count(r: &CountReport, semantics: CountSemantics, meta: &RunMeta) -> Self {
        let mut row = Self::blank("verify", r.family.slug(), semantics.slug(), "none", r.params.c(), meta);
        row.p = Some(r.params.p());
        row.d = Some(r.params.d());
        row.c_mod_p = Some(r.params.c_mod_p());
        row.residue_class = Some(r.residue_class().label().to_string());
        row.fixed_count = Some(r.fixed_count);
        row.exact2_count = Some(r.exact2_count);
        row.root2_count = Some(r.root2_count);
        row.count = Some(r.count(semantics));
        row.paper_claim = r.paper_claim;
        row.matches_paper = r.paper_claim.map(|_| r.matches_paper(semantics));
        row.witnesses = join(&r.witnesses(semantics));
        row
    }

    pub fn from_avg(a: &AvgPoint, meta: &RunMeta) -> Self {
        let mut row = Self::blank("avg", a.family.slug(), a.semantics.slug(), a.selector.slug(), a.c as i64, meta);
        row.numerator = Some(a.numerator);
        row.denominator = Some(a.denominator);
        row.value = Some(ratio_text(a.value));
        row.paper_value = Some(ratio_text(a.paper_value));
        row.ratio = a.value.map(Ratio::to_f64);
        row
    }

    pub fn from_density(d: &DensityPoint, meta: &RunMeta) -> Self {
        let mut row = Self::blank("density", d.family.slug(), d.semantics.slug(), &d.condition.to_string(), d.c as i64, meta);
        row.numerator = Some(d.numerator as u128);
        row.paper_numerator = Some(d.paper_numerator as u128);
        row.denominator = Some(d.denominator);
        row.ratio = Some(d.ratio);
        row.paper_ratio = Some(d.paper_ratio);
        row
    }

    pub fn from_growth(g: &GrowthPoint, meta: &RunMeta) -> Self {
        let mut row = Self::blank("growth", "degree-p", CountSemantics::PeriodDividingTwo.slug(), "divides", g.c as i64, meta);
        row.numerator = Some(g.odd_prime_divisor_sum as u128);
        row.denominator = Some(g.omega_odd as u64);
        row.value = Some(ratio_text(g.average));
        row.ratio = g.average.map(Ratio::to_f64);
        row.omega_odd = Some(g.omega_odd as u64);
        row.odd_prime_sum = Some(g.odd_prime_sum);
        row.asymptotic_reference = Some(g.asymptotic_reference);
        row
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub meta: RunMeta,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(meta: RunMeta, rows: Vec<ReportRow>) -> Self {
        Report { schema: SCHEMA_VERSION, meta, rows }
    }

    pub fn write<W: Write>(&self, format: OutputFormat, out: W) -> Result<()> {
        match format {
            OutputFormat::Csv => write_csv(&self.rows, out),
            OutputFormat::Json => write_json(self, out),
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn write_csv<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    let builder = || {
        let mut b = csv::WriterBuilder::new();
        b.terminator(csv::Terminator::Any(b'\n'));
        b
    };
    if rows.is_empty() {
        // serde emits the header only alongside a record, so keep just its first line
        let mut tmp = builder().from_writer(Vec::new());
        tmp.serialize(ReportRow::blank("", "", "", "", 0, &RunMeta::new("", BTreeMap::new()))).map_err(io_err)?;
        let buf = tmp.into_inner().map_err(io_err)?;
        let end = buf.iter().position(|&b| b == b'\n').map_or(buf.len(), |i| i + 1);
        return out.write_all(&buf[..end]).map_err(io_err);
    }
    let mut w = builder().from_writer(out);
    for row in rows {
        w.serialize(row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ReportRow>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(io_err)).collect()
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report).map_err(io_err)?;
    out.write_all(b"\n").map_err(io_err)
}

pub fn read_json<R: Read>(input: R) -> Result<Report> {
    let report: Report = serde_json::from_reader(input).map_err(io_err)?;
    if report.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema {}", report.schema)));
    }
    Ok(report)
}

/// Plain-text table of mismatch classes.
pub fn format_mismatch_table(classes: &[MismatchClass]) -> String {
    let mut s = String::from("family\tsemantics\tclass\tclaim\tobserved\trows\texample\n");
    for m in classes {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\tp={} c={} witnesses=[{}]",
            m.family,
            m.semantics,
            m.class.label(),
            m.claim,
            m.observed,
            m.rows,
            m.example_p,
            m.example_c,
            join(&m.example_witnesses)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{count_period2, Family, MapParams};
    use crate::modmath::sieve_primes;
    use crate::stats::{avg_point, density_point, growth_point, CountOptions, DensityCondition, Selector};

    fn meta() -> RunMeta {
        let mut cfg = BTreeMap::new();
        cfg.insert("family".to_string(), "degree-p".to_string());
        RunMeta::new("test", cfg)
    }

    fn sample_rows() -> Vec<ReportRow> {
        let t = sieve_primes(2000).unwrap();
        let m = meta();
        let roots = CountSemantics::PeriodDividingTwo;
        let mut rows = Vec::new();
        for sem in CountSemantics::ALL {
            rows.push(ReportRow::from_count(&count_period2(&MapParams::for_family(Family::DegreePMinusOne, 4, 5).unwrap()), sem, &m));
        }
        rows.push(ReportRow::from_avg(&avg_point(15, Family::DegreeP, Selector::Divides, roots, &t, CountOptions::default()).unwrap(), &m));
        rows.push(ReportRow::from_avg(&avg_point(8, Family::DegreeP, Selector::Divides, roots, &t, CountOptions::default()).unwrap(), &m));
        rows.push(ReportRow::from_density(&density_point(30, Family::DegreeP, DensityCondition::AllRoots, roots, &t, CountOptions::default()).unwrap(), &m));
        rows.push(ReportRow::from_growth(&growth_point(1155, &t).unwrap(), &m));
        rows
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = meta();
        assert_eq!(a.config_hash, meta().config_hash);
        assert_eq!(a.config_hash.len(), 16);
        let mut cfg = a.config.clone();
        cfg.insert("family".to_string(), "degree-p-minus-1".to_string());
        assert_ne!(config_hash("test", &cfg), a.config_hash);
    }

    #[test]
    fn csv_and_json_round_trip_to_same_rows() {
        let rows = sample_rows();
        let report = Report::new(meta(), rows.clone());
        let mut csv_bytes = Vec::new();
        report.write(OutputFormat::Csv, &mut csv_bytes).unwrap();
        let mut json_bytes = Vec::new();
        report.write(OutputFormat::Json, &mut json_bytes).unwrap();
        let from_csv = read_csv(csv_bytes.as_slice()).unwrap();
        let from_json = read_json(json_bytes.as_slice()).unwrap();
        assert_eq!(from_csv, rows);
        assert_eq!(from_json.rows, rows);
        assert_eq!(from_json.meta, report.meta);
        assert!(!csv_bytes.contains(&b'\r'));
        let text = String::from_utf8(csv_bytes).unwrap();
        assert!(text.starts_with("kind,family,semantics,condition,c,"));
        assert!(text.contains("undefined"));
        assert!(text.contains(",0 4,"));
        assert!(rows.iter().all(|r| r.config_hash == report.meta.config_hash));
    }

    #[test]
    fn empty_csv_still_has_header() {
        let mut out = Vec::new();
        write_csv(&[], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("kind,family,"));
        assert_eq!(text.lines().count(), 1);
        assert!(read_csv(text.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn json_schema_is_checked() {
        let text = r#"{"schema":2,"meta":{"command":"x","tool_version":"0","config_hash":"0","config":{}},"rows":[]}"#;
        assert!(read_json(text.as_bytes()).is_err());
    }
}
