use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use perioscope::dynamics::{CRange, CountSemantics, Family};
use perioscope::modmath::PrimeTable;
use perioscope::report::OutputFormat;
use perioscope::stats::{CountOptions, DensityCondition, Selector};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemanticsChoice {
    Both,
    Literal,
    RootCount,
}

impl SemanticsChoice {
    pub fn selected(self) -> Vec<CountSemantics> {
        match self {
            SemanticsChoice::Both => CountSemantics::ALL.to_vec(),
            SemanticsChoice::Literal => vec![CountSemantics::ExactPeriodTwo],
            SemanticsChoice::RootCount => vec![CountSemantics::PeriodDividingTwo],
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            SemanticsChoice::Both => "both",
            SemanticsChoice::Literal => "literal",
            SemanticsChoice::RootCount => "root-count",
        }
    }
}

impl FromStr for SemanticsChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "both" => Ok(SemanticsChoice::Both),
            other => match CountSemantics::from_str(other) {
                Ok(CountSemantics::ExactPeriodTwo) => Ok(SemanticsChoice::Literal),
                Ok(CountSemantics::PeriodDividingTwo) => Ok(SemanticsChoice::RootCount),
                Err(e) => Err(e.to_string()),
            },
        }
    }
}

/// Everything a sweep needs; the hashed part excludes where and how output is written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub family: Family,
    pub p_min: u64,
    pub p_max: u64,
    pub c_spec: CRange,
    pub semantics: SemanticsChoice,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub parallelism: Option<usize>,
    pub shortcut_threshold: u64,
}

impl SweepConfig {
    pub fn validate(&self, sieve_cap: u64) -> Result<(), Failure> {
        if self.family == Family::Generic {
            return Err(Failure::Usage("verify needs --family degree-p or degree-p-minus-1".into()));
        }
        if self.p_max > sieve_cap {
            return Err(Failure::Usage(format!("--p-max {} exceeds the sieve cap {sieve_cap}", self.p_max)));
        }
        let lo = self.p_min.max(self.family.min_prime());
        if lo > self.p_max || !(lo..=self.p_max).any(perioscope::modmath::is_prime_small) {
            return Err(Failure::Usage(format!("no {} primes in [{}, {}]", self.family, self.p_min, self.p_max)));
        }
        check_jobs(self.parallelism)
    }

    pub fn canonical(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), self.family.to_string());
        m.insert("p_min".into(), self.p_min.to_string());
        m.insert("p_max".into(), self.p_max.to_string());
        m.insert("c".into(), self.c_spec.to_string());
        m.insert("semantics".into(), self.semantics.slug().into());
        m.insert("shortcut_threshold".into(), self.shortcut_threshold.to_string());
        m
    }

    pub fn table(&self) -> Result<PrimeTable, Failure> {
        perioscope::modmath::sieve_primes(self.p_max.max(2)).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsKind {
    Avg(Selector),
    Density(DensityCondition),
    Growth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsConfig {
    pub kind: StatsKind,
    pub family: Family,
    pub c_values: Vec<u64>,
    pub c_spec: String,
    pub semantics: SemanticsChoice,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub parallelism: Option<usize>,
    pub shortcut_threshold: u64,
}

impl StatsConfig {
    pub fn options(&self) -> CountOptions {
        CountOptions { shortcut_threshold: self.shortcut_threshold }
    }

    /// Largest integer the prime table must cover.
    pub fn table_limit(&self) -> u64 {
        self.c_values.iter().copied().max().unwrap_or(3) + 1
    }

    pub fn validate(&self, sieve_cap: u64) -> Result<(), Failure> {
        if self.family == Family::Generic && self.kind != StatsKind::Growth {
            return Err(Failure::Usage("stats needs --family degree-p or degree-p-minus-1".into()));
        }
        if self.c_values.is_empty() {
            return Err(Failure::Usage("--c yields no values".into()));
        }
        if self.table_limit() > sieve_cap {
            return Err(Failure::Usage(format!("c up to {} exceeds the sieve cap {sieve_cap}", self.table_limit() - 1)));
        }
        check_jobs(self.parallelism)
    }

    pub fn canonical(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let (kind, detail) = match self.kind {
            StatsKind::Avg(sel) => ("avg", sel.to_string()),
            StatsKind::Density(cond) => ("density", cond.to_string()),
            StatsKind::Growth => ("growth", String::new()),
        };
        m.insert("kind".into(), kind.into());
        m.insert("detail".into(), detail);
        m.insert("family".into(), self.family.to_string());
        m.insert("c".into(), self.c_spec.clone());
        m.insert("semantics".into(), self.semantics.slug().into());
        m.insert("shortcut_threshold".into(), self.shortcut_threshold.to_string());
        m
    }
}

fn check_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    match jobs {
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        _ => Ok(()),
    }
}

/// Coefficients for `stats`: a comma list or `A..B[/S]`, all at least 1.
pub fn parse_c_values(spec: &str) -> Result<Vec<u64>, Failure> {
    let range = CRange::from_str(spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let values = match &range {
        CRange::Interval { .. } | CRange::List(_) => range.values_for(3),
        _ => return Err(Failure::Usage(format!("--c {spec:?} depends on p; stats takes a list or an interval"))),
    };
    values
        .into_iter()
        .map(|c| u64::try_from(c).ok().filter(|&c| c >= 1).ok_or_else(|| Failure::Usage(format!("c must be positive, got {c}"))))
        .collect()
}
