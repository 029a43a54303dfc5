//! Iteration of `φ(z) = z^d + c` on Z/pZ and the two period-2 counts.
//!
//! Every count here is produced by enumerating all residues. The
//! polynomial route in [`crate::polyfp`] is an independent cross-check.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::modmath::{is_prime_small, mod_pow, reduce_signed, PrimeTable};

/// Which degree a map family uses relative to its prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `z^p + c`, p ≥ 3.
    DegreeP,
    /// `z^(p-1) + c`, p ≥ 5.
    DegreePMinusOne,
    /// Any other `(d, c, p)`.
    Generic,
}

impl Family {
    pub fn slug(self) -> &'static str {
        match self {
            Family::DegreeP => "degree-p",
            Family::DegreePMinusOne => "degree-p-minus-1",
            Family::Generic => "generic",
        }
    }

    /// Smallest prime the family's theorems speak about.
    pub fn min_prime(self) -> u64 {
        match self {
            Family::DegreeP => 3,
            Family::DegreePMinusOne => 5,
            Family::Generic => 3,
        }
    }

    pub fn degree_for(self, p: u64) -> Option<u64> {
        match self {
            Family::DegreeP => Some(p),
            Family::DegreePMinusOne => Some(p - 1),
            Family::Generic => None,
        }
    }

    fn check_prime(self, p: u64) -> Result<()> {
        if self == Family::Generic {
            return domain("the generic family has no predicted count");
        }
        if p < self.min_prime() || !is_prime_small(p) {
            return domain(format!("{} needs a prime p >= {}, got {p}", self.slug(), self.min_prime()));
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree-p" | "p" => Ok(Family::DegreeP),
            "degree-p-minus-1" | "p-1" => Ok(Family::DegreePMinusOne),
            "generic" => Ok(Family::Generic),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Counting convention for period-2 points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CountSemantics {
    /// `φ(z) ≠ z` and `φ²(z) = z`.
    ExactPeriodTwo,
    /// Every root of `φ²(x) − x`, fixed points included.
    PeriodDividingTwo,
}

impl CountSemantics {
    pub const ALL: [CountSemantics; 2] = [CountSemantics::PeriodDividingTwo, CountSemantics::ExactPeriodTwo];

    pub fn slug(self) -> &'static str {
        match self {
            CountSemantics::ExactPeriodTwo => "literal",
            CountSemantics::PeriodDividingTwo => "root-count",
        }
    }
}

impl fmt::Display for CountSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for CountSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" | "exact" => Ok(CountSemantics::ExactPeriodTwo),
            "root-count" | "roots" => Ok(CountSemantics::PeriodDividingTwo),
            other => Err(Error::Parse(format!("unknown semantics {other:?}"))),
        }
    }
}

/// Position of `c` modulo `p` relative to the classes the theorems split on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResidueClass {
    Zero,
    One,
    MinusOne,
    Other,
}

impl ResidueClass {
    pub const ALL: [ResidueClass; 4] = [ResidueClass::Zero, ResidueClass::One, ResidueClass::MinusOne, ResidueClass::Other];

    pub fn of(c: i64, p: u64) -> Self {
        let r = reduce_signed(c, p);
        if r == 0 {
            ResidueClass::Zero
        } else if r == 1 {
            ResidueClass::One
        } else if r == p - 1 {
            ResidueClass::MinusOne
        } else {
            ResidueClass::Other
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ResidueClass::Zero => "c=0",
            ResidueClass::One => "c=1",
            ResidueClass::MinusOne => "c=-1",
            ResidueClass::Other => "c!=0,+-1",
        }
    }
}

/// The map `z ↦ z^d + c` on Z/pZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapParams {
    d: u64,
    c: i64,
    p: u64,
}

impl MapParams {
    pub fn new(d: u64, c: i64, p: u64) -> Result<Self> {
        if d < 2 {
            return domain(format!("degree must be at least 2, got {d}"));
        }
        if p < 3 || !is_prime_small(p) {
            return domain(format!("modulus must be an odd prime, got {p}"));
        }
        Ok(MapParams { d, c, p })
    }

    pub fn for_family(family: Family, c: i64, p: u64) -> Result<Self> {
        family.check_prime(p)?;
        MapParams::new(family.degree_for(p).expect("non-generic"), c, p)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c_mod_p(&self) -> u64 {
        reduce_signed(self.c, self.p)
    }

    pub fn family(&self) -> Family {
        if self.d == self.p {
            Family::DegreeP
        } else if self.d + 1 == self.p && self.p >= 5 {
            Family::DegreePMinusOne
        } else {
            Family::Generic
        }
    }

    /// Image of every residue, indexed by residue.
    pub fn image_table(&self) -> Vec<u64> {
        let c = self.c_mod_p();
        (0..self.p).map(|z| (mod_pow(z, self.d, self.p) + c) % self.p).collect()
    }
}

pub fn eval_map(params: &MapParams, z: u64) -> u64 {
    debug_assert!(z < params.p);
    (mod_pow(z, params.d, params.p) + params.c_mod_p()) % params.p
}

/// `φ^n(z)`; `n = 0` is the identity.
pub fn iterate_map(params: &MapParams, z: u64, n: u64) -> u64 {
    (0..n).fold(z, |w, _| eval_map(params, w))
}

pub fn fixed_points(params: &MapParams) -> Vec<u64> {
    (0..params.p).filter(|&z| eval_map(params, z) == z).collect()
}

/// Fixed and exact-period-2 tallies for one map, without witnesses.
pub fn classify_counts(params: &MapParams) -> (u64, u64) {
    let img = params.image_table();
    let mut fixed = 0;
    let mut exact2 = 0;
    for (z, &w) in img.iter().enumerate() {
        if w == z as u64 {
            fixed += 1;
        } else if img[w as usize] == z as u64 {
            exact2 += 1;
        }
    }
    (fixed, exact2)
}

/// Both period-2 counts for one `(d, c, p)`, with witness residues and
/// the published prediction when the family has one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub params: MapParams,
    pub family: Family,
    pub fixed_count: u64,
    pub exact2_count: u64,
    pub root2_count: u64,
    pub fixed_points: Vec<u64>,
    pub exact2_points: Vec<u64>,
    pub paper_claim: Option<u64>,
    pub matches_paper_under_root_semantics: bool,
    pub matches_paper_under_literal_semantics: bool,
}

impl CountReport {
    pub fn count(&self, semantics: CountSemantics) -> u64 {
        match semantics {
            CountSemantics::ExactPeriodTwo => self.exact2_count,
            CountSemantics::PeriodDividingTwo => self.root2_count,
        }
    }

    pub fn matches_paper(&self, semantics: CountSemantics) -> bool {
        match semantics {
            CountSemantics::ExactPeriodTwo => self.matches_paper_under_literal_semantics,
            CountSemantics::PeriodDividingTwo => self.matches_paper_under_root_semantics,
        }
    }

    /// Residues counted under `semantics`, ascending.
    pub fn witnesses(&self, semantics: CountSemantics) -> Vec<u64> {
        match semantics {
            CountSemantics::ExactPeriodTwo => self.exact2_points.clone(),
            CountSemantics::PeriodDividingTwo => {
                let mut all: Vec<u64> = self.fixed_points.iter().chain(&self.exact2_points).copied().collect();
                all.sort_unstable();
                all
            }
        }
    }

    pub fn residue_class(&self) -> ResidueClass {
        ResidueClass::of(self.params.c, self.params.p)
    }

    /// True when a claim exists and disagrees under `semantics`.
    pub fn is_mismatch(&self, semantics: CountSemantics) -> bool {
        self.paper_claim.is_some() && !self.matches_paper(semantics)
    }
}

/// Enumerates every residue and sorts it into fixed / exact-2 / neither.
pub fn count_period2(params: &MapParams) -> CountReport {
    let img = params.image_table();
    let mut fixed_points = Vec::new();
    let mut exact2_points = Vec::new();
    for (z, &w) in img.iter().enumerate() {
        let z = z as u64;
        if w == z {
            fixed_points.push(z);
        } else if img[w as usize] == z {
            exact2_points.push(z);
        }
    }
    let fixed_count = fixed_points.len() as u64;
    let exact2_count = exact2_points.len() as u64;
    let root2_count = (0..params.p).filter(|&z| img[img[z as usize] as usize] == z).count() as u64;
    assert_eq!(root2_count, fixed_count + exact2_count, "period-2 split broken for {params:?}");

    let family = params.family();
    let paper_claim = match family {
        Family::Generic => None,
        f => paper_predicted_count(f, params.c, params.p).ok(),
    };
    CountReport {
        params: *params,
        family,
        fixed_count,
        exact2_count,
        root2_count,
        fixed_points,
        exact2_points,
        paper_claim,
        matches_paper_under_root_semantics: paper_claim == Some(root2_count),
        matches_paper_under_literal_semantics: paper_claim == Some(exact2_count),
    }
}

/// Functional-graph decomposition of `z ↦ φ(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStructure {
    /// Cycle lengths, ascending.
    pub cycles: Vec<u64>,
    pub on_cycle_count: u64,
    pub tail_count: u64,
}

pub fn cycle_structure(params: &MapParams) -> CycleStructure {
    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;

    let img = params.image_table();
    let n = img.len();
    let mut state = vec![UNSEEN; n];
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        let mut z = start;
        while state[z] == UNSEEN {
            state[z] = ON_PATH;
            path.push(z);
            z = img[z] as usize;
        }
        if state[z] == ON_PATH {
            let pos = path.iter().position(|&w| w == z).expect("on current path");
            cycles.push((path.len() - pos) as u64);
        }
        for &w in &path {
            state[w] = DONE;
        }
        path.clear();
    }
    cycles.sort_unstable();
    let on_cycle_count: u64 = cycles.iter().sum();
    CycleStructure { cycles, on_cycle_count, tail_count: params.p - on_cycle_count }
}

/// The count the published theorems assert, regardless of what
/// enumeration shows.
pub fn paper_predicted_count(family: Family, c: i64, p: u64) -> Result<u64> {
    family.check_prime(p)?;
    let class = ResidueClass::of(c, p);
    Ok(match family {
        Family::DegreeP => {
            if class == ResidueClass::Zero {
                p
            } else {
                0
            }
        }
        Family::DegreePMinusOne => match class {
            ResidueClass::Zero => 2,
            ResidueClass::One | ResidueClass::MinusOne => 1,
            ResidueClass::Other => 0,
        },
        Family::Generic => unreachable!("rejected by check_prime"),
    })
}

/// Which coefficients a sweep visits for each prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CRange {
    /// `lo..hi`, inclusive, stepping by `stride`.
    Interval { lo: i64, hi: i64, stride: u64 },
    /// `lo..k·p`, inclusive, resolved per prime.
    PerPrime { lo: i64, multiple: i64, stride: u64 },
    /// `c ≡ residue (mod p)`: `residue + k·stride·p` for `k` in `0..count`.
    Class { residue: i64, count: u64, stride: u64 },
    List(Vec<i64>),
}

impl CRange {
    pub fn values_for(&self, p: u64) -> Vec<i64> {
        let p = p as i64;
        match self {
            CRange::Interval { lo, hi, stride } => stepped(*lo, *hi, *stride),
            CRange::PerPrime { lo, multiple, stride } => stepped(*lo, multiple.saturating_mul(p), *stride),
            CRange::Class { residue, count, stride } => {
                (0..*count as i64).map(|k| residue + k * (*stride as i64) * p).collect()
            }
            CRange::List(values) => values.clone(),
        }
    }

    /// Largest `c` this range can produce for primes up to `p_max`.
    pub fn max_value(&self, p_max: u64) -> i64 {
        match self {
            CRange::Interval { hi, .. } => *hi,
            CRange::PerPrime { multiple, .. } => multiple.saturating_mul(p_max as i64),
            CRange::Class { residue, count, stride } => {
                residue + (count.saturating_sub(1) as i64) * (*stride as i64) * p_max as i64
            }
            CRange::List(values) => values.iter().copied().max().unwrap_or(0),
        }
    }
}

fn stepped(lo: i64, hi: i64, stride: u64) -> Vec<i64> {
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi).step_by(stride.max(1) as usize).collect()
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

fn parse_stride(s: &str) -> Result<u64> {
    let v = s.trim().parse::<u64>().map_err(|e| Error::Parse(format!("bad stride {s:?}: {e}")))?;
    if v == 0 {
        return Err(Error::Parse("stride must be at least 1".into()));
    }
    Ok(v)
}

/// Grammar: `A..B`, `A..Kp`, either with an optional `/S` stride;
/// `R%p:N` or `R%p:N/S` for a congruence class; or a comma list.
impl FromStr for CRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty c range".into()));
        }
        let (body, stride) = match s.split_once('/') {
            Some((b, st)) => (b, parse_stride(st)?),
            None => (s, 1),
        };
        if let Some((residue, count)) = body.split_once("%p:") {
            let count = count.trim().parse::<u64>().map_err(|e| Error::Parse(format!("bad sample count {count:?}: {e}")))?;
            return Ok(CRange::Class { residue: parse_i64(residue)?, count, stride });
        }
        if let Some((lo, hi)) = body.split_once("..") {
            let lo = parse_i64(lo)?;
            let hi = hi.trim();
            if let Some(k) = hi.strip_suffix('p') {
                let multiple = if k.is_empty() { 1 } else { parse_i64(k)? };
                return Ok(CRange::PerPrime { lo, multiple, stride });
            }
            return Ok(CRange::Interval { lo, hi: parse_i64(hi)?, stride });
        }
        if stride != 1 {
            return Err(Error::Parse("a stride needs an interval".into()));
        }
        body.split(',').map(parse_i64).collect::<Result<Vec<_>>>().map(CRange::List)
    }
}

impl fmt::Display for CRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |s: u64| if s == 1 { String::new() } else { format!("/{s}") };
        match self {
            CRange::Interval { lo, hi, stride } => write!(f, "{lo}..{hi}{}", suffix(*stride)),
            CRange::PerPrime { lo, multiple: 1, stride } => write!(f, "{lo}..p{}", suffix(*stride)),
            CRange::PerPrime { lo, multiple, stride } => write!(f, "{lo}..{multiple}p{}", suffix(*stride)),
            CRange::Class { residue, count, stride } => write!(f, "{residue}%p:{count}{}", suffix(*stride)),
            CRange::List(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Brute-force reports for every prime in `[p_min, p_max]` the family
/// admits and every `c` the range yields, ordered by `(p, c)`.
pub fn verify_family(family: Family, p_min: u64, p_max: u64, c_range: &CRange, table: &PrimeTable) -> Result<Vec<CountReport>> {
    if family == Family::Generic {
        return domain("theorem verification covers degree-p and degree-p-minus-1 only");
    }
    let lo = p_min.max(family.min_prime());
    if lo > p_max {
        return Ok(Vec::new());
    }
    let tasks: Vec<(u64, i64)> = table
        .primes_between(lo, p_max)?
        .iter()
        .flat_map(|&p| c_range.values_for(p).into_iter().map(move |c| (p, c)))
        .collect();
    tasks
        .par_iter()
        .map(|&(p, c)| MapParams::for_family(family, c, p).map(|m| count_period2(&m)))
        .collect()
}

/// One kind of disagreement between the published table and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchClass {
    pub family: Family,
    pub semantics: CountSemantics,
    pub class: ResidueClass,
    /// Claimed count, `"p"` when it equals the modulus.
    pub claim: String,
    /// Observed count, same notation.
    pub observed: String,
    pub rows: usize,
    /// First offending `(p, c)` in sweep order and its counted residues.
    pub example_p: u64,
    pub example_c: i64,
    pub example_witnesses: Vec<u64>,
}

fn describe_count(v: u64, p: u64) -> String {
    if v == p {
        "p".to_string()
    } else {
        v.to_string()
    }
}

/// Groups mismatching rows by `(family, class, claim, observed)`.
pub fn summarize_mismatches(reports: &[CountReport], semantics: CountSemantics) -> Vec<MismatchClass> {
    let mut groups: BTreeMap<(Family, ResidueClass, String, String), MismatchClass> = BTreeMap::new();
    for r in reports.iter().filter(|r| r.is_mismatch(semantics)) {
        let p = r.params.p;
        let claim = describe_count(r.paper_claim.expect("mismatch has claim"), p);
        let observed = describe_count(r.count(semantics), p);
        groups
            .entry((r.family, r.residue_class(), claim.clone(), observed.clone()))
            .and_modify(|g| g.rows += 1)
            .or_insert_with(|| MismatchClass {
                family: r.family,
                semantics,
                class: r.residue_class(),
                claim,
                observed,
                rows: 1,
                example_p: p,
                example_c: r.params.c,
                example_witnesses: r.witnesses(semantics),
            });
    }
    groups.into_values().collect()
}
