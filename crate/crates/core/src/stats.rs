//! Averages and densities of the period-2 counts over primes, for a
//! fixed coefficient `c`.
//!
//! Below a configurable threshold every per-prime count comes from brute
//! force. Above it, counts are read from a residue-class table that is
//! itself derived by brute force over all primes up to
//! [`CHARACTERIZATION_PRIME_BOUND`] before first use.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{classify_counts, paper_predicted_count, CountSemantics, Family, MapParams, ResidueClass};
use crate::error::{domain, Error, Result};
use crate::modmath::{arith_profile, ref_sum_primes_asymptotic, sum_primes_upto, PrimeSumRange, PrimeTable};

/// Primes up to this bound are enumerated exhaustively to derive the
/// residue-class table.
pub const CHARACTERIZATION_PRIME_BOUND: u64 = 199;

/// Default `c` above which the residue-class table replaces brute force.
pub const DEFAULT_SHORTCUT_THRESHOLD: u64 = 10_000;

/// A count that is either a constant or equal to the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountExpr {
    Const(u64),
    EqualsP,
}

impl CountExpr {
    pub fn at(self, p: u64) -> u64 {
        match self {
            CountExpr::Const(v) => v,
            CountExpr::EqualsP => p,
        }
    }

    fn fit(samples: &[(u64, u64)]) -> Option<CountExpr> {
        let (_, first) = *samples.first()?;
        if samples.iter().all(|&(_, v)| v == first) {
            Some(CountExpr::Const(first))
        } else if samples.iter().all(|&(p, v)| v == p) {
            Some(CountExpr::EqualsP)
        } else {
            None
        }
    }
}

impl fmt::Display for CountExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountExpr::Const(v) => write!(f, "{v}"),
            CountExpr::EqualsP => f.write_str("p"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub class: ResidueClass,
    pub fixed: CountExpr,
    pub exact2: CountExpr,
    pub root2: CountExpr,
}

/// Per-residue-class counts for one family, as observed by enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Characterization {
    pub family: Family,
    pub verified_up_to: u64,
    pub classes: Vec<ClassCounts>,
}

impl Characterization {
    /// Enumerates every prime in `[family.min_prime(), p_max]` and every
    /// residue `c mod p`, and fits each class's counts to a [`CountExpr`].
    pub fn derive(family: Family, p_max: u64) -> Result<Self> {
        if family == Family::Generic {
            return domain("no residue-class table for the generic family");
        }
        let primes: Vec<u64> = (family.min_prime()..=p_max).filter(|&q| crate::modmath::is_prime_small(q)).collect();
        let mut classes = Vec::new();
        for class in ResidueClass::ALL {
            let mut fixed = Vec::new();
            let mut exact2 = Vec::new();
            for &p in &primes {
                for c in 0..p as i64 {
                    if ResidueClass::of(c, p) != class {
                        continue;
                    }
                    let (f, e) = classify_counts(&MapParams::for_family(family, c, p)?);
                    fixed.push((p, f));
                    exact2.push((p, e));
                }
            }
            if fixed.is_empty() {
                continue;
            }
            let root2: Vec<(u64, u64)> = fixed.iter().zip(&exact2).map(|(&(p, f), &(_, e))| (p, f + e)).collect();
            let fit = |s: &[(u64, u64)], what: &str| {
                CountExpr::fit(s).ok_or_else(|| Error::Domain(format!("{family}: {what} count for {} is not uniform", class.label())))
            };
            classes.push(ClassCounts {
                class,
                fixed: fit(&fixed, "fixed")?,
                exact2: fit(&exact2, "exact-2")?,
                root2: fit(&root2, "root")?,
            });
        }
        Ok(Characterization { family, verified_up_to: p_max, classes })
    }

    /// The table for `family` derived at [`CHARACTERIZATION_PRIME_BOUND`], computed once.
    pub fn verified(family: Family) -> Result<&'static Characterization> {
        static DEGREE_P: OnceLock<Result<Characterization>> = OnceLock::new();
        static DEGREE_P_MINUS_ONE: OnceLock<Result<Characterization>> = OnceLock::new();
        let cell = match family {
            Family::DegreeP => &DEGREE_P,
            Family::DegreePMinusOne => &DEGREE_P_MINUS_ONE,
            Family::Generic => return domain("no residue-class table for the generic family"),
        };
        cell.get_or_init(|| Characterization::derive(family, CHARACTERIZATION_PRIME_BOUND)).as_ref().map_err(Clone::clone)
    }

    pub fn class(&self, class: ResidueClass) -> Option<&ClassCounts> {
        self.classes.iter().find(|cc| cc.class == class)
    }

    /// `(fixed, exact2)` for `(c, p)` read from the table.
    pub fn counts(&self, c: i64, p: u64) -> Result<(u64, u64)> {
        let cc = self
            .class(ResidueClass::of(c, p))
            .ok_or_else(|| Error::Domain(format!("class {} never observed", ResidueClass::of(c, p).label())))?;
        Ok((cc.fixed.at(p), cc.exact2.at(p)))
    }
}

/// Where per-prime counts come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOptions {
    /// Coefficients with `|c|` above this use the residue-class table.
    pub shortcut_threshold: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { shortcut_threshold: DEFAULT_SHORTCUT_THRESHOLD }
    }
}

impl CountOptions {
    pub fn brute_force_only() -> Self {
        CountOptions { shortcut_threshold: u64::MAX }
    }
}

/// `(fixed, exact2)` for the family's map at `(c, p)`.
pub fn family_counts(family: Family, c: i64, p: u64, opts: CountOptions) -> Result<(u64, u64)> {
    if c.unsigned_abs() > opts.shortcut_threshold {
        Characterization::verified(family)?.counts(c, p)
    } else {
        Ok(classify_counts(&MapParams::for_family(family, c, p)?))
    }
}

fn count_under(family: Family, c: i64, p: u64, semantics: CountSemantics, opts: CountOptions) -> Result<u64> {
    let (fixed, exact2) = family_counts(family, c, p, opts)?;
    Ok(match semantics {
        CountSemantics::ExactPeriodTwo => exact2,
        CountSemantics::PeriodDividingTwo => fixed + exact2,
    })
}

/// Which primes an average ranges over, by the residue of `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Selector {
    /// `p | c`
    Divides,
    /// `p ∤ c`
    NotDivides,
    /// `p | c − 1`, primes up to `c − 1`
    DividesCMinusOne,
    /// `p | c + 1`, primes up to `c + 1`
    DividesCPlusOne,
    /// `c ≢ 0, ±1 (mod p)`
    OtherClass,
}

impl Selector {
    pub fn slug(self) -> &'static str {
        match self {
            Selector::Divides => "divides",
            Selector::NotDivides => "not-divides",
            Selector::DividesCMinusOne => "divides-c-minus-1",
            Selector::DividesCPlusOne => "divides-c-plus-1",
            Selector::OtherClass => "other-class",
        }
    }

    pub fn admits(self, c: i64, p: u64) -> bool {
        let class = ResidueClass::of(c, p);
        match self {
            Selector::Divides => class == ResidueClass::Zero,
            Selector::NotDivides => class != ResidueClass::Zero,
            Selector::DividesCMinusOne => class == ResidueClass::One,
            Selector::DividesCPlusOne => class == ResidueClass::MinusOne,
            Selector::OtherClass => class == ResidueClass::Other,
        }
    }

    /// Upper end of the prime range for coefficient `c`.
    pub fn prime_bound(self, c: u64) -> u64 {
        match self {
            Selector::DividesCMinusOne => c - 1,
            Selector::DividesCPlusOne => c + 1,
            _ => c,
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Selector::Divides, Selector::NotDivides, Selector::DividesCMinusOne, Selector::DividesCPlusOne, Selector::OtherClass]
            .into_iter()
            .find(|sel| sel.slug() == s)
            .ok_or_else(|| Error::Parse(format!("unknown selector {s:?}")))
    }
}

/// Exact non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Option<Ratio> {
        if den == 0 {
            return None;
        }
        let g = num.gcd(&den);
        Some(Ratio { num: num / g, den: den / g })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_integer(self, v: u128) -> bool {
        self.den == 1 && self.num == v
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// One sample of an average over qualifying primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvgPoint {
    pub c: u64,
    pub family: Family,
    pub selector: Selector,
    pub semantics: CountSemantics,
    pub numerator: u128,
    pub denominator: u64,
    /// `None` when no prime qualifies.
    pub value: Option<Ratio>,
    /// Same average taken over the published predictions.
    pub paper_value: Option<Ratio>,
}

fn check_family(family: Family) -> Result<()> {
    if family == Family::Generic {
        return domain("statistics are defined for degree-p and degree-p-minus-1 only");
    }
    Ok(())
}

/// Σ count / #qualifying primes over `family.min_prime() ≤ p ≤ bound`.
pub fn avg_point(c: u64, family: Family, selector: Selector, semantics: CountSemantics, table: &PrimeTable, opts: CountOptions) -> Result<AvgPoint> {
    check_family(family)?;
    if c < 3 {
        return domain(format!("averages need c >= 3, got {c}"));
    }
    let ci = i64::try_from(c).map_err(|_| Error::Range(format!("c = {c} too large")))?;
    let primes = table.primes_between(family.min_prime(), selector.prime_bound(c))?;
    let mut numerator = 0u128;
    let mut paper_numerator = 0u128;
    let mut denominator = 0u64;
    for &p in primes.iter().filter(|&&p| selector.admits(ci, p)) {
        numerator += count_under(family, ci, p, semantics, opts)? as u128;
        paper_numerator += paper_predicted_count(family, ci, p)? as u128;
        denominator += 1;
    }
    Ok(AvgPoint {
        c,
        family,
        selector,
        semantics,
        numerator,
        denominator,
        value: Ratio::new(numerator, denominator as u128),
        paper_value: Ratio::new(paper_numerator, denominator as u128),
    })
}

pub fn avg_series(family: Family, selector: Selector, semantics: CountSemantics, c_list: &[u64], table: &PrimeTable, opts: CountOptions) -> Result<Vec<AvgPoint>> {
    c_list.par_iter().map(|&c| avg_point(c, family, selector, semantics, table, opts)).collect()
}

/// Which count value puts a prime in a density's numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DensityCondition {
    /// count = p
    AllRoots,
    /// count = k
    Exactly(u64),
}

impl DensityCondition {
    pub fn holds(self, count: u64, p: u64) -> bool {
        match self {
            DensityCondition::AllRoots => count == p,
            DensityCondition::Exactly(k) => count == k,
        }
    }
}

impl fmt::Display for DensityCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityCondition::AllRoots => f.write_str("all-roots"),
            DensityCondition::Exactly(0) => f.write_str("no-roots"),
            DensityCondition::Exactly(k) => write!(f, "roots={k}"),
        }
    }
}

impl FromStr for DensityCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-roots" => Ok(DensityCondition::AllRoots),
            "no-roots" => Ok(DensityCondition::Exactly(0)),
            "one-root" => Ok(DensityCondition::Exactly(1)),
            "two-roots" => Ok(DensityCondition::Exactly(2)),
            other => other
                .strip_prefix("roots=")
                .and_then(|k| k.parse().ok())
                .map(DensityCondition::Exactly)
                .ok_or_else(|| Error::Parse(format!("unknown condition {other:?}"))),
        }
    }
}

/// Fraction of primes in `[family.min_prime(), c]` whose count meets a condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub c: u64,
    pub family: Family,
    pub condition: DensityCondition,
    pub semantics: CountSemantics,
    pub numerator: u64,
    /// Numerator under the published predictions.
    pub paper_numerator: u64,
    pub denominator: u64,
    pub ratio: f64,
    pub paper_ratio: f64,
}

pub fn density_point(c: u64, family: Family, condition: DensityCondition, semantics: CountSemantics, table: &PrimeTable, opts: CountOptions) -> Result<DensityPoint> {
    check_family(family)?;
    if c < family.min_prime() {
        return domain(format!("{family} densities need c >= {}, got {c}", family.min_prime()));
    }
    let ci = i64::try_from(c).map_err(|_| Error::Range(format!("c = {c} too large")))?;
    let primes = table.primes_between(family.min_prime(), c)?;
    let mut numerator = 0u64;
    let mut paper_numerator = 0u64;
    for &p in primes {
        if condition.holds(count_under(family, ci, p, semantics, opts)?, p) {
            numerator += 1;
        }
        if condition.holds(paper_predicted_count(family, ci, p)?, p) {
            paper_numerator += 1;
        }
    }
    let denominator = primes.len() as u64;
    Ok(DensityPoint {
        c,
        family,
        condition,
        semantics,
        numerator,
        paper_numerator,
        denominator,
        ratio: numerator as f64 / denominator as f64,
        paper_ratio: paper_numerator as f64 / denominator as f64,
    })
}

pub fn density_series(family: Family, condition: DensityCondition, semantics: CountSemantics, c_list: &[u64], table: &PrimeTable, opts: CountOptions) -> Result<Vec<DensityPoint>> {
    c_list.par_iter().map(|&c| density_point(c, family, condition, semantics, table, opts)).collect()
}

/// `ω(c) ≤ log₂ σ₀(c) ≤ Ω(c)` evaluated at one `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityBound {
    pub c: u64,
    pub omega: u32,
    pub log2_divisor_count: f64,
    pub big_omega: u32,
    pub holds: bool,
}

pub fn density_bound_check(c: u64) -> Result<DensityBound> {
    if c < 2 {
        return domain(format!("bound check needs c >= 2, got {c}"));
    }
    let prof = arith_profile(c)?;
    let log2 = (prof.divisor_count as f64).log2();
    // integer form of the chain: 2^ω ≤ σ₀ ≤ 2^Ω
    let holds = (1u64 << prof.omega_all) <= prof.divisor_count && prof.divisor_count <= (1u64 << prof.big_omega);
    Ok(DensityBound { c, omega: prof.omega_all, log2_divisor_count: log2, big_omega: prof.big_omega, holds })
}

/// The quantities behind the unbounded `p | c` average for the degree-p family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub c: u64,
    /// σ_{1,p}(c)
    pub odd_prime_divisor_sum: u64,
    pub omega_odd: u32,
    pub average: Option<Ratio>,
    /// Σ_{3 ≤ p ≤ c} p
    pub odd_prime_sum: u128,
    pub asymptotic_reference: f64,
}

pub fn growth_point(c: u64, table: &PrimeTable) -> Result<GrowthPoint> {
    if c < 3 {
        return domain(format!("growth points need c >= 3, got {c}"));
    }
    let prof = arith_profile(c)?;
    Ok(GrowthPoint {
        c,
        odd_prime_divisor_sum: prof.sum_odd_prime_divisors,
        omega_odd: prof.omega_odd,
        average: Ratio::new(prof.sum_odd_prime_divisors as u128, prof.omega_odd as u128),
        odd_prime_sum: sum_primes_upto(c, table, PrimeSumRange::OddOnly)?,
        asymptotic_reference: ref_sum_primes_asymptotic(c, table)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::count_period2;
    use crate::modmath::sieve_primes;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| sieve_primes(200_000).unwrap())
    }

    const ROOTS: CountSemantics = CountSemantics::PeriodDividingTwo;

    #[test]
    fn characterization_tables() {
        let t = Characterization::verified(Family::DegreeP).unwrap();
        let zero = t.class(ResidueClass::Zero).unwrap();
        assert_eq!((zero.fixed, zero.exact2, zero.root2), (CountExpr::EqualsP, CountExpr::Const(0), CountExpr::EqualsP));
        for class in [ResidueClass::One, ResidueClass::MinusOne, ResidueClass::Other] {
            assert_eq!(t.class(class).unwrap().root2, CountExpr::Const(0));
        }
        let t = Characterization::verified(Family::DegreePMinusOne).unwrap();
        let roots: Vec<(ResidueClass, CountExpr, CountExpr)> = t.classes.iter().map(|c| (c.class, c.root2, c.exact2)).collect();
        assert_eq!(
            roots,
            vec![
                (ResidueClass::Zero, CountExpr::Const(2), CountExpr::Const(0)),
                (ResidueClass::One, CountExpr::Const(1), CountExpr::Const(0)),
                (ResidueClass::MinusOne, CountExpr::Const(2), CountExpr::Const(2)),
                (ResidueClass::Other, CountExpr::Const(1), CountExpr::Const(0)),
            ]
        );
        assert!(Characterization::verified(Family::Generic).is_err());
    }

    #[test]
    fn shortcut_agrees_with_brute_force_beyond_derivation_range() {
        for p in [211u64, 401, 1009] {
            for family in [Family::DegreeP, Family::DegreePMinusOne] {
                for c in [0i64, 1, -1, 2, 17, p as i64 - 1, p as i64 + 1, 3 * p as i64] {
                    let brute = count_period2(&MapParams::for_family(family, c, p).unwrap());
                    let fast = Characterization::verified(family).unwrap().counts(c, p).unwrap();
                    assert_eq!(fast, (brute.fixed_count, brute.exact2_count), "{family} c={c} p={p}");
                }
            }
        }
    }

    #[test]
    fn average_examples() {
        let t = table();
        let o = CountOptions::default();
        let a = avg_point(15, Family::DegreeP, Selector::Divides, ROOTS, t, o).unwrap();
        assert_eq!((a.numerator, a.denominator, a.value.unwrap().to_string()), (8, 2, "4".to_string()));
        let a = avg_point(9, Family::DegreeP, Selector::Divides, ROOTS, t, o).unwrap();
        assert!(a.value.unwrap().is_integer(3));
        let a = avg_point(8, Family::DegreeP, Selector::Divides, ROOTS, t, o).unwrap();
        assert_eq!((a.denominator, a.value), (0, None));
        let a = avg_point(35, Family::DegreePMinusOne, Selector::Divides, ROOTS, t, o).unwrap();
        assert!(a.value.unwrap().is_integer(2));
        assert!(avg_point(2, Family::DegreeP, Selector::Divides, ROOTS, t, o).is_err());
        assert!(avg_point(15, Family::Generic, Selector::Divides, ROOTS, t, o).is_err());
    }

    #[test]
    fn average_c_minus_one_is_one_and_c_plus_one_is_two() {
        let t = table();
        for c in [6u64, 36, 211] {
            let a = avg_point(c, Family::DegreePMinusOne, Selector::DividesCMinusOne, ROOTS, t, CountOptions::default()).unwrap();
            assert!(a.value.unwrap().is_integer(1), "c = {c}: {a:?}");
            let b = avg_point(c, Family::DegreePMinusOne, Selector::DividesCPlusOne, ROOTS, t, CountOptions::default()).unwrap();
            assert!(b.value.unwrap().is_integer(2), "c = {c}: {b:?}");
            assert!(b.paper_value.unwrap().is_integer(1));
        }
    }

    #[test]
    fn not_divides_average_is_zero() {
        let t = table();
        let pts = avg_series(Family::DegreeP, Selector::NotDivides, ROOTS, &[10, 99, 1000, 20_000], t, CountOptions::default()).unwrap();
        for pt in pts {
            assert_eq!(pt.numerator, 0);
            assert!(pt.value.unwrap().is_integer(0));
        }
    }

    #[test]
    fn primorial_averages_increase() {
        let pts = avg_series(Family::DegreeP, Selector::Divides, ROOTS, &[15, 105, 1155, 15015], table(), CountOptions::default()).unwrap();
        let vals: Vec<Ratio> = pts.iter().map(|p| p.value.unwrap()).collect();
        assert_eq!(vals.iter().map(|r| r.to_string()).collect::<Vec<_>>(), vec!["4", "5", "13/2", "39/5"]);
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn density_examples() {
        let t = table();
        let o = CountOptions::default();
        let d = density_point(30, Family::DegreeP, DensityCondition::AllRoots, ROOTS, t, o).unwrap();
        assert_eq!((d.numerator, d.denominator), (2, 9));
        let d = density_point(30, Family::DegreeP, DensityCondition::Exactly(0), ROOTS, t, o).unwrap();
        assert_eq!((d.numerator, d.denominator), (7, 9));
        let d = density_point(100_000, Family::DegreeP, DensityCondition::AllRoots, ROOTS, t, o).unwrap();
        assert!(d.ratio < 1e-3);
    }

    #[test]
    fn degree_p_density_numerator_is_omega_odd() {
        let t = table();
        for c in (3..400u64).chain([1155, 9999, 15015, 30030]) {
            let d = density_point(c, Family::DegreeP, DensityCondition::AllRoots, ROOTS, t, CountOptions::brute_force_only()).unwrap();
            assert_eq!(d.numerator, arith_profile(c).unwrap().omega_odd as u64, "c = {c}");
            assert_eq!(d.numerator, d.paper_numerator);
            let e = density_point(c, Family::DegreeP, DensityCondition::Exactly(0), ROOTS, t, CountOptions::brute_force_only()).unwrap();
            assert_eq!(d.numerator + e.numerator, d.denominator);
        }
    }

    #[test]
    fn p_minus_one_one_or_two_root_density() {
        let t = table();
        let c = 10_000u64;
        let o = CountOptions::default();
        let one = density_point(c, Family::DegreePMinusOne, DensityCondition::Exactly(1), ROOTS, t, o).unwrap();
        let two = density_point(c, Family::DegreePMinusOne, DensityCondition::Exactly(2), ROOTS, t, o).unwrap();
        // every prime has one or two roots by enumeration
        assert_eq!(one.numerator + two.numerator, one.denominator);
        // the published table puts only primes dividing c or c±1 there
        let bound = ((c as f64).log2() + 2.0) / one.denominator as f64;
        assert!(one.paper_ratio + two.paper_ratio <= bound);
        let omega: u64 = [c - 1, c, c + 1].iter().map(|&v| arith_profile(v).unwrap().omega_odd as u64).sum();
        assert!(one.paper_numerator + two.paper_numerator <= omega);
    }

    #[test]
    fn density_series_trend() {
        let t = table();
        let cs = [100u64, 1000, 10_000, 100_000];
        let all = density_series(Family::DegreeP, DensityCondition::AllRoots, ROOTS, &cs, t, CountOptions::default()).unwrap();
        let none = density_series(Family::DegreeP, DensityCondition::Exactly(0), ROOTS, &cs, t, CountOptions::default()).unwrap();
        assert!(all.windows(2).all(|w| w[1].ratio <= w[0].ratio));
        for (a, n) in all.iter().zip(&none) {
            assert_eq!(a.numerator + n.numerator, a.denominator);
            assert!((a.ratio + n.ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_check_examples() {
        let b = density_bound_check(12).unwrap();
        assert_eq!((b.omega, b.big_omega), (2, 3));
        assert!((b.log2_divisor_count - 6f64.log2()).abs() < 1e-12 && b.holds);
        let b = density_bound_check(1024).unwrap();
        assert_eq!((b.omega, b.big_omega), (1, 10));
        assert!((b.log2_divisor_count - 11f64.log2()).abs() < 1e-12 && b.holds);
        assert!(density_bound_check(1).is_err());
    }

    #[test]
    fn bound_check_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let c = rng.gen_range(2..=1_000_000u64);
            assert!(density_bound_check(c).unwrap().holds, "c = {c}");
        }
    }

    #[test]
    fn growth_examples() {
        let g = growth_point(15015, table()).unwrap();
        assert_eq!((g.odd_prime_divisor_sum, g.omega_odd), (39, 5));
        assert!(g.odd_prime_sum > g.odd_prime_divisor_sum as u128);
        assert!(growth_point(2, table()).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!("divides-c-plus-1".parse::<Selector>().unwrap(), Selector::DividesCPlusOne);
        assert!("nope".parse::<Selector>().is_err());
        assert_eq!("all-roots".parse::<DensityCondition>().unwrap(), DensityCondition::AllRoots);
        assert_eq!("roots=3".parse::<DensityCondition>().unwrap(), DensityCondition::Exactly(3));
        assert_eq!("no-roots".parse::<DensityCondition>().unwrap().to_string(), "no-roots");
        assert!("roots=x".parse::<DensityCondition>().is_err());
    }
}
