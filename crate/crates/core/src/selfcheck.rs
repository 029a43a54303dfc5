//! Cross-oracle consistency suite at fixed small parameters.

use std::fmt;

use crate::dynamics::{count_period2, cycle_structure, Family, MapParams};
use crate::modmath::{arith_profile, is_prime_small, mod_pow, sieve_primes, PrimeTable};
use crate::polyfp::{count_roots_via_gcd, second_iterate_poly};
use crate::stats::{Characterization, CHARACTERIZATION_PRIME_BOUND};

/// Environment variable that selects a deliberate fault, for testing the suite itself.
pub const INJECT_ENV: &str = "PERIOSCOPE_SELFCHECK_INJECT";

const TABLE_LIMIT: u64 = 10_000;
const MAP_PRIME_MAX: u64 = 31;
const PROFILE_MAX: u64 = 5_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds the composite 9 to the prime table.
    PrimeTable,
}

impl Fault {
    pub fn parse(s: &str) -> Option<Fault> {
        match s {
            "prime-table" => Some(Fault::PrimeTable),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: u64,
    /// First counterexample, if any.
    pub witness: Option<String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "ok    {} ({} cases)", self.name, self.cases),
            Some(w) => write!(f, "FAIL  {}: {}", self.name, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfcheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.witness.is_none())
    }
}

impl fmt::Display for SelfcheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        write!(f, "{}", if self.passed() { "selfcheck passed" } else { "selfcheck FAILED" })
    }
}

struct Check {
    name: &'static str,
    cases: u64,
    witness: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, witness: None }
    }

    /// Records one case; keeps only the first failure.
    fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome { name: self.name, cases: self.cases, witness: self.witness }
    }
}

fn table_for(fault: Option<Fault>) -> PrimeTable {
    let table = sieve_primes(TABLE_LIMIT).expect("limit >= 2");
    match fault {
        Some(Fault::PrimeTable) => {
            let mut primes = table.primes().to_vec();
            let at = primes.partition_point(|&q| q < 9);
            primes.insert(at, 9);
            PrimeTable::from_raw_unchecked(TABLE_LIMIT, primes)
        }
        None => table,
    }
}

fn map_cases() -> impl Iterator<Item = (Family, i64, u64)> {
    [Family::DegreeP, Family::DegreePMinusOne].into_iter().flat_map(|family| {
        (family.min_prime()..=MAP_PRIME_MAX)
            .filter(|&p| is_prime_small(p))
            .flat_map(move |p| (0..p as i64).map(move |c| (family, c, p)))
    })
}

pub fn run(fault: Option<Fault>) -> SelfcheckReport {
    let table = table_for(fault);
    let mut outcomes = Vec::new();

    let mut sieve = Check::new("sieve vs trial division");
    let listed: Vec<u64> = table.primes().to_vec();
    for n in 0..=TABLE_LIMIT {
        let in_table = listed.binary_search(&n).is_ok();
        sieve.case(in_table == is_prime_small(n), || format!("n={n} listed={in_table} prime={}", is_prime_small(n)));
    }
    outcomes.push(sieve.done());

    let mut fermat = Check::new("Fermat collapse z^p = z");
    for &p in listed.iter().take_while(|&&q| q <= 97) {
        for z in 0..p {
            fermat.case(mod_pow(z, p, p) == z, || format!("p={p} z={z}"));
        }
    }
    outcomes.push(fermat.done());

    let mut gcd = Check::new("gcd root count vs enumeration");
    let mut split = Check::new("root count = fixed + exact-2");
    let mut cycles = Check::new("cycle and tail mass = p");
    for (family, c, p) in map_cases() {
        let params = MapParams::for_family(family, c, p).expect("valid family parameters");
        let report = count_period2(&params);
        let roots = second_iterate_poly(&params).and_then(|f| count_roots_via_gcd(&f));
        gcd.case(roots.as_ref().ok() == Some(&(report.root2_count as usize)), || {
            format!("{family} c={c} p={p}: gcd {roots:?} vs brute {}", report.root2_count)
        });
        split.case(report.root2_count == report.fixed_count + report.exact2_count, || format!("{family} c={c} p={p}"));
        let cs = cycle_structure(&params);
        cycles.case(cs.on_cycle_count + cs.tail_count == p, || format!("{family} c={c} p={p}"));
    }
    outcomes.extend([gcd.done(), split.done(), cycles.done()]);

    let mut profile = Check::new("2^omega <= divisors <= 2^Omega");
    for c in 1..=PROFILE_MAX {
        let prof = arith_profile(c).expect("c >= 1");
        let ok = (1u64 << prof.omega_all) <= prof.divisor_count
            && prof.divisor_count <= (1u64 << prof.big_omega)
            && prof.omega_odd <= prof.omega_all
            && prof.omega_all <= prof.big_omega;
        profile.case(ok, || format!("c={c} {prof:?}"));
    }
    outcomes.push(profile.done());

    let mut shortcut = Check::new("residue-class table derivation");
    for family in [Family::DegreeP, Family::DegreePMinusOne] {
        let derived = Characterization::derive(family, CHARACTERIZATION_PRIME_BOUND);
        shortcut.case(derived.is_ok(), || format!("{family}: {}", derived.unwrap_err()));
    }
    outcomes.push(shortcut.done());

    SelfcheckReport { outcomes }
}
