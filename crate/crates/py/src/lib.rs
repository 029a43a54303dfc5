use std::str::FromStr;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use perioscope::dynamics::{self, CRange, CountSemantics, Family, MapParams};
use perioscope::modmath::{self, sieve_primes};
use perioscope::polyfp::{self, FpPoly, IntPoly};
use perioscope::stats::{self, CountOptions, DensityCondition, Selector, DEFAULT_SHORTCUT_THRESHOLD};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: FromStr>(s: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(err)
}

/// Period-2 counts of one map.
#[pyclass(frozen, name = "CountReport")]
struct PyCountReport(dynamics::CountReport);

#[pymethods]
impl PyCountReport {
    #[getter]
    fn d(&self) -> u64 {
        self.0.params.d()
    }
    #[getter]
    fn c(&self) -> i64 {
        self.0.params.c()
    }
    #[getter]
    fn p(&self) -> u64 {
        self.0.params.p()
    }
    #[getter]
    fn family(&self) -> &'static str {
        self.0.family.slug()
    }
    #[getter]
    fn fixed_count(&self) -> u64 {
        self.0.fixed_count
    }
    #[getter]
    fn exact2_count(&self) -> u64 {
        self.0.exact2_count
    }
    #[getter]
    fn root2_count(&self) -> u64 {
        self.0.root2_count
    }
    #[getter]
    fn fixed_points(&self) -> Vec<u64> {
        self.0.fixed_points.clone()
    }
    #[getter]
    fn exact2_points(&self) -> Vec<u64> {
        self.0.exact2_points.clone()
    }
    #[getter]
    fn paper_claim(&self) -> Option<u64> {
        self.0.paper_claim
    }

    #[pyo3(signature = (semantics = "root-count"))]
    fn count(&self, semantics: &str) -> PyResult<u64> {
        Ok(self.0.count(parse::<CountSemantics>(semantics)?))
    }

    #[pyo3(signature = (semantics = "root-count"))]
    fn matches_paper(&self, semantics: &str) -> PyResult<bool> {
        Ok(self.0.matches_paper(parse::<CountSemantics>(semantics)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "CountReport(d={}, c={}, p={}, fixed={}, exact2={}, root2={})",
            self.0.params.d(),
            self.0.params.c(),
            self.0.params.p(),
            self.0.fixed_count,
            self.0.exact2_count,
            self.0.root2_count
        )
    }
}

/// Polynomial over F_p.
#[pyclass(frozen, eq, name = "Poly")]
#[derive(PartialEq)]
struct PyPoly(FpPoly);

#[pymethods]
impl PyPoly {
    /// Parses `"c0 c1 ... @ p"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPoly(parse(text)?))
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }
    #[getter]
    fn coeffs(&self) -> Vec<u64> {
        self.0.coeffs().to_vec()
    }
    #[getter]
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn count_roots(&self) -> PyResult<usize> {
        polyfp::count_roots_via_gcd(&self.0).map_err(err)
    }

    fn pattern(&self) -> PyResult<Vec<usize>> {
        polyfp::distinct_degree_pattern(&self.0).map(|pat| pat.degrees).map_err(err)
    }

    fn frobenius(&self) -> PyResult<PyPoly> {
        polyfp::frobenius_power(&self.0).map(PyPoly).map_err(err)
    }

    fn eval(&self, z: u64) -> u64 {
        self.0.eval(z)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

#[pyfunction(name = "sieve_primes")]
fn py_sieve_primes(limit: u64) -> PyResult<Vec<u64>> {
    sieve_primes(limit).map(|t| t.primes().to_vec()).map_err(err)
}

#[pyfunction(name = "mod_pow")]
fn py_mod_pow(base: u64, exp: u64, modulus: u64) -> PyResult<u64> {
    if modulus < 2 {
        return Err(PyValueError::new_err("modulus must be at least 2"));
    }
    Ok(modmath::mod_pow(base, exp, modulus))
}

#[pyfunction(name = "arith_profile")]
fn py_arith_profile(py: Python<'_>, c: u64) -> PyResult<Bound<'_, PyDict>> {
    let prof = modmath::arith_profile(c).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("c", prof.c)?;
    d.set_item("omega_all", prof.omega_all)?;
    d.set_item("omega_odd", prof.omega_odd)?;
    d.set_item("big_omega", prof.big_omega)?;
    d.set_item("divisor_count", prof.divisor_count)?;
    d.set_item("sum_odd_prime_divisors", prof.sum_odd_prime_divisors)?;
    Ok(d)
}

/// Counts for `z^d + c` mod p.
#[pyfunction(name = "count_period2")]
fn py_count_period2(d: u64, c: i64, p: u64) -> PyResult<PyCountReport> {
    let params = MapParams::new(d, c, p).map_err(err)?;
    Ok(PyCountReport(dynamics::count_period2(&params)))
}

#[pyfunction(name = "verify_family")]
#[pyo3(signature = (family, p_max, c = "0..3p", p_min = 3))]
fn py_verify_family(family: &str, p_max: u64, c: &str, p_min: u64) -> PyResult<Vec<PyCountReport>> {
    let table = sieve_primes(p_max.max(2)).map_err(err)?;
    let range: CRange = parse(c)?;
    let reports = dynamics::verify_family(parse(family)?, p_min, p_max, &range, &table).map_err(err)?;
    Ok(reports.into_iter().map(PyCountReport).collect())
}

#[pyfunction(name = "build_second_iterate")]
fn py_build_second_iterate(family: &str, c: i64, p: u64) -> PyResult<PyPoly> {
    polyfp::build_second_iterate(parse::<Family>(family)?, c, p).map(PyPoly).map_err(err)
}

#[pyfunction(name = "discriminant")]
fn py_discriminant(coeffs: Vec<i64>) -> PyResult<BigInt> {
    polyfp::discriminant_int(&IntPoly::from_i64(&coeffs)).map_err(err)
}

#[pyfunction(name = "resultant")]
fn py_resultant(f: Vec<i64>, g: Vec<i64>) -> PyResult<BigInt> {
    polyfp::resultant_int(&IntPoly::from_i64(&f), &IntPoly::from_i64(&g)).map_err(err)
}

/// Returns `(numerator, denominator)`; the denominator is 0 when undefined.
#[pyfunction(name = "avg_point")]
#[pyo3(signature = (c, family, selector, semantics = "root-count", shortcut_threshold = DEFAULT_SHORTCUT_THRESHOLD))]
fn py_avg_point(c: u64, family: &str, selector: &str, semantics: &str, shortcut_threshold: u64) -> PyResult<(u128, u64)> {
    let table = sieve_primes(c.max(2) + 1).map_err(err)?;
    let opts = CountOptions { shortcut_threshold };
    let pt = stats::avg_point(c, parse(family)?, parse::<Selector>(selector)?, parse(semantics)?, &table, opts).map_err(err)?;
    Ok((pt.numerator, pt.denominator))
}

/// Returns `(numerator, denominator, paper_numerator)`.
#[pyfunction(name = "density_point")]
#[pyo3(signature = (c, family, condition = "all-roots", semantics = "root-count", shortcut_threshold = DEFAULT_SHORTCUT_THRESHOLD))]
fn py_density_point(c: u64, family: &str, condition: &str, semantics: &str, shortcut_threshold: u64) -> PyResult<(u64, u64, u64)> {
    let table = sieve_primes(c.max(2)).map_err(err)?;
    let opts = CountOptions { shortcut_threshold };
    let pt = stats::density_point(c, parse(family)?, parse::<DensityCondition>(condition)?, parse(semantics)?, &table, opts).map_err(err)?;
    Ok((pt.numerator, pt.denominator, pt.paper_numerator))
}

#[pyfunction(name = "selfcheck")]
fn py_selfcheck() -> (bool, String) {
    let report = perioscope::selfcheck::run(None);
    (report.passed(), report.to_string())
}

#[pymodule]
#[pyo3(name = "perioscope")]
fn perioscope_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCountReport>()?;
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(py_sieve_primes, m)?)?;
    m.add_function(wrap_pyfunction!(py_mod_pow, m)?)?;
    m.add_function(wrap_pyfunction!(py_arith_profile, m)?)?;
    m.add_function(wrap_pyfunction!(py_count_period2, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_family, m)?)?;
    m.add_function(wrap_pyfunction!(py_build_second_iterate, m)?)?;
    m.add_function(wrap_pyfunction!(py_discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(py_resultant, m)?)?;
    m.add_function(wrap_pyfunction!(py_avg_point, m)?)?;
    m.add_function(wrap_pyfunction!(py_density_point, m)?)?;
    m.add_function(wrap_pyfunction!(py_selfcheck, m)?)?;
    Ok(())
}
