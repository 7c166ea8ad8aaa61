//! Outcome records for exact identity checks.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, detail: detail.into() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, detail: detail.into() }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: ok, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Compares two series on their common precision and describes the first mismatch.
pub fn series_eq(name: &str, a: &crate::series::Series, b: &crate::series::Series) -> Check {
    let p = a.prec().min(b.prec());
    let d = a - b;
    if d.is_zero_to(p) {
        Check::pass(name, format!("equal through x^{}", p - 1))
    } else {
        let v = d.valuation();
        Check::fail(name, format!("first difference at x^{v}: {}", d.coeff(v)))
    }
}

/// A series that must vanish on its whole precision.
pub fn series_zero(name: &str, a: &crate::series::Series) -> Check {
    if a.is_zero() {
        Check::pass(name, format!("zero through x^{}", a.prec() - 1))
    } else {
        let v = a.valuation();
        Check::fail(name, format!("nonzero residual at x^{v}: {}", a.coeff(v)))
    }
}

/// Like [`series_zero`] but also fails when fewer than `min_prec` coefficients are known.
pub fn series_zero_to(name: &str, a: &crate::series::Series, min_prec: i64) -> Check {
    if a.prec() < min_prec {
        return Check::fail(name, format!("only known below x^{}, needed x^{min_prec}", a.prec()));
    }
    series_zero(name, &a.truncate(a.prec()))
}

/// Like [`series_eq`] but also fails when the common precision is below `min_prec`.
pub fn series_eq_to(name: &str, a: &crate::series::Series, b: &crate::series::Series, min_prec: i64) -> Check {
    let p = a.prec().min(b.prec());
    if p < min_prec {
        return Check::fail(name, format!("only known below x^{p}, needed x^{min_prec}"));
    }
    series_eq(name, a, b)
}
