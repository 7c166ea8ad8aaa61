//! Finite Laurent polynomials in the symbol L.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use crate::cyclotomic::Cyc;
use crate::series::Series;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentInL {
    n: u32,
    terms: BTreeMap<i64, Cyc>,
}

impl LaurentInL {
    pub fn zero(n: u32) -> Self {
        LaurentInL { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u32) -> Self {
        LaurentInL::monomial(Cyc::one(n), 0)
    }

    pub fn monomial(c: Cyc, e: i64) -> Self {
        let mut p = LaurentInL::zero(c.order());
        p.add_term(e, c);
        p
    }

    pub fn constant(c: Cyc) -> Self {
        LaurentInL::monomial(c, 0)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Cyc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: i64) -> Cyc {
        self.terms.get(&e).cloned().unwrap_or_else(|| Cyc::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i64, c: Cyc) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(|| Cyc::zero(c.order()));
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        let mut out = LaurentInL::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&Cyc::from_rational(self.n, r.clone()))
    }

    /// Multiplication by L^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentInL { n: self.n, terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Substitutes L ↦ c·L.
    pub fn rescale(&self, c: &Cyc) -> Self {
        let cinv = c.inv().expect("rescale by zero");
        let mut out = LaurentInL::zero(self.n);
        for (e, v) in &self.terms {
            let f = if *e >= 0 { c.pow(*e as u32) } else { cinv.pow((-e) as u32) };
            out.add_term(*e, v * &f);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(LaurentInL::one(self.n), |acc, _| &acc * self)
    }

    /// L-degree-wise derivative L d/dL.
    pub fn l_d_dl(&self) -> Self {
        let mut out = LaurentInL::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(*e, v.scale_int(*e));
        }
        out
    }

    /// Evaluates at the series `l` (typically L(x)) to its precision.
    pub fn eval(&self, l: &Series) -> Result<Series, Error> {
        let prec_rel = l.prec() - l.valuation();
        let mut acc: Option<Series> = None;
        for (e, c) in &self.terms {
            let t = l.pow(*e)?.scale(c);
            acc = Some(match acc {
                None => t,
                Some(a) => &a + &t,
            });
        }
        Ok(acc.unwrap_or_else(|| Series::zero(self.n, prec_rel)))
    }

    /// Finds the Laurent polynomial p with p(L) = f, given L = x + O(x^2).
    ///
    /// Coefficients are peeled off from the lowest x-power upward. Every coefficient
    /// of f above `max_degree` must then vanish, which certifies the fit.
    pub fn fit(f: &Series, l: &Series, max_degree: i64) -> Result<LaurentInL, Error> {
        let n = f.order();
        let mut rest = f.clone();
        let mut out = LaurentInL::zero(n);
        while !rest.is_zero() {
            let v = rest.valuation();
            if v > max_degree {
                return Err(Error::FitFailed(format!("residual term x^{v} above degree {max_degree}")));
            }
            let c = rest.coeff(v);
            rest = &rest - &l.pow(v)?.scale(&c);
            out.add_term(v, c);
        }
        if rest.prec() <= max_degree {
            return Err(Error::Precision { requested: max_degree + 1, available: rest.prec() });
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentInL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})*L^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a LaurentInL> for &'a LaurentInL {
    type Output = LaurentInL;
    fn add(self, rhs: &'a LaurentInL) -> LaurentInL {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentInL> for &'a LaurentInL {
    type Output = LaurentInL;
    fn sub(self, rhs: &'a LaurentInL) -> LaurentInL {
        self + &(-rhs)
    }
}

impl Neg for &LaurentInL {
    type Output = LaurentInL;
    fn neg(self) -> LaurentInL {
        LaurentInL { n: self.n, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl<'a> Mul<&'a LaurentInL> for &'a LaurentInL {
    type Output = LaurentInL;
    fn mul(self, rhs: &'a LaurentInL) -> LaurentInL {
        let mut out = LaurentInL::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}
