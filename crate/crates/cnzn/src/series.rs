//! Truncated Laurent series in x over Q(ζ_n).
//!
//! A series is `Σ_{k<prec} a_k x^k + O(x^prec)`. Coefficients are stored densely from
//! the valuation upward. Every operation propagates the precision its inputs imply,
//! so a coefficient is never reported unless it is determined.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::Cyc;
use crate::rational::{q, qi};
use crate::Error;

#[derive(Clone, Debug)]
pub struct Series {
    n: u32,
    start: i64,
    coeffs: Vec<Cyc>,
}

impl Series {
    pub fn zero(n: u32, prec: i64) -> Self {
        Series { n, start: prec, coeffs: Vec::new() }
    }

    pub fn constant(c: Cyc, prec: i64) -> Self {
        Series::monomial(c, 0, prec)
    }

    pub fn one(n: u32, prec: i64) -> Self {
        Series::constant(Cyc::one(n), prec)
    }

    /// `c·x^k + O(x^prec)`.
    pub fn monomial(c: Cyc, k: i64, prec: i64) -> Self {
        let n = c.order();
        if k >= prec {
            return Series::zero(n, prec);
        }
        let mut coeffs = vec![Cyc::zero(n); (prec - k) as usize];
        coeffs[0] = c;
        Series::from_coeffs(n, k, coeffs)
    }

    /// Series `x + O(x^prec)`.
    pub fn x(n: u32, prec: i64) -> Self {
        Series::monomial(Cyc::one(n), 1, prec)
    }

    /// Dense coefficients starting at x^start; precision is `start + coeffs.len()`.
    pub fn from_coeffs(n: u32, start: i64, coeffs: Vec<Cyc>) -> Self {
        let mut s = Series { n, start, coeffs };
        s.normalize();
        s
    }

    pub fn from_rationals(n: u32, start: i64, coeffs: Vec<BigRational>) -> Self {
        Series::from_coeffs(n, start, coeffs.into_iter().map(|c| Cyc::from_rational(n, c)).collect())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Exponent of the first undetermined coefficient.
    pub fn prec(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Lowest exponent with a nonzero coefficient, or `prec` if none is known.
    pub fn valuation(&self) -> i64 {
        self.start
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of x^k. Panics when k is at or beyond the precision.
    pub fn coeff(&self, k: i64) -> Cyc {
        assert!(k < self.prec(), "coefficient x^{k} is beyond precision {}", self.prec());
        if k < self.start {
            Cyc::zero(self.n)
        } else {
            self.coeffs[(k - self.start) as usize].clone()
        }
    }

    fn coeff_ref(&self, k: i64) -> Option<&Cyc> {
        if k < self.start {
            None
        } else {
            self.coeffs.get((k - self.start) as usize)
        }
    }

    pub fn coeff_rational(&self, k: i64) -> Option<BigRational> {
        self.coeff(k).as_rational()
    }

    /// Lowers the precision; never raises it.
    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.start {
            return Series::zero(self.n, prec);
        }
        Series { n: self.n, start: self.start, coeffs: self.coeffs[..(prec - self.start) as usize].to_vec() }
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: i64) -> Series {
        Series { n: self.n, start: self.start + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Cyc) -> Series {
        if c.is_zero() {
            return Series::zero(self.n, self.prec());
        }
        Series::from_coeffs(self.n, self.start, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Series {
        self.scale(&Cyc::from_rational(self.n, r.clone()))
    }

    pub fn scale_int(&self, k: i64) -> Series {
        self.scale_rational(&qi(k))
    }

    /// Checked product; errors on mismatched cyclotomic orders.
    pub fn try_mul(&self, other: &Series) -> Result<Series, Error> {
        if self.n != other.n {
            return Err(Error::OrderMismatch(self.n, other.n));
        }
        Ok(self * other)
    }

    /// Multiplicative inverse of a series with a nonzero leading term.
    pub fn invert(&self) -> Result<Series, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = self.start;
        let len = self.coeffs.len();
        let a0inv = self.coeffs[0].inv().ok_or(Error::DivisionByZero)?;
        let mut out: Vec<Cyc> = Vec::with_capacity(len);
        out.push(a0inv.clone());
        for k in 1..len {
            let mut acc = Cyc::zero(self.n);
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[k - j];
                }
            }
            out.push(-(&acc * &a0inv));
        }
        Ok(Series::from_coeffs(self.n, -v, out))
    }

    /// Inverse of a series whose constant term must be nonzero.
    pub fn invert_unit(&self) -> Result<Series, Error> {
        if self.start != 0 {
            return Err(Error::DivisionByZero);
        }
        self.invert()
    }

    pub fn div(&self, other: &Series) -> Result<Series, Error> {
        Ok(self * &other.invert()?)
    }

    /// `(1+u)^{p/q}` for u with zero constant term.
    pub fn binomial_pow(u: &Series, p: i64, qd: i64) -> Result<Series, Error> {
        assert!(qd > 0, "denominator must be positive");
        if u.start <= 0 && !u.is_zero() {
            return Err(Error::Precision { requested: 1, available: u.start });
        }
        let n = u.n;
        let prec = u.prec();
        if prec <= 0 {
            return Ok(Series::zero(n, prec));
        }
        // f = (1+u)^α satisfies (1+u) D f = α f D u; solve coefficientwise.
        let alpha = q(p, qd);
        let len = prec as usize;
        let uc: Vec<Cyc> = (0..prec).map(|k| if k < u.start { Cyc::zero(n) } else { u.coeff(k) }).collect();
        let mut f: Vec<Cyc> = Vec::with_capacity(len);
        f.push(Cyc::one(n));
        for e in 1..len {
            let mut acc = Cyc::zero(n);
            for k in 1..=e {
                if uc[k].is_zero() {
                    continue;
                }
                let w = &alpha * qi(k as i64) - qi((e - k) as i64);
                if w.is_zero() {
                    continue;
                }
                acc += (&uc[k] * &f[e - k]).scale(&w);
            }
            f.push(acc.scale(&q(1, e as i64)));
        }
        Ok(Series::from_coeffs(n, 0, f))
    }

    /// Integer power, negative allowed for invertible series.
    pub fn pow(&self, e: i64) -> Result<Series, Error> {
        if e == 0 {
            // Relative precision is what survives.
            return Ok(Series::one(self.n, (self.prec() - self.start).max(0)));
        }
        let mut b = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<Series> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => &a * &b,
                });
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// The Euler operator x d/dx.
    pub fn d(&self) -> Series {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c.scale_int(self.start + i as i64)).collect();
        Series::from_coeffs(self.n, self.start, coeffs)
    }

    pub fn d_pow(&self, k: usize) -> Series {
        (0..k).fold(self.clone(), |s, _| s.d())
    }

    /// Inverse of D on series without constant term, normalized to have none.
    pub fn d_inv(&self) -> Result<Series, Error> {
        if self.coeff_ref(0).is_some_and(|c| !c.is_zero()) {
            return Err(Error::DivisionByZero);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.start + i as i64;
                if k == 0 {
                    Cyc::zero(self.n)
                } else {
                    c.scale(&q(1, k))
                }
            })
            .collect();
        Ok(Series::from_coeffs(self.n, self.start, coeffs))
    }

    /// True when every coefficient below `prec` vanishes.
    pub fn is_zero_to(&self, prec: i64) -> bool {
        assert!(prec <= self.prec(), "asked for precision {prec} above {}", self.prec());
        self.start >= prec
    }

    /// Equality of the common determined part.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let p = self.prec().min(other.prec());
        (self - other).is_zero_to(p)
    }

    /// Substitutes x ↦ c·x.
    pub fn rescale_x(&self, c: &Cyc) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = self.start + i as i64;
                let ck = if k >= 0 { c.pow(k as u32) } else { c.inv().expect("nonzero scale").pow((-k) as u32) };
                a * &ck
            })
            .collect();
        Series::from_coeffs(self.n, self.start, coeffs)
    }

    /// Substitutes x ↦ g where g has positive valuation.
    pub fn compose(&self, g: &Series) -> Result<Series, Error> {
        if g.start < 1 || g.is_zero() {
            return Err(Error::Precision { requested: 1, available: g.start });
        }
        // The unknown tail O(x^prec) becomes O(x^{prec·val g}).
        let cap = self.prec() * g.start;
        let mut acc = Series::zero(self.n, cap);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.start + i as i64;
            acc = &acc + &g.pow(e)?.scale(c);
        }
        Ok(acc)
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.prec() == other.prec() && self.start == other.start && self.coeffs == other.coeffs
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.start + i as i64;
            if c.is_rational() {
                write!(f, "{c}*x^{k}")?;
            } else {
                write!(f, "({c})*x^{k}")?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(x^{})", self.prec())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        assert_eq!(self.n, rhs.n, "mismatched cyclotomic orders");
        let prec = self.prec().min(rhs.prec());
        let start = self.start.min(rhs.start).min(prec);
        let mut coeffs = Vec::with_capacity((prec - start).max(0) as usize);
        for k in start..prec {
            let c = match (self.coeff_ref(k), rhs.coeff_ref(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Cyc::zero(self.n),
            };
            coeffs.push(c);
        }
        Series::from_coeffs(self.n, start, coeffs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { n: self.n, start: self.start, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        assert_eq!(self.n, rhs.n, "mismatched cyclotomic orders");
        let prec = (self.prec() + rhs.start).min(rhs.prec() + self.start);
        let start = self.start + rhs.start;
        if prec <= start {
            return Series::zero(self.n, prec);
        }
        let len = (prec - start) as usize;
        let mut out = vec![Cyc::zero(self.n); len];
        let rational = self.coeffs.iter().chain(rhs.coeffs.iter()).all(Cyc::is_rational);
        if rational {
            let mut acc = vec![BigRational::zero(); len];
            for (i, a) in self.coeffs.iter().enumerate().take(len) {
                let Some(a) = a.as_rational() else { unreachable!() };
                if a.is_zero() {
                    continue;
                }
                for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                    if let Some(b) = b.coords().first() {
                        acc[i + j] += &a * b;
                    }
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = Cyc::from_rational(self.n, a);
            }
        } else {
            for (i, a) in self.coeffs.iter().enumerate().take(len) {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                    if !b.is_zero() {
                        out[i + j] += a * b;
                    }
                }
            }
        }
        Series::from_coeffs(self.n, start, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Series> for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &'a Series) -> Series {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[i64], prec: i64) -> Series {
        let mut c: Vec<BigRational> = coeffs.iter().map(|&v| qi(v)).collect();
        c.resize(prec as usize, BigRational::zero());
        Series::from_rationals(3, 0, c)
    }

    #[test]
    fn difference_of_squares() {
        let p = &s(&[1, 1], 8) * &s(&[1, -1], 8);
        assert!(p.agrees_with(&s(&[1, 0, -1], 8)));
        assert_eq!(p.prec(), 8);
    }

    #[test]
    fn geometric_inverse() {
        let inv = s(&[1, 1], 6).invert().unwrap();
        assert!(inv.agrees_with(&s(&[1, -1, 1, -1, 1, -1], 6)));
    }

    #[test]
    fn inverse_of_one_and_zero_constant_rejected() {
        assert!(s(&[1], 5).invert_unit().unwrap().agrees_with(&s(&[1], 5)));
        assert!(s(&[0, 1], 5).invert_unit().is_err());
    }

    #[test]
    fn laurent_precision_rule() {
        // x + x^2 + O(x^6) inverts to x^{-1} - 1 + x - ... + O(x^4)
        let a = s(&[0, 1, 1], 6);
        let inv = a.invert().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.prec(), 4);
        assert_eq!(inv.coeff(3), Cyc::from_int(3, 1));
    }

    #[test]
    fn cube_root_binomial() {
        let u = s(&[0, 1], 5);
        let f = Series::binomial_pow(&u, -1, 3).unwrap();
        assert_eq!(f.coeff(1).as_rational().unwrap(), q(-1, 3));
        assert_eq!(f.coeff(2).as_rational().unwrap(), q(2, 9));
        let f3 = &(&f * &f) * &f;
        assert!(f3.agrees_with(&s(&[1, 1], 5).invert().unwrap()));
    }

    #[test]
    fn d_and_inverse() {
        let a = s(&[0, 3, 0, 5], 6);
        assert!(a.d_inv().unwrap().d().agrees_with(&a));
        assert!(s(&[2], 4).d().is_zero());
        assert!(s(&[1, 1], 4).d_inv().is_err());
    }

    #[test]
    fn composition() {
        // (1+x)^{-1} composed with 2x
        let f = s(&[1, -1, 1, -1, 1], 5);
        let g = s(&[0, 2], 5);
        let c = f.compose(&g).unwrap();
        assert!(c.agrees_with(&s(&[1, -2, 4, -8, 16], 5)));
    }
}
