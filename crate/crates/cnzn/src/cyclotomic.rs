//! Exact arithmetic in the cyclotomic field Q(ζ) with ζ a primitive n-th root of unity.
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(n)-1}, reduced modulo the
//! n-th cyclotomic polynomial. Trailing zero coordinates are trimmed, so a rational
//! number has at most one coordinate and the zero element has none.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;

use crate::rational::{q, qi};

/// Integer coefficients of Φ_n, lowest degree first. Memoized per order.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = table.read().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    table.write().insert(n, p.clone());
    p
}

fn compute_cyclotomic(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be positive");
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = compute_cyclotomic(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len() - db];
    for i in (0..quo.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quo[i] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    quo
}

/// Euler's totient, the degree of Φ_n.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// An element of Q(ζ_n).
#[derive(Clone, Debug)]
pub struct Cyc {
    n: u32,
    c: Vec<BigRational>,
}

impl Cyc {
    pub fn zero(n: u32) -> Self {
        Cyc { n, c: Vec::new() }
    }

    pub fn one(n: u32) -> Self {
        Cyc::from_rational(n, BigRational::one())
    }

    pub fn from_rational(n: u32, r: BigRational) -> Self {
        let mut z = Cyc { n, c: vec![r] };
        z.trim();
        z
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Cyc::from_rational(n, qi(v))
    }

    pub fn from_frac(n: u32, a: i64, b: i64) -> Self {
        Cyc::from_rational(n, q(a, b))
    }

    /// Builds an element from power-basis coordinates, reducing if needed.
    pub fn from_coords(n: u32, coords: Vec<BigRational>) -> Self {
        let mut z = Cyc { n, c: coords };
        z.reduce();
        z
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Cyc::from_coords(n, c)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates with trailing zeros removed.
    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    /// Coordinates padded to length φ(n).
    pub fn full_coords(&self) -> Vec<BigRational> {
        let mut v = self.c.clone();
        v.resize(totient(self.n), BigRational::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    /// Same value viewed in Q(ζ_m); only rational values can change order.
    pub fn with_order(&self, m: u32) -> Self {
        assert!(self.is_rational() || m == self.n, "cannot move a non-rational element to another order");
        Cyc { n: m, c: self.c.clone() }
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    fn reduce(&mut self) {
        let phi = cyclotomic_polynomial(self.n);
        let d = phi.len() - 1;
        if self.c.len() > d {
            for i in (d..self.c.len()).rev() {
                let top = std::mem::replace(&mut self.c[i], BigRational::zero());
                if top.is_zero() {
                    continue;
                }
                // x^i = x^{i-d} * x^d and x^d = -(Φ_n - x^d)
                for (j, pj) in phi.iter().enumerate().take(d) {
                    if !pj.is_zero() {
                        let t = &top * BigRational::from_integer(pj.clone());
                        self.c[i - d + j] -= t;
                    }
                }
            }
            self.c.truncate(d);
        }
        self.trim();
    }

    fn common_order(&self, other: &Cyc) -> u32 {
        if self.n == other.n || other.is_rational() {
            self.n
        } else if self.is_rational() {
            other.n
        } else {
            panic!("mismatched cyclotomic orders {} and {}", self.n, other.n)
        }
    }

    /// Checked multiplication; fails on mismatched orders of non-rational operands.
    pub fn checked_mul(&self, other: &Cyc) -> Result<Cyc, crate::Error> {
        if self.n != other.n && !self.is_rational() && !other.is_rational() {
            return Err(crate::Error::OrderMismatch(self.n, other.n));
        }
        Ok(self * other)
    }

    pub fn scale(&self, r: &BigRational) -> Cyc {
        if r.is_zero() {
            return Cyc::zero(self.n);
        }
        Cyc { n: self.n, c: self.c.iter().map(|x| x * r).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Cyc {
        self.scale(&qi(k))
    }

    pub fn pow(&self, mut e: u32) -> Cyc {
        let mut base = self.clone();
        let mut acc = Cyc::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Cyc::from_rational(self.n, r.recip()));
        }
        let d = totient(self.n);
        // Column k of the matrix is self * ζ^k; solve M y = e_0.
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
        for k in 0..d {
            let col = (self * &Cyc::zeta_pow(self.n, k as i64)).full_coords();
            for (i, v) in col.into_iter().enumerate() {
                m[i][k] = v;
            }
        }
        m[0][d] = BigRational::one();
        let sol = crate::rational::solve_augmented(m)?;
        Some(Cyc::from_coords(self.n, sol))
    }

    /// Complex conjugate, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyc {
        let mut acc = Cyc::zero(self.n);
        for (k, v) in self.c.iter().enumerate() {
            acc += Cyc::zeta_pow(self.n, -(k as i64)).scale(v);
        }
        acc
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        (self.n == other.n || (self.is_rational() && other.is_rational())) && self.c == other.c
    }
}

impl Eq for Cyc {}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let sign = if v.is_negative() { "-" } else { "+" };
            let a = v.abs();
            if first {
                if v.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &'a Cyc) -> Cyc {
        let n = self.common_order(rhs);
        let len = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(len);
        for i in 0..len {
            match (self.c.get(i), rhs.c.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        let mut z = Cyc { n, c };
        z.trim();
        z
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &'a Cyc) -> Cyc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &'a Cyc) -> Cyc {
        let n = self.common_order(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Cyc::zero(n);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(&r).with_order_unchecked(n);
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(&r).with_order_unchecked(n);
        }
        let mut c = vec![BigRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        let mut z = Cyc { n, c };
        z.reduce();
        z
    }
}

impl Cyc {
    fn with_order_unchecked(mut self, n: u32) -> Cyc {
        self.n = n;
        self
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: Cyc) -> Cyc {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: &'a Cyc) -> Cyc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<Cyc> for Cyc {
    fn add_assign(&mut self, rhs: Cyc) {
        *self = &*self + &rhs;
    }
}
impl<'a> AddAssign<&'a Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &'a Cyc) {
        *self = &*self + rhs;
    }
}
impl<'a> SubAssign<&'a Cyc> for Cyc {
    fn sub_assign(&mut self, rhs: &'a Cyc) {
        *self = &*self - rhs;
    }
}
impl SubAssign<Cyc> for Cyc {
    fn sub_assign(&mut self, rhs: Cyc) {
        *self = &*self - &rhs;
    }
}
impl<'a> MulAssign<&'a Cyc> for Cyc {
    fn mul_assign(&mut self, rhs: &'a Cyc) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        let as_i64 = |n| cyclotomic_polynomial(n).iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(7), 6);
    }

    #[test]
    fn root_of_unity_relations() {
        for n in 3..=9 {
            assert!(Cyc::zeta_pow(n, n as i64).is_one());
            let mut s = Cyc::zero(n);
            for k in 0..n {
                s += Cyc::zeta_pow(n, k as i64);
            }
            assert!(s.is_zero(), "sum of powers for n={n}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Cyc::from_coords(5, vec![qi(2), qi(-1), q(1, 3)]);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(Cyc::zeta_pow(7, 3).inv().unwrap(), Cyc::zeta_pow(7, -3));
    }

    #[test]
    fn conjugation_inverts_roots() {
        assert_eq!(Cyc::zeta_pow(5, 2).conj(), Cyc::zeta_pow(5, 3));
    }
}
