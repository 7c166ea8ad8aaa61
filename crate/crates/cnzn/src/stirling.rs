//! Stirling numbers of the first (signed) and second kind.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{binom, factorial};

/// Signed s_{m,k}: coefficient of x^k in the falling factorial x(x-1)...(x-m+1).
pub fn stirling_first(m: usize, k: usize) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    let mut poly = vec![BigInt::one()];
    for j in 0..m {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(j);
        }
        poly = next;
    }
    poly[k].clone()
}

/// S_{m,k} via the recursion S_{m,k} = k S_{m-1,k} + S_{m-1,k-1}.
pub fn stirling_second(m: usize, k: usize) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for i in 1..=m {
        let mut next = vec![BigInt::zero(); i + 1];
        for j in 1..=i {
            let keep = if j < row.len() { &row[j] * BigInt::from(j) } else { BigInt::zero() };
            next[j] = keep + &row[j - 1];
        }
        row = next;
    }
    row[k].clone()
}

/// S_{m,k} by Euler's formula (1/k!) Σ_j (-1)^{k-j} C(k,j) j^m.
pub fn stirling_second_euler(m: usize, k: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let t = binom(k as i64, j as i64) * BigInt::from(j).pow(m as u32);
        if (k - j).is_multiple_of(2) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc / factorial(k as u64)
}

/// Lower-triangular tables of both kinds up to `max_m`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    pub first: Vec<Vec<BigInt>>,
    pub second: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(max_m: usize) -> Self {
        let first = (0..=max_m).map(|m| (0..=m).map(|k| stirling_first(m, k)).collect()).collect();
        let second = (0..=max_m).map(|m| (0..=m).map(|k| stirling_second(m, k)).collect()).collect();
        StirlingTable { first, second }
    }

    pub fn s(&self, m: usize, k: usize) -> BigInt {
        self.first.get(m).and_then(|r| r.get(k)).cloned().unwrap_or_default()
    }

    pub fn big_s(&self, m: usize, k: usize) -> BigInt {
        self.second.get(m).and_then(|r| r.get(k)).cloned().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_values() {
        assert_eq!(stirling_first(0, 0), BigInt::one());
        assert_eq!(stirling_first(4, 3), BigInt::from(-6));
        assert_eq!(stirling_first(3, 1), BigInt::from(2));
        assert_eq!(stirling_second(3, 2), BigInt::from(3));
        assert_eq!(stirling_second(5, 5), BigInt::one());
        for m in 0..6 {
            assert_eq!(stirling_second(m, 0), if m == 0 { BigInt::one() } else { BigInt::zero() });
        }
    }

    #[test]
    fn falling_factorial_oracle() {
        // x(x-1)(x-2)(x-3) = x^4 - 6x^3 + 11x^2 - 6x
        let want = [0, -6, 11, -6, 1];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(stirling_first(4, k), BigInt::from(*w));
        }
    }
}
