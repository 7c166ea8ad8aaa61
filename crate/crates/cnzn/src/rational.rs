//! Small helpers over `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn qi(a: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Gauss-Jordan on an augmented d×(d+1) system; `None` when singular.
pub fn solve_augmented(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let d = m.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (a, b) = m.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(3, 4), BigInt::zero());
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn solves_small_system() {
        let m = vec![vec![qi(2), qi(1), qi(5)], vec![qi(1), qi(3), qi(10)]];
        assert_eq!(solve_augmented(m).unwrap(), vec![qi(1), qi(3)]);
    }
}
