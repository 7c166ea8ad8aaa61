//! Psi-class intersection numbers ⟨τ_{a_1}…τ_{a_m}⟩_g.
//!
//! Two unrelated recursions are provided: the DVV (Virasoro) recursion, used by
//! the graph sum, and Witten's KdV equation combined with string and dilaton,
//! used only as a cross-check.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use crate::rational::{factorial, q, qi};

type Key = (u32, Vec<u32>);

/// True when 3g - 3 + m = Σ a_i and the moduli space is stable.
pub fn dimension_ok(g: u32, a: &[u32]) -> bool {
    let m = a.len() as i64;
    let g = g as i64;
    2 * g - 2 + m > 0 && a.iter().map(|x| *x as i64).sum::<i64>() == 3 * g - 3 + m
}

/// ⟨τ_{a_1}…τ_{a_m}⟩_0 = (m-3)! / ∏ a_i!.
pub fn genus0_closed_form(a: &[u32]) -> BigRational {
    if !dimension_ok(0, a) {
        return BigRational::zero();
    }
    let den: BigInt = a.iter().map(|x| factorial(*x as u64)).product();
    BigRational::new(factorial(a.len() as u64 - 3), den)
}

fn double_factorial(k: i64) -> BigInt {
    // (2j-1)!! with (-1)!! = 1.
    let mut acc = BigInt::one();
    let mut x = k;
    while x > 1 {
        acc *= x;
        x -= 2;
    }
    acc
}

fn key(g: u32, a: &[u32]) -> Key {
    let mut v = a.to_vec();
    v.sort_unstable();
    (g, v)
}

/// Splits `items` into ordered pairs (I, J) over all 2^len labelled subsets.
fn splits(items: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let len = items.len();
    (0u64..(1 << len))
        .map(|mask| {
            let mut i = Vec::new();
            let mut j = Vec::new();
            for (b, x) in items.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    i.push(*x);
                } else {
                    j.push(*x);
                }
            }
            (i, j)
        })
        .collect()
}

/// Memoized DVV recursion. Safe to share across threads.
#[derive(Default)]
pub struct Dvv {
    memo: Mutex<HashMap<Key, BigRational>>,
}

impl Dvv {
    pub fn new() -> Self {
        Dvv::default()
    }

    pub fn get(&self, g: u32, a: &[u32]) -> BigRational {
        if !dimension_ok(g, a) {
            return BigRational::zero();
        }
        let k = key(g, a);
        if let Some(v) = self.memo.lock().get(&k) {
            return v.clone();
        }
        let v = self.compute(g, &k.1);
        self.memo.lock().insert(k, v.clone());
        v
    }

    fn compute(&self, g: u32, a: &[u32]) -> BigRational {
        if g == 0 && a == [0, 0, 0] {
            return BigRational::one();
        }
        if g == 1 && a == [1] {
            return q(1, 24);
        }
        // Recurse on the largest index.
        let k = *a.last().unwrap() as i64;
        let rest = &a[..a.len() - 1];
        let mut acc = BigRational::zero();
        for (idx, aj) in rest.iter().enumerate() {
            let aj = *aj as i64;
            if k + aj - 1 < 0 {
                continue;
            }
            let mut b: Vec<u32> = rest.to_vec();
            b[idx] = (k + aj - 1) as u32;
            let w = BigRational::new(double_factorial(2 * k + 2 * aj - 1), double_factorial(2 * aj - 1));
            acc += w * self.get(g, &b);
        }
        let half = q(1, 2);
        for r in 0..=(k - 2).max(-1) {
            let s = k - 2 - r;
            if s < 0 {
                continue;
            }
            let w = BigRational::from_integer(double_factorial(2 * r + 1) * double_factorial(2 * s + 1)) * &half;
            if g >= 1 {
                let mut b = rest.to_vec();
                b.push(r as u32);
                b.push(s as u32);
                acc += &w * self.get(g - 1, &b);
            }
            for (i, j) in splits(rest) {
                for g1 in 0..=g {
                    let mut bi = i.clone();
                    bi.push(r as u32);
                    let mut bj = j.clone();
                    bj.push(s as u32);
                    let x = self.get(g1, &bi);
                    if x.is_zero() {
                        continue;
                    }
                    acc += &w * x * self.get(g - g1, &bj);
                }
            }
        }
        acc / BigRational::from_integer(double_factorial(2 * k + 1))
    }
}

/// Memoized KdV recursion with string and dilaton reductions.
#[derive(Default)]
pub struct KdvStringDilaton {
    memo: Mutex<HashMap<Key, BigRational>>,
}

impl KdvStringDilaton {
    pub fn new() -> Self {
        KdvStringDilaton::default()
    }

    pub fn get(&self, g: u32, a: &[u32]) -> BigRational {
        if !dimension_ok(g, a) {
            return BigRational::zero();
        }
        let k = key(g, a);
        if let Some(v) = self.memo.lock().get(&k) {
            return v.clone();
        }
        let v = self.compute(g, &k.1);
        self.memo.lock().insert(k, v.clone());
        v
    }

    /// Σ_j ⟨τ_{a_j - 1} τ_{rest}⟩, the right side of the string equation.
    fn string_rhs(&self, g: u32, rest: &[u32]) -> BigRational {
        let mut acc = BigRational::zero();
        for idx in 0..rest.len() {
            if rest[idx] == 0 {
                continue;
            }
            let mut b = rest.to_vec();
            b[idx] -= 1;
            acc += self.get(g, &b);
        }
        acc
    }

    fn compute(&self, g: u32, a: &[u32]) -> BigRational {
        if g == 0 && a == [0, 0, 0] {
            return BigRational::one();
        }
        if g == 1 && a == [1] {
            return q(1, 24);
        }
        if let Some(p) = a.iter().position(|x| *x == 0) {
            let mut rest = a.to_vec();
            rest.remove(p);
            return self.string_rhs(g, &rest);
        }
        if let Some(p) = a.iter().position(|x| *x == 1) {
            let mut rest = a.to_vec();
            rest.remove(p);
            return qi(2 * g as i64 - 2 + rest.len() as i64) * self.get(g, &rest);
        }
        // All indices ≥ 2. With k = a_1 + 2 the KdV equation
        // (2k+1)⟨τ_k τ_0² τ_R⟩ = Σ ⟨τ_{k-1}τ_0τ_I⟩⟨τ_0³τ_J⟩ + 2Σ ⟨τ_{k-1}τ_0²τ_I⟩⟨τ_0²τ_J⟩ + ¼⟨τ_{k-1}τ_0⁴τ_R⟩_{g-1}
        // contains the target twice after the string equation; solve for it.
        let a1 = *a.last().unwrap();
        let r: Vec<u32> = a[..a.len() - 1].to_vec();
        let k = a1 + 2;
        let with = |extra: &[u32], base: &[u32]| -> Vec<u32> {
            let mut v = base.to_vec();
            v.extend_from_slice(extra);
            v
        };
        let mut rhs = BigRational::zero();
        for (i, j) in splits(&r) {
            for g1 in 0..=g {
                let g2 = g - g1;
                // The (g, R) × (0, ∅) term is the target and is moved to the left.
                let target_term = g1 == g && j.is_empty();
                if !target_term {
                    let x = self.get(g1, &with(&[k - 1, 0], &i));
                    if !x.is_zero() {
                        rhs += x * self.get(g2, &with(&[0, 0, 0], &j));
                    }
                }
                let x = self.get(g1, &with(&[k - 1, 0, 0], &i));
                if !x.is_zero() {
                    rhs += qi(2) * x * self.get(g2, &with(&[0, 0], &j));
                }
            }
        }
        if g >= 1 {
            rhs += q(1, 4) * self.get(g - 1, &with(&[k - 1, 0, 0, 0, 0], &r));
        }
        // ⟨τ_0²τ_kτ_R⟩ = T + 2Σ_j⟨τ_{k-1}τ_{R_j-}⟩ + Σ_{j,l}⟨τ_kτ_{R_{jl}-}⟩ and
        // ⟨τ_0τ_{k-1}τ_R⟩ = T + Σ_j⟨τ_{k-1}τ_{R_j-}⟩.
        let mut once = BigRational::zero();
        let mut twice = BigRational::zero();
        for j in 0..r.len() {
            let mut b = r.clone();
            b[j] -= 1;
            once += self.get(g, &with(&[k - 1], &b));
            for l in 0..r.len() {
                if b[l] == 0 {
                    continue;
                }
                let mut c = b.clone();
                c[l] -= 1;
                twice += self.get(g, &with(&[k], &c));
            }
        }
        let kk = qi(2 * k as i64 + 1);
        let lhs_rest = &kk * (qi(2) * &once + &twice) - &once;
        (rhs - lhs_rest) / (kk - qi(1))
    }
}
