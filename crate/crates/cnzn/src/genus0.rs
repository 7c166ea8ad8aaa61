//! Genus-zero mirror data for [C^n/Z_n].
//!
//! Everything lives on the slice x_0 = 0, x_1 = x. The z-dependence of the
//! E-function is carried as the array of its 1/z^k coefficient series, so no
//! second series variable is ever introduced.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::check::{series_eq_to, series_zero_to, Check};
use crate::cyclotomic::Cyc;
use crate::rational::{binom, factorial, q, qi};
use crate::series::Series;
use crate::stirling::stirling_first;
use crate::Error;

/// Model parameters: the orbifold dimension n and the truncation order N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelConfig {
    pub n: u32,
    pub big_n: i64,
}

impl ModelConfig {
    pub fn new(n: u32, big_n: i64) -> Result<Self, Error> {
        if n < 3 {
            return Err(Error::InvalidN(n));
        }
        Ok(ModelConfig { n, big_n })
    }

    /// Default truncation 10n.
    pub fn with_default_order(n: u32) -> Result<Self, Error> {
        ModelConfig::new(n, 10 * n as i64)
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// s with n = 2s+1 or n = 2s.
    pub fn s(&self) -> u32 {
        if self.is_odd() {
            (self.n - 1) / 2
        } else {
            self.n / 2
        }
    }

    /// Sign (-1)^n.
    pub fn sign(&self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }
}

/// Inv(0) = 0, Inv(i) = n - i.
pub fn inv(n: u32, i: u32) -> u32 {
    let i = i % n;
    if i == 0 {
        0
    } else {
        n - i
    }
}

/// Ion(0) = n, Ion(i) = i.
pub fn ion(n: u32, i: u32) -> u32 {
    if i == 0 {
        n
    } else {
        i
    }
}

/// 1/z^k coefficients E_0..E_{kmax} of the E-function, each known below x^prec.
///
/// With k = i + n p, E_k = Σ_{l≥p} x^{i+nl}/(i+nl)! · e_{l-p}(v_0..v_{l-1}) where
/// v_m = (-1)^n (m + i/n)^n and e is the elementary symmetric polynomial.
pub fn e_function(n: u32, prec: i64, kmax: usize) -> Vec<Series> {
    let sign = if n % 2 == 1 { -1 } else { 1 };
    let mut out: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); prec.max(0) as usize]; kmax + 1];
    for i in 0..n as i64 {
        // elementary symmetric polynomials of {v_0..v_{l-1}}
        let mut e = vec![BigRational::one()];
        let mut l = 0i64;
        while i + n as i64 * l < prec {
            let deg = i + n as i64 * l;
            let w = BigRational::from_integer(factorial(deg as u64)).recip();
            for p in 0..=l {
                let k = (i + n as i64 * p) as usize;
                if k <= kmax {
                    out[k][deg as usize] += &w * &e[(l - p) as usize];
                }
            }
            let base = q(i, n as i64) + qi(l);
            let v = base.pow(n as i32) * qi(sign);
            let mut next = vec![BigRational::zero(); e.len() + 1];
            for (j, ej) in e.iter().enumerate() {
                next[j] += ej;
                next[j + 1] += ej * &v;
            }
            e = next;
            l += 1;
        }
    }
    out.into_iter().map(|c| Series::from_rationals(n, 0, c)).collect()
}

/// I_0..I_{n-1} summed directly from the hypergeometric closed form.
pub fn compute_i(cfg: &ModelConfig, prec: i64) -> Vec<Series> {
    let n = cfg.n as i64;
    (0..n)
        .map(|k| {
            let mut c = vec![BigRational::zero(); prec.max(0) as usize];
            let mut l = 0i64;
            while n * l + k < prec {
                let mut g = BigRational::one();
                for i in 0..l {
                    g *= q(i * n + k, n);
                }
                let sgn = if (n * l) % 2 == 0 { 1 } else { -1 };
                c[(n * l + k) as usize] = g.pow(n as i32) * qi(sgn) / BigRational::from_integer(factorial((n * l + k) as u64));
                l += 1;
            }
            Series::from_rationals(cfg.n, 0, c)
        })
        .collect()
}

/// L = x (1 - (-1)^n (x/n)^n)^{-1/n}.
pub fn compute_l(cfg: &ModelConfig, prec: i64) -> Series {
    let n = cfg.n;
    let u = Series::monomial(Cyc::from_rational(n, q(-cfg.sign(), 1) / qi(n as i64).pow(n as i32)), n as i64, prec - 1);
    let f = Series::binomial_pow(&u, -1, n as i64).expect("u has no constant term");
    f.shift(1)
}

/// Y = 1 + (-1)^n L^n / n^n as a series.
pub fn y_from_l(cfg: &ModelConfig, l: &Series) -> Series {
    let n = cfg.n;
    let ln = l.pow(n as i64).expect("positive power");
    let c = Cyc::from_rational(n, qi(cfg.sign()) / qi(n as i64).pow(n as i32));
    &Series::one(n, ln.prec()) + &ln.scale(&c)
}

/// Applies the Birkhoff operator F ↦ z D(F/F(x,∞)) to a coefficient array.
pub fn birkhoff_step(f: &[Series]) -> Result<Vec<Series>, Error> {
    let f0inv = f[0].invert()?;
    Ok(f[1..].iter().map(|fk| (fk * &f0inv).d()).collect())
}

/// C_0..C_count by iterating the Birkhoff operator on E.
pub fn birkhoff_c(e: &[Series], count: usize) -> Result<Vec<Series>, Error> {
    assert!(e.len() > count, "need E_0..E_{count}");
    let mut f = e.to_vec();
    let mut c = vec![f[0].clone()];
    for _ in 0..count {
        f = birkhoff_step(&f)?;
        c.push(f[0].clone());
    }
    Ok(c)
}

/// C_0..C_count from C_i = D 𝔏_{i-1}…𝔏_1 E_i with 𝔏_j = C_j^{-1} D.
pub fn c_via_inversion(e: &[Series], count: usize) -> Result<Vec<Series>, Error> {
    let mut c: Vec<Series> = vec![e[0].clone()];
    let mut cinv: Vec<Option<Series>> = vec![None];
    for i in 1..=count {
        let mut g = e[i].clone();
        for j in 1..i {
            g = &g.d() * cinv[j].as_ref().expect("computed");
        }
        let ci = g.d();
        cinv.push(Some(ci.invert()?));
        c.push(ci);
    }
    Ok(c)
}

/// Z_{m,k} = D^{-1}C_{k+1}…D^{-1}C_m, with Z_{m,m} = 1 and Z_{m,k} = 0 beyond.
pub fn z_series(c: &[Series], m: usize, k: usize, prec: i64) -> Result<Series, Error> {
    let n = c[0].order();
    if k > m {
        return Ok(Series::zero(n, prec));
    }
    let mut acc = Series::one(n, prec);
    for idx in (k + 1..=m).rev() {
        acc = (&c[idx] * &acc).d_inv()?;
    }
    Ok(acc)
}

/// Sum over strictly decreasing chains k = k_1 > … > k_p ≥ 1 that defines B_{k,p}.
///
/// `factor(i, a)` supplies the series standing for D^a C_i (or X_{i,a} for the
/// normalized variant), so the same combinatorics serves both.
pub fn chain_sum<T, F>(k: usize, p: usize, factor: &F, mul: &dyn Fn(&T, &T) -> T, add: &dyn Fn(&T, &T) -> T, scale: &dyn Fn(&T, i64) -> T, zero: &T) -> T
where
    T: Clone,
    F: Fn(usize, usize) -> T,
{
    fn rec<T: Clone, F: Fn(usize, usize) -> T>(
        i: usize,
        k: usize,
        p: usize,
        factor: &F,
        mul: &dyn Fn(&T, &T) -> T,
        add: &dyn Fn(&T, &T) -> T,
        scale: &dyn Fn(&T, i64) -> T,
        zero: &T,
    ) -> T {
        if p == 0 || p > k {
            return zero.clone();
        }
        if p == 1 {
            return factor(i, k - 1);
        }
        let mut acc = zero.clone();
        for k2 in (p - 1)..k {
            let tail = rec(i + 1, k2, p - 1, factor, mul, add, scale, zero);
            let b = i64::try_from(binom((k - 1) as i64, k2 as i64)).expect("small binomial");
            let term = scale(&mul(&factor(i, k - 1 - k2), &tail), b);
            acc = add(&acc, &term);
        }
        acc
    }
    rec(1, k, p, factor, mul, add, scale, zero)
}

/// B_{k,p} as a series.
pub fn b_series(c: &[Series], k: usize, p: usize, prec: i64) -> Series {
    let n = c[0].order();
    chain_sum(
        k,
        p,
        &|i: usize, a: usize| c[i].d_pow(a),
        &|x: &Series, y: &Series| x * y,
        &|x: &Series, y: &Series| x + y,
        &|x: &Series, b: i64| x.scale_int(b),
        &Series::zero(n, prec),
    )
}

/// All genus-zero series for one model, computed once and then shared read-only.
#[derive(Clone, Debug)]
pub struct GenusZero {
    pub cfg: ModelConfig,
    /// Precision every exported series is guaranteed to reach.
    pub prec: i64,
    pub e: Vec<Series>,
    pub i: Vec<Series>,
    pub l: Series,
    pub y: Series,
    /// C_0..C_{2n} from the Birkhoff operator.
    pub c: Vec<Series>,
    /// K_0..K_{2n}.
    pub k: Vec<Series>,
    /// X_0..X_n with X_i = D C_i / C_i.
    pub x: Vec<Series>,
    /// A_0..A_n.
    pub a: Vec<Series>,
}

impl GenusZero {
    /// Builds the data so that everything is known below x^prec.
    pub fn new(cfg: ModelConfig, prec: i64) -> Result<Self, Error> {
        let n = cfg.n as usize;
        // Each Birkhoff step costs one order; inverting L costs two more.
        let work = prec + 2 * n as i64 + 6;
        let e = e_function(cfg.n, work, 3 * n);
        let i = e[..n].to_vec();
        let l = compute_l(&cfg, work);
        let y = y_from_l(&cfg, &l);
        let c = birkhoff_c(&e, 2 * n)?;
        let mut k = vec![c[0].clone()];
        for idx in 1..=2 * n {
            let next = &k[idx - 1] * &c[idx];
            k.push(next);
        }
        let x: Vec<Series> = (0..=n).map(|idx| if idx == 0 { Series::zero(cfg.n, work) } else { c[idx].d().div(&c[idx]).expect("C_i nonzero") }).collect();
        let linv = l.invert()?;
        let mut a = Vec::with_capacity(n + 1);
        let mut xs = Series::zero(cfg.n, work);
        for idx in 0..=n {
            xs = &xs + &x[idx];
            a.push(&linv * &(&y.scale_int(idx as i64) - &xs));
        }
        let g = GenusZero { cfg, prec, e, i, l, y, c, k, x, a };
        g.require_precision()?;
        Ok(g)
    }

    fn require_precision(&self) -> Result<(), Error> {
        let all = self.i.iter().chain(self.c.iter()).chain(self.k.iter()).chain(self.x.iter()).chain(self.a.iter()).chain([&self.l, &self.y]);
        for s in all {
            if s.prec() < self.prec {
                return Err(Error::Precision { requested: self.prec, available: s.prec() });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.cfg.n
    }

    /// C_i for any i ≥ 0 using C_{k+n} = C_k.
    pub fn c_at(&self, i: usize) -> &Series {
        let n = self.cfg.n as usize;
        if i == 0 {
            &self.c[0]
        } else {
            &self.c[(i - 1) % n + 1]
        }
    }

    /// K_l for any l ≥ 0, using K_{n+l} = L^n K_l beyond the stored range.
    pub fn k_at(&self, l: usize) -> Series {
        let n = self.cfg.n as usize;
        if l < self.k.len() {
            return self.k[l].clone();
        }
        let ln = self.l.pow(n as i64).expect("positive power");
        &ln * &self.k_at(l - n)
    }

    /// D^a C_i / C_i.
    pub fn x_kl(&self, i: usize, a: usize) -> Series {
        let ci = self.c_at(i);
        ci.d_pow(a).div(ci).expect("C_i nonzero")
    }

    /// ∏_{k≥1} C_k over one period, compared with L^n.
    pub fn verify_c_identities(&self) -> Vec<Check> {
        let n = self.cfg.n as usize;
        let p = self.prec;
        let mut out = Vec::new();
        out.push(series_eq_to("C_0 = 1", &self.c[0], &Series::one(self.n(), p), p));
        let mut prod = Series::one(self.n(), p + 10);
        for i in 1..=n {
            prod = &prod * &self.c[i];
        }
        out.push(series_eq_to("prod C_k = L^n", &prod, &self.l.pow(n as i64).unwrap(), p));
        for i in 1..=n {
            out.push(series_eq_to(&format!("C_{i} = C_{}", n + 1 - i), &self.c[i], &self.c[n + 1 - i], p));
            out.push(series_eq_to(&format!("C_{} = C_{i}", i + n), &self.c[i + n], &self.c[i], p));
        }
        let ln = self.l.pow(n as i64).unwrap();
        out.push(series_eq_to("K_n = L^n", &self.k[n], &ln, p));
        for l in 0..n {
            out.push(series_eq_to(&format!("K_{l} K_{} = L^n", n - l), &(&self.k[l] * &self.k[n - l]), &ln, p));
        }
        match c_via_inversion(&self.e, 2 * n) {
            Ok(alt) => {
                for i in 0..=2 * n {
                    out.push(series_eq_to(&format!("Birkhoff C_{i} = inversion C_{i}"), &self.c[i], &alt[i], p));
                }
            }
            Err(err) => out.push(Check::fail("C via inversion", err.to_string())),
        }
        for m in 1..=n {
            match z_series(&self.c, m, 0, p + 10) {
                Ok(z) => out.push(series_eq_to(&format!("D^-1 chain gives E_{m}"), &z, &self.e[m], p)),
                Err(err) => out.push(Check::fail(format!("D^-1 chain for E_{m}"), err.to_string())),
            }
        }
        out
    }

    /// DL/L against both closed forms, the A_i symmetries, and Σ X_r = n DL/L.
    pub fn verify_l_and_a(&self) -> Vec<Check> {
        let n = self.cfg.n as usize;
        let p = self.prec;
        let mut out = Vec::new();
        let dl_over_l = self.l.d().div(&self.l).unwrap();
        out.push(series_eq_to("DL/L = 1 + (-1)^n L^n/n^n", &dl_over_l, &self.y, p));
        let xn = Series::x(self.n(), p + n as i64 + 2).pow(n as i64).unwrap();
        out.push(series_eq_to("DL/L = L^n/x^n", &dl_over_l, &self.l.pow(n as i64).unwrap().div(&xn).unwrap(), p));
        let mut sx = Series::zero(self.n(), p + 10);
        for r in 0..=n {
            sx = &sx + &self.x[r];
        }
        out.push(series_eq_to("sum X_r = n DL/L", &sx, &self.y.scale_int(n as i64), p));
        out.push(series_zero_to("A_0 = 0", &self.a[0], p));
        out.push(series_zero_to("A_n = 0", &self.a[n], p));
        if n.is_multiple_of(2) {
            out.push(series_zero_to("A_{n/2} = 0", &self.a[n / 2], p));
        }
        let mut total = Series::zero(self.n(), p + 10);
        for i in 0..=n {
            out.push(series_zero_to(&format!("A_{i} + A_{}", n - i), &(&self.a[i] + &self.a[n - i]), p));
            total = &total + &self.a[i];
        }
        out.push(series_zero_to("sum A_i = 0", &total, p));
        out
    }

    /// PF1 for every coefficient of every Ĩ_i, PFforIks, and the factorized operator.
    pub fn verify_picard_fuchs(&self) -> Vec<Check> {
        let n = self.cfg.n as usize;
        let nn = self.n();
        let need = self.prec - n as i64;
        let mut out = Vec::new();
        let s: Vec<BigRational> = (0..=n).map(|k| BigRational::from_integer(stirling_first(n, k))).collect();
        let xn_inv = Series::x(nn, self.prec + 4 * n as i64).pow(-(n as i64)).unwrap();
        let cn = Cyc::from_rational(nn, qi(self.cfg.sign()) / qi(n as i64).pow(n as i32));
        // E_{i+np} plays the role of G_{i,p}.
        for idx in 0..self.e.len() {
            let g = &self.e[idx];
            let mut f = Series::zero(nn, g.prec());
            for (k, sk) in s.iter().enumerate().skip(1) {
                f = &f + &g.d_pow(k).scale_rational(sk);
            }
            let lhs = &(&xn_inv * &f) - &g.d_pow(n).scale(&cn);
            let rhs = if idx >= n { self.e[idx - n].clone() } else { Series::zero(nn, lhs.prec()) };
            out.push(series_zero_to(&format!("PF1 on E_{idx}"), &(&lhs - &rhs), need));
        }
        for k in 0..n {
            let ik = &self.i[k];
            let mut acc = Series::zero(nn, ik.prec());
            for (kk, sk) in s.iter().enumerate().take(n).skip(1) {
                acc = &acc + &ik.d_pow(kk).scale_rational(sk);
            }
            let res = &ik.d_pow(n) + &(&self.y * &acc);
            out.push(series_zero_to(&format!("PF on I_{k}"), &res, need));
        }
        let cinv: Vec<Series> = (0..=n).map(|i| self.c[i].invert().unwrap()).collect();
        let apply = |g: &Series, order: &mut dyn Iterator<Item = usize>| -> Series {
            order.fold(g.clone(), |acc, j| &cinv[j] * &acc.d())
        };
        for idx in 0..self.e.len() {
            let g = &self.e[idx];
            let want = if idx >= n { self.e[idx - n].clone() } else { Series::zero(nn, g.prec()) };
            // 𝔏_1…𝔏_n applies 𝔏_n first.
            let fwd = apply(g, &mut (1..=n).rev());
            let bwd = apply(g, &mut (1..=n));
            out.push(series_zero_to(&format!("L_1..L_n on E_{idx}"), &(&fwd - &want), need));
            out.push(series_zero_to(&format!("L_n..L_1 on E_{idx}"), &(&bwd - &want), need));
        }
        out
    }

    /// D^k I_m = Σ_p B_{k,p} Z_{m,p} and the graded PF identity for B.
    pub fn verify_b_z(&self) -> Vec<Check> {
        let n = self.cfg.n as usize;
        let nn = self.n();
        let need = self.prec - 2 * n as i64;
        let wp = self.prec + 4;
        let mut out = Vec::new();
        let b: Vec<Vec<Series>> = (0..=n).map(|k| (0..=n).map(|p| b_series(&self.c, k, p, wp)).collect()).collect();
        for m in 1..=n {
            let zs: Vec<Series> = (0..=n).map(|p| z_series(&self.c, m, p, wp).unwrap()).collect();
            for k in 1..=n {
                let mut rhs = Series::zero(nn, wp);
                for p in 1..=k {
                    rhs = &rhs + &(&b[k][p] * &zs[p]);
                }
                out.push(series_eq_to(&format!("D^{k} E_{m} = sum B Z"), &self.e[m].d_pow(k), &rhs, need));
            }
        }
        for m in 1..n {
            let mut acc = Series::zero(nn, wp);
            for k in 1..n {
                acc = &acc + &b[k][m].scale_rational(&BigRational::from_integer(stirling_first(n, k)));
            }
            let res = &b[n][m] + &(&self.y * &acc);
            out.push(series_zero_to(&format!("graded PF for B_(.,{m})"), &res, need));
        }
        out
    }

    /// Structure constant of φ_i•φ_j = c φ_{(i+j) mod n}.
    pub fn product_coeff(&self, i: usize, j: usize) -> Series {
        // φ_{i+j} is read as φ_{(i+j) mod n}
        let num = self.k_at(i + j);
        let den = &self.k_at(i) * &self.k_at(j);
        num.div(&den).unwrap()
    }

    /// e_α in the φ basis: coefficient of φ_i is (1/n) ζ^{-αi} K_i / L^i.
    pub fn idempotent(&self, alpha: usize) -> Vec<Series> {
        let n = self.cfg.n as usize;
        (0..n)
            .map(|i| {
                let w = Cyc::zeta_pow(self.n(), -((alpha * i) as i64)).scale(&q(1, n as i64));
                self.k[i].div(&self.l.pow(i as i64).unwrap()).unwrap().scale(&w)
            })
            .collect()
    }

    /// Ψ_{αi} = (1/n) ζ^{αi} L^i / K_i.
    pub fn psi(&self, alpha: usize, i: usize) -> Series {
        let n = self.cfg.n as usize;
        let w = Cyc::zeta_pow(self.n(), (alpha * i) as i64).scale(&q(1, n as i64));
        self.l.pow(i as i64).unwrap().div(&self.k[i]).unwrap().scale(&w)
    }

    /// Ψ^{-1}_{jβ} = ζ^{-βj} K_j / L^j.
    pub fn psi_inv(&self, j: usize, beta: usize) -> Series {
        let w = Cyc::zeta_pow(self.n(), -((beta * j) as i64));
        self.k[j].div(&self.l.pow(j as i64).unwrap()).unwrap().scale(&w)
    }

    /// Two-point functions, idempotency, the metric on idempotents, ΨΨ^{-1} and du/dx.
    pub fn verify_quantum_structure(&self) -> Vec<Check> {
        let n = self.cfg.n as usize;
        let nn = self.n();
        let p = self.prec - n as i64;
        let mut out = Vec::new();
        // ⟨⟨φ_i, φ_{n-1-i}⟩⟩ = (1/n) 𝔏_i…𝔏_0 I_{i+1}; its D over C_1 is C_{i+1}/(n C_1).
        for i in 0..n {
            let mut g = self.e[i + 1].clone();
            for j in 1..=i {
                g = g.d().div(&self.c[j]).unwrap();
            }
            let lhs = g.scale_rational(&q(1, n as i64)).d().div(&self.c[1]).unwrap();
            let rhs = self.c[i + 1].div(&self.c[1]).unwrap().scale_rational(&q(1, n as i64));
            out.push(series_eq_to(&format!("D<<phi_{i},phi_{}>>/C_1 = C_{}/(n C_1)", n - 1 - i, i + 1), &lhs, &rhs, p));
        }
        let es: Vec<Vec<Series>> = (0..n).map(|a| self.idempotent(a)).collect();
        let mul = |u: &[Series], v: &[Series]| -> Vec<Series> {
            let mut w = vec![Series::zero(nn, self.prec + 10); n];
            for i in 0..n {
                for j in 0..n {
                    let t = &(&u[i] * &v[j]) * &self.product_coeff(i, j);
                    w[(i + j) % n] = &w[(i + j) % n] + &t;
                }
            }
            w
        };
        let mut idem_ok = true;
        let mut detail = format!("all pairs equal through x^{}", p - 1);
        'outer: for a in 0..n {
            for b in 0..n {
                let w = mul(&es[a], &es[b]);
                for i in 0..n {
                    let want = if a == b { es[b][i].clone() } else { Series::zero(nn, w[i].prec()) };
                    let c = series_eq_to("", &w[i], &want, p);
                    if !c.passed {
                        idem_ok = false;
                        detail = format!("e_{a} e_{b} component {i}: {}", c.detail);
                        break 'outer;
                    }
                }
            }
        }
        out.push(Check::from_bool("e_a e_b = delta e_b", idem_ok, detail));
        for a in 0..n {
            // g(e_α,e_α) = Σ_{i} e_α^i e_α^{Inv i} / n
            let mut acc = Series::zero(nn, self.prec + 10);
            for i in 0..n {
                acc = &acc + &(&es[a][i] * &es[a][inv(nn, i as u32) as usize]);
            }
            let g = acc.scale_rational(&q(1, n as i64));
            out.push(series_eq_to(&format!("g(e_{a},e_{a}) = 1/n^2"), &g, &Series::constant(Cyc::from_frac(nn, 1, (n * n) as i64), p), p));
        }
        for a in 0..n {
            for b in 0..n {
                let mut acc = Series::zero(nn, self.prec + 10);
                for i in 0..n {
                    acc = &acc + &(&self.psi(a, i) * &self.psi_inv(i, b));
                }
                let want = if a == b { Series::one(nn, p) } else { Series::zero(nn, p) };
                out.push(series_eq_to(&format!("(Psi Psi^-1)_{a}{b}"), &acc, &want, p));
            }
        }
        // du^α/dx = n Ψ_{α1} · C_1 / x against ζ^α L / x.
        let xinv = Series::x(nn, self.prec + 4).invert().unwrap();
        for a in 0..n {
            let lhs = &(&self.psi(a, 1).scale_int(n as i64) * &self.c[1]) * &xinv;
            let rhs = &self.l.scale(&Cyc::zeta_pow(nn, a as i64)) * &xinv;
            out.push(series_eq_to(&format!("du^{a}/dx = zeta^{a} L/x"), &lhs, &rhs, p));
        }
        out
    }

    pub fn verify_all(&self) -> Vec<Check> {
        let mut v = self.verify_c_identities();
        v.extend(self.verify_l_and_a());
        v.extend(self.verify_picard_fuchs());
        v.extend(self.verify_b_z());
        v.extend(self.verify_quantum_structure());
        v
    }
}

/// f_n(L) = ((-1)^{n-1}/n) C(n+1,4) Y L^{n-1} / n^n as a Laurent polynomial.
pub fn f_n(cfg: &ModelConfig) -> crate::laurent::LaurentInL {
    use crate::laurent::LaurentInL;
    let n = cfg.n as i64;
    let nn = qi(n).pow(n as i32);
    let lead = qi(-cfg.sign()) / qi(n) * BigRational::from_integer(binom(n + 1, 4)) / &nn;
    let mut p = LaurentInL::monomial(Cyc::from_rational(cfg.n, lead.clone()), n - 1);
    p.add_term(2 * n - 1, Cyc::from_rational(cfg.n, lead * qi(cfg.sign()) / nn));
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_maps() {
        assert_eq!(inv(5, 0), 0);
        assert_eq!(inv(5, 2), 3);
        assert_eq!(ion(5, 0), 5);
        assert_eq!(ion(5, 4), 4);
    }

    #[test]
    fn first_i_coefficients_n3() {
        let cfg = ModelConfig::new(3, 30).unwrap();
        let i = compute_i(&cfg, 12);
        assert!(i[0].coeff(0).is_one());
        assert!(i[1].coeff(0).is_zero());
        assert!(i[1].coeff(1).is_one());
        // (1/3)^3 / 4! with sign (-1)^3
        assert_eq!(i[1].coeff_rational(4).unwrap(), q(-1, 648));
    }

    #[test]
    fn l_coefficient_n3() {
        let cfg = ModelConfig::new(3, 30).unwrap();
        let l = compute_l(&cfg, 12);
        assert!(l.coeff(1).is_one());
        assert_eq!(l.coeff_rational(4).unwrap(), q(-1, 81));
    }

    #[test]
    fn e_function_agrees_with_closed_form() {
        for n in 3..=6 {
            let cfg = ModelConfig::new(n, 30).unwrap();
            let e = e_function(n, 25, n as usize);
            let i = compute_i(&cfg, 25);
            for k in 0..n as usize {
                assert!(e[k].agrees_with(&i[k]), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn small_model_identities() {
        let cfg = ModelConfig::new(3, 15).unwrap();
        let g = GenusZero::new(cfg, 15).unwrap();
        for c in g.verify_all() {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn c1_is_x_times_unit() {
        let cfg = ModelConfig::new(3, 15).unwrap();
        let g = GenusZero::new(cfg, 15).unwrap();
        assert_eq!(g.c[1].valuation(), 1);
        assert!(g.c[1].coeff(1).is_one());
    }
}
