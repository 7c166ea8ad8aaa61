//! The polynomial ring C[L^{±1}][𝔖_n][𝔠_n] with a formal derivation.
//!
//! Generators are D^j A_i (the admitted set 𝔖_n) and the canonical C_i. The C_i
//! carry Laurent exponents because each C_i is x times a unit. Derivatives that
//! leave 𝔖_n are rewritten by rules that are built constructively and certified by
//! evaluating both sides as series.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use crate::check::{series_eq_to, Check};
use crate::cyclotomic::Cyc;
use crate::genus0::{chain_sum, f_n, GenusZero, ModelConfig};
use crate::laurent::LaurentInL;
use crate::rational::{q, qi};
use crate::series::Series;
use crate::stirling::stirling_first;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// D^j A_i
    DA { i: u32, j: u32 },
    C(u32),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::DA { i, j: 0 } => write!(f, "A{i}"),
            Gen::DA { i, j: 1 } => write!(f, "DA{i}"),
            Gen::DA { i, j } => write!(f, "D{j}A{i}"),
            Gen::C(i) => write!(f, "C{i}"),
        }
    }
}

/// L^l ∏ g^e with generator ids sorted and exponents nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub l: i64,
    pub g: Vec<(u16, i32)>,
}

impl Mono {
    pub fn one() -> Self {
        Mono { l: 0, g: Vec::new() }
    }

    pub fn exp(&self, id: u16) -> i32 {
        self.g.iter().find(|(g, _)| *g == id).map(|(_, e)| *e).unwrap_or(0)
    }

    fn times(&self, other: &Mono) -> Mono {
        let mut g = Vec::with_capacity(self.g.len() + other.g.len());
        let (mut a, mut b) = (0, 0);
        while a < self.g.len() || b < other.g.len() {
            match (self.g.get(a), other.g.get(b)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    if x.1 + y.1 != 0 {
                        g.push((x.0, x.1 + y.1));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    g.push(*x);
                    a += 1;
                }
                (Some(_), Some(y)) => {
                    g.push(*y);
                    b += 1;
                }
                (Some(x), None) => {
                    g.push(*x);
                    a += 1;
                }
                (None, Some(y)) => {
                    g.push(*y);
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Mono { l: self.l + other.l, g }
    }

    fn with_exp(&self, id: u16, e: i32) -> Mono {
        let mut g: Vec<(u16, i32)> = self.g.iter().copied().filter(|(x, _)| *x != id).collect();
        if e != 0 {
            g.push((id, e));
            g.sort_unstable();
        }
        Mono { l: self.l, g }
    }
}

pub type Terms = BTreeMap<Mono, Cyc>;

fn add_term(t: &mut Terms, m: Mono, c: Cyc) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&m) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                t.remove(&m);
            }
        }
        None => {
            t.insert(m, c);
        }
    }
}

/// Generator table, rewrite rules and certification record for one n.
#[derive(Debug)]
pub struct RingCtx {
    pub cfg: ModelConfig,
    /// Index of the distinguished top generator A_top (s for odd n, s-1 for even n).
    pub top: u32,
    gens: Vec<Gen>,
    index: HashMap<Gen, u16>,
    admitted: Vec<bool>,
    /// Rewrite for each non-admitted generator, in admitted generators only.
    rules: Vec<Option<Terms>>,
    pub certificates: Vec<Check>,
}

impl RingCtx {
    /// Builds the generator table and rules, certifying each rule against `g0`.
    pub fn new(g0: &GenusZero) -> Result<Arc<RingCtx>, Error> {
        let cfg = g0.cfg;
        let n = cfg.n;
        let s = cfg.s();
        let top = if cfg.is_odd() { s } else { s - 1 };
        let mut gens = Vec::new();
        let mut admitted = Vec::new();
        for i in 1..=top {
            let bound = if i == top { 0 } else { n - 2 - i };
            for j in 0..n {
                gens.push(Gen::DA { i, j });
                admitted.push(j <= bound);
            }
        }
        let c_count = if cfg.is_odd() { s + 1 } else { s };
        for i in 1..=c_count {
            gens.push(Gen::C(i));
            admitted.push(true);
        }
        let index = gens.iter().enumerate().map(|(k, g)| (*g, k as u16)).collect();
        let rules = vec![None; gens.len()];
        let mut ctx = RingCtx { cfg, top, gens, index, admitted, rules, certificates: Vec::new() };
        ctx.build_rules(g0)?;
        Ok(Arc::new(ctx))
    }

    pub fn n(&self) -> u32 {
        self.cfg.n
    }

    pub fn gen(&self, id: u16) -> Gen {
        self.gens[id as usize]
    }

    pub fn id(&self, g: Gen) -> Option<u16> {
        self.index.get(&g).copied()
    }

    pub fn is_admitted(&self, id: u16) -> bool {
        self.admitted[id as usize]
    }

    /// The generating set 𝔖_n in table order.
    pub fn s_generators(&self) -> Vec<Gen> {
        self.gens.iter().zip(&self.admitted).filter(|(g, a)| **a && matches!(g, Gen::DA { .. })).map(|(g, _)| *g).collect()
    }

    pub fn c_generators(&self) -> Vec<Gen> {
        self.gens.iter().filter(|g| matches!(g, Gen::C(_))).copied().collect()
    }

    /// Rewrite rules as (generator, right-hand side) pairs.
    pub fn rules(self: &Arc<Self>) -> Vec<(Gen, RingElement)> {
        self.rules
            .iter()
            .enumerate()
            .filter_map(|(id, r)| r.as_ref().map(|t| (self.gens[id], RingElement { ctx: self.clone(), terms: t.clone() })))
            .collect()
    }

    fn build_rules(&mut self, g0: &GenusZero) -> Result<(), Error> {
        let n = self.n();
        let top = self.top;
        // Top derivatives D^{n-1-i} A_i for i below the top, in increasing i.
        for i in 1..top {
            let target = self.id(Gen::DA { i, j: n - 1 - i }).expect("raw generator");
            let rel = self.graded_relation(i as usize);
            let mut rest = Terms::new();
            let mut coeff_ok = true;
            for (m, c) in rel {
                let e = m.exp(target);
                if e == 0 {
                    add_term(&mut rest, m, c);
                } else if e == 1 && m.l == 1 && m.g.len() == 1 && c == Cyc::from_int(n, -1) {
                    // the expected -L·target term
                } else {
                    coeff_ok = false;
                }
            }
            if !coeff_ok {
                return Err(Error::NotInRing(format!("relation for D^{}A_{i} is not linear in it with coefficient -L", n - 1 - i)));
            }
            let rule: Terms = rest.into_iter().map(|(m, c)| (Mono { l: m.l - 1, g: m.g }, c)).collect();
            let rule = self.substitute_rules(&rule);
            if let Some(bad) = rule.keys().flat_map(|m| m.g.iter()).find(|(id, _)| !self.is_admitted(*id)) {
                return Err(Error::NotInRing(format!("rule for D^{}A_{i} uses {}", n - 1 - i, self.gen(bad.0))));
            }
            self.rules[target as usize] = Some(rule);
        }
        // DA_top from the derivative identity for A.
        let target = self.id(Gen::DA { i: top, j: 1 }).expect("raw generator");
        let rule = self.da_top_rule();
        self.rules[target as usize] = Some(rule);
        // Everything above the first non-admitted derivative follows by deriving rules.
        for id in 0..self.gens.len() {
            if self.admitted[id] || self.rules[id].is_some() {
                continue;
            }
            if let Gen::DA { i, j } = self.gens[id] {
                let below = self.id(Gen::DA { i, j: j - 1 }).unwrap();
                if let Some(prev) = self.rules[below as usize].clone() {
                    let d = self.substitute_rules(&self.derive_terms(&prev));
                    self.rules[id] = Some(d);
                }
            }
        }
        self.certify(g0);
        if self.certificates.iter().any(|c| !c.passed) {
            let bad = self.certificates.iter().find(|c| !c.passed).unwrap();
            return Err(Error::NotInRing(format!("rule certification failed: {bad}")));
        }
        Ok(())
    }

    fn certify(&mut self, g0: &GenusZero) {
        let mut out = Vec::new();
        let p = g0.prec - 2 * self.n() as i64;
        for id in 0..self.gens.len() {
            if let (Some(rule), Gen::DA { i, j }) = (&self.rules[id], self.gens[id]) {
                let lhs = g0.a[i as usize].d_pow(j as usize);
                let rhs = eval_terms(self, rule, g0);
                out.push(series_eq_to(&format!("rule for D^{j}A_{i}"), &lhs, &rhs, p));
            }
        }
        // The C relation used for canonical forms.
        let s = self.cfg.s() as usize;
        let mut prod = Series::one(self.n(), g0.prec + 10);
        if self.cfg.is_odd() {
            for i in 1..=s {
                prod = &(&prod * &g0.c[i]) * &g0.c[i];
            }
            prod = &prod * &g0.c[s + 1];
        } else {
            for i in 1..=s {
                prod = &prod * &g0.c[i];
            }
            prod = &prod * &prod;
        }
        out.push(series_eq_to("C relation", &prod, &g0.l.pow(self.n() as i64).unwrap(), p));
        if !self.cfg.is_odd() {
            out.push(series_eq_to("K_s = L^s", &g0.k[s], &g0.l.pow(s as i64).unwrap(), p));
        }
        self.certificates = out;
    }

    /// Rewrites every non-admitted generator having a rule, until none remain.
    fn substitute_rules(&self, t: &Terms) -> Terms {
        let mut cur = t.clone();
        loop {
            let mut changed = false;
            let mut next = Terms::new();
            for (m, c) in &cur {
                let hit = m.g.iter().find(|(id, e)| !self.admitted[*id as usize] && *e > 0 && self.rules[*id as usize].is_some());
                match hit {
                    None => add_term(&mut next, m.clone(), c.clone()),
                    Some(&(id, e)) => {
                        changed = true;
                        let rest = m.with_exp(id, 0);
                        let rule = self.rules[id as usize].as_ref().unwrap();
                        let mut acc: Terms = [(rest, c.clone())].into_iter().collect();
                        for _ in 0..e {
                            acc = self.mul_terms(&acc, rule);
                        }
                        for (mm, cc) in acc {
                            add_term(&mut next, mm, cc);
                        }
                    }
                }
            }
            cur = next;
            if !changed {
                return cur;
            }
        }
    }

    /// (B_{n,i} + Y Σ_k s_{n,k} B_{k,i}) / K_i expanded over raw generators.
    fn graded_relation(&self, i: usize) -> Terms {
        let n = self.n() as usize;
        let xs: Vec<Terms> = (0..=n).map(|r| self.x_terms(r)).collect();
        let max_a = n - i;
        let mut xkl: Vec<Vec<Terms>> = vec![Vec::new(); n + 1];
        for r in 1..=i {
            let mut v = vec![Terms::new(), xs[r].clone()];
            for a in 2..=max_a {
                let prev = v[a - 1].clone();
                let d = self.derive_terms(&prev);
                let next = add_terms(&d, &self.mul_terms(&xs[r], &prev));
                v.push(next);
            }
            xkl[r] = v;
        }
        let one: Terms = [(Mono::one(), Cyc::one(self.n()))].into_iter().collect();
        let factor = |r: usize, a: usize| -> Terms {
            if a == 0 {
                one.clone()
            } else {
                xkl[r][a].clone()
            }
        };
        let mul = |x: &Terms, y: &Terms| self.mul_terms(x, y);
        let add = |x: &Terms, y: &Terms| add_terms(x, y);
        let scale = |x: &Terms, b: i64| scale_terms(x, &Cyc::from_int(self.n(), b));
        let zero = Terms::new();
        let b = |k: usize| chain_sum(k, i, &factor, &mul, &add, &scale, &zero);
        let mut acc = Terms::new();
        for k in 1..n {
            let sk = Cyc::from_rational(self.n(), BigRational::from_integer(stirling_first(n, k)));
            acc = add_terms(&acc, &scale_terms(&b(k), &sk));
        }
        add_terms(&b(n), &self.mul_terms(&self.y_terms(), &acc))
    }

    fn da_top_rule(&self) -> Terms {
        let n = self.n();
        let top = self.top;
        let nn = n as i64;
        let mut out = Terms::new();
        let lim_sq = top;
        let lim_d = top - 1;
        for r in 1..=lim_sq {
            let a = self.id(Gen::DA { i: r, j: 0 }).unwrap();
            add_term(&mut out, Mono { l: 1, g: vec![(a, 2)] }, Cyc::one(n));
        }
        for r in 1..=lim_d {
            let a = self.id(Gen::DA { i: r, j: 1 }).unwrap();
            add_term(&mut out, Mono { l: 0, g: vec![(a, 1)] }, Cyc::from_int(n, -(nn - 2 * r as i64)));
        }
        for (e, c) in f_n(&self.cfg).terms() {
            add_term(&mut out, Mono { l: *e, g: vec![] }, c.scale_int(-nn));
        }
        if !self.cfg.is_odd() {
            out = scale_terms(&out, &Cyc::from_frac(n, 1, 2));
        }
        out
    }

    /// Y = 1 + (-1)^n L^n / n^n.
    pub fn y_terms(&self) -> Terms {
        let n = self.n();
        let mut t = Terms::new();
        add_term(&mut t, Mono::one(), Cyc::one(n));
        add_term(&mut t, Mono { l: n as i64, g: vec![] }, Cyc::from_rational(n, qi(self.cfg.sign()) / qi(n as i64).pow(n as i32)));
        t
    }

    /// A_i for any 0 ≤ i ≤ n in canonical generators.
    pub fn a_terms(&self, i: usize) -> Terms {
        let n = self.n() as usize;
        let mut t = Terms::new();
        if i == 0 || i >= n || (n.is_multiple_of(2) && 2 * i == n) {
            return t;
        }
        let (idx, sign) = if i <= self.top as usize { (i, 1) } else { (n - i, -1) };
        let id = self.id(Gen::DA { i: idx as u32, j: 0 }).unwrap();
        add_term(&mut t, Mono { l: 0, g: vec![(id, 1)] }, Cyc::from_int(self.n(), sign));
        t
    }

    /// X_i = Y - L (A_i - A_{i-1}); X_0 = 0.
    pub fn x_terms(&self, i: usize) -> Terms {
        if i == 0 {
            return Terms::new();
        }
        let diff = sub_terms(&self.a_terms(i), &self.a_terms(i - 1));
        sub_terms(&self.y_terms(), &shift_l(&diff, 1))
    }

    fn canonical_c(&self, i: u32) -> u32 {
        let n = self.n();
        let i = (i - 1) % n + 1;
        i.min(n + 1 - i)
    }

    /// Applies the product relation among the C_i to a monomial.
    fn canonicalize(&self, m: Mono) -> Mono {
        let Some(c1) = self.id(Gen::C(1)) else { return m };
        let e = m.exp(c1);
        if e == 0 {
            return m;
        }
        let s = self.cfg.s();
        let n = self.n() as i64;
        if self.cfg.is_odd() {
            // C_1^2 = L^n ∏_{2≤i≤s} C_i^{-2} C_{s+1}^{-1}
            let r = e.rem_euclid(2);
            let h = (e - r) / 2;
            if h == 0 {
                return m;
            }
            let mut out = m.with_exp(c1, r);
            out.l += n * h as i64;
            let mut extra = Mono::one();
            for i in 2..=s {
                extra = extra.times(&Mono { l: 0, g: vec![(self.id(Gen::C(i)).unwrap(), -2 * h)] });
            }
            extra = extra.times(&Mono { l: 0, g: vec![(self.id(Gen::C(s + 1)).unwrap(), -h)] });
            out.times(&extra)
        } else {
            // C_1 = L^s ∏_{2≤i≤s} C_i^{-1}
            let mut out = m.with_exp(c1, 0);
            out.l += s as i64 * e as i64;
            for i in 2..=s {
                out = out.times(&Mono { l: 0, g: vec![(self.id(Gen::C(i)).unwrap(), -e)] });
            }
            out
        }
    }

    pub fn mul_terms(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                add_term(&mut out, self.canonicalize(ma.times(mb)), ca * cb);
            }
        }
        out
    }

    /// D of a single generator, before any rule substitution of the result.
    fn derive_gen(&self, id: u16) -> Terms {
        match self.gens[id as usize] {
            Gen::DA { i, j } => {
                let up = Gen::DA { i, j: j + 1 };
                match self.id(up) {
                    Some(uid) => match (&self.rules[uid as usize], self.admitted[uid as usize]) {
                        (Some(rule), false) => rule.clone(),
                        _ => [(Mono { l: 0, g: vec![(uid, 1)] }, Cyc::one(self.n()))].into_iter().collect(),
                    },
                    None => panic!("derivative D^{}A_{i} is outside the generator table", j + 1),
                }
            }
            Gen::C(i) => {
                let x = self.x_terms(i as usize);
                let c: Terms = [(Mono { l: 0, g: vec![(id, 1)] }, Cyc::one(self.n()))].into_iter().collect();
                self.mul_terms(&c, &x)
            }
        }
    }

    /// Formal D with the Leibniz rule.
    pub fn derive_terms(&self, t: &Terms) -> Terms {
        let n = self.n();
        let y = self.y_terms();
        let mut out = Terms::new();
        for (m, c) in t {
            let base: Terms = [(m.clone(), c.clone())].into_iter().collect();
            if m.l != 0 {
                let part = scale_terms(&self.mul_terms(&base, &y), &Cyc::from_int(n, m.l));
                for (mm, cc) in part {
                    add_term(&mut out, mm, cc);
                }
            }
            for &(id, e) in &m.g {
                let rest: Terms = [(m.with_exp(id, e - 1), c.scale_int(e as i64))].into_iter().collect();
                let part = self.mul_terms(&rest, &self.derive_gen(id));
                for (mm, cc) in part {
                    add_term(&mut out, mm, cc);
                }
            }
        }
        out
    }
}

pub fn add_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    for (m, c) in b {
        add_term(&mut out, m.clone(), c.clone());
    }
    out
}

pub fn sub_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    for (m, c) in b {
        add_term(&mut out, m.clone(), -c);
    }
    out
}

pub fn scale_terms(a: &Terms, c: &Cyc) -> Terms {
    let mut out = Terms::new();
    for (m, v) in a {
        add_term(&mut out, m.clone(), v * c);
    }
    out
}

fn shift_l(a: &Terms, k: i64) -> Terms {
    a.iter().map(|(m, c)| (Mono { l: m.l + k, g: m.g.clone() }, c.clone())).collect()
}

fn gen_series(ctx: &RingCtx, id: u16, g0: &GenusZero) -> Series {
    match ctx.gen(id) {
        Gen::DA { i, j } => g0.a[i as usize].d_pow(j as usize),
        Gen::C(i) => g0.c[i as usize].clone(),
    }
}

fn eval_terms(ctx: &RingCtx, t: &Terms, g0: &GenusZero) -> Series {
    let n = ctx.n();
    let mut pow_cache: HashMap<(Option<u16>, i64), Series> = HashMap::new();
    let mut power = |key: Option<u16>, e: i64| -> Series {
        pow_cache
            .entry((key, e))
            .or_insert_with(|| {
                let base = match key {
                    None => g0.l.clone(),
                    Some(id) => gen_series(ctx, id, g0),
                };
                base.pow(e).expect("invertible generator")
            })
            .clone()
    };
    let mut acc: Option<Series> = None;
    for (m, c) in t {
        let mut s = Series::constant(c.clone(), g0.prec + 8 * n as i64);
        if m.l != 0 {
            s = &s * &power(None, m.l);
        }
        for &(id, e) in &m.g {
            s = &s * &power(Some(id), e as i64);
        }
        acc = Some(match acc {
            None => s,
            Some(a) => &a + &s,
        });
    }
    acc.unwrap_or_else(|| Series::zero(n, g0.prec))
}

/// An element of the ring, tied to its context.
#[derive(Clone, Debug)]
pub struct RingElement {
    ctx: Arc<RingCtx>,
    terms: Terms,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl RingElement {
    pub fn from_terms(ctx: &Arc<RingCtx>, terms: Terms) -> Self {
        let mut t = Terms::new();
        for (m, c) in terms {
            add_term(&mut t, ctx.canonicalize(m), c);
        }
        RingElement { ctx: ctx.clone(), terms: t }
    }

    pub fn zero(ctx: &Arc<RingCtx>) -> Self {
        RingElement { ctx: ctx.clone(), terms: Terms::new() }
    }

    pub fn constant(ctx: &Arc<RingCtx>, c: Cyc) -> Self {
        RingElement::from_terms(ctx, [(Mono::one(), c)].into_iter().collect())
    }

    pub fn one(ctx: &Arc<RingCtx>) -> Self {
        RingElement::constant(ctx, Cyc::one(ctx.n()))
    }

    pub fn l_pow(ctx: &Arc<RingCtx>, e: i64) -> Self {
        RingElement::from_terms(ctx, [(Mono { l: e, g: vec![] }, Cyc::one(ctx.n()))].into_iter().collect())
    }

    pub fn from_laurent(ctx: &Arc<RingCtx>, p: &LaurentInL) -> Self {
        RingElement::from_terms(ctx, p.terms().map(|(e, c)| (Mono { l: *e, g: vec![] }, c.clone())).collect())
    }

    /// A generator; non-admitted D^j A_i are rewritten.
    pub fn gen(ctx: &Arc<RingCtx>, g: Gen) -> Result<Self, Error> {
        let g = match g {
            Gen::C(i) => Gen::C(ctx.canonical_c(i)),
            other => other,
        };
        let id = ctx.id(g).ok_or_else(|| Error::NotInRing(g.to_string()))?;
        let t: Terms = [(Mono { l: 0, g: vec![(id, 1)] }, Cyc::one(ctx.n()))].into_iter().collect();
        Ok(RingElement { ctx: ctx.clone(), terms: ctx.substitute_rules(&t) })
    }

    /// A_i for 0 ≤ i ≤ n through the symmetry A_i = -A_{n-i}.
    pub fn a(ctx: &Arc<RingCtx>, i: usize) -> Self {
        RingElement { ctx: ctx.clone(), terms: ctx.a_terms(i) }
    }

    pub fn y(ctx: &Arc<RingCtx>) -> Self {
        RingElement { ctx: ctx.clone(), terms: ctx.y_terms() }
    }

    pub fn x(ctx: &Arc<RingCtx>, i: usize) -> Self {
        RingElement { ctx: ctx.clone(), terms: ctx.x_terms(i) }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        RingElement { ctx: self.ctx.clone(), terms: scale_terms(&self.terms, c) }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&Cyc::from_rational(self.ctx.n(), r.clone()))
    }

    /// Multiplication by L^k.
    pub fn shift_l(&self, k: i64) -> Self {
        RingElement { ctx: self.ctx.clone(), terms: shift_l(&self.terms, k) }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(RingElement::one(&self.ctx), |acc, _| &acc * self)
    }

    /// The formal derivation D, landing back in normal form.
    pub fn derive(&self) -> Self {
        let d = self.ctx.derive_terms(&self.terms);
        RingElement { ctx: self.ctx.clone(), terms: self.ctx.substitute_rules(&d) }
    }

    /// Formal partial derivative in a generator of 𝔖_n or 𝔠_n.
    pub fn partial(&self, g: Gen) -> Result<Self, Error> {
        let id = self.ctx.id(g).ok_or_else(|| Error::NotInRing(g.to_string()))?;
        if !self.ctx.is_admitted(id) {
            return Err(Error::NotInRing(format!("{g} is not a free generator")));
        }
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            let e = m.exp(id);
            if e != 0 {
                add_term(&mut out, m.with_exp(id, e - 1), c.scale_int(e as i64));
            }
        }
        Ok(RingElement { ctx: self.ctx.clone(), terms: out })
    }

    /// Partial derivative in the distinguished generator A_top.
    pub fn partial_a_top(&self) -> Self {
        let top = self.ctx.top;
        self.partial(Gen::DA { i: top, j: 0 }).expect("A_top is admitted")
    }

    /// Evaluation homomorphism to series.
    pub fn eval(&self, g0: &GenusZero) -> Series {
        eval_terms(&self.ctx, &self.terms, g0)
    }

    /// True when no generator outside 𝔖_n ∪ 𝔠_n occurs.
    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|m| m.g.iter().all(|(id, _)| self.ctx.is_admitted(*id)))
    }

    /// Laurent polynomial in L when no generator occurs.
    pub fn as_laurent(&self) -> Option<LaurentInL> {
        let mut p = LaurentInL::zero(self.ctx.n());
        for (m, c) in &self.terms {
            if !m.g.is_empty() {
                return None;
            }
            p.add_term(m.l, c.clone());
        }
        Some(p)
    }

    /// Canonical text: sorted monomials with exponent lists.
    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let gs: Vec<String> = m.g.iter().map(|(id, e)| format!("{}^{}", self.ctx.gen(*id), e)).collect();
                format!("[{}]*L^{}*{}", c, m.l, gs.join("*"))
            })
            .collect();
        parts.join(" + ")
    }

    /// Substitutes L ↦ c L (used for the universal functions φ_k).
    pub fn rescale_l(&self, c: &Cyc) -> Self {
        let cinv = c.inv().expect("nonzero");
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| {
                let f = if m.l >= 0 { c.pow(m.l as u32) } else { cinv.pow((-m.l) as u32) };
                (m.clone(), v * &f)
            })
            .collect();
        RingElement::from_terms(&self.ctx, terms)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.canonical_string())
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        RingElement { ctx: self.ctx.clone(), terms: add_terms(&self.terms, &rhs.terms) }
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        RingElement { ctx: self.ctx.clone(), terms: sub_terms(&self.terms, &rhs.terms) }
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        RingElement { ctx: self.ctx.clone(), terms: self.ctx.mul_terms(&self.terms, &rhs.terms) }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&Cyc::from_int(self.ctx.n(), -1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &'a RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Unique p ∈ C[L^{±1}] with p(L) = f through the known precision.
pub fn fit_laurent_in_l(f: &Series, g0: &GenusZero, max_degree: i64) -> Result<LaurentInL, Error> {
    LaurentInL::fit(f, &g0.l, max_degree)
}

/// Rational constant helper used by callers assembling ring elements.
pub fn rc(ctx: &Arc<RingCtx>, a: i64, b: i64) -> RingElement {
    RingElement::constant(ctx, Cyc::from_rational(ctx.n(), q(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: u32) -> (GenusZero, Arc<RingCtx>) {
        let cfg = ModelConfig::new(n, 6 * n as i64).unwrap();
        let g0 = GenusZero::new(cfg, 6 * n as i64).unwrap();
        let ctx = RingCtx::new(&g0).unwrap();
        (g0, ctx)
    }

    #[test]
    fn generator_sets() {
        let names = |n| setup(n).1.s_generators().iter().map(|g| g.to_string()).collect::<Vec<_>>();
        assert_eq!(names(3), vec!["A1"]);
        assert_eq!(names(4), vec!["A1"]);
        assert_eq!(names(5), vec!["A1", "DA1", "D2A1", "A2"]);
    }

    #[test]
    fn derive_l() {
        let (_, ctx) = setup(3);
        let d = RingElement::l_pow(&ctx, 1).derive();
        let want = &RingElement::l_pow(&ctx, 1) + &RingElement::l_pow(&ctx, 4).scale(&Cyc::from_frac(3, -1, 27));
        assert_eq!(d, want);
        assert!(RingElement::one(&ctx).derive().is_zero());
    }

    #[test]
    fn rules_certified() {
        for n in 3..=6 {
            let (_, ctx) = setup(n);
            assert!(ctx.certificates.iter().all(|c| c.passed), "n={n}");
        }
    }
}
