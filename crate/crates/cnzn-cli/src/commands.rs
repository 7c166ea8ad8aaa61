//! The computations behind each subcommand.

use std::sync::Arc;

use cnzn::check::{series_eq, Check};
use cnzn::cyclotomic::Cyc;
use cnzn::genus0::{GenusZero, ModelConfig};
use cnzn::hae::verify_hae;
use cnzn::pmatrix::{ConstantsPolicy, HTable, LOperators, PMatrix, PMatrixOptions};
use cnzn::potentials::{generators_of, GraphSum, VertexIndexing};
use cnzn::ring::{Mono, RingCtx, RingElement, Terms};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::codec::ring_to_json;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PolicyKind {
    Symplectic,
    Zero,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum IndexingKind {
    Shifted,
    Literal,
}

/// Everything that determines a report. Parallelism and output format are not part of it.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: u32,
    pub big_n: i64,
    pub g: u32,
    pub k_max: usize,
    pub policy: PolicyKind,
    pub constants: Vec<BigRational>,
    pub normalization: BigRational,
    pub indexing: IndexingKind,
    pub insertions: Vec<u32>,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("n must be at least 3 (got {0})")]
    N(u32),
    #[error("N must be at least 4n = {need} (got {got})")]
    Truncation { need: i64, got: i64 },
    #[error("k-max must be at least 3g-2 = {need} (got {got})")]
    Depth { need: usize, got: usize },
    #[error("{0}")]
    Other(String),
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 3 {
            return Err(ConfigError::N(self.n));
        }
        if self.big_n < 4 * self.n as i64 {
            return Err(ConfigError::Truncation { need: 4 * self.n as i64, got: self.big_n });
        }
        let need = (3 * self.g as usize).saturating_sub(2);
        if self.k_max < need {
            return Err(ConfigError::Depth { need, got: self.k_max });
        }
        if let Some(c) = self.insertions.iter().find(|c| **c >= self.n) {
            return Err(ConfigError::Other(format!("insertion {c} is outside 0..{}", self.n)));
        }
        if num_traits::Zero::is_zero(&self.normalization) {
            return Err(ConfigError::Other("normalization must be nonzero".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "N": self.big_n,
            "g": self.g,
            "k_max": self.k_max,
            "policy": self.policy_value().tag(),
            "normalization": self.normalization.to_string(),
            "indexing": self.vertex_indexing().tag(),
            "insertions": self.insertions,
            "seed": self.seed,
        })
    }

    pub fn policy_value(&self) -> ConstantsPolicy {
        let cs: Vec<Cyc> = self.constants.iter().map(|r| Cyc::from_rational(self.n, r.clone())).collect();
        match self.policy {
            PolicyKind::Symplectic => ConstantsPolicy::Symplectic(cs),
            PolicyKind::Zero => ConstantsPolicy::Zero,
            PolicyKind::Custom => ConstantsPolicy::Custom(cs),
        }
    }

    pub fn vertex_indexing(&self) -> VertexIndexing {
        match self.indexing {
            IndexingKind::Shifted => VertexIndexing::Shifted,
            IndexingKind::Literal => VertexIndexing::Literal,
        }
    }

    fn genus0(&self) -> Result<GenusZero, cnzn::Error> {
        GenusZero::new(ModelConfig::new(self.n, self.big_n)?, self.big_n)
    }

    fn pmatrix(&self, g0: &GenusZero, ctx: &Arc<RingCtx>, k_max: usize) -> Result<PMatrix, cnzn::Error> {
        let mut opts = PMatrixOptions::new(self.n, k_max, self.policy_value());
        opts.normalization = Cyc::from_rational(self.n, self.normalization.clone());
        PMatrix::build(g0, ctx, opts)
    }
}

fn text(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn genus0(cfg: &RunConfig) -> Result<Report, cnzn::Error> {
    let g0 = cfg.genus0()?;
    let n = cfg.n as usize;
    let mut r = Report::new("genus0", cfg.to_json());
    r.checks = g0.verify_all();
    r.value("L", text(&g0.l));
    r.value("Y", text(&g0.y));
    for (k, s) in g0.i.iter().enumerate() {
        r.value(format!("I_{k}"), text(s));
    }
    for i in 1..=n {
        r.value(format!("C_{i}"), text(g0.c_at(i)));
    }
    for l in 0..=n {
        r.value(format!("K_{l}"), text(g0.k_at(l)));
    }
    for (i, s) in g0.a.iter().enumerate() {
        r.value(format!("A_{i}"), text(s));
    }
    Ok(r)
}

/// The report plus the exact table as JSON.
pub fn pmatrix(cfg: &RunConfig) -> Result<(Report, Value), cnzn::Error> {
    let g0 = cfg.genus0()?;
    let ctx = RingCtx::new(&g0)?;
    let pm = cfg.pmatrix(&g0, &ctx, cfg.k_max)?;
    let n = cfg.n as usize;
    let mut r = Report::new("pmatrix", cfg.to_json());
    r.checks = pm.verify_all(&g0);
    r.checks.extend(pm.symplectic.iter().cloned());
    for (k, c) in pm.constants.iter().enumerate() {
        r.value(format!("c_{k}"), text(c));
    }
    for (k, phi) in pm.phi.iter().enumerate() {
        r.value(format!("phi_{k}"), text(phi));
    }
    let mut entries = Vec::new();
    for k in 0..=cfg.k_max {
        for i in 0..n {
            for j in 0..n {
                let e = pm.p_tilde(k as i64, i, j);
                r.value(format!("P~^{k}_{{{i},{j}}}"), text(e.canonical_string()));
                entries.push(json!({ "k": k, "i": i, "j": j, "value": ring_to_json(e) }));
            }
        }
    }
    let table = json!({ "n": cfg.n, "k_max": cfg.k_max, "policy": cfg.policy_value().tag(), "entries": entries });
    Ok((r, table))
}

pub fn potential(cfg: &RunConfig) -> Result<Report, cnzn::Error> {
    let m = cfg.insertions.len() as i64;
    if cfg.g == 0 || 2 * cfg.g as i64 - 2 + m <= 0 {
        return Err(cnzn::Error::InvalidGenus(cfg.g));
    }
    let g0 = cfg.genus0()?;
    let ctx = RingCtx::new(&g0)?;
    let depth = (3 * cfg.g as usize + cfg.insertions.len()).saturating_sub(2).max(cfg.k_max);
    let pm = cfg.pmatrix(&g0, &ctx, depth)?;
    let sum = GraphSum::new(&pm, cfg.vertex_indexing());
    let f = sum.potential(cfg.g, &cfg.insertions)?;
    let mut r = Report::new("potential", cfg.to_json());
    let s_names: Vec<String> = ctx.s_generators().iter().map(|g| g.to_string()).collect();
    let c_names: Vec<String> = ctx.c_generators().iter().map(|g| g.to_string()).collect();
    let gens = f.generators();
    let allowed = |g: &String| s_names.contains(g) || (!cfg.insertions.is_empty() && c_names.contains(g));
    r.checks.push(Check::from_bool("generators within the allowed set", gens.iter().all(allowed), format!("{gens:?}")));
    r.value("decorated_graphs", json!(f.per_graph.len()));
    r.value("generators", json!(gens));
    r.value("F", text(f.value.canonical_string()));
    r.value("F_exact", ring_to_json(&f.value));
    r.value("eval", text(f.value.eval(&g0)));
    Ok(r)
}

pub fn verify_identities(cfg: &RunConfig) -> Result<Report, cnzn::Error> {
    let g0 = cfg.genus0()?;
    let ctx = RingCtx::new(&g0)?;
    let mut r = Report::new("verify-identities", cfg.to_json());
    r.checks = g0.verify_all();
    r.checks.extend(ctx.certificates.iter().cloned());
    r.checks.extend(HTable::new(cfg.n, 2 * cfg.n as usize).verify());
    r.checks.extend(LOperators::new(cfg.n).verify());
    let pm = cfg.pmatrix(&g0, &ctx, cfg.k_max)?;
    r.checks.extend(pm.verify_all(&g0));
    r.checks.extend(pm.symplectic.iter().cloned());
    r.checks.extend(random_ring_checks(&g0, &ctx, cfg.seed, 16));
    Ok(r)
}

pub fn verify_hae_cmd(cfg: &RunConfig) -> Result<Report, cnzn::Error> {
    let g0 = cfg.genus0()?;
    let ctx = RingCtx::new(&g0)?;
    let pm = cfg.pmatrix(&g0, &ctx, cfg.k_max)?;
    let sum = GraphSum::new(&pm, cfg.vertex_indexing());
    let h = verify_hae(&g0, &sum, cfg.g)?;
    let mut r = Report::new("verify-hae", cfg.to_json());
    r.checks = h.checks.clone();
    r.value("parity", text(if h.odd { "odd" } else { "even" }));
    r.value("F_g", text(h.f_g.value.canonical_string()));
    r.value("lhs", text(h.lhs.canonical_string()));
    r.value("rhs", text(h.rhs.canonical_string()));
    r.value("difference", text(h.difference.canonical_string()));
    r.value("lhs_generators", json!(generators_of(&h.lhs)));
    r.value("eval_residual", text(&h.eval_residual));
    Ok(r)
}

/// Seeded spot checks of the evaluation homomorphism and the derivation.
fn random_ring_checks(g0: &GenusZero, ctx: &Arc<RingCtx>, seed: u64, count: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s_ids: Vec<u16> = ctx.s_generators().into_iter().map(|g| ctx.id(g).unwrap()).collect();
    let c_ids: Vec<u16> = ctx.c_generators().into_iter().map(|g| ctx.id(g).unwrap()).collect();
    let random = |rng: &mut ChaCha8Rng| {
        let mut terms = Terms::new();
        for _ in 0..rng.gen_range(1..4) {
            let mut g = vec![(s_ids[rng.gen_range(0..s_ids.len())], rng.gen_range(0..3)), (c_ids[rng.gen_range(0..c_ids.len())], rng.gen_range(-1..2))];
            g.retain(|(_, e)| *e != 0);
            g.sort();
            g.dedup_by_key(|(id, _)| *id);
            let c = Cyc::from_frac(ctx.n(), rng.gen_range(-5..6), rng.gen_range(1..4));
            terms.insert(Mono { l: rng.gen_range(-1..4), g }, c);
        }
        terms.retain(|_, c| !c.is_zero());
        RingElement::from_terms(ctx, terms)
    };
    let mut out = Vec::new();
    for t in 0..count {
        let x = random(&mut rng);
        let y = random(&mut rng);
        let (ex, ey) = (x.eval(g0), y.eval(g0));
        let prod = series_eq(&format!("random #{t}: eval(xy) = eval(x)eval(y)"), &(&x * &y).eval(g0), &(&ex * &ey));
        let der = series_eq(&format!("random #{t}: eval(Dx) = D eval(x)"), &x.derive().eval(g0), &ex.d());
        let leibniz = (&x * &y).derive() == &(&x.derive() * &y) + &(&x * &y.derive());
        out.push(prod);
        out.push(der);
        out.push(Check::from_bool(format!("random #{t}: Leibniz rule"), leibniz, ""));
    }
    out
}
