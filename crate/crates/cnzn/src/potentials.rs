//! Potentials F_{g,m}(φ_{c_1}, …, φ_{c_m}) as ring elements, assembled as a sum
//! over decorated stable graphs of vertex, edge and leg contributions.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use parking_lot::Mutex;
use rayon::prelude::*;

use crate::cyclotomic::Cyc;
use crate::genus0::inv;
use crate::graphs::{enumerate_decorated, DecoratedGraph};
use crate::laurent::LaurentInL;
use crate::pmatrix::PMatrix;
use crate::psi::Dvv;
use crate::rational::{q, qi};
use crate::ring::{Gen, RingCtx, RingElement};
use crate::Error;

/// Which P-matrix level feeds the translation coefficient T_{p,i}.
///
/// Expanding z(Id - R^{-1}(z))·φ_0 gives level i-1 (`Shifted`). The closed formula
/// usually quoted uses level i (`Literal`). Vertex terms never depend on the
/// generators, so the anomaly equation holds for either choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexIndexing {
    Shifted,
    Literal,
}

impl VertexIndexing {
    pub fn tag(&self) -> &'static str {
        match self {
            VertexIndexing::Shifted => "shifted",
            VertexIndexing::Literal => "literal",
        }
    }
}

/// A computed potential together with its per-graph pieces.
#[derive(Clone, Debug)]
pub struct Potential {
    pub g: u32,
    pub insertions: Vec<u32>,
    pub value: RingElement,
    /// Contribution of each decorated graph, already divided by |Aut|.
    pub per_graph: Vec<(DecoratedGraph, RingElement)>,
}

impl Potential {
    /// Names of generators appearing in the canonical form.
    pub fn generators(&self) -> BTreeSet<String> {
        generators_of(&self.value)
    }
}

pub fn generators_of(e: &RingElement) -> BTreeSet<String> {
    let ctx = e.ctx();
    e.terms().keys().flat_map(|m| m.g.iter().map(|(id, _)| ctx.gen(*id).to_string())).collect()
}

/// Contributions and their caches for one P-matrix table.
pub struct GraphSum<'a> {
    pm: &'a PMatrix,
    ctx: Arc<RingCtx>,
    psi: Dvv,
    indexing: VertexIndexing,
    edges: Mutex<HashMap<(u32, u32, u32, u32), RingElement>>,
    legs: Mutex<HashMap<(u32, u32, u32), RingElement>>,
    /// Added to every edge contribution when set; used only to probe the checks.
    edge_perturbation: Option<RingElement>,
}

impl<'a> GraphSum<'a> {
    pub fn new(pm: &'a PMatrix, indexing: VertexIndexing) -> Self {
        GraphSum { pm, ctx: pm.ctx.clone(), psi: Dvv::new(), indexing, edges: Mutex::new(HashMap::new()), legs: Mutex::new(HashMap::new()), edge_perturbation: None }
    }

    /// A constant shift leaves the anomaly equation intact (the same shift enters both sides);
    /// a shift depending on the 𝔖_n generators breaks it.
    pub fn with_edge_perturbation(mut self, c: RingElement) -> Self {
        self.edge_perturbation = Some(c);
        self
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn pmatrix(&self) -> &PMatrix {
        self.pm
    }

    fn n(&self) -> u32 {
        self.ctx.n()
    }

    fn zeta(&self, e: i64) -> Cyc {
        Cyc::zeta_pow(self.n(), e)
    }

    fn depth(&self, k: i64) -> Result<(), Error> {
        if k > self.pm.k_max() as i64 {
            return Err(Error::Precision { requested: k, available: self.pm.k_max() as i64 });
        }
        Ok(())
    }

    /// T_{p,i}; zero for i < 2.
    pub fn t_coefficient(&self, p: u32, i: u32) -> Result<LaurentInL, Error> {
        let n = self.n();
        if i < 2 {
            return Ok(LaurentInL::zero(n));
        }
        let level = match self.indexing {
            VertexIndexing::Shifted => i - 1,
            VertexIndexing::Literal => i,
        } as i64;
        self.depth(level)?;
        let entry = self.pm.p_tilde(level, 0, p as usize).as_laurent().ok_or_else(|| Error::NotInRing("P~_{0,p} must be a Laurent polynomial in L".into()))?;
        let sign = if i.is_multiple_of(2) { 1 } else { -1 };
        Ok(entry.scale(&self.zeta(-level * p as i64)).scale_rational(&q(sign, n as i64)))
    }

    /// Vertex term for genus gv, decoration p and flag values at its legs and half-edges.
    pub fn vertex_contribution(&self, gv: u32, p: u32, flags: &[u32]) -> Result<LaurentInL, Error> {
        let n = self.n();
        let nv = flags.len() as i64;
        let dim = 3 * gv as i64 - 3 + nv - flags.iter().map(|a| *a as i64).sum::<i64>();
        let mut acc = LaurentInL::zero(n);
        if dim < 0 {
            return Ok(acc);
        }
        // Each T-insertion ψ^r with r ≥ 2 uses r - 1 ≥ 1 of the remaining dimension.
        for parts in partitions(dim as u32) {
            let k = parts.len() as i64;
            let mut args = flags.to_vec();
            args.extend(parts.iter().map(|x| x + 1));
            let integral = self.psi.get(gv, &args);
            if num_traits::Zero::is_zero(&integral) {
                continue;
            }
            let mut mult_fact = BigRational::from_integer(1.into());
            let mut term = LaurentInL::one(n);
            let mut counts: HashMap<u32, i64> = HashMap::new();
            for x in &parts {
                term = &term * &self.t_coefficient(p, x + 1)?;
                let c = counts.entry(*x).or_default();
                *c += 1;
                mult_fact *= qi(*c);
            }
            let power = qi(n as i64).pow((2 * gv as i64 - 2 + nv + k) as i32);
            acc = &acc + &term.scale_rational(&(integral * power / mult_fact));
        }
        Ok(acc)
    }

    /// Edge term joining half-edges with values b1, b2 at vertices decorated p1, p2.
    pub fn edge_contribution(&self, b1: u32, p1: u32, b2: u32, p2: u32) -> Result<RingElement, Error> {
        if let Some(e) = self.edges.lock().get(&(b1, p1, b2, p2)) {
            return Ok(e.clone());
        }
        let n = self.n();
        self.depth((b1 + b2 + 1) as i64)?;
        let mut acc = RingElement::zero(&self.ctx);
        for j in 0..=b2 {
            let k1 = (b1 + j + 1) as i64;
            let k2 = (b2 - j) as i64;
            for r in 0..n {
                let ir = inv(n, r);
                let w = self.zeta(-((k1 + ir as i64) * p1 as i64 + (k2 + r as i64) * p2 as i64));
                let prod = self.pm.p_tilde(k1, ir as usize, p1 as usize) * self.pm.p_tilde(k2, r as usize, p2 as usize);
                let prod = prod.scale(&w);
                acc = if j % 2 == 0 { &acc + &prod } else { &acc - &prod };
            }
        }
        let sign = if (b1 + b2).is_multiple_of(2) { 1 } else { -1 };
        let mut out = acc.scale_rational(&q(sign, n as i64));
        if let Some(c) = &self.edge_perturbation {
            out = &out + c;
        }
        self.edges.lock().insert((b1, p1, b2, p2), out.clone());
        Ok(out)
    }

    /// Leg term for flag value a, insertion φ_c and vertex decoration p.
    pub fn leg_contribution(&self, a: u32, c: u32, p: u32) -> Result<RingElement, Error> {
        if let Some(e) = self.legs.lock().get(&(a, c, p)) {
            return Ok(e.clone());
        }
        let n = self.n();
        self.depth(a as i64)?;
        let ic = inv(n, c);
        let mut k = RingElement::one(&self.ctx);
        for r in 1..=ic {
            k = &k * &RingElement::gen(&self.ctx, Gen::C(r))?;
        }
        let w = self.zeta(-((a + ic) as i64 * p as i64));
        let sign = if a.is_multiple_of(2) { 1 } else { -1 };
        let out = (k.shift_l(-(ic as i64)) * self.pm.p_tilde(a as i64, ic as usize, p as usize)).scale(&w).scale_rational(&q(sign, n as i64));
        self.legs.lock().insert((a, c, p), out.clone());
        Ok(out)
    }

    /// Cont_Γ for one decorated graph, divided by |Aut(Γ)|.
    pub fn graph_contribution(&self, dg: &DecoratedGraph, insertions: &[u32]) -> Result<RingElement, Error> {
        let gr = &dg.graph;
        let nv = gr.vertex_count();
        // Flags: legs 0..m, then half-edges (edge e, end 0/1).
        #[derive(Clone, Copy)]
        enum Flag {
            Leg(usize),
            Half(usize, usize),
        }
        let mut at: Vec<Vec<Flag>> = vec![Vec::new(); nv];
        for (l, v) in gr.legs.iter().enumerate() {
            at[*v].push(Flag::Leg(l));
        }
        for (e, (a, b)) in gr.edges.iter().enumerate() {
            at[*a].push(Flag::Half(e, 0));
            at[*b].push(Flag::Half(e, 1));
        }
        // Per vertex, every flag-value vector with a nonzero vertex term.
        let mut options: Vec<Vec<(Vec<u32>, RingElement)>> = Vec::with_capacity(nv);
        for v in 0..nv {
            let dim = 3 * gr.genera[v] as i64 - 3 + at[v].len() as i64;
            let mut opts = Vec::new();
            for vals in bounded_vectors(at[v].len(), dim.max(-1)) {
                let c = self.vertex_contribution(gr.genera[v], dg.p[v], &vals)?;
                if !c.is_zero() {
                    opts.push((vals, RingElement::from_laurent(&self.ctx, &c)));
                }
            }
            options.push(opts);
        }
        let mut total = RingElement::zero(&self.ctx);
        let mut choice = vec![0usize; nv];
        if options.iter().any(|o| o.is_empty()) {
            return Ok(total);
        }
        loop {
            let mut leg_vals = vec![0u32; gr.legs.len()];
            let mut half_vals = vec![[0u32; 2]; gr.edges.len()];
            let mut term = RingElement::one(&self.ctx);
            for v in 0..nv {
                let (vals, c) = &options[v][choice[v]];
                for (f, x) in at[v].iter().zip(vals) {
                    match f {
                        Flag::Leg(l) => leg_vals[*l] = *x,
                        Flag::Half(e, end) => half_vals[*e][*end] = *x,
                    }
                }
                term = &term * c;
            }
            for (e, (a, b)) in gr.edges.iter().enumerate() {
                term = &term * &self.edge_contribution(half_vals[e][0], dg.p[*a], half_vals[e][1], dg.p[*b])?;
            }
            for (l, v) in gr.legs.iter().enumerate() {
                term = &term * &self.leg_contribution(leg_vals[l], insertions[l], dg.p[*v])?;
            }
            total = &total + &term;
            // Odometer over the vertex options.
            let mut i = 0;
            loop {
                if i == nv {
                    return Ok(total.scale_rational(&q(1, dg.aut as i64)));
                }
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// F_{g,m}(φ_{c_1}, …, φ_{c_m}) by the graph sum.
    pub fn potential(&self, g: u32, insertions: &[u32]) -> Result<Potential, Error> {
        let n = self.n();
        if insertions.iter().any(|c| *c >= n) {
            return Err(Error::NotInRing(format!("insertion index out of range 0..{n}")));
        }
        let graphs = enumerate_decorated(g, insertions.len(), n);
        let parts: Vec<Result<(DecoratedGraph, RingElement), Error>> = graphs.par_iter().map(|dg| Ok((dg.clone(), self.graph_contribution(dg, insertions)?))).collect();
        let mut per_graph = Vec::with_capacity(parts.len());
        let mut value = RingElement::zero(&self.ctx);
        for p in parts {
            let (dg, c) = p?;
            value = &value + &c;
            per_graph.push((dg, c));
        }
        Ok(Potential { g, insertions: insertions.to_vec(), value, per_graph })
    }
}

/// Partitions of d into positive parts, parts nonincreasing.
fn partitions(d: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=rest.min(max)).rev() {
            cur.push(x);
            rec(rest - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// Vectors of `len` nonnegative integers with sum at most `bound`.
fn bounded_vectors(len: usize, bound: i64) -> Vec<Vec<u32>> {
    if bound < 0 {
        return vec![];
    }
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=bound {
        for mut rest in bounded_vectors(len - 1, bound - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
        assert_eq!(bounded_vectors(2, 1).len(), 3);
    }
}
