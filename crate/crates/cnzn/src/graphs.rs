//! Stable graphs of genus g with m labelled legs, optionally decorated by a map
//! from vertices to {0, ..., n-1}.
//!
//! Graphs here have at most a handful of vertices, so canonical forms are found
//! by trying every vertex permutation.

use std::collections::{BTreeMap, BTreeSet};

/// A stable graph. Edges are unordered vertex pairs; loops and multi-edges allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    /// Sorted list of (u, v) with u ≤ v.
    pub edges: Vec<(usize, usize)>,
    /// legs[l] is the vertex carrying leg l + 1.
    pub legs: Vec<usize>,
}

/// A decorated stable graph with its automorphism count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub graph: StableGraph,
    pub p: Vec<u32>,
    pub aut: u64,
}

/// Result of removing one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deletion {
    /// Genus drops by one and two legs m+1, m+2 appear at the former ends.
    Connected(StableGraph),
    /// Two components, each with one new last leg; the second list maps old leg labels.
    Split { first: StableGraph, second: StableGraph, first_legs: Vec<usize>, second_legs: Vec<usize> },
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

type Key = (Vec<u32>, Vec<u32>, Vec<(usize, usize)>, Vec<usize>);

impl StableGraph {
    pub fn new(genera: Vec<u32>, mut edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        StableGraph { genera, edges, legs }
    }

    pub fn vertex_count(&self) -> usize {
        self.genera.len()
    }

    pub fn genus(&self) -> u32 {
        let h1 = self.edges.len() as i64 - self.vertex_count() as i64 + 1;
        (h1 + self.genera.iter().map(|g| *g as i64).sum::<i64>()) as u32
    }

    /// Number of half-edges and legs at v.
    pub fn valence(&self, v: usize) -> usize {
        let e: usize = self.edges.iter().map(|(a, b)| (*a == v) as usize + (*b == v) as usize).sum();
        e + self.legs.iter().filter(|l| **l == v).count()
    }

    pub fn is_stable(&self) -> bool {
        (0..self.vertex_count()).all(|v| 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (a, b) in &self.edges {
                for (x, y) in [(*a, *b), (*b, *a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex v becomes perm[v].
    pub fn relabel(&self, perm: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.genera.len()];
        for (v, g) in self.genera.iter().enumerate() {
            genera[perm[v]] = *g;
        }
        StableGraph::new(genera, self.edges.iter().map(|(a, b)| (perm[*a], perm[*b])).collect(), self.legs.iter().map(|l| perm[*l]).collect())
    }

    fn key_under(&self, perm: &[usize], p: Option<&[u32]>) -> Key {
        let r = self.relabel(perm);
        let mut dec = vec![0; self.vertex_count()];
        if let Some(p) = p {
            for (v, x) in p.iter().enumerate() {
                dec[perm[v]] = *x;
            }
        }
        (r.genera, dec, r.edges, r.legs)
    }

    /// The smallest encoding over all vertex relabellings, with the minimizing permutation.
    pub fn canonical(&self, p: Option<&[u32]>) -> (StableGraph, Vec<u32>) {
        let mut best: Option<(Key, Vec<usize>)> = None;
        for perm in permutations(self.vertex_count()) {
            let k = self.key_under(&perm, p);
            if best.as_ref().is_none_or(|(b, _)| k < *b) {
                best = Some((k, perm));
            }
        }
        let ((genera, dec, edges, legs), _) = best.expect("at least one permutation");
        (StableGraph { genera, edges, legs }, dec)
    }

    /// Vertex permutations preserving genus, decoration, legs and edge multiplicities.
    pub fn vertex_automorphisms(&self, p: Option<&[u32]>) -> u64 {
        let id: Vec<usize> = (0..self.vertex_count()).collect();
        let base = self.key_under(&id, p);
        permutations(self.vertex_count()).iter().filter(|perm| self.key_under(perm, p) == base).count() as u64
    }

    /// |Aut| = (vertex automorphisms) · ∏ (loops at v)! 2^(loops at v) · ∏ (multiplicity)!.
    pub fn aut_count(&self, p: Option<&[u32]>) -> u64 {
        let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &self.edges {
            *mult.entry(*e).or_default() += 1;
        }
        let mut f = 1u64;
        for ((a, b), k) in mult {
            f *= factorial(k);
            if a == b {
                f *= 1 << k;
            }
        }
        self.vertex_automorphisms(p) * f
    }

    /// Automorphisms counted as permutations of vertices and half-edges, by brute force.
    pub fn aut_count_brute(&self, p: Option<&[u32]>) -> u64 {
        let ne = self.edges.len();
        let nv = self.vertex_count();
        let dec = |v: usize| p.map_or(0, |p| p[v]);
        let mut count = 0u64;
        for sigma in permutations(nv) {
            let ok_v = (0..nv).all(|v| self.genera[sigma[v]] == self.genera[v] && dec(sigma[v]) == dec(v));
            let ok_l = self.legs.iter().all(|l| sigma[*l] == *l);
            if !ok_v || !ok_l {
                continue;
            }
            // Half-edge 2e sits at edges[e].0, 2e+1 at edges[e].1.
            for tau in permutations(ne) {
                for flips in 0u32..(1 << ne) {
                    let good = (0..ne).all(|e| {
                        let (a, b) = self.edges[e];
                        let (c, d) = self.edges[tau[e]];
                        let (c, d) = if flips >> e & 1 == 1 { (d, c) } else { (c, d) };
                        sigma[a] == c && sigma[b] == d
                    });
                    if good {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Removes edge `e`; new legs are appended after the existing ones.
    pub fn delete_edge(&self, e: usize) -> Deletion {
        let (a, b) = self.edges[e];
        let mut edges = self.edges.clone();
        edges.remove(e);
        let mut legs = self.legs.clone();
        legs.push(a);
        legs.push(b);
        let g = StableGraph::new(self.genera.clone(), edges, legs);
        if g.is_connected() {
            return Deletion::Connected(g);
        }
        // Component of a.
        let n = g.vertex_count();
        let mut side = vec![false; n];
        side[a] = true;
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            for (x, y) in &g.edges {
                for (s, t) in [(*x, *y), (*y, *x)] {
                    if s == v && !side[t] {
                        side[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        let part = |want: bool, new_leg_at: usize| {
            let verts: Vec<usize> = (0..n).filter(|v| side[*v] == want).collect();
            let idx = |v: usize| verts.iter().position(|w| *w == v).unwrap();
            let genera = verts.iter().map(|v| g.genera[*v]).collect();
            let edges = g.edges.iter().filter(|(x, _)| side[*x] == want).map(|(x, y)| (idx(*x), idx(*y))).collect();
            let old: Vec<usize> = (0..self.legs.len()).filter(|l| side[self.legs[*l]] == want).collect();
            let mut legs: Vec<usize> = old.iter().map(|l| idx(self.legs[*l])).collect();
            legs.push(idx(new_leg_at));
            (StableGraph::new(genera, edges, legs), old)
        };
        let (first, first_legs) = part(true, a);
        let (second, second_legs) = part(false, b);
        Deletion::Split { first, second, first_legs, second_legs }
    }

    /// True when some vertex bijection maps one graph onto the other.
    pub fn isomorphic(&self, other: &StableGraph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edges.len() != other.edges.len() || self.legs.len() != other.legs.len() {
            return false;
        }
        let n = self.vertex_count();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.iso_extend(other, 0, &mut perm, &mut used)
    }

    fn iso_extend(&self, other: &StableGraph, v: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = self.vertex_count();
        if v == n {
            return self.relabel(perm) == *other;
        }
        for w in 0..n {
            if used[w] || self.genera[v] != other.genera[w] || self.valence(v) != other.valence(w) {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            if self.iso_extend(other, v + 1, perm, used) {
                return true;
            }
            used[w] = false;
        }
        perm[v] = usize::MAX;
        false
    }
}

fn stable_range(g: u32, m: usize) -> bool {
    2 * g as i64 - 2 + m as i64 > 0
}

/// All compositions of `total` into `parts` nonnegative parts.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Undecorated stable graphs, one per isomorphism class, by direct search over
/// genus vectors, edge multiplicity matrices and leg placements.
pub fn enumerate(g: u32, m: usize) -> Vec<StableGraph> {
    assert!(stable_range(g, m), "unstable range (g, m) = ({g}, {m})");
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let max_v = (2 * g as usize + m).saturating_sub(2).max(1);
    for nv in 1..=max_v {
        let slots: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
        for gen_total in 0..=g as usize {
            let ne = g as i64 - gen_total as i64 + nv as i64 - 1;
            if ne < 0 {
                continue;
            }
            for genera in compositions(gen_total, nv) {
                for mults in compositions(ne as usize, slots.len()) {
                    let edges: Vec<(usize, usize)> = slots.iter().zip(&mults).flat_map(|(s, k)| std::iter::repeat_n(*s, *k)).collect();
                    for code in 0..nv.pow(m as u32) {
                        let legs: Vec<usize> = (0..m).map(|l| code / nv.pow(l as u32) % nv).collect();
                        let gr = StableGraph::new(genera.iter().map(|x| *x as u32).collect(), edges.clone(), legs);
                        if !gr.is_connected() || !gr.is_stable() {
                            continue;
                        }
                        let (c, _) = gr.canonical(None);
                        if seen.insert(c.clone()) {
                            out.push(c);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Undecorated stable graphs generated from the one-vertex graph by repeatedly
/// adding a loop or splitting a vertex; duplicates removed by pairwise isomorphism.
pub fn enumerate_by_degeneration(g: u32, m: usize) -> Vec<StableGraph> {
    assert!(stable_range(g, m), "unstable range (g, m) = ({g}, {m})");
    let start = StableGraph::new(vec![g], vec![], vec![0; m]);
    let mut found = vec![start.clone()];
    let mut frontier = vec![start];
    while let Some(gr) = frontier.pop() {
        for next in degenerations(&gr) {
            if !found.iter().any(|f| f.isomorphic(&next)) {
                found.push(next.clone());
                frontier.push(next);
            }
        }
    }
    found
}

fn degenerations(gr: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let nv = gr.vertex_count();
    for v in 0..nv {
        if gr.genera[v] >= 1 {
            let mut genera = gr.genera.clone();
            genera[v] -= 1;
            let mut edges = gr.edges.clone();
            edges.push((v, v));
            out.push(StableGraph::new(genera, edges, gr.legs.clone()));
        }
        // Split v into v and a new vertex w = nv; every half-edge and leg at v picks a side.
        let mut flags: Vec<(usize, usize)> = Vec::new(); // (edge index, end) or (usize::MAX, leg)
        for (e, (a, b)) in gr.edges.iter().enumerate() {
            if *a == v {
                flags.push((e, 0));
            }
            if *b == v {
                flags.push((e, 1));
            }
        }
        for (l, x) in gr.legs.iter().enumerate() {
            if *x == v {
                flags.push((usize::MAX, l));
            }
        }
        for g1 in 0..=gr.genera[v] {
            for mask in 0u64..(1 << flags.len()) {
                let mut genera = gr.genera.clone();
                genera[v] = g1;
                genera.push(gr.genera[v] - g1);
                let mut edges = gr.edges.clone();
                let mut legs = gr.legs.clone();
                for (bit, (e, end)) in flags.iter().enumerate() {
                    if mask >> bit & 1 == 0 {
                        continue;
                    }
                    if *e == usize::MAX {
                        legs[*end] = nv;
                    } else if *end == 0 {
                        edges[*e].0 = nv;
                    } else {
                        edges[*e].1 = nv;
                    }
                }
                edges.push((v, nv));
                let cand = StableGraph::new(genera, edges, legs);
                if cand.is_stable() {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// Decorated stable graphs with decorated automorphism counts.
pub fn enumerate_decorated(g: u32, m: usize, n: u32) -> Vec<DecoratedGraph> {
    let mut out = Vec::new();
    for gr in enumerate(g, m) {
        let nv = gr.vertex_count();
        let id: Vec<usize> = (0..nv).collect();
        let base = gr.key_under(&id, None);
        let auts: Vec<Vec<usize>> = permutations(nv).into_iter().filter(|s| gr.key_under(s, None) == base).collect();
        let mut seen = BTreeSet::new();
        for code in 0..(n as usize).pow(nv as u32) {
            let p: Vec<u32> = (0..nv).map(|v| (code / (n as usize).pow(v as u32) % n as usize) as u32).collect();
            // Smallest decoration in the orbit under the graph's vertex automorphisms.
            let cp = auts
                .iter()
                .map(|s| {
                    let mut q = vec![0; nv];
                    for v in 0..nv {
                        q[s[v]] = p[v];
                    }
                    q
                })
                .min()
                .expect("identity is an automorphism");
            if seen.insert(cp.clone()) {
                let aut = gr.aut_count(Some(&cp));
                out.push(DecoratedGraph { graph: gr.clone(), p: cp, aut });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate(0, 3).len(), 1);
        assert_eq!(enumerate(1, 1).len(), 2);
        assert_eq!(enumerate(2, 0).len(), 7);
        assert_eq!(enumerate_by_degeneration(2, 0).len(), 7);
    }

    #[test]
    fn loop_graph_aut() {
        let gr = StableGraph::new(vec![1], vec![(0, 0)], vec![]);
        assert_eq!(gr.aut_count(Some(&[0])), 2);
        assert_eq!(gr.aut_count_brute(None), 2);
    }

    #[test]
    fn deletions() {
        let lp = StableGraph::new(vec![1], vec![(0, 0)], vec![]);
        match lp.delete_edge(0) {
            Deletion::Connected(h) => assert_eq!(h.genus(), 1),
            other => panic!("{other:?}"),
        }
        let bridge = StableGraph::new(vec![1, 1], vec![(0, 1)], vec![]);
        match bridge.delete_edge(0) {
            Deletion::Split { first, second, .. } => {
                assert_eq!((first.genus(), second.genus()), (1, 1));
                assert_eq!(bridge.aut_count(None), first.aut_count(None) * second.aut_count(None) * 2);
            }
            other => panic!("{other:?}"),
        }
    }
}
