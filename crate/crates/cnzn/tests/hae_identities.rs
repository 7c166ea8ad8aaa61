use std::collections::BTreeMap;
use std::sync::Arc;

use cnzn::cyclotomic::Cyc;
use cnzn::genus0::{GenusZero, ModelConfig};
use cnzn::graphs::StableGraph;
use cnzn::hae::verify_hae;
use cnzn::pmatrix::{ConstantsPolicy, PMatrix, PMatrixOptions};
use cnzn::potentials::{GraphSum, VertexIndexing};
use cnzn::rational::q;
use cnzn::ring::{RingCtx, RingElement};

struct Setup {
    g0: GenusZero,
    ctx: Arc<RingCtx>,
    pm: PMatrix,
}

fn setup(n: u32, k_max: usize, policy: ConstantsPolicy) -> Setup {
    let prec = 10 * n as i64;
    let g0 = GenusZero::new(ModelConfig::new(n, prec).unwrap(), prec).unwrap();
    let ctx = RingCtx::new(&g0).unwrap();
    let pm = PMatrix::build(&g0, &ctx, PMatrixOptions::new(n, k_max, policy)).unwrap();
    Setup { g0, ctx, pm }
}

fn free_odd(n: u32) -> ConstantsPolicy {
    ConstantsPolicy::Symplectic(vec![Cyc::from_frac(n, 1, 7), Cyc::from_int(n, 2)])
}

#[test]
fn genus_two_for_small_n_under_both_policies_and_indexings() {
    for n in [3u32, 4, 5] {
        for policy in [ConstantsPolicy::Symplectic(vec![]), free_odd(n)] {
            let tag = policy.tag();
            let s = setup(n, 4, policy);
            for ix in [VertexIndexing::Shifted, VertexIndexing::Literal] {
                let sum = GraphSum::new(&s.pm, ix);
                let r = verify_hae(&s.g0, &sum, 2).unwrap();
                for c in &r.checks {
                    assert!(c.passed, "n={n} {tag} {}: {c}", ix.tag());
                }
                assert!(r.eval_residual.is_zero_to(s.g0.prec - 4 * n as i64));
            }
        }
    }
}

#[test]
fn literal_indexing_gives_nonvanishing_sides() {
    // With the shifted vertex terms F_2 vanishes for n = 4, 5 by a charge selection rule.
    for n in [3u32, 4, 5] {
        let s = setup(n, 4, ConstantsPolicy::Symplectic(vec![]));
        let r = verify_hae(&s.g0, &GraphSum::new(&s.pm, VertexIndexing::Literal), 2).unwrap();
        assert!(r.verified());
        assert!(!r.lhs.is_zero() && !r.f_g.value.is_zero(), "n={n}");
        let shifted = verify_hae(&s.g0, &GraphSum::new(&s.pm, VertexIndexing::Shifted), 2).unwrap();
        assert_eq!(shifted.f_g.value.is_zero(), n != 3, "n={n}");
    }
}

#[test]
fn generator_dependent_edge_change_breaks_the_equation() {
    for n in [3u32, 4, 5] {
        let s = setup(n, 4, ConstantsPolicy::Symplectic(vec![]));
        let a_top = RingElement::a(&s.ctx, s.ctx.top as usize);
        let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted).with_edge_perturbation(a_top);
        let r = verify_hae(&s.g0, &sum, 2).unwrap();
        assert!(!r.verified(), "n={n}");
        assert!(!r.difference.is_zero());
        // Both checkers must notice.
        assert!(!r.checks[0].passed && !r.checks[1].passed);
    }
}

#[test]
fn constant_edge_shift_enters_both_sides_alike() {
    let s = setup(3, 4, ConstantsPolicy::Symplectic(vec![]));
    let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted).with_edge_perturbation(RingElement::constant(&s.ctx, Cyc::one(3)));
    let r = verify_hae(&s.g0, &sum, 2).unwrap();
    assert!(r.verified());
    let plain = verify_hae(&s.g0, &GraphSum::new(&s.pm, VertexIndexing::Shifted), 2).unwrap();
    assert_ne!(r.f_g.value, plain.f_g.value);
}

#[test]
fn doubling_the_right_side_breaks_the_equation() {
    for (n, ix) in [(3u32, VertexIndexing::Shifted), (4, VertexIndexing::Literal), (5, VertexIndexing::Literal)] {
        let s = setup(n, 4, ConstantsPolicy::Symplectic(vec![]));
        let r = verify_hae(&s.g0, &GraphSum::new(&s.pm, ix), 2).unwrap();
        let twice = &r.rhs + &r.rhs;
        assert!(!(&r.lhs - &twice).is_zero(), "n={n}");
    }
}

#[test]
fn every_genus_two_graph_contributes() {
    let s = setup(3, 4, ConstantsPolicy::Symplectic(vec![]));
    let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted);
    let f = sum.potential(2, &[]).unwrap();
    let mut by_graph: BTreeMap<StableGraph, RingElement> = BTreeMap::new();
    for (dg, c) in &f.per_graph {
        let e = by_graph.entry(dg.graph.clone()).or_insert_with(|| RingElement::zero(&s.ctx));
        *e = &*e + c;
    }
    assert_eq!(by_graph.len(), 7);
    for (gr, part) in &by_graph {
        assert!(!part.is_zero(), "{gr:?}");
        assert_ne!(&f.value - part, f.value);
    }
}

#[test]
fn edge_term_is_symmetric() {
    for n in [3u32, 4, 5] {
        let s = setup(n, 4, free_odd(n));
        let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted);
        for b1 in 0..=2u32 {
            for b2 in 0..=(2 - b1) {
                for p1 in 0..n {
                    for p2 in 0..n {
                        let a = sum.edge_contribution(b1, p1, b2, p2).unwrap();
                        let b = sum.edge_contribution(b2, p2, b1, p1).unwrap();
                        assert_eq!(a, b, "n={n} ({b1},{p1}) ({b2},{p2})");
                    }
                }
            }
        }
    }
}

#[test]
fn odd_edge_derivative() {
    for n in [3u32, 5] {
        let s = setup(n, 4, ConstantsPolicy::Symplectic(vec![]));
        let half = (n - 1) / 2;
        let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted);
        for b1 in 0..=2u32 {
            for b2 in 0..=(2 - b1) {
                for p1 in 0..n {
                    for p2 in 0..n {
                        let lhs = sum.edge_contribution(b1, p1, b2, p2).unwrap().partial_a_top();
                        let w = Cyc::zeta_pow(n, -(((b1 + half + 1) * p1 + (b2 + half + 1) * p2) as i64));
                        let sign = if (b1 + b2) % 2 == 0 { 1 } else { -1 };
                        let rhs = (s.pm.p_tilde(b1 as i64, half as usize + 1, p1 as usize) * s.pm.p_tilde(b2 as i64, half as usize + 1, p2 as usize)).scale(&w).scale_rational(&q(sign, n as i64));
                        assert_eq!(lhs, rhs, "n={n} ({b1},{p1}) ({b2},{p2})");
                    }
                }
            }
        }
    }
}

#[test]
fn potentials_with_legs_add_c_generators() {
    let s = setup(3, 4, ConstantsPolicy::Symplectic(vec![]));
    let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted);
    let f = sum.potential(2, &[1]).unwrap();
    let gens = f.generators();
    assert!(gens.iter().any(|g| g.starts_with('C')), "{gens:?}");
    assert!(gens.iter().all(|g| g == "A1" || g.starts_with('C')), "{gens:?}");
}

#[test]
fn enumeration_order_does_not_matter() {
    let s = setup(3, 4, ConstantsPolicy::Symplectic(vec![]));
    let sum = GraphSum::new(&s.pm, VertexIndexing::Shifted);
    let f = sum.potential(2, &[]).unwrap();
    let mut reversed = RingElement::zero(&s.ctx);
    for (_, c) in f.per_graph.iter().rev() {
        reversed = &reversed + c;
    }
    assert_eq!(reversed.canonical_string(), f.value.canonical_string());
}
