use std::sync::{Arc, OnceLock};

use cnzn::check::series_eq;
use cnzn::cyclotomic::Cyc;
use cnzn::genus0::{GenusZero, ModelConfig};
use cnzn::ring::{Mono, RingCtx, RingElement, Terms};
use proptest::prelude::*;

struct Model {
    g0: GenusZero,
    ctx: Arc<RingCtx>,
    ids: Vec<u16>,
}

fn model(n: u32) -> &'static Model {
    static CELLS: [OnceLock<Model>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[(n - 3) as usize].get_or_init(|| {
        let prec = 12 * n as i64;
        let g0 = GenusZero::new(ModelConfig::new(n, prec).unwrap(), prec).unwrap();
        let ctx = RingCtx::new(&g0).unwrap();
        let ids = ctx.s_generators().into_iter().chain(ctx.c_generators()).map(|g| ctx.id(g).unwrap()).collect();
        Model { g0, ctx, ids }
    })
}

type Raw = Vec<(i64, Vec<i32>, i64)>;

fn raw_element() -> impl Strategy<Value = Raw> {
    prop::collection::vec((-1i64..4, prop::collection::vec(-1i32..3, 0..3), -4i64..5), 1..4)
}

/// Builds an element from admitted generators only; exponents are assigned round-robin.
fn build(m: &Model, raw: &Raw) -> RingElement {
    let n = m.ctx.n();
    let mut terms = Terms::new();
    for (l, exps, c) in raw {
        let mut g: Vec<(u16, i32)> = Vec::new();
        for (k, e) in exps.iter().enumerate() {
            let id = m.ids[k % m.ids.len()];
            // Only C-generators may carry negative exponents.
            let e = if (k % m.ids.len()) < m.ctx.s_generators().len() { e.abs() } else { *e };
            if e != 0 && !g.iter().any(|(x, _)| *x == id) {
                g.push((id, e));
            }
        }
        g.sort();
        let mono = Mono { l: *l, g };
        let v = terms.entry(mono).or_insert_with(|| Cyc::zero(n));
        *v += Cyc::from_int(n, *c);
    }
    terms.retain(|_, c| !c.is_zero());
    RingElement::from_terms(&m.ctx, terms)
}

fn models() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 4, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eval_is_a_ring_homomorphism(n in models(), a in raw_element(), b in raw_element()) {
        let m = model(n);
        let (x, y) = (build(m, &a), build(m, &b));
        let (ex, ey) = (x.eval(&m.g0), y.eval(&m.g0));
        let sum = series_eq("sum", &(&x + &y).eval(&m.g0), &(&ex + &ey));
        let prod = series_eq("product", &(&x * &y).eval(&m.g0), &(&ex * &ey));
        prop_assert!(sum.passed, "{}", sum);
        prop_assert!(prod.passed, "{}", prod);
    }

    #[test]
    fn derivation_is_leibniz(n in models(), a in raw_element(), b in raw_element()) {
        let m = model(n);
        let (x, y) = (build(m, &a), build(m, &b));
        let lhs = (&x * &y).derive();
        let rhs = &(&x.derive() * &y) + &(&x * &y.derive());
        prop_assert_eq!(lhs.canonical_string(), rhs.canonical_string());
    }

    #[test]
    fn derive_commutes_with_eval(n in models(), a in raw_element()) {
        let m = model(n);
        let x = build(m, &a);
        let c = series_eq("D eval", &x.derive().eval(&m.g0), &x.eval(&m.g0).d());
        prop_assert!(c.passed, "{}", c);
    }

    #[test]
    fn normal_forms_are_closed(n in models(), a in raw_element(), b in raw_element()) {
        let m = model(n);
        let (x, y) = (build(m, &a), build(m, &b));
        prop_assert!((&x * &y).is_normal());
        prop_assert!((&x - &y).is_normal());
        prop_assert!(x.derive().derive().is_normal());
        prop_assert!(x.partial_a_top().is_normal());
    }

    #[test]
    fn ring_axioms_in_canonical_form(n in models(), a in raw_element(), b in raw_element(), c in raw_element()) {
        let m = model(n);
        let (x, y, z) = (build(m, &a), build(m, &b), build(m, &c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
    }
}

#[test]
fn rewrite_rules_are_certified() {
    for n in 3..=5 {
        let m = model(n);
        assert!(!m.ctx.certificates.is_empty());
        for c in &m.ctx.certificates {
            assert!(c.passed, "{c}");
        }
        for (g, rhs) in m.ctx.rules() {
            assert!(rhs.is_normal(), "rule for {g} leaves the normal form");
        }
    }
}
