use cnzn::cyclotomic::Cyc;
use cnzn::genus0::{GenusZero, ModelConfig};
use cnzn::pmatrix::{symplectic_ok, ConstantsPolicy, PMatrix, PMatrixOptions};
use cnzn::ring::RingCtx;

fn build(n: u32, k_max: usize, policy: ConstantsPolicy) -> (GenusZero, PMatrix) {
    let prec = 10 * n as i64;
    let g0 = GenusZero::new(ModelConfig::new(n, prec).unwrap(), prec).unwrap();
    let ctx = RingCtx::new(&g0).unwrap();
    let pm = PMatrix::build(&g0, &ctx, PMatrixOptions::new(n, k_max, policy)).unwrap();
    (g0, pm)
}

#[test]
fn full_suite_for_small_n() {
    for n in [3u32, 4] {
        let (g0, pm) = build(n, 5, ConstantsPolicy::Symplectic(vec![]));
        for c in pm.verify_all(&g0) {
            assert!(c.passed, "n={n}: {c}");
        }
        assert!(symplectic_ok(&pm));
    }
}

#[test]
fn phi_degrees_grow_by_n_minus_one() {
    for n in [3u32, 4, 5] {
        let (_, pm) = build(n, 5, ConstantsPolicy::Symplectic(vec![]));
        for (k, phi) in pm.phi.iter().enumerate().skip(1) {
            assert_eq!(phi.max_degree(), Some(k as i64 * (n as i64 - 1)), "n={n} k={k}");
            assert!(phi.min_degree().unwrap() >= 0);
        }
    }
}

#[test]
fn zero_policy_coincides_with_symplectic() {
    for n in [3u32, 4, 5] {
        let (_, a) = build(n, 5, ConstantsPolicy::Zero);
        let (_, b) = build(n, 5, ConstantsPolicy::Symplectic(vec![]));
        assert_eq!(a.constants, b.constants, "n={n}");
        assert!(symplectic_ok(&a));
    }
}

#[test]
fn free_odd_constants_keep_the_symplectic_condition() {
    let n = 5;
    let (g0, pm) = build(n, 5, ConstantsPolicy::Symplectic(vec![Cyc::from_frac(n, 1, 7), Cyc::from_int(n, 2), Cyc::zeta_pow(n, 1)]));
    assert_eq!(pm.free_orders, vec![1, 3, 5]);
    assert!(symplectic_ok(&pm));
    for c in pm.verify_flatness(&g0).into_iter().chain(pm.verify_partial_lemmas()) {
        assert!(c.passed, "{c}");
    }
}

#[test]
fn a_wrong_even_constant_is_detected() {
    let n = 3;
    let (_, pm) = build(n, 3, ConstantsPolicy::Custom(vec![Cyc::zero(n), Cyc::one(n)]));
    assert!(!symplectic_ok(&pm));
    assert!(pm.symplectic[0].passed && pm.symplectic[1].passed);
    assert!(!pm.symplectic[2].passed);
}
