use cnzn::genus0::{GenusZero, ModelConfig};
use cnzn::pmatrix::{ConstantsPolicy, PMatrix, PMatrixOptions};
use cnzn::ring::RingCtx;
use cnzn_cli::cache::{canonical, Cache};
use cnzn_cli::codec::{parse_gen, ring_from_json, ring_to_json, series_from_json, series_to_json};
use serde_json::json;

#[test]
fn table_entries_round_trip() {
    for n in [3u32, 4, 5] {
        let prec = 10 * n as i64;
        let g0 = GenusZero::new(ModelConfig::new(n, prec).unwrap(), prec).unwrap();
        let ctx = RingCtx::new(&g0).unwrap();
        let pm = PMatrix::build(&g0, &ctx, PMatrixOptions::new(n, 4, ConstantsPolicy::Symplectic(vec![]))).unwrap();
        for k in 0..=4 {
            for i in 0..n as usize {
                for j in 0..n as usize {
                    let e = pm.p_tilde(k, i, j);
                    let v = ring_to_json(e);
                    let back = ring_from_json(&ctx, &v).unwrap();
                    assert_eq!(&back, e);
                    assert_eq!(canonical(&ring_to_json(&back)), canonical(&v));
                }
            }
        }
        for s in g0.c.iter().chain(g0.a.iter()).chain([&g0.l]) {
            let v = series_to_json(s);
            assert_eq!(&series_from_json(n, &v).unwrap(), s);
        }
    }
}

#[test]
fn generator_names_parse_back() {
    let prec = 50;
    let g0 = GenusZero::new(ModelConfig::new(5, prec).unwrap(), prec).unwrap();
    let ctx = RingCtx::new(&g0).unwrap();
    for g in ctx.s_generators().into_iter().chain(ctx.c_generators()) {
        assert_eq!(parse_gen(&g.to_string()).unwrap(), g);
    }
    assert!(parse_gen("B2").is_err());
}

#[test]
fn cache_stores_under_content_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let key = json!({ "b": 1, "a": [1, 2] });
    let same_key = json!({ "a": [1, 2], "b": 1 });
    let value = json!({ "x": "1/3" });
    let path = cache.put("report", &key, &value).unwrap();
    assert_eq!(path, cache.path("report", &same_key));
    assert_eq!(cache.get("report", &same_key), Some(value));
    assert_eq!(cache.get("report", &json!({ "a": 0 })), None);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
