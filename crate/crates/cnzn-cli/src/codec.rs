//! Exact JSON encodings of field elements, series and ring elements.
//!
//! Rationals are strings ("-3/4"), so the encoding is lossless and every value
//! has one textual form.

use std::str::FromStr;
use std::sync::Arc;

use cnzn::cyclotomic::Cyc;
use cnzn::ring::{Gen, Mono, RingCtx, RingElement, Terms};
use cnzn::series::Series;
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CodecError {
    #[error("malformed value: {0}")]
    Malformed(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

fn bad(what: &str) -> CodecError {
    CodecError::Malformed(what.to_string())
}

pub fn cyc_to_json(c: &Cyc) -> Value {
    Value::Array(c.coords().iter().map(|r| Value::String(r.to_string())).collect())
}

pub fn cyc_from_json(n: u32, v: &Value) -> Result<Cyc, CodecError> {
    let items = v.as_array().ok_or_else(|| bad("coordinates must be an array"))?;
    let coords = items
        .iter()
        .map(|x| x.as_str().and_then(|s| BigRational::from_str(s).ok()).ok_or_else(|| bad("coordinate must be a rational string")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cyc::from_coords(n, coords))
}

pub fn parse_gen(s: &str) -> Result<Gen, CodecError> {
    let unknown = || CodecError::UnknownGenerator(s.to_string());
    if let Some(i) = s.strip_prefix('C') {
        return i.parse().map(Gen::C).map_err(|_| unknown());
    }
    if let Some(i) = s.strip_prefix("DA") {
        return i.parse().map(|i| Gen::DA { i, j: 1 }).map_err(|_| unknown());
    }
    if let Some(i) = s.strip_prefix('A') {
        return i.parse().map(|i| Gen::DA { i, j: 0 }).map_err(|_| unknown());
    }
    if let Some((j, i)) = s.strip_prefix('D').and_then(|r| r.split_once('A')) {
        if let (Ok(j), Ok(i)) = (j.parse(), i.parse()) {
            return Ok(Gen::DA { i, j });
        }
    }
    Err(unknown())
}

/// Terms in canonical monomial order: [{"l": e, "gens": [[name, exp], ...], "coeff": [...]}, ...].
pub fn ring_to_json(e: &RingElement) -> Value {
    let ctx = e.ctx();
    Value::Array(
        e.terms()
            .iter()
            .map(|(m, c)| {
                let gens: Vec<Value> = m.g.iter().map(|(id, x)| json!([ctx.gen(*id).to_string(), x])).collect();
                json!({ "l": m.l, "gens": gens, "coeff": cyc_to_json(c) })
            })
            .collect(),
    )
}

pub fn ring_from_json(ctx: &Arc<RingCtx>, v: &Value) -> Result<RingElement, CodecError> {
    let n = ctx.n();
    let mut terms = Terms::new();
    for t in v.as_array().ok_or_else(|| bad("ring element must be an array"))? {
        let l = t["l"].as_i64().ok_or_else(|| bad("missing L exponent"))?;
        let mut g = Vec::new();
        for pair in t["gens"].as_array().ok_or_else(|| bad("missing generator list"))? {
            let name = pair[0].as_str().ok_or_else(|| bad("generator name"))?;
            let exp = pair[1].as_i64().ok_or_else(|| bad("generator exponent"))? as i32;
            let id = ctx.id(parse_gen(name)?).ok_or_else(|| CodecError::UnknownGenerator(name.to_string()))?;
            g.push((id, exp));
        }
        g.sort();
        terms.insert(Mono { l, g }, cyc_from_json(n, &t["coeff"])?);
    }
    Ok(RingElement::from_terms(ctx, terms))
}

/// {"prec": N, "start": v, "coeffs": [...]} with coefficients from the valuation up to x^(N-1).
pub fn series_to_json(s: &Series) -> Value {
    let prec = s.prec();
    let start = s.valuation().min(prec);
    let coeffs: Vec<Value> = (start..prec).map(|k| cyc_to_json(&s.coeff(k))).collect();
    json!({ "prec": prec, "start": start, "coeffs": coeffs })
}

pub fn series_from_json(n: u32, v: &Value) -> Result<Series, CodecError> {
    let start = v["start"].as_i64().ok_or_else(|| bad("series start"))?;
    let prec = v["prec"].as_i64().ok_or_else(|| bad("series precision"))?;
    let coeffs = v["coeffs"].as_array().ok_or_else(|| bad("series coefficients"))?.iter().map(|c| cyc_from_json(n, c)).collect::<Result<Vec<_>, _>>()?;
    if start + coeffs.len() as i64 != prec {
        return Err(bad("series length does not match its precision"));
    }
    Ok(Series::from_coeffs(n, start, coeffs))
}
