//! JSON schemas for elements, models, spectra, and verdicts.
//!
//! PL breakpoints serialize as `[x_num, x_den, y_num, y_den]` with plain
//! integers when they fit in 53 bits and exact decimal strings otherwise.
//! Rational values elsewhere render as `"p/q"` strings; floats as numbers.

use std::collections::BTreeMap;


use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use core::str::FromStr;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use rigiditylab_core::conjugacy::{ConjugacyResult, ConjugacyStatus, ReconcileReport, SamplePair};
use rigiditylab_core::element::{Coord, LineElement, Orientation, RatInterval};
use rigiditylab_core::fixed_points::{FixedPointKind, FixedPointSet};
use rigiditylab_core::moebius::MoebiusLift;
use rigiditylab_core::plz::PlMap;
use rigiditylab_core::rat::{self, Rat};
use rigiditylab_core::reps::{Representation, Spectrum};
use rigiditylab_core::words::parse_word;

const SAFE_INT: i128 = (1i128 << 53) - 1;

fn bigint_to_json(n: &BigInt) -> Value {
    match i128::try_from(n) {
        Ok(v) if v.abs() <= SAFE_INT => json!(v as i64),
        _ => json!(n.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| anyhow!("breakpoint component is not an integer: {n}"))?;
            Ok(BigInt::from(i))
        }
        Value::String(s) => BigInt::from_str(s).with_context(|| format!("bad integer `{s}`")),
        other => bail!("expected integer or string, got {other}"),
    }
}

pub fn pl_to_json(m: &PlMap) -> Value {
    let orientation = match m.orientation() {
        Orientation::Preserving => "preserving",
        Orientation::Reversing => "reversing",
    };
    let breakpoints: Vec<Value> = m
        .breakpoints()
        .iter()
        .map(|(x, y)| {
            json!([
                bigint_to_json(x.numer()),
                bigint_to_json(x.denom()),
                bigint_to_json(y.numer()),
                bigint_to_json(y.denom())
            ])
        })
        .collect();
    json!({ "orientation": orientation, "breakpoints": breakpoints })
}

pub fn pl_from_json(v: &Value) -> Result<PlMap> {
    let orientation = match v
        .get("orientation")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("missing `orientation`"))?
    {
        "preserving" => Orientation::Preserving,
        "reversing" => Orientation::Reversing,
        other => bail!("unknown orientation `{other}`"),
    };
    let bps = v
        .get("breakpoints")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing `breakpoints`"))?;
    let mut points = Vec::with_capacity(bps.len());
    for bp in bps {
        let quad = bp
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| anyhow!("breakpoint must be [xn, xd, yn, yd]"))?;
        let x = Rat::new(bigint_from_json(&quad[0])?, bigint_from_json(&quad[1])?);
        let y = Rat::new(bigint_from_json(&quad[2])?, bigint_from_json(&quad[3])?);
        points.push((x, y));
    }
    PlMap::new(points, orientation).map_err(|e| anyhow!("invalid PL map: {e}"))
}

pub fn moebius_to_json(m: &MoebiusLift) -> Value {
    let mm = m.matrix();
    json!({ "matrix": [[mm[0][0], mm[0][1]], [mm[1][0], mm[1][1]]], "deck": m.deck() })
}

pub fn moebius_from_json(v: &Value) -> Result<MoebiusLift> {
    let m = v
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing `matrix`"))?;
    let row = |i: usize| -> Result<(f64, f64)> {
        let r = m[i]
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| anyhow!("matrix rows must have two entries"))?;
        Ok((
            r[0].as_f64().ok_or_else(|| anyhow!("bad matrix entry"))?,
            r[1].as_f64().ok_or_else(|| anyhow!("bad matrix entry"))?,
        ))
    };
    if m.len() != 2 {
        bail!("matrix must be 2x2");
    }
    let (a, b) = row(0)?;
    let (c, d) = row(1)?;
    let deck = v.get("deck").and_then(Value::as_i64).unwrap_or(0);
    MoebiusLift::new([[a, b], [c, d]], deck).map_err(|e| anyhow!("invalid lift: {e}"))
}

pub fn element_to_json(e: &LineElement) -> Value {
    match e {
        LineElement::Pl(m) => pl_to_json(m),
        LineElement::Moebius(m) => moebius_to_json(m),
        LineElement::Formal(w) => json!({ "word": w.to_string() }),
    }
}

pub fn element_from_json(v: &Value) -> Result<LineElement> {
    if v.get("breakpoints").is_some() {
        return Ok(LineElement::Pl(pl_from_json(v)?));
    }
    if v.get("matrix").is_some() {
        return Ok(LineElement::Moebius(moebius_from_json(v)?));
    }
    if let Some(w) = v.get("word").and_then(Value::as_str) {
        return Ok(LineElement::Formal(
            parse_word(w).map_err(|e| anyhow!("{e}"))?,
        ));
    }
    bail!("element must carry `breakpoints`, `matrix`, or `word`")
}

/// Model file: generators, optional relators, tau, optional center, backend.
#[derive(Serialize, Deserialize)]
pub struct ModelFile {
    pub backend: String,
    pub generators: BTreeMap<String, Value>,
    #[serde(default)]
    pub relators: Vec<String>,
    pub tau: Value,
    #[serde(default)]
    pub center: Option<String>,
    #[serde(default)]
    pub relator_tolerance: Option<f64>,
}

pub fn model_to_json(rep: &Representation) -> Value {
    let backend = match rep.tau() {
        LineElement::Pl(_) => "pl",
        LineElement::Moebius(_) => "moebius",
        LineElement::Formal(_) => "formal",
    };
    let generators: BTreeMap<String, Value> = rep
        .generators()
        .iter()
        .map(|(n, e)| (n.clone(), element_to_json(e)))
        .collect();
    let relators: Vec<String> = rep.relators().iter().map(|w| w.to_string()).collect();
    json!({
        "backend": backend,
        "generators": generators,
        "relators": relators,
        "tau": element_to_json(rep.tau()),
        "center": rep.center_name(),
        "relator_tolerance": rep.relator_tolerance(),
    })
}

pub fn model_from_json(v: &Value) -> Result<Representation> {
    let file: ModelFile = serde_json::from_value(v.clone()).context("malformed model file")?;
    let mut generators = Vec::new();
    for (name, ev) in &file.generators {
        generators.push((
            name.clone(),
            element_from_json(ev).with_context(|| format!("generator `{name}`"))?,
        ));
    }
    let relators = file
        .relators
        .iter()
        .map(|s| parse_word(s).map_err(|e| anyhow!("{e}")))
        .collect::<Result<Vec<_>>>()?;
    let tau = element_from_json(&file.tau).context("tau")?;
    Representation::new(
        generators,
        relators,
        tau,
        file.center,
        file.relator_tolerance.unwrap_or(1e-9),
    )
    .map_err(|e| anyhow!("invalid model: {e}"))
}

pub fn coord_to_json(c: &Coord) -> Value {
    match c {
        Coord::Rational(r) => json!(rat::display(r)),
        Coord::Real(x) => json!(x),
    }
}

pub fn interval_to_json(iv: &RatInterval) -> Value {
    json!({ "lo": coord_to_json(&iv.lo), "hi": coord_to_json(&iv.hi) })
}

pub fn fixed_points_to_json(fps: &FixedPointSet) -> Value {
    let pts: Vec<Value> = fps
        .points
        .iter()
        .map(|p| {
            json!({
                "location": coord_to_json(&p.location),
                "kind": match p.kind {
                    FixedPointKind::Attracting => "attracting",
                    FixedPointKind::Repelling => "repelling",
                    FixedPointKind::Degenerate => "degenerate",
                },
                "radius": p.radius,
            })
        })
        .collect();
    json!(pts)
}

/// Spectrum as a JSON array sorted by conjugacy key.
pub fn spectrum_to_json(s: &Spectrum) -> Value {
    let entries: Vec<Value> = s
        .entries
        .values()
        .map(|e| {
            json!({
                "key": e.word.to_string(),
                "has_fixed_points": e.has_fixed_points,
                "certificate": interval_to_json(&e.certificate),
            })
        })
        .collect();
    json!({
        "length_bound": s.length_bound,
        "oriented": s.oriented,
        "classes": entries,
    })
}

fn sample_to_json(s: &SamplePair) -> Value {
    json!([s.word.to_string(), rat::display(&s.source), rat::display(&s.target)])
}

pub fn conjugacy_to_json(r: &ConjugacyResult) -> Value {
    let status = match &r.status {
        ConjugacyStatus::Conjugate => json!({ "kind": "conjugate" }),
        ConjugacyStatus::Mismatch { witness } => {
            json!({ "kind": "mismatch", "witness_word": witness.to_string() })
        }
        ConjugacyStatus::OrderViolation { first, second } => json!({
            "kind": "order_violation",
            "first": first.to_string(),
            "second": second.to_string(),
        }),
    };
    json!({
        "status": status,
        "theta": r.theta.as_ref().map(pl_to_json),
        "samples": r.sample_pairs.iter().map(sample_to_json).collect::<Vec<_>>(),
        "defect": if r.defect.is_nan() { Value::Null } else { json!(r.defect) },
        "defect_bound": if r.defect_bound.is_nan() { Value::Null } else { json!(r.defect_bound) },
        "orientation_sign": r.orientation_sign,
    })
}

pub fn reconcile_to_json(r: &ReconcileReport) -> Value {
    use rigiditylab_core::conjugacy::ReconcileStatus;
    let status = match &r.status {
        ReconcileStatus::Conjugate => json!({ "kind": "conjugate" }),
        ReconcileStatus::Mismatch { witness } => {
            json!({ "kind": "mismatch", "witness_word": witness.to_string() })
        }
        ReconcileStatus::NonzeroResidual { generator } => {
            json!({ "kind": "nonzero_residual", "generator": generator })
        }
        ReconcileStatus::OrientationTypeMismatch { generator } => {
            json!({ "kind": "orientation_type_mismatch", "generator": generator })
        }
    };
    let ledger = json!({
        "preserving": r.ledger.preserving.iter()
            .map(|(n, d)| json!([n, rat::display(d)])).collect::<Vec<_>>(),
        "base_reversing": r.ledger.base_reversing.as_ref()
            .map(|(n, d)| json!([n, rat::display(d)])),
        "reversing_residuals": r.ledger.reversing_residuals.iter()
            .map(|(n, d)| json!([n, rat::display(d)])).collect::<Vec<_>>(),
    });
    json!({
        "status": status,
        "ledger": ledger,
        "theta": r.theta.as_ref().map(pl_to_json),
        "defect": if r.defect.is_nan() { Value::Null } else { json!(r.defect) },
        "alignment": r.alignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigiditylab_core::models;
    use rigiditylab_core::rat::rat;

    #[test]
    fn pl_roundtrip() {
        let m = PlMap::new(
            vec![
                (rat(0, 1), rat(1, 8)),
                (rat(1, 4), rat(3, 8)),
                (rat(1, 2), rat(9, 16)),
            ],
            Orientation::Preserving,
        )
        .unwrap();
        let v = pl_to_json(&m);
        let back = pl_from_json(&v).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn big_values_serialize_as_strings() {
        let huge = Rat::new(
            BigInt::from(3).pow(80),
            BigInt::from(2) * BigInt::from(3).pow(80) + 1,
        );
        let m = PlMap::translation(huge);
        let v = pl_to_json(&m);
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains('"'), "expected string-encoded bigints: {s}");
        let back = pl_from_json(&v).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn model_roundtrip() {
        let rep = models::random_pl(2, 11).unwrap();
        let v = model_to_json(&rep);
        let back = model_from_json(&v).unwrap();
        assert_eq!(rep.generator_names(), back.generator_names());
        for (name, e) in rep.generators() {
            assert!(e.same_map(back.generator(name).unwrap()));
        }
        // Byte-identical JSON for identical seeds.
        let rep2 = models::random_pl(2, 11).unwrap();
        let v2 = model_to_json(&rep2);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&v2).unwrap()
        );
    }

    #[test]
    fn moebius_model_roundtrip() {
        let rep = models::geodesic_genus2(models::Backend::Moebius);
        let v = model_to_json(&rep);
        let back = model_from_json(&v).unwrap();
        for (name, e) in rep.generators() {
            assert!(e.same_map(back.generator(name).unwrap()));
        }
        assert_eq!(back.center_name(), Some("z"));
    }
}
