//! JSON interchange for point sets.
//!
//! Document shape:
//!
//! ```json
//! {
//!   "space": {"kind": "affine", "dim": 2},
//!   "points": [[[0.0, 0.0], [1.0, 0.0]], ...],
//!   "label": "demo"
//! }
//! ```
//!
//! A complex number is a two-element array `[re, im]`. Each part is either a
//! JSON number (float mode) or an exact rational `{"num": p, "den": q}`.
//! Affine and torus points are arrays of complex numbers; special-linear
//! points are row-major arrays of matrix rows. Kinds: `affine` (field `dim`),
//! `sl` and `torus` (field `n`).

use crate::error::{Error, Result};
use crate::exact::GaussianRational;
use crate::linalg::Matrix;
use crate::space::{AmbientSpace, DiscreteSet, Point};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceDoc {
    Affine { dim: usize },
    Sl { n: usize },
    Torus { n: usize },
}

impl From<SpaceDoc> for AmbientSpace {
    fn from(s: SpaceDoc) -> AmbientSpace {
        match s {
            SpaceDoc::Affine { dim } => AmbientSpace::Affine { dim },
            SpaceDoc::Sl { n } => AmbientSpace::SpecialLinear { n },
            SpaceDoc::Torus { n } => AmbientSpace::Torus { n },
        }
    }
}

impl From<AmbientSpace> for SpaceDoc {
    fn from(s: AmbientSpace) -> SpaceDoc {
        match s {
            AmbientSpace::Affine { dim } => SpaceDoc::Affine { dim },
            AmbientSpace::SpecialLinear { n } => SpaceDoc::Sl { n },
            AmbientSpace::Torus { n } => SpaceDoc::Torus { n },
        }
    }
}

#[derive(Serialize, Deserialize, Debug)]
struct PointSetDoc {
    space: SpaceDoc,
    #[serde(default)]
    label: String,
    points: Vec<Value>,
}

/// One real coordinate: float or exact rational.
#[derive(Clone, Debug)]
enum RealRepr {
    Float(f64),
    Exact(BigRational),
}

fn parse_real(v: &Value) -> Result<RealRepr> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(RealRepr::Float)
            .ok_or_else(|| Error::Precondition("non-finite number in point".into())),
        Value::Object(map) => {
            let num = map
                .get("num")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Precondition("rational needs integer \"num\"".into()))?;
            let den = map
                .get("den")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Precondition("rational needs integer \"den\"".into()))?;
            if den == 0 {
                return Err(Error::Precondition("rational denominator is zero".into()));
            }
            Ok(RealRepr::Exact(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))
        }
        _ => Err(Error::Precondition(
            "coordinate part must be a number or {num, den}".into(),
        )),
    }
}

fn parse_complex(v: &Value) -> Result<(RealRepr, RealRepr)> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Precondition("complex number must be a [re, im] pair".into()))?;
    Ok((parse_real(&arr[0])?, parse_real(&arr[1])?))
}

/// Collect a list of complex pairs into a uniformly exact or float vector.
/// A single float part makes the whole point float.
fn assemble(parts: Vec<(RealRepr, RealRepr)>) -> (bool, Vec<Complex64>, Vec<GaussianRational>) {
    let all_exact = parts
        .iter()
        .all(|(r, i)| matches!(r, RealRepr::Exact(_)) && matches!(i, RealRepr::Exact(_)));
    if all_exact {
        let ex: Vec<GaussianRational> = parts
            .into_iter()
            .map(|(r, i)| match (r, i) {
                (RealRepr::Exact(a), RealRepr::Exact(b)) => GaussianRational::new(a, b),
                _ => unreachable!(),
            })
            .collect();
        (true, Vec::new(), ex)
    } else {
        let to_f = |x: RealRepr| match x {
            RealRepr::Float(f) => f,
            RealRepr::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
        };
        let fl = parts
            .into_iter()
            .map(|(r, i)| Complex64::new(to_f(r), to_f(i)))
            .collect();
        (false, fl, Vec::new())
    }
}

fn parse_point(space: &AmbientSpace, v: &Value) -> Result<Point> {
    match space {
        AmbientSpace::Affine { .. } | AmbientSpace::Torus { .. } => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Precondition("vector point must be an array".into()))?;
            let parts: Result<Vec<_>> = arr.iter().map(parse_complex).collect();
            let (exact, fl, ex) = assemble(parts?);
            Ok(if exact {
                Point::ExactVec(ex)
            } else {
                Point::FloatVec(fl)
            })
        }
        AmbientSpace::SpecialLinear { n } => {
            let rows = v
                .as_array()
                .filter(|a| a.len() == *n)
                .ok_or_else(|| Error::Precondition("matrix point must be an array of rows".into()))?;
            let mut parts = Vec::with_capacity(n * n);
            for row in rows {
                let row = row
                    .as_array()
                    .filter(|a| a.len() == *n)
                    .ok_or_else(|| Error::Precondition("matrix row has wrong length".into()))?;
                for entry in row {
                    parts.push(parse_complex(entry)?);
                }
            }
            let (exact, fl, ex) = assemble(parts);
            Ok(if exact {
                Point::ExactMat(Matrix::new(*n, *n, ex))
            } else {
                Point::FloatMat(Matrix::new(*n, *n, fl))
            })
        }
    }
}

fn rational_to_value(r: &BigRational) -> Result<Value> {
    let num = r.numer().to_i64();
    let den = r.denom().to_i64();
    // num-rational normalizes: denominator positive, sign on the numerator
    match (num, den) {
        (Some(n), Some(d)) => Ok(json!({ "num": n, "den": d })),
        _ => Err(Error::Precondition(
            "exact coordinate exceeds the 64-bit rational interchange range".into(),
        )),
    }
}

fn complex_to_value_exact(z: &GaussianRational) -> Result<Value> {
    Ok(Value::Array(vec![
        rational_to_value(&z.re)?,
        rational_to_value(&z.im)?,
    ]))
}

fn complex_to_value_f64(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn point_to_value(p: &Point) -> Result<Value> {
    Ok(match p {
        Point::FloatVec(v) => Value::Array(v.iter().map(|z| complex_to_value_f64(*z)).collect()),
        Point::ExactVec(v) => {
            Value::Array(v.iter().map(complex_to_value_exact).collect::<Result<_>>()?)
        }
        Point::FloatMat(m) => Value::Array(
            (0..m.rows)
                .map(|i| {
                    Value::Array(m.row(i).iter().map(|z| complex_to_value_f64(*z)).collect())
                })
                .collect(),
        ),
        Point::ExactMat(m) => Value::Array(
            (0..m.rows)
                .map(|i| {
                    Ok(Value::Array(
                        m.row(i)
                            .iter()
                            .map(complex_to_value_exact)
                            .collect::<Result<_>>()?,
                    ))
                })
                .collect::<Result<_>>()?,
        ),
    })
}

/// How much checking to apply when reading a point set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Validation {
    /// Membership plus the quadratic pairwise-distinctness scan.
    Full,
    /// Membership only; for large inputs already known deduplicated.
    Shapes,
}

pub fn parse_point_set(text: &str, validation: Validation) -> Result<DiscreteSet> {
    let doc: PointSetDoc = serde_json::from_str(text)?;
    let space: AmbientSpace = doc.space.into();
    let points: Result<Vec<Point>> = doc.points.iter().map(|v| parse_point(&space, v)).collect();
    match validation {
        Validation::Full => DiscreteSet::from_points(space, points?, &doc.label),
        Validation::Shapes => DiscreteSet::from_deduped(space, points?, &doc.label),
    }
}

/// The point-set document as a JSON value, for embedding in larger reports.
pub fn point_set_value(set: &DiscreteSet) -> Result<Value> {
    let points: Result<Vec<Value>> = set.points.iter().map(point_to_value).collect();
    Ok(json!({
        "space": serde_json::to_value(SpaceDoc::from(set.space))?,
        "label": set.label,
        "points": points?,
    }))
}

pub fn write_point_set(set: &DiscreteSet) -> Result<String> {
    Ok(serde_json::to_string_pretty(&point_set_value(set)?)?)
}

/// Threshold-sequence document: `{"values": [1.5, 2.0, ...]}`.
pub fn parse_thresholds(text: &str) -> Result<crate::nevanlinna::ThresholdSequence> {
    #[derive(Deserialize)]
    struct ThresholdDoc {
        values: Vec<f64>,
    }
    let doc: ThresholdDoc = serde_json::from_str(text)?;
    crate::nevanlinna::ThresholdSequence::new(doc.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_affine_float() {
        let text = r#"{
            "space": {"kind": "affine", "dim": 2},
            "label": "demo",
            "points": [[[0.5, 0.0], [1.0, -2.0]], [[3.0, 4.0], [0.0, 0.0]]]
        }"#;
        let set = parse_point_set(text, Validation::Full).unwrap();
        assert_eq!(set.len(), 2);
        let back = write_point_set(&set).unwrap();
        let again = parse_point_set(&back, Validation::Full).unwrap();
        assert_eq!(again.points, set.points);
    }

    #[test]
    fn roundtrip_exact_rationals() {
        let text = r#"{
            "space": {"kind": "affine", "dim": 1},
            "points": [[[{"num": 1, "den": 2}, {"num": -1, "den": 3}]]]
        }"#;
        let set = parse_point_set(text, Validation::Full).unwrap();
        assert!(set.is_exact());
        match &set.points[0] {
            Point::ExactVec(v) => {
                assert_eq!(v[0], GaussianRational::from_ratios(1, 2, -1, 3));
            }
            _ => panic!("expected exact vector"),
        }
        let back = write_point_set(&set).unwrap();
        let again = parse_point_set(&back, Validation::Full).unwrap();
        assert_eq!(again.points, set.points);
    }

    #[test]
    fn sl_matrix_points() {
        let text = r#"{
            "space": {"kind": "sl", "n": 2},
            "points": [
                [[[1,0],[1,0]],[[0,0],[1,0]]],
                [[[1,0],[0,0]],[[0,0],[1,0]]]
            ]
        }"#;
        let set = parse_point_set(text, Validation::Full).unwrap();
        assert_eq!(set.space, AmbientSpace::SpecialLinear { n: 2 });
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn rejects_malformed() {
        let bad = r#"{"space": {"kind": "affine", "dim": 1}, "points": [[[1]]]}"#;
        assert!(parse_point_set(bad, Validation::Full).is_err());
        let zero_den =
            r#"{"space": {"kind": "affine", "dim": 1}, "points": [[[{"num":1,"den":0},[0,0]]]]}"#;
        assert!(parse_point_set(zero_den, Validation::Full).is_err());
    }
}
