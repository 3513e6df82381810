//! Ambient spaces, points and discrete sets.
//!
//! A point lives either in affine space `C^n`, in `SL_n(C)` (as a matrix), or
//! in the torus `(C^*)^n` (as its vector of diagonal entries). Every space
//! carries a canonical exhaustion function `rho >= 1`:
//!
//! * affine: `rho(p) = max(1, |p|_2)`
//! * matrix group: `rho(g) = max(1, |g|_F, |g^-1|_F)`, symmetric under
//!   inversion; the torus uses its diagonal matrix embedding.
//!
//! Discreteness at desk scale is certified by restricting to an exhaustion
//! ball and measuring the minimum pairwise separation, exactly when the
//! coordinates are exact.

use crate::error::{Error, Result};
use crate::exact::{rational_from_f64, GaussianRational};
use crate::linalg::Matrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Minimum pairwise distance for a float point set to count as distinct.
pub const FLOAT_DISTINCTNESS: f64 = 1e-9;

/// Tolerance on `det g = 1` for float special-linear points.
pub const DET_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AmbientSpace {
    /// Affine space `C^dim`.
    Affine { dim: usize },
    /// `SL_n(C)` as `n x n` matrices of determinant 1.
    SpecialLinear { n: usize },
    /// `(C^*)^n`, points stored as the diagonal-entry vector.
    Torus { n: usize },
}

impl AmbientSpace {
    /// Length of the coordinate vector (affine/torus) or matrix side (group).
    pub fn point_len(&self) -> usize {
        match *self {
            AmbientSpace::Affine { dim } => dim,
            AmbientSpace::SpecialLinear { n } | AmbientSpace::Torus { n } => n,
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, AmbientSpace::SpecialLinear { .. })
    }
}

/// Coordinates of a point, either float or exact Gaussian-rational, either a
/// vector (affine, torus) or a square matrix (matrix groups).
#[derive(Clone, PartialEq, Debug)]
pub enum Point {
    FloatVec(Vec<Complex64>),
    ExactVec(Vec<GaussianRational>),
    FloatMat(Matrix<Complex64>),
    ExactMat(Matrix<GaussianRational>),
}

impl Point {
    pub fn is_exact(&self) -> bool {
        matches!(self, Point::ExactVec(_) | Point::ExactMat(_))
    }

    pub fn affine_f64(coords: &[(f64, f64)]) -> Point {
        Point::FloatVec(coords.iter().map(|&(r, i)| Complex64::new(r, i)).collect())
    }

    /// Vector view in floats, for either float or exact vector points.
    pub fn vec_f64(&self) -> Option<Vec<Complex64>> {
        match self {
            Point::FloatVec(v) => Some(v.clone()),
            Point::ExactVec(v) => Some(v.iter().map(|x| x.to_c64()).collect()),
            _ => None,
        }
    }

    /// Matrix view in floats, for either float or exact matrix points.
    pub fn mat_f64(&self) -> Option<Matrix<Complex64>> {
        match self {
            Point::FloatMat(m) => Some(m.clone()),
            Point::ExactMat(m) => Some(Matrix::from_rows(
                (0..m.rows)
                    .map(|i| m.row(i).iter().map(|x| x.to_c64()).collect())
                    .collect(),
            )),
            _ => None,
        }
    }

    fn check_shape(&self, space: &AmbientSpace) -> Result<()> {
        let len = space.point_len();
        let ok = match (self, space) {
            (Point::FloatVec(v), AmbientSpace::Affine { .. } | AmbientSpace::Torus { .. }) => {
                v.len() == len
            }
            (Point::ExactVec(v), AmbientSpace::Affine { .. } | AmbientSpace::Torus { .. }) => {
                v.len() == len
            }
            (Point::FloatMat(m), AmbientSpace::SpecialLinear { .. }) => {
                m.rows == len && m.cols == len
            }
            (Point::ExactMat(m), AmbientSpace::SpecialLinear { .. }) => {
                m.rows == len && m.cols == len
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!(
                "point shape does not match space {:?}",
                space
            )))
        }
    }

    /// Shape plus the space's membership invariant (det 1, nonzero coords).
    pub fn validate_in(&self, space: &AmbientSpace) -> Result<()> {
        self.check_shape(space)?;
        match space {
            AmbientSpace::Affine { .. } => Ok(()),
            AmbientSpace::Torus { .. } => {
                let zero = match self {
                    Point::FloatVec(v) => v.iter().any(|z| z.norm() == 0.0),
                    Point::ExactVec(v) => v.iter().any(|z| z.is_zero()),
                    _ => unreachable!(),
                };
                if zero {
                    Err(Error::InvalidPoint("torus coordinate is zero".into()))
                } else {
                    Ok(())
                }
            }
            AmbientSpace::SpecialLinear { .. } => match self {
                Point::FloatMat(m) => {
                    let det = m.determinant();
                    if (det - Complex64::new(1.0, 0.0)).norm() <= DET_TOLERANCE {
                        Ok(())
                    } else {
                        Err(Error::InvalidPoint(format!(
                            "determinant {} not within {} of 1",
                            det, DET_TOLERANCE
                        )))
                    }
                }
                Point::ExactMat(m) => {
                    if m.determinant() == GaussianRational::one() {
                        Ok(())
                    } else {
                        Err(Error::InvalidPoint("exact determinant is not 1".into()))
                    }
                }
                _ => unreachable!(),
            },
        }
    }
}

/// Value of an exhaustion function; always `>= 1`.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug)]
pub struct ExhaustionValue(f64);

impl ExhaustionValue {
    fn new(v: f64) -> Self {
        ExhaustionValue(v.max(1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn norm_sqr_vec_f64(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `max(1, |p|_2)` on a coordinate vector.
pub fn rho_affine(p: &Point) -> Result<ExhaustionValue> {
    let v = p
        .vec_f64()
        .ok_or_else(|| Error::InvalidPoint("affine exhaustion needs a vector point".into()))?;
    Ok(ExhaustionValue::new(norm_sqr_vec_f64(&v).sqrt()))
}

fn fro_norm(m: &Matrix<Complex64>) -> f64 {
    m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `max(1, |g|_F, |g^-1|_F)` on a matrix; symmetric in `g` and `g^-1`.
pub fn rho_group_matrix(m: &Matrix<Complex64>) -> Result<ExhaustionValue> {
    let inv = m.inverse()?;
    Ok(ExhaustionValue::new(fro_norm(m).max(fro_norm(&inv))))
}

/// Canonical exhaustion of the ambient space at a point.
pub fn rho(space: &AmbientSpace, p: &Point) -> Result<ExhaustionValue> {
    p.check_shape(space)?;
    match space {
        AmbientSpace::Affine { .. } => rho_affine(p),
        AmbientSpace::SpecialLinear { .. } => {
            // exact matrices invert exactly; floats go through elimination
            match p {
                Point::ExactMat(m) => {
                    let inv = m.inverse()?;
                    let n = |mm: &Matrix<GaussianRational>| {
                        mm.entries()
                            .iter()
                            .map(|x| x.norm_sqr().to_f64().unwrap_or(f64::INFINITY))
                            .sum::<f64>()
                            .sqrt()
                    };
                    Ok(ExhaustionValue::new(n(m).max(n(&inv))))
                }
                _ => rho_group_matrix(&p.mat_f64().unwrap()),
            }
        }
        AmbientSpace::Torus { .. } => {
            let v = p
                .vec_f64()
                .ok_or_else(|| Error::InvalidPoint("torus point must be a vector".into()))?;
            if v.iter().any(|z| z.norm() == 0.0) {
                return Err(Error::InvalidPoint("torus coordinate is zero".into()));
            }
            // diagonal embedding: |g|_F^2 = sum |z|^2, |g^-1|_F^2 = sum |z|^-2
            let fwd: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let bwd: f64 = v.iter().map(|z| 1.0 / z.norm_sqr()).sum();
            Ok(ExhaustionValue::new(fwd.sqrt().max(bwd.sqrt())))
        }
    }
}

/// Euclidean / Frobenius distance between two points of the same shape.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    match (dist_sqr_exact(p, q), dist_sqr_f64(p, q)) {
        (Some(ex), _) => Ok(ex.to_f64().unwrap_or(f64::INFINITY).sqrt()),
        (None, Some(fl)) => Ok(fl.sqrt()),
        _ => Err(Error::InvalidPoint("distance between unlike shapes".into())),
    }
}

fn dist_sqr_f64(p: &Point, q: &Point) -> Option<f64> {
    let (a, b) = match (p.vec_f64(), q.vec_f64()) {
        (Some(a), Some(b)) if a.len() == b.len() => (a, b),
        _ => {
            let (ma, mb) = (p.mat_f64()?, q.mat_f64()?);
            if (ma.rows, ma.cols) != (mb.rows, mb.cols) {
                return None;
            }
            (ma.entries().to_vec(), mb.entries().to_vec())
        }
    };
    Some(a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// Exact squared distance when both points are exact and of the same shape.
pub fn dist_sqr_exact(p: &Point, q: &Point) -> Option<BigRational> {
    let diff_norm = |a: &[GaussianRational], b: &[GaussianRational]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm_sqr())
            .fold(BigRational::zero(), |acc, t| acc + t)
    };
    match (p, q) {
        (Point::ExactVec(a), Point::ExactVec(b)) if a.len() == b.len() => Some(diff_norm(a, b)),
        (Point::ExactMat(a), Point::ExactMat(b))
            if (a.rows, a.cols) == (b.rows, b.cols) =>
        {
            Some(diff_norm(a.entries(), b.entries()))
        }
        _ => None,
    }
}

/// A finite point collection in an ambient space, pairwise distinct
/// (exactly for exact coordinates, at separation `>= 1e-9` for floats).
#[derive(Clone, Debug)]
pub struct DiscreteSet {
    pub space: AmbientSpace,
    pub points: Vec<Point>,
    pub label: String,
}

impl DiscreteSet {
    /// Fully validated constructor: membership plus pairwise distinctness.
    pub fn from_points(space: AmbientSpace, points: Vec<Point>, label: &str) -> Result<Self> {
        for p in &points {
            p.validate_in(&space)?;
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let close = match dist_sqr_exact(&points[i], &points[j]) {
                    Some(d2) => d2.is_zero(),
                    None => {
                        dist_sqr_f64(&points[i], &points[j]).is_some_and(|d2| {
                            d2 < FLOAT_DISTINCTNESS * FLOAT_DISTINCTNESS
                        })
                    }
                };
                if close {
                    return Err(Error::NotDiscrete(format!(
                        "points {} and {} coincide at working precision",
                        i, j
                    )));
                }
            }
        }
        Ok(DiscreteSet {
            space,
            points,
            label: label.to_string(),
        })
    }

    /// Constructor for collections already known pairwise distinct (e.g. the
    /// output of a dedup). Validates membership only; use on large sets where
    /// the quadratic distinctness scan is wasteful.
    pub fn from_deduped(space: AmbientSpace, points: Vec<Point>, label: &str) -> Result<Self> {
        for p in &points {
            p.validate_in(&space)?;
        }
        Ok(DiscreteSet {
            space,
            points,
            label: label.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exhaustion values of all points, in point order.
    pub fn rho_values(&self) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|p| rho(&self.space, p).map(ExhaustionValue::value))
            .collect()
    }

    /// All points are exact.
    pub fn is_exact(&self) -> bool {
        self.points.iter().all(Point::is_exact)
    }
}

/// Result of a desk-scale discreteness certificate on an exhaustion ball.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DiscretenessReport {
    /// Number of points with `rho <= radius`.
    pub count: usize,
    /// Minimum pairwise distance among those points; infinite if fewer than 2.
    pub min_separation: f64,
    /// Whether the separation was computed by exact rational comparison.
    pub exact: bool,
}

/// Restrict to `{p : rho(p) <= radius}` and report the count and minimum
/// pairwise separation (exact rational comparisons when coordinates permit).
pub fn certify_discrete(set: &DiscreteSet, radius: f64) -> Result<DiscretenessReport> {
    let rhos = set.rho_values()?;
    let inside: Vec<&Point> = set
        .points
        .iter()
        .zip(&rhos)
        .filter(|(_, r)| **r <= radius)
        .map(|(p, _)| p)
        .collect();
    let exact = inside.iter().all(|p| p.is_exact());
    if inside.len() < 2 {
        return Ok(DiscretenessReport {
            count: inside.len(),
            min_separation: f64::INFINITY,
            exact,
        });
    }
    if exact {
        let mut best: Option<BigRational> = None;
        for i in 0..inside.len() {
            for j in (i + 1)..inside.len() {
                let d2 = dist_sqr_exact(inside[i], inside[j])
                    .ok_or_else(|| Error::InvalidPoint("mixed shapes in one set".into()))?;
                if best.as_ref().is_none_or(|b| d2 < *b) {
                    best = Some(d2);
                }
            }
        }
        Ok(DiscretenessReport {
            count: inside.len(),
            min_separation: best.unwrap().to_f64().unwrap_or(f64::INFINITY).sqrt(),
            exact: true,
        })
    } else {
        let mut best = f64::INFINITY;
        for i in 0..inside.len() {
            for j in (i + 1)..inside.len() {
                let d2 = dist_sqr_f64(inside[i], inside[j])
                    .ok_or_else(|| Error::InvalidPoint("mixed shapes in one set".into()))?;
                best = best.min(d2);
            }
        }
        Ok(DiscretenessReport {
            count: inside.len(),
            min_separation: best.sqrt(),
            exact: false,
        })
    }
}

/// Exact comparison `rho-ball radius^2 >= d^2` helper for lattice assertions:
/// true when the squared separation is at least `bound` (an integer).
pub fn min_separation_at_least(set: &DiscreteSet, radius: f64, bound: i64) -> Result<bool> {
    let report = certify_discrete(set, radius)?;
    if report.count < 2 {
        return Ok(true);
    }
    if report.exact {
        // recompute the exact minimum to compare without float rounding
        let rhos = set.rho_values()?;
        let inside: Vec<&Point> = set
            .points
            .iter()
            .zip(&rhos)
            .filter(|(_, r)| **r <= radius)
            .map(|(p, _)| p)
            .collect();
        let bound = BigRational::from_integer(bound.into());
        for i in 0..inside.len() {
            for j in (i + 1)..inside.len() {
                if dist_sqr_exact(inside[i], inside[j]).unwrap() < bound {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    } else {
        Ok(report.min_separation * report.min_separation >= bound as f64)
    }
}

/// Convenience: exact radius comparison `|x|^2 <= r^2` over rationals, used
/// where float square roots would misclassify boundary points.
pub fn exact_within_radius(norm_sqr: &BigRational, radius: f64) -> bool {
    match rational_from_f64(radius) {
        Some(r) => *norm_sqr <= &r * &r,
        None => true, // infinite radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rho_affine_frozen_values() {
        // origin of C^2 -> 1 (the max with 1 kicks in)
        let origin = Point::FloatVec(vec![c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rho_affine(&origin).unwrap().value(), 1.0);
        // (3, 4) -> 5
        let p = Point::FloatVec(vec![c(3.0, 0.0), c(4.0, 0.0)]);
        assert!((rho_affine(&p).unwrap().value() - 5.0).abs() < 1e-12);
        // (1+i, 0) -> sqrt 2
        let q = Point::FloatVec(vec![c(1.0, 1.0), c(0.0, 0.0)]);
        assert!((rho_affine(&q).unwrap().value() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rho_group_frozen_values() {
        let sl2 = AmbientSpace::SpecialLinear { n: 2 };
        // identity -> sqrt 2
        let id = Point::FloatMat(Matrix::identity(2));
        assert!((rho(&sl2, &id).unwrap().value() - 2f64.sqrt()).abs() < 1e-12);
        // diag(2, 1/2): both norms sqrt(4.25)
        let d = Point::FloatMat(Matrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ]));
        assert!((rho(&sl2, &d).unwrap().value() - 4.25f64.sqrt()).abs() < 1e-12);
        // unipotent [[1,5],[0,1]]: norm sqrt 27, same for the inverse
        let u = Point::FloatMat(Matrix::from_rows(vec![
            vec![c(1.0, 0.0), c(5.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]));
        assert!((rho(&sl2, &u).unwrap().value() - 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rho_group_symmetric_under_inversion() {
        let g = Point::FloatMat(Matrix::from_rows(vec![
            vec![c(2.0, 1.0), c(1.0, 0.0)],
            vec![c(3.0, 0.0), c(2.0, -0.5)],
        ]));
        let ginv = Point::FloatMat(g.mat_f64().unwrap().inverse().unwrap());
        let a = rho_group_matrix(&g.mat_f64().unwrap()).unwrap().value();
        let b = rho_group_matrix(&ginv.mat_f64().unwrap()).unwrap().value();
        assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn rho_torus_diagonal_embedding() {
        let t = AmbientSpace::Torus { n: 2 };
        // (2, 1/2): fwd norm sqrt(4.25) = bwd norm
        let p = Point::FloatVec(vec![c(2.0, 0.0), c(0.5, 0.0)]);
        assert!((rho(&t, &p).unwrap().value() - 4.25f64.sqrt()).abs() < 1e-12);
        // (1, 1) -> sqrt 2
        let one = Point::FloatVec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!((rho(&t, &one).unwrap().value() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn certify_discrete_line_points() {
        // D = {(k, 0) : k = 1..10} in C^2, radius 5 -> count 5, min sep 1
        let pts: Vec<Point> = (1..=10)
            .map(|k| Point::FloatVec(vec![c(k as f64, 0.0), c(0.0, 0.0)]))
            .collect();
        let set =
            DiscreteSet::from_points(AmbientSpace::Affine { dim: 2 }, pts, "line").unwrap();
        let rep = certify_discrete(&set, 5.0).unwrap();
        assert_eq!(rep.count, 5);
        assert!((rep.min_separation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn certify_discrete_gaussian_lattice_exact() {
        // Z[i] points of norm <= 3 in C^1: 29 points, min separation exactly 1
        let mut pts = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                if a * a + b * b <= 9 {
                    pts.push(Point::ExactVec(vec![GaussianRational::from_ints(a, b)]));
                }
            }
        }
        assert_eq!(pts.len(), 29);
        let set =
            DiscreteSet::from_points(AmbientSpace::Affine { dim: 1 }, pts, "lattice").unwrap();
        let rep = certify_discrete(&set, 3.0).unwrap();
        assert_eq!(rep.count, 29);
        assert!(rep.exact);
        assert_eq!(rep.min_separation, 1.0);
        assert!(min_separation_at_least(&set, 3.0, 1).unwrap());
    }

    #[test]
    fn certify_discrete_empty_ball() {
        let pts = vec![Point::FloatVec(vec![c(50.0, 0.0)])];
        let set = DiscreteSet::from_points(AmbientSpace::Affine { dim: 1 }, pts, "far").unwrap();
        let rep = certify_discrete(&set, 2.0).unwrap();
        assert_eq!(rep.count, 0);
        assert_eq!(rep.min_separation, f64::INFINITY);
    }

    #[test]
    fn monotone_in_radius() {
        let pts: Vec<Point> = (1..=8)
            .map(|k| Point::FloatVec(vec![c(k as f64, 0.3 * k as f64)]))
            .collect();
        let set = DiscreteSet::from_points(AmbientSpace::Affine { dim: 1 }, pts, "m").unwrap();
        let mut last_count = 0;
        let mut last_sep = f64::INFINITY;
        for r in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let rep = certify_discrete(&set, r).unwrap();
            assert!(rep.count >= last_count);
            assert!(rep.min_separation <= last_sep);
            last_count = rep.count;
            last_sep = rep.min_separation;
        }
    }

    #[test]
    fn validation_rejects_bad_points() {
        // determinant far from 1
        let bad = Point::FloatMat(Matrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ]));
        assert!(bad
            .validate_in(&AmbientSpace::SpecialLinear { n: 2 })
            .is_err());
        // zero torus coordinate
        let zt = Point::FloatVec(vec![c(0.0, 0.0)]);
        assert!(zt.validate_in(&AmbientSpace::Torus { n: 1 }).is_err());
        // coincident float points
        let dup = vec![
            Point::FloatVec(vec![c(1.0, 0.0)]),
            Point::FloatVec(vec![c(1.0, 1e-12)]),
        ];
        assert!(DiscreteSet::from_points(AmbientSpace::Affine { dim: 1 }, dup, "d").is_err());
    }
}
