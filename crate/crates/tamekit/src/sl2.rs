//! Explicit 2x2 determinant-one computations: the unipotent conjugation
//! identity, first-column projection, finite word balls in finitely
//! generated subgroups, and discreteness certification of the projected
//! column set.
//!
//! Everything is generic over a scalar mode: `Complex64` (float, with
//! rounded-entry deduplication) or [`GaussianRational`] (exact arithmetic,
//! exact deduplication).

use crate::error::{Error, Result};
use crate::exact::GaussianRational;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::hash::Hash;

/// Determinant tolerance for float-mode validation.
pub const DET_TOL: f64 = 1e-9;

/// Entry tolerance for the closed-form vs. product consistency check.
pub const CONJUGATION_TOL: f64 = 1e-10;

/// Rounding quantum for float-mode deduplication keys.
const DEDUP_QUANTUM: f64 = 1e9;

/// Scalar operations needed by the 2x2 machinery, plus a deduplication key.
pub trait Sl2Scalar: Clone + PartialEq + std::fmt::Debug {
    /// Hashable key; exact modes use the value itself, float modes a
    /// 1e-9-rounded surrogate.
    type Key: Hash + Eq + Clone;

    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn key(&self) -> Self::Key;
    fn to_c64(&self) -> Complex64;
    fn is_finite_scalar(&self) -> bool;
    /// Sign convention for the projective normalization: flip when the
    /// real part is negative, or zero with negative imaginary part.
    fn needs_flip(&self) -> bool;
}

impl Sl2Scalar for Complex64 {
    type Key = (i128, i128);

    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn key(&self) -> Self::Key {
        (
            (self.re * DEDUP_QUANTUM).round() as i128,
            (self.im * DEDUP_QUANTUM).round() as i128,
        )
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_finite_scalar(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn needs_flip(&self) -> bool {
        self.re < 0.0 || (self.re == 0.0 && self.im < 0.0)
    }
}

impl Sl2Scalar for GaussianRational {
    type Key = GaussianRational;

    const EXACT: bool = true;

    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn key(&self) -> Self::Key {
        self.clone()
    }
    fn to_c64(&self) -> Complex64 {
        GaussianRational::to_c64(self)
    }
    fn is_finite_scalar(&self) -> bool {
        true
    }
    fn needs_flip(&self) -> bool {
        self.re.is_negative() || (self.re.is_zero() && self.im.is_negative())
    }
}

/// A determinant-one 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2<T: Sl2Scalar> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Sl2Scalar> Sl2<T> {
    /// Validates `ad - bc = 1` (exactly in exact mode, to 1e-9 in float).
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Sl2<T>> {
        let g = Sl2 { a, b, c, d };
        let det = g.det();
        let ok = if T::EXACT {
            det == T::one()
        } else {
            (det.to_c64() - Complex64::new(1.0, 0.0)).norm() <= DET_TOL
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "determinant {} is not 1",
                det.to_c64()
            )));
        }
        Ok(g)
    }

    pub fn identity() -> Sl2<T> {
        Sl2 {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    /// The fixed unipotent `[[1, 1], [0, 1]]`.
    pub fn unipotent_u() -> Sl2<T> {
        Sl2 {
            a: T::one(),
            b: T::one(),
            c: T::zero(),
            d: T::one(),
        }
    }

    pub fn det(&self) -> T {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn mul(&self, o: &Sl2<T>) -> Sl2<T> {
        Sl2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    /// Inverse by the adjugate; exact for determinant one.
    pub fn inverse(&self) -> Sl2<T> {
        Sl2 {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn trace(&self) -> T {
        self.a.add(&self.d)
    }

    /// Projection onto the first column `(a, c)`.
    pub fn first_column(&self) -> (T, T) {
        (self.a.clone(), self.c.clone())
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_finite_entries(&self) -> bool {
        self.entries().iter().all(|e| e.is_finite_scalar())
    }

    fn key(&self) -> (T::Key, T::Key, T::Key, T::Key) {
        (self.a.key(), self.b.key(), self.c.key(), self.d.key())
    }

    fn close_to(&self, o: &Sl2<T>, tol: f64) -> bool {
        if T::EXACT {
            self == o
        } else {
            self.entries()
                .iter()
                .zip(o.entries())
                .all(|(x, y)| (x.to_c64() - y.to_c64()).norm() <= tol)
        }
    }

    /// `(g - I)^2 = 0`, the unipotency criterion (identity included).
    pub fn is_unipotent(&self) -> bool {
        let m = [
            self.a.sub(&T::one()),
            self.b.clone(),
            self.c.clone(),
            self.d.sub(&T::one()),
        ];
        // square of the 2x2 [m0 m1; m2 m3]
        let sq = [
            m[0].mul(&m[0]).add(&m[1].mul(&m[2])),
            m[0].mul(&m[1]).add(&m[1].mul(&m[3])),
            m[2].mul(&m[0]).add(&m[3].mul(&m[2])),
            m[2].mul(&m[1]).add(&m[3].mul(&m[3])),
        ];
        if T::EXACT {
            sq.iter().all(|x| *x == T::zero())
        } else {
            sq.iter().all(|x| x.to_c64().norm() <= 1e-9)
        }
    }

    /// Unipotent and different from the identity.
    pub fn is_nontrivial_unipotent(&self) -> bool {
        self.is_unipotent() && !self.close_to(&Sl2::identity(), 1e-9)
    }

    /// Projective normalization: negate all entries when the first nonzero
    /// entry (scanning a, b, c, d) points into the left half plane, so that
    /// `g` and `-g` share a representative.
    pub fn psl2_normalize(&self) -> Sl2<T> {
        for e in self.entries() {
            let z = e.to_c64();
            let nonzero = if T::EXACT {
                *e != T::zero()
            } else {
                z.norm() > 0.0
            };
            if nonzero {
                if e.needs_flip() {
                    return Sl2 {
                        a: self.a.neg(),
                        b: self.b.neg(),
                        c: self.c.neg(),
                        d: self.d.neg(),
                    };
                }
                return self.clone();
            }
        }
        self.clone()
    }
}

/// `gamma . u . gamma^{-1}` for the fixed unipotent `u = [[1,1],[0,1]]`,
/// computed twice: by the closed form `[[1 - ac, a^2], [-c^2, 1 + ac]]` and
/// by the triple matrix product. The two must agree (exactly in exact mode,
/// to 1e-10 in float) or an internal-consistency error is raised.
pub fn conjugate_unipotent<T: Sl2Scalar>(gamma: &Sl2<T>) -> Result<Sl2<T>> {
    let ac = gamma.a.mul(&gamma.c);
    let closed = Sl2 {
        a: T::one().sub(&ac),
        b: gamma.a.mul(&gamma.a),
        c: gamma.c.mul(&gamma.c).neg(),
        d: T::one().add(&ac),
    };
    let product = gamma.mul(&Sl2::unipotent_u()).mul(&gamma.inverse());
    if !closed.close_to(&product, CONJUGATION_TOL) {
        return Err(Error::InternalCheck(format!(
            "unipotent conjugation closed form disagrees with the product at {:?}",
            gamma
        )));
    }
    Ok(closed)
}

/// Deduplicated closure of the generators over words of length at most
/// `max_word_length`, in breadth-first order.
#[derive(Clone, Debug)]
pub struct GroupBall<T: Sl2Scalar> {
    /// The generating list, augmented with any missing inverses.
    pub generators: Vec<Sl2<T>>,
    /// Distinct elements; index 0 is the identity. Order: word length,
    /// then lexicographic word over generator indices.
    pub elements: Vec<Sl2<T>>,
    /// The first word (in BFS order) reaching each element.
    pub words: Vec<Vec<usize>>,
    pub max_word_length: usize,
    /// Float-mode candidates dropped because an entry overflowed.
    pub flagged_overflow: usize,
}

impl<T: Sl2Scalar> GroupBall<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Breadth-first enumeration of the word ball. The generator list is
/// extended by any missing inverses first (the ball is symmetric either
/// way; listing them keeps words short). Deterministic: elements appear in
/// (word length, lexicographic word) order, first occurrence kept.
pub fn enumerate_ball<T: Sl2Scalar>(
    generators: &[Sl2<T>],
    max_word_length: usize,
) -> Result<GroupBall<T>> {
    let mut gens: Vec<Sl2<T>> = Vec::new();
    for g in generators {
        if !g.is_finite_entries() {
            return Err(Error::NonFinite("generator entries".into()));
        }
        gens.push(g.clone());
    }
    let inverses: Vec<Sl2<T>> = gens.iter().map(|g| g.inverse()).collect();
    for inv in inverses {
        if !gens.iter().any(|g| g.close_to(&inv, 1e-12)) {
            gens.push(inv);
        }
    }

    let mut elements: Vec<Sl2<T>> = vec![Sl2::identity()];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut seen: HashMap<_, usize> = HashMap::new();
    seen.insert(Sl2::<T>::identity().key(), 0);
    let mut flagged_overflow = 0usize;
    let mut layer: Vec<usize> = vec![0];

    for _ in 0..max_word_length {
        let mut next_layer = Vec::new();
        for &idx in &layer {
            let parent = elements[idx].clone();
            let parent_word = words[idx].clone();
            for (gi, g) in gens.iter().enumerate() {
                let cand = parent.mul(g);
                if !cand.is_finite_entries() {
                    flagged_overflow += 1;
                    continue;
                }
                let key = cand.key();
                match seen.get(&key) {
                    Some(&existing) => {
                        // same rounded key means genuinely the same element;
                        // anything else would be a dedup-key failure
                        if !cand.close_to(&elements[existing], 1e-8) {
                            return Err(Error::InternalCheck(
                                "dedup key collision between distant elements".into(),
                            ));
                        }
                    }
                    None => {
                        let mut word = parent_word.clone();
                        word.push(gi);
                        seen.insert(key, elements.len());
                        next_layer.push(elements.len());
                        elements.push(cand);
                        words.push(word);
                    }
                }
            }
        }
        layer = next_layer;
        if layer.is_empty() {
            break;
        }
    }

    Ok(GroupBall {
        generators: gens,
        elements,
        words,
        max_word_length,
        flagged_overflow,
    })
}

/// One distinct projected column, with its distance to the nearest other
/// distinct column (infinite when alone).
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ColumnRow {
    pub norm: f64,
    pub nearest: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ProjectionReport {
    /// Ball elements whose column lands inside the radius (before dedup).
    pub total_in_ball: usize,
    pub distinct_columns: usize,
    /// Minimum pairwise distance among distinct columns; infinite below
    /// two columns.
    pub min_separation: f64,
    /// Set when every entry was a Gaussian integer, in which case the
    /// lattice bound `separation >= 1` was verified exactly.
    pub integral_bound_checked: bool,
    pub columns: Vec<ColumnRow>,
}

fn column_norm<T: Sl2Scalar>(col: &(T, T)) -> f64 {
    (col.0.to_c64().norm_sqr() + col.1.to_c64().norm_sqr()).sqrt()
}

fn column_dist<T: Sl2Scalar>(x: &(T, T), y: &(T, T)) -> f64 {
    ((x.0.to_c64() - y.0.to_c64()).norm_sqr() + (x.1.to_c64() - y.1.to_c64()).norm_sqr()).sqrt()
}

fn exact_dist_sqr(x: &(GaussianRational, GaussianRational), y: &(GaussianRational, GaussianRational)) -> BigRational {
    let d0 = &x.0 - &y.0;
    let d1 = &x.1 - &y.1;
    d0.norm_sqr() + d1.norm_sqr()
}

/// Distinct first columns of ball elements within the radius, with the
/// minimum pairwise separation. Works in any mode; see
/// [`projection_discreteness_exact`] for the exact lattice certificate.
pub fn projection_discreteness<T: Sl2Scalar>(
    ball: &GroupBall<T>,
    radius: f64,
) -> ProjectionReport {
    let mut total = 0usize;
    let mut distinct: Vec<(T, T)> = Vec::new();
    let mut seen: HashMap<(T::Key, T::Key), ()> = HashMap::new();
    for g in &ball.elements {
        let col = g.first_column();
        if column_norm(&col) <= radius {
            total += 1;
            let key = (col.0.key(), col.1.key());
            if seen.insert(key, ()).is_none() {
                distinct.push(col);
            }
        }
    }
    let m = distinct.len();
    let mut nearest = vec![f64::INFINITY; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = column_dist(&distinct[i], &distinct[j]);
            if d < nearest[i] {
                nearest[i] = d;
            }
            if d < nearest[j] {
                nearest[j] = d;
            }
        }
    }
    let min_separation = nearest.iter().copied().fold(f64::INFINITY, f64::min);
    let columns = distinct
        .iter()
        .zip(&nearest)
        .map(|(col, &nn)| ColumnRow {
            norm: column_norm(col),
            nearest: nn,
        })
        .collect();
    ProjectionReport {
        total_in_ball: total,
        distinct_columns: m,
        min_separation,
        integral_bound_checked: false,
        columns,
    }
}

/// Exact-mode variant: when every matrix entry in the ball is a Gaussian
/// integer, distinct columns differ by a nonzero Gaussian-integer vector,
/// whose norm is at least 1. That bound is verified exactly and recorded;
/// a violation is an internal-consistency error.
pub fn projection_discreteness_exact(
    ball: &GroupBall<GaussianRational>,
    radius: f64,
) -> Result<ProjectionReport> {
    let mut report = projection_discreteness(ball, radius);
    let all_integral = ball
        .elements
        .iter()
        .flat_map(|g| g.entries().into_iter().cloned().collect::<Vec<_>>())
        .all(|e| e.is_gaussian_integer());
    if !all_integral {
        return Ok(report);
    }
    // re-derive the separation exactly over the distinct columns
    let mut distinct: Vec<(GaussianRational, GaussianRational)> = Vec::new();
    for g in &ball.elements {
        let col = g.first_column();
        if column_norm(&col) <= radius && !distinct.contains(&col) {
            distinct.push(col);
        }
    }
    let one = BigRational::one();
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            let d2 = exact_dist_sqr(&distinct[i], &distinct[j]);
            if d2 < one {
                return Err(Error::InternalCheck(format!(
                    "distinct integral columns at exact distance^2 {d2} < 1"
                )));
            }
        }
    }
    report.integral_bound_checked = true;
    Ok(report)
}
