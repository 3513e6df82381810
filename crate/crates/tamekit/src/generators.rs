//! Set-level constructions: the exhaustion-balancing two-set partition, the
//! product-coordinate split, properness tables, and a torus point sequence
//! that stays below a threshold sequence while visiting prescribed fibers of
//! surjective torus morphisms.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nevanlinna::{check_threshold_condition, ThresholdSequence};
use crate::rootsys::clear_denominators;
use crate::space::{
    certify_discrete, rho, AmbientSpace, DiscreteSet, DiscretenessReport, Point,
    FLOAT_DISTINCTNESS,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Required proximity of the generated image set to each scoped target.
pub const PROXIMITY_EPSILON: f64 = 1e-3;

/// How many leading sample targets the proximity certificate covers.
pub const PROXIMITY_TARGETS: usize = 10;

/// An evaluable projection of a point onto some of its coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Coords(Vec<usize>),
}

impl Projection {
    /// Apply to a vector-coordinate point, returning the target space and
    /// projected point. Affine points project to affine targets, torus
    /// points to torus targets.
    pub fn apply(&self, space: &AmbientSpace, p: &Point) -> Result<(AmbientSpace, Point)> {
        let Projection::Coords(idx) = self;
        if idx.is_empty() {
            return Err(Error::Precondition("projection selects no coordinates".into()));
        }
        let target = match space {
            AmbientSpace::Affine { .. } => AmbientSpace::Affine { dim: idx.len() },
            AmbientSpace::Torus { .. } => AmbientSpace::Torus { n: idx.len() },
            AmbientSpace::SpecialLinear { .. } => {
                return Err(Error::Unsupported(
                    "coordinate projections apply to vector points, not matrix groups".into(),
                ))
            }
        };
        let v = p
            .vec_f64()
            .ok_or_else(|| Error::InvalidPoint("projection needs a vector point".into()))?;
        let mut out = Vec::with_capacity(idx.len());
        for &i in idx {
            let z = v.get(i).ok_or(Error::DimensionMismatch {
                expected: i + 1,
                got: v.len(),
            })?;
            out.push(*z);
        }
        Ok((target, Point::FloatVec(out)))
    }

    /// Exhaustion of the projected point in its target space.
    pub fn rho_of(&self, space: &AmbientSpace, p: &Point) -> Result<f64> {
        let (target, q) = self.apply(space, p)?;
        Ok(rho(&target, &q)?.value())
    }
}

impl FromStr for Projection {
    type Err = Error;

    /// Parses `coord:0` or `coord:0,2`.
    fn from_str(s: &str) -> Result<Projection> {
        let rest = s
            .strip_prefix("coord:")
            .ok_or_else(|| Error::Precondition(format!("unknown projection syntax: {s}")))?;
        let idx: std::result::Result<Vec<usize>, _> =
            rest.split(',').map(|t| t.trim().parse::<usize>()).collect();
        match idx {
            Ok(v) if !v.is_empty() => Ok(Projection::Coords(v)),
            _ => Err(Error::Precondition(format!("bad coordinate list: {s}"))),
        }
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Projection::Coords(idx) = self;
        let list: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        write!(f, "coord:{}", list.join(","))
    }
}

/// Two projections with their canonical target exhaustions; the working
/// exhaustion of the source is their sum.
#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub pi1: Projection,
    pub pi2: Projection,
}

/// Per-point certificate for the two-set partition: `rho1 + rho2`, the
/// doubled bound on the side the point landed in, and which side that was.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionCertRow {
    pub index: usize,
    pub in_first: bool,
    pub rho1: f64,
    pub rho2: f64,
    pub rho_sum: f64,
    pub bound: f64,
}

pub struct TwoTamePartition {
    pub d1: DiscreteSet,
    pub d2: DiscreteSet,
    pub indices1: Vec<usize>,
    pub indices2: Vec<usize>,
    pub certificates: Vec<PartitionCertRow>,
}

/// Split `D` into `D1 = {rho1 >= rho2}` and its complement. On `D1` the sum
/// exhaustion is at most `2 rho1`, on `D2` strictly below `2 rho2`; both
/// bounds are checked per point.
pub fn partition_two_tame(set: &DiscreteSet, pp: &ProjectionPair) -> Result<TwoTamePartition> {
    let mut indices1 = Vec::new();
    let mut indices2 = Vec::new();
    let mut certificates = Vec::new();
    for (index, p) in set.points.iter().enumerate() {
        let rho1 = pp.pi1.rho_of(&set.space, p)?;
        let rho2 = pp.pi2.rho_of(&set.space, p)?;
        let in_first = rho1 >= rho2;
        let rho_sum = rho1 + rho2;
        let bound = 2.0 * if in_first { rho1 } else { rho2 };
        if !(rho_sum <= bound) {
            return Err(Error::InternalCheck(format!(
                "partition bound failed at point {index}: {rho_sum} > {bound}"
            )));
        }
        if in_first {
            indices1.push(index);
        } else {
            indices2.push(index);
        }
        certificates.push(PartitionCertRow {
            index,
            in_first,
            rho1,
            rho2,
            rho_sum,
            bound,
        });
    }
    let pick = |idx: &[usize]| -> Vec<Point> {
        idx.iter().map(|&i| set.points[i].clone()).collect()
    };
    // subsets of a pairwise-distinct set stay pairwise distinct
    let d1 = DiscreteSet::from_deduped(
        set.space,
        pick(&indices1),
        &format!("{} (part 1)", set.label),
    )?;
    let d2 = DiscreteSet::from_deduped(
        set.space,
        pick(&indices2),
        &format!("{} (part 2)", set.label),
    )?;
    Ok(TwoTamePartition {
        d1,
        d2,
        indices1,
        indices2,
        certificates,
    })
}

/// A torus point given with its two-factor product coordinates.
#[derive(Clone, Debug)]
pub struct FactoredPoint {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitRow {
    pub index: usize,
    pub rho_r: f64,
    pub rho_s: f64,
    pub in_d_prime: bool,
    /// On the second side, `rho_s >= (rho_r + rho_s) / 2`.
    pub half_bound_ok: bool,
}

pub struct TorusSplit {
    pub d_prime: Vec<usize>,
    pub d_double: Vec<usize>,
    pub rows: Vec<SplitRow>,
    /// Separation certificate for the first factors of the first side.
    pub r_side: DiscretenessReport,
    /// Separation certificate for the second factors of the second side.
    pub s_side: DiscretenessReport,
}

fn dedup_float_points(points: Vec<Point>) -> Vec<Point> {
    let mut kept: Vec<Point> = Vec::new();
    'outer: for p in points {
        for q in &kept {
            if let (Some(a), Some(b)) = (p.vec_f64(), q.vec_f64()) {
                let d2: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum();
                if d2 < FLOAT_DISTINCTNESS * FLOAT_DISTINCTNESS {
                    continue 'outer;
                }
            }
        }
        kept.push(p);
    }
    kept
}

/// Split factored torus points by comparing the two factor exhaustions:
/// first side where `rho_R > rho_S`, second side otherwise. Certifies the
/// halving bound on the second side and the separation of the dominant
/// factors on each side.
pub fn torus_split(points: &[FactoredPoint]) -> Result<TorusSplit> {
    let (dim_r, dim_s) = match points.first() {
        Some(fp) => (fp.a.len(), fp.b.len()),
        None => (1, 1),
    };
    if dim_r == 0 || dim_s == 0 {
        return Err(Error::Precondition(
            "factored point is missing one of its factors".into(),
        ));
    }
    let space_r = AmbientSpace::Torus { n: dim_r };
    let space_s = AmbientSpace::Torus { n: dim_s };
    let mut d_prime = Vec::new();
    let mut d_double = Vec::new();
    let mut rows = Vec::new();
    let mut a_parts = Vec::new();
    let mut b_parts = Vec::new();
    for (index, fp) in points.iter().enumerate() {
        if fp.a.len() != dim_r || fp.b.len() != dim_s {
            return Err(Error::DimensionMismatch {
                expected: dim_r + dim_s,
                got: fp.a.len() + fp.b.len(),
            });
        }
        let pa = Point::FloatVec(fp.a.clone());
        let pb = Point::FloatVec(fp.b.clone());
        let rho_r = rho(&space_r, &pa)?.value();
        let rho_s = rho(&space_s, &pb)?.value();
        let in_d_prime = rho_r > rho_s;
        let half_bound_ok = in_d_prime || rho_s >= 0.5 * (rho_r + rho_s);
        if !half_bound_ok {
            return Err(Error::InternalCheck(format!(
                "halving bound failed at point {index}"
            )));
        }
        if in_d_prime {
            d_prime.push(index);
            a_parts.push(pa);
        } else {
            d_double.push(index);
            b_parts.push(pb);
        }
        rows.push(SplitRow {
            index,
            rho_r,
            rho_s,
            in_d_prime,
            half_bound_ok,
        });
    }
    let r_set = DiscreteSet::from_deduped(space_r, dedup_float_points(a_parts), "split r-side")?;
    let s_set = DiscreteSet::from_deduped(space_s, dedup_float_points(b_parts), "split s-side")?;
    Ok(TorusSplit {
        d_prime,
        d_double,
        rows,
        r_side: certify_discrete(&r_set, f64::INFINITY)?,
        s_side: certify_discrete(&s_set, f64::INFINITY)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProperMapRow {
    pub radius: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProperMapReport {
    pub rows: Vec<ProperMapRow>,
    pub monotone: bool,
    pub total: usize,
}

/// Finite-truncation properness table: for each radius, how many points
/// project into the target ball of that radius. Radii are reported in
/// ascending order; the counts must then be non-decreasing.
pub fn verify_proper_on_part(
    set: &DiscreteSet,
    projection: &Projection,
    radii: &[f64],
) -> Result<ProperMapReport> {
    let target_rhos: Vec<f64> = set
        .points
        .iter()
        .map(|p| projection.rho_of(&set.space, p))
        .collect::<Result<_>>()?;
    let mut sorted = radii.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let rows: Vec<ProperMapRow> = sorted
        .iter()
        .map(|&radius| ProperMapRow {
            radius,
            count: target_rhos.iter().filter(|t| **t <= radius).count(),
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[0].count <= w[1].count);
    if !monotone {
        return Err(Error::InternalCheck(
            "ball counts decreased with growing radius".into(),
        ));
    }
    Ok(ProperMapReport {
        rows,
        monotone,
        total: set.len(),
    })
}

/// A surjective torus morphism `(C^*)^n -> (C^*)^(n-1)` recorded by its
/// integer exponent matrix: row `r` of the matrix gives the Laurent monomial
/// `prod_i z_i^(m[r][i])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusMorphism {
    pub exponents: Vec<Vec<i64>>,
}

fn rational_matrix(rows: &[Vec<i64>]) -> Matrix<BigRational> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&e| BigRational::from_integer(BigInt::from(e)))
                    .collect()
            })
            .collect(),
    )
}

impl TorusMorphism {
    pub fn new(exponents: Vec<Vec<i64>>) -> Result<TorusMorphism> {
        let rows = exponents.len();
        if rows == 0 || exponents.iter().any(|r| r.len() != rows + 1) {
            return Err(Error::Precondition(
                "exponent matrix must have shape (n-1) x n with n >= 2".into(),
            ));
        }
        if rational_matrix(&exponents).rank() != rows {
            return Err(Error::Precondition(
                "exponent matrix must have full row rank".into(),
            ));
        }
        Ok(TorusMorphism { exponents })
    }

    /// Source dimension `n`.
    pub fn n(&self) -> usize {
        self.exponents.len() + 1
    }

    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: z.len(),
            });
        }
        if z.iter().any(|w| w.norm() == 0.0) {
            return Err(Error::Precondition("torus coordinate is zero".into()));
        }
        Ok(self
            .exponents
            .iter()
            .map(|row| {
                row.iter()
                    .zip(z)
                    .map(|(&e, w)| w.powi(e as i32))
                    .product()
            })
            .collect())
    }

    /// The primitive integer generator of the rank-one kernel of the
    /// exponent matrix, sign-normalized so its first nonzero entry is
    /// positive. Pushing a point along this direction in log coordinates
    /// leaves the morphism value exactly unchanged.
    pub fn kernel_direction(&self) -> Result<Vec<i64>> {
        let kernel = rational_matrix(&self.exponents).kernel();
        if kernel.len() != 1 {
            return Err(Error::InternalCheck(format!(
                "full-row-rank exponent matrix has kernel dimension {}",
                kernel.len()
            )));
        }
        let mut v = clear_denominators(&kernel[0]);
        if let Some(first) = v.iter().find(|x| **x != 0) {
            if *first < 0 {
                for x in &mut v {
                    *x = -*x;
                }
            }
        }
        Ok(v)
    }
}

/// Advance a flat exponent tuple over `[-m, m]^len` in lexicographic order.
fn next_tuple(v: &mut [i64], lo: i64, hi: i64) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] < hi {
            v[i] += 1;
            for x in &mut v[i + 1..] {
                *x = lo;
            }
            return true;
        }
    }
    false
}

/// Deterministically enumerate the first `count` surjective torus morphisms
/// `(C^*)^n -> (C^*)^(n-1)`: exponent matrices ordered by max-abs entry,
/// then lexicographically over their row-major entries, keeping those of
/// full row rank.
pub fn enumerate_morphisms(n: usize, count: usize) -> Result<Vec<TorusMorphism>> {
    if n < 2 {
        return Err(Error::Precondition("need n >= 2 for torus morphisms".into()));
    }
    let rows = n - 1;
    let entries = rows * n;
    let mut found = Vec::with_capacity(count);
    let mut examined: u64 = 0;
    let mut shell: i64 = 1;
    while found.len() < count {
        let mut flat = vec![-shell; entries];
        loop {
            examined += 1;
            if examined > 10_000_000 {
                return Err(Error::Precondition(
                    "morphism enumeration budget exceeded; reduce the requested count".into(),
                ));
            }
            // tuples whose max-abs entry is below the shell were already
            // produced by an earlier shell
            if flat.iter().any(|e| e.abs() == shell) {
                let mat: Vec<Vec<i64>> =
                    flat.chunks(n).map(|chunk| chunk.to_vec()).collect();
                if rational_matrix(&mat).rank() == rows {
                    found.push(TorusMorphism { exponents: mat });
                    if found.len() == count {
                        return Ok(found);
                    }
                }
            }
            if !next_tuple(&mut flat, -shell, shell) {
                break;
            }
        }
        shell += 1;
    }
    Ok(found)
}

fn cantor_unpair(i: u64) -> (u64, u64) {
    let w = ((8 * i + 1).isqrt() - 1) / 2;
    let r = i - w * (w + 1) / 2;
    (w - r, r)
}

/// Van der Corput radical inverse in base 2, as (numerator, denominator).
fn van_der_corput(mut v: u64) -> (u64, u64) {
    let mut num = 0;
    let mut den = 1;
    while v > 0 {
        num = 2 * num + (v & 1);
        den *= 2;
        v >>= 1;
    }
    (num, den)
}

/// The `i`-th value of the per-factor sample list: a dyadic radius times a
/// root of unity, interleaved so that every prefix mixes radii and phases.
/// The list is a pure function of the index, so growing the density only
/// appends values.
pub fn sample_value(i: u64) -> Complex64 {
    let (u, v) = cantor_unpair(i);
    let exp = if u == 0 {
        0
    } else if u % 2 == 1 {
        ((u + 1) / 2) as i32
    } else {
        -((u / 2) as i32)
    };
    let radius = 2f64.powi(exp);
    let (num, den) = van_der_corput(v);
    let angle = 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
    Complex64::from_polar(radius, angle)
}

/// The first `needed` sample targets in `(C^*)^dim` whose per-factor indices
/// stay below `density`: multi-indices ordered by their maximum entry, then
/// lexicographically, so the list is a prefix of any higher-density list.
pub fn sample_targets(dim: usize, density: usize, needed: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(needed);
    for shell in 0..density {
        if out.len() >= needed {
            break;
        }
        let s = shell as i64;
        let mut idx = vec![0i64; dim];
        loop {
            if idx.iter().any(|&x| x == s) {
                out.push(idx.iter().map(|&x| sample_value(x as u64)).collect());
                if out.len() >= needed {
                    break;
                }
            }
            if !next_tuple(&mut idx, 0, s) {
                break;
            }
        }
    }
    out
}

/// Diagonal pairing over (morphism index, target index): anti-diagonals of
/// constant `j + t` walked with `j` ascending, restricted to `j < j_count`.
/// Independent of any density cap, so prefixes are stable.
pub fn zeta_pairs(j_count: usize, k_count: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(k_count);
    let mut d = 0usize;
    while pairs.len() < k_count {
        for j in 0..=d.min(j_count - 1) {
            pairs.push((j, d - j));
            if pairs.len() == k_count {
                break;
            }
        }
        d += 1;
    }
    pairs
}

/// Solve `F(g) = target` in logarithmic coordinates: returns `w` with
/// `exp(w)` on the requested fiber, using the principal logarithm of each
/// target coordinate and zeroing the first coordinate whose column can be
/// dropped without losing rank.
pub fn solve_log_fiber(m: &TorusMorphism, target: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = m.n();
    if target.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: target.len(),
        });
    }
    if target.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Precondition("target coordinate is zero".into()));
    }
    let log_target: Vec<Complex64> = target
        .iter()
        .map(|z| Complex64::new(z.norm().ln(), z.arg()))
        .collect();
    // first column whose removal keeps the matrix invertible (exact check)
    let drop = (0..n)
        .find(|&d| {
            let sub: Vec<Vec<i64>> = m
                .exponents
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(i, _)| *i != d)
                        .map(|(_, &e)| e)
                        .collect()
                })
                .collect();
            !rational_matrix(&sub).determinant().is_zero()
        })
        .ok_or_else(|| {
            Error::InternalCheck("no droppable column in a full-rank matrix".into())
        })?;
    let sub_f: Vec<Vec<Complex64>> = m
        .exponents
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &e)| Complex64::new(e as f64, 0.0))
                .collect()
        })
        .collect();
    let w_sub = Matrix::from_rows(sub_f).solve(&log_target)?;
    let mut w = Vec::with_capacity(n);
    let mut it = w_sub.into_iter();
    for i in 0..n {
        if i == drop {
            w.push(Complex64::new(0.0, 0.0));
        } else {
            w.push(it.next().expect("one solved coordinate per kept column"));
        }
    }
    Ok(w)
}

/// Starting from log coordinates `w`, move along the morphism's kernel
/// direction until the torus exhaustion reaches `bound`, bracketing then
/// bisecting the crossing. The morphism value is unchanged by the push.
pub fn push_to_exhaustion(
    m: &TorusMorphism,
    w: &[Complex64],
    bound: f64,
) -> Result<Vec<Complex64>> {
    let n = m.n();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    let u = m.kernel_direction()?;
    let point_at = |t: f64| -> Vec<Complex64> {
        w.iter()
            .zip(&u)
            .map(|(wi, &ui)| (wi + Complex64::new(t * ui as f64, 0.0)).exp())
            .collect()
    };
    let space = AmbientSpace::Torus { n };
    let rho_at = |t: f64| -> Result<f64> {
        Ok(rho(&space, &Point::FloatVec(point_at(t)))?.value())
    };
    if rho_at(0.0)? >= bound {
        return Ok(point_at(0.0));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while rho_at(hi)? < bound {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::InternalCheck(
                "exhaustion failed to grow along the kernel direction".into(),
            ));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if rho_at(mid)? >= bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let g = point_at(hi);
    if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("pushed torus point overflowed".into()));
    }
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexamplePointRow {
    /// 1-based point index.
    pub k: usize,
    pub morphism: usize,
    pub target: usize,
    pub rho: f64,
    pub bound: f64,
    /// Distance of the morphism value from the assigned target.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProximityRow {
    pub morphism: usize,
    pub target: usize,
    pub distance: f64,
    pub within_epsilon: bool,
}

pub struct TorusCounterexample {
    pub set: DiscreteSet,
    pub morphisms: Vec<TorusMorphism>,
    pub rows: Vec<CounterexamplePointRow>,
    pub proximity: Vec<ProximityRow>,
    pub proximity_ok: bool,
    /// First threshold index the generated set violates; `None` means the
    /// prefix satisfies the whole threshold condition.
    pub threshold_violation: Option<usize>,
}

fn euclid(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Generate the first `k_count` points of a torus sequence that (a) stays
/// below the threshold sequence — the k-th point has exhaustion at least
/// `max(k, R_k)` — while (b) its images under each of the first `j_count`
/// canonical surjective morphisms pass within `PROXIMITY_EPSILON` of the
/// leading sample targets. Point `k` is placed on the fiber of morphism `j`
/// over sample target `t`, with `(j, t)` running through the diagonal
/// pairing, then pushed along the morphism's kernel until its exhaustion
/// clears the bound.
pub fn torus_counterexample(
    n: usize,
    thresholds: &ThresholdSequence,
    j_count: usize,
    target_density: usize,
    k_count: usize,
) -> Result<TorusCounterexample> {
    if n < 2 {
        return Err(Error::Precondition("need n >= 2".into()));
    }
    if j_count == 0 || target_density == 0 {
        return Err(Error::Precondition(
            "need at least one morphism and a positive target density".into(),
        ));
    }
    if thresholds.len() < k_count {
        return Err(Error::Precondition(format!(
            "need a threshold for each point: {} thresholds < {} points",
            thresholds.len(),
            k_count
        )));
    }
    let morphisms = enumerate_morphisms(n, j_count)?;
    let pairs = zeta_pairs(j_count, k_count);
    let max_t = pairs.iter().map(|&(_, t)| t + 1).max().unwrap_or(0);
    let capacity = (target_density as u128)
        .checked_pow((n - 1) as u32)
        .unwrap_or(u128::MAX);
    if (max_t as u128) > capacity {
        return Err(Error::Precondition(format!(
            "prefix needs {max_t} sample targets but density {target_density} caps the \
             per-factor grid at {capacity}; raise the target density"
        )));
    }
    let cert_targets = PROXIMITY_TARGETS.min(capacity.min(usize::MAX as u128) as usize);
    let targets = sample_targets(n - 1, target_density, max_t.max(cert_targets));
    let mut points = Vec::with_capacity(k_count);
    let mut rows = Vec::with_capacity(k_count);
    for (k0, &(j, t)) in pairs.iter().enumerate() {
        let morphism = &morphisms[j];
        let target = &targets[t];
        let w = solve_log_fiber(morphism, target)?;
        let bound = ((k0 + 1) as f64).max(thresholds.values()[k0]);
        let g = push_to_exhaustion(morphism, &w, bound)?;
        let rho_val = rho(&AmbientSpace::Torus { n }, &Point::FloatVec(g.clone()))?.value();
        let residual = euclid(&morphism.apply(&g)?, target);
        rows.push(CounterexamplePointRow {
            k: k0 + 1,
            morphism: j,
            target: t,
            rho: rho_val,
            bound,
            residual,
        });
        points.push(Point::FloatVec(g));
    }
    let set = DiscreteSet::from_points(
        AmbientSpace::Torus { n },
        points,
        "cstar-counterexample",
    )?;
    let mut proximity = Vec::new();
    if k_count > 0 {
        let images: Vec<Vec<Vec<Complex64>>> = morphisms
            .iter()
            .map(|m| {
                set.points
                    .iter()
                    .map(|p| m.apply(&p.vec_f64().expect("torus points are vectors")))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        for (j, per_morphism) in images.iter().enumerate() {
            for (t, target) in targets.iter().take(cert_targets).enumerate() {
                let distance = per_morphism
                    .iter()
                    .map(|img| euclid(img, target))
                    .fold(f64::INFINITY, f64::min);
                proximity.push(ProximityRow {
                    morphism: j,
                    target: t,
                    distance,
                    within_epsilon: distance <= PROXIMITY_EPSILON,
                });
            }
        }
    }
    let proximity_ok = proximity.iter().all(|r| r.within_epsilon);
    let threshold_violation = check_threshold_condition(&set, thresholds)?;
    Ok(TorusCounterexample {
        set,
        morphisms,
        rows,
        proximity,
        proximity_ok,
        threshold_violation,
    })
}
