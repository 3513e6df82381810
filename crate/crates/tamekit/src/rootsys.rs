//! Root systems of the classical families, the two-subgroup basis
//! construction attached to a pair of simple roots, and the nil-cone
//! spanning family for `sl_n`.
//!
//! Roots live in the standard coordinate realizations (family A in
//! `R^{rank+1}`, families B/C/D in `R^rank`) as integer vectors, with
//! positivity decided lexicographically. Family A additionally carries a
//! faithful matrix realization in `sl_{rank+1}` used to certify that the
//! two constructed subalgebras span.

use crate::error::{Error, Result};
use crate::exact::GaussianRational;
use crate::linalg::{Field, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            other => Err(Error::Precondition(format!(
                "unknown family {other:?}; expected A, B, C, or D"
            ))),
        }
    }
}

pub type RootVec = Vec<i64>;

#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// Dimension of the coordinate realization (`rank + 1` for A).
    pub coord_dim: usize,
    pub simple_roots: Vec<RootVec>,
    /// Lexicographically positive roots, sorted lexicographically.
    pub positive_roots: Vec<RootVec>,
}

fn unit(dim: usize, i: usize, scale: i64) -> RootVec {
    let mut v = vec![0i64; dim];
    v[i] = scale;
    v
}

fn diff(dim: usize, i: usize, j: usize) -> RootVec {
    let mut v = vec![0i64; dim];
    v[i] = 1;
    v[j] = -1;
    v
}

fn sum2(dim: usize, i: usize, j: usize) -> RootVec {
    let mut v = vec![0i64; dim];
    v[i] = 1;
    v[j] = 1;
    v
}

/// Classical positive-root count per family.
pub fn classical_positive_count(family: Family, rank: usize) -> usize {
    match family {
        Family::A => rank * (rank + 1) / 2,
        Family::B | Family::C => rank * rank,
        Family::D => rank * (rank - 1),
    }
}

/// Build the root system in its standard coordinate realization.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    let min_rank = match family {
        Family::A => 1,
        Family::B | Family::C => 2,
        Family::D => 3,
    };
    if rank < min_rank {
        return Err(Error::Precondition(format!(
            "family {family} needs rank >= {min_rank}, got {rank}"
        )));
    }
    if rank > 12 {
        return Err(Error::Precondition(format!(
            "rank {rank} exceeds the desk-scale limit of 12"
        )));
    }
    let (coord_dim, simple_roots, mut positive_roots): (usize, Vec<RootVec>, Vec<RootVec>) =
        match family {
            Family::A => {
                let d = rank + 1;
                let simples = (0..rank).map(|i| diff(d, i, i + 1)).collect();
                let mut pos = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        pos.push(diff(d, i, j));
                    }
                }
                (d, simples, pos)
            }
            Family::B => {
                let d = rank;
                let mut simples: Vec<RootVec> = (0..rank - 1).map(|i| diff(d, i, i + 1)).collect();
                simples.push(unit(d, rank - 1, 1));
                let mut pos = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        pos.push(diff(d, i, j));
                        pos.push(sum2(d, i, j));
                    }
                    pos.push(unit(d, i, 1));
                }
                (d, simples, pos)
            }
            Family::C => {
                let d = rank;
                let mut simples: Vec<RootVec> = (0..rank - 1).map(|i| diff(d, i, i + 1)).collect();
                simples.push(unit(d, rank - 1, 2));
                let mut pos = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        pos.push(diff(d, i, j));
                        pos.push(sum2(d, i, j));
                    }
                    pos.push(unit(d, i, 2));
                }
                (d, simples, pos)
            }
            Family::D => {
                let d = rank;
                let mut simples: Vec<RootVec> = (0..rank - 1).map(|i| diff(d, i, i + 1)).collect();
                simples.push(sum2(d, rank - 2, rank - 1));
                let mut pos = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        pos.push(diff(d, i, j));
                        pos.push(sum2(d, i, j));
                    }
                }
                (d, simples, pos)
            }
        };
    positive_roots.sort();
    let rs = RootSystem {
        family,
        rank,
        coord_dim,
        simple_roots,
        positive_roots,
    };
    rs.validate()?;
    Ok(rs)
}

fn is_lex_positive(v: &[i64]) -> bool {
    v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

impl RootSystem {
    /// Count, positivity convention, and nonnegative-integer expansion of
    /// every positive root over the simple roots.
    pub fn validate(&self) -> Result<()> {
        let expected = classical_positive_count(self.family, self.rank);
        if self.positive_roots.len() != expected {
            return Err(Error::InternalCheck(format!(
                "{}{} has {} positive roots, expected {expected}",
                self.family,
                self.rank,
                self.positive_roots.len()
            )));
        }
        if self.simple_roots.len() != self.rank {
            return Err(Error::InternalCheck("simple root count != rank".into()));
        }
        for root in &self.positive_roots {
            if !is_lex_positive(root) {
                return Err(Error::InternalCheck(format!(
                    "positive root {root:?} is not lexicographically positive"
                )));
            }
            let coeffs = self.expansion(root)?;
            if coeffs.iter().any(|c| *c < 0) {
                return Err(Error::InternalCheck(format!(
                    "positive root {root:?} has a negative simple coefficient"
                )));
            }
        }
        Ok(())
    }

    /// Integer coefficients of `root` over the simple roots, via an exact
    /// Gram-matrix solve (the simple roots are linearly independent).
    pub fn expansion(&self, root: &[i64]) -> Result<Vec<i64>> {
        if root.len() != self.coord_dim {
            return Err(Error::DimensionMismatch {
                expected: self.coord_dim,
                got: root.len(),
            });
        }
        let r = self.rank;
        let big = |x: i64| BigRational::from_integer(BigInt::from(x));
        // Gram matrix G[a][b] = <s_a, s_b>, rhs[a] = <s_a, root>
        let mut gram = Matrix::<BigRational>::zeros(r, r);
        let mut rhs = vec![big(0); r];
        for a in 0..r {
            for b in 0..r {
                let dot: i64 = self.simple_roots[a]
                    .iter()
                    .zip(&self.simple_roots[b])
                    .map(|(x, y)| x * y)
                    .sum();
                *gram.at_mut(a, b) = big(dot);
            }
            rhs[a] = big(
                self.simple_roots[a]
                    .iter()
                    .zip(root)
                    .map(|(x, y)| x * y)
                    .sum(),
            );
        }
        let coeffs = gram.solve(&rhs)?;
        // the Gram solve is a projection: confirm the root lies in the span
        for c in 0..self.coord_dim {
            let mut acc = big(0);
            for a in 0..r {
                acc += &coeffs[a] * big(self.simple_roots[a][c]);
            }
            if acc != big(root[c]) {
                return Err(Error::Precondition(format!(
                    "{root:?} is not in the span of the simple roots"
                )));
            }
        }
        coeffs
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64().ok_or(Error::ExactOverflow)
                } else {
                    Err(Error::InternalCheck(format!(
                        "non-integer simple-root coefficient {c}"
                    )))
                }
            })
            .collect()
    }

    /// Positive roots whose expansion has coefficient 0 on the `alpha`-th
    /// simple root — the roots supported away from `alpha`.
    pub fn delta_alpha_plus(&self, alpha: usize) -> Result<Vec<RootVec>> {
        if alpha >= self.rank {
            return Err(Error::Precondition(format!(
                "simple-root index {alpha} out of range for rank {}",
                self.rank
            )));
        }
        let mut out = Vec::new();
        for root in &self.positive_roots {
            if self.expansion(root)?[alpha] == 0 {
                out.push(root.clone());
            }
        }
        Ok(out)
    }

    /// Torus directions of the coordinate realization: traceless simple
    /// coroot directions for family A, coordinate directions otherwise.
    /// A root `v` evaluates on a direction by the coordinate dot product.
    pub fn torus_basis(&self) -> Vec<RootVec> {
        match self.family {
            Family::A => (0..self.rank)
                .map(|i| diff(self.coord_dim, i, i + 1))
                .collect(),
            _ => (0..self.rank)
                .map(|i| unit(self.coord_dim, i, 1))
                .collect(),
        }
    }

    fn root_on_direction(root: &[i64], dir: &[i64]) -> i64 {
        root.iter().zip(dir).map(|(a, b)| a * b).sum()
    }

    /// Integer basis (as coefficient vectors over [`Self::torus_basis`]) of
    /// the kernel of a simple root on the torus; `rank - 1` vectors.
    pub fn torus_kernel(&self, alpha: usize) -> Result<Vec<Vec<i64>>> {
        if alpha >= self.rank {
            return Err(Error::Precondition(format!(
                "simple-root index {alpha} out of range for rank {}",
                self.rank
            )));
        }
        let basis = self.torus_basis();
        let row: Vec<BigRational> = basis
            .iter()
            .map(|t| {
                BigRational::from_integer(BigInt::from(Self::root_on_direction(
                    &self.simple_roots[alpha],
                    t,
                )))
            })
            .collect();
        let m = Matrix::new(1, self.rank, row);
        let kernel = m.kernel();
        if kernel.len() != self.rank - 1 {
            return Err(Error::InternalCheck(format!(
                "torus kernel of simple root {alpha} has dimension {}, expected {}",
                kernel.len(),
                self.rank - 1
            )));
        }
        Ok(kernel.into_iter().map(|v| clear_denominators(&v)).collect())
    }
}

/// Scale a rational vector to a primitive integer vector.
pub(crate) fn clear_denominators(v: &[BigRational]) -> Vec<i64> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for x in &scaled {
        gcd = num_integer::gcd(gcd, x.abs());
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    scaled
        .iter()
        .map(|x| (x / &gcd).to_i64().expect("small kernel coefficients"))
        .collect()
}

/// One side (H or I) of the subgroup pair: a torus part given by coefficient
/// vectors over the torus basis, plus root spaces `e_v` / `f_v`.
#[derive(Clone, Debug, Serialize)]
pub struct PairSide {
    pub torus_coeffs: Vec<Vec<i64>>,
    /// Roots `v` contributing the positive root space `e_v`.
    pub positives: Vec<RootVec>,
    /// Roots `v` contributing the negative root space `f_v`.
    pub negatives: Vec<RootVec>,
}

impl PairSide {
    pub fn label_count(&self) -> usize {
        self.torus_coeffs.len() + self.positives.len() + self.negatives.len()
    }
}

/// Bases of the two subalgebras attached to distinct simple roots:
/// `Lie H = ker(alpha) + all e_v + (f_v for v supported away from alpha)`,
/// `Lie I = ker(beta) + (e_v for v supported away from beta) + all f_v`.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupPairBasis {
    pub alpha: usize,
    pub beta: usize,
    pub lie_h: PairSide,
    pub lie_i: PairSide,
}

pub fn build_pair(rs: &RootSystem, alpha: usize, beta: usize) -> Result<SubgroupPairBasis> {
    if rs.rank < 2 {
        return Err(Error::Precondition(
            "the pair construction needs rank >= 2 (two distinct simple roots)".into(),
        ));
    }
    if alpha == beta {
        return Err(Error::Precondition(
            "the two simple roots must be distinct".into(),
        ));
    }
    if alpha >= rs.rank || beta >= rs.rank {
        return Err(Error::Precondition(format!(
            "simple-root indices ({alpha}, {beta}) out of range for rank {}",
            rs.rank
        )));
    }
    let lie_h = PairSide {
        torus_coeffs: rs.torus_kernel(alpha)?,
        positives: rs.positive_roots.clone(),
        negatives: rs.delta_alpha_plus(alpha)?,
    };
    let lie_i = PairSide {
        torus_coeffs: rs.torus_kernel(beta)?,
        positives: rs.delta_alpha_plus(beta)?,
        negatives: rs.positive_roots.clone(),
    };
    Ok(SubgroupPairBasis {
        alpha,
        beta,
        lie_h,
        lie_i,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpanCertificate {
    /// Combined label count over both sides (with multiplicity).
    pub dim_sum: usize,
    /// Exact rank of the stacked realization matrix.
    pub rank: usize,
    /// Dimension of the ambient Lie algebra (`(rank+1)^2 - 1` for family A).
    pub ambient_dim: usize,
    pub spans: bool,
}

fn gq(x: i64) -> GaussianRational {
    GaussianRational::from_ints(x, 0)
}

/// `E_ij` in `sl_{n}` as an exact matrix.
fn elementary(n: usize, i: usize, j: usize) -> Matrix<GaussianRational> {
    let mut m = Matrix::zeros(n, n);
    *m.at_mut(i, j) = gq(1);
    m
}

/// Realize a family-A root vector (`e_i - e_j`) as the matrix unit `E_ij`.
fn realize_a_root(root: &[i64], negate: bool) -> Result<Matrix<GaussianRational>> {
    let n = root.len();
    let i = root.iter().position(|c| *c == 1);
    let j = root.iter().position(|c| *c == -1);
    match (i, j) {
        (Some(i), Some(j)) if root.iter().map(|c| c.abs()).sum::<i64>() == 2 => {
            Ok(if negate {
                elementary(n, j, i)
            } else {
                elementary(n, i, j)
            })
        }
        _ => Err(Error::InternalCheck(format!(
            "{root:?} is not a family-A root vector"
        ))),
    }
}

fn realize_a_torus(coeffs: &[i64], n: usize) -> Matrix<GaussianRational> {
    // direction sum coeffs_i (E_ii - E_{i+1,i+1})
    let mut m: Matrix<GaussianRational> = Matrix::zeros(n, n);
    for (i, &c) in coeffs.iter().enumerate() {
        *m.at_mut(i, i) = m.at(i, i).clone() + gq(c);
        *m.at_mut(i + 1, i + 1) = m.at(i + 1, i + 1).clone() + gq(-c);
    }
    m
}

/// Certify that the two subalgebra bases together span the ambient Lie
/// algebra, by exact rank of their stacked `sl_{rank+1}` realizations.
/// Family A only; the other families carry combinatorics but no matrix
/// realization in this version.
pub fn verify_spanning(pair: &SubgroupPairBasis, rs: &RootSystem) -> Result<SpanCertificate> {
    if rs.family != Family::A {
        return Err(Error::Unsupported(format!(
            "matrix realization only available for family A, not {}",
            rs.family
        )));
    }
    let n = rs.rank + 1;
    let ambient_dim = n * n - 1;
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for side in [&pair.lie_h, &pair.lie_i] {
        for coeffs in &side.torus_coeffs {
            rows.push(realize_a_torus(coeffs, n).entries().to_vec());
        }
        for root in &side.positives {
            rows.push(realize_a_root(root, false)?.entries().to_vec());
        }
        for root in &side.negatives {
            rows.push(realize_a_root(root, true)?.entries().to_vec());
        }
    }
    let dim_sum = rows.len();
    let stacked = Matrix::from_rows(rows);
    let rank = stacked.rank();
    Ok(SpanCertificate {
        dim_sum,
        rank,
        ambient_dim,
        spans: rank == ambient_dim,
    })
}

/// Coordinates of a traceless `n x n` matrix over the standard basis of
/// `sl_n`: the matrix units `E_ij` (`i != j`, lexicographic) followed by the
/// diagonal directions `h_i = E_ii - E_{i+1,i+1}`. The `h`-coordinates of a
/// diagonal `(d_1, ..., d_n)` are the partial sums `d_1 + ... + d_i`.
fn sl_coordinates<F: Field>(m: &Matrix<F>, n: usize) -> Vec<F> {
    let mut coords = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                coords.push(m.at(i, j).clone());
            }
        }
    }
    let mut acc = F::zero();
    for i in 0..n - 1 {
        acc = F::add(&acc, m.at(i, i));
        coords.push(acc.clone());
    }
    coords
}

fn sl_basis<F: Field>(n: usize) -> Vec<Matrix<F>> {
    let mut basis = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Matrix::<F>::zeros(n, n);
                *m.at_mut(i, j) = F::one();
                basis.push(m);
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = Matrix::<F>::zeros(n, n);
        *m.at_mut(i, i) = F::one();
        *m.at_mut(i + 1, i + 1) = F::neg(&F::one());
        basis.push(m);
    }
    basis
}

fn bracket<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.matmul(b).sub_mat(&b.matmul(a))
}

/// The matrix of `ad(v) = [v, -]` on the standard basis of `sl_n`.
pub fn ad_matrix<F: Field>(v: &Matrix<F>) -> Result<Matrix<F>> {
    let n = v.rows;
    if v.rows != v.cols || n < 2 {
        return Err(Error::Precondition(
            "ad matrix needs a square matrix of size >= 2".into(),
        ));
    }
    let dim = n * n - 1;
    let basis = sl_basis::<F>(n);
    let mut ad = Matrix::<F>::zeros(dim, dim);
    for (col, b) in basis.iter().enumerate() {
        let coords = sl_coordinates(&bracket(v, b), n);
        for (row, c) in coords.into_iter().enumerate() {
            *ad.at_mut(row, col) = c;
        }
    }
    Ok(ad)
}

fn check_traceless<F: Field>(v: &Matrix<F>, tol: f64) -> Result<()> {
    let mut tr = F::zero();
    for i in 0..v.rows {
        tr = F::add(&tr, v.at(i, i));
    }
    let scale = 1.0 + v.max_magnitude();
    if F::magnitude(&tr) > tol * scale {
        return Err(Error::Precondition(
            "matrix must be traceless to lie in sl_n".into(),
        ));
    }
    Ok(())
}

/// Is `ad(v)` nilpotent? Tests `ad(v)^{2n} = 0` — a safe exponent bound,
/// since a nilpotent operator on a space of dimension `n^2 - 1 < (2n)^2`
/// has nilpotency index at most its dimension, and `ad` powers stabilize
/// well before that for matrix inputs. Float version: entries of the power
/// are negligible at `1e-8` relative to the input scale.
pub fn ad_nilpotent(v: &Matrix<num_complex::Complex64>) -> Result<bool> {
    check_traceless(v, 1e-12)?;
    let ad = ad_matrix(v)?;
    // normalize so the tolerance is scale-free
    let scale = ad.max_magnitude().max(1.0);
    let normed = Matrix::new(
        ad.rows,
        ad.cols,
        ad.entries()
            .iter()
            .map(|e| e / num_complex::Complex64::new(scale, 0.0))
            .collect(),
    );
    let p = normed.pow(2 * v.rows);
    Ok(p.is_negligible(1e-8))
}

/// Exact variant: `ad(v)^{2n}` must vanish identically.
pub fn ad_nilpotent_exact(v: &Matrix<GaussianRational>) -> Result<bool> {
    check_traceless(v, 0.0)?;
    let ad = ad_matrix(v)?;
    Ok(ad.pow(2 * v.rows).is_zero_matrix())
}

/// A family of `n^2 - 1` ad-nilpotent matrices spanning `sl_n`: all matrix
/// units `E_ij` (`i != j`) together with
/// `m_i = E_ii - E_{i+1,i+1} + E_{i,i+1} - E_{i+1,i}` (each `m_i^2 = 0`).
pub fn nilcone_spanning_family(n: usize) -> Result<Vec<Matrix<GaussianRational>>> {
    if n < 2 {
        return Err(Error::Precondition("need n >= 2".into()));
    }
    let mut family = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                family.push(elementary(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = Matrix::zeros(n, n);
        *m.at_mut(i, i) = gq(1);
        *m.at_mut(i + 1, i + 1) = gq(-1);
        *m.at_mut(i, i + 1) = gq(1);
        *m.at_mut(i + 1, i) = gq(-1);
        family.push(m);
    }
    Ok(family)
}

/// Exact rank of a family of `n x n` matrices viewed as vectors.
pub fn family_rank(family: &[Matrix<GaussianRational>]) -> usize {
    if family.is_empty() {
        return 0;
    }
    let rows = family.iter().map(|m| m.entries().to_vec()).collect();
    Matrix::from_rows(rows).rank()
}
