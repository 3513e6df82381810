//! Small dense linear algebra over an abstract field, instantiated with
//! `BigRational` / `GaussianRational` (exact) and `Complex64` (float).
//!
//! Everything here is desk scale: matrices stay below a few hundred entries,
//! so plain Gaussian elimination with either exact or partial pivoting is the
//! right tool.

use crate::error::{Error, Result};
use crate::exact::GaussianRational;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations needed by the elimination routines. `magnitude` drives
/// pivot selection and tolerance checks; exact fields report an exact
/// `is_zero` while the float field uses magnitudes.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division; caller guarantees the divisor passed pivot selection.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    /// Whether a value of this magnitude counts as a zero pivot.
    fn is_pivot_zero(&self, scale: f64) -> bool;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
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
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn is_pivot_zero(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
}

impl Field for GaussianRational {
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
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm_sqr().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
    fn is_pivot_zero(&self, _scale: f64) -> bool {
        GaussianRational::is_zero(self)
    }
}

impl Field for Complex64 {
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
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_pivot_zero(&self, scale: f64) -> bool {
        self.norm() <= 1e-12 * (1.0 + scale)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![F::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn at(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn matmul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a.mul(o.at(k, j));
                    *out.at_mut(i, j) = out.at(i, j).add(&t);
                }
            }
        }
        out
    }

    pub fn sub_mat(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Matrix::new(self.rows, self.cols, data)
    }

    pub fn pow(&self, e: usize) -> Matrix<F> {
        assert_eq!(self.rows, self.cols, "pow needs square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    fn scale_estimate(&self) -> f64 {
        self.max_magnitude()
    }

    /// Row echelon reduction in place; returns pivot column list.
    fn echelon(&mut self) -> Vec<usize> {
        let scale = self.scale_estimate();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // choose the largest-magnitude usable pivot in this column
            let mut best: Option<(usize, f64)> = None;
            for i in r..self.rows {
                let m = self.at(i, c).magnitude();
                if !self.at(i, c).is_pivot_zero(scale) && best.map_or(true, |(_, bm)| m > bm) {
                    best = Some((i, m));
                }
            }
            let Some((p, _)) = best else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, p * self.cols + j);
                }
            }
            let inv_pivot = F::one().div(self.at(r, c));
            for j in c..self.cols {
                *self.at_mut(r, j) = self.at(r, j).mul(&inv_pivot);
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let t = f.mul(self.at(r, j));
                        *self.at_mut(i, j) = self.at(i, j).sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon().len()
    }

    /// Basis of the right kernel `{v : Av = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                // row ri reads: x_pc + sum over free columns of coeff * x_free = 0
                v[pc] = m.at(ri, fc).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant needs square matrix");
        let scale = self.scale_estimate();
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for i in c..n {
                let mag = m.at(i, c).magnitude();
                if !m.at(i, c).is_pivot_zero(scale) && best.map_or(true, |(_, bm)| mag > bm) {
                    best = Some((i, mag));
                }
            }
            let Some((p, _)) = best else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = det.neg();
            }
            det = det.mul(m.at(c, c));
            let inv_pivot = F::one().div(m.at(c, c));
            for i in (c + 1)..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).mul(&inv_pivot);
                for j in c..n {
                    let t = f.mul(m.at(c, j));
                    *m.at_mut(i, j) = m.at(i, j).sub(&t);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix<F>> {
        assert_eq!(self.rows, self.cols, "inverse needs square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = F::one();
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    /// Solve `Ax = b` for square invertible `A`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>> {
        assert_eq!(self.rows, b.len(), "solve rhs length");
        assert_eq!(self.rows, self.cols, "solve needs square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n) = b[i].clone();
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::SingularMatrix);
        }
        Ok((0..n).map(|i| aug.at(i, n).clone()).collect())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Largest entry magnitude is at most `tol`.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.max_magnitude() <= tol
    }
}
