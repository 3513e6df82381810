//! Imaginary-quadratic integer rings, their complex embeddings, and
//! denominator-clearing integrality certificates for polynomial maps.
//!
//! Supported rings are the class-number-one choices `d in {1, 2, 3, 7, 11}`
//! with integral basis `(1, omega)`, where `omega = sqrt(-d)` for
//! `d = 1, 2` and `omega = (1 + sqrt(-d))/2` for `d = 3, 7, 11`
//! (`d = 3 mod 4`). Everything here is exact: elements embed into numbers
//! of the form `a + b sqrt(d) i` with rational `a, b`, and integrality
//! claims are decided without floats.

use crate::error::{Error, Result};
use crate::exact::GaussianRational;
use crate::sl2::GroupBall;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub const SUPPORTED_D: [u32; 5] = [1, 2, 3, 7, 11];

/// One of the supported imaginary-quadratic rings, keyed by squarefree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ring {
    pub d: u32,
}

impl Ring {
    pub fn new(d: u32) -> Result<Ring> {
        if SUPPORTED_D.contains(&d) {
            Ok(Ring { d })
        } else {
            Err(Error::Precondition(format!(
                "unsupported ring d = {d}; supported: {SUPPORTED_D:?}"
            )))
        }
    }

    /// Half-integer basis (`omega = (1 + sqrt(-d))/2`) when `d = 3 mod 4`.
    pub fn half_basis(&self) -> bool {
        self.d % 4 == 3
    }

    /// In the whole basis `omega^2 = -d`; in the half basis
    /// `omega^2 = omega - (1 + d)/4`.
    fn omega_sq_rule(&self) -> (BigInt, BigInt) {
        // omega^2 = p + q*omega
        if self.half_basis() {
            (-BigInt::from((1 + self.d) / 4), BigInt::one())
        } else {
            (-BigInt::from(self.d), BigInt::zero())
        }
    }
}

/// Exact number of the form `re + rad * sqrt(d) * i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymComplex {
    pub d: u32,
    pub re: BigRational,
    pub rad: BigRational,
}

impl SymComplex {
    pub fn add(&self, o: &SymComplex) -> SymComplex {
        assert_eq!(self.d, o.d);
        SymComplex {
            d: self.d,
            re: &self.re + &o.re,
            rad: &self.rad + &o.rad,
        }
    }

    pub fn mul(&self, o: &SymComplex) -> SymComplex {
        assert_eq!(self.d, o.d);
        let d = BigRational::from_integer(BigInt::from(self.d));
        SymComplex {
            d: self.d,
            re: &self.re * &o.re - &d * &self.rad * &o.rad,
            rad: &self.re * &o.rad + &self.rad * &o.re,
        }
    }

    pub fn sub(&self, o: &SymComplex) -> SymComplex {
        assert_eq!(self.d, o.d);
        SymComplex {
            d: self.d,
            re: &self.re - &o.re,
            rad: &self.rad - &o.rad,
        }
    }

    /// `|re + rad sqrt(d) i|^2 = re^2 + d rad^2`, exactly.
    pub fn norm_sqr(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.d));
        &self.re * &self.re + d * &self.rad * &self.rad
    }

    pub fn to_c64(&self) -> Complex64 {
        let to_f = |r: &BigRational| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
        Complex64::new(to_f(&self.re), to_f(&self.rad) * (self.d as f64).sqrt())
    }
}

/// `x + y omega` with integer coordinates in the integral basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticInteger {
    pub ring: Ring,
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadraticInteger {
    pub fn new(ring: Ring, x: impl Into<BigInt>, y: impl Into<BigInt>) -> QuadraticInteger {
        QuadraticInteger {
            ring,
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero(ring: Ring) -> QuadraticInteger {
        Self::new(ring, 0, 0)
    }

    pub fn one(ring: Ring) -> QuadraticInteger {
        Self::new(ring, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &QuadraticInteger) -> QuadraticInteger {
        assert_eq!(self.ring, o.ring);
        Self::new(self.ring, &self.x + &o.x, &self.y + &o.y)
    }

    pub fn neg(&self) -> QuadraticInteger {
        Self::new(self.ring, -&self.x, -&self.y)
    }

    pub fn mul(&self, o: &QuadraticInteger) -> QuadraticInteger {
        assert_eq!(self.ring, o.ring);
        // (x1 + y1 w)(x2 + y2 w) = x1x2 + (x1y2 + y1x2) w + y1y2 w^2,
        // with w^2 = p + q w
        let (p, q) = self.ring.omega_sq_rule();
        let yy = &self.y * &o.y;
        Self::new(
            self.ring,
            &self.x * &o.x + &p * &yy,
            &self.x * &o.y + &self.y * &o.x + &q * &yy,
        )
    }

    pub fn to_rational(&self) -> QuadraticRational {
        QuadraticRational {
            ring: self.ring,
            x: BigRational::from_integer(self.x.clone()),
            y: BigRational::from_integer(self.y.clone()),
        }
    }

    /// The complex embedding, exactly.
    pub fn embed(&self) -> SymComplex {
        self.to_rational().embed()
    }
}

/// `x + y omega` with rational coordinates — an element of the field `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRational {
    pub ring: Ring,
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadraticRational {
    pub fn zero(ring: Ring) -> QuadraticRational {
        QuadraticRational {
            ring,
            x: BigRational::zero(),
            y: BigRational::zero(),
        }
    }

    pub fn add(&self, o: &QuadraticRational) -> QuadraticRational {
        assert_eq!(self.ring, o.ring);
        QuadraticRational {
            ring: self.ring,
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }

    pub fn sub(&self, o: &QuadraticRational) -> QuadraticRational {
        assert_eq!(self.ring, o.ring);
        QuadraticRational {
            ring: self.ring,
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }

    pub fn mul(&self, o: &QuadraticRational) -> QuadraticRational {
        assert_eq!(self.ring, o.ring);
        let (p, q) = self.ring.omega_sq_rule();
        let p = BigRational::from_integer(p);
        let q = BigRational::from_integer(q);
        let yy = &self.y * &o.y;
        QuadraticRational {
            ring: self.ring,
            x: &self.x * &o.x + &p * &yy,
            y: &self.x * &o.y + &self.y * &o.x + &q * &yy,
        }
    }

    pub fn scale(&self, s: &BigRational) -> QuadraticRational {
        QuadraticRational {
            ring: self.ring,
            x: &self.x * s,
            y: &self.y * s,
        }
    }

    /// Integral iff both coordinates over the integral basis are integers.
    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn embed(&self) -> SymComplex {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if self.ring.half_basis() {
            // x + y(1 + sqrt(-d))/2 = (x + y/2) + (y/2) sqrt(d) i
            SymComplex {
                d: self.ring.d,
                re: &self.x + &self.y * &half,
                rad: &self.y * &half,
            }
        } else {
            SymComplex {
                d: self.ring.d,
                re: self.x.clone(),
                rad: self.y.clone(),
            }
        }
    }
}

/// The minimum `|embed|` over nonzero ring elements, established by exact
/// search over the coordinate box `|x|, |y| <= 3` (which contains a
/// fundamental domain's worth of small elements for every supported ring;
/// elements outside have `|embed| > 1` by the lattice structure). The value
/// is 1 for every supported ring: 1 itself is a unit.
pub fn min_nonzero_norm(ring: Ring) -> (BigRational, f64) {
    let mut best: Option<BigRational> = None;
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            if x == 0 && y == 0 {
                continue;
            }
            let n = QuadraticInteger::new(ring, x, y).embed().norm_sqr();
            if best.as_ref().is_none_or(|b| n < *b) {
                best = Some(n);
            }
        }
    }
    let norm_sqr = best.expect("nonempty search box");
    let approx = (norm_sqr.numer().to_f64().unwrap() / norm_sqr.denom().to_f64().unwrap()).sqrt();
    (norm_sqr, approx)
}

/// One monomial of a polynomial-over-K component:
/// `(num / den) * prod_i z_i^{exponents[i]}` with a positive integer
/// denominator.
#[derive(Clone, Debug)]
pub struct PolyTerm {
    pub num: QuadraticInteger,
    pub den: BigInt,
    pub exponents: Vec<u32>,
}

/// A polynomial map `A^n -> A^m` defined over `K`, coefficients written as
/// ring integers over positive integer denominators.
#[derive(Clone, Debug)]
pub struct PolyMapOverK {
    pub ring: Ring,
    pub n_vars: usize,
    pub components: Vec<Vec<PolyTerm>>,
}

impl PolyMapOverK {
    pub fn new(ring: Ring, n_vars: usize, components: Vec<Vec<PolyTerm>>) -> Result<PolyMapOverK> {
        for comp in &components {
            for term in comp {
                if term.num.ring != ring {
                    return Err(Error::Precondition(
                        "coefficient ring mismatch in polynomial map".into(),
                    ));
                }
                if !term.den.is_positive() {
                    return Err(Error::Precondition(
                        "coefficient denominators must be positive".into(),
                    ));
                }
                if term.exponents.len() != n_vars {
                    return Err(Error::DimensionMismatch {
                        expected: n_vars,
                        got: term.exponents.len(),
                    });
                }
            }
        }
        Ok(PolyMapOverK {
            ring,
            n_vars,
            components,
        })
    }

    /// Lowest common multiple of all coefficient denominators.
    pub fn lcm_denominators(&self) -> BigInt {
        let mut n = BigInt::one();
        for comp in &self.components {
            for term in comp {
                n = num_integer::lcm(n, term.den.clone());
            }
        }
        n
    }

    pub fn eval(&self, inputs: &[QuadraticRational]) -> Result<Vec<QuadraticRational>> {
        if inputs.len() != self.n_vars {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars,
                got: inputs.len(),
            });
        }
        if let Some(bad) = inputs.iter().find(|z| z.ring != self.ring) {
            return Err(Error::Precondition(format!(
                "input ring d = {} does not match map ring d = {}",
                bad.ring.d, self.ring.d
            )));
        }
        let mut out = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            let mut acc = QuadraticRational::zero(self.ring);
            for term in comp {
                let mut v = term.num.to_rational();
                for (z, &e) in inputs.iter().zip(&term.exponents) {
                    for _ in 0..e {
                        v = v.mul(z);
                    }
                }
                let inv_den = BigRational::new(BigInt::one(), term.den.clone());
                acc = acc.add(&v.scale(&inv_den));
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// The denominator-clearing certificate: `N = lcm_denominators`, checked by
/// verifying that `N * P(sample)` is integral for every ring-integral
/// sample. A failure is an internal-consistency error — clearing the
/// denominators of a K-polynomial always lands integral inputs in
/// `(1/1) O_K`.
pub fn integrality_certificate(
    p: &PolyMapOverK,
    samples: &[Vec<QuadraticInteger>],
) -> Result<BigInt> {
    let n = p.lcm_denominators();
    let n_rat = BigRational::from_integer(n.clone());
    for sample in samples {
        let inputs: Vec<QuadraticRational> = sample.iter().map(|q| q.to_rational()).collect();
        let image = p.eval(&inputs)?;
        for coord in &image {
            if !coord.scale(&n_rat).is_integral() {
                return Err(Error::IntegralityFailure(format!(
                    "N * P(sample) has non-integral coordinate (N = {n})"
                )));
            }
        }
    }
    Ok(n)
}

/// The first-column quotient map on 2x2 matrices, `(a, b, c, d) -> (a, c)`,
/// as a polynomial map over `K` (integral coefficients, so `N = 1`).
pub fn first_column_quotient(ring: Ring) -> PolyMapOverK {
    let unit_term = |var: usize| PolyTerm {
        num: QuadraticInteger::one(ring),
        den: BigInt::one(),
        exponents: (0..4).map(|i| u32::from(i == var)).collect(),
    };
    PolyMapOverK::new(ring, 4, vec![vec![unit_term(0)], vec![unit_term(2)]])
        .expect("static first-column map is well formed")
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityReport {
    pub ring_d: u32,
    /// The denominator-clearing multiplier.
    pub n: u64,
    pub element_count: usize,
    pub distinct_images: usize,
    /// Exact minimum pairwise separation of embedded images (as f64 for
    /// reporting); infinite below two distinct images.
    pub min_separation: f64,
    pub integral: bool,
}

fn gaussian_to_quadratic(z: &GaussianRational, ring: Ring) -> QuadraticRational {
    // only valid for d = 1, where omega = i
    QuadraticRational {
        ring,
        x: z.re.clone(),
        y: z.im.clone(),
    }
}

/// Apply a quotient polynomial map to every element of an exact matrix
/// ball over the Gaussian integers, clear denominators, and certify
/// integrality plus a positive separation of the distinct images.
pub fn matrix_group_ball_integrality(
    ball: &GroupBall<GaussianRational>,
    quotient: &PolyMapOverK,
) -> Result<IntegralityReport> {
    if quotient.ring.d != 1 {
        return Err(Error::Precondition(
            "matrix balls carry Gaussian entries; the quotient map must be over d = 1".into(),
        ));
    }
    if quotient.n_vars != 4 {
        return Err(Error::Precondition(
            "quotient map must take the four matrix entries as variables".into(),
        ));
    }
    let ring = quotient.ring;
    let n = quotient.lcm_denominators();
    let n_rat = BigRational::from_integer(n.clone());
    let mut images: Vec<Vec<QuadraticRational>> = Vec::new();
    for g in &ball.elements {
        let entries = g.entries();
        if let Some(e) = entries.iter().find(|e| !e.is_gaussian_integer()) {
            return Err(Error::Precondition(format!(
                "ball entry {e} is not a Gaussian integer"
            )));
        }
        let inputs: Vec<QuadraticRational> = entries
            .iter()
            .map(|e| gaussian_to_quadratic(e, ring))
            .collect();
        let image = quotient.eval(&inputs)?;
        for coord in &image {
            if !coord.scale(&n_rat).is_integral() {
                return Err(Error::IntegralityFailure(format!(
                    "ball image has non-integral coordinate after clearing N = {n}"
                )));
            }
        }
        if !images.contains(&image) {
            images.push(image);
        }
    }
    let mut min_sep_sqr: Option<BigRational> = None;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let d2: BigRational = images[i]
                .iter()
                .zip(&images[j])
                .map(|(a, b)| a.sub(b).embed().norm_sqr())
                .sum();
            if min_sep_sqr.as_ref().is_none_or(|m| d2 < *m) {
                min_sep_sqr = Some(d2);
            }
        }
    }
    let min_separation = min_sep_sqr
        .map(|m| (m.numer().to_f64().unwrap() / m.denom().to_f64().unwrap()).sqrt())
        .unwrap_or(f64::INFINITY);
    Ok(IntegralityReport {
        ring_d: ring.d,
        n: n.to_u64().ok_or(Error::ExactOverflow)?,
        element_count: ball.elements.len(),
        distinct_images: images.len(),
        min_separation,
        integral: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::{enumerate_ball, Sl2};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(d: u32) -> Ring {
        Ring::new(d).unwrap()
    }

    #[test]
    fn ring_validation() {
        for d in SUPPORTED_D {
            assert!(Ring::new(d).is_ok());
        }
        for d in [0u32, 4, 5, 6, 10, 13] {
            assert!(Ring::new(d).is_err(), "d = {d} should be rejected");
        }
    }

    #[test]
    fn embedding_frozen_values() {
        // d = 1: 1 -> 1, omega -> i
        let one = QuadraticInteger::new(ring(1), 1, 0).embed();
        assert_eq!(one.re, BigRational::one());
        assert!(one.rad.is_zero());
        let i = QuadraticInteger::new(ring(1), 0, 1).embed();
        assert!(i.re.is_zero());
        assert_eq!(i.rad, BigRational::one());
        assert!((i.to_c64() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // d = 3: omega = (1 + sqrt(-3))/2, norm exactly 1
        let w = QuadraticInteger::new(ring(3), 0, 1).embed();
        assert_eq!(w.re, BigRational::new(BigInt::one(), BigInt::from(2)));
        assert_eq!(w.norm_sqr(), BigRational::one());
        let c = w.to_c64();
        assert!((c.re - 0.5).abs() < 1e-15);
        assert!((c.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn embed_is_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in SUPPORTED_D {
            let r = ring(d);
            for _ in 0..500 {
                let a = QuadraticInteger::new(
                    r,
                    rng.gen_range(-50i64..=50),
                    rng.gen_range(-50i64..=50),
                );
                let b = QuadraticInteger::new(
                    r,
                    rng.gen_range(-50i64..=50),
                    rng.gen_range(-50i64..=50),
                );
                assert_eq!(a.add(&b).embed(), a.embed().add(&b.embed()));
                assert_eq!(a.mul(&b).embed(), a.embed().mul(&b.embed()));
            }
        }
    }

    #[test]
    fn min_norm_is_one_for_all_rings() {
        for d in SUPPORTED_D {
            let (norm_sqr, approx) = min_nonzero_norm(ring(d));
            assert_eq!(norm_sqr, BigRational::one(), "d = {d}");
            assert!((approx - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn distinct_elements_separated_by_min_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for d in SUPPORTED_D {
            let r = ring(d);
            let one = BigRational::one();
            for _ in 0..200 {
                let a = QuadraticInteger::new(
                    r,
                    rng.gen_range(-30i64..=30),
                    rng.gen_range(-30i64..=30),
                );
                let b = QuadraticInteger::new(
                    r,
                    rng.gen_range(-30i64..=30),
                    rng.gen_range(-30i64..=30),
                );
                if a == b {
                    continue;
                }
                let diff = a.add(&b.neg()).embed().norm_sqr();
                assert!(diff >= one, "d = {d}: separation^2 {diff} < 1");
            }
        }
    }

    fn var_term(r: Ring, var: usize, n_vars: usize, num: i64, den: i64, power: u32) -> PolyTerm {
        PolyTerm {
            num: QuadraticInteger::new(r, num, 0),
            den: BigInt::from(den),
            exponents: (0..n_vars)
                .map(|i| if i == var { power } else { 0 })
                .collect(),
        }
    }

    #[test]
    fn lcm_denominators_examples() {
        let r = ring(1);
        // z^2: integral coefficients
        let square =
            PolyMapOverK::new(r, 1, vec![vec![var_term(r, 0, 1, 1, 1, 2)]]).unwrap();
        assert_eq!(square.lcm_denominators(), BigInt::one());
        // z/2 + z^2/3: N = 6, and 6 * P(1) = 5
        let mixed = PolyMapOverK::new(
            r,
            1,
            vec![vec![var_term(r, 0, 1, 1, 2, 1), var_term(r, 0, 1, 1, 3, 2)]],
        )
        .unwrap();
        assert_eq!(mixed.lcm_denominators(), BigInt::from(6));
        let image = mixed
            .eval(&[QuadraticInteger::one(r).to_rational()])
            .unwrap();
        let scaled = image[0].scale(&BigRational::from_integer(BigInt::from(6)));
        assert!(scaled.is_integral());
        assert_eq!(scaled.x, BigRational::from_integer(BigInt::from(5)));
        // (z/2, w/2): N = 2
        let pair = PolyMapOverK::new(
            r,
            2,
            vec![
                vec![var_term(r, 0, 2, 1, 2, 1)],
                vec![var_term(r, 1, 2, 1, 2, 1)],
            ],
        )
        .unwrap();
        assert_eq!(pair.lcm_denominators(), BigInt::from(2));
    }

    #[test]
    fn integrality_certificate_on_samples() {
        let r = ring(3);
        let p = PolyMapOverK::new(
            r,
            1,
            vec![vec![var_term(r, 0, 1, 1, 2, 1), var_term(r, 0, 1, 1, 3, 2)]],
        )
        .unwrap();
        let samples: Vec<Vec<QuadraticInteger>> = (-4i64..=4)
            .flat_map(|x| (-4i64..=4).map(move |y| (x, y)))
            .map(|(x, y)| vec![QuadraticInteger::new(r, x, y)])
            .collect();
        let n = integrality_certificate(&p, &samples).unwrap();
        assert_eq!(n, BigInt::from(6));
    }

    #[test]
    fn polynomial_rejects_bad_data() {
        let r = ring(1);
        let bad_den = PolyTerm {
            num: QuadraticInteger::one(r),
            den: BigInt::from(-2),
            exponents: vec![1],
        };
        assert!(PolyMapOverK::new(r, 1, vec![vec![bad_den]]).is_err());
        let wrong_ring = PolyTerm {
            num: QuadraticInteger::one(ring(3)),
            den: BigInt::one(),
            exponents: vec![1],
        };
        assert!(PolyMapOverK::new(r, 1, vec![vec![wrong_ring]]).is_err());
    }

    fn gaussian_ball(max_len: usize) -> GroupBall<GaussianRational> {
        let gq = |re: i64, im: i64| GaussianRational::from_ints(re, im);
        let s = Sl2::new(gq(0, 0), gq(-1, 0), gq(1, 0), gq(0, 0)).unwrap();
        let t = Sl2::new(gq(1, 0), gq(1, 0), gq(0, 0), gq(1, 0)).unwrap();
        let ti = Sl2::new(gq(1, 0), gq(0, 1), gq(0, 0), gq(1, 0)).unwrap();
        enumerate_ball(&[s, t, ti], max_len).unwrap()
    }

    #[test]
    fn ball_first_column_integrality() {
        let ball = gaussian_ball(4);
        let quotient = first_column_quotient(ring(1));
        let report = matrix_group_ball_integrality(&ball, &quotient).unwrap();
        assert_eq!(report.n, 1);
        assert!(report.integral);
        assert!(report.min_separation >= 1.0 - 1e-12);
        assert!(report.distinct_images > 1);
    }

    #[test]
    fn ball_halved_quotient_needs_n_two() {
        let r = ring(1);
        let halved = PolyMapOverK::new(
            r,
            4,
            vec![
                vec![var_term(r, 0, 4, 1, 2, 1)],
                vec![var_term(r, 2, 4, 1, 2, 1)],
            ],
        )
        .unwrap();
        let ball = gaussian_ball(3);
        let report = matrix_group_ball_integrality(&ball, &halved).unwrap();
        assert_eq!(report.n, 2);
        assert!(report.integral);
    }

    #[test]
    fn empty_ball_is_vacuous() {
        let empty = GroupBall::<GaussianRational> {
            generators: vec![],
            elements: vec![],
            words: vec![],
            max_word_length: 0,
            flagged_overflow: 0,
        };
        let report =
            matrix_group_ball_integrality(&empty, &first_column_quotient(ring(1))).unwrap();
        assert_eq!(report.element_count, 0);
        assert_eq!(report.distinct_images, 0);
        assert_eq!(report.min_separation, f64::INFINITY);
        assert!(report.integral);
    }

    #[test]
    fn nonintegral_ball_entries_rejected() {
        let half = GaussianRational::from_ratios(1, 2, 0, 1);
        let two = GaussianRational::from_ints(2, 0);
        let g = Sl2::new(two, GaussianRational::zero(), GaussianRational::zero(), half).unwrap();
        let ball = enumerate_ball(&[g], 1).unwrap();
        assert!(matrix_group_ball_integrality(&ball, &first_column_quotient(ring(1))).is_err());
    }
}
