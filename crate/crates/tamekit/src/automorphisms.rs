//! Shear and overshear automorphisms of `C^n` built from finite-point
//! interpolation.
//!
//! A *shear* adds an interpolated function of a linear projection to one
//! coordinate: `z_axis += f(pi(z))` with `pi` independent of the sheared
//! axis, so the map is bijective with the obvious inverse. An *overshear*
//! additionally rescales the axis by a never-vanishing multiplier
//! `exp(lambda(pi(z)))`. Compositions of these maps carry finite point
//! configurations onto normal forms (see [`send_to_axis`]) and realize
//! prescribed affine maps on fibers (see [`prescribe_fiber_automorphisms`]).

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Seed for the deterministic separating-functional search.
pub const SEPARATION_SEED: u64 = 0x5EED;

/// Maximum random functionals tried per search before giving up.
pub const MAX_FUNCTIONAL_ATTEMPTS: usize = 64;

/// Relative margin below which projected nodes count as colliding.
pub const NODE_MARGIN: f64 = 1e-9;

/// Residual bound certified by [`send_to_axis`].
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Node-count ceiling keeping barycentric weights inside f64 range.
pub const MAX_NODES: usize = 150;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn apply_functional(coeffs: &[Complex64], point: &[Complex64]) -> Complex64 {
    coeffs.iter().zip(point).map(|(a, z)| a * z).sum()
}

/// Pairwise distinctness of projected nodes, relative to their scale.
fn nodes_separated(nodes: &[Complex64]) -> bool {
    let scale = 1.0 + nodes.iter().map(|w| w.norm()).fold(0.0, f64::max);
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).norm() <= NODE_MARGIN * scale {
                return false;
            }
        }
    }
    true
}

fn random_functional(rng: &mut ChaCha8Rng, dim: usize, skip_axis: Option<usize>) -> Vec<Complex64> {
    (0..dim)
        .map(|i| {
            if Some(i) == skip_axis {
                Complex64::new(0.0, 0.0)
            } else {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        })
        .collect()
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_vec_value(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_value(z)).collect())
}

/// Polynomial interpolation data: base points in `C^base_dim` are projected
/// to a line by a linear functional, then each target component is the
/// univariate Lagrange interpolant through the projected nodes, evaluated
/// with the barycentric formula (exact at nodes by construction).
#[derive(Clone, Debug)]
pub struct PolyMapInterpolant {
    pub base_dim: usize,
    pub target_dim: usize,
    /// The projection functional; identity `[1]` for univariate bases.
    pub functional: Vec<Complex64>,
    /// Projected nodes, pairwise distinct.
    pub nodes: Vec<Complex64>,
    /// Target vectors, one per node.
    pub values: Vec<Vec<Complex64>>,
    weights: Vec<Complex64>,
    /// Monomial coefficients per degree (each a `target_dim` vector),
    /// computed from the Newton form; kept for descriptors, not evaluation.
    pub coefficients: Vec<Vec<Complex64>>,
    /// How many random functionals the build consumed (0 = first try).
    pub functional_attempts: usize,
}

impl PolyMapInterpolant {
    /// Interpolant through `base_points[k] -> target_values[k]`. The
    /// projection functional starts as the first-coordinate projection and
    /// is re-drawn from a seeded generator on node collisions.
    pub fn build(
        base_points: &[Vec<Complex64>],
        target_values: &[Vec<Complex64>],
    ) -> Result<PolyMapInterpolant> {
        if base_points.is_empty() {
            return Err(Error::Precondition(
                "interpolation needs at least one node".into(),
            ));
        }
        if base_points.len() != target_values.len() {
            return Err(Error::DimensionMismatch {
                expected: base_points.len(),
                got: target_values.len(),
            });
        }
        let base_dim = base_points[0].len();
        let target_dim = target_values[0].len();
        if base_dim == 0
            || base_points.iter().any(|p| p.len() != base_dim)
            || target_values.iter().any(|v| v.len() != target_dim)
        {
            return Err(Error::Precondition(
                "ragged interpolation data; all base points and targets must share dimensions"
                    .into(),
            ));
        }
        for i in 0..base_points.len() {
            for j in i + 1..base_points.len() {
                if base_points[i] == base_points[j] {
                    return Err(Error::Precondition(format!(
                        "base points {i} and {j} coincide exactly"
                    )));
                }
            }
        }
        let mut functional: Vec<Complex64> = (0..base_dim)
            .map(|i| c(if i == 0 { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(SEPARATION_SEED);
        let mut attempts = 0usize;
        loop {
            let nodes: Vec<Complex64> = base_points
                .iter()
                .map(|p| apply_functional(&functional, p))
                .collect();
            if nodes_separated(&nodes) {
                return Self::univariate_with(functional, nodes, target_values.to_vec(), attempts);
            }
            if attempts >= MAX_FUNCTIONAL_ATTEMPTS {
                return Err(Error::NoSeparatingFunctional { attempts });
            }
            attempts += 1;
            functional = random_functional(&mut rng, base_dim, None);
        }
    }

    /// Univariate interpolant through already-separated scalar nodes.
    pub fn univariate(nodes: Vec<Complex64>, values: Vec<Complex64>) -> Result<PolyMapInterpolant> {
        let wrapped = values.into_iter().map(|v| vec![v]).collect();
        Self::univariate_with(vec![c(1.0, 0.0)], nodes, wrapped, 0)
    }

    fn univariate_with(
        functional: Vec<Complex64>,
        nodes: Vec<Complex64>,
        values: Vec<Vec<Complex64>>,
        functional_attempts: usize,
    ) -> Result<PolyMapInterpolant> {
        if nodes.len() > MAX_NODES {
            return Err(Error::Precondition(format!(
                "{} interpolation nodes exceed the stable limit of {MAX_NODES}",
                nodes.len()
            )));
        }
        if !nodes_separated(&nodes) {
            return Err(Error::Precondition(
                "interpolation nodes collide after projection".into(),
            ));
        }
        let m = nodes.len();
        let mut weights = vec![c(1.0, 0.0); m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    weights[i] = weights[i] / (nodes[i] - nodes[j]);
                }
            }
            if !weights[i].is_finite() || weights[i] == c(0.0, 0.0) {
                return Err(Error::Precondition(
                    "interpolation nodes are too close or too spread for stable weights".into(),
                ));
            }
        }
        let target_dim = values[0].len();
        let coefficients = newton_monomial_coefficients(&nodes, &values, target_dim);
        Ok(PolyMapInterpolant {
            base_dim: functional.len(),
            target_dim,
            functional,
            nodes,
            values,
            weights,
            coefficients,
            functional_attempts,
        })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Evaluate at a base point: project, then barycentric interpolation.
    /// Bitwise-exact at the nodes.
    pub fn eval(&self, base: &[Complex64]) -> Result<Vec<Complex64>> {
        if base.len() != self.base_dim {
            return Err(Error::DimensionMismatch {
                expected: self.base_dim,
                got: base.len(),
            });
        }
        Ok(self.eval_projected(apply_functional(&self.functional, base)))
    }

    /// Evaluate at an already-projected scalar abscissa.
    pub fn eval_projected(&self, w: Complex64) -> Vec<Complex64> {
        if let Some(i) = self.nodes.iter().position(|&x| x == w) {
            return self.values[i].clone();
        }
        let mut denom = c(0.0, 0.0);
        let mut num = vec![c(0.0, 0.0); self.target_dim];
        for (i, &x) in self.nodes.iter().enumerate() {
            let t = self.weights[i] / (w - x);
            denom += t;
            for (acc, v) in num.iter_mut().zip(&self.values[i]) {
                *acc += t * v;
            }
        }
        num.into_iter().map(|v| v / denom).collect()
    }

    /// Scalar evaluation for `target_dim == 1` interpolants.
    pub fn eval1(&self, w: Complex64) -> Complex64 {
        self.eval_projected(w)[0]
    }

    pub fn descriptor(&self) -> Value {
        json!({
            "functional": complex_vec_value(&self.functional),
            "nodes": complex_vec_value(&self.nodes),
            "values": self.values.iter().map(|v| complex_vec_value(v)).collect::<Vec<_>>(),
            "coeffs": self.coefficients.iter().map(|v| complex_vec_value(v)).collect::<Vec<_>>(),
        })
    }
}

/// Newton divided differences expanded to monomial coefficients,
/// `result[d][t]` = degree-`d` coefficient of target component `t`.
fn newton_monomial_coefficients(
    nodes: &[Complex64],
    values: &[Vec<Complex64>],
    target_dim: usize,
) -> Vec<Vec<Complex64>> {
    let m = nodes.len();
    let mut coeffs = vec![vec![c(0.0, 0.0); target_dim]; m];
    for t in 0..target_dim {
        let mut dd: Vec<Complex64> = values.iter().map(|v| v[t]).collect();
        for level in 1..m {
            for i in (level..m).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
            }
        }
        // Horner-style expansion of the Newton form
        let mut poly: Vec<Complex64> = vec![dd[m - 1]];
        for i in (0..m - 1).rev() {
            let mut next = vec![c(0.0, 0.0); poly.len() + 1];
            for (k, &p) in poly.iter().enumerate() {
                next[k + 1] += p;
                next[k] -= nodes[i] * p;
            }
            next[0] += dd[i];
            poly = next;
        }
        for (d, &p) in poly.iter().enumerate() {
            coeffs[d][t] = p;
        }
    }
    coeffs
}

/// `z_axis += f(projection . z)` with the projection blind to the axis.
#[derive(Clone, Debug)]
pub struct ShearMap {
    pub dim: usize,
    pub axis: usize,
    /// Linear functional with `projection[axis] == 0`.
    pub projection: Vec<Complex64>,
    /// Univariate scalar interpolant applied to the projected value.
    pub f: PolyMapInterpolant,
}

impl ShearMap {
    pub fn new(
        dim: usize,
        axis: usize,
        projection: Vec<Complex64>,
        f: PolyMapInterpolant,
    ) -> Result<ShearMap> {
        if axis >= dim || projection.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: projection.len().max(axis + 1),
            });
        }
        if projection[axis] != c(0.0, 0.0) {
            return Err(Error::Precondition(
                "shear projection must not involve the sheared axis".into(),
            ));
        }
        if f.base_dim != 1 || f.target_dim != 1 {
            return Err(Error::Precondition(
                "shear interpolant must be scalar-to-scalar".into(),
            ));
        }
        Ok(ShearMap {
            dim,
            axis,
            projection,
            f,
        })
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_point(z)?;
        let mut out = z.to_vec();
        out[self.axis] += self.f.eval1(apply_functional(&self.projection, z));
        Ok(out)
    }

    /// Inverse shear: the projected value is untouched by the forward map,
    /// so subtracting the same interpolated term inverts it.
    pub fn invert(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_point(z)?;
        let mut out = z.to_vec();
        out[self.axis] -= self.f.eval1(apply_functional(&self.projection, z));
        Ok(out)
    }

    pub fn descriptor(&self) -> Value {
        json!({
            "kind": "shear",
            "dim": self.dim,
            "axis": self.axis,
            "projection": complex_vec_value(&self.projection),
            "coeffs": self.f.coefficients.iter().map(|v| complex_value(v[0])).collect::<Vec<_>>(),
            "interpolant": self.f.descriptor(),
        })
    }
}

/// `z_axis -> exp(lambda(w)) z_axis + offset(w)` with `w = base . z`;
/// the multiplier never vanishes because it is an exponential.
#[derive(Clone, Debug)]
pub struct OvershearMap {
    pub dim: usize,
    pub axis: usize,
    /// Base functional with `base[axis] == 0`.
    pub base: Vec<Complex64>,
    pub lambda_exponent: PolyMapInterpolant,
    pub offset: PolyMapInterpolant,
}

impl OvershearMap {
    pub fn new(
        dim: usize,
        axis: usize,
        base: Vec<Complex64>,
        lambda_exponent: PolyMapInterpolant,
        offset: PolyMapInterpolant,
    ) -> Result<OvershearMap> {
        if axis >= dim || base.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: base.len().max(axis + 1),
            });
        }
        if base[axis] != c(0.0, 0.0) {
            return Err(Error::Precondition(
                "overshear base must not involve the acted axis".into(),
            ));
        }
        for p in [&lambda_exponent, &offset] {
            if p.base_dim != 1 || p.target_dim != 1 {
                return Err(Error::Precondition(
                    "overshear interpolants must be scalar-to-scalar".into(),
                ));
            }
        }
        Ok(OvershearMap {
            dim,
            axis,
            base,
            lambda_exponent,
            offset,
        })
    }

    pub fn multiplier(&self, w: Complex64) -> Complex64 {
        self.lambda_exponent.eval1(w).exp()
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_point(z)?;
        let w = apply_functional(&self.base, z);
        let mut out = z.to_vec();
        out[self.axis] = self.multiplier(w) * z[self.axis] + self.offset.eval1(w);
        Ok(out)
    }

    pub fn invert(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_point(z)?;
        let w = apply_functional(&self.base, z);
        let mut out = z.to_vec();
        out[self.axis] = (z[self.axis] - self.offset.eval1(w)) / self.multiplier(w);
        Ok(out)
    }

    pub fn descriptor(&self) -> Value {
        json!({
            "kind": "overshear",
            "dim": self.dim,
            "axis": self.axis,
            "projection": complex_vec_value(&self.base),
            "coeffs": {
                "lambda_exponent": self.lambda_exponent.coefficients.iter()
                    .map(|v| complex_value(v[0])).collect::<Vec<_>>(),
                "offset": self.offset.coefficients.iter()
                    .map(|v| complex_value(v[0])).collect::<Vec<_>>(),
            },
        })
    }
}

#[derive(Clone, Debug)]
pub enum TameMap {
    Shear(ShearMap),
    Overshear(OvershearMap),
}

impl TameMap {
    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            TameMap::Shear(s) => s.apply(z),
            TameMap::Overshear(o) => o.apply(z),
        }
    }

    pub fn invert(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            TameMap::Shear(s) => s.invert(z),
            TameMap::Overshear(o) => o.invert(z),
        }
    }

    pub fn descriptor(&self) -> Value {
        match self {
            TameMap::Shear(s) => s.descriptor(),
            TameMap::Overshear(o) => o.descriptor(),
        }
    }
}

/// Left-to-right composition of shears and overshears.
#[derive(Clone, Debug, Default)]
pub struct AutomorphismSeq {
    pub maps: Vec<TameMap>,
}

impl AutomorphismSeq {
    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut cur = z.to_vec();
        for m in &self.maps {
            cur = m.apply(&cur)?;
        }
        Ok(cur)
    }

    pub fn invert(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut cur = z.to_vec();
        for m in self.maps.iter().rev() {
            cur = m.invert(&cur)?;
        }
        Ok(cur)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn descriptor(&self) -> Value {
        Value::Array(self.maps.iter().map(|m| m.descriptor()).collect())
    }
}

/// A composition carrying `points[j]` to `(j+1, 0, ..., 0)` with residual
/// certificates.
#[derive(Clone, Debug)]
pub struct AxisNormalization {
    pub seq: AutomorphismSeq,
    /// Final images, in input order.
    pub images: Vec<Vec<Complex64>>,
    /// Max-norm distance of each image from its integer target.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Random functionals consumed by the separating search.
    pub separating_attempts: usize,
}

struct FunctionalSearch {
    rng: ChaCha8Rng,
    attempts: usize,
}

impl FunctionalSearch {
    fn new(seed: u64) -> Self {
        FunctionalSearch {
            rng: ChaCha8Rng::seed_from_u64(seed),
            attempts: 0,
        }
    }

    /// A functional (zero on `skip_axis`) separating `key(point, w)` values.
    /// The plain `first_axis` projection and every seeded draw are scored by
    /// [`log_weight_spread`] of their keys, and the most evenly weighted
    /// candidate wins: those keys become interpolation nodes, and lopsided
    /// barycentric weights make the interpolant oscillate violently away
    /// from the data.
    fn find(
        &mut self,
        points: &[Vec<Complex64>],
        dim: usize,
        skip_axis: usize,
        first_axis: usize,
        key: impl Fn(&Vec<Complex64>, Complex64) -> Complex64,
    ) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        let mut candidate: Vec<Complex64> = (0..dim)
            .map(|i| c(if i == first_axis { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let mut best: Option<(f64, Vec<Complex64>, Vec<Complex64>)> = None;
        for round in 0..=MAX_FUNCTIONAL_ATTEMPTS {
            let keys: Vec<Complex64> = points
                .iter()
                .map(|p| key(p, apply_functional(&candidate, p)))
                .collect();
            if nodes_separated(&keys) {
                let spread = log_weight_spread(&keys);
                if best.as_ref().map_or(true, |(s, _, _)| spread < *s) {
                    best = Some((spread, candidate.clone(), keys));
                }
            }
            if round < MAX_FUNCTIONAL_ATTEMPTS {
                self.attempts += 1;
                candidate = random_functional(&mut self.rng, dim, Some(skip_axis));
            }
        }
        best.map(|(_, functional, keys)| (functional, keys))
    }
}

/// Spread of the log barycentric weights the keys would get as
/// interpolation nodes: `max log|w_i| - min log|w_i|` where
/// `w_i = prod_{j != i} 1/(x_i - x_j)`. Zero is perfectly balanced;
/// the spread bounds how wildly the interpolant can overshoot between
/// nodes. Keys must already be pairwise distinct.
fn log_weight_spread(keys: &[Complex64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..keys.len() {
        let mut log_w = 0.0;
        for j in 0..keys.len() {
            if i != j {
                log_w -= (keys[i] - keys[j]).norm().ln();
            }
        }
        lo = lo.min(log_w);
        hi = hi.max(log_w);
    }
    if keys.len() < 2 {
        return 0.0;
    }
    hi - lo
}

fn shear_from_current(
    dim: usize,
    axis: usize,
    projection: Vec<Complex64>,
    current: &[Vec<Complex64>],
    targets: impl Fn(usize, &Vec<Complex64>) -> Complex64,
) -> Result<ShearMap> {
    let nodes: Vec<Complex64> = current
        .iter()
        .map(|p| apply_functional(&projection, p))
        .collect();
    let values: Vec<Complex64> = current
        .iter()
        .enumerate()
        .map(|(j, p)| targets(j, p))
        .collect();
    ShearMap::new(
        dim,
        axis,
        projection,
        PolyMapInterpolant::univariate(nodes, values)?,
    )
}

fn push_map(
    seq: &mut AutomorphismSeq,
    current: &mut Vec<Vec<Complex64>>,
    map: ShearMap,
) -> Result<()> {
    let mut next = Vec::with_capacity(current.len());
    for p in current.iter() {
        next.push(map.apply(p)?);
    }
    *current = next;
    seq.maps.push(TameMap::Shear(map));
    Ok(())
}

fn unit_functional(dim: usize, axis: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|i| c(if i == axis { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

/// Carry `m` pairwise distinct points of `C^n` (`n >= 2`) onto the first
/// axis at the integer points `1..=m` by an explicit shear composition.
///
/// Preferred route (`n` shears): one shear along a functional of the
/// remaining coordinates puts point `j` at first coordinate `j`; one shear
/// per remaining axis then interpolates the negatives of its coordinates.
/// When no functional of the remaining coordinates separates the points
/// (some pair differs only in the first coordinate), a fallback first
/// separates the first coordinates and bounces the integer labels off a
/// scratch axis, using `n + 2` shears.
pub fn send_to_axis(points: &[Vec<Complex64>]) -> Result<AxisNormalization> {
    send_to_axis_seeded(points, SEPARATION_SEED)
}

/// `send_to_axis` with a caller-chosen seed for the separating-functional
/// draws; the construction is otherwise deterministic in the input.
pub fn send_to_axis_seeded(points: &[Vec<Complex64>], seed: u64) -> Result<AxisNormalization> {
    let m = points.len();
    if m == 0 {
        return Err(Error::Precondition("need at least one point".into()));
    }
    let dim = points[0].len();
    if dim < 2 {
        return Err(Error::Precondition(
            "axis normalization needs ambient dimension >= 2".into(),
        ));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Precondition("points have mixed dimensions".into()));
    }
    for i in 0..m {
        for j in i + 1..m {
            if points[i] == points[j] {
                return Err(Error::Precondition(format!(
                    "points {i} and {j} coincide exactly"
                )));
            }
        }
    }
    let target = |j: usize| c((j + 1) as f64, 0.0);
    let mut search = FunctionalSearch::new(seed);
    let mut seq = AutomorphismSeq::default();
    let mut current: Vec<Vec<Complex64>> = points.to_vec();

    // Route A: a functional of coordinates 2..n separates the points
    if let Some((functional, _)) = search.find(points, dim, 0, 1, |_, w| w) {
        let map = shear_from_current(dim, 0, functional, &current, |j, p| target(j) - p[0])?;
        push_map(&mut seq, &mut current, map)?;
    } else {
        // Route B: separate the first coordinates themselves, then use the
        // second axis as scratch space for the integer labels
        let (functional, _) = search
            .find(points, dim, 0, 1, |p, w| p[0] + w)
            .ok_or(Error::NoSeparatingFunctional {
                attempts: search.attempts,
            })?;
        // only a genuine shear is needed: f = identity along the functional
        let shift = ShearMap::new(
            dim,
            0,
            functional,
            PolyMapInterpolant::univariate(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![
                c(0.0, 0.0),
                c(1.0, 0.0),
            ])?,
        )?;
        push_map(&mut seq, &mut current, shift)?;
        // scratch: z_2 takes the integer labels, keyed by the now-distinct
        // first coordinates
        let label = shear_from_current(
            dim,
            1,
            unit_functional(dim, 0),
            &current,
            |j, p| target(j) - p[1],
        )?;
        push_map(&mut seq, &mut current, label)?;
        // first coordinate takes its target, keyed by the labels
        let fix_first = shear_from_current(
            dim,
            0,
            unit_functional(dim, 1),
            &current,
            |j, p| target(j) - p[0],
        )?;
        push_map(&mut seq, &mut current, fix_first)?;
    }
    // kill every remaining coordinate, keyed by the first
    for axis in 1..dim {
        let map = shear_from_current(
            dim,
            axis,
            unit_functional(dim, 0),
            &current,
            |_, p| -p[axis],
        )?;
        push_map(&mut seq, &mut current, map)?;
    }

    let mut residuals = Vec::with_capacity(m);
    for (j, img) in current.iter().enumerate() {
        let mut res = (img[0] - target(j)).norm();
        for z in &img[1..] {
            res = res.max(z.norm());
        }
        residuals.push(res);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    if max_residual > RESIDUAL_TOL {
        return Err(Error::InternalCheck(format!(
            "axis normalization residual {max_residual} exceeds {RESIDUAL_TOL}"
        )));
    }
    Ok(AxisNormalization {
        seq,
        images: current,
        residuals,
        max_residual,
        separating_attempts: search.attempts,
    })
}

/// Build the overshear of `C^2` whose restriction to the fiber over
/// `base_points[k]` is the affine map `z -> lambda_k z + c_k`. The
/// multiplier is `exp` of an interpolant through the principal logarithms,
/// so it never vanishes; the offset interpolates the `c_k` directly (the
/// bundle section is trivialized to zero).
pub fn prescribe_fiber_automorphisms(
    base_points: &[Complex64],
    fiber_maps: &[(Complex64, Complex64)],
) -> Result<OvershearMap> {
    if base_points.is_empty() || base_points.len() != fiber_maps.len() {
        return Err(Error::Precondition(
            "need one (multiplier, offset) pair per base point".into(),
        ));
    }
    if let Some(k) = fiber_maps.iter().position(|(l, _)| *l == c(0.0, 0.0)) {
        return Err(Error::Precondition(format!(
            "fiber multiplier {k} vanishes; fiber maps must be invertible"
        )));
    }
    let log_targets: Vec<Complex64> = fiber_maps.iter().map(|(l, _)| l.ln()).collect();
    let offsets: Vec<Complex64> = fiber_maps.iter().map(|(_, off)| *off).collect();
    let lambda_exponent = PolyMapInterpolant::univariate(base_points.to_vec(), log_targets)?;
    let offset = PolyMapInterpolant::univariate(base_points.to_vec(), offsets)?;
    let map = OvershearMap::new(
        2,
        1,
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        lambda_exponent,
        offset,
    )?;
    // construction-time certificate: each fiber restriction matches
    for (k, (&x, &(lam, off))) in base_points.iter().zip(fiber_maps).enumerate() {
        for z in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)] {
            let got = map.apply(&[x, z])?;
            let want = lam * z + off;
            if (got[1] - want).norm() > 1e-8 * (1.0 + want.norm()) || got[0] != x {
                return Err(Error::InternalCheck(format!(
                    "fiber restriction {k} deviates: {} vs {}",
                    got[1], want
                )));
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn cv(pairs: &[(f64, f64)]) -> Vec<Complex64> {
        pairs.iter().map(|&(re, im)| c(re, im)).collect()
    }

    #[test]
    fn interpolant_identity_and_square() {
        // nodes {0,1} -> {0,1}: the identity polynomial
        let f =
            PolyMapInterpolant::univariate(cv(&[(0.0, 0.0), (1.0, 0.0)]), cv(&[(0.0, 0.0), (1.0, 0.0)]))
                .unwrap();
        assert_eq!(f.eval1(c(0.5, 0.0)), c(0.5, 0.0));
        assert!((f.coefficients[0][0]).norm() < 1e-14);
        assert!((f.coefficients[1][0] - c(1.0, 0.0)).norm() < 1e-14);
        // nodes {1,2,3} -> {1,4,9}: the square
        let sq = PolyMapInterpolant::univariate(
            cv(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]),
            cv(&[(1.0, 0.0), (4.0, 0.0), (9.0, 0.0)]),
        )
        .unwrap();
        assert!((sq.eval1(c(5.0, 0.0)) - c(25.0, 0.0)).norm() < 1e-10);
        assert!((sq.eval1(c(0.0, 1.0)) - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((sq.coefficients[2][0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(sq.coefficients[1][0].norm() < 1e-12);
    }

    #[test]
    fn interpolant_single_node_is_constant() {
        let f = PolyMapInterpolant::univariate(cv(&[(5.0, 0.0)]), cv(&[(7.0, 0.0)])).unwrap();
        assert_eq!(f.eval1(c(5.0, 0.0)), c(7.0, 0.0));
        assert_eq!(f.eval1(c(123.0, -4.0)), c(7.0, 0.0));
        assert_eq!(f.coefficients.len(), 1);
    }

    #[test]
    fn interpolant_exact_at_nodes() {
        let nodes = cv(&[(0.3, 1.2), (-2.0, 0.1), (4.0, -4.0), (0.0, 0.0)]);
        let values = cv(&[(1.0, 1.0), (2.0, -2.0), (0.5, 0.0), (-3.0, 9.0)]);
        let f = PolyMapInterpolant::univariate(nodes.clone(), values.clone()).unwrap();
        for (x, v) in nodes.iter().zip(&values) {
            assert_eq!(f.eval1(*x), *v); // bitwise: node hit short-circuits
        }
    }

    #[test]
    fn interpolant_multidim_base_retries_functional() {
        // first coordinates collide, so the build must re-draw a functional
        let base = vec![cv(&[(0.0, 0.0), (0.0, 0.0)]), cv(&[(0.0, 0.0), (1.0, 0.0)])];
        let targets = vec![cv(&[(1.0, 0.0)]), cv(&[(2.0, 0.0)])];
        let f = PolyMapInterpolant::build(&base, &targets).unwrap();
        assert!(f.functional_attempts >= 1);
        assert_eq!(f.eval(&base[0]).unwrap(), targets[0]);
        assert_eq!(f.eval(&base[1]).unwrap(), targets[1]);
    }

    #[test]
    fn interpolant_rejects_bad_input() {
        // exactly coincident base points can never be separated
        let base = vec![cv(&[(1.0, 0.0)]), cv(&[(1.0, 0.0)])];
        let targets = vec![cv(&[(1.0, 0.0)]), cv(&[(2.0, 0.0)])];
        assert!(PolyMapInterpolant::build(&base, &targets).is_err());
        assert!(PolyMapInterpolant::build(&[], &[]).is_err());
    }

    #[test]
    fn shear_frozen_example_and_invariance() {
        // pi = z_1, f = id, add to z_2: (1, 0) -> (1, 1)
        let f = PolyMapInterpolant::univariate(cv(&[(0.0, 0.0), (1.0, 0.0)]), cv(&[(0.0, 0.0), (1.0, 0.0)]))
            .unwrap();
        let s = ShearMap::new(2, 1, cv(&[(1.0, 0.0), (0.0, 0.0)]), f).unwrap();
        let img = s.apply(&cv(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(img, cv(&[(1.0, 0.0), (1.0, 0.0)]));
        // fiber preservation is exact: the projected coordinate is untouched
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let z = cv(&[
                (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            ]);
            let w = s.apply(&z).unwrap();
            assert_eq!(w[0], z[0]);
            let back = s.invert(&w).unwrap();
            assert!((back[1] - z[1]).norm() <= 1e-12);
        }
    }

    #[test]
    fn shear_rejects_projection_on_axis() {
        let f = PolyMapInterpolant::univariate(cv(&[(0.0, 0.0)]), cv(&[(1.0, 0.0)])).unwrap();
        assert!(ShearMap::new(2, 1, cv(&[(0.0, 0.0), (1.0, 0.0)]), f).is_err());
    }

    #[test]
    fn overshear_frozen_and_roundtrip() {
        // lambda = 1, c(x) = x: (1, 2) -> (1, 3)
        let zero = PolyMapInterpolant::univariate(cv(&[(0.0, 0.0)]), cv(&[(0.0, 0.0)])).unwrap();
        let ident =
            PolyMapInterpolant::univariate(cv(&[(0.0, 0.0), (1.0, 0.0)]), cv(&[(0.0, 0.0), (1.0, 0.0)]))
                .unwrap();
        let o = OvershearMap::new(2, 1, cv(&[(1.0, 0.0), (0.0, 0.0)]), zero, ident).unwrap();
        let img = o.apply(&cv(&[(1.0, 0.0), (2.0, 0.0)])).unwrap();
        assert!((img[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((img[1] - c(3.0, 0.0)).norm() < 1e-14);
        // invert . apply = id to 1e-10 on random points of the unit polydisc
        let quad = PolyMapInterpolant::univariate(
            cv(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.5)]),
            cv(&[(0.2, 0.0), (-0.3, 1.0), (0.0, 0.7)]),
        )
        .unwrap();
        let off = PolyMapInterpolant::univariate(
            cv(&[(0.0, 0.0), (2.0, 0.0)]),
            cv(&[(5.0, 0.0), (-1.0, 1.0)]),
        )
        .unwrap();
        let o2 = OvershearMap::new(2, 1, cv(&[(1.0, 0.0), (0.0, 0.0)]), quad, off).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let z = cv(&[
                (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ]);
            let back = o2.invert(&o2.apply(&z).unwrap()).unwrap();
            let err = (back[0] - z[0]).norm().max((back[1] - z[1]).norm());
            assert!(err <= 1e-10, "roundtrip error {err}");
        }
    }

    #[test]
    fn prescribe_fiber_identity_and_single() {
        // all (1, 0): the identity on every fiber
        let id = prescribe_fiber_automorphisms(
            &cv(&[(0.0, 0.0), (1.0, 0.0)]),
            &[(c(1.0, 0.0), c(0.0, 0.0)), (c(1.0, 0.0), c(0.0, 0.0))],
        )
        .unwrap();
        let z = cv(&[(0.5, 0.5), (3.0, -2.0)]);
        let img = id.apply(&z).unwrap();
        assert!((img[1] - z[1]).norm() < 1e-12);
        // one base point, (2, 3): z -> 2z + 3
        let m = prescribe_fiber_automorphisms(&cv(&[(4.0, 0.0)]), &[(c(2.0, 0.0), c(3.0, 0.0))])
            .unwrap();
        let img = m.apply(&cv(&[(4.0, 0.0), (5.0, 0.0)])).unwrap();
        assert!((img[1] - c(13.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn prescribe_fiber_three_points_and_rejection() {
        let bases = cv(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let maps = [
            (c(2.0, 0.0), c(0.0, 0.0)),
            (c(0.0, 3.0), c(1.0, -1.0)),
            (c(-1.0, 0.0), c(2.0, 2.0)),
        ];
        let o = prescribe_fiber_automorphisms(&bases, &maps).unwrap();
        for (&x, &(lam, off)) in bases.iter().zip(&maps) {
            let z = c(0.7, -0.3);
            let img = o.apply(&[x, z]).unwrap();
            assert!((img[1] - (lam * z + off)).norm() <= 1e-8);
        }
        assert!(prescribe_fiber_automorphisms(
            &cv(&[(0.0, 0.0)]),
            &[(c(0.0, 0.0), c(1.0, 0.0))]
        )
        .is_err());
    }

    #[test]
    fn send_to_axis_single_point() {
        let out = send_to_axis(&[cv(&[(5.0, 0.0), (7.0, 0.0)])]).unwrap();
        assert!(out.max_residual <= 1e-12);
        assert!((out.images[0][0] - c(1.0, 0.0)).norm() <= 1e-12);
        assert!(out.images[0][1].norm() <= 1e-12);
    }

    #[test]
    fn send_to_axis_two_points_frozen() {
        let out = send_to_axis(&[cv(&[(0.0, 0.0), (0.0, 0.0)]), cv(&[(1.0, 0.0), (1.0, 0.0)])])
            .unwrap();
        assert!(out.max_residual <= 1e-8);
        assert!((out.images[0][0] - c(1.0, 0.0)).norm() <= 1e-8);
        assert!((out.images[1][0] - c(2.0, 0.0)).norm() <= 1e-8);
        // route A applies: n = 2 shears suffice
        assert_eq!(out.seq.len(), 2);
    }

    #[test]
    fn send_to_axis_twenty_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let points: Vec<Vec<Complex64>> = (0..20)
            .map(|_| {
                (0..3)
                    .map(|_| c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
                    .collect()
            })
            .collect();
        let out = send_to_axis(&points).unwrap();
        assert!(out.max_residual <= 1e-8, "residual {}", out.max_residual);
        assert!(out.seq.len() <= 3 + 2);
        // images pairwise distinct with separation >= 0.5
        for i in 0..20 {
            for j in i + 1..20 {
                let d: f64 = out.images[i]
                    .iter()
                    .zip(&out.images[j])
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(d >= 0.5);
            }
        }
        // the composition inverts back to the inputs
        for (p, img) in points.iter().zip(&out.images) {
            let back = out.seq.invert(img).unwrap();
            let err: f64 = back
                .iter()
                .zip(p)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-8, "inverse error {err}");
        }
    }

    #[test]
    fn send_to_axis_degenerate_pair_uses_fallback() {
        // second and third coordinates agree: no functional of them separates
        let pts = vec![
            cv(&[(0.0, 0.0), (5.0, 0.0), (5.0, 0.0)]),
            cv(&[(1.0, 0.0), (5.0, 0.0), (5.0, 0.0)]),
        ];
        let out = send_to_axis(&pts).unwrap();
        assert!(out.max_residual <= 1e-8);
        assert!(out.seq.len() <= 3 + 2);
        assert!(out.separating_attempts >= MAX_FUNCTIONAL_ATTEMPTS);
        // three points differing only in the first coordinate: an affine
        // fiber map cannot take 3 prescribed values, only the fallback works
        let triple = vec![
            cv(&[(0.0, 0.0), (5.0, 0.0)]),
            cv(&[(1.0, 0.0), (5.0, 0.0)]),
            cv(&[(2.5, 0.0), (5.0, 0.0)]),
        ];
        let out3 = send_to_axis(&triple).unwrap();
        assert!(out3.max_residual <= 1e-8);
        assert_eq!(out3.seq.len(), 2 + 2);
    }

    #[test]
    fn send_to_axis_rejects_bad_input() {
        assert!(send_to_axis(&[]).is_err());
        assert!(send_to_axis(&[cv(&[(1.0, 0.0)])]).is_err()); // dim 1
        let dup = cv(&[(1.0, 0.0), (2.0, 0.0)]);
        assert!(send_to_axis(&[dup.clone(), dup]).is_err());
    }

    #[test]
    fn send_to_axis_deterministic() {
        let pts = vec![
            cv(&[(0.0, 0.0), (5.0, 0.0), (5.0, 0.0)]),
            cv(&[(1.0, 0.0), (5.0, 0.0), (5.0, 0.0)]),
            cv(&[(0.0, 1.0), (2.0, 0.0), (-1.0, 0.0)]),
        ];
        let a = send_to_axis(&pts).unwrap();
        let b = send_to_axis(&pts).unwrap();
        assert_eq!(
            serde_json::to_string(&a.seq.descriptor()).unwrap(),
            serde_json::to_string(&b.seq.descriptor()).unwrap()
        );
    }

    fn fd_jacobian_det(
        f: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
        z: &[Complex64],
    ) -> Complex64 {
        let n = z.len();
        let h = 1e-5;
        let mut m = Matrix::<Complex64>::zeros(n, n);
        for col in 0..n {
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[col] += c(h, 0.0);
            zm[col] -= c(h, 0.0);
            let (fp, fm) = (f(&zp), f(&zm));
            for row in 0..n {
                *m.at_mut(row, col) = (fp[row] - fm[row]) / c(2.0 * h, 0.0);
            }
        }
        m.determinant()
    }

    #[test]
    fn jacobian_determinants() {
        // shears are volume preserving: Jacobian determinant 1
        let f = PolyMapInterpolant::univariate(
            cv(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]),
            cv(&[(0.3, 0.1), (-1.0, 0.0), (4.0, 2.0)]),
        )
        .unwrap();
        let s = ShearMap::new(2, 1, cv(&[(1.0, 0.0), (0.0, 0.0)]), f).unwrap();
        let z = cv(&[(0.4, -0.2), (1.1, 0.3)]);
        let det = fd_jacobian_det(&|p| s.apply(p).unwrap(), &z);
        assert!((det - c(1.0, 0.0)).norm() <= 1e-6, "det {det}");
        // overshear volume factor along the axis is the multiplier
        let lam = PolyMapInterpolant::univariate(
            cv(&[(0.0, 0.0), (1.0, 0.0)]),
            cv(&[(0.5, 0.2), (-0.1, 0.0)]),
        )
        .unwrap();
        let off = PolyMapInterpolant::univariate(cv(&[(0.0, 0.0)]), cv(&[(0.0, 0.0)])).unwrap();
        let o = OvershearMap::new(2, 1, cv(&[(1.0, 0.0), (0.0, 0.0)]), lam, off).unwrap();
        let det_o = fd_jacobian_det(&|p| o.apply(p).unwrap(), &z);
        let expected = o.multiplier(z[0]);
        assert!((det_o - expected).norm() <= 1e-6 * (1.0 + expected.norm()));
    }
}
