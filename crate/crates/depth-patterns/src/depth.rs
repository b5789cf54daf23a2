//! Halfspace (Tukey) depth in the plane.
//!
//! The depth of a query point with respect to a reference measure is the
//! smallest probability mass carried by a closed halfplane whose boundary
//! passes through the query. For an empirical reference on `m` points the
//! minimum is over halfplane point counts divided by `m`; [`empirical_depth`]
//! computes it exactly with an angular sweep. [`oracle_depth`] recomputes the
//! same quantity by brute-force enumeration of candidate directions and
//! exists purely as a cross-check. Two analytic references are supported:
//! the rotation-invariant law on the unit disc whose depth is
//! `(1 - ‖x‖) / 2`, and bivariate Gaussians.
//!
//! Direction comparisons use signs of cross products on coordinate
//! differences, never floating-point angles, so collinear and coincident
//! configurations are handled deterministically and the sweep agrees with
//! the oracle exactly.

use crate::geom::{Point2, PointSet2};
use crate::{Error, Result};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// A depth value in `[0, 1]`. For an empirical reference over `m` points the
/// value is an integer multiple of `1/m`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Depth(f64);

impl Depth {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Depth> for f64 {
    fn from(d: Depth) -> f64 {
        d.0
    }
}

/// Symmetric positive-definite 2x2 covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cov2 {
    s11: f64,
    s12: f64,
    s22: f64,
}

impl Cov2 {
    /// Validates positive diagonal entries and positive determinant.
    pub fn new(s11: f64, s12: f64, s22: f64) -> Result<Self> {
        for (name, v) in [("s11", s11), ("s12", s12), ("s22", s22)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    requirement: "finite",
                });
            }
        }
        if s11 <= 0.0 || s22 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "covariance diagonal",
                value: s11.min(s22),
                requirement: "> 0",
            });
        }
        let det = s11 * s22 - s12 * s12;
        if det <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "covariance determinant",
                value: det,
                requirement: "> 0",
            });
        }
        Ok(Cov2 { s11, s12, s22 })
    }

    pub fn identity() -> Self {
        Cov2 {
            s11: 1.0,
            s12: 0.0,
            s22: 1.0,
        }
    }

    pub fn entries(&self) -> (f64, f64, f64) {
        (self.s11, self.s12, self.s22)
    }

    /// Squared Mahalanobis distance of `v` from the origin.
    fn mahalanobis_sq(&self, v: Point2) -> f64 {
        let det = self.s11 * self.s22 - self.s12 * self.s12;
        (self.s22 * v.x1 * v.x1 - 2.0 * self.s12 * v.x1 * v.x2 + self.s11 * v.x2 * v.x2) / det
    }
}

/// Reference measure against which depths are computed.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceDistribution {
    /// Empirical measure of an observed point set.
    Empirical(PointSet2),
    /// The rotation-invariant distribution on the open unit disc with
    /// uniform marginals; its depth function is `(1 - ‖x‖) / 2`.
    Disc,
    /// Bivariate Gaussian with the given mean and covariance.
    Gaussian { mean: Point2, cov: Cov2 },
}

impl ReferenceDistribution {
    pub fn variant_name(&self) -> &'static str {
        match self {
            ReferenceDistribution::Empirical(_) => "empirical",
            ReferenceDistribution::Disc => "disc",
            ReferenceDistribution::Gaussian { .. } => "gaussian",
        }
    }
}

/// Index of the half-turn a direction vector falls in: 0 for angles in
/// `[0, pi)`, 1 for `[pi, 2*pi)`. Within one half-turn the cross product
/// orders directions totally.
#[inline]
fn half(v: Point2) -> u8 {
    if v.x2 > 0.0 || (v.x2 == 0.0 && v.x1 > 0.0) {
        0
    } else {
        1
    }
}

#[inline]
fn cross(a: Point2, b: Point2) -> f64 {
    a.x1 * b.x2 - a.x2 * b.x1
}

#[inline]
fn dot(a: Point2, b: Point2) -> f64 {
    a.x1 * b.x1 + a.x2 * b.x2
}

/// Compares two nonzero vectors by angle in `[0, 2*pi)`.
#[inline]
fn cmp_angle(a: Point2, b: Point2) -> std::cmp::Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c > 0.0 {
            std::cmp::Ordering::Less
        } else if c < 0.0 {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

/// Reusable buffers for the sweep, so bulk depth computations do not
/// allocate per query.
#[derive(Debug, Default)]
pub(crate) struct SweepScratch {
    dirs: Vec<Point2>,
    group_dir: Vec<Point2>,
    group_w: Vec<usize>,
}

/// Minimum over all closed halfplanes through `x` of the number of reference
/// points they contain.
///
/// Sweep: points coincident with `x` lie in every closed halfplane. The
/// remaining difference vectors are sorted by angle; the count of a closed
/// halfplane equals the coincident count plus the vectors outside an open
/// semicircle, so the minimum is found by a rotating window that maximises
/// the weight of half-open semicircular arcs `[theta_j, theta_j + pi)`
/// anchored at each distinct direction. O(m log m).
pub(crate) fn min_halfplane_count(x: Point2, pts: &[Point2], scratch: &mut SweepScratch) -> usize {
    let mut coincident = 0usize;
    scratch.dirs.clear();
    for p in pts {
        let v = *p - x;
        if v.x1 == 0.0 && v.x2 == 0.0 {
            coincident += 1;
        } else {
            scratch.dirs.push(v);
        }
    }
    let dirs = &mut scratch.dirs;
    if dirs.is_empty() {
        return coincident;
    }
    dirs.sort_unstable_by(|a, b| cmp_angle(*a, *b));

    // Group equal directions with multiplicities.
    scratch.group_dir.clear();
    scratch.group_w.clear();
    for &v in dirs.iter() {
        match scratch.group_dir.last() {
            Some(&g) if cmp_angle(g, v) == std::cmp::Ordering::Equal => {
                *scratch.group_w.last_mut().unwrap() += 1;
            }
            _ => {
                scratch.group_dir.push(v);
                scratch.group_w.push(1);
            }
        }
    }
    let k = scratch.group_dir.len();
    let total = dirs.len();

    // Rotating window over the doubled index range: arc `[theta_a, theta_a + pi)`
    // contains group b iff b == a or cross(dir_a, dir_b) > 0.
    let mut best = 0usize;
    let mut wsum = 0usize;
    let mut hi = 0usize;
    for a in 0..k {
        if hi < a {
            hi = a;
            wsum = 0;
        }
        while hi < a + k {
            let idx = hi % k;
            let inside = idx == a || cross(scratch.group_dir[a], scratch.group_dir[idx]) > 0.0;
            if inside {
                wsum += scratch.group_w[idx];
                hi += 1;
            } else {
                break;
            }
        }
        best = best.max(wsum);
        wsum -= scratch.group_w[a];
    }

    coincident + total - best
}

/// Exact halfspace depth of `x` with respect to the empirical measure of
/// `reference`.
pub fn empirical_depth(x: Point2, reference: &PointSet2) -> Result<Depth> {
    Ok(Depth(empirical_depth_count(x, reference)? as f64 / reference.len() as f64))
}

/// Halfplane count behind [`empirical_depth`]; the depth is this divided by
/// the reference size. Exposed so exactness tests can compare integers.
pub fn empirical_depth_count(x: Point2, reference: &PointSet2) -> Result<usize> {
    x.ensure_finite("depth query point")?;
    let mut scratch = SweepScratch::default();
    Ok(min_halfplane_count(x, reference.points(), &mut scratch))
}

/// Brute-force verification oracle for [`empirical_depth`].
///
/// Enumerates candidate minimizing directions: for every reference point
/// off the query, the two directions perpendicular to the difference vector
/// (each evaluated on both rotational sides of the boundary line, which is
/// where the piecewise-constant halfplane count attains its one-sided
/// minima), the negated difference direction, and one arbitrary direction.
/// Counts are taken directly per candidate in O(m^2) with no sorting, so the
/// computation shares nothing with the sweep. Equals [`empirical_depth`] on
/// every input.
pub fn oracle_depth(x: Point2, reference: &PointSet2) -> Result<Depth> {
    x.ensure_finite("depth query point")?;
    let m = reference.len();
    let mut coincident = 0usize;
    let mut vs: Vec<Point2> = Vec::with_capacity(m);
    for p in reference.iter() {
        let v = *p - x;
        if v.x1 == 0.0 && v.x2 == 0.0 {
            coincident += 1;
        } else {
            vs.push(v);
        }
    }
    if vs.is_empty() {
        return Ok(Depth(1.0));
    }

    let closed_count = |phi: Point2| vs.iter().filter(|&&w| dot(w, phi) >= 0.0).count();
    let sided_counts = |phi: Point2| {
        let mut strictly_pos = 0usize;
        let mut on_line_left = 0usize;
        let mut on_line_right = 0usize;
        for &w in &vs {
            let d = dot(w, phi);
            if d > 0.0 {
                strictly_pos += 1;
            } else if d == 0.0 {
                if cross(phi, w) > 0.0 {
                    on_line_left += 1;
                } else {
                    on_line_right += 1;
                }
            }
        }
        (strictly_pos + on_line_left).min(strictly_pos + on_line_right)
    };

    let mut best = closed_count(Point2::new(1.0, 0.0));
    for &v in &vs {
        best = best.min(sided_counts(Point2::new(-v.x2, v.x1)));
        best = best.min(sided_counts(Point2::new(v.x2, -v.x1)));
        best = best.min(closed_count(Point2::new(-v.x1, -v.x2)));
    }
    Ok(Depth((coincident + best) as f64 / m as f64))
}

/// Depth with respect to an analytic reference.
///
/// Disc: `(1 - ‖x‖) / 2` inside the open unit disc, 0 outside. Gaussian:
/// the minimizing halfplane is tangent to the Mahalanobis ball through `x`,
/// giving the standard normal lower tail at minus the Mahalanobis distance.
pub fn analytic_depth(x: Point2, reference: &ReferenceDistribution) -> Result<Depth> {
    x.ensure_finite("depth query point")?;
    match reference {
        ReferenceDistribution::Empirical(_) => Err(Error::UnsupportedReference {
            operation: "analytic_depth",
            got: "empirical",
        }),
        ReferenceDistribution::Disc => {
            let r = x.norm();
            Ok(Depth(if r < 1.0 { 0.5 * (1.0 - r) } else { 0.0 }))
        }
        ReferenceDistribution::Gaussian { mean, cov } => {
            let d = cov.mahalanobis_sq(x - *mean).sqrt();
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            Ok(Depth(normal.cdf(-d)))
        }
    }
}

/// Depth of every point of a series against one reference, computed once
/// per point.
pub fn depth_series(points: &[Point2], reference: &ReferenceDistribution) -> Result<Vec<f64>> {
    match reference {
        ReferenceDistribution::Empirical(set) => {
            let mut scratch = SweepScratch::default();
            points
                .iter()
                .map(|&p| {
                    p.ensure_finite("depth query point")?;
                    Ok(min_halfplane_count(p, set.points(), &mut scratch) as f64
                        / set.len() as f64)
                })
                .collect()
        }
        _ => points
            .iter()
            .map(|&p| analytic_depth(p, reference).map(Depth::value))
            .collect(),
    }
}

/// Draws `n` points from the bivariate Gaussian with the given mean and
/// covariance (Box-Muller pairs through the Cholesky factor).
pub fn sample_gaussian<R: Rng + ?Sized>(
    n: usize,
    mean: Point2,
    cov: Cov2,
    rng: &mut R,
) -> Result<PointSet2> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    mean.ensure_finite("gaussian mean")?;
    let l11 = cov.s11.sqrt();
    let l21 = cov.s12 / l11;
    let l22 = (cov.s22 - l21 * l21).sqrt();
    let pts = (0..n)
        .map(|_| {
            let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
            let z1 = r * c;
            let z2 = r * s;
            Point2::new(mean.x1 + l11 * z1, mean.x2 + l21 * z1 + l22 * z2)
        })
        .collect();
    PointSet2::new(pts)
}

/// Draws `n` points from the disc distribution with density
/// `1 / (2*pi*sqrt(1 - ‖v‖^2))`: angle uniform, radius `sqrt(2u - u^2)`
/// (the inverse of the radial CDF `1 - sqrt(1 - r^2)`).
pub fn sample_disc<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PointSet2> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let pts = (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let r = (u * (2.0 - u)).sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            Point2::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    PointSet2::new(pts)
}
