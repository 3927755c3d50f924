//! Minimum-area enclosing ellipses and the ellipse predicates used by the
//! clustering loop.
//!
//! An [`Ellipse`] is stored as the pair `{A, b}` describing the closed set
//! `{x : ‖A·x − b‖₂ ≤ 1}` with `A` symmetric positive definite. The center is
//! `A⁻¹·b` and the semi-axes are the reciprocal eigenvalues of `A`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A ground position in meters (east, north).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_squared(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    fn to_vector(self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }

    fn from_vector(v: Vector2<f64>) -> Self {
        Self::new(v.x, v.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Arithmetic mean of a non-empty point list.
pub fn centroid(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point2::new(sx / n, sy / n)
}

/// Closed ellipse `{x : ‖A·x − b‖₂ ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EllipseRecord", into = "EllipseRecord")]
pub struct Ellipse {
    a: Matrix2<f64>,
    b: Vector2<f64>,
}

/// Eigen-decomposition of a symmetric 2×2 matrix `[[p, q], [q, r]]`.
/// Returns `(λ_small, λ_large, angle of the λ_small eigenvector in [0, π))`.
fn symmetric_eigen(m: &Matrix2<f64>) -> (f64, f64, f64) {
    let (p, q, r) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
    let mean = 0.5 * (p + r);
    let half_diff = 0.5 * (p - r);
    let radius = half_diff.hypot(q);
    // eigenvector of the large eigenvalue sits at 0.5·atan2(2q, p − r)
    let large_angle = 0.5 * q.atan2(half_diff);
    (mean - radius, mean + radius, wrap_angle(large_angle + 0.5 * PI))
}

/// Reduces an axis angle to `[0, π)`.
fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

impl Ellipse {
    /// Builds an ellipse from `{A, b}`; `A` must be symmetric positive definite.
    pub fn new(a: Matrix2<f64>, b: Vector2<f64>) -> Result<Self> {
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("ellipse has non-finite entries".into()));
        }
        let scale = a.amax().max(f64::MIN_POSITIVE);
        if (a[(0, 1)] - a[(1, 0)]).abs() > 1e-9 * scale {
            return Err(Error::InvalidArgument("ellipse matrix is not symmetric".into()));
        }
        let (small, _, _) = symmetric_eigen(&a);
        if small <= 0.0 {
            return Err(Error::InvalidArgument("ellipse matrix is not positive definite".into()));
        }
        Ok(Self { a, b })
    }

    /// Ellipse with the given center, semi-axes and major-axis angle (radians).
    pub fn from_center_axes(
        center: Point2,
        semi_major: f64,
        semi_minor: f64,
        orientation: f64,
    ) -> Result<Self> {
        if !(semi_major.is_finite() && semi_minor.is_finite()) || semi_minor <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "semi-axes must be positive, got ({semi_major}, {semi_minor})"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidPoint { x: center.x, y: center.y });
        }
        let (major, minor) = if semi_major >= semi_minor {
            (semi_major, semi_minor)
        } else {
            (semi_minor, semi_major)
        };
        let orientation = if semi_major >= semi_minor {
            orientation
        } else {
            orientation + 0.5 * PI
        };
        let r = rotation(orientation);
        let mut a = r * Matrix2::new(1.0 / major, 0.0, 0.0, 1.0 / minor) * r.transpose();
        // exact symmetry keeps the eigen decomposition well posed
        let off = 0.5 * (a[(0, 1)] + a[(1, 0)]);
        a[(0, 1)] = off;
        a[(1, 0)] = off;
        let b = a * center.to_vector();
        Ok(Self { a, b })
    }

    pub fn circle(center: Point2, radius: f64) -> Result<Self> {
        Self::from_center_axes(center, radius, radius, 0.0)
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.a
    }

    pub fn offset(&self) -> &Vector2<f64> {
        &self.b
    }

    pub fn center(&self) -> Point2 {
        let inv = self.a.try_inverse().expect("positive definite matrix is invertible");
        Point2::from_vector(inv * self.b)
    }

    /// `(semi_major, semi_minor)` in meters.
    pub fn semi_axes(&self) -> (f64, f64) {
        let (small, large, _) = symmetric_eigen(&self.a);
        (1.0 / small, 1.0 / large)
    }

    /// Angle of the major axis from the x axis, in `[0, π)`.
    pub fn orientation(&self) -> f64 {
        symmetric_eigen(&self.a).2
    }

    pub fn area(&self) -> f64 {
        let (major, minor) = self.semi_axes();
        PI * major * minor
    }

    /// `‖A·p − b‖₂`; at most one exactly on the closed ellipse.
    pub fn level(&self, p: &Point2) -> f64 {
        (self.a * p.to_vector() - self.b).norm()
    }

    /// Boundary counts as inside.
    pub fn contains(&self, p: &Point2) -> bool {
        self.level(p) <= 1.0
    }

    /// Same shape and center, every semi-axis multiplied by `factor`.
    fn scaled(&self, factor: f64) -> Self {
        Self {
            a: self.a / factor,
            b: self.b / factor,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EllipseRecord {
    a: [[f64; 2]; 2],
    b: [f64; 2],
    #[serde(default)]
    center: Option<Point2>,
    #[serde(default)]
    semi_major: Option<f64>,
    #[serde(default)]
    semi_minor: Option<f64>,
    #[serde(default)]
    orientation: Option<f64>,
}

impl From<Ellipse> for EllipseRecord {
    fn from(e: Ellipse) -> Self {
        let (major, minor) = e.semi_axes();
        Self {
            a: [[e.a[(0, 0)], e.a[(0, 1)]], [e.a[(1, 0)], e.a[(1, 1)]]],
            b: [e.b.x, e.b.y],
            center: Some(e.center()),
            semi_major: Some(major),
            semi_minor: Some(minor),
            orientation: Some(e.orientation()),
        }
    }
}

impl TryFrom<EllipseRecord> for Ellipse {
    type Error = Error;

    fn try_from(r: EllipseRecord) -> Result<Self> {
        Ellipse::new(
            Matrix2::new(r.a[0][0], r.a[0][1], r.a[1][0], r.a[1][1]),
            Vector2::new(r.b[0], r.b[1]),
        )
    }
}

/// Solver settings for [`mvee`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    /// Stop once a regular weight update moves the weights by less than this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Floor on each semi-axis, meters. Degenerate point sets are inflated to it.
    pub min_semi_axis: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-7,
            max_iterations: 10_000,
            min_semi_axis: 1.0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || !(self.min_semi_axis > 0.0) || self.max_iterations == 0 {
            return Err(Error::InvalidArgument(format!("invalid fit config {self:?}")));
        }
        Ok(())
    }
}

/// Ratio of covariance eigenvalues below which a point set is treated as collinear.
const COLLINEAR_RATIO: f64 = 1e-12;

/// Minimum-area ellipse enclosing `points`.
///
/// Khachiyan's barycentric scheme on the lifted points `(x, y, 1)`, with
/// Todd–Yıldırım away steps so the weights of interior points drop to zero
/// instead of decaying geometrically. The converged ellipse is rescaled about
/// its center so that the farthest point lies exactly on the boundary, and
/// each semi-axis is clamped below by `cfg.min_semi_axis`.
pub fn mvee(points: &[Point2], cfg: &FitConfig) -> Result<Ellipse> {
    if points.is_empty() {
        return Err(Error::NoPoints);
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidPoint { x: p.x, y: p.y });
    }
    cfg.validate()?;

    // Work in a normalized frame: q = (p − mean) / scale.
    let mean = centroid(points);
    let scale = points
        .iter()
        .map(|p| (p.x - mean.x).abs().max((p.y - mean.y).abs()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ellipse::circle(points[0], cfg.min_semi_axis);
    }
    let normalized: Vec<Vector2<f64>> = points
        .iter()
        .map(|p| Vector2::new((p.x - mean.x) / scale, (p.y - mean.y) / scale))
        .collect();

    let covariance = normalized
        .iter()
        .fold(Matrix2::zeros(), |acc, q| acc + q * q.transpose())
        / points.len() as f64;
    let (small, large, minor_angle) = symmetric_eigen(&covariance);

    let fitted = if small <= COLLINEAR_RATIO * large {
        fit_segment(&normalized, minor_angle + 0.5 * PI)
    } else {
        fit_khachiyan(&normalized, cfg)
    };
    let (center, semi_major, semi_minor, orientation) = fitted;

    let center = Point2::new(mean.x + scale * center.x, mean.y + scale * center.y);
    let ellipse = Ellipse::from_center_axes(
        center,
        (scale * semi_major).max(cfg.min_semi_axis),
        (scale * semi_minor).max(cfg.min_semi_axis),
        orientation,
    )?;
    Ok(enclose(ellipse, points))
}

/// Inflates `e` about its center until every point passes [`Ellipse::contains`].
fn enclose(mut e: Ellipse, points: &[Point2]) -> Ellipse {
    loop {
        let worst = points.iter().map(|p| e.level(p)).fold(0.0, f64::max);
        if worst <= 1.0 {
            return e;
        }
        e = e.scaled(worst * (1.0 + 4.0 * f64::EPSILON));
    }
}

type NormalizedFit = (Vector2<f64>, f64, f64, f64);

/// Collinear points: the covering segment, with a zero minor axis left for the floor.
fn fit_segment(points: &[Vector2<f64>], angle: f64) -> NormalizedFit {
    let dir = Vector2::new(angle.cos(), angle.sin());
    let (lo, hi) = points
        .iter()
        .map(|q| q.dot(&dir))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
    let mid = dir * (0.5 * (lo + hi));
    (mid, 0.5 * (hi - lo), 0.0, angle)
}

fn fit_khachiyan(points: &[Vector2<f64>], cfg: &FitConfig) -> NormalizedFit {
    const D: f64 = 2.0;
    let n = points.len();
    let lifted: Vec<Vector3<f64>> = points.iter().map(|q| Vector3::new(q.x, q.y, 1.0)).collect();
    let mut weights = vec![1.0 / n as f64; n];
    let mut moment = lifted
        .iter()
        .zip(&weights)
        .fold(Matrix3::zeros(), |acc, (q, w)| acc + q * q.transpose() * *w);

    for _ in 0..cfg.max_iterations {
        let Some(inverse) = moment.try_inverse() else {
            break;
        };
        let mut best_up = (0, f64::NEG_INFINITY);
        let mut best_down = (0, f64::INFINITY);
        for (i, q) in lifted.iter().enumerate() {
            let m = q.dot(&(inverse * q));
            if m > best_up.1 {
                best_up = (i, m);
            }
            if weights[i] > 0.0 && m < best_down.1 {
                best_down = (i, m);
            }
        }
        let up_gap = best_up.1 / (D + 1.0) - 1.0;
        let down_gap = 1.0 - best_down.1 / (D + 1.0);

        let (j, step, clipped) = if up_gap >= down_gap {
            let m = best_up.1;
            (best_up.0, (m - D - 1.0) / ((D + 1.0) * (m - 1.0)), false)
        } else {
            let (j, m) = best_down;
            let natural = (m - D - 1.0) / ((D + 1.0) * (m - 1.0));
            let limit = -weights[j] / (1.0 - weights[j]);
            if natural <= limit {
                (j, limit, true)
            } else {
                (j, natural, false)
            }
        };

        let change_sq: f64 = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let target = if i == j { 1.0 } else { 0.0 };
                (target - w) * (target - w)
            })
            .sum();
        let change = step.abs() * change_sq.sqrt();

        for w in weights.iter_mut() {
            *w *= 1.0 - step;
        }
        weights[j] += step;
        if clipped {
            weights[j] = 0.0;
        }
        moment = moment * (1.0 - step) + lifted[j] * lifted[j].transpose() * step;

        if !clipped && change < cfg.tolerance {
            break;
        }
    }

    let center: Vector2<f64> = points
        .iter()
        .zip(&weights)
        .fold(Vector2::zeros(), |acc, (q, w)| acc + q * *w);
    let scatter = points
        .iter()
        .zip(&weights)
        .fold(Matrix2::zeros(), |acc, (q, w)| acc + q * q.transpose() * *w)
        - center * center.transpose();
    let shape = match scatter.try_inverse() {
        Some(inv) => inv / D,
        None => return fit_segment(points, symmetric_eigen(&scatter).2 + 0.5 * PI),
    };
    // Tight about the weighted center: the farthest point lands on the boundary.
    let worst = points
        .iter()
        .map(|q| {
            let d = q - center;
            d.dot(&(shape * d))
        })
        .fold(0.0, f64::max);
    let shape = shape / worst;
    let (small, large, angle) = symmetric_eigen(&shape);
    (center, 1.0 / small.sqrt(), 1.0 / large.sqrt(), angle)
}

/// Largest horizontal distance from the ellipse center to any member.
pub fn edge_distance(e: &Ellipse, members: &[Point2]) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::NoPoints);
    }
    let c = e.center();
    Ok(members.iter().map(|p| p.distance(&c)).fold(0.0, f64::max))
}

pub fn contains(e: &Ellipse, p: &Point2) -> bool {
    e.contains(p)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    fn unit_circle() -> Ellipse {
        Ellipse::new(Matrix2::identity(), Vector2::zeros()).unwrap()
    }

    #[test]
    fn contains_is_boundary_inclusive() {
        let e = unit_circle();
        assert!(e.contains(&Point2::new(0.0, 0.0)));
        assert!(e.contains(&Point2::new(1.0, 0.0)));
        assert!(!e.contains(&Point2::new(1.01, 0.0)));
    }

    #[test]
    fn symmetric_cross_fits_unit_circle() {
        let pts = [
            Point2::new(1.0, 0.0),
            Point2::new(-1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.0, -1.0),
        ];
        let cfg = FitConfig { min_semi_axis: 1e-6, ..FitConfig::default() };
        let e = mvee(&pts, &cfg).unwrap();
        let a = e.matrix();
        assert_abs_diff_eq!(a[(0, 0)], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(a[(1, 1)], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(a[(0, 1)], 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(e.offset().norm(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn single_point_gets_floor_circle() {
        let e = mvee(&[Point2::new(5.0, 5.0)], &FitConfig::default()).unwrap();
        let c = e.center();
        assert_abs_diff_eq!(c.x, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.y, 5.0, epsilon = 1e-12);
        let (major, minor) = e.semi_axes();
        assert_abs_diff_eq!(major, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(minor, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn collinear_points_get_floor_minor_axis() {
        let pts: Vec<_> = (0..5).map(|i| Point2::new(10.0 * i as f64, 5.0 * i as f64)).collect();
        let e = mvee(&pts, &FitConfig::default()).unwrap();
        let (major, minor) = e.semi_axes();
        assert_abs_diff_eq!(major, 0.5 * (40.0f64).hypot(20.0), epsilon = 1e-9);
        assert_abs_diff_eq!(minor, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.orientation(), 0.5f64.atan(), epsilon = 1e-12);
        assert!(pts.iter().all(|p| e.contains(p)));
    }

    #[test]
    fn two_points_span_major_axis() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)];
        let e = mvee(&pts, &FitConfig::default()).unwrap();
        let (major, minor) = e.semi_axes();
        assert_abs_diff_eq!(major, 5.0, epsilon = 1e-9);
        assert_abs_diff_eq!(minor, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.center().x, 5.0, epsilon = 1e-9);
    }

    #[test]
    fn errors_on_empty_and_non_finite() {
        assert!(matches!(mvee(&[], &FitConfig::default()), Err(Error::NoPoints)));
        let bad = [Point2::new(f64::NAN, 0.0)];
        assert!(matches!(mvee(&bad, &FitConfig::default()), Err(Error::InvalidPoint { .. })));
    }

    #[test]
    fn derived_quantities_match_construction() {
        let e = Ellipse::from_center_axes(Point2::new(3.0, -2.0), 5.0, 2.0, 0.3).unwrap();
        let (major, minor) = e.semi_axes();
        assert_abs_diff_eq!(major, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(minor, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.orientation(), 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(e.center().x, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.area(), PI * 10.0, epsilon = 1e-9);
        let inv_det = 1.0 / e.matrix().determinant();
        assert_abs_diff_eq!(e.area(), PI * inv_det, epsilon = 1e-9);
    }

    #[test]
    fn swapped_axes_are_reordered() {
        let e = Ellipse::from_center_axes(Point2::default(), 2.0, 5.0, 0.0).unwrap();
        assert_abs_diff_eq!(e.orientation(), 0.5 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(e.semi_axes().0, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let a = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        assert!(Ellipse::new(a, Vector2::zeros()).is_err());
    }

    #[test]
    fn edge_distance_examples() {
        let e = unit_circle();
        assert_eq!(edge_distance(&e, &[Point2::default()]).unwrap(), 0.0);
        let d = edge_distance(&e, &[Point2::default(), Point2::new(3.0, 4.0)]).unwrap();
        assert_abs_diff_eq!(d, 5.0, epsilon = 1e-12);
        assert!(edge_distance(&e, &[]).is_err());
    }

    #[test]
    fn serde_round_trip_preserves_matrix() {
        let e = Ellipse::from_center_axes(Point2::new(1.0, 2.0), 4.0, 3.0, 1.0).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        let back: Ellipse = serde_json::from_str(&json).unwrap();
        assert_eq!(e, back);
    }
}
