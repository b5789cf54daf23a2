//! Planar points and finite point sets.

use crate::{Error, Result};
use std::ops::{Add, Sub};

/// A point in the plane. Coordinates are meters in the movement application,
/// abstract units otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Point2 { x1, x2 }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// Euclidean norm of the position vector.
    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub(crate) fn ensure_finite(&self, context: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite { context })
        }
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x1, x2): (f64, f64)) -> Self {
        Point2 { x1, x2 }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

/// A nonempty, ordered collection of planar points. Order is preserved: in
/// the empirical-reference setting it encodes observation time.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet2 {
    points: Vec<Point2>,
}

impl PointSet2 {
    /// Builds a point set, rejecting empty input and non-finite coordinates.
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyReference);
        }
        for p in &points {
            p.ensure_finite("point set coordinate")?;
        }
        Ok(PointSet2 { points })
    }

    /// Convenience constructor from coordinate pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::new(pairs.into_iter().map(Point2::from).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point2> {
        self.points.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(PointSet2::new(vec![]).is_err());
        assert!(PointSet2::from_pairs([(0.0, f64::NAN)]).is_err());
        assert!(PointSet2::from_pairs([(1.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn preserves_order() {
        let s = PointSet2::from_pairs([(1.0, 2.0), (3.0, 4.0)]).unwrap();
        assert_eq!(s.points()[0], Point2::new(1.0, 2.0));
        assert_eq!(s.points()[1], Point2::new(3.0, 4.0));
        assert_eq!(s.len(), 2);
    }
}
