//! Points and distance metrics on the plane.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A point in the plane. Coordinates are unitless, nominally in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    /// Construct a point, rejecting NaN and infinite coordinates.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Distance convention between two points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Exact Euclidean distance.
    #[serde(rename = "exact")]
    Euclidean,
    /// Euclidean rounded to the nearest integer (TSPLIB `EUC_2D` convention).
    #[serde(rename = "tsplib")]
    TsplibEuc2d,
    /// Euclidean with wraparound on the unit square; requires coordinates in `[0, 1]`.
    #[serde(rename = "torus")]
    Torus,
}

impl Metric {
    /// Distance between two points under this metric.
    ///
    /// Assumes the points satisfy the metric's preconditions (finite, and in
    /// `[0, 1]` for `Torus`); use [`distance`] for the checked variant.
    #[inline]
    pub fn dist(self, a: Point, b: Point) -> f64 {
        match self {
            Metric::Euclidean => {
                let dx = a.x - b.x;
                let dy = a.y - b.y;
                (dx * dx + dy * dy).sqrt()
            }
            Metric::TsplibEuc2d => {
                let dx = a.x - b.x;
                let dy = a.y - b.y;
                nint((dx * dx + dy * dy).sqrt())
            }
            Metric::Torus => {
                let dx = wrap(a.x - b.x);
                let dy = wrap(a.y - b.y);
                (dx * dx + dy * dy).sqrt()
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "exact",
            Metric::TsplibEuc2d => "tsplib",
            Metric::Torus => "torus",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "euclidean" => Ok(Metric::Euclidean),
            "tsplib" | "euc_2d" => Ok(Metric::TsplibEuc2d),
            "torus" => Ok(Metric::Torus),
            other => Err(Error::InvalidInput(format!(
                "unknown metric '{other}' (expected exact, tsplib, or torus)"
            ))),
        }
    }
}

/// TSPLIB nearest-integer rounding.
#[inline]
fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Shortest signed offset on the unit circle.
#[inline]
fn wrap(d: f64) -> f64 {
    let d = d.abs();
    d.min(1.0 - d)
}

/// Checked distance: validates finiteness and, for `Torus`, the unit-square range.
pub fn distance(a: Point, b: Point, metric: Metric) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite point in distance: ({}, {}) / ({}, {})",
            a.x, a.y, b.x, b.y
        )));
    }
    if metric == Metric::Torus {
        for p in [a, b] {
            if !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y) {
                return Err(Error::InvalidInput(format!(
                    "torus metric requires coordinates in [0,1], got ({}, {})",
                    p.x, p.y
                )));
            }
        }
    }
    Ok(metric.dist(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y).unwrap()
    }

    #[test]
    fn euclidean_3_4_5() {
        assert_eq!(distance(p(0.0, 0.0), p(3.0, 4.0), Metric::Euclidean).unwrap(), 5.0);
    }

    #[test]
    fn tsplib_rounds_to_nearest() {
        assert_eq!(distance(p(0.0, 0.0), p(1.4, 0.0), Metric::TsplibEuc2d).unwrap(), 1.0);
        assert_eq!(distance(p(0.0, 0.0), p(1.5, 0.0), Metric::TsplibEuc2d).unwrap(), 2.0);
    }

    #[test]
    fn torus_wraps_around() {
        let d = distance(p(0.05, 0.5), p(0.95, 0.5), Metric::Torus).unwrap();
        assert!((d - 0.10).abs() < 1e-12);
    }

    #[test]
    fn torus_rejects_out_of_range() {
        assert!(distance(p(1.5, 0.0), p(0.0, 0.0), Metric::Torus).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Point::new(f64::NAN, 0.0).is_err());
        assert!(Point::new(0.0, f64::INFINITY).is_err());
        let bad = Point { x: f64::NAN, y: 0.0 };
        assert!(distance(bad, p(0.0, 0.0), Metric::Euclidean).is_err());
    }

    #[test]
    fn metric_round_trips_through_str() {
        for m in [Metric::Euclidean, Metric::TsplibEuc2d, Metric::Torus] {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
    }
}
