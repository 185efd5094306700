//! Integration regions in chart coordinates.

use serde::{Deserialize, Serialize};

use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        BoxRegion { lo, hi }
    }

    pub fn around(center: &[f64], halfwidths: &[f64]) -> Self {
        BoxRegion {
            lo: center.iter().zip(halfwidths).map(|(c, h)| c - h).collect(),
            hi: center.iter().zip(halfwidths).map(|(c, h)| c + h).collect(),
        }
    }

    pub fn unbounded(n: usize) -> Self {
        BoxRegion { lo: vec![f64::NEG_INFINITY; n], hi: vec![f64::INFINITY; n] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|v| v.is_finite())
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a).max(0.0)).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| v >= a && v <= b)
    }

    pub fn intersect(&self, other: &BoxRegion) -> Option<BoxRegion> {
        let b = BoxRegion {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect(),
        };
        if b.is_empty() {
            None
        } else {
            Some(b)
        }
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &BoxRegion) -> BoxRegion {
        BoxRegion {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }

    pub fn overlaps(&self, other: &BoxRegion) -> bool {
        self.intersect(other).is_some()
    }
}

/// The ellipsoid {center + shape·z : |z| ≤ radius}.
#[derive(Clone, Debug, PartialEq)]
pub struct BallRegion {
    pub center: Vec<f64>,
    pub radius: f64,
    pub shape: Mat,
}

impl BallRegion {
    /// A round coordinate ball.
    pub fn coordinate(center: Vec<f64>, radius: f64) -> Self {
        let n = center.len();
        BallRegion { center, radius, shape: Mat::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn bounding_box(&self) -> BoxRegion {
        let n = self.dim();
        let half: Vec<f64> = (0..n)
            .map(|i| self.radius * (0..n).map(|j| self.shape[(i, j)].powi(2)).sum::<f64>().sqrt())
            .collect();
        BoxRegion::around(&self.center, &half)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Box(BoxRegion),
    Ball(BallRegion),
}

impl Region {
    pub fn dim(&self) -> usize {
        match self {
            Region::Box(b) => b.dim(),
            Region::Ball(b) => b.dim(),
        }
    }

    pub fn bounding_box(&self) -> BoxRegion {
        match self {
            Region::Box(b) => b.clone(),
            Region::Ball(b) => b.bounding_box(),
        }
    }

    /// Restricts the region to a support box; None if they are disjoint.
    pub fn restrict(&self, support: Option<&BoxRegion>) -> Option<Region> {
        let Some(s) = support else { return Some(self.clone()) };
        match self {
            Region::Box(b) => b.intersect(s).map(Region::Box),
            Region::Ball(b) => b.bounding_box().intersect(s).map(|_| self.clone()),
        }
    }
}
