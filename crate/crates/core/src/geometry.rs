//! Euclidean primitives and the point-to-edge distance used by every MST
//! class descriptor.
//!
//! A test point is measured against an edge `(xi, xj)` by projecting it onto
//! the supporting line. When the foot of the projection falls on the closed
//! segment the perpendicular distance is used, otherwise the distance to the
//! closer endpoint.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weighted tree edge between two sample indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Euclidean length between the endpoint samples.
    pub weight: f64,
}

impl Edge {
    pub fn new(a: usize, b: usize, weight: f64) -> Self {
        Edge { a, b, weight }
    }

    /// The endpoint opposite to `node`.
    pub fn other(&self, node: usize) -> usize {
        if self.a == node {
            self.b
        } else {
            self.a
        }
    }

    pub(crate) fn ordered_endpoints(&self) -> (usize, usize) {
        if self.a <= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }
}

fn check_dims(u: &[f64], v: &[f64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn squared_distance(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

#[inline]
pub(crate) fn distance(u: &[f64], v: &[f64]) -> f64 {
    squared_distance(u, v).sqrt()
}

/// Euclidean distance between two samples of equal dimensionality.
pub fn euclidean(u: &[f64], v: &[f64]) -> Result<f64> {
    check_dims(u, v)?;
    Ok(distance(u, v))
}

/// Position of the orthogonal projection of `x` along `xi -> xj`, as a
/// fraction of the edge: `0` is `xi`, `1` is `xj`.
pub fn project_scalar(x: &[f64], xi: &[f64], xj: &[f64]) -> Result<f64> {
    check_dims(xi, x)?;
    check_dims(xi, xj)?;
    let len2 = squared_distance(xj, xi);
    if len2 == 0.0 {
        return Err(Error::DegenerateEdge);
    }
    Ok(projection_numerator(x, xi, xj) / len2)
}

#[inline]
fn projection_numerator(x: &[f64], xi: &[f64], xj: &[f64]) -> f64 {
    xi.iter()
        .zip(xj)
        .zip(x)
        .map(|((a, b), p)| (b - a) * (p - a))
        .sum()
}

/// Distance from `x` to the edge `(xi, xj)`.
///
/// An edge whose endpoints coincide is treated as a single point.
pub fn distance_to_edge(x: &[f64], xi: &[f64], xj: &[f64]) -> Result<f64> {
    check_dims(xi, x)?;
    check_dims(xi, xj)?;
    Ok(edge_distance(x, xi, xj))
}

pub(crate) fn edge_distance(x: &[f64], xi: &[f64], xj: &[f64]) -> f64 {
    let len2 = squared_distance(xj, xi);
    if len2 == 0.0 {
        return distance(x, xi);
    }
    let t = projection_numerator(x, xi, xj) / len2;
    if (0.0..=1.0).contains(&t) {
        let foot2: f64 = xi
            .iter()
            .zip(xj)
            .zip(x)
            .map(|((a, b), p)| {
                let d = p - (a + t * (b - a));
                d * d
            })
            .sum();
        foot2.sqrt()
    } else {
        distance(x, xj).min(distance(x, xi))
    }
}
