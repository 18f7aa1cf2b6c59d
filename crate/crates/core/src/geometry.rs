//! Curve parameterization, periodic 1-D mesh and the Weierstrass discriminant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitude of the third harmonic in the modified circular parameterization.
pub const HARMONIC_AMPLITUDE: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    /// Weierstrass coefficient `a` in `y² = x³ + ax + b`.
    pub a: f64,
    pub b: f64,
    /// Parameterization radius.
    #[serde(rename = "R")]
    pub radius: f64,
    /// Node count.
    #[serde(rename = "N")]
    pub nodes: usize,
}

impl CurveParams {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 3 {
            return Err(Error::Input(format!("N must be at least 3 (got {})", self.nodes)));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Input(format!("R must be positive (got {})", self.radius)));
        }
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::Input("curve coefficients must be finite".into()));
        }
        Ok(())
    }
}

impl Default for CurveParams {
    fn default() -> Self {
        Self {
            a: -2.0,
            b: 1.0,
            radius: 1.0,
            nodes: 200,
        }
    }
}

/// Closed polygonal curve with `N` nodes; edge `i` joins node `i` to node `(i+1) mod N`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshCircle {
    pub t_values: Vec<f64>,
    pub nodes: Vec<[f64; 2]>,
    /// Dual-cell arc length around each node, between the adjacent parameter midpoints.
    pub arc_weights: Vec<f64>,
    /// Arc length of each edge.
    pub edge_lengths: Vec<f64>,
}

impl MeshCircle {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn periodic(&self) -> bool {
        true
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn total_length(&self) -> f64 {
        self.arc_weights.iter().sum()
    }
}

pub fn curve_point(radius: f64, t: f64) -> [f64; 2] {
    [
        radius * t.cos() + HARMONIC_AMPLITUDE * (3.0 * t).cos(),
        radius * t.sin() + HARMONIC_AMPLITUDE * (3.0 * t).sin(),
    ]
}

fn speed(radius: f64, t: f64) -> f64 {
    let dx = -radius * t.sin() - 3.0 * HARMONIC_AMPLITUDE * (3.0 * t).sin();
    let dy = radius * t.cos() + 3.0 * HARMONIC_AMPLITUDE * (3.0 * t).cos();
    dx.hypot(dy)
}

/// Two-panel trapezoid rule for the arc length over `[t0, t1]`.
fn arc_length(radius: f64, t0: f64, t1: f64) -> f64 {
    let mid = 0.5 * (t0 + t1);
    0.25 * (t1 - t0) * (speed(radius, t0) + 2.0 * speed(radius, mid) + speed(radius, t1))
}

pub fn parameterize(params: &CurveParams) -> Result<MeshCircle> {
    params.validate()?;
    let n = params.nodes;
    let step = 2.0 * PI / n as f64;
    let t_values: Vec<f64> = (0..n).map(|i| step * i as f64).collect();
    let nodes = t_values.iter().map(|&t| curve_point(params.radius, t)).collect();
    let edge_lengths = t_values
        .iter()
        .map(|&t| arc_length(params.radius, t, t + step))
        .collect();
    let arc_weights = t_values
        .iter()
        .map(|&t| arc_length(params.radius, t - 0.5 * step, t + 0.5 * step))
        .collect();
    Ok(MeshCircle {
        t_values,
        nodes,
        arc_weights,
        edge_lengths,
    })
}

/// `−16(4a³ + 27b²)`; nonzero means the cubic is nonsingular.
pub fn discriminant(a: f64, b: f64) -> f64 {
    -16.0 * (4.0 * a * a * a + 27.0 * b * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_node() {
        let mesh = parameterize(&CurveParams::default()).unwrap();
        assert_eq!(mesh.nodes[0], [1.1, 0.0]);
        assert_eq!(mesh.next(199), 0);
        assert!(mesh.periodic());
    }

    #[test]
    fn rejects_small_meshes() {
        let p = CurveParams {
            nodes: 2,
            ..Default::default()
        };
        assert!(matches!(parameterize(&p), Err(Error::Input(_))));
        let p = CurveParams {
            radius: 0.0,
            ..Default::default()
        };
        assert!(parameterize(&p).is_err());
    }

    #[test]
    fn weights_positive_and_deterministic() {
        let p = CurveParams::default();
        let m1 = parameterize(&p).unwrap();
        let m2 = parameterize(&p).unwrap();
        assert_eq!(m1, m2);
        assert!(m1.arc_weights.iter().all(|h| *h > 0.0));
        assert!(m1.edge_lengths.iter().all(|h| *h > 0.0));
    }

    #[test]
    fn discriminant_values() {
        assert_eq!(discriminant(-2.0, 1.0), 80.0);
        assert_eq!(discriminant(0.0, 0.0), 0.0);
        assert_eq!(discriminant(-3.0, 2.0), 0.0);
    }
}
