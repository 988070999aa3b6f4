//! Quadrature rules on S^1, S^2 and S^3 with positive weights summing to
//! the exact surface area. S^3 uses Hopf coordinates so that Hopf fibers
//! run along coordinate circles.

use super::{sphere_area, UnitVector};
use crate::error::{Error, Result};
use std::f64::consts::TAU;
use std::num::NonZeroUsize;

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub dim: usize,
    pub nodes: Vec<UnitVector>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(&UnitVector) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }

    /// Typical node spacing (|S^m| / N)^{1/m}; the pair-sum seminorm uses
    /// half of it as its near-diagonal cutoff.
    pub fn mesh_size(&self) -> f64 {
        (sphere_area(self.dim) / self.len() as f64).powf(1.0 / self.dim as f64)
    }
}

fn gauss_legendre_01(n: usize) -> Vec<(f64, f64)> {
    let gl = gauss_quad::GaussLegendre::new(NonZeroUsize::new(n).expect("n >= 1"));
    // Map from [-1, 1] to [0, 1].
    gl.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// Builds a rule on S^m. `resolution` controls the nodes per coordinate
/// direction; the total node count is resolution (S^1), 2 resolution^2
/// (S^2) or resolution^3 (S^3).
pub fn make_quadrature(m: usize, resolution: usize) -> Result<QuadratureRule> {
    if resolution < 4 {
        return Err(Error::InvalidParameter(format!(
            "quadrature resolution must be >= 4, got {resolution}"
        )));
    }
    match m {
        1 => {
            let n = resolution;
            let w = TAU / n as f64;
            let nodes = (0..n)
                .map(|i| {
                    let a = TAU * i as f64 / n as f64;
                    UnitVector::from_unit(vec![a.cos(), a.sin()])
                })
                .collect();
            Ok(QuadratureRule {
                dim: 1,
                nodes,
                weights: vec![w; n],
            })
        }
        2 => {
            // Gauss-Legendre in cos(theta), uniform azimuth.
            let n_pol = resolution;
            let n_az = 2 * resolution;
            let gl = gauss_quad::GaussLegendre::new(NonZeroUsize::new(n_pol).unwrap());
            let mut nodes = Vec::with_capacity(n_pol * n_az);
            let mut weights = Vec::with_capacity(n_pol * n_az);
            let waz = TAU / n_az as f64;
            for &(u, wu) in gl.as_node_weight_pairs() {
                let sin_t = (1.0 - u * u).max(0.0).sqrt();
                for j in 0..n_az {
                    let phi = TAU * (j as f64 + 0.5) / n_az as f64;
                    nodes.push(UnitVector::from_unit(vec![
                        sin_t * phi.cos(),
                        sin_t * phi.sin(),
                        u,
                    ]));
                    weights.push(wu * waz);
                }
            }
            Ok(QuadratureRule {
                dim: 2,
                nodes,
                weights,
            })
        }
        3 => {
            // Hopf coordinates (cos xi e^{i phi1}, sin xi e^{i phi2});
            // with t = sin^2 xi the measure is (1/2) dt dphi1 dphi2, so a
            // Gauss rule in t gives the exact-weight product structure.
            let n_t = resolution;
            let n_phi = resolution;
            let mut nodes = Vec::with_capacity(n_t * n_phi * n_phi);
            let mut weights = Vec::with_capacity(n_t * n_phi * n_phi);
            let wphi = TAU / n_phi as f64;
            for (t, wt) in gauss_legendre_01(n_t) {
                let xi = t.sqrt().asin();
                let (cx, sx) = (xi.cos(), xi.sin());
                for i in 0..n_phi {
                    let p1 = TAU * (i as f64 + 0.5) / n_phi as f64;
                    for j in 0..n_phi {
                        let p2 = TAU * (j as f64 + 0.25) / n_phi as f64;
                        nodes.push(UnitVector::from_unit(vec![
                            cx * p1.cos(),
                            cx * p1.sin(),
                            sx * p2.cos(),
                            sx * p2.sin(),
                        ]));
                        weights.push(0.5 * wt * wphi * wphi);
                    }
                }
            }
            Ok(QuadratureRule {
                dim: 3,
                nodes,
                weights,
            })
        }
        _ => Err(Error::UnsupportedDimension(m)),
    }
}
