//! Deterministic seminorm kernels: the O(N^2) full pair sum, gradient
//! energies for the s = 1 endpoint, Lipschitz norms and the
//! Gagliardo-Nirenberg ratio check.
//!
//! The pair sum is parallelized over fixed row chunks whose partial sums
//! are combined in chunk order, so results are bit-identical across runs
//! and thread counts.

use super::{Domain, DiagonalRule, KernelDistance, SeminormEstimate, SeminormMethod, SeminormSpec};
use crate::error::{Error, Result};
use crate::geometry::{operator_norm, sphere_area, QuadratureRule};
use crate::mapzoo::SphereMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const CHUNK: usize = 64;

/// Average of |J xi|^p over unit directions xi, times |S^{m-1}|; the
/// coefficient of the closed-form near-diagonal band integral.
fn direction_integral_power(jac: &[f64], l: usize, m: usize, p: f64) -> f64 {
    match m {
        1 => {
            let norm2: f64 = jac.iter().map(|c| c * c).sum();
            2.0 * norm2.sqrt().powf(p)
        }
        2 => {
            let n_ang = 16;
            let mut acc = 0.0;
            for a in 0..n_ang {
                let t = TAU * (a as f64 + 0.5) / n_ang as f64;
                let (c, s) = (t.cos(), t.sin());
                let mut norm2 = 0.0;
                for i in 0..l {
                    let v = c * jac[i * 2] + s * jac[i * 2 + 1];
                    norm2 += v * v;
                }
                acc += norm2.sqrt().powf(p);
            }
            acc * TAU / n_ang as f64
        }
        _ => {
            // Lebedev-style average via a coarse product rule; only the
            // m <= 2 paths are exercised by the pair sum in practice.
            let rule = crate::geometry::make_quadrature(m - 1, 8).expect("direction rule");
            let mut acc = 0.0;
            for (node, w) in rule.nodes.iter().zip(&rule.weights) {
                let xi = node.coords();
                let mut norm2 = 0.0;
                for i in 0..l {
                    let v: f64 = (0..m).map(|j| jac[i * m + j] * xi[j]).sum();
                    norm2 += v * v;
                }
                acc += w * norm2.sqrt().powf(p);
            }
            acc
        }
    }
}

fn check_sphere_spec(f: &SphereMap, spec: &SeminormSpec, rule: &QuadratureRule) -> Result<usize> {
    let m = match spec.domain {
        Domain::Sphere(m) => m,
        Domain::Euclidean(_) => {
            return Err(Error::InvalidParameter(
                "pair-sum seminorm needs a sphere domain; use the Monte Carlo \
                 estimators for Euclidean domains"
                    .into(),
            ))
        }
    };
    if rule.dim != m {
        return Err(Error::DimensionMismatch {
            context: "seminorm: quadrature rule dimension",
            expected: m,
            got: rule.dim,
        });
    }
    if f.source_dim() != m {
        return Err(Error::DimensionMismatch {
            context: "seminorm: map source dimension",
            expected: m,
            got: f.source_dim(),
        });
    }
    Ok(m)
}

/// Full symmetric pair sum of |f(x_i)-f(x_j)|^p / dist^{m+sp} over node
/// pairs, diagonal pairs (dist < mesh/2) excluded.
pub fn fractional_seminorm(
    f: &SphereMap,
    spec: &SeminormSpec,
    rule: &QuadratureRule,
) -> Result<SeminormEstimate> {
    check_sphere_spec(f, spec, rule)?;
    if spec.s >= 1.0 {
        return Err(Error::InvalidParameter(
            "pair-sum seminorm needs s < 1; use gradient_energy at s = 1".into(),
        ));
    }
    let l = f.target_dim();
    let n = rule.len();
    let values: Vec<f64> = {
        let mut v = vec![0.0; n * l];
        v.par_chunks_mut(l)
            .zip(rule.nodes.par_iter())
            .for_each(|(chunk, p)| f.eval_into(p, chunk));
        v
    };
    let cutoff = match spec.diagonal {
        DiagonalRule::DropOnly => 0.5 * rule.mesh_size(),
        DiagonalRule::BandCorrected => 2.0 * rule.mesh_size(),
    };
    let exponent = spec.kernel_exponent();
    let p = spec.p;
    let geodesic = spec.distance == KernelDistance::Geodesic;

    let coords: Vec<&[f64]> = rule.nodes.iter().map(|u| u.coords()).collect();
    let n_chunks = n.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut acc = 0.0;
            for i in lo..hi {
                let xi = coords[i];
                let fi = &values[i * l..(i + 1) * l];
                let wi = rule.weights[i];
                for j in i + 1..n {
                    let xj = coords[j];
                    let mut d2 = 0.0;
                    for (a, b) in xi.iter().zip(xj) {
                        d2 += (a - b) * (a - b);
                    }
                    let dist = d2.sqrt();
                    if dist < cutoff {
                        continue;
                    }
                    let fj = &values[j * l..(j + 1) * l];
                    let mut fd2 = 0.0;
                    for (a, b) in fi.iter().zip(fj) {
                        fd2 += (a - b) * (a - b);
                    }
                    if fd2 == 0.0 {
                        continue;
                    }
                    let den = if geodesic {
                        2.0 * (dist / 2.0).asin()
                    } else {
                        dist
                    };
                    acc += wi * rule.weights[j] * fd2.sqrt().powf(p) / den.powf(exponent);
                }
            }
            acc
        })
        .collect();
    // Chunk partials combined in fixed order.
    let mut power = 2.0 * partials.iter().sum::<f64>();
    if spec.diagonal == DiagonalRule::BandCorrected {
        // Closed-form band integral of the locally-linear model:
        // int_{r < b} |Df(x) xi|^p r^{p - m - sp} r^{m-1} dr dxi
        //   = (int |Df xi|^p dxi) b^alpha / alpha with alpha = p (1 - s).
        let m = rule.dim;
        let alpha = p * (1.0 - spec.s);
        let band_factor = cutoff.powf(alpha) / alpha;
        let locals: Vec<f64> = rule
            .nodes
            .par_iter()
            .map(|node| {
                let jac = f.jacobian(node, 1e-4);
                direction_integral_power(&jac, l, m, p)
            })
            .collect();
        power += locals
            .iter()
            .zip(&rule.weights)
            .map(|(e, w)| w * e * band_factor)
            .sum::<f64>();
    }
    Ok(SeminormEstimate::deterministic(
        power,
        p,
        SeminormMethod::FullPairSum,
        n * (n - 1),
    ))
}

/// Quadrature of the Frobenius gradient energy: int |Df|^p d sigma, the
/// p-th power of the classical W^{1,p} seminorm (the s = 1 endpoint).
pub fn gradient_energy(f: &SphereMap, p: f64, rule: &QuadratureRule) -> f64 {
    let vals: Vec<f64> = rule
        .nodes
        .par_iter()
        .map(|node| {
            let jac = f.jacobian(node, 1e-4);
            let fr: f64 = jac.iter().map(|c| c * c).sum::<f64>().sqrt();
            fr.powf(p)
        })
        .collect();
    vals.iter().zip(&rule.weights).map(|(v, w)| v * w).sum()
}

/// Max over nodes of the operator norm of the numerical Jacobian.
pub fn lipschitz_norm(f: &SphereMap, rule: &QuadratureRule) -> f64 {
    rule.nodes
        .par_iter()
        .map(|node| {
            let jac = f.jacobian(node, 1e-4);
            operator_norm(&jac, f.target_dim(), f.source_dim())
        })
        .reduce(|| 0.0, f64::max)
}

/// Max of |f| over the nodes.
pub fn sup_norm(f: &SphereMap, rule: &QuadratureRule) -> f64 {
    rule.nodes
        .par_iter()
        .map(|node| {
            let v = f.eval(node);
            v.iter().map(|c| c * c).sum::<f64>().sqrt()
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GnRatio {
    Ratio(f64),
    /// The map is constant: the interpolation bound degenerates to 0 <= 0.
    NotApplicable,
}

impl GnRatio {
    pub fn value(&self) -> Option<f64> {
        match self {
            GnRatio::Ratio(r) => Some(*r),
            GnRatio::NotApplicable => None,
        }
    }
}

/// Ratio of [f]_{W^{s,n/s}}^{n/s} against the Gagliardo-Nirenberg bound
/// ||f||_inf^{n(1-s)/s} * int |Df|^n. Bounded ratios over a family verify
/// the interpolation constant numerically.
pub fn gagliardo_nirenberg_ratio(
    f: &SphereMap,
    s: f64,
    rule: &QuadratureRule,
) -> Result<GnRatio> {
    let n = rule.dim;
    if !(0.0 < s && s < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gagliardo_nirenberg_ratio needs s in (0, 1), got {s}"
        )));
    }
    let spec = SeminormSpec::critical(s, Domain::Sphere(n))?;
    let energy = gradient_energy(f, n as f64, rule);
    if energy < 1e-300 {
        return Ok(GnRatio::NotApplicable);
    }
    let sup = sup_norm(f, rule);
    let numerator = fractional_seminorm(f, &spec, rule)?.power;
    let denominator = sup.powf(n as f64 * (1.0 - s) / s) * energy;
    Ok(GnRatio::Ratio(numerator / denominator))
}
