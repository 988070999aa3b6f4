//! Degree-d bubble maps: equal to a basepoint outside |d| disjoint geodesic
//! balls, with each ball wrapped once around the target sphere by a
//! polynomial cap profile.

use crate::error::{Error, Result};
use crate::geometry::{tangent_frame, UnitVector};
use std::f64::consts::{PI, TAU};

/// Radial profile factor q with q(0) = 1, q(1) = 0 and a double zero of q'
/// at t = 1: q'(t) = -(15/8)(1 - t^2)^2, so the glued map is C^2 at the
/// bubble boundary while the center stays a regular point of the map.
pub fn profile(t: f64) -> f64 {
    1.0 - t * (15.0 / 8.0) + t * t * t * (5.0 / 4.0) - t * t * t * t * t * (3.0 / 8.0)
}

pub fn profile_derivative(t: f64) -> f64 {
    let u = 1.0 - t * t;
    -(15.0 / 8.0) * u * u
}

/// Polar angle profile of one bubble of radius `rho`: Theta(0) = pi at the
/// center, Theta(rho) = 0 at the boundary.
pub fn bubble_theta(r: f64, rho: f64) -> f64 {
    PI * profile(r / rho)
}

/// |d Theta / d r| at the bubble center, the closed-form derivative the
/// finite-difference Jacobian is checked against.
pub fn center_slope(rho: f64) -> f64 {
    15.0 * PI / (8.0 * rho)
}

/// Centers and common radius of a family of disjoint geodesic balls.
#[derive(Debug, Clone)]
pub struct BubbleLayout {
    pub centers: Vec<UnitVector>,
    pub rho: f64,
    /// Ratio rho / min pairwise distance actually realized (packing record).
    pub packing_ratio: f64,
}

const GOLDEN_ANGLE: f64 = 2.399963229728653;

fn min_pairwise(centers: &[UnitVector]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in centers.iter().enumerate() {
        for b in centers.iter().skip(i + 1) {
            best = best.min(a.geodesic_distance(b));
        }
    }
    best
}

fn finish_layout(centers: Vec<UnitVector>, rho_cap: f64) -> Result<BubbleLayout> {
    let min_pair = min_pairwise(&centers);
    let rho = (0.4 * min_pair).min(rho_cap);
    if rho < 1e-3 {
        return Err(Error::PackingCapacity {
            count: centers.len(),
            capacity: centers.len().saturating_sub(1),
        });
    }
    Ok(BubbleLayout {
        packing_ratio: rho / min_pair,
        centers,
        rho,
    })
}

impl BubbleLayout {
    /// Uniform angles on S^1; the basepoint at angle 0 stays outside every
    /// ball because the centers are offset by half a spacing.
    pub fn circle(d: usize) -> Result<Self> {
        let centers: Vec<UnitVector> = (0..d)
            .map(|i| {
                let a = TAU * (i as f64 + 0.5) / d as f64;
                UnitVector::from_unit(vec![a.cos(), a.sin()])
            })
            .collect();
        if d == 1 {
            return Ok(BubbleLayout {
                centers,
                rho: 0.4 * TAU,
                packing_ratio: 0.4,
            });
        }
        finish_layout(centers, 0.4 * TAU)
    }

    /// Fibonacci lattice on the cap z > -0.6 of S^2, keeping the south-pole
    /// basepoint clear of every ball.
    pub fn sphere(d: usize) -> Result<Self> {
        let z_lo = -0.6;
        let margin = 0.9 * (PI - (z_lo as f64).acos());
        if d == 1 {
            return Ok(BubbleLayout {
                centers: vec![UnitVector::north_pole(2)],
                rho: margin.min(0.8),
                packing_ratio: 0.0,
            });
        }
        let centers = (0..d)
            .map(|i| {
                let z = 1.0 - (1.0 - z_lo) * (i as f64 + 0.5) / d as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = GOLDEN_ANGLE * i as f64;
                UnitVector::from_unit(vec![r * phi.cos(), r * phi.sin(), z])
            })
            .collect();
        finish_layout(centers, margin)
    }

    /// Band layout on S^2 used by the Whitehead inner maps: all balls stay
    /// inside the polar cap theta + rho <= theta_lim, so the map composed
    /// with the stereographic chart is constant outside a disk of radius
    /// tan(theta_lim / 2) < 1.
    pub fn polar_cap(k: usize, theta_lim: f64) -> Result<Self> {
        let centers: Vec<UnitVector> = match k {
            0 => Vec::new(),
            1 => vec![UnitVector::north_pole(2)],
            2 => ring(2, 0.73),
            3 => ring(3, 0.85),
            4 => {
                let mut c = vec![UnitVector::north_pole(2)];
                c.extend(ring(3, 1.05));
                c
            }
            _ => {
                // Fibonacci points on the cap theta <= 0.75 * theta_lim.
                let z_lo = (0.75 * theta_lim).cos();
                (0..k)
                    .map(|i| {
                        let z = 1.0 - (1.0 - z_lo) * (i as f64 + 0.5) / k as f64;
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        let phi = GOLDEN_ANGLE * i as f64;
                        UnitVector::from_unit(vec![r * phi.cos(), r * phi.sin(), z])
                    })
                    .collect()
            }
        };
        if k == 1 {
            return Ok(BubbleLayout {
                centers,
                rho: (theta_lim - 1e-3).min(1.45),
                packing_ratio: 0.0,
            });
        }
        let min_pair = min_pairwise(&centers);
        let max_theta = centers
            .iter()
            .map(|c| c.coords()[2].clamp(-1.0, 1.0).acos())
            .fold(0.0f64, f64::max);
        let rho = (0.4 * min_pair).min(theta_lim - max_theta - 1e-3);
        if rho < 1e-3 {
            return Err(Error::PackingCapacity {
                count: k,
                capacity: k.saturating_sub(1),
            });
        }
        Ok(BubbleLayout {
            packing_ratio: rho / min_pair,
            centers,
            rho,
        })
    }

    /// Equally spaced centers on the (x1, x2) great circle of S^3, a
    /// quarter turn away from both poles. Used for degree-k precompositions
    /// of the Hopf fibration.
    pub fn equatorial_s3(k: usize) -> Result<Self> {
        let centers: Vec<UnitVector> = (0..k)
            .map(|i| {
                let a = TAU * (i as f64 + 0.5) / k as f64;
                UnitVector::from_unit(vec![a.cos(), a.sin(), 0.0, 0.0])
            })
            .collect();
        if k == 1 {
            return Ok(BubbleLayout {
                centers,
                rho: 0.9,
                packing_ratio: 0.0,
            });
        }
        finish_layout(centers, 0.9)
    }
}

fn ring(count: usize, theta: f64) -> Vec<UnitVector> {
    (0..count)
        .map(|i| {
            let phi = TAU * i as f64 / count as f64;
            UnitVector::from_unit(vec![
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ])
        })
        .collect()
}

/// A degree-d map S^n -> S^n equal to `basepoint` outside the bubbles.
#[derive(Debug, Clone)]
pub struct BubbleMap {
    pub n: usize,
    pub degree: i64,
    pub layout: BubbleLayout,
    pub basepoint: UnitVector,
    center_frames: Vec<Vec<Vec<f64>>>,
    /// Oriented frame at the basepoint; the first vector is flipped for
    /// positive-degree bubbles so each ball carries local degree sign(d).
    target_frame: Vec<Vec<f64>>,
}

impl BubbleMap {
    /// The standard families: n = 1 circle layout, n = 2 Fibonacci layout,
    /// n = 3 equatorial layout, all with |d| bubbles of degree sign(d).
    pub fn new(n: usize, d: i64) -> Result<Self> {
        let count = d.unsigned_abs() as usize;
        let (layout, basepoint) = match n {
            1 => (
                if count == 0 {
                    BubbleLayout {
                        centers: vec![],
                        rho: 1.0,
                        packing_ratio: 0.0,
                    }
                } else {
                    BubbleLayout::circle(count)?
                },
                UnitVector::from_unit(vec![1.0, 0.0]),
            ),
            2 => (
                if count == 0 {
                    BubbleLayout {
                        centers: vec![],
                        rho: 1.0,
                        packing_ratio: 0.0,
                    }
                } else {
                    BubbleLayout::sphere(count)?
                },
                UnitVector::south_pole(2),
            ),
            3 => (
                if count == 0 {
                    BubbleLayout {
                        centers: vec![],
                        rho: 1.0,
                        packing_ratio: 0.0,
                    }
                } else {
                    BubbleLayout::equatorial_s3(count)?
                },
                UnitVector::north_pole(3),
            ),
            _ => return Err(Error::UnsupportedDimension(n)),
        };
        Self::with_layout(n, d, layout, basepoint)
    }

    pub fn with_layout(
        n: usize,
        d: i64,
        layout: BubbleLayout,
        basepoint: UnitVector,
    ) -> Result<Self> {
        for c in &layout.centers {
            if c.geodesic_distance(&basepoint) <= layout.rho {
                return Err(Error::InvalidParameter(format!(
                    "basepoint lies inside a bubble (dist {} <= rho {})",
                    c.geodesic_distance(&basepoint),
                    layout.rho
                )));
            }
        }
        let center_frames = layout.centers.iter().map(tangent_frame).collect();
        let mut target_frame = tangent_frame(&basepoint);
        // With both frames positively oriented each cap carries local degree
        // -1 at the antipode of the basepoint; flipping one target vector
        // makes it +1.
        if d > 0 {
            for c in target_frame[0].iter_mut() {
                *c = -*c;
            }
        }
        Ok(Self {
            n,
            degree: d,
            layout,
            basepoint,
            center_frames,
            target_frame,
        })
    }

    pub fn rho(&self) -> f64 {
        self.layout.rho
    }

    /// Closed-form |Df| at each bubble center: 15 pi / (8 rho).
    pub fn center_derivative(&self) -> f64 {
        center_slope(self.layout.rho)
    }

    pub fn eval_into(&self, p: &UnitVector, out: &mut [f64]) {
        let rho = self.layout.rho;
        for (center, frame) in self.layout.centers.iter().zip(&self.center_frames) {
            let cosr = p.dot(center).clamp(-1.0, 1.0);
            if cosr <= rho.cos() {
                continue;
            }
            let r = cosr.acos();
            let theta = bubble_theta(r, rho);
            let (st, ct) = (theta.sin(), theta.cos());
            if r < 1e-9 {
                // Center maps to the antipode of the basepoint.
                for (o, b) in out.iter_mut().zip(self.basepoint.coords()) {
                    *o = ct * b;
                }
                return;
            }
            let sinr = r.sin();
            // Unit log direction xi in T_center, expressed in the frame.
            for (i, o) in out.iter_mut().enumerate() {
                *o = ct * self.basepoint.coords()[i];
            }
            for (e_src, f_tgt) in frame.iter().zip(&self.target_frame) {
                let xi_j = p
                    .coords()
                    .iter()
                    .zip(e_src)
                    .map(|(pc, ec)| pc * ec)
                    .sum::<f64>()
                    / sinr;
                for (o, fc) in out.iter_mut().zip(f_tgt) {
                    *o += st * xi_j * fc;
                }
            }
            return;
        }
        out.copy_from_slice(self.basepoint.coords());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_endpoints_and_slopes() {
        assert!((profile(0.0) - 1.0).abs() < 1e-15);
        assert!(profile(1.0).abs() < 1e-15);
        assert!((profile_derivative(0.0) + 15.0 / 8.0).abs() < 1e-15);
        assert!(profile_derivative(1.0).abs() < 1e-15);
        // Monotone decreasing on [0, 1].
        for i in 0..100 {
            assert!(profile_derivative(i as f64 / 100.0) <= 0.0);
        }
        // C^2 join: second derivative also vanishes at t = 1.
        let h = 1e-6;
        let d2 = (profile_derivative(1.0) - profile_derivative(1.0 - h)) / h;
        assert!(d2.abs() < 1e-4);
    }

    #[test]
    fn layouts_are_disjoint() {
        for d in 1..=16 {
            let lay = BubbleLayout::circle(d).unwrap();
            assert_eq!(lay.centers.len(), d);
            if d > 1 {
                assert!(2.0 * lay.rho < min_pairwise(&lay.centers));
            }
        }
        for d in [1usize, 2, 3, 4, 8, 16, 64] {
            let lay = BubbleLayout::sphere(d).unwrap();
            if d > 1 {
                assert!(
                    2.0 * lay.rho < min_pairwise(&lay.centers),
                    "d = {d}: rho {} vs min pair {}",
                    lay.rho,
                    min_pairwise(&lay.centers)
                );
            }
        }
        for k in 1..=4 {
            let lay = BubbleLayout::polar_cap(k, 1.46).unwrap();
            let max_extent = lay
                .centers
                .iter()
                .map(|c| c.coords()[2].clamp(-1.0, 1.0).acos() + lay.rho)
                .fold(0.0f64, f64::max);
            assert!(max_extent < 1.46, "k = {k}: extent {max_extent}");
            if k > 1 {
                assert!(2.0 * lay.rho < min_pairwise(&lay.centers));
            }
        }
    }

    #[test]
    fn rho_scales_like_d_to_minus_one_over_n() {
        // Circle layout: rho_d = 0.8 pi / d exactly.
        for d in [2usize, 4, 8, 16] {
            let lay = BubbleLayout::circle(d).unwrap();
            assert!((lay.rho * d as f64 - 0.8 * PI).abs() < 1e-12);
        }
        // Fibonacci layout: rho_d * sqrt(d) stays within a factor 1.6.
        let vals: Vec<f64> = [4usize, 8, 16, 32, 64]
            .iter()
            .map(|&d| BubbleLayout::sphere(d).unwrap().rho * (d as f64).sqrt())
            .collect();
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(hi / lo < 1.6, "rho sqrt(d) spread {vals:?}");
    }

    #[test]
    fn map_is_basepoint_outside_and_antipode_at_centers() {
        let map = BubbleMap::new(2, 3).unwrap();
        let mut out = vec![0.0; 3];
        map.eval_into(&UnitVector::south_pole(2), &mut out);
        assert_eq!(out, map.basepoint.coords());
        for c in &map.layout.centers {
            map.eval_into(c, &mut out);
            let anti = map.basepoint.antipode();
            for (o, a) in out.iter().zip(anti.coords()) {
                assert!((o - a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn map_stays_on_the_sphere() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for n in [1usize, 2, 3] {
            let map = BubbleMap::new(n, 4).unwrap();
            let mut out = vec![0.0; n + 1];
            for _ in 0..2000 {
                let p = UnitVector::random(n, &mut rng);
                map.eval_into(&p, &mut out);
                let norm: f64 = out.iter().map(|c| c * c).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_degree_is_constant() {
        let map = BubbleMap::new(1, 0).unwrap();
        let mut out = vec![0.0; 2];
        map.eval_into(&UnitVector::from_unit(vec![0.0, 1.0]), &mut out);
        assert_eq!(out, map.basepoint.coords());
    }
}
