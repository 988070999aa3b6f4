//! Whitehead product maps S^{4n-1} -> S^{2n} with Hopf invariant 2 k^2.
//!
//! Writing points of S^{4n-1} as (x_plus, x_minus) in R^{2n} x R^{2n}, the
//! map sends x to g(sqrt(2) x_minor), where x_minor is the factor of
//! smaller norm and g : R^{2n} -> S^{2n} is a degree-k planar bubble map
//! equal to the basepoint a_* outside the unit ball. On the Clifford torus
//! |x_plus| = |x_minus| the argument has unit length, so the map is
//! constantly a_* there and the two halves glue continuously.

use super::bubble::{BubbleLayout, BubbleMap};
use crate::error::{Error, Result};
use crate::geometry::{stereographic_inverse, UnitVector};

/// Largest polar angle (on S^{2n}) that the inner bubbles may reach; it
/// keeps the planar map supported in the disk of radius tan(1.46 / 2) ~ 0.9.
pub const INNER_CAP_LIMIT: f64 = 1.46;

/// The inner map g: a bubble map on S^{2n} precomposed with the
/// stereographic chart, genuinely constant outside the unit ball of R^{2n}.
#[derive(Debug, Clone)]
pub struct PlanarBubbleMap {
    pub bubble: BubbleMap,
    /// Radius beyond which g is constantly the basepoint.
    pub support_radius: f64,
}

impl PlanarBubbleMap {
    pub fn new(half_dim: usize, k: i64) -> Result<Self> {
        let two_n = 2 * half_dim;
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "whitehead inner degree must be >= 1, got {k}"
            )));
        }
        let layout = if two_n == 2 {
            BubbleLayout::polar_cap(k as usize, INNER_CAP_LIMIT)?
        } else if k == 1 {
            // Dimension-generic single bubble at the north pole.
            BubbleLayout {
                centers: vec![UnitVector::north_pole(two_n)],
                rho: INNER_CAP_LIMIT - 1e-3,
                packing_ratio: 0.0,
            }
        } else {
            return Err(Error::UnsupportedDimension(two_n));
        };
        let max_theta = layout
            .centers
            .iter()
            .map(|c| c.coords()[two_n].clamp(-1.0, 1.0).acos())
            .fold(0.0f64, f64::max);
        let support_radius = ((max_theta + layout.rho) / 2.0).tan();
        let bubble = BubbleMap::with_layout(two_n, k, layout, UnitVector::south_pole(two_n))?;
        Ok(Self {
            bubble,
            support_radius,
        })
    }

    pub fn basepoint(&self) -> &UnitVector {
        &self.bubble.basepoint
    }

    /// g(y) for y in R^{2n}; writes a point of S^{2n} into `out`.
    pub fn eval_into(&self, y: &[f64], out: &mut [f64]) {
        let r2: f64 = y.iter().map(|c| c * c).sum();
        if r2 >= self.support_radius * self.support_radius {
            out.copy_from_slice(self.basepoint().coords());
            return;
        }
        let p = stereographic_inverse(y);
        self.bubble.eval_into(&p, out);
    }
}

/// Parameters and precomputed data of a Whitehead product map.
#[derive(Debug, Clone)]
pub struct WhiteheadMap {
    /// Half-dimension n: the map goes S^{4n-1} -> S^{2n}.
    pub n: usize,
    pub k: i64,
    pub inner: PlanarBubbleMap,
}

impl WhiteheadMap {
    pub fn new(n: usize, k: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("whitehead: n must be >= 1".into()));
        }
        Ok(Self {
            n,
            k,
            inner: PlanarBubbleMap::new(n, k)?,
        })
    }

    pub fn source_dim(&self) -> usize {
        4 * self.n - 1
    }

    pub fn target_ambient(&self) -> usize {
        2 * self.n + 1
    }

    /// a_* (the south pole of S^{2n}).
    pub fn basepoint(&self) -> &UnitVector {
        self.inner.basepoint()
    }

    /// |x_plus|^2 - |x_minus|^2; zero exactly on the Clifford torus.
    pub fn torus_indicator(&self, p: &UnitVector) -> f64 {
        let c = p.coords();
        let half = 2 * self.n;
        let plus: f64 = c[..half].iter().map(|v| v * v).sum();
        let minus: f64 = c[half..].iter().map(|v| v * v).sum();
        plus - minus
    }

    pub fn eval_into(&self, p: &UnitVector, out: &mut [f64]) {
        let c = p.coords();
        let half = 2 * self.n;
        let plus: f64 = c[..half].iter().map(|v| v * v).sum();
        let minor = if plus > 0.5 { &c[half..] } else { &c[..half] };
        let y: Vec<f64> = minor.iter().map(|v| v * std::f64::consts::SQRT_2).collect();
        self.inner.eval_into(&y, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn inner_map_constant_outside_unit_ball() {
        let g = PlanarBubbleMap::new(1, 3).unwrap();
        assert!(g.support_radius < 1.0, "support {}", g.support_radius);
        let mut out = vec![0.0; 3];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        for _ in 0..200 {
            let r = rng.gen_range(1.0..5.0);
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            g.eval_into(&[r * a.cos(), r * a.sin()], &mut out);
            assert_eq!(out, g.basepoint().coords());
        }
    }

    #[test]
    fn constant_on_the_clifford_torus() {
        let f = WhiteheadMap::new(1, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(52);
        let mut out = vec![0.0; 3];
        let s = 0.5f64.sqrt();
        for _ in 0..500 {
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let b: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let p = UnitVector::from_unit(vec![
                s * a.cos(),
                s * a.sin(),
                s * b.cos(),
                s * b.sin(),
            ]);
            f.eval_into(&p, &mut out);
            assert_eq!(out, f.basepoint().coords());
            assert!(f.torus_indicator(&p).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_symmetry() {
        let f = WhiteheadMap::new(1, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let mut a = vec![0.0; 3];
        let mut b = vec![0.0; 3];
        for _ in 0..500 {
            let p = UnitVector::random(3, &mut rng);
            let c = p.coords();
            let swapped = UnitVector::from_unit(vec![c[2], c[3], c[0], c[1]]);
            f.eval_into(&p, &mut a);
            f.eval_into(&swapped, &mut b);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sphere_valued_and_continuous_across_the_junction() {
        let f = WhiteheadMap::new(1, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(54);
        let mut out = vec![0.0; 3];
        for _ in 0..2000 {
            let p = UnitVector::random(3, &mut rng);
            f.eval_into(&p, &mut out);
            let norm: f64 = out.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-10);
        }
        // Points straddling the torus map to the basepoint on both sides:
        // the inner map is constant near |y| = 1.
        let eps = 1e-6;
        let (hi, lo) = ((0.5f64 + eps).sqrt(), (0.5f64 - eps).sqrt());
        let p1 = UnitVector::new(vec![hi, 0.0, 0.0, lo]).unwrap();
        let p2 = UnitVector::new(vec![lo, 0.0, 0.0, hi]).unwrap();
        let mut o1 = vec![0.0; 3];
        let mut o2 = vec![0.0; 3];
        f.eval_into(&p1, &mut o1);
        f.eval_into(&p2, &mut o2);
        assert_eq!(o1, f.basepoint().coords());
        assert_eq!(o2, f.basepoint().coords());
    }

    #[test]
    fn generic_dimension_k1_constructs() {
        let f = WhiteheadMap::new(2, 1).unwrap();
        assert_eq!(f.source_dim(), 7);
        assert_eq!(f.target_ambient(), 5);
        let mut out = vec![0.0; 5];
        let p = UnitVector::random(7, &mut rand_chacha::ChaCha8Rng::seed_from_u64(5));
        f.eval_into(&p, &mut out);
        let norm: f64 = out.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn higher_k_needs_the_s2_layout() {
        assert!(WhiteheadMap::new(2, 2).is_err());
    }
}
