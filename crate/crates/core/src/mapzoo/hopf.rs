//! The Hopf fibration S^3 -> S^2, an optional capping homotopy that makes
//! a map constant near a chosen point (preserving the Hopf invariant), and
//! degree-k precompositions h o b_k used by the blow-up experiments.

use crate::geometry::UnitVector;

/// h(z1, z2) in S^2 from a unit quaternion (x1 + i x2, x3 + i x4).
pub fn hopf_eval(p: &[f64], out: &mut [f64]) {
    let (x1, x2, x3, x4) = (p[0], p[1], p[2], p[3]);
    out[0] = 2.0 * (x1 * x3 + x2 * x4);
    out[1] = 2.0 * (x2 * x3 - x1 * x4);
    out[2] = x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4;
}

/// Smooth degree-one self-map of the sphere squashing the geodesic ball of
/// radius `delta` around `center` onto `center` and fixing everything
/// beyond radius 2 delta. Composing with it is a homotopy through
/// continuous maps, so degrees and Hopf invariants are unchanged.
#[derive(Debug, Clone)]
pub struct CapRetraction {
    pub center: UnitVector,
    pub delta: f64,
}

impl CapRetraction {
    pub fn new(center: UnitVector, delta: f64) -> Self {
        Self { center, delta }
    }

    pub fn apply(&self, p: &UnitVector) -> UnitVector {
        let d = self.delta;
        let cosr = p.dot(&self.center).clamp(-1.0, 1.0);
        let r = cosr.acos();
        if r >= 2.0 * d {
            return p.clone();
        }
        if r <= d {
            return self.center.clone();
        }
        // psi(r) = r * smoothstep((r - d) / d): C^2, psi(d) = 0, psi(2d) = 2d.
        let s = crate::geometry::volume_form::smoothstep((r - d) / d);
        let psi = r * s;
        let sinr = r.sin();
        let coords: Vec<f64> = p
            .coords()
            .iter()
            .zip(self.center.coords())
            .map(|(pc, cc)| {
                let xi = (pc - cosr * cc) / sinr;
                psi.cos() * cc + psi.sin() * xi
            })
            .collect();
        UnitVector::from_unit(coords)
    }

    /// Radius in the equatorial chart beyond which a map capped at the
    /// south pole becomes constant: |x| >= cot(delta / 2).
    pub fn chart_support_radius(&self) -> f64 {
        1.0 / (self.delta / 2.0).tan()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::stereographic_inverse;
    use rand::{Rng, SeedableRng};

    #[test]
    fn hopf_values_are_unit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let mut out = [0.0; 3];
        for _ in 0..10_000 {
            let p = UnitVector::random(3, &mut rng);
            hopf_eval(p.coords(), &mut out);
            let n: f64 = out.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hopf_fibers_are_circles() {
        // The fiber through p is {e^{i t} z}, and h is constant along it.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(62);
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        for _ in 0..100 {
            let p = UnitVector::random(3, &mut rng);
            hopf_eval(p.coords(), &mut a);
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (c, s) = (t.cos(), t.sin());
            let q = [
                c * p.coords()[0] - s * p.coords()[1],
                s * p.coords()[0] + c * p.coords()[1],
                c * p.coords()[2] - s * p.coords()[3],
                s * p.coords()[2] + c * p.coords()[3],
            ];
            hopf_eval(&q, &mut b);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cap_squashes_and_fixes() {
        let cap = CapRetraction::new(UnitVector::south_pole(3), 0.65);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(63);
        for _ in 0..500 {
            let p = UnitVector::random(3, &mut rng);
            let r = p.geodesic_distance(&cap.center);
            let q = cap.apply(&p);
            if r <= cap.delta {
                assert!(q.chordal_distance(&cap.center) < 1e-12);
            } else if r >= 2.0 * cap.delta {
                assert!(q.chordal_distance(&p) < 1e-12);
            } else {
                // Direction preserved, radius shrunk.
                assert!(q.geodesic_distance(&cap.center) <= r + 1e-12);
            }
        }
    }

    #[test]
    fn chart_support_radius_matches_the_cap() {
        let cap = CapRetraction::new(UnitVector::south_pole(3), 0.65);
        let r0 = cap.chart_support_radius();
        assert!((r0 - 2.9680).abs() < 1e-3);
        // Just beyond the support radius the chart point lies inside the
        // cap ball, so the retraction sends it to the pole.
        let x = [r0 * 1.01, 0.0, 0.0];
        let p = stereographic_inverse(&x);
        assert!(cap.apply(&p).chordal_distance(&cap.center) < 1e-12);
        // Just inside it does not.
        let x = [r0 * 0.95, 0.0, 0.0];
        let p = stereographic_inverse(&x);
        assert!(cap.apply(&p).chordal_distance(&cap.center) > 1e-6);
    }
}
