//! Spheres, quadrature rules, stereographic charts, pointwise differential
//! forms and pullbacks. Everything else in the crate consumes this module.

pub mod forms;
mod jacobian;
mod quadrature;
mod stereographic;
pub mod volume_form;

pub use forms::KFormValue;
pub use jacobian::{numerical_jacobian, operator_norm, JacobianOptions};
pub use quadrature::{make_quadrature, QuadratureRule};
pub use stereographic::{
    conformal_factor, stereographic_forward, stereographic_inverse, stereographic_jacobian,
};
pub use volume_form::{VolumeFormExtension, VolumeFormKind};

use crate::error::{Error, Result};

/// Unit tolerance enforced by every [`UnitVector`] constructor.
pub const UNIT_TOL: f64 = 1e-12;

/// A point of S^m embedded in R^{m+1}, kept normalized to `UNIT_TOL`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Normalizes `coords` onto the sphere. Fails on a (near-)zero vector.
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-14 || !norm.is_finite() {
            return Err(Error::ZeroVector(norm));
        }
        for c in &mut coords {
            *c /= norm;
        }
        Ok(Self { coords })
    }

    /// Wraps coordinates that are already unit length (debug-checked).
    pub fn from_unit(coords: Vec<f64>) -> Self {
        debug_assert!(
            (coords.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs() < UNIT_TOL,
            "from_unit called with a non-unit vector"
        );
        Self { coords }
    }

    /// North pole (0, ..., 0, 1) of S^m.
    pub fn north_pole(m: usize) -> Self {
        let mut coords = vec![0.0; m + 1];
        coords[m] = 1.0;
        Self { coords }
    }

    /// South pole (0, ..., 0, -1) of S^m.
    pub fn south_pole(m: usize) -> Self {
        let mut coords = vec![0.0; m + 1];
        coords[m] = -1.0;
        Self { coords }
    }

    /// Sphere dimension m (ambient dimension minus one).
    pub fn sphere_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.coords, other.coords())
    }

    /// Chordal (ambient Euclidean) distance.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Geodesic distance in radians.
    pub fn geodesic_distance(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Walks the unit-speed geodesic from `self` towards the tangent
    /// direction `dir` (assumed unit and orthogonal to `self`).
    pub fn geodesic_step(&self, dir: &[f64], angle: f64) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        let coords = self
            .coords
            .iter()
            .zip(dir)
            .map(|(p, d)| c * p + s * d)
            .collect();
        // cos^2 + sin^2 keeps the result on the sphere exactly up to rounding.
        Self { coords }
    }

    /// Uniform random point via the Gaussian trick.
    pub fn random<R: rand::Rng>(m: usize, rng: &mut R) -> Self {
        use rand_distr::StandardNormal;
        loop {
            let coords: Vec<f64> = (0..=m).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(u) = Self::new(coords) {
                return u;
            }
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Surface area of S^m: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
pub fn sphere_area(m: usize) -> f64 {
    use std::f64::consts::PI;
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        2 => 4.0 * PI,
        3 => 2.0 * PI * PI,
        _ => {
            // Recurrence |S^m| = 2 pi |S^{m-2}| / (m - 1).
            2.0 * PI * sphere_area(m - 2) / (m as f64 - 1.0)
        }
    }
}

/// Volume of the unit ball B^{m} = |S^{m-1}| / m.
pub fn ball_volume(m: usize) -> f64 {
    sphere_area(m - 1) / m as f64
}

/// Orthonormal tangent frame (e_1, ..., e_m) at `p`, oriented so that
/// det[p, e_1, ..., e_m] > 0. The frame fixes the orientation convention
/// used by every degree and Hopf integral in the crate.
pub fn tangent_frame(p: &UnitVector) -> Vec<Vec<f64>> {
    let n = p.coords().len();
    let m = n - 1;
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(m);
    // Gram-Schmidt of the coordinate axes against p, skipping the axis
    // most parallel to p.
    let skip = p
        .coords()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap();
    for axis in 0..n {
        if axis == skip {
            continue;
        }
        let mut v = vec![0.0; n];
        v[axis] = 1.0;
        let vp = dot(&v, p.coords());
        for (vi, pi) in v.iter_mut().zip(p.coords()) {
            *vi -= vp * pi;
        }
        for e in &frame {
            let ve = dot(&v, e);
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= ve * ei;
            }
        }
        let nv = norm(&v);
        for vi in &mut v {
            *vi /= nv;
        }
        frame.push(v);
    }
    if orientation_det(p, &frame) < 0.0 {
        for c in frame[0].iter_mut() {
            *c = -*c;
        }
    }
    frame
}

/// det of the (m+1)x(m+1) matrix with columns [p, e_1, ..., e_m].
fn orientation_det(p: &UnitVector, frame: &[Vec<f64>]) -> f64 {
    let n = p.coords().len();
    let mut mat = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (i, &c) in p.coords().iter().enumerate() {
        mat[(i, 0)] = c;
    }
    for (j, e) in frame.iter().enumerate() {
        for (i, &c) in e.iter().enumerate() {
            mat[(i, j + 1)] = c;
        }
    }
    mat.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn unit_vector_normalizes() {
        let u = UnitVector::new(vec![3.0, 4.0]).unwrap();
        assert!((norm(u.coords()) - 1.0).abs() < UNIT_TOL);
        assert!((u.coords()[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(matches!(
            UnitVector::new(vec![0.0, 0.0, 0.0]),
            Err(Error::ZeroVector(_))
        ));
    }

    #[test]
    fn sphere_areas_match_closed_forms() {
        use std::f64::consts::PI;
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-14);
        // |S^4| = 8 pi^2 / 3 via the recurrence.
        assert!((sphere_area(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn tangent_frame_is_orthonormal_and_oriented() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in 1..=3 {
            for _ in 0..50 {
                let p = UnitVector::random(m, &mut rng);
                let frame = tangent_frame(&p);
                assert_eq!(frame.len(), m);
                for (i, e) in frame.iter().enumerate() {
                    assert!((norm(e) - 1.0).abs() < 1e-12);
                    assert!(dot(e, p.coords()).abs() < 1e-12);
                    for f in frame.iter().skip(i + 1) {
                        assert!(dot(e, f).abs() < 1e-12);
                    }
                }
                assert!(orientation_det(&p, &frame) > 0.0);
            }
        }
    }

    #[test]
    fn geodesic_step_stays_on_sphere() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let p = UnitVector::random(2, &mut rng);
            let frame = tangent_frame(&p);
            let q = p.geodesic_step(&frame[0], 0.3);
            assert!((norm(q.coords()) - 1.0).abs() < 1e-12);
            assert!((p.geodesic_distance(&q) - 0.3).abs() < 1e-12);
        }
    }
}
