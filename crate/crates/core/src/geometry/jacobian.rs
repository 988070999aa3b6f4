//! Tangential finite-difference Jacobians of maps defined on spheres.
//!
//! Differentiation walks geodesics in an oriented orthonormal tangent
//! frame; maps with a crease (a sign-changing boundary indicator) are
//! differentiated with a second-order one-sided stencil on the side of the
//! base point.

use super::{tangent_frame, UnitVector};

#[derive(Clone, Copy)]
pub struct JacobianOptions<'a> {
    /// Geodesic step; 1e-4 balances truncation against cancellation.
    pub step: f64,
    /// Optional crease indicator. Stencils never straddle a sign change.
    pub boundary: Option<&'a dyn Fn(&UnitVector) -> f64>,
}

impl Default for JacobianOptions<'_> {
    fn default() -> Self {
        Self {
            step: 1e-4,
            boundary: None,
        }
    }
}

/// Jacobian of `f : S^m -> R^l` at `p` in the oriented tangent frame,
/// returned as a row-major l x m matrix. Column j is the derivative along
/// the j-th frame vector.
pub fn numerical_jacobian<F>(f: &F, l: usize, p: &UnitVector, opts: JacobianOptions) -> Vec<f64>
where
    F: Fn(&UnitVector, &mut [f64]) + ?Sized,
{
    let m = p.sphere_dim();
    let h = opts.step;
    let frame = tangent_frame(p);
    let mut jac = vec![0.0; l * m];
    let mut buf_a = vec![0.0; l];
    let mut buf_b = vec![0.0; l];
    let mut buf_c = vec![0.0; l];
    let side = |q: &UnitVector| opts.boundary.map(|b| b(q) >= 0.0);
    let base_side = side(p);

    for (j, dir) in frame.iter().enumerate() {
        let pp = p.geodesic_step(dir, h);
        let pm = p.geodesic_step(dir, -h);
        let use_central = match base_side {
            None => true,
            Some(s) => side(&pp) == Some(s) && side(&pm) == Some(s),
        };
        if use_central {
            f(&pp, &mut buf_a);
            f(&pm, &mut buf_b);
            for i in 0..l {
                jac[i * m + j] = (buf_a[i] - buf_b[i]) / (2.0 * h);
            }
        } else {
            // Second-order one-sided stencil on the side containing p:
            // (-3 f(p) + 4 f(p + h) - f(p + 2h)) / (2h).
            let s = base_side.unwrap();
            let forward_ok =
                side(&pp) == Some(s) && side(&p.geodesic_step(dir, 2.0 * h)) == Some(s);
            let sign = if forward_ok { 1.0 } else { -1.0 };
            let q1 = p.geodesic_step(dir, sign * h);
            let q2 = p.geodesic_step(dir, sign * 2.0 * h);
            f(p, &mut buf_a);
            f(&q1, &mut buf_b);
            f(&q2, &mut buf_c);
            for i in 0..l {
                jac[i * m + j] =
                    sign * (-3.0 * buf_a[i] + 4.0 * buf_b[i] - buf_c[i]) / (2.0 * h);
            }
        }
    }
    jac
}

/// Largest singular value of a row-major l x m matrix.
pub fn operator_norm(jac: &[f64], l: usize, m: usize) -> f64 {
    let mat = nalgebra::DMatrix::from_row_slice(l, m, jac);
    mat.svd(false, false).singular_values.max()
}

/// Frobenius norm of a row-major matrix.
pub fn frobenius_norm(jac: &[f64]) -> f64 {
    jac.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn identity(p: &UnitVector, out: &mut [f64]) {
        out.copy_from_slice(p.coords());
    }

    #[test]
    fn identity_map_is_an_isometry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let p = UnitVector::random(2, &mut rng);
            let jac = numerical_jacobian(&identity, 3, &p, JacobianOptions::default());
            let mat = nalgebra::DMatrix::from_row_slice(3, 2, &jac);
            let sv = mat.svd(false, false).singular_values;
            for s in sv.iter() {
                assert!((s - 1.0).abs() < 1e-6, "singular value {s}");
            }
        }
    }

    #[test]
    fn constant_map_has_zero_jacobian() {
        let f = |_: &UnitVector, out: &mut [f64]| out.fill(2.5);
        let p = UnitVector::random(2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(1));
        let jac = numerical_jacobian(&f, 3, &p, JacobianOptions::default());
        assert!(jac.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn truncation_error_is_second_order() {
        // f(p) = p_2^3 on S^2; compare errors at h and h/2 on a fixed point.
        let f = |p: &UnitVector, out: &mut [f64]| out[0] = p.coords()[2].powi(3);
        let p = UnitVector::new(vec![0.3, -0.5, 0.81]).unwrap();
        let frame = tangent_frame(&p);
        // Analytic tangential derivative along frame vector j:
        // d/dt (p cos t + e sin t)_2^3 at 0 = 3 p_2^2 e_2.
        let exact: Vec<f64> = frame.iter().map(|e| 3.0 * p.coords()[2].powi(2) * e[2]).collect();
        let mut errs = Vec::new();
        for h in [1e-2, 5e-3] {
            let jac = numerical_jacobian(
                &f,
                1,
                &p,
                JacobianOptions {
                    step: h,
                    boundary: None,
                },
            );
            let err = jac
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.0, "O(h^2) ratio {ratio}, errors {errs:?}");
    }

    #[test]
    fn one_sided_stencil_handles_a_crease() {
        // f(p) = |p_2| has a crease along the equator of S^2; central
        // differences near it are O(1) wrong, the one-sided stencil is not.
        let f = |p: &UnitVector, out: &mut [f64]| out[0] = p.coords()[2].abs();
        let indicator = |p: &UnitVector| p.coords()[2];
        // A point just above the crease, closer than the step size.
        let p = UnitVector::new(vec![(1.0f64 - 2.5e-9).sqrt(), 0.0, 5e-5]).unwrap();
        let opts = JacobianOptions {
            step: 1e-4,
            boundary: Some(&indicator),
        };
        let jac = numerical_jacobian(&f, 1, &p, opts);
        let frame = tangent_frame(&p);
        let exact: Vec<f64> = frame.iter().map(|e| e[2]).collect();
        for (got, want) in jac.iter().zip(&exact) {
            assert!(
                (got - want).abs() < 1e-4,
                "one-sided derivative {got} vs {want}"
            );
        }
        // Central differencing across the crease would be badly wrong.
        let naive = numerical_jacobian(&f, 1, &p, JacobianOptions::default());
        let naive_err: f64 = naive
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(naive_err > 0.1, "expected the central stencil to fail");
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let jac = vec![3.0, 0.0, 0.0, -4.0, 0.0, 0.0];
        assert!((operator_norm(&jac, 3, 2) - 4.0).abs() < 1e-12);
    }
}
