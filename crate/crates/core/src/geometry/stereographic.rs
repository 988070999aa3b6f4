//! Inverse stereographic projection on the equatorial plane,
//! Y(x) = (2x / (1 + |x|^2), (1 - |x|^2) / (1 + |x|^2)), its inverse chart
//! and its conformal factor 2 / (1 + |x|^2).

use super::UnitVector;
use crate::error::{Error, Result};

/// Maps x in R^m onto S^m minus the south pole.
pub fn stereographic_inverse(x: &[f64]) -> UnitVector {
    let r2: f64 = x.iter().map(|c| c * c).sum();
    let q = 1.0 + r2;
    let mut coords = Vec::with_capacity(x.len() + 1);
    coords.extend(x.iter().map(|c| 2.0 * c / q));
    coords.push((1.0 - r2) / q);
    UnitVector::from_unit(coords)
}

/// Chart inverse of [`stereographic_inverse`]. Rejects the south pole.
pub fn stereographic_forward(p: &UnitVector) -> Result<Vec<f64>> {
    let coords = p.coords();
    let t = coords[coords.len() - 1];
    if 1.0 + t < 1e-13 {
        return Err(Error::ChartPole);
    }
    Ok(coords[..coords.len() - 1]
        .iter()
        .map(|c| c / (1.0 + t))
        .collect())
}

/// Conformal factor lambda(x) = 2 / (1 + |x|^2); every singular value of
/// DY(x) equals lambda(x) and |det DY(x)| = lambda(x)^m.
pub fn conformal_factor(x: &[f64]) -> f64 {
    2.0 / (1.0 + x.iter().map(|c| c * c).sum::<f64>())
}

/// Analytic differential DY(x) as a row-major (m+1) x m matrix.
pub fn stereographic_jacobian(x: &[f64]) -> Vec<f64> {
    let m = x.len();
    let q = 1.0 + x.iter().map(|c| c * c).sum::<f64>();
    let mut jac = vec![0.0; (m + 1) * m];
    for i in 0..m {
        for j in 0..m {
            let mut v = -4.0 * x[i] * x[j] / (q * q);
            if i == j {
                v += 2.0 / q;
            }
            jac[i * m + j] = v;
        }
    }
    for j in 0..m {
        jac[m * m + j] = -4.0 * x[j] / (q * q);
    }
    jac
}
