//! Compactly supported extensions of the volume form of S^m to R^{m+1}.
//!
//! Two variants are exposed: the normalized radial extension whose
//! restriction to S^m integrates to exactly 1 (so degree integrals return
//! the degree directly), and the homogeneous-coefficient form
//! y^1 dy^2 ^ ... ^ dy^{m+1}, which stays exactly polynomial on a ball
//! around the origin and is what the scaling (blow-up) experiments pull
//! back. Its integral over S^m is |B^{m+1}|.

use super::forms::KFormValue;
use super::{ball_volume, sphere_area};

/// Quintic smoothstep, C^2 at both ends.
pub fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeFormKind {
    /// chi(|y|) / |S^m| * sum_i (-1)^{i-1} y_i dy^1 ^ ... ^ dy^i-hat ^ ...
    /// Supported in 0.5 <= |y| <= 1.5, equal to the normalized volume form
    /// on the sphere itself.
    Normalized,
    /// chi_out(|y|) * y^1 dy^2 ^ ... ^ dy^{m+1}; exactly polynomial for
    /// |y| <= 2, cut off by |y| = 3.
    Homogeneous,
}

#[derive(Debug, Clone)]
pub struct VolumeFormExtension {
    /// Sphere dimension m; the form is an m-form on R^{m+1}.
    pub dim: usize,
    pub kind: VolumeFormKind,
    /// Inner and outer cutoff radii of the radial bump.
    pub r_inner: f64,
    pub r_outer: f64,
    /// Value of the integral over S^m (1 or |B^{m+1}|).
    pub normalization: f64,
}

impl VolumeFormExtension {
    pub fn normalized(dim: usize) -> Self {
        Self {
            dim,
            kind: VolumeFormKind::Normalized,
            r_inner: 0.5,
            r_outer: 1.5,
            normalization: 1.0,
        }
    }

    pub fn homogeneous(dim: usize) -> Self {
        Self {
            dim,
            kind: VolumeFormKind::Homogeneous,
            r_inner: 0.0,
            r_outer: 3.0,
            normalization: ball_volume(dim + 1),
        }
    }

    /// Ambient dimension m + 1.
    pub fn ambient_dim(&self) -> usize {
        self.dim + 1
    }

    fn bump(&self, r: f64) -> f64 {
        match self.kind {
            VolumeFormKind::Normalized => {
                // 0 outside [0.5, 1.5], 1 on [0.75, 1.25].
                if !(0.5..=1.5).contains(&r) {
                    0.0
                } else if r < 0.75 {
                    smoothstep((r - 0.5) / 0.25)
                } else if r > 1.25 {
                    smoothstep((1.5 - r) / 0.25)
                } else {
                    1.0
                }
            }
            VolumeFormKind::Homogeneous => {
                if r <= 2.0 {
                    1.0
                } else if r < 3.0 {
                    smoothstep(3.0 - r)
                } else {
                    0.0
                }
            }
        }
    }

    /// Evaluates the m-form at a point of R^{m+1}.
    pub fn eval(&self, y: &[f64]) -> KFormValue {
        let amb = self.ambient_dim();
        debug_assert_eq!(y.len(), amb);
        let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        let chi = self.bump(r);
        let mut out = KFormValue::zero(amb, self.dim);
        if chi == 0.0 {
            return out;
        }
        match self.kind {
            VolumeFormKind::Normalized => {
                let scale = chi / sphere_area(self.dim);
                // Coefficient on the complement of {i} is (-1)^i y_i
                // (0-based). Complements are enumerated in lexicographic
                // order: omitting larger i gives the smaller multi-index,
                // so the complement of {i} sits at position amb - 1 - i.
                for i in 0..amb {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    out.coeffs[amb - 1 - i] = sign * scale * y[i];
                }
            }
            VolumeFormKind::Homogeneous => {
                // y^1 dy^2 ^ ... ^ dy^{m+1}: single coefficient on the
                // multi-index {1, ..., m} which is the last one.
                let last = out.coeffs.len() - 1;
                out.coeffs[last] = chi * y[0];
            }
        }
        out
    }
}
