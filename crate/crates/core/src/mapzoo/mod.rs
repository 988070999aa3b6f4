//! The map families of the artifact: bubble stacks, Whitehead products,
//! the Hopf fibration and its degree-k precompositions, plus the
//! combinators (scaling, target rotation, chart capping, composition with
//! the stereographic chart) the experiments apply to them.

pub mod bubble;
pub mod hopf;
pub mod whitehead;

pub use bubble::{BubbleLayout, BubbleMap};
pub use hopf::{hopf_eval, CapRetraction};
pub use whitehead::{PlanarBubbleMap, WhiteheadMap};

use crate::error::{Error, Result};
use crate::geometry::{
    numerical_jacobian, stereographic_inverse, JacobianOptions, UnitVector,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Default capping radius used when a map must be made constant around the
/// chart pole; cot(0.65 / 2) ~ 2.97 keeps the support inside half a
/// standard box of half-width 6.
pub const DEFAULT_CAP_DELTA: f64 = 0.65;

#[derive(Clone)]
pub struct CustomMap {
    pub name: String,
    pub target_dim: usize,
    pub sphere_valued: bool,
    pub f: Arc<dyn Fn(&UnitVector, &mut [f64]) + Send + Sync>,
}

impl std::fmt::Debug for CustomMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CustomMap").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone)]
enum MapFamily {
    Constant { value: Vec<f64> },
    Identity,
    Bubble(BubbleMap),
    Whitehead(WhiteheadMap),
    Hopf,
    /// Hopf fibration precomposed with a degree-k bubble self-map of S^3;
    /// the Hopf invariant multiplies by the degree, so this family has
    /// deg_H = k with k free (the Whitehead family only reaches 2 k^2).
    HopfBubble(BubbleMap),
    Capped { inner: Box<SphereMap>, cap: CapRetraction },
    Scaled { inner: Box<SphereMap>, lambda: f64 },
    RotatedTarget { inner: Box<SphereMap>, rot: Vec<f64> },
    Custom(CustomMap),
}

/// A smooth (or piecewise-smooth) map S^m -> R^l with pointwise evaluation,
/// finite-difference Jacobians, and family metadata.
#[derive(Debug, Clone)]
pub struct SphereMap {
    source_dim: usize,
    target_dim: usize,
    sphere_valued: bool,
    family: MapFamily,
}

impl SphereMap {
    pub fn constant(source_dim: usize, value: Vec<f64>) -> Self {
        let target_dim = value.len();
        Self {
            source_dim,
            target_dim,
            sphere_valued: false,
            family: MapFamily::Constant { value },
        }
    }

    pub fn identity(m: usize) -> Self {
        Self {
            source_dim: m,
            target_dim: m + 1,
            sphere_valued: true,
            family: MapFamily::Identity,
        }
    }

    /// Degree-d bubble map on S^n (n in {1, 2, 3}).
    pub fn bubble(n: usize, d: i64) -> Result<Self> {
        Ok(Self {
            source_dim: n,
            target_dim: n + 1,
            sphere_valued: true,
            family: MapFamily::Bubble(BubbleMap::new(n, d)?),
        })
    }

    /// Whitehead product map S^{4n-1} -> S^{2n} with deg_H = 2 k^2.
    pub fn whitehead(n: usize, k: i64) -> Result<Self> {
        let map = WhiteheadMap::new(n, k)?;
        Ok(Self {
            source_dim: map.source_dim(),
            target_dim: map.target_ambient(),
            sphere_valued: true,
            family: MapFamily::Whitehead(map),
        })
    }

    /// The Hopf fibration; `capped` composes with the standard cap at the
    /// chart pole so the chart composition has compact support.
    pub fn hopf_fibration(capped: bool) -> Self {
        let base = Self {
            source_dim: 3,
            target_dim: 3,
            sphere_valued: true,
            family: MapFamily::Hopf,
        };
        if capped {
            base.capped_at(UnitVector::south_pole(3), DEFAULT_CAP_DELTA)
        } else {
            base
        }
    }

    /// Hopf fibration precomposed with a degree-k bubble map of S^3:
    /// Hopf invariant exactly k, constant near the chart pole by layout.
    pub fn hopf_bubble(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "hopf_bubble needs k >= 1, got {k}"
            )));
        }
        Ok(Self {
            source_dim: 3,
            target_dim: 3,
            sphere_valued: true,
            family: MapFamily::HopfBubble(BubbleMap::new(3, k)?),
        })
    }

    pub fn custom(
        source_dim: usize,
        target_dim: usize,
        sphere_valued: bool,
        name: impl Into<String>,
        f: impl Fn(&UnitVector, &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            source_dim,
            target_dim,
            sphere_valued,
            family: MapFamily::Custom(CustomMap {
                name: name.into(),
                target_dim,
                sphere_valued,
                f: Arc::new(f),
            }),
        }
    }

    /// Pointwise scaling lambda * f (the blow-up families g_k).
    pub fn scaled(self, lambda: f64) -> Self {
        let sphere_valued = self.sphere_valued && lambda == 1.0;
        Self {
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            sphere_valued,
            family: MapFamily::Scaled {
                inner: Box::new(self),
                lambda,
            },
        }
    }

    /// Composition with a cap retraction around `center`: homotopic to the
    /// original map, constant on the ball of radius `delta`.
    pub fn capped_at(self, center: UnitVector, delta: f64) -> Self {
        Self {
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            sphere_valued: self.sphere_valued,
            family: MapFamily::Capped {
                inner: Box::new(self),
                cap: CapRetraction::new(center, delta),
            },
        }
    }

    /// Post-composition with a row-major l x l rotation of the target.
    pub fn rotate_target(self, rot: Vec<f64>) -> Result<Self> {
        let l = self.target_dim;
        if rot.len() != l * l {
            return Err(Error::DimensionMismatch {
                context: "rotate_target: matrix entries",
                expected: l * l,
                got: rot.len(),
            });
        }
        Ok(Self {
            source_dim: self.source_dim,
            target_dim: l,
            sphere_valued: self.sphere_valued,
            family: MapFamily::RotatedTarget {
                inner: Box::new(self),
                rot,
            },
        })
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn is_sphere_valued(&self) -> bool {
        self.sphere_valued
    }

    pub fn eval_into(&self, p: &UnitVector, out: &mut [f64]) {
        debug_assert_eq!(p.sphere_dim(), self.source_dim);
        debug_assert_eq!(out.len(), self.target_dim);
        match &self.family {
            MapFamily::Constant { value } => out.copy_from_slice(value),
            MapFamily::Identity => out.copy_from_slice(p.coords()),
            MapFamily::Bubble(b) => b.eval_into(p, out),
            MapFamily::Whitehead(w) => w.eval_into(p, out),
            MapFamily::Hopf => hopf_eval(p.coords(), out),
            MapFamily::HopfBubble(b) => {
                let mut mid = [0.0; 4];
                b.eval_into(p, &mut mid);
                hopf_eval(&mid, out);
            }
            MapFamily::Capped { inner, cap } => {
                let q = cap.apply(p);
                inner.eval_into(&q, out);
            }
            MapFamily::Scaled { inner, lambda } => {
                inner.eval_into(p, out);
                for o in out.iter_mut() {
                    *o *= *lambda;
                }
            }
            MapFamily::RotatedTarget { inner, rot } => {
                let l = self.target_dim;
                let mut mid = vec![0.0; l];
                inner.eval_into(p, &mut mid);
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (0..l).map(|j| rot[i * l + j] * mid[j]).sum();
                }
            }
            MapFamily::Custom(c) => (c.f)(p, out),
        }
    }

    pub fn eval(&self, p: &UnitVector) -> Vec<f64> {
        let mut out = vec![0.0; self.target_dim];
        self.eval_into(p, &mut out);
        out
    }

    /// Crease indicator for one-sided stencils; the Whitehead junction is
    /// the only family carrying one.
    pub fn boundary_indicator(&self, p: &UnitVector) -> Option<f64> {
        match &self.family {
            MapFamily::Whitehead(w) => Some(w.torus_indicator(p)),
            MapFamily::Scaled { inner, .. } | MapFamily::RotatedTarget { inner, .. } => {
                inner.boundary_indicator(p)
            }
            _ => None,
        }
    }

    /// Tangential finite-difference Jacobian as a row-major l x m matrix in
    /// the oriented tangent frame at `p`.
    pub fn jacobian(&self, p: &UnitVector, step: f64) -> Vec<f64> {
        let eval = |q: &UnitVector, out: &mut [f64]| self.eval_into(q, out);
        let has_crease = self.boundary_indicator(p).is_some();
        if has_crease {
            let indicator = |q: &UnitVector| self.boundary_indicator(q).unwrap_or(1.0);
            numerical_jacobian(
                &eval,
                self.target_dim,
                p,
                JacobianOptions {
                    step,
                    boundary: Some(&indicator),
                },
            )
        } else {
            numerical_jacobian(
                &eval,
                self.target_dim,
                p,
                JacobianOptions {
                    step,
                    boundary: None,
                },
            )
        }
    }

    /// Radius R such that f(Y(x)) is constant for |x| >= R, when the
    /// family guarantees one.
    pub fn chart_support_radius(&self) -> Option<f64> {
        match &self.family {
            MapFamily::Constant { .. } => Some(0.0),
            MapFamily::HopfBubble(b) => {
                // Bubbles sit a quarter turn from the pole.
                let clearance = PI / 2.0 - b.rho();
                Some(1.0 / (clearance / 2.0).tan())
            }
            MapFamily::Capped { inner: _, cap } => {
                if cap
                    .center
                    .chordal_distance(&UnitVector::south_pole(cap.center.sphere_dim()))
                    < 1e-12
                {
                    Some(cap.chart_support_radius())
                } else {
                    None
                }
            }
            MapFamily::Scaled { inner, .. } | MapFamily::RotatedTarget { inner, .. } => {
                inner.chart_support_radius()
            }
            _ => None,
        }
    }

    pub fn family_spec(&self) -> Option<FamilySpec> {
        match &self.family {
            MapFamily::Bubble(b) => Some(FamilySpec::Bubble {
                n: b.n,
                d: b.degree,
            }),
            MapFamily::Whitehead(w) => Some(FamilySpec::Whitehead { n: w.n, k: w.k }),
            MapFamily::Hopf => Some(FamilySpec::Hopf { capped: false }),
            MapFamily::HopfBubble(b) => Some(FamilySpec::HopfBubble { k: b.degree }),
            MapFamily::Scaled { inner, lambda } => Some(FamilySpec::Scaled {
                lambda: *lambda,
                inner: Box::new(inner.family_spec()?),
            }),
            MapFamily::Capped { inner, cap } => {
                if let Some(FamilySpec::Hopf { .. }) = inner.family_spec() {
                    if cap.delta == DEFAULT_CAP_DELTA {
                        return Some(FamilySpec::Hopf { capped: true });
                    }
                }
                Some(FamilySpec::CappedChart {
                    delta: cap.delta,
                    inner: Box::new(inner.family_spec()?),
                })
            }
            _ => None,
        }
    }

    /// Human-readable family label for reports.
    pub fn label(&self) -> String {
        match &self.family {
            MapFamily::Constant { .. } => "constant".into(),
            MapFamily::Identity => "identity".into(),
            MapFamily::Bubble(b) => format!("bubble(n={}, d={})", b.n, b.degree),
            MapFamily::Whitehead(w) => format!("whitehead(n={}, k={})", w.n, w.k),
            MapFamily::Hopf => "hopf".into(),
            MapFamily::HopfBubble(b) => format!("hopf_bubble(k={})", b.degree),
            MapFamily::Capped { inner, cap } => {
                format!("capped(delta={}, {})", cap.delta, inner.label())
            }
            MapFamily::Scaled { inner, lambda } => {
                format!("scaled(lambda={}, {})", lambda, inner.label())
            }
            MapFamily::RotatedTarget { inner, .. } => format!("rotated({})", inner.label()),
            MapFamily::Custom(c) => format!("custom({})", c.name),
        }
    }
}

/// Pointwise scaling: [lambda f]_{W^{s,p}} = lambda [f]_{W^{s,p}}.
pub fn scale_map(f: &SphereMap, lambda: f64) -> SphereMap {
    f.clone().scaled(lambda)
}

/// A map R^m -> R^l obtained by composing a sphere map with the inverse
/// stereographic projection.
#[derive(Debug, Clone)]
pub struct EuclideanMap {
    inner: SphereMap,
}

impl EuclideanMap {
    pub fn domain_dim(&self) -> usize {
        self.inner.source_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.inner.target_dim()
    }

    pub fn sphere_map(&self) -> &SphereMap {
        &self.inner
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let p = stereographic_inverse(x);
        self.inner.eval_into(&p, out);
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.target_dim()];
        self.eval_into(x, &mut out);
        out
    }

    /// Central-difference Jacobian in the coordinate directions of R^m,
    /// row-major l x m.
    pub fn jacobian(&self, x: &[f64], h: f64) -> Vec<f64> {
        let (m, l) = (self.domain_dim(), self.target_dim());
        let mut jac = vec![0.0; l * m];
        let mut xp = x.to_vec();
        let mut fp = vec![0.0; l];
        let mut fm = vec![0.0; l];
        for j in 0..m {
            xp[j] = x[j] + h;
            self.eval_into(&xp, &mut fp);
            xp[j] = x[j] - h;
            self.eval_into(&xp, &mut fm);
            xp[j] = x[j];
            for i in 0..l {
                jac[i * m + j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        jac
    }

    /// Radius beyond which the composition is constant, when known.
    pub fn support_radius(&self) -> Option<f64> {
        self.inner.chart_support_radius()
    }
}

/// The chart composition x -> f(Y(x)).
pub fn compose_with_stereographic(f: &SphereMap) -> EuclideanMap {
    EuclideanMap { inner: f.clone() }
}

/// Serializable family descriptor (tag + parameter object).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum FamilySpec {
    Bubble { n: usize, d: i64 },
    Whitehead { n: usize, k: i64 },
    Hopf { capped: bool },
    HopfBubble { k: i64 },
    Scaled { lambda: f64, inner: Box<FamilySpec> },
    CappedChart { delta: f64, inner: Box<FamilySpec> },
}

impl FamilySpec {
    pub fn build(&self) -> Result<SphereMap> {
        match self {
            FamilySpec::Bubble { n, d } => SphereMap::bubble(*n, *d),
            FamilySpec::Whitehead { n, k } => SphereMap::whitehead(*n, *k),
            FamilySpec::Hopf { capped } => Ok(SphereMap::hopf_fibration(*capped)),
            FamilySpec::HopfBubble { k } => SphereMap::hopf_bubble(*k),
            FamilySpec::Scaled { lambda, inner } => Ok(inner.build()?.scaled(*lambda)),
            FamilySpec::CappedChart { delta, inner } => {
                let map = inner.build()?;
                let pole = UnitVector::south_pole(map.source_dim());
                Ok(map.capped_at(pole, *delta))
            }
        }
    }
}
