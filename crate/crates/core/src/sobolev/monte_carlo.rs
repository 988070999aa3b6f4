//! Importance-sampled Monte Carlo seminorm estimators.
//!
//! The Gagliardo kernel concentrates its variance on near-diagonal pairs,
//! so the second point of each pair is drawn from a mixture of a uniform
//! proposal and a radial power-law proposal whose exponent p(1-s) cancels
//! the kernel singularity, keeping the importance weights bounded for
//! every s in (0, 1). Sampling is chunked with per-chunk seeds and the
//! chunk sums are combined in fixed order, so every estimate is
//! reproducible bit-for-bit from (seed, sample count).

use super::{Domain, SeminormEstimate, SeminormMethod, SeminormSpec};
use crate::error::{Error, Result};
use crate::geometry::{sphere_area, UnitVector};
use crate::mapzoo::SphereMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MC_CHUNK: usize = 4096;
const UNIFORM_MIX: f64 = 0.5;
const MIN_DIST: f64 = 1e-9;

struct Accum {
    sum: f64,
    sum_sq: f64,
    n: usize,
}

fn combine(chunks: Vec<Accum>) -> (f64, f64, usize) {
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut n = 0;
    for c in chunks {
        sum += c.sum;
        sum_sq += c.sum_sq;
        n += c.n;
    }
    (sum, sum_sq, n)
}

fn finish(sum: f64, sum_sq: f64, n: usize, p: f64) -> SeminormEstimate {
    let mean = sum / n as f64;
    let var = ((sum_sq - sum * sum / n as f64) / (n as f64 - 1.0)).max(0.0);
    let se = (var / n as f64).sqrt();
    SeminormEstimate {
        value: mean.max(0.0).powf(1.0 / p),
        power: mean,
        method: SeminormMethod::MonteCarlo,
        samples: n,
        std_error: Some(se),
    }
}

fn chunk_seeds(seed: u64, n_samples: usize) -> Vec<(u64, usize)> {
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    (0..n_chunks)
        .map(|c| {
            let len = MC_CHUNK.min(n_samples - c * MC_CHUNK);
            (seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(c as u64 + 1)), len)
        })
        .collect()
}

/// Uniform unit tangent vector at `x`.
fn random_tangent<R: Rng>(x: &UnitVector, rng: &mut R) -> Vec<f64> {
    loop {
        let v = UnitVector::random(x.sphere_dim(), rng);
        let vp = x.dot(&v);
        let mut t: Vec<f64> = v
            .coords()
            .iter()
            .zip(x.coords())
            .map(|(vi, xi)| vi - vp * xi)
            .collect();
        let norm: f64 = t.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for c in &mut t {
                *c /= norm;
            }
            return t;
        }
    }
}

/// Unbiased Monte Carlo estimator of [f]^p on S^m.
pub fn fractional_seminorm_mc(
    f: &SphereMap,
    spec: &SeminormSpec,
    seed: u64,
    n_samples: usize,
) -> Result<SeminormEstimate> {
    let m = match spec.domain {
        Domain::Sphere(m) => m,
        Domain::Euclidean(_) => {
            return Err(Error::InvalidParameter(
                "fractional_seminorm_mc runs on sphere domains; see \
                 euclidean_seminorm_mc"
                    .into(),
            ))
        }
    };
    if n_samples < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo seminorm needs >= 1e4 samples, got {n_samples}"
        )));
    }
    if f.source_dim() != m {
        return Err(Error::DimensionMismatch {
            context: "seminorm_mc: map source dimension",
            expected: m,
            got: f.source_dim(),
        });
    }
    let p = spec.p;
    let alpha = p * (1.0 - spec.s);
    let exponent = spec.kernel_exponent();
    let area = sphere_area(m);
    let band_area = sphere_area(m.saturating_sub(1).max(0));
    let l = f.target_dim();

    let chunks: Vec<Accum> = chunk_seeds(seed, n_samples)
        .into_par_iter()
        .map(|(chunk_seed, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed);
            let mut fx = vec![0.0; l];
            let mut fy = vec![0.0; l];
            let mut acc = Accum {
                sum: 0.0,
                sum_sq: 0.0,
                n: 0,
            };
            for _ in 0..len {
                let x = UnitVector::random(m, &mut rng);
                let y = if rng.gen_bool(UNIFORM_MIX) {
                    UnitVector::random(m, &mut rng)
                } else {
                    // Chordal distance r = 2 U^{1/alpha}, uniform direction.
                    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    let r = 2.0 * u.powf(1.0 / alpha);
                    let theta = 2.0 * (r / 2.0).asin();
                    let dir = random_tangent(&x, &mut rng);
                    x.geodesic_step(&dir, theta)
                };
                let dist = x.chordal_distance(&y);
                acc.n += 1;
                if dist < MIN_DIST {
                    continue;
                }
                // Mixture density of y given x w.r.t. surface measure.
                let theta = 2.0 * (dist / 2.0).clamp(-1.0, 1.0).asin();
                let g_r = alpha * dist.powf(alpha - 1.0) / 2.0f64.powf(alpha);
                let sin_band = theta.sin().powi(m as i32 - 1);
                let q_conc = if sin_band > 1e-300 {
                    g_r * (theta / 2.0).cos() / (band_area * sin_band)
                } else {
                    f64::INFINITY
                };
                let q = UNIFORM_MIX / area + (1.0 - UNIFORM_MIX) * q_conc;
                f.eval_into(&x, &mut fx);
                f.eval_into(&y, &mut fy);
                let fd2: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
                if fd2 == 0.0 {
                    continue;
                }
                let phi = fd2.sqrt().powf(p) / dist.powf(exponent);
                let v = phi * area / q;
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            acc
        })
        .collect();
    let (sum, sum_sq, n) = combine(chunks);
    Ok(finish(sum, sum_sq, n, p))
}

/// Configuration of the R^m estimator for maps constant outside a ball.
#[derive(Debug, Clone)]
pub struct EuclideanMcConfig {
    pub dim: usize,
    pub s: f64,
    pub p: f64,
    /// The map is constant for |x| >= support_radius.
    pub support_radius: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Unbiased estimator of the R^m seminorm power for a map constant outside
/// B_R. Pairs with both points outside B_{R+1} contribute nothing, so the
/// first point is drawn from B_{R+1} and double counting is corrected by a
/// 1/2 weight on interior-interior pairs.
pub fn euclidean_seminorm_mc<F>(f: F, l: usize, cfg: &EuclideanMcConfig) -> SeminormEstimate
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let m = cfg.dim;
    let (p, s) = (cfg.p, cfg.s);
    let alpha = p * (1.0 - s);
    let sp = s * p;
    let exponent = m as f64 + sp;
    let r_outer = cfg.support_radius + 1.0;
    let ball_vol = sphere_area(m - 1) / m as f64 * r_outer.powi(m as i32);
    let band_area = sphere_area(m - 1);
    let r0 = 1.0f64;
    // Piecewise power-law radial proposal: ~ r^{alpha-1} inside r0,
    // ~ r^{-1-sp} outside; both normalizing masses in closed form.
    let mass_in = r0.powf(alpha) / alpha;
    let mass_out = r0.powf(alpha) / sp;
    let w_in = mass_in / (mass_in + mass_out);
    let norm_c = 1.0 / (mass_in + mass_out);
    let radial_density = |r: f64| -> f64 {
        if r <= r0 {
            norm_c * r.powf(alpha - 1.0)
        } else {
            norm_c * r0.powf(alpha + sp) * r.powf(-1.0 - sp)
        }
    };

    let chunks: Vec<Accum> = chunk_seeds(cfg.seed, cfg.samples)
        .into_par_iter()
        .map(|(chunk_seed, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed);
            let mut fx = vec![0.0; l];
            let mut fy = vec![0.0; l];
            let mut acc = Accum {
                sum: 0.0,
                sum_sq: 0.0,
                n: 0,
            };
            for _ in 0..len {
                acc.n += 1;
                // x uniform in B_{r_outer}.
                let dir = UnitVector::random(m - 1, &mut rng);
                let rx = r_outer * rng.gen_range(0.0f64..1.0).powf(1.0 / m as f64);
                let x: Vec<f64> = dir.coords().iter().map(|c| c * rx).collect();
                // Radial displacement.
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let ru = if rng.gen_bool(w_in) {
                    r0 * u.powf(1.0 / alpha)
                } else {
                    r0 * u.powf(-1.0 / sp)
                };
                if ru < MIN_DIST || !ru.is_finite() {
                    continue;
                }
                let udir = UnitVector::random(m - 1, &mut rng);
                let y: Vec<f64> = x
                    .iter()
                    .zip(udir.coords())
                    .map(|(xi, di)| xi + ru * di)
                    .collect();
                f(&x, &mut fx);
                f(&y, &mut fy);
                let fd2: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
                if fd2 == 0.0 {
                    continue;
                }
                let q_u = radial_density(ru) / (band_area * ru.powi(m as i32 - 1));
                let ry2: f64 = y.iter().map(|c| c * c).sum();
                let kappa = if ry2 <= r_outer * r_outer { 0.5 } else { 1.0 };
                let phi = fd2.sqrt().powf(p) / ru.powf(exponent);
                let v = 2.0 * ball_vol * kappa * phi / q_u;
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            acc
        })
        .collect();
    let (sum, sum_sq, n) = combine(chunks);
    finish(sum, sum_sq, n, p)
}

/// Fundamental-domain seminorm power of a periodic map on the box
/// [-half_width, half_width)^m, by the same mixture estimator.
pub fn box_seminorm_mc<F>(
    f: F,
    l: usize,
    m: usize,
    half_width: f64,
    s: f64,
    p: f64,
    seed: u64,
    n_samples: usize,
) -> SeminormEstimate
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let alpha = p * (1.0 - s);
    let sp = s * p;
    let exponent = m as f64 + sp;
    let vol = (2.0 * half_width).powi(m as i32);
    let band_area = sphere_area(m - 1);
    let r0 = half_width / 2.0;
    let mass_in = r0.powf(alpha) / alpha;
    let mass_out = r0.powf(alpha) / sp;
    let w_in = mass_in / (mass_in + mass_out);
    let norm_c = 1.0 / (mass_in + mass_out);
    let radial_density = move |r: f64| -> f64 {
        if r <= r0 {
            norm_c * r.powf(alpha - 1.0)
        } else {
            norm_c * r0.powf(alpha + sp) * r.powf(-1.0 - sp)
        }
    };

    let chunks: Vec<Accum> = chunk_seeds(seed, n_samples)
        .into_par_iter()
        .map(|(chunk_seed, len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed);
            let mut fx = vec![0.0; l];
            let mut fy = vec![0.0; l];
            let mut acc = Accum {
                sum: 0.0,
                sum_sq: 0.0,
                n: 0,
            };
            for _ in 0..len {
                acc.n += 1;
                let x: Vec<f64> = (0..m)
                    .map(|_| rng.gen_range(-half_width..half_width))
                    .collect();
                let y: Vec<f64> = if rng.gen_bool(UNIFORM_MIX) {
                    (0..m)
                        .map(|_| rng.gen_range(-half_width..half_width))
                        .collect()
                } else {
                    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    let ru = if rng.gen_bool(w_in) {
                        r0 * u.powf(1.0 / alpha)
                    } else {
                        r0 * u.powf(-1.0 / sp)
                    };
                    let dir = UnitVector::random(m - 1, &mut rng);
                    x.iter().zip(dir.coords()).map(|(xi, di)| xi + ru * di).collect()
                };
                if y.iter().any(|c| c.abs() >= half_width) {
                    continue;
                }
                let d2: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
                let dist = d2.sqrt();
                if dist < MIN_DIST {
                    continue;
                }
                f(&x, &mut fx);
                f(&y, &mut fy);
                let fd2: f64 = fx.iter().zip(&fy).map(|(a, b)| (a - b) * (a - b)).sum();
                if fd2 == 0.0 {
                    continue;
                }
                let q =
                    UNIFORM_MIX / vol + (1.0 - UNIFORM_MIX) * radial_density(dist)
                        / (band_area * dist.powi(m as i32 - 1));
                let phi = fd2.sqrt().powf(p) / dist.powf(exponent);
                let v = vol * phi / q;
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            acc
        })
        .collect();
    let (sum, sum_sq, n) = combine(chunks);
    finish(sum, sum_sq, n, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_quadrature;
    use crate::sobolev::fractional_seminorm;

    #[test]
    fn constant_map_gives_zero_with_zero_error() {
        let f = SphereMap::constant(2, vec![1.0, 0.0, 0.0]);
        let spec = SeminormSpec::critical(0.7, Domain::Sphere(2)).unwrap();
        let est = fractional_seminorm_mc(&f, &spec, 7, 20_000).unwrap();
        assert_eq!(est.power, 0.0);
        assert_eq!(est.std_error, Some(0.0));
    }

    #[test]
    fn reproducible_per_seed() {
        let f = SphereMap::bubble(2, 2).unwrap();
        let spec = SeminormSpec::critical(0.6, Domain::Sphere(2)).unwrap();
        let a = fractional_seminorm_mc(&f, &spec, 42, 30_000).unwrap();
        let b = fractional_seminorm_mc(&f, &spec, 42, 30_000).unwrap();
        assert_eq!(a.power.to_bits(), b.power.to_bits());
        let c = fractional_seminorm_mc(&f, &spec, 43, 30_000).unwrap();
        assert_ne!(a.power.to_bits(), c.power.to_bits());
    }

    #[test]
    fn agrees_with_pair_sum_on_circle_bubble() {
        let f = SphereMap::bubble(1, 2).unwrap();
        let spec = SeminormSpec::critical(0.6, Domain::Sphere(1)).unwrap();
        let exact = fractional_seminorm(&f, &spec, &make_quadrature(1, 2048).unwrap())
            .unwrap()
            .power;
        let mc = fractional_seminorm_mc(&f, &spec, 11, 400_000).unwrap();
        let sigma = (mc.power - exact).abs() / mc.std_error.unwrap();
        assert!(
            sigma < 3.5,
            "MC {} +- {} vs pair sum {exact} ({sigma} sigma)",
            mc.power,
            mc.std_error.unwrap()
        );
    }

    #[test]
    fn sample_floor_enforced() {
        let f = SphereMap::bubble(1, 1).unwrap();
        let spec = SeminormSpec::critical(0.6, Domain::Sphere(1)).unwrap();
        assert!(fractional_seminorm_mc(&f, &spec, 1, 100).is_err());
    }

    #[test]
    fn euclidean_estimator_matches_oracle_on_a_radial_profile() {
        // Oracle by 2-D fine quadrature in (rx, ru) of the radially
        // symmetric integrand for f(x) = max(0, 1 - |x|) on R^3, s = 0.5,
        // p = 2: I = int int |f(x)-f(y)|^2 / |x-y|^4 dx dy.
        let f = |x: &[f64], out: &mut [f64]| {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            out[0] = (1.0 - r).max(0.0);
        };
        let cfg = EuclideanMcConfig {
            dim: 3,
            s: 0.5,
            p: 2.0,
            support_radius: 1.0,
            samples: 1_500_000,
            seed: 5,
        };
        let est = euclidean_seminorm_mc(f, 1, &cfg);
        // Independent oracle: sample the same integral with plain
        // quadrature over (|x|, |u|, angle), exploiting radial symmetry:
        // I = int_0^inf 4 pi rx^2 drx int_0^inf du |S^2| u^2
        //     int_0^pi (dtheta sin(theta)/2) |f(rx) - f(ry)|^2 / u^4
        // with ry = sqrt(rx^2 + u^2 + 2 rx u cos theta).
        // The x-integral runs over the support ball only; pairs with x
        // outside and y inside mirror the (x inside, y outside) pairs, so
        // those carry weight 2.
        let (n1, n2, n3) = (320, 320, 128);
        let mut oracle = 0.0;
        let rx_max = 1.0;
        let u_max = 8.0;
        for i in 0..n1 {
            let rx = rx_max * (i as f64 + 0.5) / n1 as f64;
            let fx = (1.0 - rx).max(0.0);
            let mut inner = 0.0;
            for j in 0..n2 {
                // Cubic-stretched spacing in u to resolve the kernel.
                let t = (j as f64 + 0.5) / n2 as f64;
                let u = u_max * t * t * t;
                let du = u_max * 3.0 * t * t / n2 as f64;
                let mut ang = 0.0;
                for k in 0..n3 {
                    let th = std::f64::consts::PI * (k as f64 + 0.5) / n3 as f64;
                    let ry = (rx * rx + u * u + 2.0 * rx * u * th.cos()).sqrt();
                    let fy = (1.0 - ry).max(0.0);
                    let double_count = if ry > 1.0 { 2.0 } else { 1.0 };
                    ang += double_count * (fx - fy).powi(2) * th.sin();
                }
                ang *= std::f64::consts::PI / n3 as f64 / 2.0;
                inner += ang * 4.0 * std::f64::consts::PI * u * u / u.powi(4) * du;
            }
            oracle += inner * 4.0 * std::f64::consts::PI * rx * rx * (rx_max / n1 as f64);
        }
        // Analytic u > u_max tail: there f(y) = 0 and ry > 1, so the tail is
        // 2 * int 4 pi rx^2 fx^2 drx * int_{u_max}^inf 4 pi / u^2 du with
        // int_0^1 rx^2 (1 - rx)^2 drx = 1/30.
        let pi = std::f64::consts::PI;
        oracle += 2.0 * (4.0 * pi / 30.0) * (4.0 * pi / u_max);
        let sigma = (est.power - oracle).abs() / est.std_error.unwrap();
        assert!(
            sigma < 4.0,
            "MC {} +- {} vs oracle {oracle} ({sigma} sigma)",
            est.power,
            est.std_error.unwrap()
        );
    }
}
