//! Seeded point generators on `Q_r`, on the leaves `W_{r, lambda}`, and on the
//! exceptional set.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RealPoint;
use crate::error::{Error, Result};

/// Half-width of the square `(x3, y3)` is drawn from.
const BOX: f64 = 1.25;
/// Rejection attempts allowed per point.
const BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    #[serde(default = "default_tol_eq")]
    pub tol_eq: f64,
    #[serde(default = "default_tol_grad")]
    pub tol_grad: f64,
}

fn default_tol_eq() -> f64 {
    1e-9
}

fn default_tol_grad() -> f64 {
    1e-6
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleConfig {
            seed,
            count,
            tol_eq: default_tol_eq(),
            tol_grad: default_tol_grad(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("tol_eq", self.tol_eq), ("tol_grad", self.tol_grad)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: SampleConfig =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("malformed sample config: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}

/// Generator for sample `index` of stream `tag`, independent of thread scheduling.
fn rng_for(seed: u64, tag: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(index as u64);
    rng
}

fn gaussian3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Uniform point on the sphere of radius `rho` in `R^3`.
fn on_sphere(rng: &mut ChaCha8Rng, rho: f64) -> [f64; 3] {
    loop {
        let v = gaussian3(rng);
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            return v.map(|c| c * rho / n);
        }
    }
}

fn assemble(x: [f64; 3], y: [f64; 3], z: Complex64) -> RealPoint {
    RealPoint {
        x: [x[0], x[1], z.re, x[2]],
        y: [y[0], y[1], z.im, y[2]],
    }
}

fn collect<F>(count: usize, gen: F) -> Result<Vec<RealPoint>>
where
    F: Fn(usize) -> Result<RealPoint> + Sync + Send,
{
    (0..count).into_par_iter().map(gen).collect()
}

/// Points of `Q_r`. Every tenth sample lies on the stratum `x1 = x2 = x4 = 0`,
/// where `z3` is a `2r`-th root of unity; the rest come from rejection sampling
/// `(x3, y3)` with `f^2 < 1`.
pub fn sample_qr(r: u32, cfg: &SampleConfig) -> Result<Vec<RealPoint>> {
    cfg.validate()?;
    collect(cfg.count, |i| {
        let mut rng = rng_for(cfg.seed, r as u64, i);
        if i % 10 == 9 {
            let k = rng.gen_range(0..2 * r);
            let z = Complex64::from_polar(1.0, PI * k as f64 / r as f64);
            return Ok(assemble([0.0; 3], gaussian3(&mut rng), z));
        }
        for _ in 0..BUDGET {
            let z = Complex64::new(rng.gen_range(-BOX..BOX), rng.gen_range(-BOX..BOX));
            let w = z.powu(r);
            let f2 = w.re * w.re;
            if f2 >= 1.0 {
                continue;
            }
            let x = on_sphere(&mut rng, (1.0 - f2).sqrt());
            // a random point of the plane x . y = -f g
            let v = gaussian3(&mut rng);
            let t = (dot(&x, &v) + w.re * w.im) / dot(&x, &x);
            let y = [v[0] - t * x[0], v[1] - t * x[1], v[2] - t * x[2]];
            return Ok(assemble(x, y, z));
        }
        Err(Error::BudgetExhausted(BUDGET))
    })
}

/// Points of the leaf `W_{r, lambda}`: `X = Y = lambda`, `cross = 0`.
pub fn sample_w_leaf(r: u32, lambda: f64, cfg: &SampleConfig) -> Result<Vec<RealPoint>> {
    cfg.validate()?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("leaf parameter {lambda} must be positive")));
    }
    // the leaf needs |z3|^(2r) <= lambda, so draw z3 from that disc
    let radius = lambda.powf(0.5 / r as f64);
    let tag = (1u64 << 40) ^ (r as u64) ^ lambda.to_bits();
    collect(cfg.count, |i| {
        let mut rng = rng_for(cfg.seed, tag, i);
        for _ in 0..BUDGET {
            let z = Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
            let w = z.powu(r);
            let (f, g) = (w.re, w.im);
            if w.norm_sqr() >= lambda || z.norm() >= radius {
                continue;
            }
            let rho = (lambda - f * f).sqrt();
            let x = on_sphere(&mut rng, rho);
            let xhat = x.map(|c| c / rho);
            // unit vector orthogonal to x
            let e = loop {
                let v = gaussian3(&mut rng);
                let t = dot(&v, &xhat);
                let u = [v[0] - t * xhat[0], v[1] - t * xhat[1], v[2] - t * xhat[2]];
                let n = dot(&u, &u).sqrt();
                if n > 1e-9 {
                    break u.map(|c| c / n);
                }
            };
            let alpha = -f * g / rho;
            let beta = (lambda - g * g - alpha * alpha).max(0.0).sqrt();
            let y = [0, 1, 2].map(|k| alpha * xhat[k] + beta * e[k]);
            return Ok(assemble(x, y, z));
        }
        Err(Error::BudgetExhausted(BUDGET))
    })
}

/// Points of the exceptional set `y1 = y2 = g = y4 = 0` inside `Q_r`.
pub fn sample_exceptional(r: u32, cfg: &SampleConfig) -> Result<Vec<RealPoint>> {
    cfg.validate()?;
    collect(cfg.count, |i| {
        let mut rng = rng_for(cfg.seed, (2u64 << 40) ^ r as u64, i);
        // g = 0 exactly on the rays arg z3 = pi k / r
        let k = rng.gen_range(0..2 * r);
        let rho: f64 = rng.gen_range(0.0..1.0);
        let z = Complex64::from_polar(rho, PI * k as f64 / r as f64);
        let f = z.powu(r).re;
        let x = on_sphere(&mut rng, (1.0 - f * f).max(0.0).sqrt());
        Ok(assemble(x, [0.0; 3], z))
    })
}

/// CSV dump with one row per point and columns `x1..x4, y1..y4`.
pub fn write_csv<W: Write>(points: &[RealPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("csv output failed: {e}"));
    w.write_record(["x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4"])
        .map_err(io)?;
    for p in points {
        w.serialize(p.to_array()).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Config(format!("csv output failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{w_leaf_residual, F_eval};

    #[test]
    fn qr_samples_lie_on_the_variety() {
        for r in 1..=3 {
            let pts = sample_qr(r, &SampleConfig::new(5, 200)).unwrap();
            for p in &pts {
                let (a, b) = F_eval(r, p);
                assert!(a.abs() < 1e-9 && b.abs() < 1e-9, "{p:?}");
                let n = p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.x[3] * p.x[3];
                assert!(n > 0.0 || pts.iter().position(|q| q == p).unwrap() % 10 == 9);
            }
        }
    }

    #[test]
    fn reproducible() {
        let cfg = SampleConfig::new(42, 1000);
        let a = sample_qr(1, &cfg).unwrap();
        let b = sample_qr(1, &cfg).unwrap();
        assert!(a.iter().zip(&b).all(|(p, q)| p.to_array().map(f64::to_bits) == q.to_array().map(f64::to_bits)));
        let c = sample_qr(1, &SampleConfig::new(43, 1000)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn leaf_samples() {
        for r in 1..=3 {
            for lambda in [0.5, 1.0, 2.0] {
                for p in sample_w_leaf(r, lambda, &SampleConfig::new(1, 100)).unwrap() {
                    assert!(w_leaf_residual(r, lambda, &p) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exceptional_samples() {
        for p in sample_exceptional(3, &SampleConfig::new(2, 50)).unwrap() {
            let (a, b) = F_eval(3, &p);
            assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
            assert!(p.z3().powu(3).im.abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SampleConfig::from_json(r#"{"seed": 1, "count": 10}"#).is_ok());
        assert!(SampleConfig::from_json(r#"{"seed": 1, "count": 10, "tol_eq": 0}"#).is_err());
        assert!(SampleConfig::from_json(r#"{"seed": 1}"#).is_err());
    }

    #[test]
    fn csv_dump() {
        let pts = sample_qr(2, &SampleConfig::new(3, 4)).unwrap();
        let mut buf = Vec::new();
        write_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("x1,x2,x3,x4,y1,y2,y3,y4"));
    }
}
