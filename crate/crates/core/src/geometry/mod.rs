//! Floating-point checks on the smoothing `Q_r` of the local model: the defining
//! map `F`, its Jacobian, the induced symplectic pairing, the `mu_r` action, the
//! leafwise identification with `W_r`, and the projection to `Q_1`.
//!
//! Coordinates are `z_j = x_j + i y_j` with `f + i g = z_3^r`.

pub mod certify;
pub mod sample;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::Rational;
use crate::error::{Error, Result};

pub use certify::{certify, CertificationReport};
pub use sample::{sample_exceptional, sample_qr, sample_w_leaf, write_csv, SampleConfig};

/// A point of `R^4 x R^4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealPoint {
    pub x: [f64; 4],
    pub y: [f64; 4],
}

impl RealPoint {
    pub fn new(x: [f64; 4], y: [f64; 4]) -> Result<Self> {
        if x.iter().chain(&y).all(|v| v.is_finite()) {
            Ok(RealPoint { x, y })
        } else {
            Err(Error::InvalidModel("point has non-finite coordinates".into()))
        }
    }

    /// Coordinates in the order `(x1, x2, x3, x4, y1, y2, y3, y4)`.
    pub fn to_array(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        out[..4].copy_from_slice(&self.x);
        out[4..].copy_from_slice(&self.y);
        out
    }

    pub fn from_array(v: [f64; 8]) -> Self {
        RealPoint {
            x: [v[0], v[1], v[2], v[3]],
            y: [v[4], v[5], v[6], v[7]],
        }
    }

    pub fn z3(&self) -> Complex64 {
        Complex64::new(self.x[2], self.y[2])
    }

    pub fn max_abs_diff(&self, other: &RealPoint) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Coefficient grids of `f` and `g`: entry `[i][j]` multiplies `x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyPair {
    pub f: Vec<Vec<Rational>>,
    pub g: Vec<Vec<Rational>>,
}

fn binomial(n: u32, k: u32) -> num_bigint::BigInt {
    (0..k).fold(num_bigint::BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// Real and imaginary parts of `(x + i y)^r`.
pub fn fg_polys(r: u32) -> PolyPair {
    let n = r as usize + 1;
    let zero = || vec![vec![Rational::from_integer(0.into()); n]; n];
    let (mut f, mut g) = (zero(), zero());
    for k in 0..=r {
        let c = Rational::from_integer(binomial(r, k));
        let (i, j) = ((r - k) as usize, k as usize);
        match k % 4 {
            0 => f[i][j] = c,
            1 => g[i][j] = c,
            2 => f[i][j] = -c,
            _ => g[i][j] = -c,
        }
    }
    PolyPair { f, g }
}

impl PolyPair {
    fn mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let n = a.len() + b.len() - 1;
        let mut out = vec![vec![Rational::from_integer(0.into()); n]; n];
        for (i, ra) in a.iter().enumerate() {
            for (j, ca) in ra.iter().enumerate() {
                if ca == &Rational::from_integer(0.into()) {
                    continue;
                }
                for (k, rb) in b.iter().enumerate() {
                    for (l, cb) in rb.iter().enumerate() {
                        out[i + k][j + l] += ca * cb;
                    }
                }
            }
        }
        out
    }

    /// `f^2 + g^2 == (x^2 + y^2)^r` as an identity of polynomials.
    pub fn modulus_identity_holds(&self) -> bool {
        let r = self.f.len() - 1;
        let mut lhs = Self::mul(&self.f, &self.f);
        for (row, grow) in lhs.iter_mut().zip(Self::mul(&self.g, &self.g)) {
            for (a, b) in row.iter_mut().zip(grow) {
                *a += b;
            }
        }
        let one = Rational::from_integer(1.into());
        let mut rhs = vec![vec![one.clone()]];
        let base = vec![
            vec![Rational::from_integer(0.into()), Rational::from_integer(0.into()), one.clone()],
            vec![Rational::from_integer(0.into()); 3],
            vec![one, Rational::from_integer(0.into()), Rational::from_integer(0.into())],
        ];
        for _ in 0..r {
            rhs = Self::mul(&rhs, &base);
        }
        lhs == rhs
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let ev = |grid: &[Vec<Rational>]| {
            let mut s = 0.0;
            for (i, row) in grid.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    let c = crate::algebra::rational::to_f64(c);
                    if c != 0.0 {
                        s += c * x.powi(i as i32) * y.powi(j as i32);
                    }
                }
            }
            s
        };
        (ev(&self.f), ev(&self.g))
    }
}

/// `(f, g)` at `z3`, and `z3^(r-1) * r = df/dx3 + i dg/dx3`.
fn fg_and_derivative(r: u32, z: Complex64) -> (Complex64, Complex64) {
    let w = z.powu(r);
    let dw = if r == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.powu(r - 1) * r as f64
    };
    (w, dw)
}

/// `(F1, F2)` at `p`.
#[allow(non_snake_case)]
pub fn F_eval(r: u32, p: &RealPoint) -> (f64, f64) {
    let w = p.z3().powu(r);
    let (f, g) = (w.re, w.im);
    let (x, y) = (&p.x, &p.y);
    let f1 = x[0] * x[0] + x[1] * x[1] + f * f + x[3] * x[3] - 1.0;
    let f2 = x[0] * y[0] + x[1] * y[1] + f * g + x[3] * y[3];
    (f1, f2)
}

/// Analytic gradients of `F1`, `F2` in the order `(x1, x2, x3, x4, y1, y2, y3, y4)`.
#[allow(non_snake_case)]
pub fn grad_F(r: u32, p: &RealPoint) -> ([f64; 8], [f64; 8]) {
    let (w, dw) = fg_and_derivative(r, p.z3());
    let (f, g) = (w.re, w.im);
    // Cauchy-Riemann: f_x = g_y = Re w', g_x = -f_y = Im w'
    let (fx, gx) = (dw.re, dw.im);
    let (fy, gy) = (-gx, fx);
    let (x, y) = (&p.x, &p.y);
    let g1 = [
        2.0 * x[0],
        2.0 * x[1],
        2.0 * f * fx,
        2.0 * x[3],
        0.0,
        0.0,
        2.0 * f * fy,
        0.0,
    ];
    let g2 = [
        y[0],
        y[1],
        f * gx + g * fx,
        y[3],
        x[0],
        x[1],
        f * gy + g * fy,
        x[3],
    ];
    (g1, g2)
}

/// Largest relative deviation between [`grad_F`] and central differences with step `h`,
/// measured per gradient as `max |fd - exact| / max(1, max |exact|)`.
pub fn gradient_fd_error(r: u32, p: &RealPoint, h: f64) -> f64 {
    let (a1, a2) = grad_F(r, p);
    let base = p.to_array();
    let mut d1 = [0.0; 8];
    let mut d2 = [0.0; 8];
    for k in 0..8 {
        let mut plus = base;
        let mut minus = base;
        plus[k] += h;
        minus[k] -= h;
        let (p1, p2) = F_eval(r, &RealPoint::from_array(plus));
        let (m1, m2) = F_eval(r, &RealPoint::from_array(minus));
        d1[k] = (p1 - m1) / (2.0 * h);
        d2[k] = (p2 - m2) / (2.0 * h);
    }
    let rel = |a: &[f64; 8], d: &[f64; 8]| {
        let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        a.iter().zip(d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
    };
    rel(&a1, &d1).max(rel(&a2, &d2))
}

/// The pairing `-omega_0(grad F1, grad F2)` computed directly, with two closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pairing {
    pub numeric: f64,
    /// `2x1^2 + 2x2^2 + 2 f (f_x^2 + g_x^2) + 2x4^2`, as usually displayed.
    pub closed_form: f64,
    /// `2x1^2 + 2x2^2 + 2 f^2 (f_x^2 + g_x^2) + 2x4^2`, which the direct sum reduces to.
    pub corrected_closed_form: f64,
}

pub fn symplectic_pairing(r: u32, p: &RealPoint) -> Pairing {
    let (g1, g2) = grad_F(r, p);
    let numeric: f64 = (0..4).map(|i| g1[i] * g2[4 + i] - g2[i] * g1[4 + i]).sum();
    let (w, dw) = fg_and_derivative(r, p.z3());
    let f = w.re;
    let d2 = dw.norm_sqr();
    let x = &p.x;
    let base = 2.0 * (x[0] * x[0] + x[1] * x[1] + x[3] * x[3]);
    Pairing {
        numeric,
        closed_form: base + 2.0 * f * d2,
        corrected_closed_form: base + 2.0 * f * f * d2,
    }
}

/// Singular values `(s1 >= s2)` of the 2x8 Jacobian.
///
/// `s1 s2 = |J1 ^ J2|` by the Lagrange identity, which keeps `s2` accurate when the
/// rows are nearly parallel.
pub fn jacobian_singular_values(r: u32, p: &RealPoint) -> (f64, f64) {
    let (a, b) = grad_F(r, p);
    let dot = |u: &[f64; 8], v: &[f64; 8]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let (aa, bb, ab) = (dot(&a, &a), dot(&b, &b), dot(&a, &b));
    let mut wedge = 0.0;
    for i in 0..8 {
        for j in i + 1..8 {
            let m = a[i] * b[j] - a[j] * b[i];
            wedge += m * m;
        }
    }
    let half = 0.5 * (aa + bb);
    let disc = (0.25 * (aa - bb) * (aa - bb) + ab * ab).sqrt();
    let s1 = (half + disc).sqrt();
    let s2 = if s1 > 0.0 { wedge.sqrt() / s1 } else { 0.0 };
    (s1, s2)
}

/// Numerical rank: how many singular values exceed `tol`.
pub fn jacobian_rank(r: u32, p: &RealPoint, tol: f64) -> usize {
    let (s1, s2) = jacobian_singular_values(r, p);
    [s1, s2].iter().filter(|s| **s > tol).count()
}

/// The generator `e^{2 pi i / r}` of `mu_r(a, -a, 1, 0)` applied `power` times.
///
/// It rotates the `(x1, x2)` and `(y1, y2)` planes by `2 pi a power / r`, the
/// `(x3, y3)` plane by `2 pi power / r`, and fixes `(x4, y4)`.
pub fn mu_action(r: u32, a: u32, power: i64, p: &RealPoint) -> RealPoint {
    let r = r as i64;
    let k = (a as i64 * power).rem_euclid(r);
    let (s, c) = (2.0 * PI * k as f64 / r as f64).sin_cos();
    let (s3, c3) = (2.0 * PI * power.rem_euclid(r) as f64 / r as f64).sin_cos();
    let (x, y) = (&p.x, &p.y);
    RealPoint {
        x: [
            c * x[0] - s * x[1],
            s * x[0] + c * x[1],
            c3 * x[2] - s3 * y[2],
            x[3],
        ],
        y: [
            c * y[0] - s * y[1],
            s * y[0] + c * y[1],
            s3 * x[2] + c3 * y[2],
            y[3],
        ],
    }
}

/// Exact check that every monomial of `xy - z^(2r) + t^2` has total
/// `mu_r(a, -a, 1, 0)`-weight divisible by `r`.
pub fn defining_polynomial_invariant(r: u32, a: u32) -> bool {
    let weights = [a as i64, -(a as i64), 1, 0];
    // exponents of (x, y, z, t)
    let monomials = [[1, 1, 0, 0], [0, 0, 2 * r as i64, 0], [0, 0, 0, 2]];
    monomials.iter().all(|e| {
        let w: i64 = e.iter().zip(&weights).map(|(e, w)| e * w).sum();
        w.rem_euclid(r as i64) == 0
    })
}

/// Residuals of the `W_{r, lambda}` equations: `X - lambda`, `Y - lambda`, `cross`.
pub fn w_leaf_residual(r: u32, lambda: f64, p: &RealPoint) -> f64 {
    let (xx, yy, cross) = leaf_terms(r, p);
    (xx - lambda).abs().max((yy - lambda).abs()).max(cross.abs())
}

/// Residuals of the `Q_{r, lambda}` equations: `X - 1`, `Y - lambda^2`, `cross`.
pub fn q_leaf_residual(r: u32, lambda: f64, p: &RealPoint) -> f64 {
    let (xx, yy, cross) = leaf_terms(r, p);
    (xx - 1.0)
        .abs()
        .max((yy - lambda * lambda).abs())
        .max(cross.abs())
}

fn leaf_terms(r: u32, p: &RealPoint) -> (f64, f64, f64) {
    let w = p.z3().powu(r);
    let (x, y) = (&p.x, &p.y);
    let xx = x[0] * x[0] + x[1] * x[1] + w.re * w.re + x[3] * x[3];
    let yy = y[0] * y[0] + y[1] * y[1] + w.im * w.im + y[3] * y[3];
    let cross = x[0] * y[0] + x[1] * y[1] + w.re * w.im + x[3] * y[3];
    (xx, yy, cross)
}

/// Leafwise identification `W_{r, lambda} -> Q_{r, lambda}`.
///
/// The `x` coordinates scale by `lambda^(-1/2)`, the `y` coordinates by
/// `lambda^(1/2)`, and `(u + i v)` is the principal `r`-th root of
/// `lambda^(-1/2) f + i lambda^(1/2) g`. This is the scaling under which the two
/// leaf equations correspond; at `lambda = 1` the map fixes every coordinate except
/// `z3`, which moves within its `mu_r` orbit.
pub fn phi_r_map(r: u32, lambda: f64, p: &RealPoint, tol: f64) -> Result<RealPoint> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidModel(format!("leaf parameter {lambda} must be positive")));
    }
    let residual = w_leaf_residual(r, lambda, p);
    // written negated so that a NaN residual is rejected
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(residual < tol) {
        return Err(Error::OffLeaf { residual, tol });
    }
    let (sx, sy) = (lambda.powf(-0.5), lambda.sqrt());
    let w = p.z3().powu(r);
    let target = Complex64::new(sx * w.re, sy * w.im);
    let root = if r == 1 { target } else { target.powf(1.0 / r as f64) };
    let (x, y) = (&p.x, &p.y);
    Ok(RealPoint {
        x: [sx * x[0], sx * x[1], root.re, sx * x[3]],
        y: [sy * y[0], sy * y[1], root.im, sy * y[3]],
    })
}

/// `pi: (x3, y3) -> (f, g)`, all other coordinates fixed.
pub fn pi_projection(r: u32, p: &RealPoint) -> RealPoint {
    let w = p.z3().powu(r);
    let mut out = *p;
    out.x[2] = w.re;
    out.y[2] = w.im;
    out
}

/// Smallest distance from `w` to the `mu_r` orbit of `z`.
pub fn orbit_distance(r: u32, z: Complex64, w: Complex64) -> f64 {
    (0..r)
        .map(|k| {
            let xi = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / r as f64);
            (xi * z - w).norm()
        })
        .fold(f64::INFINITY, f64::min)
}
