//! Seeded certification run over sampled points, reported as pass counts and
//! worst values against fixed tolerances.

use rayon::prelude::*;
use serde::Serialize;

use super::sample::{sample_exceptional, sample_qr, sample_w_leaf, SampleConfig};
use super::{
    gradient_fd_error, jacobian_rank, jacobian_singular_values, mu_action, orbit_distance,
    phi_r_map, pi_projection, q_leaf_residual, symplectic_pairing, F_eval, RealPoint,
};
use crate::error::Result;

/// Singular-value threshold for the Jacobian rank.
pub const RANK_TOL: f64 = 1e-8;
/// Lower bound on `|-omega_0(grad F1, grad F2)|`.
pub const PAIRING_MIN: f64 = 1e-8;
/// Invariance of `F` under the group action.
pub const MU_TOL: f64 = 1e-12;
/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Leaf parameters exercised by the identification check.
pub const LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];

/// One property measured over a sample set. `worst` is the largest value for
/// upper-bounded checks and the smallest for lower-bounded ones.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub bound: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    pub passed: usize,
    pub total: usize,
}

impl Check {
    fn upper(name: &'static str, tolerance: f64, values: &[f64]) -> Check {
        Check {
            name,
            bound: "below",
            tolerance,
            worst: values.iter().copied().fold(0.0, f64::max),
            passed: values.iter().filter(|v| **v < tolerance).count(),
            total: values.len(),
        }
    }

    fn lower(name: &'static str, tolerance: f64, values: &[f64]) -> Check {
        Check {
            name,
            bound: "above",
            tolerance,
            worst: values.iter().copied().fold(f64::INFINITY, f64::min),
            passed: values.iter().filter(|v| **v > tolerance).count(),
            total: values.len(),
        }
    }

    pub fn pass(&self) -> bool {
        self.passed == self.total
    }
}

/// Report-only comparison of the direct pairing with its closed forms.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormComparison {
    /// `max |numeric - (2x1^2 + 2x2^2 + 2 f |f'|^2 + 2x4^2)|`
    pub max_dev_linear_f: f64,
    /// `max |numeric - (2x1^2 + 2x2^2 + 2 f^2 |f'|^2 + 2x4^2)|`
    pub max_dev_squared_f: f64,
    /// Samples where the linear-`f` form is negative.
    pub linear_f_negative: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub r: u32,
    pub a: u32,
    pub seed: u64,
    pub count: usize,
    pub tol_eq: f64,
    pub tol_grad: f64,
    pub checks: Vec<Check>,
    pub closed_form: ClosedFormComparison,
    pub all_pass: bool,
}

impl CertificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct PointStats {
    residual: f64,
    rank: f64,
    sigma_min: f64,
    pairing: f64,
    dev_linear: f64,
    dev_squared: f64,
    linear_negative: bool,
    fd: f64,
    mu: f64,
    pi: f64,
    pi_mu: f64,
}

/// `pi(g p)`: the `(u, v)` block of `pi(p)` rotated as for `g`, with `z3` image fixed.
fn pi_equivariance(r: u32, a: u32, p: &RealPoint) -> f64 {
    let base = pi_projection(r, p);
    (1..r as i64)
        .map(|k| {
            let moved = pi_projection(r, &mu_action(r, a, k, p));
            let mut expect = mu_action(r, a, k, &base);
            expect.x[2] = base.x[2];
            expect.y[2] = base.y[2];
            moved.max_abs_diff(&expect)
        })
        .fold(0.0, f64::max)
}

fn point_stats(r: u32, a: u32, p: &RealPoint) -> PointStats {
    let (f1, f2) = F_eval(r, p);
    let s = symplectic_pairing(r, p);
    let mu = (1..r.max(2) as i64)
        .map(|k| {
            let (g1, g2) = F_eval(r, &mu_action(r, a, k, p));
            (g1 - f1).abs().max((g2 - f2).abs())
        })
        .fold(0.0, f64::max);
    let (q1, q2) = F_eval(1, &pi_projection(r, p));
    PointStats {
        residual: f1.abs().max(f2.abs()),
        rank: jacobian_rank(r, p, RANK_TOL) as f64,
        sigma_min: jacobian_singular_values(r, p).1,
        pairing: s.numeric.abs(),
        dev_linear: (s.numeric - s.closed_form).abs(),
        dev_squared: (s.numeric - s.corrected_closed_form).abs(),
        linear_negative: s.closed_form < 0.0,
        fd: gradient_fd_error(r, p, FD_STEP),
        mu,
        pi: q1.abs().max(q2.abs()),
        pi_mu: pi_equivariance(r, a, p),
    }
}

/// Runs every geometric check for `(r, a)` with `cfg.count` points per sample set.
pub fn certify(r: u32, a: u32, cfg: &SampleConfig) -> Result<CertificationReport> {
    crate::local::validate_model(r, a, crate::local::Side::S)?;
    let points = sample_qr(r, cfg)?;
    let stats: Vec<PointStats> = points.par_iter().map(|p| point_stats(r, a, p)).collect();
    let col = |f: fn(&PointStats) -> f64| stats.iter().map(f).collect::<Vec<f64>>();

    let mut checks = vec![
        Check::upper("equation_residual", cfg.tol_eq, &col(|s| s.residual)),
        Check::lower("jacobian_rank_2", 1.5, &col(|s| s.rank)),
        Check::lower("jacobian_min_singular_value", RANK_TOL, &col(|s| s.sigma_min)),
        Check::lower("symplectic_pairing", PAIRING_MIN, &col(|s| s.pairing)),
        Check::upper("gradient_fd_relative_error", cfg.tol_grad, &col(|s| s.fd)),
        Check::upper("mu_invariance", MU_TOL, &col(|s| s.mu)),
        Check::upper("pi_lands_on_q1", cfg.tol_eq, &col(|s| s.pi)),
        Check::upper("pi_equivariance", cfg.tol_eq, &col(|s| s.pi_mu)),
    ];

    // leafwise identification W_{r,lambda} -> Q_{r,lambda}
    let mut phi_res = Vec::new();
    let mut commute = Vec::new();
    let mut unit_leaf = Vec::new();
    for &lambda in &LAMBDAS {
        let leaf = sample_w_leaf(r, lambda, cfg)?;
        let out: Vec<(f64, f64, Option<f64>)> = leaf
            .par_iter()
            .map(|p| -> Result<(f64, f64, Option<f64>)> {
                let q = phi_r_map(r, lambda, p, cfg.tol_eq)?;
                let res = q_leaf_residual(r, lambda, &q);
                // pi_1 . phi_r == phi_1 . pi_r
                let lhs = pi_projection(r, &q);
                let rhs = phi_r_map(1, lambda, &pi_projection(r, p), cfg.tol_eq)?;
                let comm = lhs.max_abs_diff(&rhs);
                let unit = (lambda == 1.0).then(|| {
                    let mut d = orbit_distance(r, p.z3(), q.z3());
                    for k in [0, 1, 3] {
                        d = d.max((p.x[k] - q.x[k]).abs()).max((p.y[k] - q.y[k]).abs());
                    }
                    d
                });
                Ok((res, comm, unit))
            })
            .collect::<Result<_>>()?;
        for (res, comm, unit) in out {
            phi_res.push(res);
            commute.push(comm);
            unit_leaf.extend(unit);
        }
    }
    checks.push(Check::upper("phi_leaf_residual", cfg.tol_eq, &phi_res));
    checks.push(Check::upper("phi_commutes_with_pi", cfg.tol_eq, &commute));
    checks.push(Check::upper("phi_unit_leaf_orbit", cfg.tol_eq, &unit_leaf));

    // the exceptional set projects into the exceptional set of Q_1
    let exc = sample_exceptional(r, &SampleConfig { count: (cfg.count / 10).max(1), ..*cfg })?;
    let exc_res: Vec<f64> = exc
        .iter()
        .map(|p| {
            let q = pi_projection(r, p);
            let (a, b) = F_eval(1, &q);
            [a, b, q.y[0], q.y[1], q.y[2], q.y[3]]
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect();
    checks.push(Check::upper("exceptional_set_maps_to_l1", cfg.tol_eq, &exc_res));

    let closed_form = ClosedFormComparison {
        max_dev_linear_f: col(|s| s.dev_linear).into_iter().fold(0.0, f64::max),
        max_dev_squared_f: col(|s| s.dev_squared).into_iter().fold(0.0, f64::max),
        linear_f_negative: stats.iter().filter(|s| s.linear_negative).count(),
    };
    let all_pass = checks.iter().all(Check::pass);
    Ok(CertificationReport {
        r,
        a,
        seed: cfg.seed,
        count: cfg.count,
        tol_eq: cfg.tol_eq,
        tol_grad: cfg.tol_grad,
        checks,
        closed_form,
        all_pass,
    })
}
