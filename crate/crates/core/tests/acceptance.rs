//! Acceptance suite: one pass/fail line per criterion, each with its runtime bound.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbiconifold::algebra::{int, rat, QuantumRational, Rational, RationalMatrix};
use orbiconifold::flop::{chart_ring, flop_ring, local_flop_check, verify_ruan_isomorphism};
use orbiconifold::geometry::{certify, SampleConfig};
use orbiconifold::local::{
    basis_product, cr_basis, cr_three_point_twisted, degree_shifting, gw_invariant,
    quantum_three_point, valid_weights, validate_model, virtual_dimension, BasisLabel, CRClass,
    Side, TwistedSector,
};
use orbiconifold::resolution::{feasible_patterns_of, sampling_oracle, SignPattern};
use orbiconifold::Error;

type Check = std::result::Result<String, String>;
/// Id, name, time limit in seconds, and the check itself.
type Criterion = (&'static str, &'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(r: u32, a: u32, side: Side) -> orbiconifold::local::LocalModel {
    validate_model(r, a, side).expect("valid model")
}

fn ac1() -> Check {
    let mut n = 0;
    for r in 1..=6 {
        for a in valid_weights(r) {
            let m = model(r, a, Side::S);
            for mult in 1..=10u32 {
                let got = gw_invariant(&m, mult * r).map_err(|e| e.to_string())?;
                let want = rat(1, (mult * mult * mult) as i64);
                ensure(got == want, || format!("r={r} a={a} d={}: {got} != {want}", mult * r))?;
                n += 1;
            }
            for d in (1..=60).filter(|d| d % r != 0) {
                let got = gw_invariant(&m, d).map_err(|e| e.to_string())?;
                ensure(got.is_zero(), || format!("r={r} a={a} d={d}: {got} != 0"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} invariants exact"))
}

fn ac2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let r = rng.gen_range(1..=6u32);
        let n: [i64; 3] = [0; 3].map(|_| rng.gen_range(0..=5));
        let m = model(r, if r == 1 { 0 } else { 1 }, Side::S);
        let classes: Vec<CRClass> = n
            .iter()
            .map(|&k| CRClass::scaled_basis(&m, BasisLabel::H, int(k)).unwrap())
            .collect();
        let tp = quantum_three_point(&m, [&classes[0], &classes[1], &classes[2]])
            .map_err(|e| e.to_string())?;
        let series = tp.quantum.series_expand(50).map_err(|e| e.to_string())?;
        let mut oracle = vec![Rational::zero(); 51];
        for d in 1..=50u32 {
            let di = d as i64;
            let amp = int(n[0] * di) * int(n[1] * di) * int(n[2] * di);
            oracle[d as usize] = amp * gw_invariant(&m, d).unwrap();
        }
        ensure(series == oracle, || format!("r={r} n={n:?}: series differs"))?;
    }
    Ok("20 random amplitudes match to order 50".into())
}

fn ac3() -> Check {
    let mut triples = 0;
    for r in 1..=6 {
        for a in valid_weights(r) {
            let rep = local_flop_check(r, a).map_err(|e| e.to_string())?;
            let bad = rep.triples.iter().find(|t| !t.pass || !t.total.is_zero());
            ensure(bad.is_none(), || format!("r={r} a={a}: {:?}", bad.unwrap().inputs))?;
            triples += rep.triples.len();
        }
    }
    let f = QuantumRational::geometric("t", 1);
    let sum = f.add(&f.substitute_inverse()).map_err(|e| e.to_string())?;
    ensure(sum == QuantumRational::constant(int(-1)), || format!("scalar identity gave {sum}"))?;
    Ok(format!("{triples} triples exact zero, scalar identity canonical"))
}

fn ac4() -> Check {
    let mut tables = 0;
    for r in 1..=7 {
        for a in valid_weights(r) {
            for side in [Side::S, Side::Sf] {
                let m = model(r, a, side);
                let labels: Vec<BasisLabel> = cr_basis(&m).into_iter().map(|(l, _)| l).collect();
                let basis = |l: BasisLabel| CRClass::basis(&m, l).unwrap();
                for &x in &labels {
                    let unit = basis_product(&m, BasisLabel::Unit, x).map_err(|e| e.to_string())?;
                    ensure(unit == basis(x), || format!("r={r}: 1 * {x} = {unit}"))?;
                    for &y in &labels {
                        let xy = basis_product(&m, x, y);
                        let yx = basis_product(&m, y, x);
                        ensure(xy == yx, || format!("r={r}: {x} * {y} not commutative"))?;
                        if x == BasisLabel::H && y == BasisLabel::H {
                            ensure(xy == Err(Error::RequiresGlobalData), || "H * H resolved locally".into())?;
                            continue;
                        }
                        let xy = xy.map_err(|e| e.to_string())?;
                        match (x, y) {
                            (BasisLabel::Twisted(s), BasisLabel::Twisted(t)) => {
                                let want = if s.point != t.point || s.k + t.k != r {
                                    CRClass::zero(&m)
                                } else if s == TwistedSector::p(s.k) {
                                    basis(BasisLabel::ThetaP)
                                } else {
                                    basis(BasisLabel::ThetaQ)
                                };
                                ensure(xy == want, || format!("r={r}: {x} * {y} = {xy}"))?;
                                let psi = cr_three_point_twisted(&m, [x, y, BasisLabel::Unit])
                                    .map_err(|e| e.to_string())?;
                                let want = if s.point == t.point && s.k + t.k == r {
                                    rat(1, r as i64)
                                } else {
                                    int(0)
                                };
                                ensure(psi == want, || format!("r={r}: Psi({x}, {y}, 1) = {psi}"))?;
                            }
                            (BasisLabel::H, BasisLabel::Twisted(_)) => {
                                ensure(xy.is_zero(), || format!("r={r}: H * {y} = {xy}"))?;
                            }
                            _ => {}
                        }
                    }
                }
                tables += 1;
            }
        }
    }
    Ok(format!("{tables} product tables"))
}

fn ac5() -> Check {
    for r in 1..=50 {
        for k in 1..r {
            let s = degree_shifting(r, k).unwrap() + degree_shifting(r, r - k).unwrap();
            ensure(s == int(3), || format!("iota({k}) + iota({}) = {s} for r = {r}", r - k))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let r = rng.gen_range(2..=12u32);
        let weights = valid_weights(r);
        let a = weights[rng.gen_range(0..weights.len())];
        let m = model(r, a, Side::S);
        let len = rng.gen_range(1..=6);
        let sectors: Vec<TwistedSector> = (0..len)
            .map(|_| {
                let k = rng.gen_range(1..r);
                if rng.gen_bool(0.5) {
                    TwistedSector::p(k)
                } else {
                    TwistedSector::q(k)
                }
            })
            .collect();
        let d = r * rng.gen_range(1..=5);
        let v = virtual_dimension(&m, d, &sectors).map_err(|e| e.to_string())?;
        ensure(v < Rational::zero(), || format!("vdim {v} for {sectors:?}, r = {r}"))?;
        if len == 1 {
            ensure(!v.is_integer(), || format!("integral vdim {v} with one insertion"))?;
        }
    }
    Ok("duality for r <= 50, 1000 sector lists negative".into())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> RationalMatrix {
    let kappa = rng.gen_range(1..=6);
    let rows = rng.gen_range(1..=kappa + 1);
    let data = (0..rows)
        .map(|_| {
            (0..kappa)
                .map(|_| {
                    let q = rng.gen_range(1..=3i64);
                    let p = rng.gen_range(-5 * q..=5 * q);
                    rat(p, q)
                })
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(data, kappa).unwrap()
}

fn ac6() -> Check {
    let patterns = |m: &RationalMatrix| -> std::result::Result<BTreeSet<SignPattern>, String> {
        Ok(feasible_patterns_of(m, 20)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|p| p.signs)
            .collect())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut nonempty = 0;
    for i in 0..200 {
        let m = random_matrix(&mut rng);
        let found = patterns(&m)?;
        for p in &found {
            ensure(found.contains(&p.negated()), || format!("matrix {i}: {p} without its negation"))?;
        }
        let sampled = sampling_oracle(&m, 1000, i as u64);
        ensure(sampled.is_subset(&found), || format!("matrix {i}: oracle found an infeasible pattern"))?;
        nonempty += usize::from(!found.is_empty());
    }
    let pat = |s: &str| SignPattern::parse(s).unwrap();
    let one_one = patterns(&RationalMatrix::from_i64(&[&[1, 1]]))?;
    ensure(one_one == [pat("+-"), pat("-+")].into(), || format!("[1 1] gave {one_one:?}"))?;
    let id = patterns(&RationalMatrix::identity(2))?;
    ensure(id.is_empty(), || format!("identity gave {id:?}"))?;
    let zero = patterns(&RationalMatrix::zeros(1, 3))?;
    ensure(zero.len() == 8, || format!("zero matrix gave {} patterns", zero.len()))?;
    Ok(format!("200 matrices ({nonempty} with feasible patterns), hand examples exact"))
}

fn ac7() -> Check {
    let cases: [&[(u32, u32)]; 4] = [&[(2, 1)], &[(3, 2)], &[(2, 1), (3, 1)], &[(1, 0), (2, 1), (3, 2)]];
    let mut perturbations = 0;
    for (seed, charts) in cases.iter().enumerate() {
        let x = chart_ring(charts, seed as u64).map_err(|e| e.to_string())?;
        let (y, corr) = flop_ring(&x);
        let rep = verify_ruan_isomorphism(&x, &y, &corr).map_err(|e| e.to_string())?;
        ensure(rep.success, || format!("charts {charts:?}: {:?}", rep.mismatches.first()))?;
        let keys: Vec<[usize; 3]> = y.classical_entries().map(|(k, _)| *k).collect();
        for t in keys {
            let mut bad = y.clone();
            bad.set_classical(t, y.classical(t) + rat(1, 7));
            let rep = verify_ruan_isomorphism(&x, &bad, &corr).map_err(|e| e.to_string())?;
            ensure(!rep.success, || format!("charts {charts:?}: perturbing {t:?} went unnoticed"))?;
            perturbations += 1;
        }
    }
    Ok(format!("kappa 1..3 isomorphic, {perturbations} perturbations detected"))
}

fn ac8() -> Check {
    let mut runs = 0;
    for r in 1..=3 {
        for a in valid_weights(r) {
            let rep = certify(r, a, &SampleConfig::new(8 + r as u64, 1000)).map_err(|e| e.to_string())?;
            for c in &rep.checks {
                ensure(c.pass(), || {
                    format!("r={r} a={a} {}: {}/{} worst {:e} vs {:e}", c.name, c.passed, c.total, c.worst, c.tolerance)
                })?;
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} seeded runs of 1000 samples"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "GW table", 1, ac1),
        ("AC2", "series oracle", 5, ac2),
        ("AC3", "local flop identity", 10, ac3),
        ("AC4", "CR product law", 1, ac4),
        ("AC5", "degree bookkeeping", 1, ac5),
        ("AC6", "resolution solver", 30, ac6),
        ("AC7", "Ruan isomorphism", 10, ac7),
        ("AC8", "geometry certification", 60, ac8),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if elapsed < limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{id} {} {name}: {detail} [{:.3}s < {}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
