//! Property tests for algebraic and geometric invariants.

use num_traits::{One, Signed, Zero};
use orbiconifold::algebra::{int, rat, Poly, QuantumRational, Rational, RationalMatrix};
use orbiconifold::flop::{chart_ring, flop_ring, verify_ruan_isomorphism};
use orbiconifold::geometry::{mu_action, pi_projection, F_eval, RealPoint};
use orbiconifold::local::{gw_invariant, valid_weights, validate_model, Side};
use orbiconifold::resolution::{feasible_patterns_of, pattern_feasible, sampling_oracle, SignPattern};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 1..=max_len).prop_map(Poly::new)
}

/// Rational function in `t` whose denominator has a nonzero constant term.
fn expandable() -> impl Strategy<Value = QuantumRational> {
    (poly(4), small_rational(), poly(3)).prop_filter_map("expandable", |(num, d0, tail)| {
        if d0.is_zero() {
            return None;
        }
        let den = &Poly::constant(d0) + &tail.shift(1);
        QuantumRational::new("t", num, den).ok()
    })
}

fn matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=5)
        .prop_flat_map(|cols| (Just(cols), 1usize..=cols))
        .prop_flat_map(|(cols, rows)| {
            prop::collection::vec(prop::collection::vec(small_rational(), cols), rows)
                .prop_map(move |m| RationalMatrix::from_rows(m, cols).unwrap())
        })
}

fn point() -> impl Strategy<Value = RealPoint> {
    prop::array::uniform8(-2.0f64..2.0).prop_map(RealPoint::from_array)
}

fn convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    (0..a.len())
        .map(|k| (0..=k).map(|j| &a[j] * &b[k - j]).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_of_product_is_convolution(f in expandable(), g in expandable()) {
        let order = 8;
        let fg = f.mul(&g).unwrap();
        let lhs = fg.series_expand(order).unwrap();
        let rhs = convolve(&f.series_expand(order).unwrap(), &g.series_expand(order).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_reconstructs_numerator(f in expandable()) {
        // den * series == num up to the truncation order
        let order = 6;
        let s = Poly::new(f.series_expand(order).unwrap());
        let prod = f.denominator() * &s;
        for k in 0..=order {
            prop_assert_eq!(prod.coeff(k), f.numerator().coeff(k));
        }
    }

    #[test]
    fn inverse_substitution_is_an_involution(f in expandable(), t in 1i64..=5) {
        let g = f.substitute_inverse();
        prop_assert_eq!(g.substitute_inverse(), f.clone());
        let t = rat(t, 3);
        if let (Ok(a), Ok(b)) = (g.eval(&t), f.eval(&(Rational::one() / &t))) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix()) {
        let basis = m.kernel();
        prop_assert_eq!(basis.len(), m.cols() - m.rank());
        for v in &basis {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn feasible_patterns_are_certified_and_closed_under_negation(m in matrix()) {
        let found = feasible_patterns_of(&m, 20).unwrap();
        let set: Vec<&SignPattern> = found.iter().map(|p| &p.signs).collect();
        for p in &found {
            prop_assert!(m.mul_vec(&p.certificate).unwrap().iter().all(Zero::is_zero));
            for (s, v) in p.signs.0.iter().zip(&p.certificate) {
                prop_assert!((&s.as_rational() * v) >= Rational::one());
            }
            prop_assert!(set.contains(&&p.signs.negated()));
        }
        for s in sampling_oracle(&m, 200, 1) {
            prop_assert!(set.contains(&&s));
        }
    }

    #[test]
    fn feasibility_ignores_positive_column_scaling(
        m in matrix(),
        scales in prop::collection::vec(1i64..=5, 5),
        bits in 0u64..32,
    ) {
        let sigma = SignPattern::from_bits(bits, m.cols());
        let mut scaled = m.clone();
        for (j, c) in scales.iter().take(m.cols()).enumerate() {
            scaled.scale_column(j, &int(*c));
        }
        prop_assert_eq!(pattern_feasible(&m, &sigma), pattern_feasible(&scaled, &sigma));
    }

    #[test]
    fn feasibility_ignores_row_operations(m in matrix(), c in small_rational(), bits in 0u64..32) {
        let sigma = SignPattern::from_bits(bits, m.cols());
        let mut rows = m.to_rows();
        let first = rows[0].clone();
        rows.push(first.iter().map(|x| x * &c).collect());
        if rows.len() > 2 {
            let last = rows.len() - 2;
            for (a, b) in rows[last].iter_mut().zip(&first) {
                *a += b * &c;
            }
        }
        let changed = RationalMatrix::from_rows(rows, m.cols()).unwrap();
        prop_assert_eq!(pattern_feasible(&m, &sigma), pattern_feasible(&changed, &sigma));
    }

    #[test]
    fn defining_map_is_group_invariant(p in point(), r in 1u32..=5, k in 0i64..7, pick in 0usize..4) {
        let weights = valid_weights(r);
        let a = weights[pick % weights.len()];
        let (f1, f2) = F_eval(r, &p);
        let (g1, g2) = F_eval(r, &mu_action(r, a, k, &p));
        let scale = 1.0 + f1.abs().max(f2.abs());
        prop_assert!((f1 - g1).abs() < 1e-12 * scale * 100.0);
        prop_assert!((f2 - g2).abs() < 1e-12 * scale * 100.0);
    }

    #[test]
    fn projection_is_orbit_constant(p in point(), r in 2u32..=5, k in 1i64..5) {
        // the z3 image of pi only sees the orbit
        let a = valid_weights(r)[0];
        let base = pi_projection(r, &p);
        let moved = pi_projection(r, &mu_action(r, a, k, &p));
        prop_assert!((base.x[2] - moved.x[2]).abs() < 1e-9);
        prop_assert!((base.y[2] - moved.y[2]).abs() < 1e-9);
    }

    #[test]
    fn gw_invariants_are_inverse_cubes(r in 1u32..=6, d in 1u32..=24) {
        let a = valid_weights(r)[0];
        let model = validate_model(r, a, Side::S).unwrap();
        let n = gw_invariant(&model, d).unwrap();
        if d % r == 0 {
            let m = (d / r) as i64;
            prop_assert_eq!(&n, &rat(1, m * m * m));
        } else {
            prop_assert!(n.is_zero());
        }
        prop_assert!(!n.is_negative());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn synthetic_flops_are_isomorphic(seed in any::<u64>(), r in 2u32..=4) {
        let a = valid_weights(r)[0];
        let x = chart_ring(&[(r, a)], seed).unwrap();
        let (y, corr) = flop_ring(&x);
        let report = verify_ruan_isomorphism(&x, &y, &corr).unwrap();
        prop_assert!(report.success, "{:?}", report.mismatches);
    }
}
