//! Synthetic compact ring data glued from local orbi-conifold charts.
//!
//! For charts `(r_u, a_u)`, `u = 1..kappa`, the basis is
//!
//! ```text
//! 1            degree 0
//! H{u}, E      degree 2   (H{u} pairs to 1 with ray G{u}; E is supported away from all rays)
//! F{u}, FE     degree 4   (duals of H{u}, E)
//! P            degree 6   (point class, dual of 1)
//! p{u}_k, q{u}_k          twisted sectors of the two orbifold points of chart u
//! ```
//!
//! The pairing is `<1,P> = <H{u},F{u}> = <E,FE> = 1` and `<p{u}_i, p{u}_{r-i}> = 1/r_u`.
//! Classical constants are `Psi(1, a, b) = <a, b>` plus seeded integer values on
//! degree-2 triples.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::global::{
    BasisEntry, ClassicalEntry, GlobalRingData, GlobalRingWire, Ray, RayPairingEntry, TwistedTag,
};
use crate::algebra::{Rational, RationalMatrix};
use crate::error::Result;
use crate::local::validate_model;
use crate::local::Side;

/// Builds the X-side ring for the given charts.
pub fn chart_ring(charts: &[(u32, u32)], seed: u64) -> Result<GlobalRingData> {
    for &(r, a) in charts {
        validate_model(r, a, Side::S)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = vec![BasisEntry::untwisted("1", 0)];
    for u in 1..=charts.len() {
        basis.push(BasisEntry::untwisted(format!("H{u}"), 2));
    }
    basis.push(BasisEntry {
        support: Some(Vec::new()),
        ..BasisEntry::untwisted("E", 2)
    });
    for u in 1..=charts.len() {
        basis.push(BasisEntry::untwisted(format!("F{u}"), 4));
    }
    basis.push(BasisEntry::untwisted("FE", 4));
    basis.push(BasisEntry::untwisted("P", 6));
    for (u, &(r, _)) in charts.iter().enumerate() {
        let u = u + 1;
        for pt in ["p", "q"] {
            for k in 1..r {
                basis.push(BasisEntry {
                    label: format!("{pt}{u}_{k}"),
                    degree: Rational::one() + Rational::new(k.into(), r.into()),
                    twisted: Some(TwistedTag {
                        point: format!("{pt}{u}"),
                        k,
                        order: r,
                    }),
                    support: Some(vec![format!("G{u}")]),
                });
            }
        }
    }

    let n = basis.len();
    let pos = |l: &str| basis.iter().position(|b| b.label == l).expect("label present");
    let mut pairing = RationalMatrix::zeros(n, n);
    let set_sym = |m: &mut RationalMatrix, i: usize, j: usize, v: Rational| {
        m.set(i, j, v.clone());
        m.set(j, i, v);
    };
    set_sym(&mut pairing, pos("1"), pos("P"), Rational::one());
    set_sym(&mut pairing, pos("E"), pos("FE"), Rational::one());
    for (u, &(r, _)) in charts.iter().enumerate() {
        let u = u + 1;
        set_sym(&mut pairing, pos(&format!("H{u}")), pos(&format!("F{u}")), Rational::one());
        for pt in ["p", "q"] {
            for k in 1..r {
                let i = pos(&format!("{pt}{u}_{k}"));
                let j = pos(&format!("{pt}{u}_{}", r - k));
                set_sym(&mut pairing, i, j, Rational::new(1.into(), r.into()));
            }
        }
    }

    let mut classical = Vec::new();
    let unit = pos("1");
    for i in 0..n {
        for j in i..n {
            let v = pairing.get(i, j);
            if !v.is_zero() {
                classical.push(ClassicalEntry {
                    labels: [basis[unit].label.clone(), basis[i].label.clone(), basis[j].label.clone()],
                    value: v.clone(),
                });
            }
        }
    }
    let deg2: Vec<usize> = (0..n).filter(|&i| basis[i].is_degree_two()).collect();
    for (a, &i) in deg2.iter().enumerate() {
        for (b, &j) in deg2.iter().enumerate().skip(a) {
            for &k in deg2.iter().skip(b) {
                let v: i64 = rng.gen_range(-3..=3);
                if v != 0 {
                    classical.push(ClassicalEntry {
                        labels: [i, j, k].map(|c| basis[c].label.clone()),
                        value: Rational::from_integer(v.into()),
                    });
                }
            }
        }
    }

    let rays = charts
        .iter()
        .enumerate()
        .map(|(u, &(r, _))| Ray {
            id: format!("G{}", u + 1),
            multiplicity: r,
        })
        .collect();
    let ray_pairings = (1..=charts.len())
        .map(|u| RayPairingEntry {
            label: format!("H{u}"),
            ray: format!("G{u}"),
            value: Rational::one(),
        })
        .collect();

    GlobalRingData::from_wire(GlobalRingWire {
        basis,
        pairing,
        classical,
        rays,
        ray_pairings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flop::ruan::{flop_ring, ruan_structure_constants, verify_ruan_isomorphism};

    #[test]
    fn one_chart_shape() {
        let x = chart_ring(&[(3, 1)], 7).unwrap();
        // 1, H1, E, F1, FE, P, p1_1, p1_2, q1_1, q1_2
        assert_eq!(x.dim(), 10);
        assert!(ruan_structure_constants(&x).is_ok());
    }

    #[test]
    fn flop_pair_is_isomorphic() {
        let x = chart_ring(&[(2, 1), (3, 2)], 11).unwrap();
        let (y, corr) = flop_ring(&x);
        let rep = verify_ruan_isomorphism(&x, &y, &corr).unwrap();
        assert!(rep.success, "{:?}", rep.mismatches.first());
    }

    #[test]
    fn invalid_chart_rejected() {
        assert!(chart_ring(&[(4, 2)], 0).is_err());
    }
}
