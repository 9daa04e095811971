//! Flop invariance of the local three-point functions: `Psi^{W^s}(phi b) = Psi^{W^sf}(b)`
//! once `q^[Gamma^s]` is identified with `q^{-[Gamma^sf]}`.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{format_rational, QuantumRational, Rational};
use crate::error::Result;
use crate::local::{
    cr_basis, quantum_three_point, validate_model, BasisLabel, CRClass, LocalModel, Side,
};

/// `phi` on a local class: labels carry over, so coefficients are unchanged.
pub fn phi_local(model_sf: &LocalModel, class: &CRClass) -> (LocalModel, CRClass) {
    let target = validate_model(model_sf.r(), model_sf.a(), Side::S)
        .expect("flopping keeps (r, a) valid");
    (target, class.clone())
}

/// Difference of the classical parts on the untwisted triple `t`, from the local
/// flop formula: `prod alpha_i(r Gamma^s)` for three `H` insertions, zero otherwise.
fn untwisted_classical_difference(model_s: &LocalModel, t: &[BasisLabel; 3]) -> Rational {
    if t.iter().all(|l| *l == BasisLabel::H) {
        let ray = Rational::from_integer(model_s.r().into()) * model_s.h_on_ray();
        &ray * &ray * &ray
    } else {
        Rational::zero()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlopDifference {
    /// `W^sf`-side input classes.
    pub inputs: [String; 3],
    #[serde(serialize_with = "ser_rational")]
    pub classical_difference: Rational,
    pub quantum_difference: QuantumRational,
    pub total: QuantumRational,
    pub pass: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// `Psi^{W^s}(phi b1, phi b2, phi b3) - Psi^{W^sf}(b1, b2, b3)` with the `W^sf` variable
/// rewritten as the inverse of the `W^s` one.
pub fn flop_difference(model_sf: &LocalModel, classes: [&CRClass; 3]) -> Result<FlopDifference> {
    let (model_s, _) = phi_local(model_sf, classes[0]);
    let alpha: Vec<CRClass> = classes.iter().map(|c| phi_local(model_sf, c).1).collect();
    let theirs = quantum_three_point(model_sf, classes)?;
    let ours = quantum_three_point(&model_s, [&alpha[0], &alpha[1], &alpha[2]])?;

    let mut classical = &ours.classical.exact - &theirs.classical.exact;
    // phi keeps coefficients, so the symbolic terms pair up one-to-one
    for (t, c) in &ours.classical.symbolic {
        debug_assert_eq!(theirs.classical.symbolic.get(t), Some(c));
        classical += c * untwisted_classical_difference(&model_s, t);
    }

    let transported = theirs
        .quantum
        .substitute_inverse()
        .renamed(model_s.ray_variable());
    let quantum = ours.quantum.sub(&transported)?;
    let total = quantum.add(&QuantumRational::constant(classical.clone()))?;
    Ok(FlopDifference {
        inputs: classes.map(|c| c.to_string()),
        classical_difference: classical,
        quantum_difference: quantum,
        pass: total.is_zero(),
        total,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalFlopReport {
    pub r: u32,
    pub a: u32,
    pub triples: Vec<FlopDifference>,
    pub all_pass: bool,
}

/// Runs [`flop_difference`] over every ordered triple of basis classes.
pub fn local_flop_check(r: u32, a: u32) -> Result<LocalFlopReport> {
    let model_sf = validate_model(r, a, Side::Sf)?;
    let basis: Vec<CRClass> = cr_basis(&model_sf)
        .into_iter()
        .map(|(l, _)| CRClass::basis(&model_sf, l))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let idx: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| [i, j, k])))
        .collect();
    let triples: Vec<FlopDifference> = idx
        .par_iter()
        .map(|t| flop_difference(&model_sf, [&basis[t[0]], &basis[t[1]], &basis[t[2]]]))
        .collect::<Result<_>>()?;
    let all_pass = triples.iter().all(|d| d.pass);
    Ok(LocalFlopReport {
        r,
        a,
        triples,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::local::TwistedSector;

    #[test]
    fn degree_two_triple_r2() {
        let m = validate_model(2, 1, Side::Sf).unwrap();
        let h = CRClass::basis(&m, BasisLabel::H).unwrap();
        let d = flop_difference(&m, [&h, &h, &h]).unwrap();
        assert_eq!(d.classical_difference, int(8));
        assert_eq!(d.quantum_difference, QuantumRational::constant(int(-8)));
        assert!(d.pass);
    }

    #[test]
    fn twisted_and_unit_triples() {
        let m = validate_model(3, 2, Side::Sf).unwrap();
        let p1 = CRClass::basis(&m, BasisLabel::Twisted(TwistedSector::p(1))).unwrap();
        let one = CRClass::basis(&m, BasisLabel::Unit).unwrap();
        let h = CRClass::basis(&m, BasisLabel::H).unwrap();
        let d = flop_difference(&m, [&p1, &h, &h]).unwrap();
        assert!(d.pass && d.quantum_difference.is_zero());
        let d = flop_difference(&m, [&one, &one, &one]).unwrap();
        assert!(d.pass && d.classical_difference.is_zero());
    }

    #[test]
    fn mixed_classes() {
        let m = validate_model(3, 1, Side::Sf).unwrap();
        let b = CRClass::parse(&m, "2*H + p_1 - 1").unwrap();
        let c = CRClass::parse(&m, "1/2*H + p_2").unwrap();
        assert!(flop_difference(&m, [&b, &c, &b]).unwrap().pass);
    }

    #[test]
    fn whole_basis_small_r() {
        for r in 1..=3 {
            for a in crate::local::valid_weights(r) {
                let rep = local_flop_check(r, a).unwrap();
                assert!(rep.all_pass, "r = {r}, a = {a}");
            }
        }
    }
}
