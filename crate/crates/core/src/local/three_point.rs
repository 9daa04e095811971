//! Quantum-corrected three-point functions of a local chart.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::class::{BasisLabel, CRClass};
use super::model::LocalModel;
use crate::algebra::{format_rational, QuantumRational, Rational};
use crate::error::{Error, Result};

/// An unordered triple of untwisted labels, kept sorted.
pub type LabelTriple = [BasisLabel; 3];

pub fn sorted_triple(mut t: LabelTriple) -> LabelTriple {
    t.sort();
    t
}

/// Classical part of a local three-point function.
///
/// Triples with a twisted insertion have exact values. Triples of untwisted classes
/// are integrals over a non-compact space and stay symbolic: each entry records the
/// coefficient with which `Psi_CR(triple)` enters the result.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassicalPart {
    pub exact: Rational,
    pub symbolic: BTreeMap<LabelTriple, Rational>,
}

impl ClassicalPart {
    pub fn is_exact(&self) -> bool {
        self.symbolic.is_empty()
    }

    pub fn sub(&self, rhs: &ClassicalPart) -> ClassicalPart {
        let mut out = self.clone();
        out.exact -= &rhs.exact;
        for (t, c) in &rhs.symbolic {
            let e = out.symbolic.entry(*t).or_insert_with(Rational::zero);
            *e -= c;
            if e.is_zero() {
                out.symbolic.remove(t);
            }
        }
        out
    }
}

impl fmt::Display for ClassicalPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.exact.is_zero() || self.symbolic.is_empty() {
            parts.push(format_rational(&self.exact));
        }
        for (t, c) in &self.symbolic {
            parts.push(format!(
                "{}*Psi_CR({}, {}, {})",
                format_rational(c),
                t[0],
                t[1],
                t[2]
            ));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for ClassicalPart {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Sym {
            triple: [String; 3],
            coefficient: String,
            status: &'static str,
        }
        #[derive(Serialize)]
        struct Wire {
            exact: String,
            symbolic: Vec<Sym>,
        }
        Wire {
            exact: format_rational(&self.exact),
            symbolic: self
                .symbolic
                .iter()
                .map(|(t, c)| Sym {
                    triple: t.map(|l| l.to_string()),
                    coefficient: format_rational(c),
                    status: "requires global pairing",
                })
                .collect(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreePoint {
    pub classical: ClassicalPart,
    pub quantum: QuantumRational,
}

/// Classical value of a label triple containing a twisted insertion:
/// `Psi(p_i, p_j, 1) = Psi(q_i, q_j, 1) = delta_{i+j,r} / r`, all others zero.
pub fn cr_three_point_twisted(model: &LocalModel, inputs: LabelTriple) -> Result<Rational> {
    if !inputs.iter().any(BasisLabel::is_twisted) {
        return Err(Error::RequiresGlobalData);
    }
    let r = model.r();
    let mut twisted = Vec::new();
    let mut units = 0;
    for l in inputs {
        match l {
            BasisLabel::Twisted(s) => {
                if s.k == 0 || s.k >= r {
                    return Err(Error::SectorOutOfRange { r, k: s.k });
                }
                twisted.push(s);
            }
            BasisLabel::Unit => units += 1,
            _ => {}
        }
    }
    let value = match (twisted.as_slice(), units) {
        ([s, t], 1) if s.point == t.point && s.k + t.k == r => {
            Rational::new(1.into(), r.into())
        }
        _ => Rational::zero(),
    };
    Ok(value)
}

/// `Psi(b1, b2, b3) = Psi_CR + sum_d Psi_(d[Gamma],0,3) q^d`, with the series summed to
/// `A * t^r / (1 - t^r)` where `A = prod b_i(r Gamma)` over the `H` components.
pub fn quantum_three_point(model: &LocalModel, classes: [&CRClass; 3]) -> Result<ThreePoint> {
    let mut classical = ClassicalPart::default();
    let comps: Vec<Vec<(BasisLabel, Rational)>> =
        classes.iter().map(|c| c.components()).collect();
    for (l1, c1) in &comps[0] {
        for (l2, c2) in &comps[1] {
            for (l3, c3) in &comps[2] {
                let coeff = c1 * c2 * c3;
                let triple = [*l1, *l2, *l3];
                if triple.iter().any(BasisLabel::is_twisted) {
                    classical.exact += coeff * cr_three_point_twisted(model, triple)?;
                } else {
                    let e = classical
                        .symbolic
                        .entry(sorted_triple(triple))
                        .or_insert_with(Rational::zero);
                    *e += coeff;
                }
            }
        }
    }
    classical.symbolic.retain(|_, c| !c.is_zero());

    let ray = Rational::from_integer(model.r().into()) * model.h_on_ray();
    let amplitude: Rational = classes.iter().map(|c| &c.c_h * &ray).product();
    let quantum = if amplitude.is_zero() {
        QuantumRational::zero()
    } else {
        QuantumRational::geometric(model.ray_variable(), model.r() as usize).scale(&amplitude)
    };
    Ok(ThreePoint { classical, quantum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, Poly};
    use crate::local::class::TwistedSector;
    use crate::local::gw::gw_invariant;
    use crate::local::model::{validate_model, Side};

    fn p(k: u32) -> BasisLabel {
        BasisLabel::Twisted(TwistedSector::p(k))
    }
    fn q(k: u32) -> BasisLabel {
        BasisLabel::Twisted(TwistedSector::q(k))
    }

    #[test]
    fn twisted_values_r4() {
        let m = validate_model(4, 1, Side::S).unwrap();
        use BasisLabel::*;
        assert_eq!(cr_three_point_twisted(&m, [p(1), p(3), Unit]).unwrap(), rat(1, 4));
        assert_eq!(cr_three_point_twisted(&m, [q(3), Unit, q(1)]).unwrap(), rat(1, 4));
        assert_eq!(cr_three_point_twisted(&m, [p(1), q(3), Unit]).unwrap(), int(0));
        assert_eq!(cr_three_point_twisted(&m, [p(1), p(3), H]).unwrap(), int(0));
        assert_eq!(cr_three_point_twisted(&m, [p(2), p(2), Unit]).unwrap(), rat(1, 4));
        assert!(cr_three_point_twisted(&m, [H, H, Unit]).is_err());
    }

    #[test]
    fn degree_two_triple_r2() {
        let m = validate_model(2, 1, Side::S).unwrap();
        let h = CRClass::basis(&m, BasisLabel::H).unwrap();
        let tp = quantum_three_point(&m, [&h, &h, &h]).unwrap();
        let expect = QuantumRational::new(
            "G_s",
            Poly::monomial(int(8), 2),
            Poly::new(vec![int(1), int(0), int(-1)]),
        )
        .unwrap();
        assert_eq!(tp.quantum, expect);
        assert_eq!(tp.classical.symbolic.len(), 1);
        assert!(tp.classical.exact.is_zero());

        // brute-force multiple-cover sum: sum_m (2m)^3 / m^3 t^(2m)
        let series = tp.quantum.series_expand(50).unwrap();
        for (d, c) in series.iter().enumerate() {
            let expect = if d > 0 {
                let d3 = int((d * d * d) as i64);
                d3 * gw_invariant(&m, d as u32).unwrap()
            } else {
                int(0)
            };
            assert_eq!(*c, expect, "coefficient {d}");
        }
    }

    #[test]
    fn vanishing_corrections() {
        let m = validate_model(3, 1, Side::S).unwrap();
        let h = CRClass::basis(&m, BasisLabel::H).unwrap();
        let one = CRClass::basis(&m, BasisLabel::Unit).unwrap();
        let p1 = CRClass::basis(&m, p(1)).unwrap();
        assert!(quantum_three_point(&m, [&h, &h, &one]).unwrap().quantum.is_zero());
        assert!(quantum_three_point(&m, [&p1, &h, &h]).unwrap().quantum.is_zero());
        let p2 = CRClass::basis(&m, p(2)).unwrap();
        let tp = quantum_three_point(&m, [&p1, &p2, &one]).unwrap();
        assert_eq!(tp.classical.exact, rat(1, 3));
        assert!(tp.classical.is_exact());
    }

    #[test]
    fn flopped_side_flips_amplitude_sign() {
        let m = validate_model(2, 1, Side::Sf).unwrap();
        let h = CRClass::basis(&m, BasisLabel::H).unwrap();
        let tp = quantum_three_point(&m, [&h, &h, &h]).unwrap();
        assert_eq!(tp.quantum.var(), Some("G_sf"));
        assert_eq!(tp.quantum.series_expand(2).unwrap()[2], int(-8));
    }
}
