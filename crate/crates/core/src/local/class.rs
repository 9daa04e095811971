//! Twisted sectors, basis labels, and Chen-Ruan classes of a local chart.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::model::LocalModel;
use crate::algebra::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// One of the two orbifold points on the exceptional curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedSector {
    pub point: Point,
    pub k: u32,
}

impl TwistedSector {
    pub fn p(k: u32) -> Self {
        TwistedSector { point: Point::P, k }
    }

    pub fn q(k: u32) -> Self {
        TwistedSector { point: Point::Q, k }
    }
}

/// Degree shifting number of the k-th twisted sector, `1 + k/r`.
///
/// `k = r` is accepted for the trivial twist that appears when complementary
/// orbifold points pair up at a node; its shift is `2`.
pub fn degree_shifting(r: u32, k: u32) -> Result<Rational> {
    if k == 0 || k > r {
        return Err(Error::SectorOutOfRange { r, k });
    }
    Ok(Rational::one() + Rational::new(k.into(), r.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    Unit,
    H,
    ThetaP,
    ThetaQ,
    Twisted(TwistedSector),
}

impl BasisLabel {
    pub fn is_twisted(&self) -> bool {
        matches!(self, BasisLabel::Twisted(_))
    }

    pub fn degree(&self, r: u32) -> Rational {
        match self {
            BasisLabel::Unit => Rational::zero(),
            BasisLabel::H => Rational::from_integer(2.into()),
            BasisLabel::ThetaP | BasisLabel::ThetaQ => Rational::from_integer(6.into()),
            BasisLabel::Twisted(s) => {
                Rational::one() + Rational::new(s.k.into(), r.into())
            }
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Unit => f.write_str("1"),
            BasisLabel::H => f.write_str("H"),
            BasisLabel::ThetaP => f.write_str("Tp"),
            BasisLabel::ThetaQ => f.write_str("Tq"),
            BasisLabel::Twisted(TwistedSector { point: Point::P, k }) => write!(f, "p_{k}"),
            BasisLabel::Twisted(TwistedSector { point: Point::Q, k }) => write!(f, "q_{k}"),
        }
    }
}

impl FromStr for BasisLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown basis label `{s}`"));
        match s {
            "1" => Ok(BasisLabel::Unit),
            "H" => Ok(BasisLabel::H),
            "Tp" => Ok(BasisLabel::ThetaP),
            "Tq" => Ok(BasisLabel::ThetaQ),
            _ => {
                let (pt, k) = s.split_once('_').ok_or_else(bad)?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                match pt {
                    "p" => Ok(BasisLabel::Twisted(TwistedSector::p(k))),
                    "q" => Ok(BasisLabel::Twisted(TwistedSector::q(k))),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BasisLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Ordered Chen-Ruan basis `1, H, Tp, Tq, p_1..p_{r-1}, q_1..q_{r-1}` with degrees.
pub fn cr_basis(model: &LocalModel) -> Vec<(BasisLabel, Rational)> {
    let r = model.r();
    let mut labels = vec![
        BasisLabel::Unit,
        BasisLabel::H,
        BasisLabel::ThetaP,
        BasisLabel::ThetaQ,
    ];
    labels.extend((1..r).map(|k| BasisLabel::Twisted(TwistedSector::p(k))));
    labels.extend((1..r).map(|k| BasisLabel::Twisted(TwistedSector::q(k))));
    labels.into_iter().map(|l| (l, l.degree(r))).collect()
}

/// Exponents `(b, r - b, k)` of `Theta_p^b Theta_y^(r-b) Theta_z^k`, with `b = a k mod r`.
pub fn twisting_factor(model: &LocalModel, sector: TwistedSector) -> Result<(u32, u32, u32)> {
    let r = model.r();
    if sector.k == 0 || sector.k >= r {
        return Err(Error::SectorOutOfRange { r, k: sector.k });
    }
    let b = (model.a() as u64 * sector.k as u64 % r as u64) as u32;
    Ok((b, r - b, sector.k))
}

/// An element of `H*_CR` of a local chart in the basis of [`cr_basis`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CRClass {
    r: u32,
    pub c_unit: Rational,
    pub c_h: Rational,
    pub c_theta_p: Rational,
    pub c_theta_q: Rational,
    /// `c_p[k - 1]` is the coefficient of `p_k`.
    pub c_p: Vec<Rational>,
    pub c_q: Vec<Rational>,
}

impl CRClass {
    pub fn zero(model: &LocalModel) -> Self {
        let n = (model.r() - 1) as usize;
        CRClass {
            r: model.r(),
            c_unit: Rational::zero(),
            c_h: Rational::zero(),
            c_theta_p: Rational::zero(),
            c_theta_q: Rational::zero(),
            c_p: vec![Rational::zero(); n],
            c_q: vec![Rational::zero(); n],
        }
    }

    pub fn basis(model: &LocalModel, label: BasisLabel) -> Result<Self> {
        let mut c = Self::zero(model);
        *c.slot_mut(label)? = Rational::one();
        Ok(c)
    }

    pub fn scaled_basis(model: &LocalModel, label: BasisLabel, coeff: Rational) -> Result<Self> {
        let mut c = Self::zero(model);
        *c.slot_mut(label)? = coeff;
        Ok(c)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    fn slot_mut(&mut self, label: BasisLabel) -> Result<&mut Rational> {
        let r = self.r;
        Ok(match label {
            BasisLabel::Unit => &mut self.c_unit,
            BasisLabel::H => &mut self.c_h,
            BasisLabel::ThetaP => &mut self.c_theta_p,
            BasisLabel::ThetaQ => &mut self.c_theta_q,
            BasisLabel::Twisted(s) => {
                if s.k == 0 || s.k >= r {
                    return Err(Error::SectorOutOfRange { r, k: s.k });
                }
                match s.point {
                    Point::P => &mut self.c_p[(s.k - 1) as usize],
                    Point::Q => &mut self.c_q[(s.k - 1) as usize],
                }
            }
        })
    }

    pub fn coeff(&self, label: BasisLabel) -> Rational {
        match label {
            BasisLabel::Unit => self.c_unit.clone(),
            BasisLabel::H => self.c_h.clone(),
            BasisLabel::ThetaP => self.c_theta_p.clone(),
            BasisLabel::ThetaQ => self.c_theta_q.clone(),
            BasisLabel::Twisted(s) => {
                let v = match s.point {
                    Point::P => &self.c_p,
                    Point::Q => &self.c_q,
                };
                s.k.checked_sub(1)
                    .and_then(|i| v.get(i as usize))
                    .cloned()
                    .unwrap_or_else(Rational::zero)
            }
        }
    }

    pub fn add_term(&mut self, label: BasisLabel, coeff: &Rational) -> Result<()> {
        *self.slot_mut(label)? += coeff;
        Ok(())
    }

    /// Nonzero `(label, coefficient)` pairs in basis order.
    pub fn components(&self) -> Vec<(BasisLabel, Rational)> {
        let mut out = Vec::new();
        let mut push = |l: BasisLabel, c: &Rational| {
            if !c.is_zero() {
                out.push((l, c.clone()));
            }
        };
        push(BasisLabel::Unit, &self.c_unit);
        push(BasisLabel::H, &self.c_h);
        push(BasisLabel::ThetaP, &self.c_theta_p);
        push(BasisLabel::ThetaQ, &self.c_theta_q);
        for (i, c) in self.c_p.iter().enumerate() {
            push(BasisLabel::Twisted(TwistedSector::p(i as u32 + 1)), c);
        }
        for (i, c) in self.c_q.iter().enumerate() {
            push(BasisLabel::Twisted(TwistedSector::q(i as u32 + 1)), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.components().is_empty()
    }

    pub fn add(&self, rhs: &CRClass) -> CRClass {
        let mut out = self.clone();
        for (l, c) in rhs.components() {
            out.add_term(l, &c).expect("labels of a class of the same chart");
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> CRClass {
        let mut out = self.clone();
        for v in [
            &mut out.c_unit,
            &mut out.c_h,
            &mut out.c_theta_p,
            &mut out.c_theta_q,
        ] {
            *v *= s;
        }
        for v in out.c_p.iter_mut().chain(out.c_q.iter_mut()) {
            *v *= s;
        }
        out
    }

    /// Parses a linear combination such as `2*H - 1/3*p_1 + q_2`.
    pub fn parse(model: &LocalModel, expr: &str) -> Result<Self> {
        let mut out = Self::zero(model);
        let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty class expression".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            let after_slash = i > 0 && compact.as_bytes()[i - 1] == b'/';
            if (ch == '+' || ch == '-') && i > start && !after_slash {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), term.strip_prefix('+').unwrap_or(term)),
            };
            let (coeff, label) = match body.split_once('*') {
                Some((c, l)) => (parse_rational(c)?, l),
                None => (Rational::one(), body),
            };
            out.add_term(label.parse()?, &(sign * coeff))?;
        }
        Ok(out)
    }
}

impl fmt::Display for CRClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.components();
        if comps.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = comps
            .iter()
            .map(|(l, c)| {
                if c.is_one() {
                    l.to_string()
                } else {
                    format!("{}*{l}", format_rational(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
