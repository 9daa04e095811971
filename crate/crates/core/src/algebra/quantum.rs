//! Rational functions in a single Novikov variable.
//!
//! A [`QuantumRational`] is `num(t) / den(t)` with rational coefficients, kept in a
//! canonical form so that equality of values is equality of representations:
//!
//! * numerator and denominator share no common factor,
//! * the lowest-order nonzero coefficient of the denominator is `1`,
//! * constants (including zero) carry no variable.
//!
//! Values in distinct variables never combine; mixing them is an error.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Identifier of a Novikov variable, one per extremal ray.
pub type RayId = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantumRational {
    var: Option<RayId>,
    num: Poly,
    den: Poly,
}

impl QuantumRational {
    /// Builds `num / den` in `var` and reduces it.
    pub fn new(var: impl Into<RayId>, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(Some(var.into()), num, den))
    }

    pub fn constant(c: Rational) -> Self {
        QuantumRational {
            var: None,
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// The variable itself.
    pub fn variable(var: impl Into<RayId>) -> Self {
        Self::canonical(
            Some(var.into()),
            Poly::monomial(Rational::one(), 1),
            Poly::one(),
        )
    }

    /// `t^k / (1 - t^k)`, the summed multiple-cover series in exponent steps of `k`.
    pub fn geometric(var: impl Into<RayId>, k: usize) -> Self {
        assert!(k >= 1, "geometric series needs a positive exponent step");
        let num = Poly::monomial(Rational::one(), k);
        let den = &Poly::one() - &Poly::monomial(Rational::one(), k);
        Self::canonical(Some(var.into()), num, den)
    }

    fn canonical(var: Option<RayId>, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let lowest = den.lowest().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lowest.is_one() {
            let inv = Rational::one() / lowest;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        let var = if num.is_constant() && den.is_constant() {
            None
        } else {
            var
        };
        QuantumRational { var, num, den }
    }

    pub fn var(&self) -> Option<&str> {
        self.var.as_deref()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.var.is_none()
    }

    /// The value when the function does not depend on its variable.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    fn joint_var(&self, rhs: &Self) -> Result<Option<RayId>> {
        match (&self.var, &rhs.var) {
            (Some(a), Some(b)) if a != b => Err(Error::VariableMismatch(a.clone(), b.clone())),
            (Some(a), _) | (None, Some(a)) => Ok(Some(a.clone())),
            (None, None) => Ok(None),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let var = self.joint_var(rhs)?;
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Ok(Self::canonical(var, num, &self.den * &rhs.den))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let var = self.joint_var(rhs)?;
        Ok(Self::canonical(var, &self.num * &rhs.num, &self.den * &rhs.den))
    }

    pub fn neg(&self) -> Self {
        QuantumRational {
            var: self.var.clone(),
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::canonical(self.var.clone(), self.num.scale(c), self.den.clone())
    }

    /// `f(1/t)`, reduced. An involution on canonical forms.
    pub fn substitute_inverse(&self) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        let n = self.num.degree().unwrap_or(0);
        let m = self.den.degree().unwrap_or(0);
        // f(1/t) = t^(m-n) * rev(num) / rev(den)
        let (num, den) = if m >= n {
            (self.num.reversed().shift(m - n), self.den.reversed())
        } else {
            (self.num.reversed(), self.den.reversed().shift(n - m))
        };
        Self::canonical(self.var.clone(), num, den)
    }

    /// Same function, new variable name.
    pub fn renamed(&self, var: impl Into<RayId>) -> Self {
        let mut out = self.clone();
        if out.var.is_some() {
            out.var = Some(var.into());
        }
        out
    }

    /// Coefficients of `t^0 ..= t^order` of the expansion at `t = 0`.
    pub fn series_expand(&self, order: usize) -> Result<Vec<Rational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::NotExpandable);
        }
        let inv_d0 = Rational::one() / &d0;
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut c = self.num.coeff(k);
            for j in 1..=k.min(self.den.coeffs().len().saturating_sub(1)) {
                c -= self.den.coeff(j) * &out[k - j];
            }
            out.push(c * &inv_d0);
        }
        Ok(out)
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(t) / d)
    }

    /// Human-readable form using `name` for the variable.
    pub fn display_with(&self, name: &str) -> String {
        let num = poly_to_string(&self.num, name);
        if self.den.is_one_poly() {
            return num;
        }
        let den = poly_to_string(&self.den, name);
        let wrap = |s: String, p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(num, &self.num), wrap(den, &self.den))
    }
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

fn poly_to_string(p: &Poly, name: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&format_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{} {mono}", format_rational(&abs)));
        }
    }
    out
}

impl fmt::Display for QuantumRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(self.var.as_deref().unwrap_or("t")))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    var: Option<RayId>,
    #[serde(with = "super::rational::serde_vec")]
    num: Vec<Rational>,
    #[serde(with = "super::rational::serde_vec")]
    den: Vec<Rational>,
}

impl Serialize for QuantumRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            var: self.var.clone(),
            num: self.num.coeffs().to_vec(),
            den: self.den.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuantumRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let den = Poly::new(w.den);
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Self::canonical(w.var, Poly::new(w.num), den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    fn qr(num: &[i64], den: &[i64]) -> QuantumRational {
        QuantumRational::new("t", poly(num), poly(den)).unwrap()
    }

    #[test]
    fn sum_collapses_to_geometric() {
        // t/(1-t) + 1 = 1/(1-t)
        let lhs = QuantumRational::geometric("t", 1);
        let sum = lhs.add(&QuantumRational::constant(int(1))).unwrap();
        assert_eq!(sum, qr(&[1], &[1, -1]));
    }

    #[test]
    fn annihilator() {
        let f = qr(&[3, 1], &[1, 0, -5]);
        let z = f.mul(&QuantumRational::zero()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z, QuantumRational::zero());
    }

    #[test]
    fn reduced_sum_of_two_geometric_series() {
        // t/(1-t) + t^2/(1-t^2) = (t + 2t^2)/(1 - t^2)
        let a = QuantumRational::geometric("t", 1);
        let b = QuantumRational::geometric("t", 2);
        let s = a.add(&b).unwrap();
        assert_eq!(s, qr(&[0, 1, 2], &[1, 0, -1]));
        // series check to order 10: coefficient of t^k is 1 + [k even]
        let series = s.series_expand(10).unwrap();
        for (k, c) in series.iter().enumerate() {
            let expect = if k == 0 { 0 } else if k % 2 == 0 { 2 } else { 1 };
            assert_eq!(*c, int(expect), "k = {k}");
        }
    }

    #[test]
    fn inverse_substitution_examples() {
        let g = QuantumRational::geometric("t", 1);
        assert_eq!(g.substitute_inverse(), qr(&[-1], &[1, -1]));
        let c = QuantumRational::constant(rat(5, 3));
        assert_eq!(c.substitute_inverse(), c);
        let total = g.add(&g.substitute_inverse()).unwrap();
        assert_eq!(total, QuantumRational::constant(int(-1)));
        assert!(total.var().is_none());
    }

    #[test]
    fn inverse_of_raw_variable_moves_pole_to_zero() {
        let t = QuantumRational::variable("t");
        let inv = t.substitute_inverse();
        assert_eq!(inv, qr(&[1], &[0, 1]));
        assert_eq!(inv.series_expand(3), Err(Error::NotExpandable));
        assert_eq!(inv.substitute_inverse(), t);
    }

    #[test]
    fn series_examples() {
        let s = QuantumRational::geometric("t", 2).series_expand(6).unwrap();
        assert_eq!(s, [0, 0, 1, 0, 1, 0, 1].map(int).to_vec());
        assert_eq!(
            QuantumRational::zero().series_expand(3).unwrap(),
            vec![int(0); 4]
        );
        assert_eq!(qr(&[1], &[1, -1]).series_expand(4).unwrap(), vec![int(1); 5]);
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let a = QuantumRational::variable("t");
        let b = QuantumRational::variable("s");
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch(..))));
        assert!(a.add(&QuantumRational::constant(int(2))).is_ok());
    }

    #[test]
    fn json_shape() {
        let g = QuantumRational::geometric("G1", 2).scale(&int(8));
        let js = serde_json::to_value(&g).unwrap();
        assert_eq!(
            js,
            serde_json::json!({"var": "G1", "num": ["0", "0", "8"], "den": ["1", "0", "-1"]})
        );
        let back: QuantumRational = serde_json::from_value(js).unwrap();
        assert_eq!(back, g);
        assert_eq!(g.to_string(), "8 G1^2/(1 - G1^2)");
    }
}
