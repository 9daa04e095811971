//! Genus-zero orbifold Gromov-Witten data of a local chart.

use num_traits::Zero;

use super::class::{degree_shifting, CRClass, TwistedSector};
use super::model::LocalModel;
use crate::algebra::Rational;
use crate::error::{Error, Result};

fn check_degree(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::NonPositiveDegree(0));
    }
    Ok(())
}

/// Virtual dimension `k - sum(iota)` of maps in class `d[Gamma]` with `k` orbifold
/// marked points; the Calabi-Yau condition removes the `c_1` and `n - 3` terms.
pub fn virtual_dimension(
    model: &LocalModel,
    d: u32,
    sectors: &[TwistedSector],
) -> Result<Rational> {
    check_degree(d)?;
    let mut dim = Rational::from_integer((sectors.len() as i64).into());
    for s in sectors {
        dim -= degree_shifting(model.r(), s.k)?;
    }
    Ok(dim)
}

/// The moduli of stable maps in class `d[Gamma]` is nonempty exactly when `r | d`.
pub fn moduli_nonempty(model: &LocalModel, d: u32) -> Result<bool> {
    check_degree(d)?;
    Ok(d.is_multiple_of(model.r()))
}

/// Degree-`d` invariant with no insertions: `1/m^3` for `d = m r`, zero otherwise.
pub fn gw_invariant(model: &LocalModel, d: u32) -> Result<Rational> {
    if !moduli_nonempty(model, d)? {
        return Ok(Rational::zero());
    }
    let m = (d / model.r()) as i64;
    Ok(Rational::new(1.into(), (m * m * m).into()))
}

/// Invariants with at least one orbifold insertion vanish: negative virtual dimension.
pub fn gw_twisted(model: &LocalModel, d: u32, sectors: &[TwistedSector]) -> Result<Rational> {
    if sectors.is_empty() {
        return Err(Error::InvalidModel(
            "gw_twisted needs at least one orbifold insertion".into(),
        ));
    }
    let dim = virtual_dimension(model, d, sectors)?;
    debug_assert!(dim < Rational::zero());
    Ok(Rational::zero())
}

/// Degree-`d` three-point invariant `Psi_(d[Gamma],0,3)(b1, b2, b3)`.
///
/// Only `H` insertions survive (divisor equation); twisted and unit insertions kill
/// the positive-degree contribution.
pub fn gw_three_point(model: &LocalModel, d: u32, classes: [&CRClass; 3]) -> Result<Rational> {
    let base = gw_invariant(model, d)?;
    if base.is_zero() {
        return Ok(base);
    }
    let deg = Rational::from_integer(d.into()) * model.h_on_ray();
    let mut out = base;
    for c in classes {
        out *= &c.c_h * &deg;
    }
    Ok(out)
}

/// `Psi(m r) / Psi(r)`, exposed for the multiple-cover ratio check.
pub fn multiple_cover_ratio(model: &LocalModel, m: u32) -> Result<Rational> {
    Ok(gw_invariant(model, m * model.r())? / gw_invariant(model, model.r())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::local::model::{validate_model, Side};

    #[test]
    fn invariants() {
        let m2 = validate_model(2, 1, Side::S).unwrap();
        assert_eq!(gw_invariant(&m2, 2).unwrap(), int(1));
        assert_eq!(gw_invariant(&m2, 4).unwrap(), rat(1, 8));
        let m3 = validate_model(3, 1, Side::S).unwrap();
        assert_eq!(gw_invariant(&m3, 4).unwrap(), int(0));
        assert!(gw_invariant(&m3, 0).is_err());
        assert_eq!(multiple_cover_ratio(&m3, 5).unwrap(), rat(1, 125));
    }

    #[test]
    fn moduli() {
        let m2 = validate_model(2, 1, Side::S).unwrap();
        assert!(!moduli_nonempty(&m2, 3).unwrap());
        assert!(moduli_nonempty(&m2, 4).unwrap());
        assert!(moduli_nonempty(&validate_model(1, 0, Side::S).unwrap(), 1).unwrap());
    }

    #[test]
    fn virtual_dimensions() {
        let m2 = validate_model(2, 1, Side::S).unwrap();
        // 1 - 3/2
        assert_eq!(virtual_dimension(&m2, 1, &[TwistedSector::p(1)]).unwrap(), rat(-1, 2));
        assert_eq!(virtual_dimension(&m2, 1, &[]).unwrap(), int(0));
        let m3 = validate_model(3, 1, Side::S).unwrap();
        // 2 - 2 * 4/3
        let two = [TwistedSector::p(1), TwistedSector::p(1)];
        assert_eq!(virtual_dimension(&m3, 1, &two).unwrap(), rat(-2, 3));
        // nodal bookkeeping: the trivial twist has shift 2
        assert_eq!(virtual_dimension(&m3, 1, &[TwistedSector::q(3)]).unwrap(), int(-1));
        assert!(virtual_dimension(&m3, 1, &[TwistedSector::q(4)]).is_err());
    }

    #[test]
    fn twisted_vanish() {
        let m = validate_model(2, 1, Side::S).unwrap();
        assert_eq!(gw_twisted(&m, 2, &[TwistedSector::p(1)]).unwrap(), int(0));
        let m3 = validate_model(3, 2, Side::S).unwrap();
        let s = [TwistedSector::p(1), TwistedSector::q(2)];
        assert_eq!(gw_twisted(&m3, 3, &s).unwrap(), int(0));
        let m5 = validate_model(5, 2, Side::Sf).unwrap();
        assert_eq!(gw_twisted(&m5, 10, &[TwistedSector::p(4)]).unwrap(), int(0));
        assert!(gw_twisted(&m5, 10, &[]).is_err());
    }
}
