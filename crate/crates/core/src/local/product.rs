//! Chen-Ruan product of a local chart.

use super::class::{BasisLabel, CRClass};
use super::model::LocalModel;
use crate::error::{Error, Result};

/// Product of two basis labels.
///
/// `H * H` has no meaning on the non-compact chart and is rejected; all other
/// products follow the twisted-sector rules, with `Theta` killing anything of
/// positive degree.
pub fn basis_product(model: &LocalModel, x: BasisLabel, y: BasisLabel) -> Result<CRClass> {
    use BasisLabel::*;
    let r = model.r();
    match (x, y) {
        (Unit, other) | (other, Unit) => CRClass::basis(model, other),
        (H, H) => Err(Error::RequiresGlobalData),
        (Twisted(s), Twisted(t)) => {
            if s.point == t.point && s.k + t.k == r {
                let theta = match s.point {
                    super::class::Point::P => ThetaP,
                    super::class::Point::Q => ThetaQ,
                };
                CRClass::basis(model, theta)
            } else {
                Ok(CRClass::zero(model))
            }
        }
        _ => Ok(CRClass::zero(model)),
    }
}

/// Bilinear extension of [`basis_product`].
pub fn cr_product(model: &LocalModel, x: &CRClass, y: &CRClass) -> Result<CRClass> {
    let mut out = CRClass::zero(model);
    for (lx, cx) in x.components() {
        for (ly, cy) in y.components() {
            let p = basis_product(model, lx, ly)?;
            if p.is_zero() {
                continue;
            }
            out = out.add(&p.scale(&(&cx * &cy)));
        }
    }
    Ok(out)
}

/// The full basis product table; `None` marks the rejected `H * H` entry.
pub fn product_table(model: &LocalModel) -> Vec<(BasisLabel, BasisLabel, Option<CRClass>)> {
    let basis = super::class::cr_basis(model);
    let mut out = Vec::with_capacity(basis.len() * basis.len());
    for (x, _) in &basis {
        for (y, _) in &basis {
            out.push((*x, *y, basis_product(model, *x, *y).ok()));
        }
    }
    out
}
