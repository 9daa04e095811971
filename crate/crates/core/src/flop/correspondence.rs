//! The class correspondence `phi: H*_CR(Y) -> H*_CR(X)` and the ray transform.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::global::GlobalRingData;
use crate::algebra::{Rational, RayId};
use crate::error::{Error, Result};

/// Label bijection Y -> X plus the ray pairing `Gamma^s_u <-> Gamma^sf_u`.
///
/// Curve classes transform with a sign, `Phi[Gamma^s_u] = -[Gamma^sf_u]`, so each
/// Novikov variable is inverted when moving between the two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopCorrespondence {
    /// `(y_label, x_label)` pairs.
    pub class_map: Vec<(String, String)>,
    /// `(y_ray, x_ray)` pairs.
    pub ray_map: Vec<(RayId, RayId)>,
}

/// A correspondence checked against a concrete `(X, Y)` pair, as index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedCorrespondence {
    pub y_to_x: Vec<usize>,
    pub ray_y_to_x: Vec<usize>,
    /// X ray id -> Y ray id, used when transporting X-side values.
    pub ray_x_to_y_ids: HashMap<RayId, RayId>,
}

impl FlopCorrespondence {
    /// Identity on labels and rays.
    pub fn identity(ring: &GlobalRingData) -> Self {
        FlopCorrespondence {
            class_map: ring
                .basis()
                .iter()
                .map(|b| (b.label.clone(), b.label.clone()))
                .collect(),
            ray_map: ring.rays().iter().map(|r| (r.id.clone(), r.id.clone())).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        FlopCorrespondence {
            class_map: self.class_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            ray_map: self.ray_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    pub fn resolve(&self, x: &GlobalRingData, y: &GlobalRingData) -> Result<ResolvedCorrespondence> {
        let n = y.dim();
        if x.dim() != n {
            return Err(Error::InvalidCorrespondence(format!(
                "basis size mismatch: X has {}, Y has {}",
                x.dim(),
                n
            )));
        }
        let mut y_to_x = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for (yl, xl) in &self.class_map {
            let j = y.index_of(yl).ok_or_else(|| Error::MissingLabel(yl.clone()))?;
            let i = x.index_of(xl).ok_or_else(|| Error::MissingLabel(xl.clone()))?;
            if y_to_x[j] != usize::MAX {
                return Err(Error::InvalidCorrespondence(format!("`{yl}` mapped twice")));
            }
            if hit[i] {
                return Err(Error::InvalidCorrespondence(format!("`{xl}` hit twice")));
            }
            let (by, bx) = (&y.basis()[j], &x.basis()[i]);
            if by.degree != bx.degree {
                return Err(Error::InvalidCorrespondence(format!(
                    "`{yl}` -> `{xl}` does not preserve degree"
                )));
            }
            match (&by.twisted, &bx.twisted) {
                (None, None) => {}
                (Some(a), Some(b)) if a.k == b.k && a.order == b.order => {}
                _ => {
                    return Err(Error::InvalidCorrespondence(format!(
                        "`{yl}` -> `{xl}` does not match twisted sectors"
                    )))
                }
            }
            y_to_x[j] = i;
            hit[i] = true;
        }
        if let Some(j) = y_to_x.iter().position(|&i| i == usize::MAX) {
            return Err(Error::MissingLabel(y.label(j).to_string()));
        }

        let ry = y.rays().len();
        if x.rays().len() != ry || self.ray_map.len() != ry {
            return Err(Error::InvalidCorrespondence(format!(
                "ray count mismatch: X has {}, Y has {}, map has {}",
                x.rays().len(),
                ry,
                self.ray_map.len()
            )));
        }
        let mut ray_y_to_x = vec![usize::MAX; ry];
        let mut ray_x_to_y_ids = HashMap::new();
        for (yr, xr) in &self.ray_map {
            let j = y
                .rays()
                .iter()
                .position(|r| &r.id == yr)
                .ok_or_else(|| Error::InvalidCorrespondence(format!("unknown Y ray `{yr}`")))?;
            let i = x
                .rays()
                .iter()
                .position(|r| &r.id == xr)
                .ok_or_else(|| Error::InvalidCorrespondence(format!("unknown X ray `{xr}`")))?;
            if x.rays()[i].multiplicity != y.rays()[j].multiplicity {
                return Err(Error::InvalidCorrespondence(format!(
                    "rays `{yr}` and `{xr}` have different multiplicities"
                )));
            }
            if ray_y_to_x[j] != usize::MAX || ray_x_to_y_ids.insert(xr.clone(), yr.clone()).is_some() {
                return Err(Error::InvalidCorrespondence(format!("ray `{yr}` mapped twice")));
            }
            ray_y_to_x[j] = i;
        }
        Ok(ResolvedCorrespondence {
            y_to_x,
            ray_y_to_x,
            ray_x_to_y_ids,
        })
    }
}

impl ResolvedCorrespondence {
    /// Transports a Y-side coefficient vector to the X basis.
    pub fn phi(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.y_to_x.len() {
            return Err(Error::Dimension(format!(
                "class vector of length {} for a basis of {}",
                v.len(),
                self.y_to_x.len()
            )));
        }
        let mut out = vec![Rational::zero(); v.len()];
        for (j, c) in v.iter().enumerate() {
            out[self.y_to_x[j]] = c.clone();
        }
        Ok(out)
    }
}

/// `phi` on a labelled coefficient vector of Y.
pub fn phi_map(
    corr: &FlopCorrespondence,
    x: &GlobalRingData,
    y: &GlobalRingData,
    v: &[Rational],
) -> Result<Vec<Rational>> {
    corr.resolve(x, y)?.phi(v)
}

/// `int phi(a) phi(b) = int a b` for every pair of Y basis classes.
pub fn check_pairing_compatibility(
    x: &GlobalRingData,
    y: &GlobalRingData,
    corr: &FlopCorrespondence,
) -> bool {
    let Ok(res) = corr.resolve(x, y) else {
        return false;
    };
    pairing_compatible(x, y, &res)
}

pub(crate) fn pairing_compatible(
    x: &GlobalRingData,
    y: &GlobalRingData,
    res: &ResolvedCorrespondence,
) -> bool {
    let n = y.dim();
    (0..n).all(|i| {
        (0..n).all(|j| y.pairing().get(i, j) == x.pairing().get(res.y_to_x[i], res.y_to_x[j]))
    })
}
