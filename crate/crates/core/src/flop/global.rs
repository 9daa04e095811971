//! User-supplied classical data of a compact orbifold and its extremal rays.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, QuantumRational, Rational, RationalMatrix, RayId};
use crate::error::{Error, Result};

/// Twisted-sector tag of a basis label: the `k`-th sector of an order-`order` point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedTag {
    pub point: String,
    pub k: u32,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub degree: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisted: Option<TwistedTag>,
    /// Rays whose neighbourhood the class may meet; `None` means unrestricted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<RayId>>,
}

impl BasisEntry {
    pub fn untwisted(label: impl Into<String>, degree: i64) -> Self {
        BasisEntry {
            label: label.into(),
            degree: Rational::from_integer(degree.into()),
            twisted: None,
            support: None,
        }
    }

    pub fn is_degree_two(&self) -> bool {
        self.twisted.is_none() && self.degree == Rational::from_integer(2.into())
    }

    fn meets(&self, ray: &str) -> bool {
        self.support
            .as_ref()
            .is_none_or(|s| s.iter().any(|r| r == ray))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub id: RayId,
    /// Orbifold order `r` of the chart; corrections appear in exponents divisible by it.
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalEntry {
    pub labels: [String; 3],
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RayPairingEntry {
    pub label: String,
    pub ray: RayId,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub value: Rational,
}

/// JSON document form of [`GlobalRingData`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalRingWire {
    pub basis: Vec<BasisEntry>,
    pub pairing: RationalMatrix,
    #[serde(default)]
    pub classical: Vec<ClassicalEntry>,
    #[serde(default)]
    pub rays: Vec<Ray>,
    #[serde(default)]
    pub ray_pairings: Vec<RayPairingEntry>,
}

/// Validated ring data: basis, pairing, classical three-point constants, and the
/// pairing of each degree-2 class with each extremal ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalRingData {
    basis: Vec<BasisEntry>,
    index: HashMap<String, usize>,
    pairing: RationalMatrix,
    classical: BTreeMap<[usize; 3], Rational>,
    rays: Vec<Ray>,
    /// `ray_pairings[label][ray]`
    ray_pairings: Vec<Vec<Rational>>,
}

pub(crate) fn sort3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// Distinct orderings of a sorted index triple.
pub(crate) fn permutations(t: [usize; 3]) -> Vec<[usize; 3]> {
    let [a, b, c] = t;
    let mut out = vec![
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ];
    out.sort_unstable();
    out.dedup();
    out
}

impl GlobalRingData {
    pub fn from_wire(w: GlobalRingWire) -> Result<Self> {
        let n = w.basis.len();
        let mut index = HashMap::with_capacity(n);
        for (i, b) in w.basis.iter().enumerate() {
            if index.insert(b.label.clone(), i).is_some() {
                return Err(Error::InvalidRing(format!("duplicate basis label `{}`", b.label)));
            }
        }
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::InvalidRing(format!("unknown basis label `{l}`")))
        };

        if w.pairing.rows() != n || w.pairing.cols() != n {
            return Err(Error::InvalidRing(format!(
                "pairing is {}x{}, basis has {n} labels",
                w.pairing.rows(),
                w.pairing.cols()
            )));
        }
        if !w.pairing.is_symmetric() {
            return Err(Error::InvalidRing("pairing matrix is not symmetric".into()));
        }

        for b in &w.basis {
            let Some(t) = &b.twisted else { continue };
            if t.k == 0 || t.k >= t.order {
                return Err(Error::InvalidRing(format!(
                    "`{}`: sector {} out of range for order {}",
                    b.label, t.k, t.order
                )));
            }
            let expect = Rational::one() + Rational::new(t.k.into(), t.order.into());
            if b.degree != expect {
                return Err(Error::InvalidRing(format!(
                    "`{}`: degree {} but the shifting number is {}",
                    b.label,
                    format_rational(&b.degree),
                    format_rational(&expect)
                )));
            }
            let partner = w.basis.iter().any(|o| {
                o.twisted.as_ref().is_some_and(|u| {
                    u.point == t.point && u.order == t.order && u.k == t.order - t.k
                })
            });
            if !partner {
                return Err(Error::InvalidRing(format!(
                    "`{}`: missing complementary sector {} at point `{}`",
                    b.label,
                    t.order - t.k,
                    t.point
                )));
            }
        }

        let mut classical = BTreeMap::new();
        for e in &w.classical {
            let key = sort3([lookup(&e.labels[0])?, lookup(&e.labels[1])?, lookup(&e.labels[2])?]);
            if let Some(prev) = classical.insert(key, e.value.clone()) {
                if prev != e.value {
                    return Err(Error::InvalidRing(format!(
                        "conflicting classical constants for {:?}: {} vs {}",
                        e.labels,
                        format_rational(&prev),
                        format_rational(&e.value)
                    )));
                }
            }
        }
        classical.retain(|_, v: &mut Rational| !v.is_zero());

        let mut ray_index = HashMap::new();
        for (i, r) in w.rays.iter().enumerate() {
            if r.multiplicity == 0 {
                return Err(Error::InvalidRing(format!("ray `{}` has multiplicity 0", r.id)));
            }
            if ray_index.insert(r.id.clone(), i).is_some() {
                return Err(Error::InvalidRing(format!("duplicate ray `{}`", r.id)));
            }
        }
        let mut ray_pairings = vec![vec![Rational::zero(); w.rays.len()]; n];
        for e in &w.ray_pairings {
            let i = lookup(&e.label)?;
            let u = *ray_index
                .get(&e.ray)
                .ok_or_else(|| Error::InvalidRing(format!("unknown ray `{}`", e.ray)))?;
            let entry = &w.basis[i];
            if !e.value.is_zero() {
                if !entry.is_degree_two() {
                    return Err(Error::InvalidRing(format!(
                        "degree bookkeeping: `{}` has degree {} and cannot pair with ray `{}`",
                        entry.label,
                        format_rational(&entry.degree),
                        e.ray
                    )));
                }
                if !entry.meets(&e.ray) {
                    return Err(Error::InvalidRing(format!(
                        "`{}` is supported away from ray `{}` but pairs with it nontrivially",
                        entry.label, e.ray
                    )));
                }
            }
            ray_pairings[i][u] = e.value.clone();
        }

        Ok(GlobalRingData {
            basis: w.basis,
            index,
            pairing: w.pairing,
            classical,
            rays: w.rays,
            ray_pairings,
        })
    }

    pub fn to_wire(&self) -> GlobalRingWire {
        let label = |i: usize| self.basis[i].label.clone();
        GlobalRingWire {
            basis: self.basis.clone(),
            pairing: self.pairing.clone(),
            classical: self
                .classical
                .iter()
                .map(|(t, v)| ClassicalEntry {
                    labels: t.map(label),
                    value: v.clone(),
                })
                .collect(),
            rays: self.rays.clone(),
            ray_pairings: self
                .ray_pairings
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(u, v)| {
                        RayPairingEntry {
                            label: label(i),
                            ray: self.rays[u].id.clone(),
                            value: v.clone(),
                        }
                    })
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: GlobalRingWire =
            serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_wire(w)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisEntry] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn pairing(&self) -> &RationalMatrix {
        &self.pairing
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray_pairing(&self, label: usize, ray: usize) -> &Rational {
        &self.ray_pairings[label][ray]
    }

    /// `Psi_CR(b_i, b_j, b_k)` for basis indices, in any order.
    pub fn classical(&self, t: [usize; 3]) -> Rational {
        self.classical
            .get(&sort3(t))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn classical_entries(&self) -> impl Iterator<Item = (&[usize; 3], &Rational)> {
        self.classical.iter()
    }

    /// Replaces one classical constant (sorted-triple semantics).
    pub fn set_classical(&mut self, t: [usize; 3], value: Rational) {
        let key = sort3(t);
        if value.is_zero() {
            self.classical.remove(&key);
        } else {
            self.classical.insert(key, value);
        }
    }

    /// Degree-2 pairing of a coefficient vector with ray `u`, scaled by the ray's
    /// multiplicity: `b(r_u Gamma_u)`.
    pub fn pair_with_ray(&self, v: &[Rational], u: usize) -> Rational {
        let m = Rational::from_integer(self.rays[u].multiplicity.into());
        let s: Rational = v
            .iter()
            .zip(&self.ray_pairings)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, row)| c * &row[u])
            .sum();
        s * m
    }

    /// Multiple-cover correction `A * t^r / (1 - t^r)` along ray `u`.
    pub fn ray_correction(&self, amplitude: &Rational, u: usize) -> QuantumRational {
        if amplitude.is_zero() {
            return QuantumRational::zero();
        }
        let ray = &self.rays[u];
        QuantumRational::geometric(ray.id.clone(), ray.multiplicity as usize).scale(amplitude)
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    pub(crate) fn rays_mut(&mut self) -> &mut Vec<Ray> {
        &mut self.rays
    }

    pub(crate) fn ray_pairings_mut(&mut self) -> &mut Vec<Vec<Rational>> {
        &mut self.ray_pairings
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn doc() -> serde_json::Value {
        json!({
            "basis": [
                {"label": "1", "degree": "0"},
                {"label": "H", "degree": "2"},
                {"label": "F", "degree": "4"},
                {"label": "P", "degree": "6"},
                {"label": "p_1", "degree": "3/2", "twisted": {"point": "p", "k": 1, "order": 2}}
            ],
            "pairing": [
                [0, 0, 0, 1, 0],
                [0, 0, 1, 0, 0],
                [0, 1, 0, 0, 0],
                [1, 0, 0, 0, 0],
                [0, 0, 0, 0, "1/2"]
            ],
            "classical": [{"labels": ["H", "H", "H"], "value": "2"}],
            "rays": [{"id": "G", "multiplicity": 2}],
            "ray_pairings": [{"label": "H", "ray": "G", "value": 1}]
        })
    }

    #[test]
    fn loads_and_round_trips() {
        let ring = GlobalRingData::from_json(&doc().to_string()).unwrap();
        assert_eq!(ring.dim(), 5);
        assert_eq!(ring.classical([1, 1, 1]), Rational::from_integer(2.into()));
        let again = GlobalRingData::from_wire(ring.to_wire()).unwrap();
        assert_eq!(again, ring);
    }

    #[test]
    fn rejects_asymmetric_pairing() {
        let mut d = doc();
        d["pairing"][0][3] = json!(2);
        let err = GlobalRingData::from_json(&d.to_string()).unwrap_err();
        assert!(err.to_string().contains("symmetric"), "{err}");
    }

    #[test]
    fn rejects_ray_pairing_on_wrong_degree() {
        let mut d = doc();
        d["ray_pairings"] = json!([{"label": "F", "ray": "G", "value": 1}]);
        let err = GlobalRingData::from_json(&d.to_string()).unwrap_err();
        assert!(err.to_string().contains("degree bookkeeping"), "{err}");
    }

    #[test]
    fn rejects_unpaired_twisted_sector() {
        let mut d = doc();
        d["basis"][4] = json!({"label": "p_1", "degree": "4/3", "twisted": {"point": "p", "k": 1, "order": 3}});
        assert!(GlobalRingData::from_json(&d.to_string()).is_err());
    }

    #[test]
    fn rejects_support_violation() {
        let mut d = doc();
        d["basis"][1]["support"] = json!([]);
        let err = GlobalRingData::from_json(&d.to_string()).unwrap_err();
        assert!(err.to_string().contains("supported away"), "{err}");
    }
}
