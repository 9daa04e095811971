//! Ruan three-point functions, structure constants, and the flop isomorphism check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::correspondence::{pairing_compatible, FlopCorrespondence, ResolvedCorrespondence};
use super::global::{permutations, sort3, GlobalRingData};
use crate::algebra::{format_rational, QuantumRational, Rational, RayId};
use crate::error::{Error, Result};

/// A classical constant plus one rational function per extremal ray.
///
/// Different rays carry independent Novikov variables and are never multiplied
/// together, so a value is a sum `c + sum_u f_u(t_u)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuanValue {
    pub classical: Rational,
    pub quantum: BTreeMap<RayId, QuantumRational>,
}

impl RuanValue {
    pub fn constant(c: Rational) -> Self {
        RuanValue {
            classical: c,
            quantum: BTreeMap::new(),
        }
    }

    pub fn add_assign(&mut self, rhs: &RuanValue) {
        self.classical += &rhs.classical;
        for (ray, f) in &rhs.quantum {
            self.add_quantum(ray, f);
        }
    }

    fn add_quantum(&mut self, ray: &RayId, f: &QuantumRational) {
        if f.is_zero() {
            return;
        }
        if let Some(c) = f.as_constant() {
            self.classical += c;
            return;
        }
        let sum = match self.quantum.get(ray) {
            Some(g) => g.add(f).expect("per-ray values share their variable"),
            None => f.clone(),
        };
        match sum.as_constant() {
            Some(c) => {
                self.classical += c;
                self.quantum.remove(ray);
            }
            None => {
                self.quantum.insert(ray.clone(), sum);
            }
        }
    }

    pub fn scaled(&self, s: &Rational) -> RuanValue {
        if s.is_zero() {
            return RuanValue::default();
        }
        RuanValue {
            classical: &self.classical * s,
            quantum: self
                .quantum
                .iter()
                .map(|(k, v)| (k.clone(), v.scale(s)))
                .collect(),
        }
    }

    pub fn neg(&self) -> RuanValue {
        RuanValue {
            classical: -&self.classical,
            quantum: self.quantum.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    /// Exact equality of values: every per-ray difference is constant and the
    /// constants cancel.
    pub fn value_eq(&self, rhs: &RuanValue) -> bool {
        let mut d = self.clone();
        d.add_assign(&rhs.neg());
        d.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.classical.is_zero() && self.quantum.is_empty()
    }

    /// Splits `f_u(0)` out of every expandable `f_u`, giving a unique representative
    /// whenever no per-ray function has a pole at the origin.
    pub fn normalized(&self) -> RuanValue {
        let mut out = RuanValue::constant(self.classical.clone());
        for (ray, f) in &self.quantum {
            match f.series_expand(0) {
                Ok(c0) => {
                    let c0 = c0.into_iter().next().unwrap_or_else(Rational::zero);
                    out.classical += &c0;
                    let rest = f.sub(&QuantumRational::constant(c0)).expect("same variable");
                    out.add_quantum(ray, &rest);
                }
                Err(_) => out.add_quantum(ray, f),
            }
        }
        out
    }

    /// Applies the flop coordinate change: each ray variable `t` becomes `1/t` and is
    /// renamed through `rename`.
    pub fn flop_transport(&self, rename: &HashMap<RayId, RayId>) -> Result<RuanValue> {
        let mut out = RuanValue::constant(self.classical.clone());
        for (ray, f) in &self.quantum {
            let target = rename.get(ray).ok_or_else(|| {
                Error::InvalidCorrespondence(format!("ray `{ray}` is not covered"))
            })?;
            out.add_quantum(target, &f.substitute_inverse().renamed(target.clone()));
        }
        Ok(out)
    }

    /// Evaluation at rational values of the Novikov variables.
    pub fn evaluate(&self, point: &BTreeMap<RayId, Rational>) -> Result<Rational> {
        let mut acc = self.classical.clone();
        for (ray, f) in &self.quantum {
            let t = point
                .get(ray)
                .ok_or_else(|| Error::Config(format!("no evaluation value for ray `{ray}`")))?;
            acc += f.eval(t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RuanValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![format_rational(&self.classical)];
        for (ray, q) in &self.quantum {
            parts.push(format!("[{}]", q.display_with(ray)));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for RuanValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            classical: String,
            quantum: &'a BTreeMap<RayId, QuantumRational>,
        }
        Wire {
            classical: format_rational(&self.classical),
            quantum: &self.quantum,
        }
        .serialize(s)
    }
}

fn check_len(ring: &GlobalRingData, v: &[Rational]) -> Result<()> {
    if v.len() != ring.dim() {
        return Err(Error::Dimension(format!(
            "class vector of length {} for a basis of {}",
            v.len(),
            ring.dim()
        )));
    }
    Ok(())
}

/// `Psi_qc(b1, b2, b3) = Psi_CR + sum_u b1(r_u G_u) b2(r_u G_u) b3(r_u G_u) t_u^r_u / (1 - t_u^r_u)`.
pub fn ruan_three_point(ring: &GlobalRingData, b: [&[Rational]; 3]) -> Result<RuanValue> {
    for v in b {
        check_len(ring, v)?;
    }
    let mut classical = Rational::zero();
    for (t, val) in ring.classical_entries() {
        for [i, j, k] in permutations(*t) {
            if b[0][i].is_zero() || b[1][j].is_zero() || b[2][k].is_zero() {
                continue;
            }
            classical += &b[0][i] * &b[1][j] * &b[2][k] * val;
        }
    }
    let mut out = RuanValue::constant(classical);
    for u in 0..ring.rays().len() {
        let amp: Rational = b.iter().map(|v| ring.pair_with_ray(v, u)).product();
        let corr = ring.ray_correction(&amp, u);
        out.add_quantum(&ring.rays()[u].id, &corr);
    }
    Ok(out)
}

/// Basis-index form of [`ruan_three_point`].
pub fn basis_three_point(ring: &GlobalRingData, t: [usize; 3]) -> RuanValue {
    let mut out = RuanValue::constant(ring.classical(t));
    for u in 0..ring.rays().len() {
        let m = Rational::from_integer(ring.rays()[u].multiplicity.into());
        let amp: Rational = t.iter().map(|&i| ring.ray_pairing(i, u) * &m).product();
        out.add_quantum(&ring.rays()[u].id, &ring.ray_correction(&amp, u));
    }
    out
}

/// Structure constants `b_i *_r b_j = sum_l C[i][j][l] b_l` of the Ruan product.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    n: usize,
    table: Vec<RuanValue>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> &RuanValue {
        &self.table[(i * self.n + j) * self.n + l]
    }

    /// Row of `b_i * b_j` in the basis.
    pub fn product(&self, i: usize, j: usize) -> &[RuanValue] {
        let start = (i * self.n + j) * self.n;
        &self.table[start..start + self.n]
    }
}

/// Solves `<b_i * b_j, b_k> = Psi_qc(b_i, b_j, b_k)` against the pairing.
pub fn ruan_structure_constants(ring: &GlobalRingData) -> Result<StructureConstants> {
    let n = ring.dim();
    let ginv = ring
        .pairing()
        .inverse()
        .map_err(|_| Error::Singular("pairing matrix is degenerate".into()))?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let rows: Vec<((usize, usize), Vec<RuanValue>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let psi: Vec<RuanValue> = (0..n).map(|k| basis_three_point(ring, [i, j, k])).collect();
            let row = (0..n)
                .map(|l| {
                    let mut acc = RuanValue::default();
                    for (k, p) in psi.iter().enumerate() {
                        let g = ginv.get(k, l);
                        if g.is_zero() || p.is_zero() {
                            continue;
                        }
                        acc.add_assign(&p.scaled(g));
                    }
                    acc
                })
                .collect();
            ((i, j), row)
        })
        .collect();
    let mut table = vec![RuanValue::default(); n * n * n];
    for ((i, j), row) in rows {
        for (l, v) in row.into_iter().enumerate() {
            table[(i * n + j) * n + l] = v.clone();
            table[(j * n + i) * n + l] = v;
        }
    }
    Ok(StructureConstants { n, table })
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub kind: &'static str,
    /// Y-side labels.
    pub labels: Vec<String>,
    pub x_value: RuanValue,
    pub y_value: RuanValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsomorphismReport {
    pub pairing_compatible: bool,
    pub three_point_checked: usize,
    pub structure_constants_checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub success: bool,
}

/// Compares every three-point function and structure constant of Y with the X-side
/// value after `phi` on classes and `t_u -> 1/t_u` on Novikov variables.
pub fn verify_ruan_isomorphism(
    x: &GlobalRingData,
    y: &GlobalRingData,
    corr: &FlopCorrespondence,
) -> Result<IsomorphismReport> {
    let res = corr.resolve(x, y)?;
    let pairing_ok = pairing_compatible(x, y, &res);
    let n = y.dim();
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (i..n).flat_map(move |j| (j..n).map(move |k| [i, j, k])))
        .collect();
    let three_point: Vec<Option<Mismatch>> = triples
        .par_iter()
        .map(|&t| compare_three_point(x, y, &res, t))
        .collect::<Result<_>>()?;
    let mut mismatches: Vec<Mismatch> = three_point.into_iter().flatten().collect();

    let mut sc_checked = 0;
    if pairing_ok {
        let cx = ruan_structure_constants(x)?;
        let cy = ruan_structure_constants(y)?;
        for i in 0..n {
            for j in i..n {
                for l in 0..n {
                    sc_checked += 1;
                    let vy = cy.get(i, j, l);
                    let vx = cx
                        .get(res.y_to_x[i], res.y_to_x[j], res.y_to_x[l])
                        .flop_transport(&res.ray_x_to_y_ids)?;
                    if !vx.value_eq(vy) {
                        mismatches.push(Mismatch {
                            kind: "structure_constant",
                            labels: [i, j, l].iter().map(|&a| y.label(a).to_string()).collect(),
                            x_value: vx,
                            y_value: vy.clone(),
                        });
                    }
                }
            }
        }
    }
    let success = pairing_ok && mismatches.is_empty();
    Ok(IsomorphismReport {
        pairing_compatible: pairing_ok,
        three_point_checked: triples.len(),
        structure_constants_checked: sc_checked,
        mismatches,
        success,
    })
}

fn compare_three_point(
    x: &GlobalRingData,
    y: &GlobalRingData,
    res: &ResolvedCorrespondence,
    t: [usize; 3],
) -> Result<Option<Mismatch>> {
    let vy = basis_three_point(y, t);
    let vx = basis_three_point(x, t.map(|j| res.y_to_x[j])).flop_transport(&res.ray_x_to_y_ids)?;
    Ok((!vx.value_eq(&vy)).then(|| Mismatch {
        kind: "three_point",
        labels: t.iter().map(|&a| y.label(a).to_string()).collect(),
        x_value: vx,
        y_value: vy,
    }))
}

fn toggle_ray_id(id: &str) -> RayId {
    match id.strip_suffix("_f") {
        Some(base) => base.to_string(),
        None => format!("{id}_f"),
    }
}

/// The ring data of the flopped orbifold Y built from X, and the correspondence
/// `Y -> X` (identity on labels).
///
/// Classes keep their labels; ray pairings change sign; each classical constant of
/// three degree-2 classes drops by `sum_u prod_i b_i(r_u Gamma_u)`. Ray ids toggle a
/// `_f` suffix, so applying the map twice returns the original data.
pub fn flop_ring(x: &GlobalRingData) -> (GlobalRingData, FlopCorrespondence) {
    let mut y = x.clone();
    let n = x.dim();
    let deg2: Vec<usize> = (0..n).filter(|&i| x.basis()[i].is_degree_two()).collect();
    for (a, &i) in deg2.iter().enumerate() {
        for (b, &j) in deg2.iter().enumerate().skip(a) {
            for &k in deg2.iter().skip(b) {
                let mut shift = Rational::zero();
                for u in 0..x.rays().len() {
                    let m = Rational::from_integer(x.rays()[u].multiplicity.into());
                    shift += [i, j, k]
                        .iter()
                        .map(|&c| x.ray_pairing(c, u) * &m)
                        .product::<Rational>();
                }
                if !shift.is_zero() {
                    let t = sort3([i, j, k]);
                    y.set_classical(t, x.classical(t) - shift);
                }
            }
        }
    }
    for row in y.ray_pairings_mut() {
        for v in row.iter_mut() {
            *v = -&*v;
        }
    }
    for ray in y.rays_mut() {
        ray.id = toggle_ray_id(&ray.id);
    }
    // keep the support declarations in step with the renamed rays
    let wire = {
        let mut w = y.to_wire();
        for b in &mut w.basis {
            if let Some(s) = &mut b.support {
                for id in s.iter_mut() {
                    *id = toggle_ray_id(id);
                }
            }
        }
        w
    };
    let y = GlobalRingData::from_wire(wire).expect("flop preserves validity");
    let corr = FlopCorrespondence {
        class_map: (0..n).map(|i| (y.label(i).to_string(), x.label(i).to_string())).collect(),
        ray_map: y
            .rays()
            .iter()
            .zip(x.rays())
            .map(|(ry, rx)| (ry.id.clone(), rx.id.clone()))
            .collect(),
    };
    (y, corr)
}

#[derive(Clone, Debug, Serialize)]
pub struct AssociativityReport {
    #[serde(serialize_with = "ser_point")]
    pub point: BTreeMap<RayId, Rational>,
    pub checked: usize,
    pub failures: Vec<[String; 3]>,
}

fn ser_point<S: serde::Serializer>(
    p: &BTreeMap<RayId, Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<&RayId, String> = p.iter().map(|(k, v)| (k, format_rational(v))).collect();
    m.serialize(s)
}

/// `(a * b) * c = a * (b * c)` over basis triples, with the Novikov variables
/// specialised to `point`. Informational only.
pub fn associativity_report(
    ring: &GlobalRingData,
    point: &BTreeMap<RayId, Rational>,
) -> Result<AssociativityReport> {
    let sc = ruan_structure_constants(ring)?;
    let n = sc.dim();
    let mut c = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                c[(i * n + j) * n + l] = sc.get(i, j, l).evaluate(point)?;
            }
        }
    }
    let at = |i: usize, j: usize, l: usize| &c[(i * n + j) * n + l];
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                checked += 1;
                let ok = (0..n).all(|l| {
                    let lhs: Rational = (0..n)
                        .filter(|&m| !at(i, j, m).is_zero())
                        .map(|m| at(i, j, m) * at(m, k, l))
                        .sum();
                    let rhs: Rational = (0..n)
                        .filter(|&m| !at(j, k, m).is_zero())
                        .map(|m| at(j, k, m) * at(i, m, l))
                        .sum();
                    lhs == rhs
                });
                if !ok {
                    failures.push([i, j, k].map(|a| ring.label(a).to_string()));
                }
            }
        }
    }
    Ok(AssociativityReport {
        point: point.clone(),
        checked,
        failures,
    })
}
