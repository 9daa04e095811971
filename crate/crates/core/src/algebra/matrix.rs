//! Dense exact matrices: fraction-free elimination, kernels, inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct MatrixWire(#[serde(with = "super::rational::serde_mat")] Vec<Vec<Rational>>);

impl TryFrom<MatrixWire> for RationalMatrix {
    type Error = Error;
    fn try_from(w: MatrixWire) -> Result<Self> {
        let cols = w.0.first().map_or(0, Vec::len);
        RationalMatrix::from_rows(w.0, cols)
    }
}

impl From<RationalMatrix> for MatrixWire {
    fn from(m: RationalMatrix) -> Self {
        MatrixWire(m.to_rows())
    }
}

impl RationalMatrix {
    /// Row-major construction; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(RationalMatrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(rows, cols).expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Multiplies column `j` by `c`.
    pub fn scale_column(&mut self, j: usize, c: &Rational) {
        for i in 0..self.rows {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    /// Integer rows (each cleared of denominators) in fraction-free echelon form,
    /// plus the pivot column of each nonzero row.
    fn bareiss_echelon(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter()
                    .map(|q| q.numer() * (&l / q.denom()))
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss step must divide exactly");
                    a[i][j] = q;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.bareiss_echelon().1.len()
    }

    /// Exact null-space basis; empty iff the kernel is trivial.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (a, pivots) = self.bareiss_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &pc) in pivots.iter().enumerate().rev() {
                    let s: Rational = (pc + 1..self.cols)
                        .filter(|&j| !a[i][j].is_zero() && !v[j].is_zero())
                        .map(|j| Rational::from_integer(a[i][j].clone()) * &v[j])
                        .sum();
                    v[pc] = -s / Rational::from_integer(a[i][pc].clone());
                }
                v
            })
            .collect()
    }

    /// Gauss-Jordan inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or_else(|| Error::Singular(format!("no pivot in column {c}")))?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = Rational::one() / &a[c][c];
            for j in 0..n {
                a[c][j] *= &piv;
                inv[c][j] *= &piv;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..n {
                    let (ac, ic) = (a[c][j].clone(), inv[c][j].clone());
                    a[i][j] -= &f * ac;
                    inv[i][j] -= &f * ic;
                }
            }
        }
        Self::from_rows(inv, n)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn kernel_examples() {
        assert!(RationalMatrix::identity(2).kernel().is_empty());
        let k = RationalMatrix::from_i64(&[&[1, 1]]).kernel();
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
        assert_eq!(RationalMatrix::zeros(1, 3).kernel().len(), 3);
    }

    #[test]
    fn kernel_with_fractions_and_skipped_pivot() {
        let m = RationalMatrix::from_rows(
            vec![
                vec![int(0), rat(1, 2), int(1), int(0)],
                vec![int(0), int(1), int(2), rat(1, 3)],
                vec![int(0), int(0), int(0), int(1)],
            ],
            4,
        )
        .unwrap();
        let k = m.kernel();
        assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_of_pairing_shape() {
        let g = RationalMatrix::from_rows(
            vec![
                vec![int(0), int(0), int(1)],
                vec![int(0), rat(1, 3), int(0)],
                vec![int(1), int(0), int(0)],
            ],
            3,
        )
        .unwrap();
        let inv = g.inverse().unwrap();
        assert_eq!(inv.get(1, 1), &int(3));
        assert_eq!(inv.get(0, 2), &int(1));
        assert!(RationalMatrix::zeros(2, 2).inverse().is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(RationalMatrix::from_rows(vec![vec![int(1)], vec![]], 1).is_err());
    }
}
