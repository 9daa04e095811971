//! Exact phase-one simplex: finds `w >= 0` with `A w = b`, or proves none exists.

use num_traits::{One, Signed, Zero};

use crate::algebra::{Rational, RationalMatrix};

/// A basic feasible solution of `A w = b, w >= 0`, or `None` when the system is
/// infeasible. Pivoting follows Bland's rule, so the method terminates.
pub fn feasible_point(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "right-hand side length must match row count");
    // columns 0..n are the original variables, n..n+m the artificials, n+m the rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = vec![Rational::zero(); width];
            for (j, x) in row.iter_mut().take(n).enumerate() {
                *x = if flip { -a.get(i, j) } else { a.get(i, j).clone() };
            }
            row[n + i] = Rational::one();
            row[n + m] = b[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // objective in reduced form: minimise the sum of artificials
    let mut cost = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[n + m] -= &row[n + m];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][n + m] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot
        let (p, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, p, enter);
        basis[p] = enter;
    }

    if !cost[n + m].is_zero() {
        return None;
    }
    let mut w = vec![Rational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            w[j] = t[i][n + m].clone();
        }
    }
    Some(w)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], p: usize, q: usize) {
    let inv = t[p][q].recip();
    for v in t[p].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = t[p].clone();
    let eliminate = |row: &mut [Rational]| {
        let f = row[q].clone();
        if f.is_zero() {
            return;
        }
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    };
    for (i, row) in t.iter_mut().enumerate() {
        if i != p {
            eliminate(row);
        }
    }
    eliminate(cost);
}
