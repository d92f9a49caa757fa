//! Exact linear programming over the rationals: a two-phase tableau simplex
//! with Bland's rule, and a basic-solution enumerator used as an oracle.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

/// Outcome of `min c·x` subject to `A x = b`, `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Two-phase simplex with Bland's anti-cycling rule.
pub fn simplex(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let rows = a.len();
    let cols = c.len();
    // make b nonnegative
    let mut a: Vec<Vec<Rational>> = a.to_vec();
    let mut b: Vec<Rational> = b.to_vec();
    for i in 0..rows {
        if b[i].is_negative() {
            b[i] = -&b[i];
            for v in a[i].iter_mut() {
                *v = -&*v;
            }
        }
    }
    // tableau columns: original, artificials, rhs
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // phase one: minimize the sum of artificials
    let mut cost1 = vec![Rational::zero(); width - 1];
    cost1[cols..cols + rows].fill(Rational::one());
    if !run(&mut t, &mut basis, &cost1, width - 1) {
        return LpOutcome::Unbounded;
    }
    let infeas: Rational = basis.iter().zip(&t).filter(|(&j, _)| j >= cols).map(|(_, r)| r[width - 1].clone()).sum();
    if !infeas.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive zero-valued artificials out of the basis where possible
    for r in 0..rows {
        if basis[r] >= cols {
            if let Some(j) = (0..cols).find(|&j| !t[r][j].is_zero()) {
                pivot(&mut t, &mut basis, r, j);
            }
        }
    }
    // phase two on the original columns only
    let mut cost2 = vec![Rational::zero(); width - 1];
    cost2[..cols].clone_from_slice(c);
    for j in cols..cols + rows {
        // forbid artificials from re-entering
        for row in t.iter_mut() {
            row[j] = Rational::zero();
        }
    }
    for (r, &bj) in basis.iter().enumerate() {
        if bj >= cols {
            t[r][bj] = Rational::one();
        }
    }
    if !run(&mut t, &mut basis, &cost2, cols) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &bj) in basis.iter().enumerate() {
        if bj < cols {
            x[bj] = t[r][width - 1].clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { value, x }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[j].is_zero() {
            let f = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = j;
}

/// Simplex iterations for `min cost·x`, entering columns restricted to
/// `< enter_limit`. Returns false when unbounded.
fn run(t: &mut [Vec<Rational>], basis: &mut [usize], cost: &[Rational], enter_limit: usize) -> bool {
    let rhs = t[0].len() - 1;
    loop {
        // reduced cost of column j: cost_j − Σ_r cost_{basis r} t[r][j]
        let entering = (0..enter_limit).filter(|j| !basis.contains(j)).find(|&j| {
            let mut rc = cost[j].clone();
            for (r, &bj) in basis.iter().enumerate() {
                if !t[r][j].is_zero() {
                    rc -= &cost[bj] * &t[r][j];
                }
            }
            rc.is_negative()
        });
        let Some(j) = entering else { return true };
        // ratio test, ties broken by smallest basic index (Bland)
        let mut best: Option<(Rational, usize)> = None;
        for r in 0..t.len() {
            if t[r][j].is_positive() {
                let ratio = &t[r][rhs] / &t[r][j];
                let better = match &best {
                    None => true,
                    Some((q, br)) => ratio < *q || (ratio == *q && basis[r] < basis[*br]),
                };
                if better {
                    best = Some((ratio, r));
                }
            }
        }
        let Some((_, r)) = best else { return false };
        pivot(t, basis, r, j);
    }
}

/// Solve a square system exactly; `None` if singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let pv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &pv;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Minimum of `c·x` over all basic feasible solutions of `A x = b`, `x ≥ 0`
/// (A of full row rank), found by trying every column basis.
pub fn min_over_basic_solutions(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<(Rational, Vec<Rational>)> {
    let rows = a.len();
    let cols = c.len();
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for basis in (0..cols).combinations(rows) {
        let sub: Vec<Vec<Rational>> = a.iter().map(|r| basis.iter().map(|&j| r[j].clone()).collect()).collect();
        let Some(xb) = solve_square(&sub, b) else { continue };
        if xb.iter().any(Signed::is_negative) {
            continue;
        }
        let mut x = vec![Rational::zero(); cols];
        for (&j, v) in basis.iter().zip(xb) {
            x[j] = v;
        }
        let value: Rational = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, x));
        }
    }
    best
}
