//! A small exact-rational simplex solver.
//!
//! The feasibility systems this crate solves are tiny (at most a few dozen
//! variables) but their verdicts are structural — "does a strictly positive
//! solution exist" — where floating-point pivoting could misclassify a
//! boundary case. Everything here runs over arbitrary-precision rationals
//! with Bland's anti-cycling rule, so the answer is exact and deterministic.

use num_traits::{One, Signed, Zero};

use crate::exact::Rat;

/// Outcome of [`minimize`].
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// The constraints admit no solution.
    Infeasible,
    /// The objective decreases without bound.
    Unbounded,
    /// An optimal vertex, with the objective value attained there.
    Optimal { x: Vec<Rat>, value: Rat },
}

/// Minimizes c·x subject to Ax = b, x ≥ 0, by the two-phase primal simplex
/// method with Bland's rule. `a` is row-major with every row the same
/// length as `c`; `b` must have one entry per row.
///
/// Rows of zeros (with matching zero right-hand side) and redundant rows
/// are tolerated: phase one leaves their artificials basic at zero and the
/// corresponding rows are simply carried along.
pub fn minimize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "one right-hand side per row");
    for row in a {
        assert_eq!(row.len(), n, "ragged constraint matrix");
    }

    // Tableau layout: columns 0..n are structural, n..n+m artificial, last
    // column is the right-hand side. Rows are constraints; basis[r] is the
    // column currently basic in row r.
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (r, row) in a.iter().enumerate() {
        let mut t: Vec<Rat> = Vec::with_capacity(n + m + 1);
        let flip = b[r].is_negative();
        for v in row {
            t.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            t.push(if k == r { Rat::one() } else { Rat::zero() });
        }
        t.push(if flip { -b[r].clone() } else { b[r].clone() });
        tab.push(t);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase one: minimize the sum of artificials.
    let phase_one: Vec<Rat> = (0..n + m)
        .map(|k| if k < n { Rat::zero() } else { Rat::one() })
        .collect();
    if solve_phase(&mut tab, &mut basis, &phase_one, n + m).is_none() {
        unreachable!("phase one is bounded below by zero");
    }
    let artificial_mass: Rat = basis
        .iter()
        .enumerate()
        .filter(|&(_, &col)| col >= n)
        .map(|(r, _)| tab[r][n + m].clone())
        .sum();
    if !artificial_mass.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Pivot any artificial still basic (at zero) out to a structural
    // column when possible; rows with no eligible pivot are redundant and
    // stay parked on their artificial at level zero.
    for r in 0..m {
        if basis[r] >= n {
            if let Some(col) = (0..n).find(|&col| !tab[r][col].is_zero()) {
                pivot(&mut tab, &mut basis, r, col);
            }
        }
    }

    // Phase two: the real objective, artificial columns barred.
    match solve_phase(&mut tab, &mut basis, c, n) {
        None => LpOutcome::Unbounded,
        Some(()) => {
            let mut x = vec![Rat::zero(); n];
            for (r, &col) in basis.iter().enumerate() {
                if col < n {
                    x[col] = tab[r][n + m].clone();
                }
            }
            let value = x
                .iter()
                .zip(c)
                .map(|(xi, ci)| xi * ci)
                .fold(Rat::zero(), |acc, v| acc + v);
            LpOutcome::Optimal { x, value }
        }
    }
}

/// Runs Bland-rule pivots until no reduced cost is negative (Some) or a
/// column proves the objective unbounded (None). Columns at `limit` and
/// beyond are never entered.
fn solve_phase(tab: &mut [Vec<Rat>], basis: &mut [usize], c: &[Rat], limit: usize) -> Option<()> {
    let rhs = tab.first().map_or(0, |row| row.len() - 1);
    loop {
        // reduced costs via the basic-cost multipliers: c_j − c_B·B⁻¹A_j,
        // computed straight off the current tableau
        let mut entering = None;
        for col in 0..limit {
            if basis.contains(&col) {
                continue;
            }
            let mut reduced = c.get(col).cloned().unwrap_or_else(Rat::zero);
            for (r, row) in tab.iter().enumerate() {
                let cb = c.get(basis[r]).cloned().unwrap_or_else(Rat::zero);
                if !cb.is_zero() && !row[col].is_zero() {
                    reduced -= cb * &row[col];
                }
            }
            if reduced.is_negative() {
                entering = Some(col);
                break; // Bland: smallest-index entering column
            }
        }
        let col = match entering {
            None => return Some(()),
            Some(col) => col,
        };
        // ratio test, ties broken by smallest basic index (Bland again)
        let mut leaving: Option<(usize, Rat)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[col].is_positive() {
                let ratio = &row[rhs] / &row[col];
                let better = match &leaving {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
        }
        match leaving {
            None => return None,
            Some((r, _)) => pivot(tab, basis, r, col),
        }
    }
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], r: usize, col: usize) {
    let inv = {
        let p = tab[r][col].clone();
        assert!(!p.is_zero(), "pivot on a zero entry");
        p
    };
    for v in &mut tab[r] {
        *v /= &inv;
    }
    let pivot_row = tab[r].clone();
    for (rr, row) in tab.iter_mut().enumerate() {
        if rr == r || row[col].is_zero() {
            continue;
        }
        let factor = row[col].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            *v -= &factor * pv;
        }
    }
    basis[r] = col;
}
