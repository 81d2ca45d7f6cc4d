//! Exact dense-tableau simplex over rationals with Bland's rule.
//!
//! Solves `maximize c·x subject to A x ≤ b, x ≥ 0`. Negative right-hand
//! sides go through an auxiliary phase with one artificial variable.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Q};

/// One constraint `coeffs · x ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rhs: Q) -> Self {
        Constraint { coeffs, rhs }
    }

    pub fn holds_at(&self, x: &[Q]) -> bool {
        dot(&self.coeffs, x) <= self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Q,
    pub witness: Vec<Q>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    /// reduced costs, last entry is minus the objective value
    z: Vec<Q>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.z.len() - 1
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = Q::one() / &self.rows[r][col];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !self.z[col].is_zero() {
            let f = self.z[col].clone();
            for (x, p) in self.z.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Runs to optimality; `Err(Unbounded)` if some improving column has no
    /// limiting row.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        loop {
            // Bland: lowest-index improving column, then lowest-index basic
            // variable among tied ratios
            let Some(col) = (0..allowed).find(|&j| self.z[j].is_positive()) else {
                return Ok(());
            };
            let rhs = self.width();
            let mut best: Option<(Q, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[rhs] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((br, bb, _)) => ratio < *br || (ratio == *br && self.basis[i] < *bb),
                    };
                    if better {
                        best = Some((ratio, self.basis[i], i));
                    }
                }
            }
            match best {
                Some((_, _, r)) => self.pivot(r, col),
                None => return Err(Error::Unbounded),
            }
        }
    }
}

/// Maximizes `objective · x` over `{x ≥ 0 : constraints}`.
pub fn lp_maximize(objective: &[Q], constraints: &[Constraint]) -> Result<LpSolution> {
    let n = objective.len();
    let m = constraints.len();
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.coeffs.len(),
            });
        }
    }
    // columns: x_0..x_{n-1}, slacks s_0..s_{m-1}, artificial a, rhs
    let aux = n + m;
    let width = n + m + 1;
    let rows: Vec<Vec<Q>> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut row = vec![Q::zero(); width + 1];
            row[..n].clone_from_slice(&c.coeffs);
            row[n + i] = Q::one();
            row[aux] = -Q::one();
            row[width] = c.rhs.clone();
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        z: vec![Q::zero(); width + 1],
        basis: (n..n + m).collect(),
        pivots: 0,
    };

    let most_negative = (0..m)
        .filter(|&i| constraints[i].rhs.is_negative())
        .min_by(|&a, &b| constraints[a].rhs.cmp(&constraints[b].rhs));
    if let Some(r) = most_negative {
        // phase one: maximize -a
        t.z[aux] = -Q::one();
        t.pivot(r, aux);
        t.optimize(width)?;
        if !t.z[width].is_zero() {
            return Err(Error::Infeasible);
        }
        if let Some(r) = t.basis.iter().position(|&b| b == aux) {
            // degenerate: a = 0 but still basic; swap in any usable column
            match (0..aux).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    // the row is identically zero apart from a; drop it
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        }
    }
    for row in t.rows.iter_mut() {
        row[aux] = Q::zero();
    }
    // phase two objective in terms of the current basis
    let mut z = vec![Q::zero(); width + 1];
    z[..n].clone_from_slice(objective);
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n && !objective[b].is_zero() {
            let f = objective[b].clone();
            for (x, p) in z.iter_mut().zip(&t.rows[i]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    t.z = z;
    t.optimize(aux)?;

    let mut witness = vec![Q::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            witness[b] = t.rows[i][width].clone();
        }
    }
    let value = dot(objective, &witness);
    debug_assert_eq!(value, -t.z[width].clone());
    Ok(LpSolution {
        value,
        witness,
        pivots: t.pivots,
    })
}
