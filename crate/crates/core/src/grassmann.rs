//! Quantum products in `QH*(Gr(k, n))` by classical Littlewood-Richardson
//! expansion followed by rim-hook reduction.
//!
//! Each size-`n` border strip removed contributes a factor `q` and the sign
//! `(-1)^{k - r}`, `r` the number of rows the strip occupies. That sign is
//! the one for which every structure constant comes out non-negative and
//! `Gr(1, n)` agrees with the Chevalley engine (see the tests).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::q;
use crate::ring::{ProductTable, QClass};
use crate::rootsys::{Family, RootSystem};
use crate::weyl::{Cosets, WeylElement};

/// A partition with trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing"
        );
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.rows() <= self.rows() && (0..other.rows()).all(|i| other.0[i] <= self.0[i])
    }

    pub fn fits_in_box(&self, rows: usize, cols: u32) -> bool {
        self.rows() <= rows && self.part(0) <= cols
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `size` with at most `rows` parts, each at most
/// `max_part`.
pub fn partitions_of(size: u32, rows: usize, max_part: u32) -> Vec<Partition> {
    fn rec(left: u32, rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, rows - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(size, rows, max_part, &mut Vec::new(), &mut out);
    out
}

/// Number of Littlewood-Richardson tableaux of shape `target/lambda` and
/// content `nu`: semistandard skew fillings whose reverse reading word
/// (rows top to bottom, each right to left) is a lattice word.
pub fn lr_coefficient(lambda: &Partition, nu: &Partition, target: &Partition) -> u64 {
    if target.size() != lambda.size() + nu.size() || !target.contains(lambda) {
        return 0;
    }
    let rows = target.rows();
    // cells in reading order: (row, col)
    let mut cells = Vec::new();
    for r in 0..rows {
        for c in (lambda.part(r)..target.part(r)).rev() {
            cells.push((r, c as usize));
        }
    }
    let width = target.part(0) as usize;
    let mut grid = vec![vec![0u32; width]; rows];
    let mut counts = vec![0u32; nu.rows() + 1];
    fn go(
        i: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<u32>>,
        counts: &mut Vec<u32>,
        lambda: &Partition,
        target: &Partition,
        nu: &Partition,
    ) -> u64 {
        if i == cells.len() {
            return 1;
        }
        let (r, c) = cells[i];
        // rows weakly increase left to right: bounded above by right neighbour
        let hi = if (c + 1) < target.part(r) as usize {
            grid[r][c + 1]
        } else {
            nu.rows() as u32
        };
        // columns strictly increase downward
        let lo = if r > 0 && c >= lambda.part(r - 1) as usize {
            grid[r - 1][c] + 1
        } else {
            1
        };
        let mut total = 0;
        for v in lo..=hi {
            let vi = v as usize;
            if counts[vi] >= nu.part(vi - 1) {
                continue;
            }
            if vi > 1 && counts[vi] + 1 > counts[vi - 1] {
                continue;
            }
            counts[vi] += 1;
            grid[r][c] = v;
            total += go(i + 1, cells, grid, counts, lambda, target, nu);
            counts[vi] -= 1;
        }
        grid[r][c] = 0;
        total
    }
    go(0, &cells, &mut grid, &mut counts, lambda, target, nu)
}

/// Result of rim-hook reduction: `sign · q^qdeg · σ_partition`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub partition: Partition,
    pub qdeg: u32,
    pub sign: i32,
}

fn beta_numbers(p: &Partition, k: usize) -> Vec<i64> {
    (0..k).map(|i| p.part(i) as i64 + (k - 1 - i) as i64).collect()
}

fn from_beta(mut beta: Vec<i64>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let k = beta.len();
    Partition::new(
        (0..k)
            .map(|i| (beta[i] - (k - 1 - i) as i64) as u32)
            .collect(),
    )
}

/// Removes size-`n` border strips until `nu` fits in the `k × (n-k)` box.
/// Returns `None` when the class vanishes (a strip cannot be removed, or
/// `nu` has more than `k` rows).
pub fn rimhook_reduce(nu: &Partition, k: usize, n: usize) -> Option<Reduced> {
    if nu.rows() > k {
        return None;
    }
    let mut beta = beta_numbers(nu, k);
    let n = n as i64;
    let mut qdeg = 0;
    let mut sign = 1;
    // in the box iff every bead sits below n
    while let Some(&top) = beta.iter().max().filter(|&&b| b >= n) {
        let i = beta.iter().position(|&b| b == top).expect("present");
        let dest = top - n;
        if dest < 0 || beta.contains(&dest) {
            return None;
        }
        let between = beta.iter().filter(|&&b| b > dest && b < top).count() as i64;
        let rows_of_strip = between + 1;
        if (k as i64 - rows_of_strip) % 2 != 0 {
            sign = -sign;
        }
        beta[i] = dest;
        qdeg += 1;
    }
    Some(Reduced {
        partition: from_beta(beta),
        qdeg,
        sign,
    })
}

/// The Schubert basis of `Gr(k, n)`: partitions in the `k × (n-k)` box,
/// ordered by size and then by descending parts.
#[derive(Clone, Debug)]
pub struct GrassBasis {
    pub k: usize,
    pub n: usize,
    pub parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl GrassBasis {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!("Gr({k},{n}) needs 0 < k < n")));
        }
        let cols = (n - k) as u32;
        let mut parts = Vec::new();
        for s in 0..=(k as u32 * cols) {
            parts.extend(partitions_of(s, k, cols));
        }
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(GrassBasis { k, n, parts, index })
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// `σ_λ ⋆ σ_μ` in `QH*(Gr(k, n))`, indexed by `basis`.
pub fn grass_star(basis: &GrassBasis, lambda: &Partition, mu: &Partition) -> QClass {
    let (k, n) = (basis.k, basis.n);
    let cols = (n - k) as u32;
    assert!(lambda.fits_in_box(k, cols) && mu.fits_in_box(k, cols));
    let size = lambda.size() + mu.size();
    let max_part = lambda.part(0) + mu.part(0);
    let mut out = QClass::zero();
    for target in partitions_of(size, k, max_part) {
        if !target.contains(lambda) || !target.contains(mu) {
            continue;
        }
        let c = lr_coefficient(lambda, mu, &target);
        if c == 0 {
            continue;
        }
        if let Some(r) = rimhook_reduce(&target, k, n) {
            let idx = basis.index_of(&r.partition).expect("reduced into the box");
            out.add_term(idx, r.qdeg, q(c as i64 * r.sign as i64));
        }
    }
    out
}

/// The full multiplication table in the partition basis.
pub fn grass_table(basis: &GrassBasis) -> ProductTable {
    let m = basis.len();
    let mut table = vec![vec![QClass::zero(); m]; m];
    for u in 0..m {
        for v in u..m {
            let p = grass_star(basis, &basis.parts[u], &basis.parts[v]);
            table[v][u] = p.clone();
            table[u][v] = p;
        }
    }
    ProductTable {
        c1: basis.n as u32,
        dim: (basis.k * (basis.n - basis.k)) as u32,
        lengths: basis.parts.iter().map(|p| p.size()).collect(),
        labels: basis.parts.iter().map(|p| format!("σ{p}")).collect(),
        table,
    }
}

/// Permutation `p` of `{1, …, n}` with `w(ε_j) = ε_{p(j)}`, for `w` in the
/// Weyl group of `A_{n-1}` given by a word.
pub fn permutation_of(word: &[u8], n: usize) -> Vec<usize> {
    (1..=n)
        .map(|mut x| {
            for &s in word.iter().rev() {
                let s = s as usize;
                if x == s {
                    x = s + 1;
                } else if x == s + 1 {
                    x = s;
                }
            }
            x
        })
        .collect()
}

/// The partition `λ` with `[Y^w] = σ_λ` for a minimal coset representative
/// `w` of `S_n / (S_k × S_{n-k})`: `λ_j = w(k+1-j) - (k+1-j)`.
pub fn partition_of_coset(w: &WeylElement, k: usize, n: usize) -> Partition {
    let p = permutation_of(&w.word, n);
    Partition::new(
        (1..=k)
            .map(|j| (p[k - j] - (k + 1 - j)) as u32)
            .collect(),
    )
}

/// `QH*(Gr(k, n))` re-indexed by the coset basis of `A_{n-1}` at node `k`.
#[derive(Clone, Debug)]
pub struct GrassmannEngine {
    pub basis: GrassBasis,
    pub cosets: Cosets,
    /// `partition_index[u]` for coset `u`.
    pub partition_index: Vec<usize>,
    pub table: ProductTable,
}

impl GrassmannEngine {
    pub fn new(rs: &RootSystem, node: usize) -> Result<Self> {
        if rs.cartan_type.family != Family::A {
            return Err(Error::InvalidType(format!(
                "{} is not of type A",
                rs.cartan_type
            )));
        }
        let n = rs.rank() + 1;
        let cosets = Cosets::new(rs, node)?;
        let basis = GrassBasis::new(node, n)?;
        let ptable = grass_table(&basis);
        let partition_index: Vec<usize> = cosets
            .reps
            .iter()
            .map(|r| {
                let lam = partition_of_coset(&r.element, node, n);
                debug_assert_eq!(lam.size(), r.length);
                basis.index_of(&lam).expect("coset partition lies in the box")
            })
            .collect();
        let mut coset_of_partition = vec![0; partition_index.len()];
        for (u, &p) in partition_index.iter().enumerate() {
            coset_of_partition[p] = u;
        }
        let remap = |x: &QClass| {
            QClass::from_terms(x.terms().map(|(p, d, c)| (coset_of_partition[p], d, c.clone())))
        };
        let m = cosets.len();
        let table = (0..m)
            .map(|u| {
                (0..m)
                    .map(|v| remap(&ptable.table[partition_index[u]][partition_index[v]]))
                    .collect()
            })
            .collect();
        let table = ProductTable {
            c1: ptable.c1,
            dim: ptable.dim,
            lengths: cosets.lengths(),
            labels: partition_index
                .iter()
                .map(|&p| ptable.labels[p].clone())
                .collect(),
            table,
        };
        Ok(GrassmannEngine {
            basis,
            cosets,
            partition_index,
            table,
        })
    }
}
