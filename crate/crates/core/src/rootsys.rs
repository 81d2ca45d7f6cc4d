//! Root data for the simple types A through G.
//!
//! Conventions:
//! * simple roots and nodes are numbered from 1 (Bourbaki), vectors are
//!   indexed from 0;
//! * weights live in simple-root coordinates, coweights (elements of `t`)
//!   in simple-coroot coordinates;
//! * `cartan[i][j] = ⟨α_i, h_{α_j}⟩`;
//! * the inner product is the basic one, `(α_0, α_0) = 2`;
//! * for G2, `α_1` is short and `α_2` long, so `h_{α_1} = 3α_1`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    /// `SU(n)` is type `A_{n-1}`.
    pub fn su(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidType(format!("su{n}")));
        }
        CartanType::new(Family::A, n - 1)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    /// Accepts `G2`, `a3`, and `su4` (= `A3`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if let Some(n) = lower.strip_prefix("su") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidType(t.to_string()))?;
            return CartanType::su(n);
        }
        let mut chars = lower.chars();
        let family = match chars.next() {
            Some('a') => Family::A,
            Some('b') => Family::B,
            Some('c') => Family::C,
            Some('d') => Family::D,
            Some('e') => Family::E,
            Some('f') => Family::F,
            Some('g') => Family::G,
            _ => return Err(Error::InvalidType(t.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(t.to_string()))?;
        CartanType::new(family, rank)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix of the simple roots under the basic inner product.
    pub gram: Vec<Vec<Q>>,
    /// Positive roots in simple-root coordinates, sorted by height then
    /// descending lexicographic order (simple roots first, in index order).
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: usize,
    pub root_norms: Vec<Q>,
    /// `h_β = 2β/(β,β)` in simple-coroot coordinates (always integral).
    pub coroots: Vec<Vec<i64>>,
    /// `ω_i` in simple-root coordinates.
    pub fundamental_weights: Vec<Vec<Q>>,
    /// `α_0 = Σ c_j α_j`.
    pub highest_root_marks: Vec<i64>,
}

/// Dynkin edges (1-based) and squared simple-root lengths.
fn dynkin(t: CartanType) -> (Vec<(usize, usize)>, Vec<Q>) {
    let n = t.rank;
    let chain = |m: usize| (1..m).map(|i| (i, i + 1)).collect::<Vec<_>>();
    let long = vec![q(2); n];
    match t.family {
        Family::A => (chain(n), long),
        Family::B => {
            let mut len = long;
            len[n - 1] = q(1);
            (chain(n), len)
        }
        Family::C => {
            let mut len = vec![q(1); n];
            len[n - 1] = q(2);
            (chain(n), len)
        }
        Family::D => {
            let mut e = chain(n - 1);
            e.push((n - 2, n));
            (e, long)
        }
        Family::E => {
            let mut e = vec![(1, 3), (3, 4), (2, 4)];
            e.extend((4..n).map(|i| (i, i + 1)));
            (e, long)
        }
        Family::F => (chain(4), vec![q(2), q(2), q(1), q(1)]),
        Family::G => (chain(2), vec![frac(2, 3), q(2)]),
    }
}

pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    RootSystem::new(CartanType::new(family, rank)?)
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Result<Self> {
        let n = cartan_type.rank;
        let (edges, lengths) = dynkin(cartan_type);

        // (α_i, α_j) = -max(|α_i|², |α_j|²)/2 across every bond, single,
        // double or triple.
        let mut gram = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            gram[i][i] = lengths[i].clone();
        }
        for &(a, b) in &edges {
            let m = std::cmp::max(&lengths[a - 1], &lengths[b - 1]);
            let v = -(m / q(2));
            gram[a - 1][b - 1] = v.clone();
            gram[b - 1][a - 1] = v;
        }
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = q(2) * &gram[i][j] / &gram[j][j];
                        assert!(v.is_integer(), "non-integral Cartan entry");
                        i64::try_from(v.to_integer()).expect("Cartan entry fits")
                    })
                    .collect()
            })
            .collect();

        let positive_roots = close_under_reflections(&cartan);
        let norm = |r: &[i64]| -> Q {
            let mut s = Q::zero();
            for i in 0..n {
                for j in 0..n {
                    if r[i] != 0 && r[j] != 0 {
                        s += &gram[i][j] * q(r[i] * r[j]);
                    }
                }
            }
            s
        };
        let root_norms: Vec<Q> = positive_roots.iter().map(|r| norm(r)).collect();
        let coroots = positive_roots
            .iter()
            .zip(&root_norms)
            .map(|(r, nr)| {
                (0..n)
                    .map(|j| {
                        let v = q(r[j]) * &gram[j][j] / nr;
                        assert!(v.is_integer(), "non-integral coroot coordinate");
                        i64::try_from(v.to_integer()).expect("coroot fits")
                    })
                    .collect()
            })
            .collect();
        let highest_root = positive_roots.len() - 1;
        let highest_root_marks = positive_roots[highest_root].clone();
        let fundamental_weights = invert_transpose_cartan(&cartan);

        let rs = RootSystem {
            cartan_type,
            cartan,
            gram,
            positive_roots,
            highest_root,
            root_norms,
            coroots,
            fundamental_weights,
            highest_root_marks,
        };
        debug_assert_eq!(rs.root_norms[rs.highest_root], q(2));
        Ok(rs)
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<usize> {
        if node == 0 || node > self.rank() {
            Err(Error::InvalidNode(node))
        } else {
            Ok(node - 1)
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: len,
            })
        } else {
            Ok(())
        }
    }

    /// `⟨λ, h⟩` for a weight in root coordinates and a coweight in coroot
    /// coordinates.
    pub fn pairing(&self, weight: &[Q], coweight: &[Q]) -> Result<Q> {
        self.check_dim(weight.len())?;
        self.check_dim(coweight.len())?;
        let mut s = Q::zero();
        for (i, wi) in weight.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            for (j, hj) in coweight.iter().enumerate() {
                if self.cartan[i][j] != 0 {
                    s += wi * hj * q(self.cartan[i][j]);
                }
            }
        }
        Ok(s)
    }

    /// `⟨λ, h_β⟩` for the positive root with index `root`.
    pub fn pairing_with_coroot(&self, weight: &[Q], root: usize) -> Q {
        let h: Vec<Q> = self.coroots[root].iter().map(|&c| q(c)).collect();
        self.pairing(weight, &h).expect("dimensions agree")
    }

    pub fn inner_product(&self, a: &[Q], b: &[Q]) -> Result<Q> {
        self.check_dim(a.len())?;
        self.check_dim(b.len())?;
        let mut s = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !self.gram[i][j].is_zero() {
                    s += ai * bj * &self.gram[i][j];
                }
            }
        }
        Ok(s)
    }

    /// The coroot `h_β` written in simple-root coordinates via the inner
    /// product, as in `h_{β_1} = 3α_1` for G2.
    pub fn coroot_in_root_coords(&self, root: usize) -> Vec<Q> {
        self.positive_roots[root]
            .iter()
            .map(|&c| q(2 * c) / &self.root_norms[root])
            .collect()
    }

    /// Image of a weight (root coordinates) in coroot coordinates under the
    /// identification of `t*` with `t` given by the inner product.
    pub fn weight_to_coweight(&self, weight: &[Q]) -> Vec<Q> {
        (0..self.rank())
            .map(|j| &weight[j] * &self.gram[j][j] / q(2))
            .collect()
    }

    pub fn root_as_q(&self, root: usize) -> Vec<Q> {
        self.positive_roots[root].iter().map(|&c| q(c)).collect()
    }

    pub fn highest_root_q(&self) -> Vec<Q> {
        self.root_as_q(self.highest_root)
    }

    pub fn fundamental_weight(&self, node: usize) -> Result<&[Q]> {
        let i = self.check_node(node)?;
        Ok(&self.fundamental_weights[i])
    }

    /// Positive roots of the Levi of the maximal parabolic omitting `node`.
    pub fn is_levi_root(&self, root: usize, node: usize) -> bool {
        self.positive_roots[root][node - 1] == 0
    }

    /// First Chern number `c` with `Σ_{β ∉ Levi} β = c · ω_node`.
    pub fn c1_of_parabolic(&self, node: usize) -> Result<u32> {
        let i = self.check_node(node)?;
        let n = self.rank();
        let mut sum = vec![0i64; n];
        for r in &self.positive_roots {
            if r[i] != 0 {
                for (s, c) in sum.iter_mut().zip(r) {
                    *s += c;
                }
            }
        }
        let sum_q: Vec<Q> = sum.iter().map(|&c| q(c)).collect();
        let omega = &self.fundamental_weights[i];
        let c = &sum_q[i] / &omega[i];
        for j in 0..n {
            assert_eq!(sum_q[j], &c * &omega[j], "off-Levi root sum is not a multiple of ω_P");
        }
        assert!(c.is_integer() && c > Q::zero());
        Ok(u32::try_from(c.to_integer()).expect("c1 fits"))
    }

    /// Complex dimension of `G/P`: the number of positive roots outside the
    /// Levi.
    pub fn dim_flag(&self, node: usize) -> Result<u32> {
        let i = self.check_node(node)?;
        Ok(self.positive_roots.iter().filter(|r| r[i] != 0).count() as u32)
    }

    /// `s_i(v) = v - ⟨v, h_{α_i}⟩ α_i` on a root-coordinate vector.
    pub fn reflect_simple(&self, i: usize, v: &[Q]) -> Vec<Q> {
        let p: Q = (0..self.rank())
            .map(|j| &v[j] * q(self.cartan[j][i]))
            .sum();
        let mut out = v.to_vec();
        out[i] -= p;
        out
    }

    pub fn find_root(&self, v: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|r| r.as_slice() == v)
    }

    /// Label like `3α_1 + 2α_2`.
    pub fn format_root_coords(coords: &[Q], symbol: &str) -> String {
        let terms: Vec<(&Q, String)> = coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let body = format!("{symbol}_{}", i + 1);
                let pre = if num_traits::Signed::abs(c).is_one() {
                    String::new()
                } else {
                    num_traits::Signed::abs(c).to_string()
                };
                (c, format!("{pre}{body}"))
            })
            .collect();
        crate::rational::join_signed(terms)
    }
}

/// Positive roots generated from the simple roots by simple reflections.
fn close_under_reflections(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut seen: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut frontier = roots.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for i in 0..n {
                let p: i64 = (0..n).map(|j| r[j] * cartan[j][i]).sum();
                let mut s = r.clone();
                s[i] -= p;
                if s.iter().all(|&c| c >= 0) && s.iter().any(|&c| c > 0) && seen.insert(s.clone())
                {
                    next.push(s);
                }
            }
        }
        roots.extend(next.iter().cloned());
        frontier = next;
    }
    // ties in height: descending lexicographic, so α_1, α_2, … come first
    roots.sort_by(|a, b| RootSystem::height(a).cmp(&RootSystem::height(b)).then(b.cmp(a)));
    roots
}

/// Rows of the returned matrix are `ω_i` in simple-root coordinates:
/// `Σ_j X[i][j] cartan[j][k] = δ_ik`.
fn invert_transpose_cartan(cartan: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = cartan.len();
    // Solve X C = I  <=>  C^T X^T = I.
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = (0..n).map(|j| q(cartan[j][i])).collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    // a[..][n..] = (C^T)^{-1} = X^T
    (0..n).map(|i| (0..n).map(|j| a[j][n + i].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn g2() -> RootSystem {
        build_root_system(Family::G, 2).unwrap()
    }

    #[test]
    fn g2_positive_roots() {
        let rs = g2();
        assert_eq!(
            rs.positive_roots,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1], vec![3, 2]]
        );
        assert_eq!(rs.positive_roots[rs.highest_root], vec![3, 2]);
        assert_eq!(rs.highest_root_marks, vec![3, 2]);
    }

    #[test]
    fn g2_coroots_in_root_coordinates() {
        let rs = g2();
        let h = |b: &[i64]| rs.coroot_in_root_coords(rs.find_root(b).unwrap());
        assert_eq!(h(&[1, 0]), qvec(&[3, 0]));
        assert_eq!(h(&[0, 1]), qvec(&[0, 1]));
        assert_eq!(h(&[1, 1]), qvec(&[3, 3]));
        assert_eq!(h(&[3, 2]), qvec(&[3, 2]));
        assert_eq!(h(&[2, 1]), qvec(&[6, 3]));
        assert_eq!(h(&[3, 1]), qvec(&[3, 1]));
    }

    #[test]
    fn g2_pairings() {
        let rs = g2();
        let w1 = rs.fundamental_weight(1).unwrap().to_vec();
        let w2 = rs.fundamental_weight(2).unwrap().to_vec();
        assert_eq!(w1, qvec(&[2, 1]));
        assert_eq!(w2, qvec(&[3, 2]));
        let b5 = rs.find_root(&[2, 1]).unwrap();
        assert_eq!(rs.pairing_with_coroot(&w1, b5), q(2));
        assert_eq!(rs.pairing_with_coroot(&w2, b5), q(3));
        let b2 = rs.find_root(&[0, 1]).unwrap();
        assert_eq!(rs.pairing_with_coroot(&w1, b2), q(0));
    }

    #[test]
    fn g2_inner_products() {
        let rs = g2();
        let w1 = rs.fundamental_weight(1).unwrap().to_vec();
        assert_eq!(rs.inner_product(&w1, &w1).unwrap(), frac(2, 3));
        let a0 = rs.highest_root_q();
        assert_eq!(rs.inner_product(&a0, &a0).unwrap(), q(2));
    }

    #[test]
    fn c1_values() {
        let rs = g2();
        assert_eq!(rs.c1_of_parabolic(1).unwrap(), 5);
        assert_eq!(rs.c1_of_parabolic(2).unwrap(), 3);
        let a1 = build_root_system(Family::A, 1).unwrap();
        assert_eq!(a1.c1_of_parabolic(1).unwrap(), 2);
        // Gr(k, n) has c1 = n
        let a4 = build_root_system(Family::A, 4).unwrap();
        for k in 1..=4 {
            assert_eq!(a4.c1_of_parabolic(k).unwrap(), 5);
        }
    }

    #[test]
    fn a1_basics() {
        let rs = build_root_system(Family::A, 1).unwrap();
        assert_eq!(rs.positive_roots, vec![vec![1]]);
        assert_eq!(rs.root_norms[0], q(2));
        let w = rs.fundamental_weight(1).unwrap().to_vec();
        assert_eq!(w, vec![frac(1, 2)]);
        assert_eq!(rs.pairing(&w, &[q(1)]).unwrap(), q(1));
        assert_eq!(rs.inner_product(&[q(1)], &w).unwrap(), q(1));
    }

    #[test]
    fn a2_roots() {
        let rs = build_root_system(Family::A, 2).unwrap();
        assert_eq!(rs.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn root_counts_for_all_types() {
        let cases = [
            ("A1", 1),
            ("A4", 10),
            ("B2", 4),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
        ];
        for (label, count) in cases {
            let rs = RootSystem::new(label.parse().unwrap()).unwrap();
            assert_eq!(rs.positive_roots.len(), count, "{label}");
            assert_eq!(rs.root_norms[rs.highest_root], q(2), "{label}");
            // simple roots come first in the height ordering
            for i in 0..rs.rank() {
                let ai = rs.root_as_q(i);
                for j in 0..rs.rank() {
                    assert_eq!(rs.pairing_with_coroot(&ai, j), q(rs.cartan[i][j]));
                }
            }
        }
    }

    #[test]
    fn reflection_closure() {
        for label in ["B3", "C3", "F4", "G2", "D4"] {
            let rs = RootSystem::new(label.parse().unwrap()).unwrap();
            for r in &rs.positive_roots {
                let rq: Vec<Q> = r.iter().map(|&c| q(c)).collect();
                for i in 0..rs.rank() {
                    let s = rs.reflect_simple(i, &rq);
                    let ints: Vec<i64> = s.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect();
                    let neg: Vec<i64> = ints.iter().map(|c| -c).collect();
                    assert!(rs.find_root(&ints).is_some() || rs.find_root(&neg).is_some());
                }
            }
        }
    }

    #[test]
    fn inner_product_matches_pairing_under_identification() {
        let rs = g2();
        let ws = rs.fundamental_weights.clone();
        for a in &ws {
            for b in &ws {
                let sharp = rs.weight_to_coweight(b);
                assert_eq!(rs.inner_product(a, b).unwrap(), rs.pairing(a, &sharp).unwrap());
            }
        }
    }

    #[test]
    fn rejects_invalid_types() {
        for bad in ["C2", "D3", "E5", "F3", "G3", "A0", "X2", "su1"] {
            assert!(bad.parse::<CartanType>().is_err(), "{bad}");
        }
        assert_eq!("su3".parse::<CartanType>().unwrap().to_string(), "A2");
    }

    #[test]
    fn dimension_mismatch() {
        let rs = g2();
        assert!(matches!(
            rs.pairing(&[q(1)], &[q(1), q(0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn deterministic() {
        assert_eq!(g2(), g2());
    }
}
