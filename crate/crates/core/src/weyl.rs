//! Weyl group elements, minimal coset representatives of `W/W_P` for a
//! maximal parabolic, and the longest element.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::rootsys::{Family, RootSystem};

pub const GROUP_LIMIT: u128 = 10_000_000;

/// A Weyl group element, stored as its integer action on the root lattice.
///
/// `matrix[i * n + j]` is the `α_i` coordinate of `w(α_j)`. Equality and
/// hashing use the matrix only; `word` is one reduced word (1-based
/// letters, `w = s_{word[0]} s_{word[1]} …`).
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub rank: usize,
    pub matrix: Vec<i64>,
    pub word: Vec<u8>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut matrix = vec![0; rank * rank];
        for i in 0..rank {
            matrix[i * rank + i] = 1;
        }
        WeylElement {
            rank,
            matrix,
            word: Vec::new(),
        }
    }

    /// Simple reflection `s_i` (1-based).
    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        let n = rs.rank();
        let mut w = WeylElement::identity(n);
        // s_i(α_j) = α_j - cartan[j][i-1] α_i
        for j in 0..n {
            w.matrix[(i - 1) * n + j] -= rs.cartan[j][i - 1];
        }
        w.word = vec![i as u8];
        w
    }

    /// The reflection `s_β` for the positive root with index `root`. The
    /// stored word is not reduced in general and is left empty.
    pub fn reflection(rs: &RootSystem, root: usize) -> Self {
        let n = rs.rank();
        let beta = &rs.positive_roots[root];
        let h = &rs.coroots[root];
        let mut w = WeylElement::identity(n);
        for j in 0..n {
            let p: i64 = (0..n).map(|k| rs.cartan[j][k] * h[k]).sum();
            for i in 0..n {
                w.matrix[i * n + j] -= p * beta[i];
            }
        }
        w
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.rank;
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.matrix[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        matrix[i * n + j] += a * other.matrix[k * n + j];
                    }
                }
            }
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            rank: n,
            matrix,
            word,
        }
    }

    pub fn image_of_simple(&self, j: usize) -> Vec<i64> {
        let n = self.rank;
        (0..n).map(|i| self.matrix[i * n + j]).collect()
    }

    /// Image of an integer vector in root coordinates.
    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        let n = self.rank;
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix[i * n + j] * v[j]).sum())
            .collect()
    }

    /// `w(λ)` for a weight in simple-root coordinates.
    pub fn apply(&self, weight: &[Q]) -> Result<Vec<Q>> {
        let n = self.rank;
        if weight.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: weight.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| self.matrix[i * n + j] != 0 && !weight[j].is_zero())
                    .map(|j| q(self.matrix[i * n + j]) * &weight[j])
                    .sum()
            })
            .collect())
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, rs: &RootSystem) -> usize {
        rs.positive_roots
            .iter()
            .filter(|r| self.apply_int(r).iter().any(|&c| c < 0))
            .count()
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElement::identity(self.rank)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word))
    }
}

/// `s1 s2 s1`, or `e` for the empty word.
pub fn format_word(word: &[u8]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter()
            .map(|i| format!("s{i}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split_whitespace()
        .map(|t| {
            t.strip_prefix('s')
                .and_then(|d| d.parse::<u8>().ok())
                .filter(|&d| d > 0)
                .ok_or_else(|| Error::Parse(format!("bad reflection letter {t:?}")))
        })
        .collect()
}

pub fn group_order(rs: &RootSystem) -> u128 {
    let n = rs.rank() as u128;
    let fact = |m: u128| (1..=m).product::<u128>();
    match rs.cartan_type.family {
        Family::A => fact(n + 1),
        Family::B | Family::C => (1u128 << n) * fact(n),
        Family::D => (1u128 << (n - 1)) * fact(n),
        Family::E => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        Family::F => 1152,
        Family::G => 12,
    }
}

/// All elements of `W`, sorted by length and then by their
/// lexicographically smallest reduced word (which is the stored word).
pub fn enumerate_weyl(rs: &RootSystem) -> Result<Vec<WeylElement>> {
    let size = group_order(rs);
    if size > GROUP_LIMIT {
        return Err(Error::GroupTooLarge {
            size,
            limit: GROUP_LIMIT,
        });
    }
    let n = rs.rank();
    let gens: Vec<WeylElement> = (1..=n).map(|i| WeylElement::simple(rs, i)).collect();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let id = WeylElement::identity(n);
    seen.insert(id.matrix.clone(), ());
    let mut all = vec![id.clone()];
    let mut level = vec![id];
    while !level.is_empty() {
        // left multiplication: s_i w, first letter i, keep the least word
        let mut best: HashMap<Vec<i64>, WeylElement> = HashMap::new();
        for w in &level {
            for g in &gens {
                let v = g.compose(w);
                if seen.contains_key(&v.matrix) {
                    continue;
                }
                match best.get(&v.matrix) {
                    Some(cur) if cur.word <= v.word => {}
                    _ => {
                        best.insert(v.matrix.clone(), v);
                    }
                }
            }
        }
        let mut next: Vec<WeylElement> = best.into_values().collect();
        next.sort_by(|a, b| a.word.cmp(&b.word));
        for v in &next {
            seen.insert(v.matrix.clone(), ());
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    debug_assert_eq!(all.len() as u128, size);
    Ok(all)
}

/// The longest element: keep right-multiplying by simple reflections that
/// send a simple root to a positive root.
pub fn longest_element(rs: &RootSystem) -> WeylElement {
    let n = rs.rank();
    let mut w = WeylElement::identity(n);
    loop {
        let grow = (0..n).find(|&j| w.image_of_simple(j).iter().all(|&c| c >= 0));
        match grow {
            Some(j) => w = w.compose(&WeylElement::simple(rs, j + 1)),
            None => return w,
        }
    }
}

/// Minimal-length representative of a coset in `W/W_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub element: WeylElement,
    pub length: u32,
    pub index: usize,
    /// `w ω_P` in fundamental-weight (Dynkin label) coordinates.
    pub weight: Vec<i64>,
}

/// The ordered basis of minimal coset representatives for one maximal
/// parabolic. The order (length, then word) is fixed here and used for all
/// coefficient indexing downstream.
#[derive(Clone, Debug)]
pub struct Cosets {
    pub node: usize,
    pub reps: Vec<CosetRep>,
    pub longest: WeylElement,
    /// Complex dimension of `G/P`, the length of the top representative.
    pub dim: u32,
    by_weight: HashMap<Vec<i64>, usize>,
    levi: Vec<usize>,
    rank: usize,
}

impl Cosets {
    pub fn new(rs: &RootSystem, node: usize) -> Result<Self> {
        min_coset_reps(rs, node)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn lengths(&self) -> Vec<u32> {
        self.reps.iter().map(|r| r.length).collect()
    }

    pub fn index_of_weight(&self, dynkin: &[i64]) -> Option<usize> {
        self.by_weight.get(dynkin).copied()
    }

    pub fn find_word(&self, word: &[u8]) -> Option<usize> {
        self.reps.iter().position(|r| r.element.word == word)
    }

    /// The representative of `w W_P`, found by descending through Levi
    /// reflections until `w` sends every Levi simple root to a positive root.
    pub fn coset_of(&self, w: &WeylElement, rs: &RootSystem) -> &CosetRep {
        let mut w = w.clone();
        loop {
            let descent = self
                .levi
                .iter()
                .copied()
                .find(|&j| w.image_of_simple(j).iter().any(|&c| c < 0));
            match descent {
                Some(j) => w = w.compose(&WeylElement::simple(rs, j + 1)),
                None => break,
            }
        }
        let weight = dynkin_labels(rs, &w.image_of_simple_weight(rs, self.node));
        let idx = self.by_weight[&weight];
        debug_assert_eq!(self.reps[idx].element, w);
        &self.reps[idx]
    }

    /// The representative of `w_o u W_P`; `length(dual) = dim - length(u)`.
    pub fn dual_index(&self, u: usize, rs: &RootSystem) -> usize {
        let w = self.longest.compose(&self.reps[u].element);
        self.coset_of(&w, rs).index
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl WeylElement {
    fn image_of_simple_weight(&self, rs: &RootSystem, node: usize) -> Vec<Q> {
        self.apply(&rs.fundamental_weights[node - 1])
            .expect("rank matches")
    }
}

/// Dynkin labels `⟨λ, h_{α_i}⟩` of a weight given in root coordinates.
pub fn dynkin_labels(rs: &RootSystem, weight: &[Q]) -> Vec<i64> {
    let n = rs.rank();
    (0..n)
        .map(|i| {
            let v: Q = (0..n).map(|j| &weight[j] * q(rs.cartan[j][i])).sum();
            assert!(v.is_integer(), "weight is not integral");
            i64::try_from(v.to_integer()).expect("label fits")
        })
        .collect()
}

/// Minimal coset representatives of `W/W_P`, `P` the maximal parabolic
/// omitting `node`, built as the `W`-orbit of `ω_P`: if `⟨λ, h_{α_i}⟩ > 0`
/// then `s_i w` is the minimal representative for `s_i λ`, one longer.
pub fn min_coset_reps(rs: &RootSystem, node: usize) -> Result<Cosets> {
    let idx = rs.check_node(node)?;
    let n = rs.rank();
    let start: Vec<i64> = (0..n).map(|i| (i == idx) as i64).collect();
    let gens: Vec<WeylElement> = (1..=n).map(|i| WeylElement::simple(rs, i)).collect();

    let mut reps = vec![CosetRep {
        element: WeylElement::identity(n),
        length: 0,
        index: 0,
        weight: start,
    }];
    let mut level = vec![0usize];
    let mut length = 0u32;
    while !level.is_empty() {
        length += 1;
        let mut best: HashMap<Vec<i64>, WeylElement> = HashMap::new();
        for &p in &level {
            let lam = reps[p].weight.clone();
            for i in 0..n {
                if lam[i] <= 0 {
                    continue;
                }
                // s_i λ = λ - λ_i α_i, α_i in Dynkin labels = row i of cartan
                let mut mu = lam.clone();
                for (k, m) in mu.iter_mut().enumerate() {
                    *m -= lam[i] * rs.cartan[i][k];
                }
                let v = gens[i].compose(&reps[p].element);
                match best.get(&mu) {
                    Some(cur) if cur.word <= v.word => {}
                    _ => {
                        best.insert(mu, v);
                    }
                }
            }
        }
        let mut next: Vec<(Vec<i64>, WeylElement)> = best.into_iter().collect();
        next.sort_by(|a, b| a.1.word.cmp(&b.1.word));
        if reps.len() as u128 + next.len() as u128 > GROUP_LIMIT {
            return Err(Error::GroupTooLarge {
                size: reps.len() as u128 + next.len() as u128,
                limit: GROUP_LIMIT,
            });
        }
        level.clear();
        for (weight, element) in next {
            level.push(reps.len());
            reps.push(CosetRep {
                index: reps.len(),
                element,
                length,
                weight,
            });
        }
    }
    let by_weight = reps
        .iter()
        .map(|r| (r.weight.clone(), r.index))
        .collect();
    let dim = reps.last().map(|r| r.length).unwrap_or(0);
    Ok(Cosets {
        node,
        reps,
        longest: longest_element(rs),
        dim,
        by_weight,
        levi: (0..n).filter(|&j| j != idx).collect(),
        rank: n,
    })
}
