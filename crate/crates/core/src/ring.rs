//! Elements of a small quantum cohomology ring in a Schubert basis, and the
//! full multiplication table shared by the divisor and Grassmannian engines.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::rational::{is_integer, q, Q};

/// Sparse `Σ c · q^d [Y^u]`, keyed by `(basis index, q-degree)`. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QClass {
    terms: BTreeMap<(usize, u32), Q>,
}

impl QClass {
    pub fn zero() -> Self {
        QClass::default()
    }

    pub fn basis(u: usize) -> Self {
        QClass::term(u, 0, Q::one())
    }

    pub fn term(u: usize, qdeg: u32, c: Q) -> Self {
        let mut x = QClass::zero();
        x.add_term(u, qdeg, c);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, u32, Q)>) -> Self {
        let mut x = QClass::zero();
        for (u, d, c) in terms {
            x.add_term(u, d, c);
        }
        x
    }

    pub fn add_term(&mut self, u: usize, qdeg: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (u, qdeg);
        let slot = self.terms.entry(key).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &QClass, c: &Q, qshift: u32) {
        if c.is_zero() {
            return;
        }
        for (&(u, d), v) in &other.terms {
            self.add_term(u, d + qshift, v * c);
        }
    }

    pub fn coeff(&self, u: usize, qdeg: u32) -> Q {
        self.terms.get(&(u, qdeg)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32, &Q)> {
        self.terms.iter().map(|(&(u, d), c)| (u, d, c))
    }

    /// Sets `q = 0`.
    pub fn classical(&self) -> QClass {
        QClass::from_terms(self.terms().filter(|t| t.1 == 0).map(|(u, d, c)| (u, d, c.clone())))
    }

    pub fn max_q_degree(&self) -> u32 {
        self.terms().map(|t| t.1).max().unwrap_or(0)
    }

    /// Renders like `qy_3 + 2q^2`, with `label(u)` naming basis elements and
    /// `unit` the index of the identity class (printed bare).
    pub fn render(&self, label: impl Fn(usize) -> String, unit: usize) -> String {
        let mut keys: Vec<(u32, usize)> = self.terms.keys().map(|&(u, d)| (d, u)).collect();
        keys.sort();
        let mut parts: Vec<(Q, String)> = Vec::new();
        for (d, u) in keys {
            let c = self.terms[&(u, d)].clone();
            let qpart = match d {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{d}"),
            };
            let bpart = if u == unit { String::new() } else { label(u) };
            let body = format!("{qpart}{bpart}");
            let a = c.abs();
            let coef = if body.is_empty() {
                a.to_string()
            } else if a.is_one() {
                String::new()
            } else if is_integer(&a) {
                a.to_string()
            } else {
                format!("({a})")
            };
            parts.push((c, format!("{coef}{body}")));
        }
        crate::rational::join_signed(parts.iter().map(|(c, s)| (c, s.clone())))
    }
}

/// The complete multiplication table of the Schubert basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTable {
    pub c1: u32,
    pub dim: u32,
    /// Codegree (`l_P`) of each basis class.
    pub lengths: Vec<u32>,
    pub labels: Vec<String>,
    /// `table[u][v] = [Y^u] ⋆ [Y^v]`.
    pub table: Vec<Vec<QClass>>,
}

impl ProductTable {
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn basis_product(&self, u: usize, v: usize) -> &QClass {
        &self.table[u][v]
    }

    pub fn star(&self, a: &QClass, b: &QClass) -> QClass {
        let mut out = QClass::zero();
        for (u, du, cu) in a.terms() {
            for (v, dv, cv) in b.terms() {
                out.add_scaled(&self.table[u][v], &(cu * cv), du + dv);
            }
        }
        out
    }

    /// The index of the identity class (codegree 0).
    pub fn unit(&self) -> usize {
        self.lengths.iter().position(|&l| l == 0).expect("unit class")
    }

    /// The point class (top codegree).
    pub fn top(&self) -> usize {
        self.lengths
            .iter()
            .position(|&l| l == self.dim)
            .expect("top class")
    }

    pub fn render_class(&self, x: &QClass) -> String {
        x.render(|u| self.labels[u].clone(), self.unit())
    }

    /// Whether every term `(w, d)` of `[Y^u] ⋆ [Y^v]` has
    /// `l(w) + d·c1 = l(u) + l(v)`.
    pub fn check_grading(&self) -> bool {
        (0..self.len()).all(|u| {
            (0..self.len()).all(|v| {
                self.table[u][v].terms().all(|(w, d, _)| {
                    self.lengths[w] + d * self.c1 == self.lengths[u] + self.lengths[v]
                })
            })
        })
    }

    pub fn structure_constants_are_nonnegative_integers(&self) -> bool {
        self.table
            .iter()
            .flatten()
            .flat_map(|x| x.terms())
            .all(|(_, _, c)| is_integer(c) && !c.is_negative())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.len()).all(|u| (0..u).all(|v| self.table[u][v] == self.table[v][u]))
    }

    pub fn is_associative_on(&self, a: usize, b: usize, c: usize) -> bool {
        let ab = self.star(&QClass::basis(a), &QClass::basis(b));
        let bc = self.star(&QClass::basis(b), &QClass::basis(c));
        self.star(&ab, &QClass::basis(c)) == self.star(&QClass::basis(a), &bc)
    }

    /// Text rendering laid out like a printed multiplication table: labeled
    /// rows and columns, upper triangle only.
    pub fn render_text(&self, title: &str) -> String {
        let n = self.len();
        let cells: Vec<Vec<String>> = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        if v < u {
                            String::new()
                        } else {
                            self.render_class(&self.table[u][v])
                        }
                    })
                    .collect()
            })
            .collect();
        let header: Vec<String> = (0..n).map(|u| self.display_label(u)).collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let first = header
            .iter()
            .map(|h| h.chars().count())
            .chain([title.chars().count()])
            .max()
            .unwrap_or(0);
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let mut out = String::new();
        out.push_str(&pad(title, first));
        out.push_str(" ||");
        for (h, &w) in header.iter().zip(&widths) {
            out.push(' ');
            out.push_str(&pad(h, w));
            out.push_str(" |");
        }
        out.push('\n');
        out.push_str(&"=".repeat(out.chars().count() - 1));
        out.push('\n');
        for (u, row) in cells.iter().enumerate() {
            out.push_str(&pad(&header[u], first));
            out.push_str(" ||");
            for (c, &w) in row.iter().zip(&widths) {
                out.push(' ');
                out.push_str(&pad(c, w));
                out.push_str(" |");
            }
            out.push('\n');
        }
        out
    }

    fn display_label(&self, u: usize) -> String {
        if u == self.unit() {
            "1".to_string()
        } else {
            self.labels[u].clone()
        }
    }

    /// `y_i` labels indexed by basis position.
    pub fn default_labels(n: usize) -> Vec<String> {
        (0..n).map(|u| format!("y_{u}")).collect()
    }
}

/// Builds a class from `(index, q-degree, integer coefficient)` triples.
pub fn qclass(terms: &[(usize, u32, i64)]) -> QClass {
    QClass::from_terms(terms.iter().map(|&(u, d, c)| (u, d, q(c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn zero_terms_are_dropped() {
        let mut x = qclass(&[(1, 0, 2)]);
        x.add_term(1, 0, q(-2));
        assert!(x.is_zero());
    }

    #[test]
    fn render() {
        let label = |u: usize| format!("y_{u}");
        assert_eq!(qclass(&[(5, 0, 1), (0, 1, 1)]).render(label, 0), "y_5 + q");
        assert_eq!(qclass(&[(3, 1, 1), (0, 2, 2)]).render(label, 0), "qy_3 + 2q^2");
        assert_eq!(qclass(&[(0, 0, 1)]).render(label, 0), "1");
        assert_eq!(QClass::zero().render(label, 0), "0");
        assert_eq!(QClass::term(2, 0, frac(-1, 2)).render(label, 0), "-(1/2)y_2");
    }
}
