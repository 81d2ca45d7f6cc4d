//! Alcove coordinates, exact membership of marking tuples in an inequality
//! system, and LP-certified redundancy pruning.
//!
//! A marking `μ ∈ t` is written in alcove coordinates `a_j = α_j(μ)`. The
//! pairing of a weight `λ = Σ λ_j α_j` with `μ` is then `Σ λ_j a_j`, so an
//! inequality coefficient vector is just `w ω_P` in root coordinates.

pub mod lp;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dot, parse_q, q, Q};
use crate::rootsys::{CartanType, RootSystem};
use crate::weyl::{format_word, parse_word};

pub use lp::{lp_maximize, Constraint, LpSolution};

/// A point of the alcove `{a_j ≥ 0, Σ c_j a_j ≤ 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlcovePoint(pub Vec<Q>);

impl AlcovePoint {
    pub fn origin(rank: usize) -> Self {
        AlcovePoint(vec![Q::zero(); rank])
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    /// Checks the alcove constraints; `point` is only used for the message.
    pub fn validate(&self, rs: &RootSystem, point: usize) -> Result<()> {
        if self.0.len() != rs.rank() {
            return Err(Error::DimensionMismatch {
                expected: rs.rank(),
                got: self.0.len(),
            });
        }
        for (j, a) in self.0.iter().enumerate() {
            if a.is_negative() {
                return Err(Error::AlcoveViolation {
                    point,
                    constraint: format!("a_{} = {a} < 0", j + 1),
                });
            }
        }
        let level: Q = self
            .0
            .iter()
            .zip(&rs.highest_root_marks)
            .map(|(a, &c)| a * q(c))
            .sum();
        if level > q(1) {
            return Err(Error::AlcoveViolation {
                point,
                constraint: format!("α_0(μ) = {level} > 1"),
            });
        }
        Ok(())
    }
}

/// `Σ_i ⟨coeffs[i], a^{(i)}⟩ ≤ d`, with `coeffs[i] = w_i ω_P` in simple-root
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub group: CartanType,
    pub node: usize,
    pub d: u32,
    /// Reduced words of `w_1, …, w_b`.
    pub tuple: Vec<Vec<u8>>,
    pub coeffs: Vec<Vec<Q>>,
}

impl Inequality {
    pub fn points(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lhs(&self, points: &[AlcovePoint]) -> Q {
        self.coeffs
            .iter()
            .zip(points)
            .map(|(v, p)| dot(v, &p.0))
            .sum()
    }

    pub fn holds(&self, points: &[AlcovePoint]) -> bool {
        self.lhs(points) <= q(self.d as i64)
    }

    /// Coefficients flattened over the stacked coordinates of all points.
    pub fn stacked(&self) -> Vec<Q> {
        self.coeffs.iter().flatten().cloned().collect()
    }

    pub fn as_constraint(&self) -> Constraint {
        Constraint::new(self.stacked(), q(self.d as i64))
    }

    /// Ordering used for emission and pruning: `(d, node, tuple)`, tuples
    /// compared position by position in coset-basis order.
    pub fn order_key(&self) -> (u32, usize, Vec<(usize, Vec<u8>)>) {
        (
            self.d,
            self.node,
            self.tuple.iter().map(|w| (w.len(), w.clone())).collect(),
        )
    }

    /// Human-readable form, e.g. `a1 - a2 - a3 <= 0` (rank one) or
    /// `2a1_1 + a1_2 + … <= 2`.
    pub fn pretty(&self) -> String {
        let rank = self.coeffs.first().map(|v| v.len()).unwrap_or(0);
        let mut terms: Vec<(Q, String)> = Vec::new();
        for (i, v) in self.coeffs.iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                let var = if rank == 1 {
                    format!("a{}", i + 1)
                } else {
                    format!("a{}_{}", i + 1, j + 1)
                };
                let a = c.abs();
                let coef = if a == q(1) {
                    String::new()
                } else {
                    format!("{a} ")
                };
                terms.push((c.clone(), format!("{coef}{var}")));
            }
        }
        let lhs = crate::rational::join_signed(terms.iter().map(|(c, s)| (c, s.clone())));
        format!("{lhs} <= {}", self.d)
    }

    pub fn to_record(&self) -> InequalityRecord {
        InequalityRecord {
            group: self.group.to_string(),
            node: self.node,
            d: self.d,
            tuple: self.tuple.iter().map(|w| format_word(w)).collect(),
            coeffs: self
                .coeffs
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect())
                .collect(),
            pretty: self.pretty(),
        }
    }

    pub fn from_record(r: &InequalityRecord) -> Result<Self> {
        let ineq = Inequality {
            group: r.group.parse()?,
            node: r.node,
            d: r.d,
            tuple: r
                .tuple
                .iter()
                .map(|w| parse_word(w))
                .collect::<Result<_>>()?,
            coeffs: r
                .coeffs
                .iter()
                .map(|v| v.iter().map(|c| parse_q(c)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        };
        if ineq.tuple.len() != ineq.coeffs.len() {
            return Err(Error::Parse("tuple and coeffs differ in length".into()));
        }
        Ok(ineq)
    }
}

impl PartialOrd for Inequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Inequality {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key()
            .cmp(&other.order_key())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// JSON shape of one inequality; rationals are `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub group: String,
    pub node: usize,
    pub d: u32,
    pub tuple: Vec<String>,
    pub coeffs: Vec<Vec<String>>,
    pub pretty: String,
}

pub fn inequalities_to_json(system: &[Inequality]) -> String {
    let records: Vec<InequalityRecord> = system.iter().map(|i| i.to_record()).collect();
    serde_json::to_string_pretty(&records).expect("records serialize")
}

pub fn inequalities_from_json(s: &str) -> Result<Vec<Inequality>> {
    let records: Vec<InequalityRecord> =
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    records.iter().map(Inequality::from_record).collect()
}

pub fn inequalities_to_csv(system: &[Inequality]) -> String {
    let mut out = String::from("group,node,d,tuple,coeffs,pretty\n");
    for i in system {
        let r = i.to_record();
        let coeffs: Vec<String> = r.coeffs.iter().map(|v| v.join(" ")).collect();
        out.push_str(&format!(
            "{},{},{},{},{},\"{}\"\n",
            r.group,
            r.node,
            r.d,
            r.tuple.join(";"),
            coeffs.join(";"),
            r.pretty
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Indices into the system of every violated inequality.
    pub violated: Vec<usize>,
}

/// Whether the marking tuple satisfies every inequality (exactly).
pub fn membership(
    rs: &RootSystem,
    points: &[AlcovePoint],
    system: &[Inequality],
) -> Result<Membership> {
    for (i, p) in points.iter().enumerate() {
        p.validate(rs, i + 1)?;
    }
    let mut violated = Vec::new();
    for (k, ineq) in system.iter().enumerate() {
        if ineq.points() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: ineq.points(),
                got: points.len(),
            });
        }
        if !ineq.holds(points) {
            violated.push(k);
        }
    }
    Ok(Membership {
        member: violated.is_empty(),
        violated,
    })
}

/// `Σ_j c_j a^{(i)}_j ≤ 1` for each of the `b` points, over stacked
/// coordinates (non-negativity is implicit in the LP).
pub fn alcove_constraints(rs: &RootSystem, b: usize) -> Vec<Constraint> {
    let n = rs.rank();
    (0..b)
        .map(|i| {
            let mut coeffs = vec![Q::zero(); n * b];
            for j in 0..n {
                coeffs[i * n + j] = q(rs.highest_root_marks[j]);
            }
            Constraint::new(coeffs, q(1))
        })
        .collect()
}

/// Maximum of `lhs - d` for `target` over the alcove and `others`.
pub fn max_slack(rs: &RootSystem, target: &Inequality, others: &[&Inequality]) -> Result<LpSolution> {
    let b = target.points();
    let mut cons = alcove_constraints(rs, b);
    cons.extend(others.iter().map(|o| o.as_constraint()));
    let mut sol = lp_maximize(&target.stacked(), &cons)?;
    sol.value -= q(target.d as i64);
    Ok(sol)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removed {
    pub inequality: Inequality,
    /// `max (lhs - d)` over the alcove and the inequalities kept at the time;
    /// always `≤ 0`.
    pub certificate: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Pruned {
    pub kept: Vec<Inequality>,
    pub removed: Vec<Removed>,
}

/// Drops every inequality implied by the alcove and the others still kept,
/// visiting the system in `(d, node, tuple)` order.
pub fn prune_redundant(rs: &RootSystem, system: &[Inequality]) -> Result<Pruned> {
    let mut order: Vec<Inequality> = system.to_vec();
    order.sort();
    let mut alive = vec![true; order.len()];
    let mut removed = Vec::new();
    for i in 0..order.len() {
        let others: Vec<&Inequality> = order
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && alive[j])
            .map(|(_, x)| x)
            .collect();
        let sol = max_slack(rs, &order[i], &others)?;
        if !sol.value.is_positive() {
            alive[i] = false;
            removed.push(Removed {
                inequality: order[i].clone(),
                certificate: sol.value,
            });
        }
    }
    let kept = order
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(x, _)| x)
        .collect();
    Ok(Pruned { kept, removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, qvec};

    fn a1() -> RootSystem {
        RootSystem::new("A1".parse().unwrap()).unwrap()
    }

    fn ineq(coeffs: &[[i64; 1]], d: u32) -> Inequality {
        Inequality {
            group: "A1".parse().unwrap(),
            node: 1,
            d,
            tuple: coeffs.iter().map(|c| if c[0] > 0 { vec![] } else { vec![1] }).collect(),
            coeffs: coeffs.iter().map(|c| vec![frac(c[0], 2)]).collect(),
        }
    }

    /// The four A1 inequalities for three points, written out by hand.
    fn su2_system() -> Vec<Inequality> {
        vec![
            ineq(&[[1], [-1], [-1]], 0),
            ineq(&[[-1], [1], [-1]], 0),
            ineq(&[[-1], [-1], [1]], 0),
            ineq(&[[1], [1], [1]], 1),
        ]
    }

    fn pts(xs: &[Q]) -> Vec<AlcovePoint> {
        xs.iter().map(|x| AlcovePoint(vec![x.clone()])).collect()
    }

    #[test]
    fn membership_examples() {
        let rs = a1();
        let sys = su2_system();
        let m = membership(&rs, &pts(&[q(0), q(0), q(0)]), &sys).unwrap();
        assert!(m.member);
        let half = frac(1, 2);
        let m = membership(&rs, &pts(&[half.clone(), half.clone(), half.clone()]), &sys).unwrap();
        assert!(m.member);
        let m = membership(&rs, &pts(&[half, frac(1, 4), q(0)]), &sys).unwrap();
        assert!(!m.member);
        assert_eq!(m.violated, vec![0]);
    }

    #[test]
    fn alcove_violations() {
        let rs = a1();
        let sys = su2_system();
        assert!(matches!(
            membership(&rs, &pts(&[q(2), q(0), q(0)]), &sys),
            Err(Error::AlcoveViolation { point: 1, .. })
        ));
        assert!(matches!(
            membership(&rs, &pts(&[q(0), q(-1), q(0)]), &sys),
            Err(Error::AlcoveViolation { point: 2, .. })
        ));
    }

    #[test]
    fn su2_system_is_irredundant() {
        let rs = a1();
        let p = prune_redundant(&rs, &su2_system()).unwrap();
        assert_eq!(p.kept.len(), 4);
        assert!(p.removed.is_empty());
    }

    #[test]
    fn duplicate_is_removed_once() {
        let rs = a1();
        let mut sys = su2_system();
        sys.push(sys[3].clone());
        let p = prune_redundant(&rs, &sys).unwrap();
        assert_eq!(p.kept.len(), 4);
        assert_eq!(p.removed.len(), 1);
        assert_eq!(p.removed[0].certificate, q(0));
    }

    #[test]
    fn g2_alcove_maximum_of_omega1() {
        let rs = RootSystem::new("G2".parse().unwrap()).unwrap();
        let w1 = rs.fundamental_weights[0].clone();
        let s = lp_maximize(&w1, &alcove_constraints(&rs, 1)).unwrap();
        assert_eq!(s.value, frac(2, 3));
        assert_eq!(s.witness, vec![frac(1, 3), q(0)]);
        assert_eq!(rs.inner_product(&w1, &w1).unwrap(), s.value);
    }

    #[test]
    fn json_round_trip() {
        let sys = su2_system();
        let back = inequalities_from_json(&inequalities_to_json(&sys)).unwrap();
        assert_eq!(back, sys);
        assert!(inequalities_from_json("[{}]").is_err());
    }

    #[test]
    fn pretty_strings() {
        let sys = su2_system();
        assert_eq!(sys[0].pretty(), "1/2 a1 - 1/2 a2 - 1/2 a3 <= 0");
        let g = Inequality {
            group: "G2".parse().unwrap(),
            node: 1,
            d: 2,
            tuple: vec![vec![]; 3],
            coeffs: vec![qvec(&[2, 1]); 3],
        };
        assert_eq!(g.pretty(), "2 a1_1 + a1_2 + 2 a2_1 + a2_2 + 2 a3_1 + a3_2 <= 2");
    }
}
