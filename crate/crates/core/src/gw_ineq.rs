//! Gromov-Witten invariants read off iterated star products, and the
//! resulting inequality system for tuples of conjugacy classes.
//!
//! `n_d(w_1, …, w_b)` is the coefficient of `q^d [Y^{w_b}]` in
//! `[Y_{w_1}] ⋆ … ⋆ [Y_{w_{b-1}}]`, where `[Y_w] = [Y^{w_o w}]` is the class of
//! the Schubert variety itself. Every tuple with `n_d = 1` contributes
//! `Σ_i (w_i ω_P, μ_i) ≤ d`.

use std::collections::HashSet;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grassmann::GrassmannEngine;
use crate::polytope::Inequality;
use crate::qh::QhEngine;
use crate::rational::{is_integer, Q};
use crate::ring::{ProductTable, QClass};
use crate::rootsys::{Family, RootSystem};
use crate::weyl::Cosets;

/// Default cap on the number of marked points.
pub const MAX_POINTS: usize = 5;
/// Default cap on `|W/W_P|^{b-1}`, the number of products per node.
pub const PRODUCT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Divisor,
    Grassmann,
}

/// A full multiplication table for one maximal parabolic, indexed by the
/// coset basis of that node.
#[derive(Clone, Debug)]
pub struct Engine {
    pub node: usize,
    pub kind: EngineKind,
    pub cosets: Cosets,
    pub table: ProductTable,
    /// `dual[u]` is the index of `w_o u`.
    pub dual: Vec<usize>,
    /// `w_u ω_P` in simple-root coordinates.
    pub weights: Vec<Vec<Q>>,
}

impl Engine {
    /// Uses the divisor engine, falling back to rim-hook Grassmannian
    /// arithmetic for type A nodes whose ring is not divisor-generated.
    pub fn for_node(rs: &RootSystem, node: usize) -> Result<Self> {
        let (kind, cosets, table) = match QhEngine::new(rs, node) {
            Ok(e) => (EngineKind::Divisor, e.cosets().clone(), e.table),
            Err(Error::NotDivisorGenerated { .. }) if rs.cartan_type.family == Family::A => {
                let g = GrassmannEngine::new(rs, node)?;
                (EngineKind::Grassmann, g.cosets, g.table)
            }
            Err(e) => return Err(e),
        };
        let dual = (0..cosets.len()).map(|u| cosets.dual_index(u, rs)).collect();
        let omega = rs.fundamental_weight(node)?;
        let weights = cosets
            .reps
            .iter()
            .map(|r| r.element.apply(omega))
            .collect::<Result<_>>()?;
        Ok(Engine {
            node,
            kind,
            cosets,
            table,
            dual,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn c1(&self) -> u32 {
        self.table.c1
    }

    pub fn dim(&self) -> u32 {
        self.table.dim
    }

    /// `[Y_{w_1}] ⋆ … ⋆ [Y_{w_k}]`; the empty product is the unit.
    pub fn homology_product(&self, tuple: &[usize]) -> QClass {
        let mut acc = QClass::basis(self.table.unit());
        for &w in tuple {
            acc = self.table.star(&acc, &QClass::basis(self.dual[w]));
        }
        acc
    }
}

/// `n_d(w_1, …, w_b)` for coset indices `tuple` of `node`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwQuery {
    pub node: usize,
    pub tuple: Vec<usize>,
    pub d: u32,
}

pub fn gw_invariant(engine: &Engine, query: &GwQuery) -> Result<u64> {
    if query.node != engine.node {
        return Err(Error::InvalidArgument(format!(
            "query for node {} sent to the engine of node {}",
            query.node, engine.node
        )));
    }
    let Some((&last, rest)) = query.tuple.split_last() else {
        return Err(Error::InvalidArgument("empty tuple".into()));
    };
    if let Some(&bad) = query.tuple.iter().find(|&&u| u >= engine.len()) {
        return Err(Error::InvalidArgument(format!("no coset with index {bad}")));
    }
    let c = engine.homology_product(rest).coeff(last, query.d);
    to_count(&c)
}

fn to_count(c: &Q) -> Result<u64> {
    if !is_integer(c) || *c < Q::from_integer(0.into()) {
        return Err(Error::Internal(format!(
            "structure constant {c} is not a non-negative integer"
        )));
    }
    c.to_integer()
        .try_into()
        .map_err(|_| Error::Internal(format!("structure constant {c} overflows")))
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Keep one tuple per orbit of simultaneous permutation of the points.
    pub dedup: bool,
    pub execution: Execution,
    pub max_points: usize,
    pub budget: u128,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            dedup: false,
            execution: Execution::default(),
            max_points: MAX_POINTS,
            budget: PRODUCT_BUDGET,
        }
    }
}

/// Every inequality `Σ_i (w_i ω_P, μ_i) ≤ d` with `n_d(w_1, …, w_b) = 1`,
/// over all maximal parabolics, sorted by `(d, node, tuple)`.
///
/// `b = 1` is allowed and yields `(ω_P, μ) ≤ 0` for each node.
pub fn enumerate_inequalities(
    rs: &RootSystem,
    b: usize,
    opts: &EnumerateOptions,
) -> Result<Vec<Inequality>> {
    if b == 0 {
        return Err(Error::InvalidArgument("at least one point is required".into()));
    }
    if b > opts.max_points {
        return Err(Error::BudgetExceeded {
            what: "points",
            size: b as u128,
            limit: opts.max_points as u128,
        });
    }
    let engines: Vec<Engine> = (1..=rs.rank())
        .map(|node| Engine::for_node(rs, node))
        .collect::<Result<_>>()?;
    enumerate_with(&engines, rs, b, opts)
}

/// As [`enumerate_inequalities`], reusing prebuilt engines.
pub fn enumerate_with(
    engines: &[Engine],
    rs: &RootSystem,
    b: usize,
    opts: &EnumerateOptions,
) -> Result<Vec<Inequality>> {
    let mut work = Vec::new();
    for (e, engine) in engines.iter().enumerate() {
        let size = (engine.len() as u128)
            .checked_pow((b - 1) as u32)
            .unwrap_or(u128::MAX);
        if size > opts.budget {
            return Err(Error::BudgetExceeded {
                what: "products per node",
                size,
                limit: opts.budget,
            });
        }
        for prefix in tuples(engine.len(), b - 1) {
            work.push((e, prefix));
        }
    }
    let batches = opts.execution.map(work, |(e, prefix)| {
        emit_for_prefix(&engines[e], rs, &prefix)
    });
    let mut out = Vec::new();
    for batch in batches {
        out.extend(batch?);
    }
    out.sort();
    if opts.dedup {
        let mut seen = HashSet::new();
        out.retain(|i| {
            let mut key = i.tuple.clone();
            key.sort();
            seen.insert((i.node, i.d, key))
        });
    }
    Ok(out)
}

fn emit_for_prefix(engine: &Engine, rs: &RootSystem, prefix: &[usize]) -> Result<Vec<Inequality>> {
    let product = engine.homology_product(prefix);
    let mut out = Vec::new();
    for (last, d, c) in product.terms() {
        if !c.is_one() {
            to_count(c)?;
            continue;
        }
        let tuple: Vec<usize> = prefix.iter().copied().chain([last]).collect();
        let lengths = &engine.table.lengths;
        let codegrees: u32 = tuple.iter().map(|&u| engine.dim() - lengths[u]).sum();
        if codegrees != engine.dim() + d * engine.c1() {
            return Err(Error::Internal(format!(
                "grading violated at node {} for tuple {tuple:?}, d = {d}",
                engine.node
            )));
        }
        out.push(Inequality {
            group: rs.cartan_type,
            node: engine.node,
            d,
            tuple: tuple
                .iter()
                .map(|&u| engine.cosets.reps[u].element.word.clone())
                .collect(),
            coeffs: tuple.iter().map(|&u| engine.weights[u].clone()).collect(),
        });
    }
    Ok(out)
}

/// All `len`-tuples over `0..n` in lexicographic order.
fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |u| {
                    let mut t = t.clone();
                    t.push(u);
                    t
                })
            })
            .collect();
    }
    out
}
