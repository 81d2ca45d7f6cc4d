//! Acceptance criteria, one line of output each. Exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhflag::campaign::{crosscheck, CrosscheckConfig, GridSpec};
use qhflag::exec::Execution;
use qhflag::grassmann::GrassmannEngine;
use qhflag::gw_ineq::{enumerate_inequalities, Engine, EnumerateOptions};
use qhflag::oracle::{su2_closed_form, OracleConfig};
use qhflag::polytope::{
    alcove_constraints, lp_maximize, membership, prune_redundant, AlcovePoint, Constraint,
};
use qhflag::qh::{DivisorPoly, QhEngine};
use qhflag::rational::{frac, q, Q};
use qhflag::ring::{ProductTable, QClass};
use qhflag::rootsys::RootSystem;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rs(name: &str) -> RootSystem {
    RootSystem::new(name.parse().unwrap()).unwrap()
}

fn g2() -> RootSystem {
    rs("G2")
}

/// Coroot (in simple-root coordinates) and its pairings with ω_1, ω_2, keyed
/// by the root.
fn c1_root_data() -> Check {
    let g = g2();
    let rows: [([i64; 2], [i64; 2], [i64; 2]); 6] = [
        ([1, 0], [3, 0], [1, 0]),
        ([0, 1], [0, 1], [0, 1]),
        ([1, 1], [3, 3], [1, 3]),
        ([3, 2], [3, 2], [1, 2]),
        ([2, 1], [6, 3], [2, 3]),
        ([3, 1], [3, 1], [1, 1]),
    ];
    ensure(g.positive_roots.len() == 6, || "expected six positive roots".into())?;
    ensure(g.positive_roots[g.highest_root] == vec![3, 2], || {
        "highest root is not 3α_1 + 2α_2".into()
    })?;
    let mut entries = 0;
    for (root, coroot, pairs) in rows {
        let k = g
            .find_root(&root)
            .ok_or_else(|| format!("root {root:?} missing"))?;
        let h: Vec<Q> = coroot.iter().map(|&c| q(c)).collect();
        ensure(g.coroot_in_root_coords(k) == h, || {
            format!("coroot of {root:?} is {:?}", g.coroot_in_root_coords(k))
        })?;
        for j in 0..2 {
            let got = g.pairing_with_coroot(&g.fundamental_weights[j], k);
            ensure(got == q(pairs[j]), || {
                format!("h_β(ω_{}) for β = {root:?}: {got} ≠ {}", j + 1, pairs[j])
            })?;
            entries += 1;
        }
    }
    ensure(entries == 12, || "not all entries checked".into())
}

fn c2_first_chern() -> Check {
    let g = g2();
    for (node, want) in [(1, 5), (2, 3)] {
        let c1 = g.c1_of_parabolic(node).map_err(|e| e.to_string())?;
        ensure(c1 == want, || format!("c1(G/P_{node}) = {c1}, expected {want}"))?;
        let e = QhEngine::new(&g, node).map_err(|e| e.to_string())?;
        ensure(e.c1() == want, || "engine disagrees on c1".into())?;
    }
    Ok(())
}

/// Parses entries like `qy_3 + 2q^2`, `2y_4 + qy_1`, `1`, `q^2y_2`.
fn parse_entry(s: &str) -> QClass {
    let mut x = QClass::zero();
    for term in s.split('+').map(str::trim) {
        let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
        let mut rest = &term[digits.len()..];
        let coeff: i64 = if digits.is_empty() { 1 } else { digits.parse().unwrap() };
        let mut qdeg = 0;
        if let Some(r) = rest.strip_prefix('q') {
            qdeg = 1;
            rest = r;
            if let Some(r) = rest.strip_prefix('^') {
                let d: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                qdeg = d.parse().unwrap();
                rest = &r[d.len()..];
            }
        }
        let class = match rest.strip_prefix("y_") {
            Some(i) => i.parse().unwrap(),
            None if rest.is_empty() => 0,
            None => panic!("cannot parse {term}"),
        };
        let coeff = if rest.is_empty() && qdeg == 0 && digits.is_empty() {
            1
        } else {
            coeff
        };
        x.add_term(class, qdeg, q(coeff));
    }
    x
}

const TABLE_P1: [&[&str]; 6] = [
    &["1", "y_1", "y_2", "y_3", "y_4", "y_5"],
    &["y_2", "2y_3", "y_4", "y_5 + q", "qy_1"],
    &["2y_4", "y_5 + q", "2qy_1", "qy_2"],
    &["qy_1", "qy_2", "qy_3"],
    &["2qy_3", "qy_4"],
    &["q^2"],
];

const TABLE_P2: [&[&str]; 6] = [
    &["1", "y_1", "y_2", "y_3", "y_4", "y_5"],
    &["3y_2", "2y_3 + q", "3y_4 + qy_1", "y_5 + qy_2", "qy_3 + 2q^2"],
    &["2y_4 + qy_1", "y_5 + 2qy_2", "qy_3 + q^2", "qy_4 + q^2y_1"],
    &["2qy_3 + 2q^2", "qy_4 + q^2y_1", "2q^2y_2"],
    &["q^2y_2", "q^2y_3"],
    &["2q^2y_4"],
];

fn compare_table(t: &ProductTable, rows: &[&[&str]; 6], name: &str) -> Check {
    let mut checked = 0;
    for (u, row) in rows.iter().enumerate() {
        for (k, entry) in row.iter().enumerate() {
            let v = u + k;
            let want = parse_entry(entry);
            let got = t.basis_product(u, v);
            ensure(*got == want, || {
                format!(
                    "{name}: y_{u} ⋆ y_{v} = {}, expected {entry}",
                    t.render_class(got)
                )
            })?;
            checked += 1;
        }
    }
    ensure(checked == 21, || format!("{name}: {checked} entries"))
}

fn c3_tables() -> Check {
    let g = g2();
    let e1 = QhEngine::new(&g, 1).map_err(|e| e.to_string())?;
    let e2 = QhEngine::new(&g, 2).map_err(|e| e.to_string())?;
    compare_table(&e1.table, &TABLE_P1, "G2/P_1")?;
    compare_table(&e2.table, &TABLE_P2, "G2/P_2")
}

fn poly(terms: &[(u32, u32, i64, i64)]) -> DivisorPoly {
    let t: Vec<(u32, u32, Q)> = terms
        .iter()
        .map(|&(j, m, n, d)| (j, m, frac(n, d)))
        .collect();
    DivisorPoly::from_terms(&t)
}

fn c4_giambelli_and_presentations() -> Check {
    let g = g2();
    let e1 = QhEngine::new(&g, 1).map_err(|e| e.to_string())?;
    let e2 = QhEngine::new(&g, 2).map_err(|e| e.to_string())?;
    // y_2 = y^2, y_3 = y^3/2, y_4 = y^4/2, y_5 = y^5/2 - q
    let p1 = [
        poly(&[(2, 0, 1, 1)]),
        poly(&[(3, 0, 1, 2)]),
        poly(&[(4, 0, 1, 2)]),
        poly(&[(5, 0, 1, 2), (0, 1, -1, 1)]),
    ];
    // y_2 = y^2/3, y_3 = (y^3 - 3q)/6, y_4 = (y^4 - 9qy)/18, y_5 = (y^5 - 15qy^2)/18
    let p2 = [
        poly(&[(2, 0, 1, 3)]),
        poly(&[(3, 0, 1, 6), (0, 1, -1, 2)]),
        poly(&[(4, 0, 1, 18), (1, 1, -1, 2)]),
        poly(&[(5, 0, 1, 18), (2, 1, -5, 6)]),
    ];
    for (e, want, name) in [(&e1, &p1, "P_1"), (&e2, &p2, "P_2")] {
        for (k, w) in want.iter().enumerate() {
            let u = k + 2;
            ensure(e.giambelli[u] == *w, || {
                format!("{name}: y_{u} = {}, expected {w}", e.giambelli[u])
            })?;
        }
    }
    let mut failures = Vec::new();
    let r1 = e1.presentation();
    if !(r1.degree == 6 && r1.rhs == poly(&[(1, 1, 4, 1)])) {
        failures.push(format!("P_1 relation {r1}, expected y_1^6 = 4qy_1"));
    }
    let r2 = e2.presentation();
    if !(r2.degree == 6 && r2.rhs == poly(&[(3, 1, 18, 1), (0, 2, 9, 1)])) {
        failures.push(format!("P_2 relation {r2}, expected y_1^6 = 18qy_1^3 + 9q^2"));
    }
    ensure(failures.is_empty(), || failures.join("; "))
}

fn c5_counts() -> Check {
    let sys = enumerate_inequalities(&g2(), 3, &EnumerateOptions::default())
        .map_err(|e| e.to_string())?;
    let classical = sys.iter().filter(|i| i.d == 0).count();
    let quantum = sys.len() - classical;
    // ordered tuples: 18 + 15 classical and 16 + 24 quantum over the two nodes
    ensure((classical, quantum) == (33, 40), || {
        format!("{classical} classical, {quantum} quantum")
    })
}

fn c6_non_facet() -> Check {
    let g = g2();
    let sys = enumerate_inequalities(&g, 3, &EnumerateOptions::default())
        .map_err(|e| e.to_string())?;
    let target = sys
        .iter()
        .find(|i| i.node == 1 && i.d == 2 && i.tuple.iter().all(|w| w.is_empty()))
        .ok_or("no (e, e, e) inequality with d = 2 at P_1")?
        .clone();
    let w1 = g.fundamental_weights[0].clone();
    ensure(target.coeffs.iter().all(|c| *c == w1), || {
        "coefficients are not ω_1".into()
    })?;
    let single = lp_maximize(&w1, &alcove_constraints(&g, 1)).map_err(|e| e.to_string())?;
    let norm = g.inner_product(&w1, &w1).map_err(|e| e.to_string())?;
    ensure(single.value == frac(2, 3) && norm == frac(2, 3), || {
        format!("max (μ, ω_1) = {}, (ω_1, ω_1) = {norm}", single.value)
    })?;
    let pruned = prune_redundant(&g, &sys).map_err(|e| e.to_string())?;
    let removed = pruned
        .removed
        .iter()
        .find(|r| r.inequality == target)
        .ok_or("inequality was kept")?;
    ensure(removed.certificate <= q(0), || {
        format!("certificate {}", removed.certificate)
    })?;
    ensure(!pruned.kept.contains(&target), || "kept and removed".into())
}

fn c7_su2() -> Check {
    let a1 = rs("A1");
    let sys = enumerate_inequalities(&a1, 3, &EnumerateOptions::default())
        .map_err(|e| e.to_string())?;
    // closed form: a1 - a2 - a3 ≤ 0, a2 - a1 - a3 ≤ 0, a3 - a1 - a2 ≤ 0,
    // a1 + a2 + a3 ≤ 2
    let closed: Vec<Constraint> = [
        ([1, -1, -1], 0),
        ([-1, 1, -1], 0),
        ([-1, -1, 1], 0),
        ([1, 1, 1], 2),
    ]
    .iter()
    .map(|(c, d)| Constraint::new(c.iter().map(|&x| q(x)).collect(), q(*d)))
    .collect();
    let alcove = alcove_constraints(&a1, 3);
    let system: Vec<Constraint> = sys.iter().map(|i| i.as_constraint()).collect();
    for (from, to, what) in [(&system, &closed, "system ⇒ closed form"), (&closed, &system, "closed form ⇒ system")] {
        let mut cons = alcove.clone();
        cons.extend(from.iter().cloned());
        for c in to.iter() {
            let s = lp_maximize(&c.coeffs, &cons).map_err(|e| e.to_string())?;
            ensure(s.value <= c.rhs, || format!("{what} fails: max {} > {}", s.value, c.rhs))?;
        }
    }
    let grid: Vec<Q> = (0..=20).map(|j| frac(j, 20)).collect();
    for x in &grid {
        for y in &grid {
            for z in &grid {
                let pts: Vec<AlcovePoint> = [x, y, z]
                    .iter()
                    .map(|v| AlcovePoint(vec![(*v).clone()]))
                    .collect();
                let m = membership(&a1, &pts, &sys).map_err(|e| e.to_string())?.member;
                ensure(m == su2_closed_form(x, y, z), || {
                    format!("exact disagreement at ({x}, {y}, {z})")
                })?;
            }
        }
    }
    let cfg = CrosscheckConfig {
        points: 3,
        grid: GridSpec {
            density: 21,
            interior: false,
        },
        margin: 1.0 / 40.0,
        oracle: OracleConfig::default(),
        execution: Execution::default(),
    };
    let report = crosscheck(&a1, &sys, &cfg).map_err(|e| e.to_string())?;
    ensure(report.tuples == 9261, || format!("{} tuples", report.tuples))?;
    ensure(report.passed(), || report.render_text())
}

fn c8_cross_engine() -> Check {
    for n in 2..=5 {
        let a = rs(&format!("A{}", n - 1));
        let divisor = QhEngine::new(&a, 1).map_err(|e| e.to_string())?;
        let rim = GrassmannEngine::new(&a, 1).map_err(|e| e.to_string())?;
        ensure(divisor.table.table == rim.table.table, || {
            format!("tables differ on P^{}", n - 1)
        })?;
        ensure(divisor.table.lengths == rim.table.lengths, || "codegrees differ".into())?;
    }
    Ok(())
}

fn properties(t: &ProductTable, dual: &[usize], rng: &mut ChaCha8Rng, name: &str) -> Check {
    let n = t.len();
    ensure(t.is_commutative(), || format!("{name}: not commutative"))?;
    for _ in 0..250 {
        let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
        ensure(t.is_associative_on(a, b, c), || {
            format!("{name}: associativity fails on ({a}, {b}, {c})")
        })?;
    }
    ensure(t.check_grading(), || format!("{name}: grading"))?;
    ensure(t.structure_constants_are_nonnegative_integers(), || {
        format!("{name}: structure constants")
    })?;
    let top = t.top();
    for u in 0..n {
        for v in 0..n {
            let pairing = t.basis_product(u, v).coeff(top, 0);
            let want = q(i64::from(dual[u] == v));
            ensure(pairing == want, || format!("{name}: pairing of {u}, {v}"))?;
        }
    }
    Ok(())
}

fn c9_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2003);
    for (group, node, name) in [("G2", 1, "G2/P_1"), ("G2", 2, "G2/P_2"), ("A3", 2, "Gr(2,4)"), ("A4", 2, "Gr(2,5)")] {
        let start = Instant::now();
        let e = Engine::for_node(&rs(group), node).map_err(|e| e.to_string())?;
        properties(&e.table, &e.dual, &mut rng, name)?;
        ensure(start.elapsed() < Duration::from_secs(30), || format!("{name} too slow"))?;
    }
    Ok(())
}

fn c10_soundness() -> Check {
    let a2 = rs("A2");
    let sys = enumerate_inequalities(&a2, 3, &EnumerateOptions::default())
        .map_err(|e| e.to_string())?;
    let cfg = CrosscheckConfig {
        points: 3,
        grid: GridSpec {
            density: 6,
            interior: true,
        },
        margin: 0.0,
        oracle: OracleConfig::default(),
        execution: Execution::default(),
    };
    let report = crosscheck(&a2, &sys, &cfg).map_err(|e| e.to_string())?;
    ensure(report.tuples == 216, || format!("{} tuples", report.tuples))?;
    ensure(report.unsound.is_empty(), || report.render_text())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("G2 root data: coroot/weight pairing table", 1, c1_root_data),
        ("first Chern numbers of G2/P_1, G2/P_2", 1, c2_first_chern),
        ("G2 quantum multiplication tables", 1, c3_tables),
        ("Giambelli expressions and presentations", 1, c4_giambelli_and_presentations),
        ("G2 three-point inequality counts", 5, c5_counts),
        ("non-facet quantum inequality is LP-redundant", 5, c6_non_facet),
        ("SU(2) closed form, exact system and oracle", 60, c7_su2),
        ("divisor vs rim-hook engines on projective spaces", 5, c8_cross_engine),
        ("ring properties on G2 and Grassmannians", 120, c9_properties),
        ("SU(3) soundness campaign", 600, c10_soundness),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(*limit), || {
                format!("took {elapsed:.2?}, limit {limit}s")
            })
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
