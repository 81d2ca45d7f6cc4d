//! Cross-validation of the exact inequality system against the numeric
//! oracle on rational alcove grids for `SU(n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{decide, OracleConfig, Verdict};
use crate::polytope::{membership, AlcovePoint, Inequality};
use crate::rational::{frac, to_f64, Q};
use crate::rootsys::{Family, RootSystem};

/// Grid coordinates `j/(density-1)`, `j = 0..density`, kept when the point
/// lies in the alcove (strictly inside when `interior`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub density: usize,
    pub interior: bool,
}

pub fn alcove_grid(rs: &RootSystem, spec: GridSpec) -> Result<Vec<AlcovePoint>> {
    if spec.density < 2 {
        return Err(Error::InvalidArgument("grid density must be at least 2".into()));
    }
    let steps = spec.density - 1;
    let n = rs.rank();
    let marks = &rs.highest_root_marks;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let level: i64 = idx.iter().zip(marks).map(|(&j, &c)| j as i64 * c).sum();
        let inside = if spec.interior {
            idx.iter().all(|&j| j > 0) && level < steps as i64
        } else {
            level <= steps as i64
        };
        if inside {
            out.push(AlcovePoint(
                idx.iter().map(|&j| frac(j as i64, steps as i64)).collect(),
            ));
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] <= steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrosscheckConfig {
    pub points: usize,
    pub grid: GridSpec,
    /// Tuples closer than this (Euclidean, stacked alcove coordinates) to an
    /// inequality hyperplane are tallied but not counted as disagreements.
    pub margin: f64,
    pub oracle: OracleConfig,
    pub execution: Execution,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    #[serde(with = "crate::rational::serde_q::vec_vec")]
    pub mu: Vec<Vec<Q>>,
    pub system_member: bool,
    pub oracle: Verdict,
    pub residual: f64,
    /// Distance to the nearest inequality hyperplane.
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub group: String,
    pub points: usize,
    pub tuples: usize,
    /// `[system member, system non-member] × [oracle member, unresolved]`.
    pub agreement: [[usize; 2]; 2],
    pub within_margin: usize,
    /// Disagreements at distance at least the margin.
    pub disagreements: Vec<Sample>,
    /// Oracle-certified members excluded by the system, at any distance.
    pub unsound: Vec<Sample>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.unsound.is_empty()
    }

    pub fn render_text(&self) -> String {
        let [[mm, mu], [nm, nu]] = self.agreement;
        let mut s = format!(
            "{} b={} tuples={} (within margin: {})\n\
             {:>18} {:>8} {:>11}\n\
             {:>18} {:>8} {:>11}\n\
             {:>18} {:>8} {:>11}\n",
            self.group,
            self.points,
            self.tuples,
            self.within_margin,
            "",
            "oracle+",
            "unresolved",
            "system member",
            mm,
            mu,
            "system non-member",
            nm,
            nu,
        );
        s.push_str(&format!(
            "disagreements outside margin: {}\nunsound oracle members: {}\n",
            self.disagreements.len(),
            self.unsound.len()
        ));
        for d in self.disagreements.iter().chain(&self.unsound) {
            let mu: Vec<String> = d
                .mu
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            s.push_str(&format!(
                "  mu={} system={} oracle={:?} residual={:.3e} distance={:.4}\n",
                mu.join(";"),
                d.system_member,
                d.oracle,
                d.residual,
                d.distance
            ));
        }
        s
    }
}

/// Distance from a stacked point to the nearest hyperplane of `system`.
pub fn boundary_distance(points: &[AlcovePoint], system: &[Inequality]) -> f64 {
    system
        .iter()
        .map(|i| {
            let slack = to_f64(&(i.lhs(points) - Q::from_integer(i.d.into())));
            let norm: f64 = i.stacked().iter().map(|c| to_f64(c).powi(2)).sum::<f64>().sqrt();
            slack.abs() / norm
        })
        .fold(f64::INFINITY, f64::min)
}

/// Runs exact membership and the oracle on every `b`-tuple of grid points.
pub fn crosscheck(rs: &RootSystem, system: &[Inequality], cfg: &CrosscheckConfig) -> Result<Report> {
    if rs.cartan_type.family != Family::A {
        return Err(Error::InvalidType(format!(
            "{} has no unitary oracle; use SU(n)",
            rs.cartan_type
        )));
    }
    let n = rs.rank() + 1;
    let grid = alcove_grid(rs, cfg.grid)?;
    let mut tuples: Vec<Vec<AlcovePoint>> = vec![Vec::new()];
    for _ in 0..cfg.points {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                grid.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    let total = tuples.len();
    let samples = cfg.execution.map(tuples, |t| -> Result<Sample> {
        let system_member = membership(rs, &t, system)?.member;
        let marks: Vec<Vec<f64>> = t.iter().map(|p| p.0.iter().map(to_f64).collect()).collect();
        let d = decide(n, &marks, &cfg.oracle)?;
        Ok(Sample {
            mu: t.into_iter().map(|p| p.0).collect(),
            system_member,
            oracle: d.verdict,
            residual: d.residual,
            distance: boundary_distance_raw(&marks, system),
        })
    });
    let mut report = Report {
        group: format!("SU({n})"),
        points: cfg.points,
        tuples: total,
        agreement: [[0; 2]; 2],
        within_margin: 0,
        disagreements: Vec::new(),
        unsound: Vec::new(),
    };
    for s in samples {
        let s = s?;
        let row = usize::from(!s.system_member);
        let col = usize::from(s.oracle != Verdict::Member);
        report.agreement[row][col] += 1;
        let agree = row == col;
        if s.distance < cfg.margin {
            report.within_margin += 1;
        } else if !agree {
            report.disagreements.push(s.clone());
        }
        if !s.system_member && s.oracle == Verdict::Member {
            report.unsound.push(s);
        }
    }
    Ok(report)
}

fn boundary_distance_raw(marks: &[Vec<f64>], system: &[Inequality]) -> f64 {
    system
        .iter()
        .map(|i| {
            let mut lhs = -(i.d as f64);
            let mut norm = 0.0;
            for (v, a) in i.coeffs.iter().zip(marks) {
                for (c, x) in v.iter().zip(a) {
                    let c = to_f64(c);
                    lhs += c * x;
                    norm += c * c;
                }
            }
            lhs.abs() / norm.sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw_ineq::{enumerate_inequalities, EnumerateOptions};

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let a1 = rs("A1");
        let g = GridSpec {
            density: 21,
            interior: false,
        };
        assert_eq!(alcove_grid(&a1, g).unwrap().len(), 21);
        let a2 = rs("A2");
        let g = GridSpec {
            density: 6,
            interior: true,
        };
        assert_eq!(alcove_grid(&a2, g).unwrap().len(), 6);
        let g = GridSpec {
            density: 6,
            interior: false,
        };
        assert_eq!(alcove_grid(&a2, g).unwrap().len(), 21);
    }

    #[test]
    fn one_point_only_origin() {
        let a2 = rs("A2");
        let sys = enumerate_inequalities(&a2, 1, &EnumerateOptions::default()).unwrap();
        let cfg = CrosscheckConfig {
            points: 1,
            grid: GridSpec {
                density: 4,
                interior: false,
            },
            margin: 0.0,
            oracle: OracleConfig::default(),
            execution: Execution::default(),
        };
        let r = crosscheck(&a2, &sys, &cfg).unwrap();
        assert_eq!(r.tuples, 10);
        assert_eq!(r.agreement, [[1, 0], [0, 9]]);
        assert!(r.passed());
    }

    #[test]
    fn distances_agree() {
        let a1 = rs("A1");
        let sys = enumerate_inequalities(&a1, 3, &EnumerateOptions::default()).unwrap();
        let pts: Vec<AlcovePoint> = [frac(1, 2), frac(1, 4), frac(0, 1)]
            .into_iter()
            .map(|x| AlcovePoint(vec![x]))
            .collect();
        let marks: Vec<Vec<f64>> = pts.iter().map(|p| vec![to_f64(&p.0[0])]).collect();
        let exact = boundary_distance(&pts, &sys);
        assert!((exact - boundary_distance_raw(&marks, &sys)).abs() < 1e-15);
        assert!((exact - 0.25 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_other_types() {
        let g2 = rs("G2");
        let cfg = CrosscheckConfig {
            points: 1,
            grid: GridSpec {
                density: 2,
                interior: false,
            },
            margin: 0.0,
            oracle: OracleConfig::default(),
            execution: Execution::default(),
        };
        assert!(matches!(crosscheck(&g2, &[], &cfg), Err(Error::InvalidType(_))));
    }
}
