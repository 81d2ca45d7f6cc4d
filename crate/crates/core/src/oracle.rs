//! Numeric membership oracle for `SU(n)`: search for `k_i ∈ C_{μ_i}` with
//! `k_1 ⋯ k_b = I`.
//!
//! Each class is parametrized as `k_i = U_i D_i U_i^†` with `D_i` the diagonal
//! representative, and `U_b = I` is fixed (simultaneous conjugation). The
//! squared Frobenius residual `‖Π k_i - I‖²` is minimized by steepest descent
//! on `U(n)^{b-1}` with exponential retraction and Armijo backtracking, from
//! Haar-random starts. The oracle is one-sided: it certifies membership with
//! a witness or reports the point unresolved.
//!
//! Markings are alcove coordinates `a_j = α_j(μ)` in `f64`.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

type C = Complex64;

/// Allowed deviation of `U^† U` from the identity, entrywise.
pub const UNITARITY_DRIFT: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Threshold on the squared Frobenius residual.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            restarts: 64,
            max_iterations: 2000,
            tolerance: 1e-8,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Member,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    /// Residual at `witness`, recomputed by [`residual`].
    pub residual: f64,
    /// `U_1, …, U_b` with `U_b = I`.
    pub witness: Vec<DMatrix<C>>,
    pub restarts_run: usize,
    pub iterations: usize,
}

/// Eigenvalue logs `λ_1 ≥ … ≥ λ_n`, `Σ λ = 0`, in units of a full turn, from
/// alcove coordinates `a_j = λ_j - λ_{j+1}`.
pub fn eigenvalue_logs(a: &[f64]) -> Vec<f64> {
    let n = a.len() + 1;
    let weighted: f64 = a.iter().enumerate().map(|(j, x)| (j + 1) as f64 * x).sum();
    let last = -weighted / n as f64;
    let mut out = vec![last; n];
    for k in (0..n - 1).rev() {
        out[k] = out[k + 1] + a[k];
    }
    out
}

/// `diag(exp(2πiλ))` for the class with alcove coordinates `a`.
pub fn class_representative(a: &[f64]) -> DMatrix<C> {
    let lam = eigenvalue_logs(a);
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        lam.len(),
        lam.iter().map(|&l| C::from_polar(1.0, std::f64::consts::TAU * l)),
    ))
}

fn check_marks(n: usize, marks: &[Vec<f64>]) -> Result<()> {
    if let Some(bad) = marks.iter().find(|m| m.len() + 1 != n) {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: bad.len(),
        });
    }
    Ok(())
}

/// `max |U^† U - I|` entrywise.
pub fn unitarity_drift(u: &DMatrix<C>) -> f64 {
    let n = u.nrows();
    let g = u.adjoint() * u - DMatrix::<C>::identity(n, n);
    g.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖Π_i U_i D_i U_i^† - I‖²` (squared Frobenius).
pub fn residual(n: usize, marks: &[Vec<f64>], unitaries: &[DMatrix<C>]) -> Result<f64> {
    check_marks(n, marks)?;
    if unitaries.len() != marks.len() {
        return Err(Error::DimensionMismatch {
            expected: marks.len(),
            got: unitaries.len(),
        });
    }
    let mut p = DMatrix::<C>::identity(n, n);
    for (a, u) in marks.iter().zip(unitaries) {
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.nrows(),
            });
        }
        let drift = unitarity_drift(u);
        if drift > UNITARITY_DRIFT {
            return Err(Error::NonUnitaryInput(drift));
        }
        p = p * (u * class_representative(a) * u.adjoint());
    }
    Ok((p - DMatrix::<C>::identity(n, n)).norm_squared())
}

/// Multistart search for a witness. Restarts run in order and stop at the
/// first residual below tolerance; each restart uses its own ChaCha stream,
/// so the outcome depends only on `cfg`.
pub fn decide(n: usize, marks: &[Vec<f64>], cfg: &OracleConfig) -> Result<Decision> {
    cfg.validate()?;
    check_marks(n, marks)?;
    if marks.is_empty() {
        return Err(Error::InvalidArgument("at least one point is required".into()));
    }
    let diag: Vec<Vec<f64>> = marks.iter().map(|a| eigenvalue_logs(a)).collect();
    let (us, restarts_run, iterations) = match n {
        2 => to_dynamic(search::<2>(&diag, cfg)),
        3 => to_dynamic(search::<3>(&diag, cfg)),
        4 => to_dynamic(search::<4>(&diag, cfg)),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "the oracle supports SU(2), SU(3) and SU(4), not SU({n})"
            )))
        }
    };
    let r = residual(n, marks, &us)?;
    Ok(Decision {
        verdict: if r < cfg.tolerance {
            Verdict::Member
        } else {
            Verdict::Unresolved
        },
        residual: r,
        witness: us,
        restarts_run,
        iterations,
    })
}

fn to_dynamic<const N: usize>(
    (us, restarts, iters): (Vec<SMatrix<C, N, N>>, usize, usize),
) -> (Vec<DMatrix<C>>, usize, usize) {
    let us = us
        .iter()
        .map(|u| DMatrix::from_iterator(N, N, u.iter().copied()))
        .collect();
    (us, restarts, iters)
}

/// Exact test for `SU(2)` with three points:
/// `|a_1 - a_2| ≤ a_3 ≤ min(a_1 + a_2, 2 - a_1 - a_2)`.
pub fn su2_closed_form(a1: &Q, a2: &Q, a3: &Q) -> bool {
    let diff = if a1 > a2 { a1 - a2 } else { a2 - a1 };
    let sum = a1 + a2;
    let two = Q::from_integer(2.into());
    diff <= *a3 && *a3 <= sum && *a3 <= two - sum
}

/// Alcove coordinates of the conjugacy class of a special unitary matrix.
pub fn alcove_from_unitary(u: &DMatrix<C>) -> Vec<f64> {
    let n = u.nrows();
    let eig = u
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let mut phases: Vec<f64> = eig
        .iter()
        .map(|z| z.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU)
        .map(|p| if p >= 1.0 { 0.0 } else { p })
        .collect();
    phases.sort_by(|a, b| b.total_cmp(a));
    // det = 1 makes the phase sum an integer m; unwinding the m largest
    // phases gives logs of total zero and spread at most one turn
    let m = phases.iter().sum::<f64>().round().clamp(0.0, n as f64) as usize;
    for p in phases.iter_mut().take(m) {
        *p -= 1.0;
    }
    phases.sort_by(|a, b| b.total_cmp(a));
    phases.windows(2).map(|w| (w[0] - w[1]).max(0.0)).collect()
}

/// A Haar-distributed element of `U(n)`.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> DMatrix<C> {
    let z = DMatrix::<C>::from_fn(n, n, |_, _| {
        C::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                C::one()
            } else {
                d / d.norm()
            }
        }),
    );
    q * DMatrix::from_diagonal(&phases)
}

/// A Haar-distributed element of `SU(n)`.
pub fn haar_special_unitary<R: Rng>(n: usize, rng: &mut R) -> DMatrix<C> {
    let u = haar_unitary(n, rng);
    let det = u.determinant();
    u * C::from_polar(1.0, -det.arg() / n as f64)
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

struct Problem<const N: usize> {
    d: Vec<SMatrix<C, N, N>>,
    /// A real basis of the skew-Hermitian matrices.
    basis: Vec<SMatrix<C, N, N>>,
}

impl<const N: usize> Problem<N> {
    fn new(d: Vec<SMatrix<C, N, N>>) -> Self {
        let mut basis = Vec::with_capacity(N * N);
        for j in 0..N {
            let mut e = SMatrix::<C, N, N>::zeros();
            e[(j, j)] = C::i();
            basis.push(e);
            for k in j + 1..N {
                let mut e = SMatrix::<C, N, N>::zeros();
                e[(j, k)] = C::one();
                e[(k, j)] = -C::one();
                basis.push(e);
                let mut e = SMatrix::<C, N, N>::zeros();
                e[(j, k)] = C::i();
                e[(k, j)] = C::i();
                basis.push(e);
            }
        }
        Problem { d, basis }
    }

    fn classes(&self, us: &[SMatrix<C, N, N>]) -> Vec<SMatrix<C, N, N>> {
        us.iter()
            .zip(&self.d)
            .map(|(u, d)| u * d * u.adjoint())
            .collect()
    }

    fn value(&self, us: &[SMatrix<C, N, N>]) -> f64 {
        let p = self
            .classes(us)
            .iter()
            .fold(SMatrix::<C, N, N>::identity(), |acc, c| acc * c);
        (p - SMatrix::<C, N, N>::identity()).norm_squared()
    }

    /// `R = Π C_i - I` and its derivatives along every basis direction of
    /// every free factor. Moving `U_i ← exp(tE)U_i` changes `C_i` by
    /// `t[E, C_i]`, so `dR = C_1⋯C_{i-1} [E, C_i] C_{i+1}⋯C_b`.
    fn linearize(&self, us: &[SMatrix<C, N, N>]) -> (SMatrix<C, N, N>, Vec<SMatrix<C, N, N>>) {
        let cs = self.classes(us);
        let b = cs.len();
        let id = SMatrix::<C, N, N>::identity();
        let mut prefix = Vec::with_capacity(b + 1);
        prefix.push(id);
        for c in &cs {
            let next = prefix.last().expect("nonempty") * c;
            prefix.push(next);
        }
        let mut suffix = vec![id; b + 1];
        for i in (0..b).rev() {
            suffix[i] = cs[i] * suffix[i + 1];
        }
        let mut cols = Vec::with_capacity(b.saturating_sub(1) * N * N);
        for i in 0..b.saturating_sub(1) {
            for e in &self.basis {
                cols.push(prefix[i] * (e * cs[i] - cs[i] * e) * suffix[i + 1]);
            }
        }
        (prefix[b] - id, cols)
    }

    fn step(&self, us: &[SMatrix<C, N, N>], delta: &[f64]) -> Vec<SMatrix<C, N, N>> {
        let m = self.basis.len();
        us.iter()
            .enumerate()
            .map(|(i, u)| {
                if (i + 1) * m > delta.len() {
                    return *u;
                }
                let x = self
                    .basis
                    .iter()
                    .zip(&delta[i * m..(i + 1) * m])
                    .fold(SMatrix::<C, N, N>::zeros(), |acc, (e, &t)| acc + e * C::from(t));
                expm(&x) * u
            })
            .collect()
    }
}

/// `exp(X)` by scaling and squaring a truncated Taylor series; adequate for
/// the small skew-Hermitian steps taken here.
fn expm<const N: usize>(x: &SMatrix<C, N, N>) -> SMatrix<C, N, N> {
    let norm = x.norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let a = x / C::from(2f64.powi(squarings as i32));
    let mut term = SMatrix::<C, N, N>::identity();
    let mut sum = term;
    for k in 1..=12 {
        term = term * a / C::from(k as f64);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Projects back onto `U(n)` by Gram-Schmidt on the columns.
fn reunitarize<const N: usize>(u: &SMatrix<C, N, N>) -> SMatrix<C, N, N> {
    let mut out = *u;
    for j in 0..N {
        for k in 0..j {
            let proj: C = (0..N).map(|i| out[(i, k)].conj() * out[(i, j)]).sum();
            for i in 0..N {
                let v = out[(i, k)];
                out[(i, j)] -= proj * v;
            }
        }
        let norm = (0..N).map(|i| out[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..N {
            out[(i, j)] /= C::from(norm);
        }
    }
    out
}

fn random_start<const N: usize>(b: usize, rng: &mut ChaCha8Rng) -> Vec<SMatrix<C, N, N>> {
    (0..b)
        .map(|i| {
            if i + 1 == b {
                SMatrix::identity()
            } else {
                let h = haar_unitary(N, rng);
                SMatrix::from_iterator(h.iter().copied())
            }
        })
        .collect()
}

const TARGET_FACTOR: f64 = 1e-4;
const STALL_WINDOW: usize = 10;
const STALL_RATIO: f64 = 1e-4;
const STEP_RATIO: f64 = 1e-6;
const MAX_DAMPING: f64 = 1e6;
const REUNITARIZE_EVERY: usize = 16;

/// One restart of Levenberg-Marquardt on `U(n)^{b-1}`: Gauss-Newton steps in
/// the tangent space, retracted by the matrix exponential, accepted only when
/// the residual decreases. Returns the final point, its value and the
/// iteration count.
fn descend<const N: usize>(
    prob: &Problem<N>,
    mut us: Vec<SMatrix<C, N, N>>,
    cfg: &OracleConfig,
) -> (Vec<SMatrix<C, N, N>>, f64, usize) {
    let target = cfg.tolerance * TARGET_FACTOR;
    let mut damping = 1e-3;
    let mut window_start = f64::INFINITY;
    let mut iters = 0;
    let (mut r, mut cols) = prob.linearize(&us);
    let mut f = r.norm_squared();
    while iters < cfg.max_iterations && f >= target && !cols.is_empty() {
        if iters % STALL_WINDOW == 0 {
            if f > window_start * (1.0 - STALL_RATIO) {
                break;
            }
            window_start = f;
        }
        iters += 1;
        let m = cols.len();
        let h = DMatrix::<f64>::from_fn(m, m, |k, l| cols[k].dotc(&cols[l]).re);
        let g = nalgebra::DVector::<f64>::from_fn(m, |k, _| cols[k].dotc(&r).re);
        if g.norm() < 1e-15 {
            break;
        }
        let accepted = loop {
            let mut damped = h.clone();
            for k in 0..m {
                damped[(k, k)] += damping;
            }
            let solved = damped.cholesky().map(|ch| -ch.solve(&g));
            if let Some(delta) = solved {
                let trial = prob.step(&us, delta.as_slice());
                let ft = prob.value(&trial);
                if ft < f {
                    damping = (damping / 3.0).max(1e-12);
                    break Some(trial);
                }
            }
            damping *= 4.0;
            if damping > MAX_DAMPING {
                break None;
            }
        };
        let Some(mut next) = accepted else { break };
        if iters % REUNITARIZE_EVERY == 0 {
            next.iter_mut().for_each(|u| *u = reunitarize(u));
        }
        us = next;
        let previous = f;
        (r, cols) = prob.linearize(&us);
        f = r.norm_squared();
        if previous - f < STEP_RATIO * previous && f > cfg.tolerance {
            break;
        }
    }
    us.iter_mut().for_each(|u| *u = reunitarize(u));
    let f = prob.value(&us);
    (us, f, iters)
}

fn search<const N: usize>(
    diag: &[Vec<f64>],
    cfg: &OracleConfig,
) -> (Vec<SMatrix<C, N, N>>, usize, usize) {
    let d = diag
        .iter()
        .map(|lam| {
            SMatrix::<C, N, N>::from_diagonal(&nalgebra::SVector::<C, N>::from_iterator(
                lam.iter().map(|&l| C::from_polar(1.0, std::f64::consts::TAU * l)),
            ))
        })
        .collect();
    let prob = Problem::new(d);
    let b = diag.len();
    let mut best: Option<(Vec<SMatrix<C, N, N>>, f64)> = None;
    let mut total = 0;
    let mut run = 0;
    for r in 0..cfg.restarts {
        run += 1;
        let mut rng = restart_rng(cfg.seed, r);
        let start = random_start::<N>(b, &mut rng);
        let (us, f, it) = descend(&prob, start, cfg);
        total += it;
        if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
            best = Some((us, f));
        }
        if best.as_ref().is_some_and(|(_, bf)| *bf < cfg.tolerance) {
            break;
        }
    }
    let (us, _) = best.expect("at least one restart");
    (us, run, total)
}
