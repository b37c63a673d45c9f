//! Best separable approximation of a two-qubit state.
//!
//! Finds `ρ = λ ρ_s + (1 − λ)|ψ_e⟩⟨ψ_e|` with `ρ_s` separable and `λ` maximal.
//! For two qubits separability of `ρ_s` is equivalent to `ρ_s ≥ 0` and
//! `ρ_s^Γ ≥ 0`, which is the certificate used here.
//!
//! `ψ_e` must lie in the range of ρ, so it is written as `Σₖ cₖ vₖ` over the
//! eigenvectors of ρ with nonzero weight. For fixed `ψ_e` the removable weight
//! `t = 1 − λ` is bounded above by `t_psd = 1 / Σₖ |cₖ|²/λₖ` (positivity) and
//! below by the smallest `t` with `(ρ − tP)^Γ ≥ 0`. The map `t ↦ λ_min((ρ − tP)^Γ)`
//! is concave, so that lower bound is found by bisection once any feasible `t`
//! is known.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, min_eigenvalue, partial_transpose, ComplexMatrix};
use crate::measures::{
    concurrence_pure, ppt_min_eigenvalue, spin_flip_matrix, tangle, tr_rho_rhotilde, wootters_concurrence, SpinFlip,
    SUPPORT_CUTOFF,
};
use crate::relations::{RelationReport, Terms, IDENTITY_TOL};
use crate::rng::{task_rng, StateRng};
use crate::search::{bisect_first_true, golden_min};
use crate::states::{DensityMatrix, PureState};

/// PPT inputs at or above this minimum eigenvalue take the `λ = 1` path.
pub const PPT_FAST_PATH: f64 = -1e-9;
/// Bracket width for the inner search on `t = 1 − λ`.
pub const BISECTION_TOL: f64 = 1e-9;
/// Tolerance for the optimality relations `eq23` and `eq24`.
pub const OPTIMALITY_TOL: f64 = 1e-3;
/// Reconstruction tolerance accepted by [`verify_ls`].
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

const CHOLESKY_SHIFT: f64 = 1e-12;
const MIN_STEP: f64 = 1e-8;
const MAX_EVALUATIONS: usize = 40_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    /// Minimum eigenvalue of `ρ_s`.
    pub residual_min_eig: f64,
    /// Minimum eigenvalue of `ρ_s^Γ`.
    pub residual_ppt_min_eig: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsDecomposition {
    pub lambda: f64,
    /// Absent when ρ is separable.
    pub psi_e: Option<PureState>,
    /// Absent when `λ = 0`.
    pub rho_s: Option<DensityMatrix>,
    pub certificates: Certificates,
    pub converged: bool,
    pub best_restart: usize,
}

impl LsDecomposition {
    /// `λ ρ_s + (1 − λ)|ψ_e⟩⟨ψ_e|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4);
        if let Some(rs) = &self.rho_s {
            out = &out + &rs.matrix().scale_real(self.lambda);
        }
        if let Some(psi) = &self.psi_e {
            out = &out + &psi.projector().scale_real(1.0 - self.lambda);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsConfig {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for LsConfig {
    fn default() -> Self {
        Self { restarts: 64, seed: 0 }
    }
}

struct Support {
    weights: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl Support {
    fn of(rho: &DensityMatrix) -> Result<Self> {
        let eig = herm_eig(rho.matrix())?;
        let mut weights = Vec::new();
        let mut vectors = Vec::new();
        for (j, &l) in eig.eigenvalues.iter().enumerate() {
            if l > SUPPORT_CUTOFF {
                weights.push(l);
                vectors.push(eig.eigenvector(j));
            }
        }
        Ok(Self { weights, vectors })
    }

    fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Normalized `ψ = Σ cₖ vₖ` and `t_psd` for coefficients packed as `[re, im, ...]`.
    fn state(&self, x: &[f64]) -> Option<(Vec<Complex64>, f64)> {
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if !(norm2 > 1e-300) {
            return None;
        }
        let scale = norm2.sqrt().recip();
        let mut psi = vec![Complex64::new(0.0, 0.0); 4];
        let mut inv = 0.0;
        for (k, v) in self.vectors.iter().enumerate() {
            let c = Complex64::new(x[2 * k], x[2 * k + 1]) * scale;
            inv += c.norm_sqr() / self.weights[k];
            for (p, a) in psi.iter_mut().zip(v) {
                *p += c * a;
            }
        }
        Some((psi, 1.0 / inv))
    }
}

/// Dense row-major 4×4 matrix used in the inner loop.
type M4 = [Complex64; 16];

fn to_m4(m: &ComplexMatrix) -> M4 {
    let mut out = [Complex64::new(0.0, 0.0); 16];
    out.copy_from_slice(m.entries());
    out
}

/// Partial transpose on qubit 0 of `|ψ⟩⟨ψ|`.
fn projector_pt(psi: &[Complex64]) -> M4 {
    let mut out = [Complex64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            let (r, c) = ((i & 1) | (j & 2), (j & 1) | (i & 2));
            out[i * 4 + j] = psi[r] * psi[c].conj();
        }
    }
    out
}

fn shifted(a: &M4, b: &M4, t: f64) -> M4 {
    let mut out = *a;
    for (o, x) in out.iter_mut().zip(b) {
        *o -= x * t;
    }
    out
}

/// Cholesky test of `m + shift·I` without allocation.
fn positive_definite(m: &M4, shift: f64) -> bool {
    let mut l = [Complex64::new(0.0, 0.0); 16];
    for j in 0..4 {
        let mut d = m[j * 4 + j].re + shift;
        for k in 0..j {
            d -= l[j * 4 + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j * 4 + j] = Complex64::new(d, 0.0);
        for i in (j + 1)..4 {
            let mut s = m[i * 4 + j];
            for k in 0..j {
                s -= l[i * 4 + k] * l[j * 4 + k].conj();
            }
            l[i * 4 + j] = s / d;
        }
    }
    true
}

/// Smallest feasible `t` for a fixed `ψ`, or the largest reachable value of
/// `λ_min((ρ − tP)^Γ)` when no `t ∈ [0, t_psd]` is feasible.
enum Inner {
    Feasible(f64),
    /// `(t_peak, λ_min at t_peak)`.
    Infeasible(f64, f64),
}

const PENALTY_TOL: f64 = 1e-7;
const PENALTY_WEIGHT: f64 = 100.0;

fn inner_search(rho_pt: &M4, psi: &[Complex64], t_psd: f64) -> Inner {
    let p_pt = projector_pt(psi);
    let feasible = |t: f64| positive_definite(&shifted(rho_pt, &p_pt, t), CHOLESKY_SHIFT);
    if feasible(0.0) {
        return Inner::Feasible(0.0);
    }
    if feasible(t_psd) {
        return Inner::Feasible(bisect_first_true(feasible, 0.0, t_psd, BISECTION_TOL));
    }
    let h = |t: f64| {
        let m = ComplexMatrix::new(4, shifted(rho_pt, &p_pt, t).to_vec()).expect("4x4");
        min_eigenvalue(&m).map(|v| -v).unwrap_or(f64::INFINITY)
    };
    let (t_peak, neg) = golden_min(h, 0.0, t_psd, PENALTY_TOL);
    if feasible(t_peak) {
        Inner::Feasible(bisect_first_true(feasible, 0.0, t_peak, BISECTION_TOL))
    } else {
        Inner::Infeasible(t_peak, -neg)
    }
}

/// Search score: `t` when feasible, otherwise `t_peak` plus a steep penalty on
/// the PPT violation, which is continuous across the feasibility boundary.
fn score(support: &Support, rho_pt: &M4, x: &[f64]) -> f64 {
    match support.state(x) {
        None => f64::INFINITY,
        Some((psi, t_psd)) => match inner_search(rho_pt, &psi, t_psd.min(1.0)) {
            Inner::Feasible(t) => t,
            Inner::Infeasible(t_peak, h) => t_peak + PENALTY_WEIGHT * (-h).max(0.0),
        },
    }
}

struct RestartOutcome {
    x: Vec<f64>,
    converged: bool,
}

/// Random orthonormal basis of `R^dim`.
fn random_basis(dim: usize, rng: &mut StateRng) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

/// Score of `x` if it beats a feasible incumbent `best`, else `None`.
///
/// Most polls fail, so a single factorization at `t = best` rejects them:
/// past the positivity bound the full search is needed, otherwise an
/// infeasible `best` means no smaller feasible `t` on the rising side of the
/// concave PPT margin.
fn improves(support: &Support, rho_pt: &M4, x: &[f64], best: f64) -> Option<f64> {
    let (psi, t_psd) = support.state(x)?;
    let t_psd = t_psd.min(1.0);
    if best <= t_psd {
        let p_pt = projector_pt(&psi);
        let feasible = |t: f64| positive_definite(&shifted(rho_pt, &p_pt, t), CHOLESKY_SHIFT);
        if !feasible(best) {
            return None;
        }
        let t = if feasible(0.0) { 0.0 } else { bisect_first_true(feasible, 0.0, best, BISECTION_TOL) };
        return (t < best).then_some(t);
    }
    let s = score(support, rho_pt, x);
    (s < best).then_some(s)
}

/// Direct search polling `±step` along a fresh random orthonormal basis each
/// round; the step halves after a round without improvement.
fn pattern_search(support: &Support, rho_pt: &M4, mut x: Vec<f64>, rng: &mut StateRng) -> RestartOutcome {
    let normalize = |x: &mut Vec<f64>| {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= n);
    };
    normalize(&mut x);
    let mut best = score(support, rho_pt, &x);
    let mut step = 0.25;
    let mut evaluations = 1;
    while step >= MIN_STEP {
        if evaluations >= MAX_EVALUATIONS {
            return RestartOutcome { x, converged: false };
        }
        let mut improved = false;
        for d in random_basis(x.len(), rng) {
            for sign in [1.0, -1.0] {
                let mut trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + sign * step * b).collect();
                normalize(&mut trial);
                evaluations += 1;
                let candidate = if best <= 1.0 {
                    improves(support, rho_pt, &trial, best)
                } else {
                    let s = score(support, rho_pt, &trial);
                    (s < best).then_some(s)
                };
                if let Some(s) = candidate {
                    best = s;
                    x = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    RestartOutcome { x, converged: true }
}

/// Product vectors `αv₁ + βv₂` in a two-dimensional span, as coordinates `(α, β)`.
///
/// Reshaping a two-qubit vector to a 2×2 matrix, product vectors are those with
/// zero determinant, a quadratic in `α/β`.
fn product_coordinates(v1: &[Complex64], v2: &[Complex64]) -> Vec<[Complex64; 2]> {
    let det = |m: &[Complex64]| m[0] * m[3] - m[1] * m[2];
    let qa = det(v1);
    let qc = det(v2);
    let qb = v1[0] * v2[3] + v2[0] * v1[3] - v1[1] * v2[2] - v2[1] * v1[2];
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let scale = qa.norm().max(qb.norm()).max(qc.norm());
    if scale < 1e-14 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if qa.norm() <= 1e-14 * scale {
        // Degree drops: β = 0 is a root.
        roots.push([one, zero]);
        if qb.norm() > 1e-14 * scale {
            roots.push([-qc / qb, one]);
        }
    } else {
        let disc = (qb * qb - qa * qc * 4.0).sqrt();
        roots.push([(-qb + disc) / (qa * 2.0), one]);
        if disc.norm() > 1e-12 * scale {
            roots.push([(-qb - disc) / (qa * 2.0), one]);
        }
    }
    roots
        .into_iter()
        .map(|[a, b]| {
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            [a / n, b / n]
        })
        .collect()
}

/// Closed-form optimum for rank two.
///
/// A separable state supported in the range of ρ mixes only the product vectors
/// of that range, so the remainder is `a|φ₁⟩⟨φ₁| + b|φ₂⟩⟨φ₂|`. With
/// `R = diag(λ₁, λ₂)` in the eigenbasis and `wᵢ = R^{-1/2} uᵢ`, positivity of
/// `R − aφ₁φ₁† − bφ₂φ₂†` with zero determinant traces the boundary
/// `b(a) = (1 − aA) / (B − aG)`, along which `a + b` is maximized.
fn rank_two_optimum(support: &Support) -> Option<(PureState, f64)> {
    let (v1, v2) = (&support.vectors[0], &support.vectors[1]);
    let products = product_coordinates(v1, v2);
    if products.is_empty() {
        return None;
    }
    let (l1, l2) = (support.weights[0], support.weights[1]);
    let whiten = |u: &[Complex64; 2]| [u[0] / l1.sqrt(), u[1] / l2.sqrt()];
    let w: Vec<[Complex64; 2]> = products.iter().map(whiten).collect();
    let norm_sq = |x: &[Complex64; 2]| x[0].norm_sqr() + x[1].norm_sqr();
    let (a, b) = if w.len() == 1 {
        (1.0 / norm_sq(&w[0]), 0.0)
    } else {
        let (big_a, big_b) = (norm_sq(&w[0]), norm_sq(&w[1]));
        let overlap = (w[0][0].conj() * w[1][0] + w[0][1].conj() * w[1][1]).norm_sqr();
        let g = (big_a * big_b - overlap).max(0.0);
        let b_of = |a: f64| ((1.0 - a * big_a) / (big_b - a * g)).max(0.0);
        let (a, neg) = golden_min(|a| -(a + b_of(a)), 0.0, 1.0 / big_a, 1e-14);
        let (a, _) = [(0.0, -b_of(0.0)), (1.0 / big_a, -1.0 / big_a), (a, neg)]
            .into_iter()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("candidates");
        (a, b_of(a))
    };
    // Remainder in eigenbasis coordinates, then its dominant direction.
    let weights = [a, b];
    let mut r = [[Complex64::new(l1, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(l2, 0.0)]];
    for (u, wt) in products.iter().zip(weights) {
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] -= u[i] * u[j].conj() * wt;
            }
        }
    }
    let m = ComplexMatrix::new(2, vec![r[0][0], r[0][1], r[1][0], r[1][1]]).ok()?;
    let eig = herm_eig(&m.hermitian_part()).ok()?;
    let t = eig.eigenvalues[0].max(0.0);
    let c = eig.eigenvector(0);
    let psi: Vec<Complex64> = (0..4).map(|i| c[0] * v1[i] + c[1] * v2[i]).collect();
    Some((PureState::normalized(psi).ok()?, t.min(1.0)))
}

/// Decomposition with a given pure part and weight `t = 1 − λ`, with certificates
/// computed on the remainder. No feasibility is required.
pub fn decompose_with(rho: &DensityMatrix, psi_e: &PureState, t: f64) -> Result<LsDecomposition> {
    if rho.n_qubits() != 2 || psi_e.n_qubits() != 2 {
        return Err(Error::Parameter("decomposition needs two-qubit inputs".into()));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("pure weight {t} outside [0, 1]")));
    }
    let lambda = 1.0 - t;
    let remainder = (rho.matrix() - &psi_e.projector().scale_real(t)).hermitian_part();
    let (rho_s, certificates) = if lambda > 0.0 {
        let rs = remainder.scale_real(1.0 / lambda);
        let certificates = Certificates {
            residual_min_eig: min_eigenvalue(&rs)?,
            residual_ppt_min_eig: min_eigenvalue(&partial_transpose(&rs, 2, 0)?)?,
        };
        (Some(DensityMatrix::from_matrix_unchecked(rs)), certificates)
    } else {
        (None, Certificates { residual_min_eig: 0.0, residual_ppt_min_eig: 0.0 })
    };
    Ok(LsDecomposition { lambda, psi_e: Some(psi_e.clone()), rho_s, certificates, converged: true, best_restart: 0 })
}

/// Smallest pure weight `t` such that `ρ − t|ψ⟩⟨ψ|` is a separable (unnormalized) state,
/// or `None` if no such `t ≤ 1` exists.
pub fn minimal_pure_weight(rho: &DensityMatrix, psi: &PureState) -> Result<Option<f64>> {
    let support = Support::of(rho)?;
    // Coefficients of ψ in the support; any component outside it makes every t > 0 infeasible.
    let mut x = Vec::with_capacity(2 * support.rank());
    let mut captured = 0.0;
    for v in &support.vectors {
        let c: Complex64 = v.iter().zip(psi.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        captured += c.norm_sqr();
        x.extend([c.re, c.im]);
    }
    let rho_pt = to_m4(&partial_transpose(rho.matrix(), 2, 0)?);
    if (1.0 - captured).abs() > 1e-10 {
        return Ok(positive_definite(&rho_pt, CHOLESKY_SHIFT).then_some(0.0));
    }
    Ok(match support.state(&x) {
        Some((psi_in, t_psd)) => match inner_search(&rho_pt, &psi_in, t_psd.min(1.0)) {
            Inner::Feasible(t) => Some(t),
            Inner::Infeasible(..) => None,
        },
        None => None,
    })
}

pub fn best_separable_approximation(rho: &DensityMatrix, budget: usize) -> Result<LsDecomposition> {
    best_separable_approximation_with(rho, &LsConfig { restarts: budget, ..LsConfig::default() })
}

/// Maximizes the separable weight by pattern search over `ψ_e` with random restarts.
///
/// Restarts run in parallel; the winner is the smallest pure weight, ties broken
/// by restart index.
pub fn best_separable_approximation_with(rho: &DensityMatrix, cfg: &LsConfig) -> Result<LsDecomposition> {
    if rho.n_qubits() != 2 {
        return Err(Error::Parameter(format!("separable approximation needs 2 qubits, got {}", rho.n_qubits())));
    }
    if cfg.restarts == 0 {
        return Err(Error::Parameter("separable approximation needs at least one restart".into()));
    }
    if ppt_min_eigenvalue(rho)? >= PPT_FAST_PATH {
        let certificates = Certificates {
            residual_min_eig: min_eigenvalue(rho.matrix())?,
            residual_ppt_min_eig: ppt_min_eigenvalue(rho)?,
        };
        return Ok(LsDecomposition {
            lambda: 1.0,
            psi_e: None,
            rho_s: Some(rho.clone()),
            certificates,
            converged: true,
            best_restart: 0,
        });
    }
    let support = Support::of(rho)?;
    if support.rank() == 1 {
        let psi_e = PureState::from_normalized_unchecked(support.vectors[0].clone());
        return decompose_with(rho, &psi_e, 1.0);
    }
    if support.rank() == 2 {
        if let Some((psi_e, t)) = rank_two_optimum(&support) {
            return decompose_with(rho, &psi_e, t);
        }
    }
    let rho_pt = to_m4(&partial_transpose(rho.matrix(), 2, 0)?);
    let dim = 2 * support.rank();
    let outcomes: Vec<(usize, RestartOutcome)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = task_rng(cfg.seed, k as u64);
            let x: Vec<f64> = if k == 0 {
                let mut x = vec![0.0; dim];
                x[0] = 1.0;
                x
            } else {
                (0..dim).map(|_| rng.sample(StandardNormal)).collect()
            };
            (k, pattern_search(&support, &rho_pt, x, &mut rng))
        })
        .collect();
    // Feasible restarts rank ahead of infeasible ones.
    let ranked = outcomes.into_iter().map(|(k, o)| {
        let (psi, t_psd) = support.state(&o.x).expect("nonzero coefficients");
        let (infeasible, t) = match inner_search(&rho_pt, &psi, t_psd.min(1.0)) {
            Inner::Feasible(t) => (false, t),
            Inner::Infeasible(..) => (true, t_psd.min(1.0)),
        };
        (k, o.converged, psi, infeasible, t)
    });
    let (best_restart, converged, psi, infeasible, t) = ranked
        .min_by(|a, b| a.3.cmp(&b.3).then(a.4.total_cmp(&b.4)).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    let psi_e = PureState::from_normalized_unchecked(psi);
    let mut out = decompose_with(rho, &psi_e, t)?;
    out.converged = converged && !infeasible;
    out.best_restart = best_restart;
    Ok(out)
}

/// `eq22`, `eq23` and `eq24` for a decomposition of ρ.
///
/// `eq22` expands `Tr(ρρ̃)` over the decomposition and holds for any valid one;
/// `eq23` and `eq24` hold only at the optimum and use [`OPTIMALITY_TOL`].
pub fn verify_ls(rho: &DensityMatrix, lsd: &LsDecomposition) -> Result<Vec<RelationReport>> {
    let gap = (rho.matrix() - &lsd.reconstruct()).frobenius_norm();
    if gap > RECONSTRUCTION_TOL {
        return Err(Error::Inconsistent(format!("decomposition misses ρ by {gap:.3e} in Frobenius norm")));
    }
    let l = lsd.lambda;
    let separable_term = match &lsd.rho_s {
        Some(rs) => l * l * tr_rho_rhotilde(rs),
        None => 0.0,
    };
    let (cross_term, overlap_sq, c_pure) = match &lsd.psi_e {
        Some(psi) => {
            let flipped = psi.spin_flip();
            let cross = match &lsd.rho_s {
                Some(rs) => {
                    let v = rs.matrix().mul_vec(flipped.amplitudes());
                    let expectation: Complex64 = flipped.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    2.0 * l * (1.0 - l) * expectation.re
                }
                None => 0.0,
            };
            let overlap = psi.inner(&flipped).norm_sqr();
            (cross, (1.0 - l) * (1.0 - l) * overlap, concurrence_pure(psi)?)
        }
        None => (0.0, 0.0, 0.0),
    };
    let direct = rho.matrix().trace_product(&spin_flip_matrix(rho.matrix())).re;
    let c = wootters_concurrence(rho)?;
    let tau = tangle(rho)?;
    Ok(vec![
        RelationReport::equality(
            "eq22",
            Terms::new()
                .with("separable_term", separable_term)
                .with("cross_term", cross_term)
                .with("pure_term", overlap_sq)
                .with("tr_rho_rhotilde", direct),
            separable_term + cross_term + overlap_sq,
            direct,
            IDENTITY_TOL,
        ),
        RelationReport::equality(
            "eq23",
            Terms::new().with("concurrence", c).with("lambda", l).with("concurrence_pure", c_pure),
            c,
            (1.0 - l) * c_pure,
            OPTIMALITY_TOL,
        ),
        RelationReport::equality(
            "eq24",
            Terms::new().with("tangle", tau).with("weighted_overlap_sq", overlap_sq),
            tau,
            overlap_sq,
            OPTIMALITY_TOL,
        ),
    ])
}
