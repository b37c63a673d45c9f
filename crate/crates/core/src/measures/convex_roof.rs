//! Direct minimization of `Σ pᵢ C²(ψᵢ)` over pure-state ensembles of a two-qubit ρ.
//!
//! With `ρ = Σₖ λₖ|vₖ⟩⟨vₖ|` (restricted to its support of rank r), every ensemble of
//! m members is `|wⱼ⟩ = Σₖ Uⱼₖ √λₖ |vₖ⟩` for an m×r isometry U. Member j then
//! contributes `|uⱼᵀ T uⱼ|² / pⱼ` with `Tₖₗ = √λₖ√λₗ vₖᵀ(σ_y⊗σ_y)vₗ` and
//! `pⱼ = Σₖ λₖ|Uⱼₖ|²`. The search sweeps over row pairs of U, applying the
//! 2×2 rotation `[[c, s e^{iφ}], [−s e^{−iφ}, c]]` that minimizes the two affected
//! terms. Row rotations act transitively on isometries, so the sweeps can reach
//! every decomposition with m members.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::herm_eig;
use crate::rng::task_rng;
use crate::search::golden_min;
use crate::states::{random_unitary, DensityMatrix};

use super::SUPPORT_CUTOFF;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexRoofConfig {
    pub restarts: usize,
    pub min_ensemble: usize,
    pub max_ensemble: usize,
    /// A restart stops once a full sweep improves the objective by less than this.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for ConvexRoofConfig {
    fn default() -> Self {
        Self { restarts: 32, min_ensemble: 4, max_ensemble: 8, tolerance: 1e-10, max_sweeps: 400, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexRoofResult {
    /// Best average squared concurrence found; an upper bound on the tangle.
    pub tangle: f64,
    pub ensemble_size: usize,
    pub best_restart: usize,
    /// False when the winning restart hit `max_sweeps` before meeting the tolerance.
    pub converged: bool,
}

/// Convex-roof tangle with the default configuration and `budget` restarts.
pub fn convex_roof_tangle(rho: &DensityMatrix, budget: usize) -> Result<ConvexRoofResult> {
    convex_roof_tangle_with(rho, &ConvexRoofConfig { restarts: budget, ..ConvexRoofConfig::default() })
}

struct Problem {
    rank: usize,
    weights: Vec<f64>,
    /// Row-major `rank × rank`, symmetric.
    t: Vec<Complex64>,
}

impl Problem {
    fn new(rho: &DensityMatrix) -> Result<(Self, Vec<Vec<Complex64>>)> {
        let eig = herm_eig(rho.matrix())?;
        let mut weights = Vec::new();
        let mut vectors = Vec::new();
        for (j, &l) in eig.eigenvalues.iter().enumerate() {
            if l > SUPPORT_CUTOFF {
                weights.push(l);
                vectors.push(eig.eigenvector(j));
            }
        }
        let rank = weights.len();
        let flip = |v: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); 4];
            for (b, a) in v.iter().enumerate() {
                let sign = if b.count_ones() % 2 == 0 { -1.0 } else { 1.0 };
                out[b ^ 3] = a * sign;
            }
            out
        };
        let flipped: Vec<Vec<Complex64>> = vectors.iter().map(|v| flip(v)).collect();
        let mut t = vec![Complex64::new(0.0, 0.0); rank * rank];
        for i in 0..rank {
            for j in 0..rank {
                let s: Complex64 = vectors[i].iter().zip(&flipped[j]).map(|(a, b)| a * b).sum();
                t[i * rank + j] = s * (weights[i] * weights[j]).sqrt();
            }
        }
        Ok((Self { rank, weights, t }, vectors))
    }

    /// `uᵀ T v`.
    fn bilinear(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let r = self.rank;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..r {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..r {
                row += self.t[i * r + j] * v[j];
            }
            acc += u[i] * row;
        }
        acc
    }

    fn weight(&self, u: &[Complex64]) -> f64 {
        u.iter().zip(&self.weights).map(|(a, l)| a.norm_sqr() * l).sum()
    }

    fn term(&self, u: &[Complex64]) -> f64 {
        term(self.bilinear(u, u), self.weight(u))
    }
}

fn term(q: Complex64, p: f64) -> f64 {
    // |q| <= p, so vanishing weights contribute nothing.
    if p <= 1e-300 {
        0.0
    } else {
        q.norm_sqr() / p
    }
}

/// Two-row subproblem in closed form.
struct PairTerms {
    taa: Complex64,
    tab: Complex64,
    tbb: Complex64,
    pa: f64,
    pb: f64,
    cross: Complex64,
}

impl PairTerms {
    fn value(&self, theta: f64, phi: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let z = Complex64::from_polar(1.0, phi);
        let zc = z.conj();
        let cs = c * s;
        let mix = 2.0 * cs * (z * self.cross).re;
        let qa = self.taa * (c * c) + self.tab * (2.0 * cs) * z + self.tbb * (s * s) * z * z;
        let qb = self.taa * (s * s) * zc * zc - self.tab * (2.0 * cs) * zc + self.tbb * (c * c);
        let pa = c * c * self.pa + s * s * self.pb + mix;
        let pb = s * s * self.pa + c * c * self.pb - mix;
        term(qa, pa) + term(qb, pb)
    }
}

struct RestartOutcome {
    value: f64,
    converged: bool,
}

fn run_restart(problem: &Problem, m: usize, seed: u64, index: usize, cfg: &ConvexRoofConfig) -> RestartOutcome {
    use std::f64::consts::{FRAC_PI_2, PI};

    let r = problem.rank;
    let mut rng = task_rng(seed, index as u64);
    let u = random_unitary(m, &mut rng);
    let mut rows: Vec<Vec<Complex64>> = (0..m).map(|j| (0..r).map(|k| u[(j, k)]).collect()).collect();
    let mut terms: Vec<f64> = rows.iter().map(|row| problem.term(row)).collect();
    let mut value: f64 = terms.iter().sum();

    const THETA_GRID: usize = 12;
    const PHI_GRID: usize = 8;
    let dtheta = PI / THETA_GRID as f64;
    let dphi = 2.0 * PI / PHI_GRID as f64;

    for _ in 0..cfg.max_sweeps {
        let before = value;
        for p in 0..m {
            for q in (p + 1)..m {
                let (a, b) = (&rows[p], &rows[q]);
                let pair = PairTerms {
                    taa: problem.bilinear(a, a),
                    tab: problem.bilinear(a, b),
                    tbb: problem.bilinear(b, b),
                    pa: problem.weight(a),
                    pb: problem.weight(b),
                    cross: a.iter().zip(b).zip(&problem.weights).map(|((x, y), l)| x.conj() * y * l).sum(),
                };
                let current = terms[p] + terms[q];

                let (mut theta, mut phi, mut best) = (0.0, 0.0, pair.value(0.0, 0.0));
                for i in 0..THETA_GRID {
                    let th = -FRAC_PI_2 + (i as f64 + 0.5) * dtheta;
                    for k in 0..PHI_GRID {
                        let ph = k as f64 * dphi;
                        let v = pair.value(th, ph);
                        if v < best {
                            (theta, phi, best) = (th, ph, v);
                        }
                    }
                }
                let (mut wt, mut wp) = (dtheta, dphi);
                for _ in 0..3 {
                    let (th, v) = golden_min(|x| pair.value(x, phi), theta - wt, theta + wt, 1e-10);
                    if v < best {
                        (theta, best) = (th, v);
                    }
                    let (ph, v) = golden_min(|x| pair.value(theta, x), phi - wp, phi + wp, 1e-10);
                    if v < best {
                        (phi, best) = (ph, v);
                    }
                    wt *= 0.5;
                    wp *= 0.5;
                }
                if best < current - 1e-15 {
                    let (s, c) = theta.sin_cos();
                    let z = Complex64::from_polar(1.0, phi);
                    let new_a: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * c + y * z * s).collect();
                    let new_b: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| y * c - x * z.conj() * s).collect();
                    terms[p] = problem.term(&new_a);
                    terms[q] = problem.term(&new_b);
                    rows[p] = new_a;
                    rows[q] = new_b;
                }
            }
        }
        value = terms.iter().sum();
        if before - value < cfg.tolerance {
            return RestartOutcome { value, converged: true };
        }
    }
    RestartOutcome { value, converged: false }
}

/// Searches ensembles of sizes `min_ensemble..=max_ensemble` (cycled over restarts)
/// and returns the smallest average squared concurrence found.
pub fn convex_roof_tangle_with(rho: &DensityMatrix, cfg: &ConvexRoofConfig) -> Result<ConvexRoofResult> {
    if rho.n_qubits() != 2 {
        return Err(Error::Parameter(format!("convex-roof tangle needs 2 qubits, got {}", rho.n_qubits())));
    }
    if cfg.restarts == 0 || cfg.min_ensemble == 0 || cfg.max_ensemble < cfg.min_ensemble {
        return Err(Error::Parameter("convex-roof configuration needs restarts and a valid ensemble range".into()));
    }
    let (problem, _) = Problem::new(rho)?;
    if problem.rank <= 1 {
        // A pure state has a single decomposition.
        let value = if problem.rank == 1 { problem.t[0].norm_sqr() / problem.weights[0] } else { 0.0 };
        return Ok(ConvexRoofResult { tangle: value, ensemble_size: 1, best_restart: 0, converged: true });
    }
    let span = cfg.max_ensemble - cfg.min_ensemble + 1;
    let outcomes: Vec<(usize, usize, RestartOutcome)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let m = (cfg.min_ensemble + k % span).max(problem.rank);
            (k, m, run_restart(&problem, m, cfg.seed, k, cfg))
        })
        .collect();
    let (best_restart, ensemble_size, best) = outcomes
        .into_iter()
        .min_by(|a, b| a.2.value.total_cmp(&b.2.value).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    Ok(ConvexRoofResult { tangle: best.value, ensemble_size, best_restart, converged: best.converged })
}
