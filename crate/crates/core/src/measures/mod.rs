//! Scalar measures of multi-qubit states.
//!
//! Two-qubit tangles for mixed states use the closed-form concurrence
//! `C = max(0, √μ₁ − √μ₂ − √μ₃ − √μ₄)`, with `μ` the descending spectrum of
//! `√ρ ρ̃ √ρ`. The convex-roof minimization in [`convex_roof`] is kept as an
//! independent upper-bound check on that identification.

pub mod convex_roof;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, hs_distance, min_eigenvalue, partial_transpose, psd_sqrt, ComplexMatrix};
use crate::states::{DensityMatrix, PureState};

pub use convex_roof::{convex_roof_tangle, convex_roof_tangle_with, ConvexRoofConfig, ConvexRoofResult};

/// Eigenvalues of ρ at or below this are treated as outside its support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Separable-uncertainty values in `[-ETA_NOISE, 0)` are reported as zero.
pub const ETA_NOISE: f64 = 1e-8;
/// Tolerance used when reconciling the two residual-tangle forms.
pub const RESIDUAL_TANGLE_TOL: f64 = 1e-8;

fn require_qubits(n: usize, expected: usize, what: &str) -> Result<()> {
    if n != expected {
        return Err(Error::Parameter(format!("{what} needs {expected} qubits, got {n}")));
    }
    Ok(())
}

fn parity_sign(bits: usize) -> f64 {
    if bits.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The spin-flip map: `σ_y^{⊗n} ψ*` for vectors and `σ_y^{⊗n} ρ* σ_y^{⊗n}` for density matrices.
pub trait SpinFlip: Sized {
    fn spin_flip(&self) -> Self;
}

impl SpinFlip for PureState {
    fn spin_flip(&self) -> Self {
        // σ_y^{⊗n}|b⟩ = iⁿ (−1)^{|b|} |b̄⟩
        let amps = self.amplitudes();
        let n = self.n_qubits();
        let mask = amps.len() - 1;
        let phase = Complex64::i().powu(n as u32);
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (b, a) in amps.iter().enumerate() {
            out[b ^ mask] = phase * parity_sign(b) * a.conj();
        }
        PureState::from_normalized_unchecked(out)
    }
}

impl SpinFlip for DensityMatrix {
    fn spin_flip(&self) -> Self {
        DensityMatrix::from_matrix_unchecked(spin_flip_matrix(self.matrix()))
    }
}

/// `ρ̃[ā, b̄] = (−1)^{|a|+|b|} ρ[a, b]*`, the entrywise form of `σ_y^{⊗n} ρ* σ_y^{⊗n}`.
pub fn spin_flip_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    let mask = m.dim() - 1;
    ComplexMatrix::from_fn(m.dim(), |i, j| {
        let (a, b) = (i ^ mask, j ^ mask);
        m[(a, b)].conj() * parity_sign(a ^ b)
    })
}

/// Coherence, predictability and their mean square for one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitProperties {
    pub coherence: f64,
    pub predictability: f64,
    pub s2bar: f64,
}

impl SingleQubitProperties {
    fn from_entries(rho00: f64, rho11: f64, rho10: Complex64) -> Self {
        let coherence = 2.0 * rho10.norm();
        let predictability = (rho00 - rho11).abs();
        let s2bar = 0.5 * (coherence * coherence + predictability * predictability);
        Self { coherence, predictability, s2bar }
    }
}

/// `ν = 2|Tr(ρ σ₊)| = 2|ρ₁₀|`, `p = |Tr(ρ σ_z)|`, `S̄² = (ν² + p²)/2` for a single-qubit state.
pub fn single_qubit_properties(rho_k: &DensityMatrix) -> Result<SingleQubitProperties> {
    require_qubits(rho_k.n_qubits(), 1, "single-qubit properties")?;
    let m = rho_k.matrix();
    Ok(SingleQubitProperties::from_entries(m[(0, 0)].re, m[(1, 1)].re, m[(1, 0)]))
}

/// Properties of every single-qubit marginal, in qubit order.
pub fn per_qubit_properties(rho: &DensityMatrix) -> Result<Vec<SingleQubitProperties>> {
    (0..rho.n_qubits()).map(|k| single_qubit_properties(&rho.marginal(&[k])?)).collect()
}

/// Linear entropy `1 − Tr ρ²`.
pub fn mixedness(rho: &DensityMatrix) -> f64 {
    1.0 - rho.matrix().entries().iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// `|⟨ψ|ψ̃⟩|` for two qubits.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    require_qubits(psi.n_qubits(), 2, "pure-state concurrence")?;
    Ok(psi.inner(&psi.spin_flip()).norm())
}

/// `y ↦ (σ_y ⊗ σ_y) y` for a two-qubit vector.
fn apply_yy(v: &[Complex64]) -> [Complex64; 4] {
    // σ_y⊗σ_y = −(−1)^{|b|} |b̄⟩⟨b|
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (b, a) in v.iter().enumerate() {
        out[b ^ 3] = -parity_sign(b) * a;
    }
    out
}

/// Descending eigenvalues of `√ρ ρ̃ √ρ`, padded with zeros to length 4.
///
/// The product is formed in the eigenbasis of ρ restricted to eigenvalues above
/// [`SUPPORT_CUTOFF`], where it equals `T†T` with `Tᵢⱼ = √λᵢ√λⱼ vᵢᵀ(σ_y⊗σ_y)vⱼ`.
/// Dropping round-off eigenvalues keeps rank-deficient inputs from leaking
/// `√ε`-sized noise into the concurrence.
pub fn wootters_eigenvalues(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_qubits(rho.n_qubits(), 2, "Wootters concurrence")?;
    let eig = herm_eig(rho.matrix())?;
    let support: Vec<(f64, Vec<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > SUPPORT_CUTOFF)
        .map(|(j, &l)| (l, eig.eigenvector(j)))
        .collect();
    let r = support.len();
    let mut out = [0.0; 4];
    if r == 0 {
        return Ok(out);
    }
    let flipped: Vec<[Complex64; 4]> = support.iter().map(|(_, v)| apply_yy(v)).collect();
    let t = ComplexMatrix::from_fn(r, |i, j| {
        let s: Complex64 = support[i].1.iter().zip(&flipped[j]).map(|(a, b)| a * b).sum();
        s * (support[i].0 * support[j].0).sqrt()
    });
    let tt = &t.adjoint() * &t;
    let mu = herm_eig(&tt)?.eigenvalues;
    for (slot, m) in out.iter_mut().zip(mu) {
        *slot = m.max(0.0);
    }
    Ok(out)
}

/// Descending eigenvalues of `√ρ ρ̃ √ρ` formed explicitly with a matrix square root.
pub fn wootters_eigenvalues_direct(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_qubits(rho.n_qubits(), 2, "Wootters concurrence")?;
    let root = psd_sqrt(rho.matrix())?;
    let tilde = spin_flip_matrix(rho.matrix());
    let product = &(&root * &tilde) * &root;
    let mu = herm_eig(&product.hermitian_part())?.eigenvalues;
    let mut out = [0.0; 4];
    for (slot, m) in out.iter_mut().zip(mu) {
        *slot = m.max(0.0);
    }
    Ok(out)
}

fn concurrence_from_spectrum(mu: &[f64; 4]) -> f64 {
    let s: Vec<f64> = mu.iter().map(|m| m.sqrt()).collect();
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Closed-form two-qubit concurrence.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_from_spectrum(&wootters_eigenvalues(rho)?))
}

/// Two-qubit tangle, the squared closed-form concurrence.
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    let c = wootters_concurrence(rho)?;
    Ok(c * c)
}

/// `Re Tr(ρ ρ̃)`.
pub fn tr_rho_rhotilde(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_product(&spin_flip_matrix(rho.matrix())).re
}

/// Hilbert-Schmidt distance between ρ and its spin flip.
pub fn hs_to_spinflip(rho: &DensityMatrix) -> f64 {
    hs_distance(rho.matrix(), &spin_flip_matrix(rho.matrix())).expect("same dimension")
}

/// `I(ρ, ρ̃) = 1 − D²_HS(ρ − ρ̃)`.
pub fn indistinguishability(rho: &DensityMatrix) -> f64 {
    let d = hs_to_spinflip(rho);
    1.0 - d * d
}

/// Tangle between qubit `k` and the rest of a pure state, `2 M(ρ_k)`.
pub fn i_tangle_pure(psi: &PureState, k: usize) -> Result<f64> {
    if k >= psi.n_qubits() {
        return Err(Error::QubitOutOfRange { index: k, n_qubits: psi.n_qubits() });
    }
    Ok(2.0 * mixedness(&psi.marginal(&[k])?))
}

/// Pairwise tangles and one-versus-rest tangles of a three-qubit pure state.
///
/// Qubits are labelled 1, 2, 3 in field names and 0, 1, 2 as indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualTangleReport {
    pub tau_1_23: f64,
    pub tau_2_13: f64,
    pub tau_3_12: f64,
    pub tau_12: f64,
    pub tau_13: f64,
    pub tau_23: f64,
    /// `τ₁{23} − τ₁₂ − τ₁₃`.
    pub tau_123: f64,
}

impl ResidualTangleReport {
    /// Residual tangle with each qubit as pivot.
    pub fn pivot_forms(&self) -> [f64; 3] {
        [
            self.tau_1_23 - self.tau_12 - self.tau_13,
            self.tau_2_13 - self.tau_12 - self.tau_23,
            self.tau_3_12 - self.tau_13 - self.tau_23,
        ]
    }

    /// Permutation-symmetric form `(Σ τ_k{R_k} − 2 Σ τ_ij) / 3`.
    pub fn tau_123_symmetric(&self) -> f64 {
        (self.tau_1_23 + self.tau_2_13 + self.tau_3_12 - 2.0 * (self.tau_12 + self.tau_13 + self.tau_23)) / 3.0
    }
}

pub fn residual_tangle(psi: &PureState) -> Result<ResidualTangleReport> {
    require_qubits(psi.n_qubits(), 3, "residual tangle")?;
    let rho = psi.density();
    let one_vs_rest = |k: usize| -> Result<f64> { Ok(2.0 * mixedness(&rho.marginal(&[k])?)) };
    let pair = |i: usize, j: usize| -> Result<f64> { tangle(&rho.marginal(&[i, j])?) };
    let mut report = ResidualTangleReport {
        tau_1_23: one_vs_rest(0)?,
        tau_2_13: one_vs_rest(1)?,
        tau_3_12: one_vs_rest(2)?,
        tau_12: pair(0, 1)?,
        tau_13: pair(0, 2)?,
        tau_23: pair(1, 2)?,
        tau_123: 0.0,
    };
    report.tau_123 = report.tau_1_23 - report.tau_12 - report.tau_13;
    let symmetric = report.tau_123_symmetric();
    if (report.tau_123 - symmetric).abs() > RESIDUAL_TANGLE_TOL {
        return Err(Error::Inconsistent(format!(
            "residual tangle forms disagree: pivot {} vs symmetric {}",
            report.tau_123, symmetric
        )));
    }
    Ok(report)
}

/// `Tr(ρρ̃) + M(ρ) − τ(ρ)` without any clipping.
pub fn separable_uncertainty_raw(rho: &DensityMatrix) -> Result<f64> {
    require_qubits(rho.n_qubits(), 2, "separable uncertainty")?;
    Ok(tr_rho_rhotilde(rho) + mixedness(rho) - tangle(rho)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableUncertainty {
    /// Value clipped into `[0, 1]`.
    pub value: f64,
    pub raw: f64,
    /// Set when `raw` sat within `ETA_NOISE` outside `[0, 1]` and was clipped.
    pub noise_clipped: bool,
}

/// Separable uncertainty `η = Tr(ρρ̃) + M(ρ) − τ(ρ)`.
///
/// Values more than [`ETA_NOISE`] outside `[0, 1]` are reported as an error.
pub fn separable_uncertainty(rho: &DensityMatrix) -> Result<SeparableUncertainty> {
    let raw = separable_uncertainty_raw(rho)?;
    if raw < -ETA_NOISE || raw > 1.0 + ETA_NOISE {
        return Err(Error::Inconsistent(format!("separable uncertainty {raw:.3e} outside [0, 1]")));
    }
    let value = raw.clamp(0.0, 1.0);
    Ok(SeparableUncertainty { value, raw, noise_clipped: value != raw })
}

/// Smallest eigenvalue of the partial transpose on qubit 0.
///
/// For two qubits a value `>= -1e-9` certifies separability.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    require_qubits(rho.n_qubits(), 2, "PPT test")?;
    min_eigenvalue(&partial_transpose(rho.matrix(), 2, 0)?)
}

/// Every scalar measure of one state. Two-qubit-only fields are `None` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub n_qubits: usize,
    pub mixedness: f64,
    pub purity: f64,
    pub tr_rho_rhotilde: f64,
    pub indistinguishability: f64,
    pub hs_to_spinflip: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangle: Option<f64>,
    #[serde(rename = "eta", skip_serializing_if = "Option::is_none")]
    pub separable_uncertainty: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_noise_clipped: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppt_min_eigenvalue: Option<f64>,
    pub per_qubit: Vec<SingleQubitProperties>,
}

pub fn measure_set(rho: &DensityMatrix) -> Result<MeasureSet> {
    let m = mixedness(rho);
    let d = hs_to_spinflip(rho);
    let mut set = MeasureSet {
        n_qubits: rho.n_qubits(),
        mixedness: m,
        purity: 1.0 - m,
        tr_rho_rhotilde: tr_rho_rhotilde(rho),
        indistinguishability: 1.0 - d * d,
        hs_to_spinflip: d,
        concurrence: None,
        tangle: None,
        separable_uncertainty: None,
        eta_noise_clipped: None,
        ppt_min_eigenvalue: None,
        per_qubit: per_qubit_properties(rho)?,
    };
    if rho.n_qubits() == 2 {
        let c = wootters_concurrence(rho)?;
        let eta = separable_uncertainty(rho)?;
        set.concurrence = Some(c);
        set.tangle = Some(c * c);
        set.separable_uncertainty = Some(eta.value);
        set.eta_noise_clipped = Some(eta.noise_clipped);
        set.ppt_min_eigenvalue = Some(ppt_min_eigenvalue(rho)?);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, sigma_y_tensor};
    use crate::rng::{task_rng, task_seed};
    use crate::states::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi_plus() -> PureState {
        Bell::PhiPlus.state()
    }

    fn werner_phi(lambda: f64) -> DensityMatrix {
        werner(&WernerParams::new(lambda, Bell::PhiPlus).unwrap()).unwrap()
    }

    fn maximally_mixed(n: usize) -> DensityMatrix {
        let d = 1usize << n;
        DensityMatrix::new(ComplexMatrix::identity(d).scale_real(1.0 / d as f64)).unwrap()
    }

    fn qubit(m: ComplexMatrix) -> DensityMatrix {
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn spin_flip_examples() {
        let phi = phi_plus();
        let overlap = phi.inner(&phi.spin_flip());
        assert!((overlap - c(-1.0, 0.0)).norm() < 1e-15);

        let zz = named_state(&NamedState::Basis("00".into())).unwrap();
        let flipped = zz.spin_flip();
        assert!((flipped.amplitudes()[3] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(zz.inner(&flipped).norm() < 1e-15);

        let mixed = maximally_mixed(2);
        assert!(mixed.spin_flip().matrix().max_abs_diff(mixed.matrix()) < 1e-15);
    }

    #[test]
    fn spin_flip_matches_sigma_y_conjugation() {
        for n in 1..=4 {
            let y = sigma_y_tensor(n);
            let rho = random_mixed(n, 2, 40 + n as u64).unwrap();
            let direct = &(&y * &rho.matrix().conj()) * &y;
            assert!(rho.spin_flip().matrix().max_abs_diff(&direct) < 1e-14);

            let psi = random_pure(n, 50 + n as u64).unwrap();
            let via_matrix = y.mul_vec(&psi.amplitudes().iter().map(|a| a.conj()).collect::<Vec<_>>());
            for (a, b) in psi.spin_flip().amplitudes().iter().zip(&via_matrix) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn spin_flip_is_an_involution() {
        let rho = random_mixed(3, 3, 8).unwrap();
        assert!(rho.spin_flip().spin_flip().matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let psi = random_pure(3, 8).unwrap();
        let back = psi.spin_flip().spin_flip();
        // Equal up to a global phase.
        assert!((psi.inner(&back).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_qubit_examples() {
        let p = single_qubit_properties(&qubit(ComplexMatrix::diag(&[1.0, 0.0]))).unwrap();
        assert_eq!((p.coherence, p.predictability, p.s2bar), (0.0, 1.0, 0.5));

        let plus = qubit(ComplexMatrix::new(2, vec![c(0.5, 0.0); 4]).unwrap());
        let p = single_qubit_properties(&plus).unwrap();
        assert!((p.coherence - 1.0).abs() < 1e-15 && p.predictability == 0.0 && (p.s2bar - 0.5).abs() < 1e-15);

        let mixed = maximally_mixed(1);
        let p = single_qubit_properties(&mixed).unwrap();
        assert_eq!((p.coherence, p.predictability, p.s2bar), (0.0, 0.0, 0.0));
        assert!((mixedness(&mixed) - 0.5).abs() < 1e-15);

        assert!(single_qubit_properties(&maximally_mixed(2)).is_err());
    }

    #[test]
    fn single_qubit_mixedness_identity() {
        for s in 0..1000 {
            let rho = random_mixed(1, 1 + (s as usize % 2), task_seed(5, s)).unwrap();
            let p = single_qubit_properties(&rho).unwrap();
            assert!((mixedness(&rho) - (0.5 - p.s2bar)).abs() <= 1e-10);
        }
    }

    #[test]
    fn mixedness_examples() {
        assert!(mixedness(&phi_plus().density()).abs() < 1e-15);
        assert!((mixedness(&maximally_mixed(2)) - 0.75).abs() < 1e-15);
        assert!((mixedness(&werner_phi(0.5)) - 9.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn concurrence_pure_examples() {
        assert!((concurrence_pure(&phi_plus()).unwrap() - 1.0).abs() < 1e-15);
        let zz = named_state(&NamedState::Basis("00".into())).unwrap();
        assert!(concurrence_pure(&zz).unwrap() < 1e-15);
        let pp = PureState::new(vec![c(0.5, 0.0); 4]).unwrap();
        assert!(concurrence_pure(&pp).unwrap() < 1e-15);
        assert!(concurrence_pure(&named_state(&NamedState::Ghz(3)).unwrap()).is_err());
    }

    #[test]
    fn wootters_examples() {
        for s in 0..200 {
            let psi = random_pure(2, task_seed(1, s)).unwrap();
            let closed = wootters_concurrence(&psi.density()).unwrap();
            assert!((closed - concurrence_pure(&psi).unwrap()).abs() <= 1e-8);
        }
        assert!((wootters_concurrence(&werner_phi(0.5)).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(wootters_concurrence(&werner_phi(1.0 / 3.0)).unwrap(), 0.0);
        assert!(wootters_concurrence(&maximally_mixed(3)).is_err());
    }

    /// Brute-force Werner concurrence: explicit √ρ ρ̃ √ρ eigen-solve on the grid.
    #[test]
    fn werner_concurrence_matches_brute_force_spectrum() {
        for i in 0..=20 {
            let lambda = i as f64 * 0.05;
            let rho = werner_phi(lambda);
            let brute = concurrence_from_spectrum(&wootters_eigenvalues_direct(&rho).unwrap());
            let closed = ((3.0 * lambda - 1.0) / 2.0).max(0.0);
            assert!((brute - closed).abs() < 1e-7, "λ={lambda}: {brute} vs {closed}");
            assert!((wootters_concurrence(&rho).unwrap() - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn support_and_direct_spectra_agree_on_full_rank_states() {
        for s in 0..200 {
            let rho = random_mixed(2, 4, task_seed(2, s)).unwrap();
            let a = wootters_eigenvalues(&rho).unwrap();
            let b = wootters_eigenvalues_direct(&rho).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tr_rho_rhotilde_examples() {
        assert!((tr_rho_rhotilde(&phi_plus().density()) - 1.0).abs() < 1e-15);
        assert!((tr_rho_rhotilde(&maximally_mixed(2)) - 0.25).abs() < 1e-15);
        assert!((tr_rho_rhotilde(&werner_phi(0.5)) - 7.0 / 16.0).abs() < 1e-15);
        let psi = random_pure(2, 77).unwrap();
        assert!((tr_rho_rhotilde(&psi.density()) - concurrence_pure(&psi).unwrap().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn indistinguishability_examples() {
        let zz = named_state(&NamedState::Basis("00".into())).unwrap().density();
        assert!(indistinguishability(&zz).abs() < 1e-15);
        for i in 0..=10 {
            for bell in [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus] {
                let w = werner(&WernerParams::new(i as f64 / 10.0, bell).unwrap()).unwrap();
                assert!((indistinguishability(&w) - 1.0).abs() < 1e-15);
            }
        }
        assert!((indistinguishability(&phi_plus().density()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn indistinguishability_equals_tr_plus_mixedness() {
        for n in [2, 3] {
            for s in 0..500 {
                let rho = random_mixed(n, 1 + (s as usize % (1 << n)), task_seed(n as u64, s)).unwrap();
                let lhs = tr_rho_rhotilde(&rho) + mixedness(&rho);
                assert!((lhs - indistinguishability(&rho)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn two_qubit_tr_identity() {
        for rank in 1..=4 {
            for s in 0..1000 {
                let rho = random_mixed(2, rank, task_seed(rank as u64 * 100, s)).unwrap();
                let m1 = mixedness(&rho.marginal(&[0]).unwrap());
                let m2 = mixedness(&rho.marginal(&[1]).unwrap());
                let resid = tr_rho_rhotilde(&rho) + mixedness(&rho) - m1 - m2;
                assert!(resid.abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn i_tangle_examples() {
        let ghz = named_state(&NamedState::Ghz(3)).unwrap();
        assert!((i_tangle_pure(&ghz, 0).unwrap() - 1.0).abs() < 1e-15);
        let prod = named_state(&NamedState::Basis("010".into())).unwrap();
        for k in 0..3 {
            assert!(i_tangle_pure(&prod, k).unwrap().abs() < 1e-15);
        }
        let w = named_state(&NamedState::W(3)).unwrap();
        assert!((i_tangle_pure(&w, 0).unwrap() - 8.0 / 9.0).abs() < 1e-14);
        assert!(i_tangle_pure(&w, 3).is_err());
    }

    #[test]
    fn residual_tangle_examples() {
        let ghz = residual_tangle(&named_state(&NamedState::Ghz(3)).unwrap()).unwrap();
        assert!((ghz.tau_1_23 - 1.0).abs() < 1e-14);
        for t in [ghz.tau_12, ghz.tau_13, ghz.tau_23] {
            assert!(t.abs() < 1e-14);
        }
        assert!((ghz.tau_123 - 1.0).abs() < 1e-14);

        let w = residual_tangle(&named_state(&NamedState::W(3)).unwrap()).unwrap();
        for t in [w.tau_1_23, w.tau_2_13, w.tau_3_12] {
            assert!((t - 8.0 / 9.0).abs() < 1e-12);
        }
        for t in [w.tau_12, w.tau_13, w.tau_23] {
            assert!((t - 4.0 / 9.0).abs() < 1e-12);
        }
        assert!(w.tau_123.abs() < 1e-8);

        let prod = residual_tangle(&named_state(&NamedState::Basis("000".into())).unwrap()).unwrap();
        for t in [prod.tau_1_23, prod.tau_2_13, prod.tau_3_12, prod.tau_12, prod.tau_13, prod.tau_23, prod.tau_123] {
            assert!(t.abs() < 1e-15);
        }
        assert!(residual_tangle(&phi_plus()).is_err());
    }

    /// W marginals: diag(2/3, 1/3) gives p = 1/3 and S̄² = 1/18.
    #[test]
    fn w_state_marginal_properties() {
        let w = named_state(&NamedState::W(3)).unwrap().density();
        for p in per_qubit_properties(&w).unwrap() {
            assert!((p.predictability - 1.0 / 3.0).abs() < 1e-14);
            assert!(p.coherence.abs() < 1e-14);
            assert!((p.s2bar - 1.0 / 18.0).abs() < 1e-14);
        }
    }

    #[test]
    fn monogamy_and_pivot_invariance_on_random_states() {
        for s in 0..1000 {
            let psi = random_pure(3, task_seed(3, s)).unwrap();
            let r = residual_tangle(&psi).unwrap();
            for slack in r.pivot_forms() {
                assert!(slack >= -1e-8);
                assert!((slack - r.tau_123_symmetric()).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn separable_uncertainty_examples() {
        for s in 0..50 {
            let psi = random_pure(2, task_seed(9, s)).unwrap();
            assert!(separable_uncertainty(&psi.density()).unwrap().value.abs() < 1e-10);
        }
        let eta = separable_uncertainty(&maximally_mixed(2)).unwrap();
        assert!((eta.value - 1.0).abs() < 1e-15);

        for i in 0..=20 {
            for j in 0..=(20 - i) {
                let rho = mems(&MemsParams::new(i as f64 * 0.05, j as f64 * 0.05).unwrap()).unwrap();
                let eta = separable_uncertainty_raw(&rho).unwrap();
                assert!((eta - mixedness(&rho)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn separable_uncertainty_matches_marginal_form() {
        for s in 0..300 {
            let rho = random_mixed(2, 1 + s as usize % 4, task_seed(21, s)).unwrap();
            let eta = separable_uncertainty(&rho).unwrap();
            assert!(eta.raw >= -1e-8 && eta.raw <= 1.0 + 1e-8);
            let m1 = mixedness(&rho.marginal(&[0]).unwrap());
            let m2 = mixedness(&rho.marginal(&[1]).unwrap());
            assert!((eta.raw - (m1 + m2 - tangle(&rho).unwrap())).abs() <= 1e-10);
        }
    }

    #[test]
    fn ppt_examples() {
        assert!(ppt_min_eigenvalue(&werner_phi(1.0 / 3.0)).unwrap().abs() < 1e-10);
        assert!((ppt_min_eigenvalue(&werner_phi(1.0)).unwrap() + 0.5).abs() < 1e-12);
        let prod = named_state(&NamedState::Basis("01".into())).unwrap().density();
        assert!(ppt_min_eigenvalue(&prod).unwrap() >= -1e-15);
    }

    fn random_local_unitary(seed: u64, s: u64) -> ComplexMatrix {
        let mut rng = task_rng(seed, s);
        let u1 = random_unitary(2, &mut rng);
        let u2 = random_unitary(2, &mut rng);
        kron(&u1, &u2)
    }

    #[test]
    fn local_unitary_invariance() {
        for s in 0..500 {
            let rho = random_mixed(2, 1 + s as usize % 4, task_seed(31, s)).unwrap();
            let moved = rho.conjugated_by(&random_local_unitary(32, s)).unwrap();
            let a = measure_set(&rho).unwrap();
            let b = measure_set(&moved).unwrap();
            let pairs = [
                (a.tangle.unwrap(), b.tangle.unwrap()),
                (separable_uncertainty_raw(&rho).unwrap(), separable_uncertainty_raw(&moved).unwrap()),
                (a.mixedness, b.mixedness),
                (a.tr_rho_rhotilde, b.tr_rho_rhotilde),
                (a.indistinguishability, b.indistinguishability),
                (a.per_qubit[0].s2bar, b.per_qubit[0].s2bar),
                (a.per_qubit[1].s2bar, b.per_qubit[1].s2bar),
            ];
            for (x, y) in pairs {
                assert!((x - y).abs() <= 1e-9, "seed {s}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn measure_set_invariants() {
        let set = measure_set(&werner_phi(0.5)).unwrap();
        assert_eq!(set.purity, 1.0 - set.mixedness);
        assert!((set.indistinguishability - (1.0 - set.hs_to_spinflip.powi(2))).abs() <= 1e-10);
        assert!((set.tangle.unwrap() - 0.0625).abs() < 1e-12);
        assert!((set.separable_uncertainty.unwrap() - 0.9375).abs() < 1e-12);

        let three = measure_set(&random_mixed(3, 2, 4).unwrap()).unwrap();
        assert!(three.tangle.is_none() && three.separable_uncertainty.is_none());
        assert_eq!(three.per_qubit.len(), 3);
    }
}
