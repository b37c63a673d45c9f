//! Complementarity relations evaluated as residuals.
//!
//! Each relation produces a [`RelationReport`] carrying every term that enters it,
//! so a failing check can be traced to the quantity that drifted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{
    concurrence_pure, hs_to_spinflip, indistinguishability, mixedness, per_qubit_properties, residual_tangle,
    separable_uncertainty_raw, single_qubit_properties, spin_flip_matrix, tangle, tr_rho_rhotilde,
};
use crate::states::{form15_state, DensityMatrix, Form15Params, PureState, State, MAX_QUBITS};

/// Tolerance for relations among exactly computed quantities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance for relations that go through the two-qubit concurrence spectrum.
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Entrywise tolerance for spin-flip symmetry of Werner states.
pub const SPIN_FLIP_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub identity: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity: IDENTITY_TOL, spectral: SPECTRAL_TOL }
    }
}

impl Tolerances {
    /// The same tolerance for every relation.
    pub fn uniform(tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { identity: tol, spectral: tol })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Equality,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation_id: String,
    pub kind: CheckKind,
    pub terms: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub residual: f64,
    pub pass: bool,
}

impl RelationReport {
    /// Equality check: passes when `|lhs − rhs| <= tol`.
    pub fn equality(id: impl Into<String>, terms: Terms, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = lhs - rhs;
        Self { relation_id: id.into(), kind: CheckKind::Equality, terms: terms.0, lhs, rhs, residual, pass: residual.abs() <= tol }
    }

    /// Inequality `lhs >= rhs`: passes when `lhs − rhs >= −tol`.
    pub fn lower_bound(id: impl Into<String>, terms: Terms, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = lhs - rhs;
        Self { relation_id: id.into(), kind: CheckKind::LowerBound, terms: terms.0, lhs, rhs, residual, pass: residual >= -tol }
    }

    /// How far the check is from holding exactly: `|residual|` for equalities, the
    /// amount by which `lhs` falls short for bounds.
    pub fn violation(&self) -> f64 {
        match self.kind {
            CheckKind::Equality => self.residual.abs(),
            CheckKind::LowerBound => (-self.residual).max(0.0),
        }
    }
}

/// Ordered name/value pairs for a report.
#[derive(Debug, Clone, Default)]
pub struct Terms(BTreeMap<String, f64>);

impl Terms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.0.insert(name.into(), value);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub total: usize,
    pub passed: usize,
    pub max_abs_residual: f64,
}

pub fn summarize<'a>(reports: impl IntoIterator<Item = &'a RelationReport>) -> BatchSummary {
    let mut summary = BatchSummary { total: 0, passed: 0, max_abs_residual: 0.0 };
    for r in reports {
        summary.total += 1;
        summary.passed += usize::from(r.pass);
        summary.max_abs_residual = summary.max_abs_residual.max(r.violation());
    }
    summary
}

fn s2bar_terms(mut terms: Terms, s2: &[f64]) -> Terms {
    for (k, v) in s2.iter().enumerate() {
        terms = terms.with(format!("s2bar_{}", k + 1), *v);
    }
    terms
}

/// `Σ_k [M(ρ_k) + S̄²_k] = n/2`, valid for any state.
fn eq6(rho: &DensityMatrix, tol: &Tolerances) -> Result<RelationReport> {
    let n = rho.n_qubits();
    let mut terms = Terms::new();
    let mut lhs = 0.0;
    for k in 0..n {
        let marginal = rho.marginal(&[k])?;
        let m = mixedness(&marginal);
        let s2 = single_qubit_properties(&marginal)?.s2bar;
        terms = terms.with(format!("mixedness_{}", k + 1), m).with(format!("s2bar_{}", k + 1), s2);
        lhs += m + s2;
    }
    Ok(RelationReport::equality("eq6", terms, lhs, n as f64 / 2.0, tol.identity))
}

/// `I(ρ, ρ̃) = Tr(ρρ̃) + M(ρ)`, valid for any state.
fn eq17(rho: &DensityMatrix, tol: &Tolerances) -> RelationReport {
    let i = indistinguishability(rho);
    let t = tr_rho_rhotilde(rho);
    let m = mixedness(rho);
    let terms = Terms::new().with("indistinguishability", i).with("tr_rho_rhotilde", t).with("mixedness", m);
    RelationReport::equality("eq17", terms, i, t + m, tol.identity)
}

fn check_size(n: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::Parameter(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

/// Relations for a pure state: `eq6`, `eq7`, plus `eq1.q1`/`eq1.q2` for two
/// qubits and `eq12` for three.
pub fn verify_pure(psi: &PureState, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    let n = psi.n_qubits();
    check_size(n)?;
    let rho = psi.density();
    let props = per_qubit_properties(&rho)?;
    let s2: Vec<f64> = props.iter().map(|p| p.s2bar).collect();
    let mut reports = vec![eq6(&rho, tol)?];

    let mut terms = Terms::new();
    let mut lhs = 0.0;
    for k in 0..n {
        let t = 2.0 * mixedness(&rho.marginal(&[k])?);
        terms = terms.with(format!("tau_{}_rest", k + 1), t);
        lhs += t + 2.0 * s2[k];
    }
    terms = s2bar_terms(terms, &s2);
    reports.push(RelationReport::equality("eq7", terms, lhs, n as f64, tol.identity));

    if n == 2 {
        let c = concurrence_pure(psi)?;
        for (k, p) in props.iter().enumerate() {
            let (nu2, p2) = (p.coherence * p.coherence, p.predictability * p.predictability);
            let terms = Terms::new().with("concurrence_sq", c * c).with("coherence_sq", nu2).with("predictability_sq", p2);
            reports.push(RelationReport::equality(format!("eq1.q{}", k + 1), terms, c * c + nu2 + p2, 1.0, tol.identity));
        }
    }
    if n == 3 {
        let rt = residual_tangle(psi)?;
        let pair_sum = rt.tau_12 + rt.tau_13 + rt.tau_23;
        let s2_sum: f64 = s2.iter().sum();
        let terms = s2bar_terms(
            Terms::new()
                .with("tau_123", rt.tau_123)
                .with("tau_12", rt.tau_12)
                .with("tau_13", rt.tau_13)
                .with("tau_23", rt.tau_23),
            &s2,
        );
        let lhs = rt.tau_123 + 2.0 / 3.0 * (pair_sum + s2_sum);
        reports.push(RelationReport::equality("eq12", terms, lhs, 1.0, tol.spectral));
    }
    Ok(reports)
}

fn require_two_qubits(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::Parameter(format!("two-qubit relations need 2 qubits, got {n}")));
    }
    Ok(())
}

/// The two-qubit relations `eq13`, `eq14`, `eq17`, `eq19`, `eq20`, `eq27`, `eq28`.
///
/// `η` enters unclipped.
pub fn verify_two_qubit(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    require_two_qubits(rho.n_qubits())?;
    let t = tr_rho_rhotilde(rho);
    let m = mixedness(rho);
    let m1 = mixedness(&rho.marginal(&[0])?);
    let m2 = mixedness(&rho.marginal(&[1])?);
    let props = per_qubit_properties(rho)?;
    let (s1, s2) = (props[0].s2bar, props[1].s2bar);
    let i = indistinguishability(rho);
    let d = hs_to_spinflip(rho);
    let tau = tangle(rho)?;
    let eta = separable_uncertainty_raw(rho)?;

    let base = || Terms::new().with("s2bar_1", s1).with("s2bar_2", s2);
    Ok(vec![
        RelationReport::equality(
            "eq13",
            Terms::new().with("tr_rho_rhotilde", t).with("mixedness", m).with("mixedness_1", m1).with("mixedness_2", m2),
            t + m,
            m1 + m2,
            tol.identity,
        ),
        RelationReport::equality(
            "eq14",
            base().with("tr_rho_rhotilde", t).with("mixedness", m),
            t + m + s1 + s2,
            1.0,
            tol.identity,
        ),
        eq17(rho, tol),
        RelationReport::equality("eq19", base().with("indistinguishability", i), i + s1 + s2, 1.0, tol.identity),
        RelationReport::equality("eq20", base().with("hs_distance", d), d, (s1 + s2).max(0.0).sqrt(), tol.identity),
        RelationReport::equality(
            "eq27",
            Terms::new().with("eta", eta).with("mixedness_1", m1).with("mixedness_2", m2).with("tangle", tau),
            eta,
            m1 + m2 - tau,
            tol.identity,
        ),
        RelationReport::equality(
            "eq28",
            base().with("eta", eta).with("tangle", tau),
            eta + tau + s1 + s2,
            1.0,
            tol.identity,
        ),
    ])
}

/// Relations valid for a density matrix of any size: `eq6` and `eq17`.
pub fn verify_mixed(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    check_size(rho.n_qubits())?;
    Ok(vec![eq6(rho, tol)?, eq17(rho, tol)])
}

/// Every applicable relation for a state, without duplicates.
///
/// Pure states get [`verify_pure`]; two-qubit states additionally get the
/// two-qubit relations; other mixed states get [`verify_mixed`].
pub fn verify_state(state: &State, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    let mut reports = match state {
        State::Pure(psi) => verify_pure(psi, tol)?,
        State::Density(rho) => verify_mixed(rho, tol)?,
    };
    if state.n_qubits() == 2 {
        let extra = verify_two_qubit(&state.density(), tol)?;
        reports.extend(extra.into_iter().filter(|r| r.relation_id != "eq17" || matches!(state, State::Pure(_))));
    }
    if state.n_qubits() == 3 {
        if let State::Pure(psi) = state {
            reports.push(verify_monogamy(psi, tol)?);
        }
    }
    Ok(reports)
}

/// `η = M` for the maximally entangled mixed states.
pub fn verify_mems(rho: &DensityMatrix, tol: &Tolerances) -> Result<RelationReport> {
    require_two_qubits(rho.n_qubits())?;
    let eta = separable_uncertainty_raw(rho)?;
    let m = mixedness(rho);
    Ok(RelationReport::equality("eq26", Terms::new().with("eta", eta).with("mixedness", m), eta, m, tol.spectral))
}

/// `η = 1 − τ` for Werner states, plus entrywise `ρ = ρ̃` as `eq29.symmetry`.
pub fn verify_werner(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    require_two_qubits(rho.n_qubits())?;
    let eta = separable_uncertainty_raw(rho)?;
    let tau = tangle(rho)?;
    let flipped = spin_flip_matrix(rho.matrix());
    let asym = rho.matrix().max_abs_diff(&flipped);
    Ok(vec![
        RelationReport::equality("eq29", Terms::new().with("eta", eta).with("tangle", tau), eta, 1.0 - tau, tol.spectral),
        RelationReport::equality(
            "eq29.symmetry",
            Terms::new().with("max_entry_difference", asym),
            asym,
            0.0,
            SPIN_FLIP_SYMMETRY_TOL,
        ),
    ])
}

/// Monogamy `τ_k{R_k} >= Σ_{j≠k} τ_kj` for each pivot of a three-qubit pure state.
///
/// Reported as one inequality whose `lhs`/`rhs` come from the pivot with the least slack.
pub fn verify_monogamy(psi: &PureState, tol: &Tolerances) -> Result<RelationReport> {
    let rt = residual_tangle(psi)?;
    let lhs = [rt.tau_1_23, rt.tau_2_13, rt.tau_3_12];
    let rhs = [rt.tau_12 + rt.tau_13, rt.tau_12 + rt.tau_23, rt.tau_13 + rt.tau_23];
    let slack = rt.pivot_forms();
    let worst = (0..3).min_by(|&a, &b| slack[a].total_cmp(&slack[b])).expect("three pivots");
    let terms = Terms::new()
        .with("tau_1_23", rt.tau_1_23)
        .with("tau_2_13", rt.tau_2_13)
        .with("tau_3_12", rt.tau_3_12)
        .with("tau_12", rt.tau_12)
        .with("tau_13", rt.tau_13)
        .with("tau_23", rt.tau_23)
        .with("slack_1", slack[0])
        .with("slack_2", slack[1])
        .with("slack_3", slack[2]);
    Ok(RelationReport::lower_bound("eq8", terms, lhs[worst], rhs[worst], tol.spectral))
}

/// Both sides of the variance/covariance decomposition of the nine-parameter form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eq16Report {
    /// `σᵢ² = ωᵢ(1 − ωᵢ)`.
    pub variances: [f64; 4],
    /// `[C₁₄, C₂₃]` with `Cᵢⱼ = −ωᵢωⱼ`.
    pub covariances: [f64; 2],
    /// Mean of the two squared marginal coherences, `16|a|²`.
    pub mean_sq_coherence: f64,
    /// `Tr(ρρ̃) + M(ρ)` from the state.
    pub lhs: f64,
    /// `Σσᵢ² − 2C₁₄ − 2C₂₃ − mean_sq_coherence` from the parameters.
    pub rhs: f64,
    pub residual: f64,
    /// Coherence of each single-qubit marginal, measured from the state.
    pub marginal_coherences: [f64; 2],
    /// `4|a|`.
    pub expected_coherence: f64,
    pub pass: bool,
}

pub const EQ16_TOL: f64 = 1e-10;

pub fn verify_eq16(p: &Form15Params) -> Result<Eq16Report> {
    let rho = form15_state(p)?;
    let lhs = tr_rho_rhotilde(&rho) + mixedness(&rho);
    let w = p.omega;
    let variances = w.map(|x| x * (1.0 - x));
    let covariances = [-w[0] * w[3], -w[1] * w[2]];
    let mean_sq_coherence = 16.0 * p.a.norm_sqr();
    let rhs = variances.iter().sum::<f64>() - 2.0 * covariances[0] - 2.0 * covariances[1] - mean_sq_coherence;
    let nu = [0, 1].map(|k| rho.marginal(&[k]).and_then(|m| single_qubit_properties(&m)).map(|s| s.coherence));
    let marginal_coherences = [nu[0].clone()?, nu[1].clone()?];
    let expected_coherence = 4.0 * p.a.norm();
    let residual = lhs - rhs;
    let pass = residual.abs() <= EQ16_TOL
        && marginal_coherences.iter().all(|c| (c - expected_coherence).abs() <= EQ16_TOL);
    Ok(Eq16Report {
        variances,
        covariances,
        mean_sq_coherence,
        lhs,
        rhs,
        residual,
        marginal_coherences,
        expected_coherence,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::rng::task_seed;
    use crate::states::*;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn find<'a>(reports: &'a [RelationReport], id: &str) -> &'a RelationReport {
        reports.iter().find(|r| r.relation_id == id).unwrap_or_else(|| panic!("missing {id}"))
    }

    #[test]
    fn bell_state_eq1_terms() {
        let psi = Bell::PhiPlus.state();
        let reports = verify_pure(&psi, &tol()).unwrap();
        for id in ["eq1.q1", "eq1.q2"] {
            let r = find(&reports, id);
            assert!((r.terms["concurrence_sq"] - 1.0).abs() < 1e-14);
            assert!(r.terms["coherence_sq"].abs() < 1e-14 && r.terms["predictability_sq"].abs() < 1e-14);
            assert!(r.residual.abs() < 1e-14 && r.pass);
        }
        assert!(reports.iter().all(|r| r.relation_id != "eq12"));
    }

    #[test]
    fn ghz_eq7_sum() {
        let psi = named_state(&NamedState::Ghz(3)).unwrap();
        let reports = verify_pure(&psi, &tol()).unwrap();
        let r = find(&reports, "eq7");
        assert!((r.lhs - 3.0).abs() < 1e-12 && r.pass);
        for k in 1..=3 {
            assert!((r.terms[&format!("tau_{k}_rest")] - 1.0).abs() < 1e-12);
            assert!(r.terms[&format!("s2bar_{k}")].abs() < 1e-12);
        }
        let e12 = find(&reports, "eq12");
        assert!((e12.terms["tau_123"] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn product_state_eq12() {
        let psi = named_state(&NamedState::Basis("000".into())).unwrap();
        let r = verify_pure(&psi, &tol()).unwrap();
        let e = find(&r, "eq12");
        assert!(e.terms["tau_123"].abs() < 1e-12);
        for k in 1..=3 {
            assert!((e.terms[&format!("s2bar_{k}")] - 0.5).abs() < 1e-14);
        }
        assert!((e.lhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_state_eq12_terms() {
        let psi = named_state(&NamedState::W(3)).unwrap();
        let r = verify_pure(&psi, &tol()).unwrap();
        let e = find(&r, "eq12");
        assert!(e.terms["tau_123"].abs() < 1e-8);
        for id in ["tau_12", "tau_13", "tau_23"] {
            assert!((e.terms[id] - 4.0 / 9.0).abs() < 1e-8);
        }
        // Marginals are diag(2/3, 1/3).
        for k in 1..=3 {
            assert!((e.terms[&format!("s2bar_{k}")] - 1.0 / 18.0).abs() < 1e-12);
        }
        assert!(e.pass);
    }

    #[test]
    fn random_pure_states_pass_everything() {
        for n in 1..=5 {
            for s in 0..40 {
                let psi = random_pure(n, task_seed(200 + n as u64, s)).unwrap();
                for r in verify_state(&State::Pure(psi), &tol()).unwrap() {
                    assert!(r.pass, "n={n} seed={s}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn random_mixed_two_qubit_states_pass() {
        for rank in 1..=4 {
            for s in 0..50 {
                let rho = random_mixed(2, rank, task_seed(300 + rank as u64, s)).unwrap();
                let reports = verify_state(&State::Density(rho), &tol()).unwrap();
                assert_eq!(reports.len(), 8);
                for r in reports {
                    assert!(r.pass, "rank {rank} seed {s}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn product_state_eq19_terms() {
        let rho = named_state(&NamedState::Basis("00".into())).unwrap().density();
        let r = verify_two_qubit(&rho, &tol()).unwrap();
        let e = find(&r, "eq19");
        assert!(e.terms["indistinguishability"].abs() < 1e-14);
        assert!((e.terms["s2bar_1"] - 0.5).abs() < 1e-14 && (e.terms["s2bar_2"] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_eq28_terms() {
        let rho = FamilySpec::MaximallyMixed(2).build().unwrap().density();
        let r = verify_two_qubit(&rho, &tol()).unwrap();
        let e = find(&r, "eq28");
        assert!((e.terms["eta"] - 1.0).abs() < 1e-12);
        assert!(e.terms["tangle"].abs() < 1e-14);
        assert!(e.terms["s2bar_1"].abs() < 1e-14 && e.terms["s2bar_2"].abs() < 1e-14);
    }

    #[test]
    fn werner_half_values() {
        let rho = werner(&WernerParams::new(0.5, Bell::PhiPlus).unwrap()).unwrap();
        let r = verify_werner(&rho, &tol()).unwrap();
        assert!((r[0].terms["eta"] - 15.0 / 16.0).abs() < 1e-9);
        assert!((r[0].terms["tangle"] - 1.0 / 16.0).abs() < 1e-9);
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn mems_eta_equals_mixedness() {
        let rho = mems(&MemsParams::new(0.3, 0.4).unwrap()).unwrap();
        assert!(verify_mems(&rho, &tol()).unwrap().pass);
    }

    #[test]
    fn monogamy_examples() {
        let slack = |psi: &PureState| verify_monogamy(psi, &tol()).unwrap();
        let ghz = slack(&named_state(&NamedState::Ghz(3)).unwrap());
        assert!((ghz.residual - 1.0).abs() < 1e-8 && ghz.pass);
        let w = slack(&named_state(&NamedState::W(3)).unwrap());
        assert!(w.residual.abs() < 1e-8 && w.pass);
        let prod = slack(&named_state(&NamedState::Basis("000".into())).unwrap());
        assert!(prod.residual.abs() < 1e-12);
    }

    #[test]
    fn lower_bound_semantics() {
        let ok = RelationReport::lower_bound("x", Terms::new(), 1.0, 0.5, 1e-8);
        let bad = RelationReport::lower_bound("x", Terms::new(), 0.5, 1.0, 1e-8);
        assert!(ok.pass && !bad.pass);
        assert_eq!(ok.residual, 0.5);
    }

    #[test]
    fn eq16_worked_examples() {
        let zero = Complex64::new(0.0, 0.0);
        let cases = [
            ([0.5, 0.5, 0.0, 0.0], zero, 0.5),
            ([0.25; 4], zero, 1.0),
            ([0.5, 0.0, 0.0, 0.5], Complex64::new(0.5, 0.0), 1.0),
        ];
        for (omega, e, expected) in cases {
            let r = verify_eq16(&Form15Params { omega, a: zero, e, f: zero }).unwrap();
            assert!((r.lhs - expected).abs() < 1e-12 && (r.rhs - expected).abs() < 1e-12, "{r:?}");
            assert!(r.pass);
        }
    }

    #[test]
    fn eq16_with_coherence() {
        let p = Form15Params {
            omega: [0.3, 0.2, 0.2, 0.3],
            a: Complex64::new(0.03, -0.02),
            e: Complex64::new(0.05, 0.01),
            f: Complex64::new(-0.02, 0.04),
        };
        let r = verify_eq16(&p).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.marginal_coherences[0] - 4.0 * p.a.norm()).abs() < 1e-12);
    }

    #[test]
    fn mixed_relations_for_larger_states() {
        let rho = random_mixed(3, 4, 9).unwrap();
        let r = verify_mixed(&rho, &tol()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn sizes_are_checked() {
        let rho = random_mixed(3, 2, 1).unwrap();
        assert!(verify_two_qubit(&rho, &tol()).is_err());
        assert!(verify_monogamy(&random_pure(2, 1).unwrap(), &tol()).is_err());
        assert!(Tolerances::uniform(0.0).is_err());
    }

    #[test]
    fn local_unitaries_leave_relations_intact() {
        let rho = random_mixed(2, 3, 4).unwrap();
        let mut rng = crate::rng::task_rng(4, 0);
        let u = kron(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
        let r = verify_two_qubit(&rho.conjugated_by(&u).unwrap(), &tol()).unwrap();
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn summary_counts() {
        let a = RelationReport::equality("a", Terms::new(), 1.0, 1.0, 1e-9);
        let b = RelationReport::equality("b", Terms::new(), 1.0, 0.5, 1e-9);
        let s = summarize([&a, &b]);
        assert_eq!((s.total, s.passed), (2, 1));
        assert_eq!(s.max_abs_residual, 0.5);
    }

    #[test]
    fn bounds_count_only_their_shortfall() {
        let slack = RelationReport::lower_bound("b", Terms::new(), 1.0, 0.25, 1e-9);
        let short = RelationReport::lower_bound("b", Terms::new(), 0.25, 0.5, 1e-9);
        assert_eq!(slack.violation(), 0.0);
        assert_eq!(short.violation(), 0.25);
        assert_eq!(summarize([&slack]).max_abs_residual, 0.0);
    }
}
