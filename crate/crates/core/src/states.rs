//! State types, the named state families, seeded samplers and the JSON state file format.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, partial_trace, ComplexMatrix};
use crate::rng::{rng_from_seed, StateRng};

pub const MAX_QUBITS: usize = 5;
/// Tolerance on the norm of pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on Hermiticity, trace and positivity of density matrices.
pub const DENSITY_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Invariant {
            invariant: "dimension",
            detail: format!("length {len} is not 2^n for n >= 1"),
        });
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::Invariant {
            invariant: "dimension",
            detail: format!("{n} qubits exceeds the supported maximum of {MAX_QUBITS}"),
        });
    }
    Ok(n)
}

/// Normalized `n`-qubit state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates normalization to within `NORM_TOL`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant { invariant: "norm", detail: format!("‖ψ‖ = {norm:.15e}") });
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_len(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Invariant { invariant: "norm", detail: "zero or non-finite vector".into() });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes)
    }

    pub(crate) fn from_normalized_unchecked(amplitudes: Vec<Complex64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { n_qubits: self.n_qubits, matrix: self.projector() }
    }

    /// Reduced state of the qubits in `keep`.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.density().marginal(keep)
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, naming the first invariant that fails.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = qubits_for_len(matrix.dim())?;
        let deviation = matrix.hermiticity_deviation();
        if deviation > DENSITY_TOL {
            return Err(Error::Invariant {
                invariant: "hermiticity",
                detail: format!("max |ρ_ij − ρ_ji*| = {deviation:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::Invariant { invariant: "trace", detail: format!("Tr ρ = {:.15e}", tr.re) });
        }
        let min = *herm_eig(&matrix)?.eigenvalues.last().expect("non-empty");
        if min < -DENSITY_TOL {
            return Err(Error::Invariant {
                invariant: "positivity",
                detail: format!("minimum eigenvalue {min:.3e}"),
            });
        }
        Ok(Self { n_qubits, matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        Ok(Self::from_matrix_unchecked(partial_trace(&self.matrix, self.n_qubits, keep)?))
    }

    /// Conjugation by a unitary of matching dimension, `U ρ U†`.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.matrix.dim() {
            return Err(Error::DimensionMismatch { expected: self.matrix.dim(), actual: u.dim() });
        }
        let out = &(u * &self.matrix) * &u.adjoint();
        Ok(Self::from_matrix_unchecked(out.hermitian_part()))
    }
}

/// The four Bell states, `Φ± = (|00⟩ ± |11⟩)/√2` and `Ψ± = (|01⟩ ± |10⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Bell {
    #[default]
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub fn state(self) -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = 0.0;
        let amps = match self {
            Bell::PhiPlus => [h, z, z, h],
            Bell::PhiMinus => [h, z, z, -h],
            Bell::PsiPlus => [z, h, h, z],
            Bell::PsiMinus => [z, h, -h, z],
        };
        PureState::from_normalized_unchecked(amps.iter().map(|&a| c(a, 0.0)).collect())
    }
}

impl FromStr for Bell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" => Ok(Bell::PhiPlus),
            "phi-" | "phiminus" => Ok(Bell::PhiMinus),
            "psi+" | "psiplus" => Ok(Bell::PsiPlus),
            "psi-" | "psiminus" => Ok(Bell::PsiMinus),
            other => Err(Error::UnknownState(format!("bell:{other}"))),
        }
    }
}

impl fmt::Display for Bell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bell::PhiPlus => "phi+",
            Bell::PhiMinus => "phi-",
            Bell::PsiPlus => "psi+",
            Bell::PsiMinus => "psi-",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    /// Computational basis state given as a bitstring, qubit 0 first.
    Basis(String),
    Bell(Bell),
    Ghz(usize),
    W(usize),
}

pub fn named_state(name: &NamedState) -> Result<PureState> {
    match name {
        NamedState::Basis(bits) => {
            let n = bits.len();
            if n == 0 || n > MAX_QUBITS || !bits.chars().all(|ch| ch == '0' || ch == '1') {
                return Err(Error::MalformedBitstring(bits.clone()));
            }
            let index = usize::from_str_radix(bits, 2).map_err(|_| Error::MalformedBitstring(bits.clone()))?;
            let mut amps = vec![c(0.0, 0.0); 1 << n];
            amps[index] = c(1.0, 0.0);
            PureState::new(amps)
        }
        NamedState::Bell(b) => Ok(b.state()),
        NamedState::Ghz(n) => {
            check_multi(*n, "ghz")?;
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let mut amps = vec![c(0.0, 0.0); 1 << n];
            amps[0] = c(h, 0.0);
            amps[(1 << n) - 1] = c(h, 0.0);
            PureState::new(amps)
        }
        NamedState::W(n) => {
            check_multi(*n, "w")?;
            let amp = 1.0 / (*n as f64).sqrt();
            let mut amps = vec![c(0.0, 0.0); 1 << n];
            for q in 0..*n {
                amps[1 << q] = c(amp, 0.0);
            }
            PureState::new(amps)
        }
    }
}

fn check_multi(n: usize, what: &str) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::Parameter(format!("{what} needs 2..={MAX_QUBITS} qubits, got {n}")));
    }
    Ok(())
}

/// Werner state parameters: weight `lambda` on the chosen Bell projector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    pub lambda: f64,
    pub bell: Bell,
}

impl WernerParams {
    pub fn new(lambda: f64, bell: Bell) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Parameter(format!("werner lambda {lambda} outside [0, 1]")));
        }
        Ok(Self { lambda, bell })
    }
}

/// `λ|Bell⟩⟨Bell| + (1 − λ) I/4`.
pub fn werner(p: &WernerParams) -> Result<DensityMatrix> {
    let p = WernerParams::new(p.lambda, p.bell)?;
    let bell = p.bell.state().projector().scale_real(p.lambda);
    let noise = ComplexMatrix::identity(4).scale_real((1.0 - p.lambda) / 4.0);
    DensityMatrix::new(&bell + &noise)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemsParams {
    pub x1: f64,
    pub x2: f64,
}

const SIMPLEX_SLACK: f64 = 1e-12;

impl MemsParams {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x1) || !(0.0..=1.0).contains(&x2) {
            return Err(Error::Parameter(format!("mems parameters ({x1}, {x2}) outside [0, 1]")));
        }
        if x1 + x2 > 1.0 + SIMPLEX_SLACK {
            return Err(Error::Parameter(format!("mems requires x1 + x2 <= 1, got {}", x1 + x2)));
        }
        Ok(Self { x1, x2 })
    }
}

/// Maximally entangled state for fixed marginal mixedness: corners `x1`, `x2`,
/// off-corner `√(x1·x2)`, and `1 − x1 − x2` on the `|10⟩` diagonal slot.
pub fn mems(p: &MemsParams) -> Result<DensityMatrix> {
    let MemsParams { x1, x2 } = MemsParams::new(p.x1, p.x2)?;
    let mut m = ComplexMatrix::zeros(4);
    let off = (x1 * x2).sqrt();
    m[(0, 0)] = c(x1, 0.0);
    m[(0, 3)] = c(off, 0.0);
    m[(3, 0)] = c(off, 0.0);
    m[(2, 2)] = c((1.0 - x1 - x2).max(0.0), 0.0);
    m[(3, 3)] = c(x2, 0.0);
    DensityMatrix::new(m)
}

/// Nine-parameter two-qubit form: populations `omega`, single coherence `a`
/// in every single-flip slot, and two-flip coherences `e` (|00⟩↔|11⟩) and `f` (|01⟩↔|10⟩).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Form15Params {
    pub omega: [f64; 4],
    pub a: Complex64,
    pub e: Complex64,
    pub f: Complex64,
}

impl Form15Params {
    pub fn validate(&self) -> Result<()> {
        if self.omega.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::Parameter(format!("populations {:?} outside [0, 1]", self.omega)));
        }
        let total: f64 = self.omega.iter().sum();
        if (total - 1.0).abs() > DENSITY_TOL {
            return Err(Error::Parameter(format!("populations sum to {total}, expected 1")));
        }
        Ok(())
    }

    /// The matrix laid out in the computational basis; no positivity check.
    pub fn matrix(&self) -> ComplexMatrix {
        let [w1, w2, w3, w4] = self.omega;
        let (a, e, f) = (self.a, self.e, self.f);
        let (ac, ec, fc) = (a.conj(), e.conj(), f.conj());
        let entries = vec![
            c(w1, 0.0), a, a, e,
            ac, c(w2, 0.0), f, a,
            ac, fc, c(w3, 0.0), a,
            ec, ac, ac, c(w4, 0.0),
        ];
        ComplexMatrix::new(4, entries).expect("4x4")
    }
}

/// Builds the nine-parameter state, rejecting parameters that are not positive semidefinite.
pub fn form15_state(p: &Form15Params) -> Result<DensityMatrix> {
    p.validate()?;
    DensityMatrix::new(p.matrix())
}

/// Random valid nine-parameter state: exponential populations normalized to one,
/// Gaussian coherences halved until the matrix is positive semidefinite.
pub fn random_form15(seed: u64) -> Result<Form15Params> {
    let mut rng = rng_from_seed(seed);
    let mut omega = [0.0; 4];
    for w in &mut omega {
        *w = rng.sample::<f64, _>(Exp1);
    }
    let total: f64 = omega.iter().sum();
    omega.iter_mut().for_each(|w| *w /= total);
    let mut scale = 0.25;
    let (a, e, f) = (complex_gaussian(&mut rng), complex_gaussian(&mut rng), complex_gaussian(&mut rng));
    for _ in 0..64 {
        let p = Form15Params { omega, a: a * scale, e: e * scale, f: f * scale };
        if herm_eig(&p.matrix())?.eigenvalues.last().is_some_and(|&m| m >= 0.0) {
            return Ok(p);
        }
        scale *= 0.5;
    }
    Ok(Form15Params { omega, a: c(0.0, 0.0), e: c(0.0, 0.0), f: c(0.0, 0.0) })
}

fn complex_gaussian(rng: &mut StateRng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn check_sampler_qubits(n: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::Parameter(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

/// Haar-random pure state: normalized vector of independent complex Gaussians.
pub fn random_pure(n: usize, seed: u64) -> Result<PureState> {
    random_pure_with(n, &mut rng_from_seed(seed))
}

pub fn random_pure_with(n: usize, rng: &mut StateRng) -> Result<PureState> {
    check_sampler_qubits(n)?;
    let amps: Vec<Complex64> = (0..1usize << n).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(amps)
}

/// Induced-measure mixed state `G G† / Tr(G G†)` with `G` a `2ⁿ × rank` Ginibre matrix.
pub fn random_mixed(n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed_with(n, rank, &mut rng_from_seed(seed))
}

pub fn random_mixed_with(n: usize, rank: usize, rng: &mut StateRng) -> Result<DensityMatrix> {
    check_sampler_qubits(n)?;
    let dim = 1usize << n;
    if !(1..=dim).contains(&rank) {
        return Err(Error::Parameter(format!("rank {rank} outside 1..={dim}")));
    }
    let g: Vec<Complex64> = (0..dim * rank).map(|_| complex_gaussian(rng)).collect();
    let mut m = ComplexMatrix::from_fn(dim, |i, j| {
        (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum()
    });
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr).hermitian_part();
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Haar-random unitary by Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(dim: usize, rng: &mut StateRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Either kind of state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
}

impl State {
    pub fn n_qubits(&self) -> usize {
        match self {
            State::Pure(p) => p.n_qubits(),
            State::Density(d) => d.n_qubits(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Density(d) => d.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

/// On-disk state: `{"kind": "pure"|"density", "n_qubits": n, "data": [[re, im], ...]}`,
/// row-major for density matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub kind: StateKind,
    pub n_qubits: usize,
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &State) -> Self {
        let pairs = |z: &[Complex64]| z.iter().map(|a| [a.re, a.im]).collect();
        match state {
            State::Pure(p) => StateFile { kind: StateKind::Pure, n_qubits: p.n_qubits(), data: pairs(p.amplitudes()) },
            State::Density(d) => {
                StateFile { kind: StateKind::Density, n_qubits: d.n_qubits(), data: pairs(d.matrix().entries()) }
            }
        }
    }

    /// Validates every invariant of the declared kind.
    pub fn into_state(self) -> Result<State> {
        if !(1..=MAX_QUBITS).contains(&self.n_qubits) {
            return Err(Error::Invariant {
                invariant: "n_qubits",
                detail: format!("{} outside 1..={MAX_QUBITS}", self.n_qubits),
            });
        }
        let dim = 1usize << self.n_qubits;
        let expected = match self.kind {
            StateKind::Pure => dim,
            StateKind::Density => dim * dim,
        };
        if self.data.len() != expected {
            return Err(Error::Invariant {
                invariant: "data_length",
                detail: format!("expected {expected} entries, found {}", self.data.len()),
            });
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invariant { invariant: "finite", detail: "non-finite entry".into() });
        }
        let values: Vec<Complex64> = self.data.iter().map(|[re, im]| c(*re, *im)).collect();
        match self.kind {
            StateKind::Pure => Ok(State::Pure(PureState::new(values)?)),
            StateKind::Density => Ok(State::Density(DensityMatrix::new(ComplexMatrix::new(dim, values)?)?)),
        }
    }
}

pub fn parse_state_json(text: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}

pub fn state_to_json(state: &State) -> String {
    serde_json::to_string(&StateFile::from_state(state)).expect("state file serializes")
}

/// Family specs, written `name:param1[,param2,...]`.
///
/// `werner:λ[,bell]`, `mems:x1,x2`, `form15:ω1,ω2,ω3,ω4,a_re,a_im,e_re,e_im,f_re,f_im`,
/// `bell:phi+|phi-|psi+|psi-`, `ghz:n`, `w:n`, `basis:bits`, `mixed:n`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Werner(WernerParams),
    Mems(MemsParams),
    Form15(Form15Params),
    Named(NamedState),
    MaximallyMixed(usize),
}

fn parse_reals(args: &str, expect: usize, family: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parameter(format!("{family}: cannot parse '{args}'")))?;
    if vals.len() != expect {
        return Err(Error::Parameter(format!("{family}: expected {expect} parameters, got {}", vals.len())));
    }
    Ok(vals)
}

fn parse_count(args: &str, family: &str) -> Result<usize> {
    args.trim().parse().map_err(|_| Error::Parameter(format!("{family}: cannot parse qubit count '{args}'")))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        match name.to_ascii_lowercase().as_str() {
            "werner" => {
                let mut parts = args.splitn(2, ',');
                let lambda = parse_reals(parts.next().unwrap_or(""), 1, "werner")?[0];
                let bell = match parts.next() {
                    Some(b) => b.trim().parse()?,
                    None => Bell::PhiPlus,
                };
                Ok(FamilySpec::Werner(WernerParams::new(lambda, bell)?))
            }
            "mems" => {
                let v = parse_reals(args, 2, "mems")?;
                Ok(FamilySpec::Mems(MemsParams::new(v[0], v[1])?))
            }
            "form15" => {
                let v = parse_reals(args, 10, "form15")?;
                let p = Form15Params {
                    omega: [v[0], v[1], v[2], v[3]],
                    a: c(v[4], v[5]),
                    e: c(v[6], v[7]),
                    f: c(v[8], v[9]),
                };
                p.validate()?;
                Ok(FamilySpec::Form15(p))
            }
            "bell" => Ok(FamilySpec::Named(NamedState::Bell(args.parse()?))),
            "ghz" => Ok(FamilySpec::Named(NamedState::Ghz(parse_count(args, "ghz")?))),
            "w" => Ok(FamilySpec::Named(NamedState::W(parse_count(args, "w")?))),
            "basis" => Ok(FamilySpec::Named(NamedState::Basis(args.trim().to_string()))),
            "mixed" => {
                let n = parse_count(args, "mixed")?;
                check_sampler_qubits(n)?;
                Ok(FamilySpec::MaximallyMixed(n))
            }
            _ => Err(Error::UnknownState(s.to_string())),
        }
    }
}

impl FamilySpec {
    pub fn build(&self) -> Result<State> {
        Ok(match self {
            FamilySpec::Werner(p) => State::Density(werner(p)?),
            FamilySpec::Mems(p) => State::Density(mems(p)?),
            FamilySpec::Form15(p) => State::Density(form15_state(p)?),
            FamilySpec::Named(name) => State::Pure(named_state(name)?),
            FamilySpec::MaximallyMixed(n) => {
                let dim = 1usize << n;
                State::Density(DensityMatrix::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))?)
            }
        })
    }
}
