//! Dense complex matrices and the spectral primitives used across the crate.
//!
//! Qubit ordering: qubit 0 is the leftmost (most significant) tensor factor, so
//! in an `n`-qubit basis index the bit for qubit `q` sits at position `n - 1 - q`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest per-entry deviation from Hermiticity accepted by `herm_eig`.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues down to `-PSD_CLIP` are treated as round-off and clipped to zero.
pub const PSD_CLIP: f64 = 1e-9;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense square complex matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a `dim x dim` matrix from row-major entries; the length must be `dim²`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The projector-like outer product `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.entries[i * n + k] * other.entries[k * n + i];
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product, `(a⊗b)[i·db + k, j·db + l] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    ComplexMatrix::from_fn(da * db, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

fn check_qubit_dim(m: &ComplexMatrix, n_qubits: usize) -> Result<()> {
    let expected = 1usize.checked_shl(n_qubits as u32).unwrap_or(0);
    if n_qubits == 0 || m.dim != expected {
        return Err(Error::DimensionMismatch { expected, actual: m.dim });
    }
    Ok(())
}

/// Traces out every qubit not in `keep`. Kept qubits appear in ascending index order.
pub fn partial_trace(m: &ComplexMatrix, n_qubits: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    check_qubit_dim(m, n_qubits)?;
    if keep.is_empty() {
        return Err(Error::InvalidKeepSet);
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidKeepSet);
    }
    if let Some(&bad) = kept.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::QubitOutOfRange { index: bad, n_qubits });
    }
    let traced: Vec<usize> = (0..n_qubits).filter(|q| !kept.contains(q)).collect();

    // Bit masks in the full index for each kept/traced qubit, most significant first.
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let kept_bits: Vec<usize> = kept.iter().map(|&q| bit(q)).collect();
    let traced_bits: Vec<usize> = traced.iter().map(|&q| bit(q)).collect();
    let spread = |local: usize, bits: &[usize]| -> usize {
        let k = bits.len();
        bits.iter()
            .enumerate()
            .filter(|(pos, _)| local >> (k - 1 - pos) & 1 == 1)
            .map(|(_, b)| *b)
            .sum()
    };

    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let kept_idx: Vec<usize> = (0..dk).map(|i| spread(i, &kept_bits)).collect();
    let traced_idx: Vec<usize> = (0..dt).map(|t| spread(t, &traced_bits)).collect();

    Ok(ComplexMatrix::from_fn(dk, |i, j| {
        traced_idx.iter().map(|&t| m[(kept_idx[i] | t, kept_idx[j] | t)]).sum()
    }))
}

/// Transposes the tensor factor of qubit `transpose_on`, leaving the others untouched.
pub fn partial_transpose(m: &ComplexMatrix, n_qubits: usize, transpose_on: usize) -> Result<ComplexMatrix> {
    check_qubit_dim(m, n_qubits)?;
    if transpose_on >= n_qubits {
        return Err(Error::QubitOutOfRange { index: transpose_on, n_qubits });
    }
    let bit = 1usize << (n_qubits - 1 - transpose_on);
    Ok(ComplexMatrix::from_fn(m.dim, |i, j| {
        let (bi, bj) = (i & bit, j & bit);
        m[((i & !bit) | bj, (j & !bit) | bi)]
    }))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEigResult {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    /// Column `j` of the eigenvector matrix.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim;
        (0..n).map(|i| self.eigenvectors[(i, j)]).collect()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k]).sum())
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized as `(m + m†)/2` before the sweeps start.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEigResult> {
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(m.hermitian_part()))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.entries[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: ComplexMatrix) -> HermEigResult {
    let n = a.dim;
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a.entries[p * n + q];
                let babs = b.norm();
                if babs == 0.0 {
                    continue;
                }
                let app = a.entries[p * n + p].re;
                let aqq = a.entries[q * n + q].re;
                // Unitary on (p, q): [[c, -s e^{iφ}], [s e^{-iφ}, c]] with b = |b| e^{iφ}.
                let theta = 0.5 * (2.0 * babs).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let phase = b / babs;
                let sp = phase * s; // s e^{iφ}
                let sm = phase.conj() * s; // s e^{-iφ}

                for k in 0..n {
                    let akp = a.entries[k * n + p];
                    let akq = a.entries[k * n + q];
                    a.entries[k * n + p] = akp * c + akq * sm;
                    a.entries[k * n + q] = akq * c - akp * sp;
                }
                for k in 0..n {
                    let apk = a.entries[p * n + k];
                    let aqk = a.entries[q * n + k];
                    a.entries[p * n + k] = apk * c + aqk * sp;
                    a.entries[q * n + k] = aqk * c - apk * sm;
                }
                a.entries[p * n + q] = Complex64::new(0.0, 0.0);
                a.entries[q * n + p] = Complex64::new(0.0, 0.0);
                a.entries[p * n + p].im = 0.0;
                a.entries[q * n + q].im = 0.0;

                for k in 0..n {
                    let vkp = v.entries[k * n + p];
                    let vkq = v.entries[k * n + q];
                    v.entries[k * n + p] = vkp * c + vkq * sm;
                    v.entries[k * n + q] = vkq * c - vkp * sp;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.entries[j * n + j].re.total_cmp(&a.entries[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| a.entries[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v.entries[i * n + order[j]]);
    HermEigResult { eigenvalues, eigenvectors }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let eig = herm_eig(m)?;
    Ok(*eig.eigenvalues.last().expect("non-empty matrix"))
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    let min = *eig.eigenvalues.last().expect("non-empty matrix");
    if min < -PSD_CLIP {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Hilbert-Schmidt distance `sqrt(Tr[(a - b)²] / 2)` for Hermitian inputs.
pub fn hs_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, actual: b.dim });
    }
    // Tr[(a-b)²] = ‖a-b‖_F² when a - b is Hermitian.
    let sq: f64 = a.entries.iter().zip(&b.entries).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok((0.5 * sq).sqrt())
}

/// The Pauli `σ_y` matrix.
pub fn sigma_y() -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix { dim: 2, entries: vec![z, -i, i, z] }
}

/// `σ_y^{⊗n}`.
pub fn sigma_y_tensor(n: usize) -> ComplexMatrix {
    let y = sigma_y();
    let mut out = ComplexMatrix::identity(1);
    for _ in 0..n {
        out = kron(&out, &y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket(amps: &[f64]) -> Vec<Complex64> {
        amps.iter().map(|&a| c(a, 0.0)).collect()
    }

    fn phi_plus() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&ket(&[h, 0.0, 0.0, h]))
    }

    fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        random_matrix(dim, seed).hermitian_part()
    }

    #[test]
    fn construction_rejects_wrong_length() {
        assert!(ComplexMatrix::new(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, vec![c(1.0, 0.0); 4]).is_ok());
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let yy = kron(&sigma_y(), &sigma_y());
        let mut expected = ComplexMatrix::zeros(4);
        expected[(0, 3)] = c(-1.0, 0.0);
        expected[(1, 2)] = c(1.0, 0.0);
        expected[(2, 1)] = c(1.0, 0.0);
        expected[(3, 0)] = c(-1.0, 0.0);
        assert!(yy.max_abs_diff(&expected) < 1e-15);

        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        assert_eq!(kron(&p0, &p0), ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn partial_trace_examples() {
        let marg = partial_trace(&phi_plus(), 2, &[0]).unwrap();
        assert!(marg.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5])) < 1e-15);

        let zz = ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
        let marg = partial_trace(&zz, 2, &[1]).unwrap();
        assert!(marg.max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = ComplexMatrix::outer(&ket(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]));
        let marg = partial_trace(&ghz, 3, &[0, 1]).unwrap();
        assert!(marg.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_respects_qubit_order() {
        // |01>: qubit 0 in |0>, qubit 1 in |1>.
        let m = ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]);
        let q0 = partial_trace(&m, 2, &[0]).unwrap();
        let q1 = partial_trace(&m, 2, &[1]).unwrap();
        assert_eq!(q0, ComplexMatrix::diag(&[1.0, 0.0]));
        assert_eq!(q1, ComplexMatrix::diag(&[0.0, 1.0]));
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert_eq!(partial_trace(&m, 2, &[]), Err(Error::InvalidKeepSet));
        assert_eq!(partial_trace(&m, 2, &[0, 0]), Err(Error::InvalidKeepSet));
        assert_eq!(partial_trace(&m, 2, &[2]), Err(Error::QubitOutOfRange { index: 2, n_qubits: 2 }));
        assert!(matches!(partial_trace(&m, 3, &[0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_transpose_examples() {
        let a = random_hermitian(2, 1);
        let b = random_matrix(2, 2);
        let pt = partial_transpose(&kron(&a, &b), 2, 1).unwrap();
        assert!(pt.max_abs_diff(&kron(&a, &b.transpose())) < 1e-15);

        let pt = partial_transpose(&kron(&a, &b), 2, 0).unwrap();
        assert!(pt.max_abs_diff(&kron(&a.transpose(), &b)) < 1e-15);

        let x = random_matrix(4, 3);
        let twice = partial_transpose(&partial_transpose(&x, 2, 0).unwrap(), 2, 0).unwrap();
        assert_eq!(twice, x);

        assert!(partial_transpose(&x, 2, 2).is_err());
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let eig = herm_eig(&partial_transpose(&phi_plus(), 2, 0).unwrap()).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (l, e) in eig.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-12, "{:?}", eig.eigenvalues);
        }
    }

    #[test]
    fn herm_eig_examples() {
        let eig = herm_eig(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0]);

        let eig = herm_eig(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| (l - 0.25).abs() < 1e-15));

        let eig = herm_eig(&phi_plus()).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (l, e) in eig.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-14);
        }
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn herm_eig_reconstruction_and_orthonormality() {
        for dim in [2usize, 4, 8] {
            for seed in 0..1000u64 {
                let a = random_hermitian(dim, seed * 31 + dim as u64);
                let eig = herm_eig(&a).unwrap();
                assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
                let rebuilt = eig.reconstruct_with(|l| l);
                let resid = (&a - &rebuilt).frobenius_norm();
                assert!(resid <= 1e-10 * a.frobenius_norm().max(1.0), "dim {dim} seed {seed}: {resid}");
                let v = &eig.eigenvectors;
                let gram = &v.adjoint() * v;
                assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
            }
        }
    }

    #[test]
    fn herm_eig_handles_32_dimensions() {
        let a = random_hermitian(32, 99);
        let eig = herm_eig(&a).unwrap();
        let resid = (&a - &eig.reconstruct_with(|l| l)).frobenius_norm();
        assert!(resid <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn psd_sqrt_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert!(psd_sqrt(&i4).unwrap().max_abs_diff(&i4) < 1e-14);

        let r = psd_sqrt(&ComplexMatrix::diag(&[4.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::diag(&[2.0, 1.0, 0.0, 0.0])) < 1e-14);

        let p = phi_plus();
        assert!(psd_sqrt(&p).unwrap().max_abs_diff(&p) < 1e-12);

        assert!(matches!(
            psd_sqrt(&ComplexMatrix::diag(&[1.0, -1e-6])),
            Err(Error::NotPositive { .. })
        ));
        // Round-off negatives are clipped.
        assert!(psd_sqrt(&ComplexMatrix::diag(&[1.0, -1e-12])).is_ok());
    }

    #[test]
    fn psd_sqrt_squares_back() {
        for seed in 0..50 {
            let g = random_matrix(4, seed);
            let m = &g * &g.adjoint();
            let r = psd_sqrt(&m).unwrap();
            assert!((&(&r * &r) - &m).frobenius_norm() < 1e-8);
            assert!(r.hermiticity_deviation() < 1e-12);
            assert!(min_eigenvalue(&r).unwrap() > -1e-9);
        }
    }

    #[test]
    fn hs_distance_examples() {
        let rho = phi_plus();
        assert_eq!(hs_distance(&rho, &rho).unwrap(), 0.0);

        let zz = ComplexMatrix::diag(&[1.0, 0.0, 0.0, 0.0]);
        let oo = ComplexMatrix::diag(&[0.0, 0.0, 0.0, 1.0]);
        assert!((hs_distance(&zz, &oo).unwrap() - 1.0).abs() < 1e-15);

        let mixed = ComplexMatrix::diag(&[0.5, 0.5]);
        let zero = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!((hs_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-15);

        assert!(hs_distance(&mixed, &zz).is_err());
    }

    #[test]
    fn trace_cyclicity() {
        for seed in 0..100 {
            let a = random_matrix(4, 2 * seed);
            let b = random_matrix(4, 2 * seed + 1);
            assert!(((&a * &b).trace() - (&b * &a).trace()).norm() <= 1e-10);
            assert!((a.trace_product(&b) - (&a * &b).trace()).norm() <= 1e-12);
            let s = c(0.3, -1.2);
            let lin = (&a.scale(s) + &b).trace() - (a.trace() * s + b.trace());
            assert!(lin.norm() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn complementary_partial_traces_share_trace(seed in 0u64..10_000, split in 1usize..3) {
            let g = random_matrix(8, seed);
            let m = &g * &g.adjoint();
            let keep: Vec<usize> = (0..split).collect();
            let rest: Vec<usize> = (split..3).collect();
            let a = partial_trace(&m, 3, &keep).unwrap().trace();
            let b = partial_trace(&m, 3, &rest).unwrap().trace();
            prop_assert!((a - b).norm() <= 1e-12 * m.trace().norm().max(1.0));
            prop_assert!((a - m.trace()).norm() <= 1e-12 * m.trace().norm().max(1.0));
        }

        #[test]
        fn partial_transpose_is_involutive(seed in 0u64..10_000, q in 0usize..3) {
            let x = random_matrix(8, seed);
            let twice = partial_transpose(&partial_transpose(&x, 3, q).unwrap(), 3, q).unwrap();
            prop_assert_eq!(twice, x);
        }

        #[test]
        fn hs_distance_triangle(seed in 0u64..10_000) {
            let a = random_hermitian(4, 3 * seed);
            let b = random_hermitian(4, 3 * seed + 1);
            let c = random_hermitian(4, 3 * seed + 2);
            let ab = hs_distance(&a, &b).unwrap();
            let bc = hs_distance(&b, &c).unwrap();
            let ac = hs_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-10);
            prop_assert!((ab - hs_distance(&b, &a).unwrap()).abs() <= 1e-15);
        }
    }
}
