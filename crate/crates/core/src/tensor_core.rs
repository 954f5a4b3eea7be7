//! Complex state and operator substrate.
//!
//! Flat amplitude indices follow the label order `|j_1 j_2 ... j_n>`: qubit 1
//! is the most significant bit of the index.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type Mat2 = Matrix2<C64>;
pub type Rng64 = ChaCha8Rng;

/// Largest qubit count accepted for dense state vectors.
pub const MAX_STATE_QUBITS: usize = 24;
/// Largest qubit count for which a `2^n x 2^n` operator is materialized.
pub const MAX_DENSE_QUBITS: usize = 12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical thresholds shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub tol_norm: f64,
    pub tol_gram: f64,
    pub tol_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_norm: 1e-12,
            tol_gram: 1e-10,
            tol_residual: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(tol_norm: f64, tol_gram: f64, tol_residual: f64) -> Result<Self> {
        for t in [tol_norm, tol_gram, tol_residual] {
            if t < 0.0 || !t.is_finite() {
                return Err(Error::Format(format!(
                    "tolerance {t} must be finite and >= 0"
                )));
            }
        }
        Ok(Self {
            tol_norm,
            tol_gram,
            tol_residual,
        })
    }
}

pub(crate) fn check_qubits(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::QubitCount { n, max });
    }
    Ok(())
}

/// Bit of qubit `q` (1-based, qubit 1 leftmost) in the flat index `k`.
#[inline]
pub fn qubit_bit(k: usize, q: usize, n: usize) -> usize {
    (k >> (n - q)) & 1
}

/// Bit label `[j_1, ..., j_n]` of a flat index.
pub fn index_to_label(k: usize, n: usize) -> Vec<u8> {
    (1..=n).map(|q| qubit_bit(k, q, n) as u8).collect()
}

pub fn label_to_index(label: &[u8]) -> usize {
    label
        .iter()
        .fold(0, |acc, &b| (acc << 1) | (b as usize & 1))
}

/// An n-qubit pure state as a flat vector of `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amp: Vec<C64>,
}

impl PureState {
    /// Wraps `amp` without normalizing it.
    pub fn new(n: usize, amp: Vec<C64>) -> Result<Self> {
        check_qubits(n, MAX_STATE_QUBITS)?;
        let expected = 1usize << n;
        if amp.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amp.len(),
            });
        }
        Ok(Self { n, amp })
    }

    /// Infers `n` from the amplitude count, which must be a power of two.
    pub fn from_amplitudes(amp: Vec<C64>) -> Result<Self> {
        let len = amp.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                actual: len,
            });
        }
        Self::new(len.trailing_zeros() as usize, amp)
    }

    /// Computational basis vector `|k>`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        check_qubits(n, MAX_STATE_QUBITS)?;
        let dim = 1usize << n;
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: k,
            });
        }
        let mut amp = vec![ZERO; dim];
        amp[k] = ONE;
        Ok(Self { n, amp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: &Tolerances) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol.tol_norm
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            n: self.n,
            amp: self.amp.iter().map(|x| a * x).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &PureState, b: C64) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            n: self.n,
            amp: self
                .amp
                .iter()
                .zip(&other.amp)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn same_shape(&self, other: &PureState) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    pub fn to_column(&self) -> CMatrix {
        CMatrix::from_column_slice(self.dim(), 1, &self.amp)
    }
}

/// `make_state`: the constructor under its operational name.
pub fn make_state(n: usize, amp: Vec<C64>) -> Result<PureState> {
    PureState::new(n, amp)
}

/// `<psi|phi>`, conjugate-linear in `psi`.
pub fn hilbert_inner(psi: &PureState, phi: &PureState) -> Result<C64> {
    psi.same_shape(phi)?;
    Ok(psi
        .amp
        .iter()
        .zip(&phi.amp)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

pub fn normalize(psi: &PureState) -> Result<PureState> {
    psi.normalize()
}

/// Kronecker product of two states, `psi` on the leading qubits.
pub fn tensor_states(psi: &PureState, phi: &PureState) -> Result<PureState> {
    let n = psi.n + phi.n;
    check_qubits(n, MAX_STATE_QUBITS)?;
    let mut amp = Vec::with_capacity(psi.dim() * phi.dim());
    for a in &psi.amp {
        amp.extend(phi.amp.iter().map(|b| a * b));
    }
    Ok(PureState { n, amp })
}

/// Dense operator on the full `2^n` dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalOperator {
    n: usize,
    mat: CMatrix,
}

impl GlobalOperator {
    pub fn new(n: usize, mat: CMatrix) -> Result<Self> {
        check_qubits(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: if mat.nrows() != dim {
                    mat.nrows()
                } else {
                    mat.ncols()
                },
            });
        }
        Ok(Self { n, mat })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        let dim = mat.nrows();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                actual: dim,
            });
        }
        Self::new(dim.trailing_zeros() as usize, mat)
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            mat: CMatrix::identity(dim, dim),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn compose(&self, other: &GlobalOperator) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self {
            n: self.n,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            n: self.n,
            mat: self.mat.map(|x| a * x),
        }
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.mat
            .clone()
            .try_inverse()
            .map(|mat| Self { n: self.n, mat })
    }
}

/// Matrix-vector product.
pub fn apply(m: &GlobalOperator, psi: &PureState) -> Result<PureState> {
    if m.n != psi.n {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            actual: psi.dim(),
        });
    }
    let dim = psi.dim();
    let amp = (0..dim)
        .map(|r| m.mat.row(r).iter().zip(&psi.amp).map(|(a, b)| a * b).sum())
        .collect();
    Ok(PureState { n: psi.n, amp })
}

/// Ordered single-qubit operators `A_1 ... A_n` standing for `A_1 ⊗ ... ⊗ A_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperatorList {
    ops: Vec<Mat2>,
}

impl LocalOperatorList {
    pub fn new(ops: Vec<Mat2>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyOperatorList);
        }
        check_qubits(ops.len(), MAX_STATE_QUBITS)?;
        Ok(Self { ops })
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Mat2] {
        &self.ops
    }

    /// Qubit-wise products `A_i B_i`.
    pub fn compose(&self, other: &LocalOperatorList) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: other.n(),
            });
        }
        Ok(Self {
            ops: self
                .ops
                .iter()
                .zip(&other.ops)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&Mat2) -> Mat2) -> Self {
        Self {
            ops: self.ops.iter().map(f).collect(),
        }
    }
}

/// Materializes `A_1 ⊗ ... ⊗ A_n`.
pub fn expand_local(list: &LocalOperatorList) -> Result<GlobalOperator> {
    let n = list.n();
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let dim = 1usize << n;
    let mat = CMatrix::from_fn(dim, dim, |r, c| {
        list.ops
            .iter()
            .enumerate()
            .map(|(i, a)| a[(qubit_bit(r, i + 1, n), qubit_bit(c, i + 1, n))])
            .product()
    });
    Ok(GlobalOperator { n, mat })
}

/// Applies each local operator to its own qubit without forming the dense matrix.
pub fn apply_local(list: &LocalOperatorList, psi: &PureState) -> Result<PureState> {
    if list.n() != psi.n {
        return Err(Error::DimensionMismatch {
            expected: list.n(),
            actual: psi.n,
        });
    }
    let n = psi.n;
    let mut amp = psi.amp.clone();
    for (i, a) in list.ops.iter().enumerate() {
        let stride = 1usize << (n - 1 - i);
        for base in 0..amp.len() {
            if base & stride != 0 {
                continue;
            }
            let (x0, x1) = (amp[base], amp[base | stride]);
            amp[base] = a[(0, 0)] * x0 + a[(0, 1)] * x1;
            amp[base | stride] = a[(1, 0)] * x0 + a[(1, 1)] * x1;
        }
    }
    Ok(PureState { n, amp })
}

pub fn det2(a: &Mat2) -> C64 {
    a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]
}

/// Frobenius norm of `m - I`.
pub fn identity_residual(m: &CMatrix) -> f64 {
    let mut acc = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let d = if r == c { m[(r, c)] - ONE } else { m[(r, c)] };
            acc += d.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

pub fn seeded_rng(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state drawn from i.i.d. complex Gaussian amplitudes.
pub fn random_state(n: usize, seed: u64) -> Result<PureState> {
    random_state_with(n, &mut seeded_rng(seed))
}

pub fn random_state_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    check_qubits(n, MAX_STATE_QUBITS)?;
    loop {
        let amp: Vec<C64> = (0..1usize << n).map(|_| complex_gaussian(rng)).collect();
        let state = PureState { n, amp };
        // a zero draw has probability zero but is not excluded by the type
        if let Ok(s) = state.normalize() {
            return Ok(s);
        }
    }
}

pub fn random_ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Principal square root used to rescale onto unit determinant.
fn unit_det(a: &Mat2) -> Mat2 {
    let s = det2(a).sqrt();
    a.map(|x| x / s)
}

/// Ginibre 2x2 matrix rescaled to determinant one.
pub fn random_sl2(seed: u64) -> Result<Mat2> {
    random_sl2_with(&mut seeded_rng(seed))
}

pub fn random_sl2_with<R: Rng + ?Sized>(rng: &mut R) -> Result<Mat2> {
    const ATTEMPTS: usize = 100;
    for _ in 0..ATTEMPTS {
        let a = Mat2::from_fn(|_, _| complex_gaussian(rng));
        if det2(&a).norm() >= 1e-6 {
            return Ok(unit_det(&a));
        }
    }
    Err(Error::Sampling { attempts: ATTEMPTS })
}

/// Uniform element of SU(2) built from a point on the 3-sphere.
pub fn random_su2(seed: u64) -> Mat2 {
    random_su2_with(&mut seeded_rng(seed))
}

pub fn random_su2_with<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let a = complex_gaussian(rng);
        let b = complex_gaussian(rng);
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if r > 0.0 {
            let (a, b) = (a / r, b / r);
            return Mat2::new(a, -b.conj(), b, a.conj());
        }
    }
}

/// Random local operator list with each factor in SL(2).
pub fn random_sl2_list_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LocalOperatorList> {
    let ops = (0..n)
        .map(|_| random_sl2_with(rng))
        .collect::<Result<Vec<_>>>()?;
    LocalOperatorList::new(ops)
}

pub fn random_su2_list_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LocalOperatorList> {
    LocalOperatorList::new((0..n).map(|_| random_su2_with(rng)).collect())
}

/// Haar unitary from the QR decomposition of a Ginibre matrix, phases fixed
/// by the diagonal of R.
pub fn random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = random_ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}
