//! Bi-orthonormal bases: orthonormal for the Hilbert product and for the
//! spin-flip form at the same time.
//!
//! For even `n` every such basis is the generalized magic basis rotated by a
//! real orthogonal matrix. For odd `n` the product basis built from
//! `{i|0>, |1>}` plays the same role under unitary-symplectic matrices.
//!
//! Magic basis ordering: representative labels are the indices `k` with the
//! top bit clear, in ascending order, and `e+_k` precedes `e-_k`, so basis
//! index `2k` is `e+_k` and `2k + 1` is `e-_k`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spinflip::{flip_phase, flip_state, FormKind};
use crate::tensor_core::{
    check_qubits, identity_residual, seeded_rng, CMatrix, PureState, Tolerances, C64, I,
    MAX_DENSE_QUBITS, MAX_STATE_QUBITS, ONE, ZERO,
};

pub const ORDER_MAGIC: &str = "magic: representative k ascending (top bit 0), e+ before e-";
pub const ORDER_PRODUCT: &str = "product: complement pairs (a, ~a), even-popcount member first";
pub const ORDER_TRANSFORMED: &str = "transformed: rows of S applied to a canonical basis";
pub const ORDER_COMPUTATIONAL: &str = "computational: flat index order";

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    n: usize,
    vectors: Vec<PureState>,
    ordering: String,
}

impl BasisSet {
    pub fn new(n: usize, vectors: Vec<PureState>, ordering: impl Into<String>) -> Result<Self> {
        check_qubits(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        if vectors.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.dim(),
            });
        }
        Ok(Self {
            n,
            vectors,
            ordering: ordering.into(),
        })
    }

    pub fn computational(n: usize) -> Result<Self> {
        check_qubits(n, MAX_DENSE_QUBITS)?;
        let vectors = (0..1usize << n)
            .map(|k| PureState::basis(n, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vectors, ORDER_COMPUTATIONAL)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn ordering(&self) -> &str {
        &self.ordering
    }

    /// Row `j` holds the amplitudes of vector `j`.
    pub fn matrix(&self) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_fn(dim, dim, |j, k| self.vectors[j].amplitudes()[k])
    }

    /// New basis with vectors `x_j = Σ_l s_{jl} b_l`. No checks are applied.
    pub fn transformed(&self, s: &CMatrix) -> Result<Self> {
        if s.nrows() != self.dim() || s.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: s.nrows(),
            });
        }
        let rows = s * self.matrix();
        Self::from_rows(self.n, &rows, ORDER_TRANSFORMED)
    }

    fn from_rows(n: usize, rows: &CMatrix, ordering: &str) -> Result<Self> {
        let vectors = rows
            .row_iter()
            .map(|r| PureState::new(n, r.iter().copied().collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vectors, ordering)
    }

    /// Replaces vector `j`, keeping the ordering tag.
    pub fn with_vector(&self, j: usize, v: PureState) -> Result<Self> {
        let mut vectors = self.vectors.clone();
        let slot = vectors.get_mut(j).ok_or(Error::DimensionMismatch {
            expected: self.dim(),
            actual: j,
        })?;
        *slot = v;
        Self::new(self.n, vectors, self.ordering.clone())
    }
}

fn require_even(n: usize, what: &'static str) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(Error::Parity {
            what,
            expected: "even",
            n,
        });
    }
    Ok(())
}

fn require_odd(n: usize, what: &'static str) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::Parity {
            what,
            expected: "odd",
            n,
        });
    }
    Ok(())
}

/// Basis vector `index` of the magic basis, built in `O(2^n)`.
pub fn magic_vector(n: usize, index: usize) -> Result<PureState> {
    require_even(n, "magic basis")?;
    check_qubits(n, MAX_STATE_QUBITS)?;
    let dim = 1usize << n;
    if index >= dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: index,
        });
    }
    let k = index / 2;
    let kc = k ^ (dim - 1);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let p = flip_phase(k, n);
    let mut amp = vec![ZERO; dim];
    if index.is_multiple_of(2) {
        amp[k] = C64::new(h, 0.0);
        amp[kc] = p * h;
    } else {
        amp[k] = I * h;
        amp[kc] = -I * p * h;
    }
    PureState::new(n, amp)
}

pub fn magic_basis(n: usize) -> Result<BasisSet> {
    require_even(n, "magic basis")?;
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let vectors = (0..1usize << n)
        .map(|j| magic_vector(n, j))
        .collect::<Result<Vec<_>>>()?;
    BasisSet::new(n, vectors, ORDER_MAGIC)
}

/// Coefficients `c_l = <e_l|ψ>` of `ψ` in the magic basis, computed without
/// materializing the basis.
pub fn magic_coefficients(psi: &PureState) -> Result<Vec<C64>> {
    let n = psi.n();
    require_even(n, "magic coefficients")?;
    let mask = psi.dim() - 1;
    let amp = psi.amplitudes();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(psi.dim());
    for k in 0..psi.dim() / 2 {
        let kc = k ^ mask;
        let pc = flip_phase(k, n).conj();
        out.push((amp[k] + pc * amp[kc]) * h);
        out.push(-I * (amp[k] - pc * amp[kc]) * h);
    }
    Ok(out)
}

/// `Σ_l c_l e_l` over the magic basis.
pub fn magic_combination(n: usize, coeffs: &[C64]) -> Result<PureState> {
    require_even(n, "magic combination")?;
    check_qubits(n, MAX_STATE_QUBITS)?;
    let dim = 1usize << n;
    if coeffs.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: coeffs.len(),
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amp = vec![ZERO; dim];
    for k in 0..dim / 2 {
        let kc = k ^ (dim - 1);
        let p = flip_phase(k, n);
        let (plus, minus) = (coeffs[2 * k], coeffs[2 * k + 1]);
        amp[k] = (plus + I * minus) * h;
        amp[kc] = p * (plus - I * minus) * h;
    }
    PureState::new(n, amp)
}

/// Product labels in canonical pair order: for each representative `k` (top bit
/// clear, ascending) the member of `{k, ~k}` with even popcount comes first.
pub fn product_pair_order(n: usize) -> Vec<usize> {
    let dim = 1usize << n;
    let mut order = Vec::with_capacity(dim);
    for k in 0..dim / 2 {
        let kc = k ^ (dim - 1);
        if k.count_ones() % 2 == 0 {
            order.extend([k, kc]);
        } else {
            order.extend([kc, k]);
        }
    }
    order
}

/// Tensor product with qubit factor `i|0>` for bit 0 and `|1>` for bit 1.
pub fn product_vector(n: usize, label: usize) -> Result<PureState> {
    check_qubits(n, MAX_STATE_QUBITS)?;
    let zeros = n - label.count_ones() as usize;
    let phase = crate::spinflip::i_pow(zeros);
    Ok(PureState::basis(n, label)?.scale(phase))
}

pub fn product_biortho_basis(n: usize) -> Result<BasisSet> {
    require_odd(n, "product bi-orthonormal basis")?;
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let vectors = product_pair_order(n)
        .into_iter()
        .map(|a| product_vector(n, a))
        .collect::<Result<Vec<_>>>()?;
    BasisSet::new(n, vectors, ORDER_PRODUCT)
}

/// Block-diagonal `J` with blocks `[[0, 1], [-1, 0]]`.
pub fn canonical_j(dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| {
        if r % 2 == 0 && c == r + 1 {
            ONE
        } else if r % 2 == 1 && c + 1 == r {
            -ONE
        } else {
            ZERO
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub hilbert_gram: CMatrix,
    pub form_gram: CMatrix,
}

pub fn compute_grams(basis: &BasisSet) -> GramPair {
    let x = basis.matrix();
    let dim = basis.dim();
    let flipped_rows: Vec<PureState> = basis.vectors().iter().map(flip_state).collect();
    let flipped = CMatrix::from_fn(dim, dim, |j, k| flipped_rows[j].amplitudes()[k]);
    let xt = x.transpose();
    GramPair {
        hilbert_gram: x.conjugate() * &xt,
        form_gram: flipped.conjugate() * &xt,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BiorthoVerdict {
    pub passed: bool,
    pub kind: FormKind,
    pub hilbert_residual: f64,
    pub form_residual: f64,
    /// Frobenius distance of the Hilbert Gram from being Hermitian.
    pub hermitian_residual: f64,
    /// Distance of the form Gram from (anti)symmetry for this parity.
    pub symmetry_residual: f64,
}

#[derive(Debug, Clone)]
pub struct BiorthoCheck {
    pub grams: GramPair,
    pub verdict: BiorthoVerdict,
}

/// Form Gram target: identity for even `n`, canonical `J` for odd `n`.
pub fn form_target(n: usize) -> CMatrix {
    let dim = 1usize << n;
    match FormKind::for_qubits(n) {
        FormKind::Orthogonal => CMatrix::identity(dim, dim),
        FormKind::Symplectic => canonical_j(dim),
    }
}

pub fn check_biorthonormal(basis: &BasisSet, tol: &Tolerances) -> BiorthoCheck {
    let grams = compute_grams(basis);
    let kind = FormKind::for_qubits(basis.n());
    let hilbert_residual = identity_residual(&grams.hilbert_gram);
    let form_residual = (&grams.form_gram - form_target(basis.n())).norm();
    let hermitian_residual = (&grams.hilbert_gram - grams.hilbert_gram.adjoint()).norm();
    let symmetry_residual = (&grams.form_gram
        - grams.form_gram.transpose() * C64::new(kind.symmetry_sign(), 0.0))
    .norm();
    let passed = hilbert_residual <= tol.tol_gram && form_residual <= tol.tol_gram;
    BiorthoCheck {
        grams,
        verdict: BiorthoVerdict {
            passed,
            kind,
            hilbert_residual,
            form_residual,
            hermitian_residual,
            symmetry_residual,
        },
    }
}

pub(crate) fn require_biorthonormal(basis: &BasisSet, tol: &Tolerances) -> Result<()> {
    let v = check_biorthonormal(basis, tol).verdict;
    if !v.passed {
        return Err(Error::Precondition {
            property: "a bi-orthonormal basis",
            residual: v.hilbert_residual.max(v.form_residual),
            tol: tol.tol_gram,
        });
    }
    Ok(())
}

fn real_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Frobenius norm of `OᵀO - I` for a real matrix.
pub fn orthogonality_residual(o: &DMatrix<f64>) -> f64 {
    let g = o.transpose() * o;
    (g - DMatrix::<f64>::identity(o.nrows(), o.ncols())).norm()
}

/// Vectors `x_j = Σ_l O_{jl} e_l` over the magic basis.
pub fn basis_from_orthogonal(o: &DMatrix<f64>, n: usize, tol: &Tolerances) -> Result<BasisSet> {
    require_even(n, "basis from orthogonal matrix")?;
    let magic = magic_basis(n)?;
    if o.nrows() != magic.dim() || o.ncols() != magic.dim() {
        return Err(Error::DimensionMismatch {
            expected: magic.dim(),
            actual: o.nrows(),
        });
    }
    if o.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let residual = orthogonality_residual(o);
    if residual > tol.tol_residual {
        return Err(Error::Precondition {
            property: "real orthogonal",
            residual,
            tol: tol.tol_residual,
        });
    }
    magic.transformed(&real_to_complex(o))
}

/// Complex input variant that rejects matrices with an imaginary part.
pub fn basis_from_orthogonal_complex(o: &CMatrix, n: usize, tol: &Tolerances) -> Result<BasisSet> {
    let imag = o.iter().map(|x| x.im.abs()).fold(0.0, f64::max);
    if imag > tol.tol_residual {
        return Err(Error::Precondition {
            property: "real",
            residual: imag,
            tol: tol.tol_residual,
        });
    }
    basis_from_orthogonal(&o.map(|x| x.re), n, tol)
}

/// Coefficients `c_l = <b_l|ψ>` of `ψ` in an orthonormal basis.
pub fn coefficients(psi: &PureState, basis: &BasisSet) -> Result<Vec<C64>> {
    if psi.n() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: psi.dim(),
        });
    }
    basis
        .vectors()
        .iter()
        .map(|b| crate::tensor_core::hilbert_inner(b, psi))
        .collect()
}

/// Recovers the real orthogonal matrix that maps the magic basis onto `basis`.
pub fn decompose_basis(basis: &BasisSet, tol: &Tolerances) -> Result<DMatrix<f64>> {
    require_even(basis.n(), "magic decomposition")?;
    require_biorthonormal(basis, tol)?;
    let magic = magic_basis(basis.n())?;
    let c = basis.matrix() * magic.matrix().adjoint();
    let imag = c.iter().map(|x| x.im.abs()).fold(0.0, f64::max);
    let real = c.map(|x| x.re);
    let residual = imag.max(orthogonality_residual(&real));
    if residual > tol.tol_residual {
        return Err(Error::Precondition {
            property: "a real orthogonal coefficient matrix",
            residual,
            tol: tol.tol_residual,
        });
    }
    Ok(real)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductDecomposition {
    #[serde(skip)]
    pub matrix: CMatrix,
    pub unitary_residual: f64,
    pub symplectic_residual: f64,
}

/// Coefficient matrix of an odd-`n` basis over the canonical product basis,
/// with its unitary and symplectic residuals.
pub fn decompose_product_basis(basis: &BasisSet) -> Result<ProductDecomposition> {
    require_odd(basis.n(), "product decomposition")?;
    let product = product_biortho_basis(basis.n())?;
    let s = basis.matrix() * product.matrix().adjoint();
    let (unitary_residual, symplectic_residual) = unitary_symplectic_residuals(&s);
    Ok(ProductDecomposition {
        matrix: s,
        unitary_residual,
        symplectic_residual,
    })
}

/// `(‖S†S - I‖, ‖SᵀJS - J‖)`.
pub fn unitary_symplectic_residuals(s: &CMatrix) -> (f64, f64) {
    let j = canonical_j(s.nrows());
    (
        identity_residual(&(s.adjoint() * s)),
        (s.transpose() * &j * s - &j).norm(),
    )
}

/// Real orthogonal matrix from the QR factorization of a Gaussian matrix,
/// with column signs fixed so that `R` has a positive diagonal.
pub fn random_real_orthogonal(dim: usize, seed: u64) -> Result<DMatrix<f64>> {
    random_real_orthogonal_with(dim, &mut seeded_rng(seed))
}

pub fn random_real_orthogonal_with<R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let (mut q, r) = g.qr().unpack();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

/// `exp(X)` for a Gaussian `X` that is anti-Hermitian and satisfies
/// `XᵀJ + JX = 0`. `X` is the projection `(A + J Aᵀ J) / 2` of a Gaussian
/// anti-Hermitian `A`; the projection keeps anti-Hermiticity.
pub fn random_unitary_symplectic(n: usize, seed: u64) -> Result<CMatrix> {
    random_unitary_symplectic_with(n, &mut seeded_rng(seed))
}

pub fn random_unitary_symplectic_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMatrix> {
    require_odd(n, "unitary-symplectic sampling")?;
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let dim = 1usize << n;
    let g = crate::tensor_core::random_ginibre(dim, rng);
    let a = (&g - g.adjoint()) * C64::new(0.5, 0.0);
    let j = canonical_j(dim);
    let x = (&a + &j * a.transpose() * &j) * C64::new(0.5, 0.0);
    Ok(x.exp())
}

/// Vectors `x_j = Σ_l S_{jl} b_l` over the canonical product basis.
pub fn basis_from_unitary_symplectic(s: &CMatrix, n: usize, tol: &Tolerances) -> Result<BasisSet> {
    require_odd(n, "basis from unitary-symplectic matrix")?;
    let product = product_biortho_basis(n)?;
    if s.nrows() != product.dim() || s.ncols() != product.dim() {
        return Err(Error::DimensionMismatch {
            expected: product.dim(),
            actual: s.nrows(),
        });
    }
    let (u, sp) = unitary_symplectic_residuals(s);
    if u > tol.tol_residual {
        return Err(Error::Precondition {
            property: "unitary",
            residual: u,
            tol: tol.tol_residual,
        });
    }
    if sp > tol.tol_residual {
        return Err(Error::Precondition {
            property: "symplectic",
            residual: sp,
            tol: tol.tol_residual,
        });
    }
    product.transformed(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfConjugacy {
    pub passed: bool,
    pub max_residual: f64,
}

/// Checks `ψ_{~k} = conj(ψ_k) (-1)^popcount(k) i^n` for every index.
pub fn self_conjugacy_coefficient_check(
    psi: &PureState,
    tol: &Tolerances,
) -> Result<SelfConjugacy> {
    let n = psi.n();
    require_even(n, "self-conjugacy check")?;
    let mask = psi.dim() - 1;
    let amp = psi.amplitudes();
    let max_residual = (0..psi.dim())
        .map(|k| (amp[k ^ mask] - amp[k].conj() * flip_phase(k, n)).norm())
        .fold(0.0, f64::max);
    Ok(SelfConjugacy {
        passed: max_residual <= tol.tol_residual,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::random_state;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn magic_two_qubit_vectors() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| C64::new(re * h, im * h);
        let expected = [
            vec![c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)],
            vec![c(0.0, 1.0), ZERO, ZERO, c(0.0, 1.0)],
            vec![ZERO, c(1.0, 0.0), c(1.0, 0.0), ZERO],
            vec![ZERO, c(0.0, 1.0), c(0.0, -1.0), ZERO],
        ];
        let b = magic_basis(2).unwrap();
        for (v, e) in b.vectors().iter().zip(expected.iter()) {
            for (x, y) in v.amplitudes().iter().zip(e) {
                assert!((x - y).norm() < 1e-15, "{v:?}");
            }
        }
    }

    #[test]
    fn magic_vectors_self_conjugate_and_biorthonormal() {
        for n in [2, 4] {
            let b = magic_basis(n).unwrap();
            for v in b.vectors() {
                assert!(flip_state(v).max_abs_diff(v).unwrap() <= 1e-15);
                assert!(self_conjugacy_coefficient_check(v, &tol()).unwrap().passed);
            }
            assert!(check_biorthonormal(&b, &tol()).verdict.passed);
        }
        assert!(magic_basis(3).is_err());
    }

    #[test]
    fn magic_coefficients_match_dense_projection() {
        let psi = random_state(4, 8).unwrap();
        let b = magic_basis(4).unwrap();
        let dense = coefficients(&psi, &b).unwrap();
        let fast = magic_coefficients(&psi).unwrap();
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).norm() < 1e-14);
        }
        let back = magic_combination(4, &fast).unwrap();
        assert!(back.max_abs_diff(&psi).unwrap() < 1e-14);
    }

    #[test]
    fn product_basis_single_qubit() {
        let b = product_biortho_basis(1).unwrap();
        assert_eq!(b.vectors()[0], PureState::basis(1, 0).unwrap().scale(I));
        assert_eq!(b.vectors()[1], PureState::basis(1, 1).unwrap());
        let g = compute_grams(&b);
        assert_eq!(
            g.form_gram,
            CMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO])
        );
    }

    #[test]
    fn product_basis_three_qubits() {
        let b = product_biortho_basis(3).unwrap();
        for v in b.vectors() {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
        let check = check_biorthonormal(&b, &tol());
        assert!(check.verdict.passed, "{:?}", check.verdict);
        assert!(product_biortho_basis(2).is_err());
    }

    #[test]
    fn computational_basis_fails() {
        let b = BasisSet::computational(2).unwrap();
        let check = check_biorthonormal(&b, &tol());
        assert!(!check.verdict.passed);
        // form Gram is anti-diagonal
        for j in 0..4 {
            for k in 0..4 {
                let v = check.grams.form_gram[(j, k)];
                assert_eq!(v != ZERO, j + k == 3);
            }
        }
    }

    #[test]
    fn orthogonal_round_trip() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(
            basis_from_orthogonal(&id, 2, &tol()).unwrap().vectors(),
            magic_basis(2).unwrap().vectors()
        );
        let o = random_real_orthogonal(4, 3).unwrap();
        let b = basis_from_orthogonal(&o, 2, &tol()).unwrap();
        assert!(check_biorthonormal(&b, &tol()).verdict.passed);
        let back = decompose_basis(&b, &tol()).unwrap();
        assert!((back - o).norm() < 1e-12);
        let reflection =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 1.0, -1.0]));
        let b = basis_from_orthogonal(&reflection, 2, &tol()).unwrap();
        assert!(check_biorthonormal(&b, &tol()).verdict.passed);
        let m = decompose_basis(&magic_basis(2).unwrap(), &tol()).unwrap();
        assert!((m - id).norm() < 1e-14);
    }

    #[test]
    fn orthogonal_rejects_bad_input() {
        let mut bad = DMatrix::<f64>::identity(4, 4);
        bad[(0, 0)] = 2.0;
        assert!(matches!(
            basis_from_orthogonal(&bad, 2, &tol()),
            Err(Error::Precondition {
                property: "real orthogonal",
                ..
            })
        ));
        let mut complex = CMatrix::identity(4, 4);
        complex[(0, 1)] = C64::new(0.0, 0.5);
        assert!(basis_from_orthogonal_complex(&complex, 2, &tol()).is_err());
        assert!(basis_from_orthogonal(&DMatrix::identity(8, 8), 3, &tol()).is_err());
    }

    #[test]
    fn phase_perturbed_basis_rejected() {
        let b = magic_basis(2).unwrap();
        let phase = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let v = b.vectors()[1].scale(phase);
        assert!(!self_conjugacy_coefficient_check(&v, &tol()).unwrap().passed);
        let perturbed = b.with_vector(1, v).unwrap();
        assert!(decompose_basis(&perturbed, &tol()).is_err());
    }

    #[test]
    fn random_orthogonal_properties() {
        let o = random_real_orthogonal(6, 12).unwrap();
        assert!(orthogonality_residual(&o) <= tol().tol_residual);
        assert_eq!(o, random_real_orthogonal(6, 12).unwrap());
    }

    #[test]
    fn unitary_symplectic_sampling() {
        for seed in 0..10 {
            let s = random_unitary_symplectic(3, seed).unwrap();
            let (u, sp) = unitary_symplectic_residuals(&s);
            assert!(u <= tol().tol_residual && sp <= tol().tol_residual);
            let two = random_unitary_symplectic(1, seed).unwrap();
            assert!((two.determinant() - ONE).norm() <= tol().tol_residual);
        }
    }

    #[test]
    fn unitary_symplectic_bases() {
        let id = CMatrix::identity(8, 8);
        assert_eq!(
            basis_from_unitary_symplectic(&id, 3, &tol())
                .unwrap()
                .vectors(),
            product_biortho_basis(3).unwrap().vectors()
        );
        let s = random_unitary_symplectic(3, 4).unwrap();
        let b = basis_from_unitary_symplectic(&s, 3, &tol()).unwrap();
        assert!(check_biorthonormal(&b, &tol()).verdict.passed);
        let d = decompose_product_basis(&b).unwrap();
        assert!(d.unitary_residual < 1e-10 && d.symplectic_residual < 1e-10);
        let mut squeeze = CMatrix::identity(8, 8);
        for m in 0..4 {
            squeeze[(2 * m, 2 * m)] = C64::new(2.0, 0.0);
            squeeze[(2 * m + 1, 2 * m + 1)] = C64::new(0.5, 0.0);
        }
        assert!(matches!(
            basis_from_unitary_symplectic(&squeeze, 3, &tol()),
            Err(Error::Precondition {
                property: "unitary",
                ..
            })
        ));
    }

    #[test]
    fn self_conjugacy_examples() {
        assert!(
            !self_conjugacy_coefficient_check(&PureState::basis(2, 0).unwrap(), &tol())
                .unwrap()
                .passed
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(2, vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(-h, 0.0)]).unwrap();
        assert!(
            self_conjugacy_coefficient_check(&psi, &tol())
                .unwrap()
                .passed
        );
        assert!(
            self_conjugacy_coefficient_check(&PureState::basis(1, 0).unwrap(), &tol()).is_err()
        );
    }

    #[test]
    fn magic_cardinality() {
        for n in [2, 4, 6] {
            let dim = 1usize << n;
            let reps = (0..dim).filter(|k| k < &(k ^ (dim - 1))).count();
            assert_eq!(reps, 1 << (n - 1));
            assert_eq!(magic_basis(n).unwrap().dim(), 2 * reps);
        }
    }
}
