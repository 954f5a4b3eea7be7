//! The spin flip `|ψ̄> = σ_y^{⊗n} |ψ*>` and the bilinear form `(ψ, φ) = <ψ̄|φ>`.
//!
//! Both state kernels run in `O(2^n)` without materializing `σ_y^{⊗n}`: the
//! flip sends amplitude `k` to the complement index `~k` with phase
//! `(-1)^popcount(k) i^n`. The form is symmetric for even `n` and
//! antisymmetric for odd `n`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor_core::{
    check_qubits, hilbert_inner, random_state_with, seeded_rng, CMatrix, GlobalOperator,
    LocalOperatorList, Mat2, PureState, Tolerances, C64, I, MAX_DENSE_QUBITS, ONE,
};

/// Below this dimension the kernels stay on one thread.
const PAR_THRESHOLD: usize = 1 << 14;
/// Fixed reduction block so that sums do not depend on the thread count.
const REDUCE_BLOCK: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    /// Symmetric form, even `n`.
    Orthogonal,
    /// Antisymmetric form, odd `n`.
    Symplectic,
}

impl FormKind {
    pub fn for_qubits(n: usize) -> Self {
        if n.is_multiple_of(2) {
            FormKind::Orthogonal
        } else {
            FormKind::Symplectic
        }
    }

    /// `+1` for the symmetric form, `-1` for the antisymmetric one.
    pub fn symmetry_sign(self) -> f64 {
        match self {
            FormKind::Orthogonal => 1.0,
            FormKind::Symplectic => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormValue {
    pub value: C64,
    pub kind: FormKind,
}

/// `i^n`, exact.
#[inline]
pub fn i_pow(n: usize) -> C64 {
    [ONE, I, -ONE, -I][n % 4]
}

/// `(-i)^n`, exact.
#[inline]
pub fn minus_i_pow(n: usize) -> C64 {
    [ONE, -I, -ONE, I][n % 4]
}

/// `(-1)^popcount(k) i^n`: the phase picked up by `|k>` under the flip.
#[inline]
pub fn flip_phase(k: usize, n: usize) -> C64 {
    let p = i_pow(n);
    if k.count_ones().is_multiple_of(2) {
        p
    } else {
        -p
    }
}

#[inline]
fn complement_mask(n: usize) -> usize {
    (1usize << n) - 1
}

pub fn flip_state(psi: &PureState) -> PureState {
    let n = psi.n();
    let mask = complement_mask(n);
    let amp = psi.amplitudes();
    // output index m receives the image of ~m
    let value = |m: usize| {
        let k = m ^ mask;
        amp[k].conj() * flip_phase(k, n)
    };
    let out: Vec<C64> = if amp.len() >= PAR_THRESHOLD {
        (0..amp.len()).into_par_iter().map(value).collect()
    } else {
        (0..amp.len()).map(value).collect()
    };
    PureState::new(n, out).expect("flip preserves the dimension")
}

/// `<ψ̄|φ> = (-i)^n Σ_k (-1)^popcount(k) ψ_k φ_{~k}`.
///
/// Terms `k` and `~k` are paired over the lower half of the index range, and
/// the sum is accumulated in fixed blocks combined left to right.
pub fn bilinear_form(psi: &PureState, phi: &PureState) -> Result<FormValue> {
    psi.same_shape(phi)?;
    let n = psi.n();
    let mask = complement_mask(n);
    let half = psi.dim() / 2;
    let (a, b) = (psi.amplitudes(), phi.amplitudes());
    let pair_sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let block = |start: usize, end: usize| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in start..end {
            let kc = k ^ mask;
            let term = a[k] * b[kc] + (a[kc] * b[k]) * pair_sign;
            if k.count_ones() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    };
    let sum: C64 = if half >= PAR_THRESHOLD {
        let blocks = half.div_ceil(REDUCE_BLOCK);
        let partials: Vec<C64> = (0..blocks)
            .into_par_iter()
            .map(|i| block(i * REDUCE_BLOCK, ((i + 1) * REDUCE_BLOCK).min(half)))
            .collect();
        partials.into_iter().sum()
    } else {
        block(0, half)
    };
    Ok(FormValue {
        value: sum * minus_i_pow(n),
        kind: FormKind::for_qubits(n),
    })
}

/// Matrix of the single-qubit flip: `F|0> = i|1>`, `F|1> = -i|0>`.
pub fn flip_matrix_1q() -> Mat2 {
    Mat2::new(C64::new(0.0, 0.0), -I, I, C64::new(0.0, 0.0))
}

/// `Ā = F conj(A) F^{-1}`.
pub fn flip_local(a: &Mat2) -> Mat2 {
    let f = flip_matrix_1q();
    // F is Hermitian and squares to the identity
    f * a.conjugate() * f
}

pub fn flip_local_list(list: &LocalOperatorList) -> LocalOperatorList {
    list.map(flip_local)
}

/// `M̄ = F_n conj(M) F_n^{-1}`, evaluated as an index permutation with phases.
pub fn flip_operator(m: &GlobalOperator) -> Result<GlobalOperator> {
    let n = m.n();
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let mask = complement_mask(n);
    let src = m.matrix();
    let dim = m.dim();
    let mat = CMatrix::from_fn(dim, dim, |r, c| {
        let (rc, cc) = (r ^ mask, c ^ mask);
        flip_phase(rc, n) * src[(rc, cc)].conj() * flip_phase(c, n)
    });
    GlobalOperator::new(n, mat)
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    pub n: usize,
    pub kind: FormKind,
    pub trials: usize,
    pub max_residual: f64,
    pub passed: bool,
}

/// Samples `trials` random pairs and measures `|(ψ,φ) - s (φ,ψ)|` with `s` the
/// symmetry sign for this parity.
pub fn form_parity_check(
    n: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ParityReport> {
    check_qubits(n, crate::tensor_core::MAX_STATE_QUBITS)?;
    let kind = FormKind::for_qubits(n);
    let s = kind.symmetry_sign();
    let mut rng = seeded_rng(seed);
    let mut max_residual: f64 = 0.0;
    for _ in 0..trials {
        let psi = random_state_with(n, &mut rng)?;
        let phi = random_state_with(n, &mut rng)?;
        let ab = bilinear_form(&psi, &phi)?.value;
        let ba = bilinear_form(&phi, &psi)?.value;
        max_residual = max_residual.max((ab - ba * s).norm());
    }
    Ok(ParityReport {
        n,
        kind,
        trials,
        max_residual,
        passed: max_residual <= tol.tol_residual,
    })
}

/// `<ψ̄|φ>` via the flipped state and the Hilbert product.
pub fn form_via_flip(psi: &PureState, phi: &PureState) -> Result<C64> {
    hilbert_inner(&flip_state(psi), phi)
}

/// Explicit `σ_y^{⊗n}` construction, kept as a cross-check for the
/// index kernels.
pub mod dense {
    use super::*;

    pub const MAX_ORACLE_QUBITS: usize = 8;

    fn check(n: usize) -> Result<()> {
        check_qubits(n, MAX_ORACLE_QUBITS)
    }

    /// `σ_y^{⊗n}` as a dense matrix, built by repeated Kronecker products.
    pub fn sigma_y_power(n: usize) -> Result<CMatrix> {
        check(n)?;
        let y = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), -I, I, C64::new(0.0, 0.0)]);
        let mut acc = y.clone();
        for _ in 1..n {
            acc = acc.kronecker(&y);
        }
        Ok(acc)
    }

    pub fn flip_state(psi: &PureState) -> Result<PureState> {
        let y = sigma_y_power(psi.n())?;
        let conj = psi.to_column().map(|x| x.conj());
        let out = y * conj;
        PureState::new(psi.n(), out.as_slice().to_vec())
    }

    pub fn bilinear_form(psi: &PureState, phi: &PureState) -> Result<FormValue> {
        if psi.n() != phi.n() {
            return Err(Error::DimensionMismatch {
                expected: psi.dim(),
                actual: phi.dim(),
            });
        }
        let flipped = flip_state(psi)?;
        Ok(FormValue {
            value: hilbert_inner(&flipped, phi)?,
            kind: FormKind::for_qubits(psi.n()),
        })
    }

    pub fn flip_operator(m: &GlobalOperator) -> Result<GlobalOperator> {
        let y = sigma_y_power(m.n())?;
        GlobalOperator::new(m.n(), &y * m.matrix().map(|x| x.conj()) * &y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::{expand_local, pauli_y, random_sl2_with, ZERO};

    #[test]
    fn flip_single_qubit_basis() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        assert_eq!(flip_state(&zero), one.scale(I));
        assert_eq!(flip_state(&one), zero.scale(-I));
    }

    #[test]
    fn flip_two_qubit_zero() {
        let s = PureState::basis(2, 0).unwrap();
        assert_eq!(flip_state(&s), PureState::basis(2, 3).unwrap().scale(-ONE));
    }

    #[test]
    fn double_flip_sign() {
        let mut rng = seeded_rng(1);
        for n in 1..=6 {
            let psi = random_state_with(n, &mut rng).unwrap();
            let twice = flip_state(&flip_state(&psi));
            let sign = if n % 2 == 0 { ONE } else { -ONE };
            assert!(twice.max_abs_diff(&psi.scale(sign)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn flip_local_examples() {
        let id = Mat2::identity();
        assert_eq!(flip_local(&id), id);
        assert_eq!(flip_local(&pauli_y()), -pauli_y());
        let mut rng = seeded_rng(2);
        let a = random_sl2_with(&mut rng).unwrap();
        let b = random_sl2_with(&mut rng).unwrap();
        let (x, y) = (C64::new(0.3, -1.2), C64::new(-2.0, 0.5));
        let lhs = flip_local(&(a * x + b * y));
        let rhs = flip_local(&a) * x.conj() + flip_local(&b) * y.conj();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn flip_operator_identity_and_tensor() {
        for n in 1..=4 {
            let id = GlobalOperator::identity(n).unwrap();
            assert_eq!(flip_operator(&id).unwrap(), id);
        }
        let mut rng = seeded_rng(3);
        let list = LocalOperatorList::new(vec![
            random_sl2_with(&mut rng).unwrap(),
            random_sl2_with(&mut rng).unwrap(),
        ])
        .unwrap();
        let lhs = flip_operator(&expand_local(&list).unwrap()).unwrap();
        let rhs = expand_local(&flip_local_list(&list)).unwrap();
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-13);
    }

    #[test]
    fn flip_operator_capped() {
        // the cap is enforced at construction; a 13-qubit operator cannot exist
        assert!(GlobalOperator::identity(MAX_DENSE_QUBITS + 1).is_err());
    }

    #[test]
    fn form_single_qubit_value() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        let f = bilinear_form(&zero, &one).unwrap();
        assert_eq!(f.value, -I);
        assert_eq!(f.kind, FormKind::Symplectic);
    }

    #[test]
    fn form_single_qubit_basis_matrix() {
        let b: Vec<_> = (0..2).map(|k| PureState::basis(1, k).unwrap()).collect();
        let got: Vec<C64> = b
            .iter()
            .flat_map(|x| b.iter().map(move |y| bilinear_form(x, y).unwrap().value))
            .collect();
        assert_eq!(got, vec![ZERO, -I, I, ZERO]);
    }

    #[test]
    fn form_odd_diagonal_vanishes() {
        let mut rng = seeded_rng(4);
        for n in [1, 3, 5] {
            let psi = random_state_with(n, &mut rng).unwrap();
            assert!(bilinear_form(&psi, &psi).unwrap().value.norm() < 1e-15);
        }
    }

    #[test]
    fn form_two_qubit_self_value() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(2, vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(-h, 0.0)]).unwrap();
        let f = bilinear_form(&psi, &psi).unwrap();
        assert!((f.value - ONE).norm() < 1e-15);
        assert_eq!(f.kind, FormKind::Orthogonal);
    }

    #[test]
    fn form_dimension_mismatch() {
        let a = PureState::basis(1, 0).unwrap();
        let b = PureState::basis(2, 0).unwrap();
        assert!(bilinear_form(&a, &b).is_err());
    }

    #[test]
    fn parity_reports_pass() {
        let tol = Tolerances::default();
        for n in [1, 2, 3, 4] {
            let r = form_parity_check(n, 20, 7, &tol).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.kind, FormKind::for_qubits(n));
        }
    }

    #[test]
    fn kernels_match_dense_path() {
        let mut rng = seeded_rng(5);
        for n in 1..=6 {
            let psi = random_state_with(n, &mut rng).unwrap();
            let phi = random_state_with(n, &mut rng).unwrap();
            let d = dense::flip_state(&psi).unwrap();
            assert!(flip_state(&psi).max_abs_diff(&d).unwrap() < 1e-14);
            let f = bilinear_form(&psi, &phi).unwrap().value;
            let g = dense::bilinear_form(&psi, &phi).unwrap().value;
            assert!((f - g).norm() < 1e-13);
        }
        assert!(dense::sigma_y_power(9).is_err());
    }

    #[test]
    fn parallel_form_is_deterministic() {
        let psi = crate::tensor_core::random_state(16, 1).unwrap();
        let phi = crate::tensor_core::random_state(16, 2).unwrap();
        let a = bilinear_form(&psi, &phi).unwrap().value;
        let b = bilinear_form(&psi, &phi).unwrap().value;
        assert_eq!(a, b);
        assert!((a - form_via_flip(&psi, &phi).unwrap()).norm() < 1e-12);
    }
}
