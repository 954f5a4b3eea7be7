//! Form-preserving operators, the representation of local SL(2) operations as
//! orthogonal (even `n`) or symplectic (odd `n`) matrices, and the SLOCC
//! obstruction test that follows from it.
//!
//! All matrix norms are Frobenius norms.

use serde::Serialize;

use crate::bases::{
    canonical_j, magic_basis, product_biortho_basis, require_biorthonormal, BasisSet,
};
use crate::error::{Error, Result};
use crate::spinflip::{flip_local, flip_operator, FormKind};
use crate::tensor_core::{
    det2, expand_local, identity_residual, random_sl2_list_with, seeded_rng, CMatrix,
    GlobalOperator, LocalOperatorList, Mat2, Tolerances, C64, ONE,
};

/// Flag plus the residual it was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Criterion {
    pub passed: bool,
    pub residual: f64,
}

impl Criterion {
    fn at(residual: f64, tol: f64) -> Self {
        Self {
            passed: residual <= tol,
            residual,
        }
    }
}

/// `‖flip(M)† M - I‖`, which vanishes exactly when `M` preserves the form.
pub fn is_form_preserving(m: &GlobalOperator, tol: &Tolerances) -> Result<Criterion> {
    let flipped = flip_operator(m)?;
    let prod = flipped.matrix().adjoint() * m.matrix();
    Ok(Criterion::at(identity_residual(&prod), tol.tol_residual))
}

pub fn is_unitary(m: &GlobalOperator, tol: &Tolerances) -> Criterion {
    Criterion::at(
        identity_residual(&(m.matrix().adjoint() * m.matrix())),
        tol.tol_residual,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalCriterion {
    /// `‖Ā† A - I‖`.
    pub symplectic_residual: f64,
    pub det: C64,
    /// `|det A - 1|`.
    pub det_residual: f64,
    pub symplectic_pass: bool,
    pub det_pass: bool,
    pub agree: bool,
}

/// For a 2x2 matrix `Ā† A = det(A) I`, so the symplectic residual is
/// `√2 |det A - 1|`; the symplectic threshold is scaled to match.
pub const LOCAL_RESIDUAL_SCALE: f64 = std::f64::consts::SQRT_2;

pub fn local_criterion(a: &Mat2, tol: &Tolerances) -> LocalCriterion {
    let prod = flip_local(a).adjoint() * a;
    let symplectic_residual = (prod - Mat2::identity()).norm();
    let det = det2(a);
    let det_residual = (det - ONE).norm();
    let symplectic_pass = symplectic_residual <= LOCAL_RESIDUAL_SCALE * tol.tol_residual;
    let det_pass = det_residual <= tol.tol_residual;
    LocalCriterion {
        symplectic_residual,
        det,
        det_residual,
        symplectic_pass,
        det_pass,
        agree: symplectic_pass == det_pass,
    }
}

pub fn local_form_criterion(list: &LocalOperatorList, tol: &Tolerances) -> Vec<LocalCriterion> {
    list.ops().iter().map(|a| local_criterion(a, tol)).collect()
}

/// `R_{jk} = <b_j| M |b_k>`.
pub fn represent_in_basis(
    m: &GlobalOperator,
    basis: &BasisSet,
    tol: &Tolerances,
) -> Result<CMatrix> {
    if m.n() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: m.dim(),
        });
    }
    require_biorthonormal(basis, tol)?;
    let x = basis.matrix();
    Ok(x.conjugate() * m.matrix() * x.transpose())
}

/// Canonical bi-orthonormal basis for the parity of `n`.
pub fn canonical_basis(n: usize) -> Result<BasisSet> {
    match FormKind::for_qubits(n) {
        FormKind::Orthogonal => magic_basis(n),
        FormKind::Symplectic => product_biortho_basis(n),
    }
}

/// `‖RᵀR - I‖` for even `n`, `‖RᵀJR - J‖` for odd `n`.
pub fn group_residual(r: &CMatrix, kind: FormKind) -> f64 {
    match kind {
        FormKind::Orthogonal => identity_residual(&(r.transpose() * r)),
        FormKind::Symplectic => {
            let j = canonical_j(r.nrows());
            (r.transpose() * &j * r - &j).norm()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorClassReport {
    pub n: usize,
    pub kind: FormKind,
    pub is_unitary: Criterion,
    pub is_form_preserving: Criterion,
    /// Determinant, only for single-qubit inputs.
    pub det: Option<[f64; 2]>,
    /// Residual of the group relation for the matrix in the canonical basis.
    pub basis_rep_residual: f64,
}

pub fn classify(m: &GlobalOperator, tol: &Tolerances) -> Result<OperatorClassReport> {
    let kind = FormKind::for_qubits(m.n());
    let basis = canonical_basis(m.n())?;
    let r = represent_in_basis(m, &basis, tol)?;
    let det = (m.n() == 1).then(|| {
        let d = m.matrix().determinant();
        [d.re, d.im]
    });
    Ok(OperatorClassReport {
        n: m.n(),
        kind,
        is_unitary: is_unitary(m, tol),
        is_form_preserving: is_form_preserving(m, tol)?,
        det,
        basis_rep_residual: group_residual(&r, kind),
    })
}

/// Checks `|det A_i - 1| <= tol` and rescales each factor by `sqrt(det)`.
pub fn normalize_sl2_list(list: &LocalOperatorList, tol: &Tolerances) -> Result<LocalOperatorList> {
    for a in list.ops() {
        let residual = (det2(a) - ONE).norm();
        if residual > tol.tol_residual {
            return Err(Error::Precondition {
                property: "in SL(2)",
                residual,
                tol: tol.tol_residual,
            });
        }
    }
    Ok(list.map(|a| {
        let s = det2(a).sqrt();
        a.map(|x| x / s)
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct HomomorphismReport {
    pub n: usize,
    pub kind: FormKind,
    pub trials: usize,
    /// Group-relation residual of `R(L)` itself.
    pub input_residual: f64,
    /// Worst group-relation residual over `L`, the sampled `L'` and `L L'`.
    pub max_group_residual: f64,
    /// Worst `‖R(L L') - R(L) R(L')‖`.
    pub max_multiplicativity_residual: f64,
    /// `det R(L)`, reported without any claim about its value.
    pub det_r: [f64; 2],
    pub passed: bool,
}

pub fn homomorphism_check(
    list: &LocalOperatorList,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<HomomorphismReport> {
    let list = normalize_sl2_list(list, tol)?;
    let n = list.n();
    let kind = FormKind::for_qubits(n);
    let basis = canonical_basis(n)?;
    let rep = |l: &LocalOperatorList| -> Result<CMatrix> {
        represent_in_basis(&expand_local(l)?, &basis, tol)
    };
    let r = rep(&list)?;
    let input_residual = group_residual(&r, kind);
    let mut max_group_residual = input_residual;
    let mut max_mult: f64 = 0.0;
    let mut rng = seeded_rng(seed);
    for _ in 0..trials {
        let other = random_sl2_list_with(n, &mut rng)?;
        let r_other = rep(&other)?;
        let r_prod = rep(&list.compose(&other)?)?;
        max_group_residual = max_group_residual
            .max(group_residual(&r_other, kind))
            .max(group_residual(&r_prod, kind));
        max_mult = max_mult.max((&r_prod - &r * &r_other).norm());
    }
    let det = r.determinant();
    Ok(HomomorphismReport {
        n,
        kind,
        trials,
        input_residual,
        max_group_residual,
        max_multiplicativity_residual: max_mult,
        det_r: [det.re, det.im],
        passed: max_group_residual <= tol.tol_residual && max_mult <= tol.tol_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SloccClass {
    /// No local operation equals the operator.
    Obstructed,
    /// Inconclusive: the test is only a necessary condition.
    NotObstructed,
}

#[derive(Debug, Clone, Serialize)]
pub struct SloccVerdict {
    pub verdict: SloccClass,
    pub residual: f64,
    pub note: &'static str,
}

pub const SLOCC_NOTE: &str = "necessary condition only";

/// An operator that fails to preserve the form cannot be a determinant-one
/// local operation, so states it connects are in different SLOCC classes.
pub fn slocc_obstruction(m: &GlobalOperator, tol: &Tolerances) -> Result<SloccVerdict> {
    let c = is_form_preserving(m, tol)?;
    Ok(SloccVerdict {
        verdict: if c.passed {
            SloccClass::NotObstructed
        } else {
            SloccClass::Obstructed
        },
        residual: c.residual,
        note: SLOCC_NOTE,
    })
}
