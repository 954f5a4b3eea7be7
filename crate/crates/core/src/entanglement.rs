//! The quadratic form `|<ψ̄|ψ>|` as an entanglement measure.
//!
//! In any bi-orthonormal basis with coefficients `c_l` the form reads
//! `|Σ_l c_l²|`. Plotting the partial sums of `c_l²` gives a polygonal path
//! from the origin whose endpoint has modulus equal to the tangle; the path
//! is a straight segment ending on the unit circle exactly for maximally
//! entangled states.

use serde::Serialize;

use crate::bases::{
    coefficients, magic_coefficients, magic_combination, require_biorthonormal, BasisSet,
};
use crate::error::{Error, Result};
use crate::spinflip::{bilinear_form, flip_phase};
use crate::tensor_core::{PureState, Tolerances, C64};

pub const BASIS_MAGIC: &str = "magic";

/// `|<ψ̄|ψ>| / <ψ|ψ>`. Vanishes identically for odd `n`.
pub fn tangle(psi: &PureState) -> f64 {
    let form = bilinear_form(psi, psi).expect("same state").value;
    form.norm() / psi.norm_sqr()
}

#[derive(Debug, Clone, Serialize)]
pub struct TangleResult {
    pub value: f64,
    /// Set when the input was not normalized and the value was divided by `<ψ|ψ>`.
    pub renormalized: bool,
    /// Partial sums of squared magic-basis coefficients (even `n` only).
    pub polygon: Option<Vec<[f64; 2]>>,
    pub basis_used: Option<&'static str>,
}

pub fn tangle_report(
    psi: &PureState,
    with_polygon: bool,
    tol: &Tolerances,
) -> Result<TangleResult> {
    let value = tangle(psi);
    let renormalized = !psi.is_normalized(tol);
    let polygon = if with_polygon && psi.n().is_multiple_of(2) {
        let scale = 1.0 / psi.norm();
        let c: Vec<C64> = magic_coefficients(psi)?
            .into_iter()
            .map(|x| x * scale)
            .collect();
        Some(polygon(&c))
    } else {
        None
    };
    let basis_used = polygon.as_ref().map(|_| BASIS_MAGIC);
    Ok(TangleResult {
        value,
        renormalized,
        polygon,
        basis_used,
    })
}

/// Two-qubit concurrence `|<ψ|ψ̄>|`.
pub fn concurrence_2q(psi: &PureState) -> Result<f64> {
    if psi.n() != 2 {
        return Err(Error::Parity {
            what: "concurrence",
            expected: "two-qubit",
            n: psi.n(),
        });
    }
    Ok(tangle(psi))
}

pub fn tangle_from_coefficients(c: &[C64]) -> f64 {
    c.iter().map(|x| x * x).sum::<C64>().norm()
}

/// Points `S_m = Σ_{l<=m} c_l²` as `[re, im]`.
pub fn polygon(c: &[C64]) -> Vec<[f64; 2]> {
    let mut acc = C64::new(0.0, 0.0);
    c.iter()
        .map(|x| {
            acc += x * x;
            [acc.re, acc.im]
        })
        .collect()
}

/// Largest distance of a polygon point from the line through the origin and
/// the endpoint, also counting points on the opposite ray.
pub fn polygon_collinearity_residual(points: &[[f64; 2]]) -> f64 {
    let Some(&[ex, ey]) = points.last() else {
        return 0.0;
    };
    let len = (ex * ex + ey * ey).sqrt();
    if len == 0.0 {
        return points
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .fold(0.0, f64::max);
    }
    let (ux, uy) = (ex / len, ey / len);
    points
        .iter()
        .map(|p| {
            let along = p[0] * ux + p[1] * uy;
            let across = (p[0] * uy - p[1] * ux).abs();
            across.max(-along)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeBound {
    pub max_weight: f64,
    pub bound: f64,
    /// `bound - max_weight`; negative slack is a violation.
    pub slack: f64,
    pub passed: bool,
}

fn bound_from(c: &[C64], tangle_value: f64, tol: &Tolerances) -> AmplitudeBound {
    let max_weight = c.iter().map(|x| x.norm_sqr()).fold(0.0, f64::max);
    let bound = 0.5 * (1.0 + tangle_value);
    AmplitudeBound {
        max_weight,
        bound,
        slack: bound - max_weight,
        passed: max_weight <= bound + tol.tol_residual,
    }
}

/// `max_l |c_l|² <= (1 + tangle) / 2` for the coefficients in `basis`.
pub fn amplitude_bound_check(
    psi: &PureState,
    basis: &BasisSet,
    tol: &Tolerances,
) -> Result<AmplitudeBound> {
    require_even(psi.n(), "amplitude bound")?;
    require_biorthonormal(basis, tol)?;
    let c = coefficients(psi, basis)?;
    Ok(bound_from(&c, tangle(psi), tol))
}

/// Same check in the magic basis without materializing it.
pub fn amplitude_bound_magic(psi: &PureState, tol: &Tolerances) -> Result<AmplitudeBound> {
    let c = magic_coefficients(psi)?;
    Ok(bound_from(&c, tangle(psi), tol))
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

fn require_normalized(psi: &PureState, tol: &Tolerances) -> Result<()> {
    let residual = (psi.norm_sqr() - 1.0).abs();
    if residual > tol.tol_norm {
        return Err(Error::Precondition {
            property: "normalized",
            residual,
            tol: tol.tol_norm,
        });
    }
    Ok(())
}

/// Phase `θ = arg(<ψ̄|ψ>) / 2`, or `None` when the form is below `tol`.
fn half_phase(form: C64, tol: f64) -> Option<f64> {
    (form.norm() > tol).then(|| 0.5 * form.arg())
}

#[derive(Debug, Clone, Serialize)]
pub struct TangleCondition {
    pub passed: bool,
    /// `|1 - |<ψ̄|ψ>||`.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RealCoefficientCondition {
    pub passed: bool,
    /// `max(2 Σ Im(e^{-iθ} c_l)², |Σ ν_l² - 1|)`.
    pub residual: f64,
    pub theta: Option<f64>,
    pub nu: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureCheck {
    pub passed: bool,
    pub theta: Option<f64>,
    /// `Σ' |φ_{~k} - (-1)^popcount(k) i^n conj(φ_k)|²` with `φ = e^{-iθ} ψ`.
    pub relation_residual: f64,
    /// `|Σ' |φ_k|² - 1/2|`.
    pub weight_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxEntReport {
    pub maximal: bool,
    pub tangle: TangleCondition,
    pub real_coefficients: RealCoefficientCondition,
    pub structure: StructureCheck,
}

fn tangle_condition(psi: &PureState, tol: &Tolerances) -> TangleCondition {
    let residual = (1.0 - tangle(psi)).abs();
    TangleCondition {
        passed: residual <= tol.tol_residual,
        residual,
    }
}

fn real_coefficient_condition(
    psi: &PureState,
    tol: &Tolerances,
) -> Result<RealCoefficientCondition> {
    let c = magic_coefficients(psi)?;
    let sum_sq: C64 = c.iter().map(|x| x * x).sum();
    let Some(theta) = half_phase(sum_sq, tol.tol_residual) else {
        return Ok(RealCoefficientCondition {
            passed: false,
            residual: 1.0,
            theta: None,
            nu: None,
        });
    };
    let rot = C64::from_polar(1.0, -theta);
    let rotated: Vec<C64> = c.iter().map(|x| x * rot).collect();
    let imag: f64 = 2.0 * rotated.iter().map(|x| x.im * x.im).sum::<f64>();
    let nu: Vec<f64> = rotated.iter().map(|x| x.re).collect();
    let norm_residual = (nu.iter().map(|x| x * x).sum::<f64>() - 1.0).abs();
    let residual = imag.max(norm_residual);
    Ok(RealCoefficientCondition {
        passed: residual <= tol.tol_residual,
        residual,
        theta: Some(theta),
        nu: Some(nu),
    })
}

/// Looks for a phase `θ` such that `e^{-iθ} ψ` is fixed by the flip on every
/// representative pair and carries weight 1/2 on the representatives.
pub fn maxent_structure_check(psi: &PureState, tol: &Tolerances) -> Result<StructureCheck> {
    let n = psi.n();
    require_even(n, "maximal-entanglement structure check")?;
    let form = bilinear_form(psi, psi)?.value;
    let Some(theta) = half_phase(form, tol.tol_residual) else {
        return Ok(StructureCheck {
            passed: false,
            theta: None,
            relation_residual: 1.0,
            weight_residual: 0.5,
        });
    };
    let rot = C64::from_polar(1.0, -theta);
    let amp = psi.amplitudes();
    let mask = psi.dim() - 1;
    let mut relation = 0.0;
    let mut weight = 0.0;
    for k in 0..psi.dim() / 2 {
        let x = amp[k] * rot;
        let y = amp[k ^ mask] * rot;
        relation += (y - flip_phase(k, n) * x.conj()).norm_sqr();
        weight += x.norm_sqr();
    }
    let weight_residual = (weight - 0.5).abs();
    Ok(StructureCheck {
        passed: relation <= tol.tol_residual && weight_residual <= tol.tol_residual,
        theta: Some(theta),
        relation_residual: relation,
        weight_residual,
    })
}

/// Evaluates the three equivalent characterizations of maximal entanglement
/// independently and returns their common verdict.
pub fn is_maximally_entangled(psi: &PureState, tol: &Tolerances) -> Result<MaxEntReport> {
    require_even(psi.n(), "maximal-entanglement test")?;
    require_normalized(psi, tol)?;
    let t = tangle_condition(psi, tol);
    let r = real_coefficient_condition(psi, tol)?;
    let s = maxent_structure_check(psi, tol)?;
    if t.passed != r.passed || t.passed != s.passed {
        return Err(Error::ConditionDisagreement(format!(
            "tangle {} (residual {:e}), real coefficients {} (residual {:e}), structure {} (residuals {:e}, {:e})",
            t.passed, t.residual, r.passed, r.residual, s.passed, s.relation_residual, s.weight_residual
        )));
    }
    Ok(MaxEntReport {
        maximal: t.passed,
        tangle: t,
        real_coefficients: r,
        structure: s,
    })
}

/// `e^{iθ} Σ_l ν_l e_l` over the magic basis.
pub fn maxent_generate(n: usize, theta: f64, nu: &[f64], tol: &Tolerances) -> Result<PureState> {
    require_even(n, "maximal-entanglement generator")?;
    if nu.iter().any(|x| !x.is_finite()) || !theta.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = (nu.iter().map(|x| x * x).sum::<f64>() - 1.0).abs();
    if residual > tol.tol_norm {
        return Err(Error::Precondition {
            property: "a unit real vector",
            residual,
            tol: tol.tol_norm,
        });
    }
    let phase = C64::from_polar(1.0, theta);
    let coeffs: Vec<C64> = nu.iter().map(|&x| phase * x).collect();
    magic_combination(n, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::magic_basis;
    use crate::tensor_core::{random_state, ONE, ZERO};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn state(n: usize, pairs: &[(usize, f64)]) -> PureState {
        let mut amp = vec![ZERO; 1 << n];
        for &(k, a) in pairs {
            amp[k] = C64::new(a, 0.0);
        }
        PureState::new(n, amp).unwrap()
    }

    fn ghz4() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        state(4, &[(0, h), (15, h)])
    }

    #[test]
    fn tangle_golden_values() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(tangle(&PureState::basis(2, 0).unwrap()), 0.0);
        assert!((tangle(&state(2, &[(0, h), (3, h)])) - 1.0).abs() < 1e-15);
        assert!((tangle(&ghz4()) - 1.0).abs() < 1e-15);
        let w4 = state(4, &[(1, 0.5), (2, 0.5), (4, 0.5), (8, 0.5)]);
        assert!(tangle(&w4).abs() < 1e-15);
        for seed in 0..5 {
            assert!(tangle(&random_state(3, seed).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn tangle_renormalizes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = state(2, &[(0, 2.0 * h), (3, 2.0 * h)]);
        let r = tangle_report(&bell, true, &tol()).unwrap();
        assert!(r.renormalized);
        assert!((r.value - 1.0).abs() < 1e-15);
        let end = r.polygon.unwrap().last().copied().unwrap();
        assert!(((end[0] * end[0] + end[1] * end[1]).sqrt() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn concurrence_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((concurrence_2q(&state(2, &[(0, h), (3, h)])).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            concurrence_2q(&PureState::basis(2, 1).unwrap()).unwrap(),
            0.0
        );
        let plus = state(2, &[(0, 0.5), (1, 0.5), (2, 0.5), (3, 0.5)]);
        assert!(concurrence_2q(&plus).unwrap() < 1e-15);
        assert!(concurrence_2q(&PureState::basis(3, 0).unwrap()).is_err());
    }

    #[test]
    fn coefficient_tangle_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(tangle_from_coefficients(&[ONE, ZERO, ZERO, ZERO]), 1.0);
        let c = [C64::new(h, 0.0), C64::new(0.0, h), ZERO, ZERO];
        assert!(tangle_from_coefficients(&c) < 1e-15);
        let psi = random_state(2, 9).unwrap();
        let c = magic_coefficients(&psi).unwrap();
        assert!((tangle_from_coefficients(&c) - tangle(&psi)).abs() < 1e-14);
    }

    #[test]
    fn polygon_examples() {
        assert_eq!(polygon(&[ONE, ZERO, ZERO, ZERO]), vec![[1.0, 0.0]; 4]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = polygon(&[C64::new(h, 0.0), C64::new(0.0, h)]);
        assert!((p[0][0] - 0.5).abs() < 1e-15 && p[0][1] == 0.0);
        assert!(p[1][0].abs() < 1e-15 && p[1][1].abs() < 1e-15);
        let psi = random_state(4, 3).unwrap();
        for q in polygon(&magic_coefficients(&psi).unwrap()) {
            assert!((q[0] * q[0] + q[1] * q[1]).sqrt() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn amplitude_bound_examples() {
        let b = magic_basis(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = amplitude_bound_check(&state(2, &[(0, h), (3, h)]), &b, &tol()).unwrap();
        assert!((bell.max_weight - 1.0).abs() < 1e-15 && bell.passed);
        let zero = amplitude_bound_check(&PureState::basis(2, 0).unwrap(), &b, &tol()).unwrap();
        assert!((zero.max_weight - 0.5).abs() < 1e-15 && zero.slack.abs() < 1e-15 && zero.passed);
        let comp = crate::bases::BasisSet::computational(2).unwrap();
        assert!(amplitude_bound_check(&PureState::basis(2, 0).unwrap(), &comp, &tol()).is_err());
    }

    #[test]
    fn maximal_examples() {
        let r = is_maximally_entangled(&ghz4(), &tol()).unwrap();
        assert!(
            r.maximal && r.real_coefficients.theta.is_some() && r.real_coefficients.nu.is_some()
        );
        let r = is_maximally_entangled(&PureState::basis(4, 0).unwrap(), &tol()).unwrap();
        assert!(
            !r.maximal && !r.tangle.passed && !r.real_coefficients.passed && !r.structure.passed
        );
        let nu = [0.6, 0.8, 0.0, 0.0];
        let g = maxent_generate(2, std::f64::consts::FRAC_PI_3, &nu, &tol()).unwrap();
        assert!(is_maximally_entangled(&g, &tol()).unwrap().maximal);
        assert!((concurrence_2q(&g).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn generate_rejects_unnormalized() {
        assert!(maxent_generate(2, 0.0, &[1.0, 1.0, 0.0, 0.0], &tol()).is_err());
        assert!(maxent_generate(3, 0.0, &[1.0; 8], &tol()).is_err());
        let g = maxent_generate(2, 0.0, &[1.0, 0.0, 0.0, 0.0], &tol()).unwrap();
        assert_eq!(g, magic_basis(2).unwrap().vectors()[0]);
    }

    #[test]
    fn structure_examples() {
        assert!(maxent_structure_check(&ghz4(), &tol()).unwrap().passed);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(
            maxent_structure_check(&state(2, &[(0, h), (3, h)]), &tol())
                .unwrap()
                .passed
        );
        let s = maxent_structure_check(&PureState::basis(4, 3).unwrap(), &tol()).unwrap();
        assert!(!s.passed && s.theta.is_none());
    }

    #[test]
    fn collinearity() {
        let g = maxent_generate(
            4,
            1.1,
            &[
                0.0, 0.6, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ],
            &tol(),
        )
        .unwrap();
        let p = polygon(&magic_coefficients(&g).unwrap());
        assert!(polygon_collinearity_residual(&p) < 1e-14);
        let p = polygon(&magic_coefficients(&random_state(4, 1).unwrap()).unwrap());
        assert!(polygon_collinearity_residual(&p) > 1e-3);
    }
}
