//! End-to-end invariant battery behind `spinform selftest`.

use serde::Serialize;

use crate::bases::{
    basis_from_orthogonal, basis_from_unitary_symplectic, check_biorthonormal, decompose_basis,
    magic_basis, product_biortho_basis, random_real_orthogonal_with,
    random_unitary_symplectic_with,
};
use crate::entanglement::{amplitude_bound_magic, is_maximally_entangled, maxent_generate, tangle};
use crate::error::Result;
use crate::groups::homomorphism_check;
use crate::spinflip::{bilinear_form, dense, flip_state, form_parity_check};
use crate::tensor_core::{random_sl2_list_with, random_state_with, seeded_rng, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

struct Plan {
    oracle_max_n: usize,
    trials: usize,
}

impl Level {
    fn plan(self) -> Plan {
        match self {
            Level::Quick => Plan {
                oracle_max_n: 5,
                trials: 10,
            },
            Level::Full => Plan {
                oracle_max_n: 8,
                trials: 100,
            },
        }
    }
}

fn line(name: impl Into<String>, residual: f64, tol: f64) -> CheckLine {
    CheckLine {
        name: name.into(),
        passed: residual <= tol,
        residual,
    }
}

pub fn run(level: Level, seed: u64, tol: &Tolerances) -> Result<Vec<CheckLine>> {
    let plan = level.plan();
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();

    for n in 1..=plan.oracle_max_n {
        let mut worst: f64 = 0.0;
        for _ in 0..plan.trials {
            let psi = random_state_with(n, &mut rng)?;
            let phi = random_state_with(n, &mut rng)?;
            worst = worst.max(flip_state(&psi).max_abs_diff(&dense::flip_state(&psi)?)?);
            let a = bilinear_form(&psi, &phi)?.value;
            let b = dense::bilinear_form(&psi, &phi)?.value;
            worst = worst.max((a - b).norm());
        }
        out.push(line(format!("oracle equivalence n={n}"), worst, 1e-12));
    }

    for n in 1..=6 {
        let r = form_parity_check(n, plan.trials, seed.wrapping_add(n as u64), tol)?;
        out.push(line(
            format!("form parity n={n}"),
            r.max_residual,
            tol.tol_residual,
        ));
    }

    for n in [2, 4] {
        let b = magic_basis(n)?;
        let v = check_biorthonormal(&b, tol).verdict;
        out.push(line(
            format!("magic basis n={n}"),
            v.hilbert_residual.max(v.form_residual),
            tol.tol_gram,
        ));
        let mut worst: f64 = 0.0;
        for _ in 0..plan.trials {
            let o = random_real_orthogonal_with(1 << n, &mut rng)?;
            let basis = basis_from_orthogonal(&o, n, tol)?;
            let back = decompose_basis(&basis, tol)?;
            worst = worst.max((back - o).norm());
        }
        out.push(line(
            format!("orthogonal round trip n={n}"),
            worst,
            tol.tol_residual,
        ));
    }

    for n in [1, 3] {
        let v = check_biorthonormal(&product_biortho_basis(n)?, tol).verdict;
        out.push(line(
            format!("product basis n={n}"),
            v.hilbert_residual.max(v.form_residual),
            tol.tol_gram,
        ));
        let mut worst: f64 = 0.0;
        for _ in 0..plan.trials {
            let s = random_unitary_symplectic_with(n, &mut rng)?;
            let b = basis_from_unitary_symplectic(&s, n, tol)?;
            let v = check_biorthonormal(&b, tol).verdict;
            worst = worst.max(v.hilbert_residual.max(v.form_residual));
        }
        out.push(line(
            format!("unitary-symplectic bases n={n}"),
            worst,
            tol.tol_gram,
        ));
    }

    for n in [1, 2, 3, 4] {
        let list = random_sl2_list_with(n, &mut rng)?;
        let r = homomorphism_check(&list, plan.trials, seed.wrapping_add(100 + n as u64), tol)?;
        out.push(line(
            format!("local SL(2) homomorphism n={n}"),
            r.max_group_residual.max(r.max_multiplicativity_residual),
            tol.tol_residual,
        ));
    }

    for n in [2, 4] {
        let mut disagreements = 0usize;
        let mut worst_bound: f64 = 0.0;
        let mut worst_tangle: f64 = 0.0;
        for _ in 0..plan.trials {
            let psi = random_state_with(n, &mut rng)?;
            if is_maximally_entangled(&psi, tol).is_err() {
                disagreements += 1;
            }
            worst_bound = worst_bound.max(-amplitude_bound_magic(&psi, tol)?.slack);
            let o = random_real_orthogonal_with(1 << n, &mut rng)?;
            let nu: Vec<f64> = o.column(0).iter().copied().collect();
            let g = maxent_generate(n, 0.7, &nu, tol)?;
            worst_tangle = worst_tangle.max((1.0 - tangle(&g)).abs());
            match is_maximally_entangled(&g, tol) {
                Ok(r) if r.maximal => {}
                _ => disagreements += 1,
            }
        }
        out.push(line(
            format!("maximal-entanglement coherence n={n}"),
            disagreements as f64,
            0.0,
        ));
        out.push(line(
            format!("amplitude inequality n={n}"),
            worst_bound.max(0.0),
            tol.tol_residual,
        ));
        out.push(line(
            format!("generated maximal tangle n={n}"),
            worst_tangle,
            tol.tol_residual,
        ));
    }

    Ok(out)
}
