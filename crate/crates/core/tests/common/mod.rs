//! Dense reference constructions used to check the library kernels.
//!
//! Everything here is built from first principles (explicit σ_y tensor
//! powers, plain nested loops) and never calls the index kernels under test.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub fn sigma_y() -> [[C; 2]; 2] {
    [
        [C::new(0.0, 0.0), C::new(0.0, -1.0)],
        [C::new(0.0, 1.0), C::new(0.0, 0.0)],
    ]
}

/// Entry `(r, c)` of `σ_y^{⊗n}` as the product of single-qubit entries.
pub fn sigma_y_power(n: usize) -> Vec<Vec<C>> {
    let y = sigma_y();
    let dim = 1usize << n;
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    let mut acc = C::new(1.0, 0.0);
                    for q in 0..n {
                        let shift = n - 1 - q;
                        acc *= y[(r >> shift) & 1][(c >> shift) & 1];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &[Vec<C>], v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let dim = a.len();
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| (0..dim).map(|k| a[r][k] * b[k][c]).sum())
                .collect()
        })
        .collect()
}

pub fn conj_vec(v: &[C]) -> Vec<C> {
    v.iter().map(|x| x.conj()).collect()
}

pub fn conj_mat(m: &[Vec<C>]) -> Vec<Vec<C>> {
    m.iter().map(|r| conj_vec(r)).collect()
}

pub fn adjoint(m: &[Vec<C>]) -> Vec<Vec<C>> {
    let dim = m.len();
    (0..dim)
        .map(|r| (0..dim).map(|c| m[c][r].conj()).collect())
        .collect()
}

/// `σ_y^{⊗n} conj(ψ)`.
pub fn flip(psi: &[C]) -> Vec<C> {
    let n = psi.len().trailing_zeros() as usize;
    mat_vec(&sigma_y_power(n), &conj_vec(psi))
}

/// `<flip(ψ)|φ>`.
pub fn form(psi: &[C], phi: &[C]) -> C {
    flip(psi).iter().zip(phi).map(|(a, b)| a.conj() * b).sum()
}

/// `σ_y^{⊗n} conj(M) σ_y^{⊗n}`.
pub fn flip_operator(m: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = m.len().trailing_zeros() as usize;
    let y = sigma_y_power(n);
    mat_mul(&mat_mul(&y, &conj_mat(m)), &y)
}

pub fn frobenius_minus_identity(m: &[Vec<C>]) -> f64 {
    let mut acc = 0.0;
    for (r, row) in m.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            let d = if r == c { x - 1.0 } else { *x };
            acc += d.norm_sqr();
        }
    }
    acc.sqrt()
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn to_rows(m: &nalgebra::DMatrix<C>) -> Vec<Vec<C>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
