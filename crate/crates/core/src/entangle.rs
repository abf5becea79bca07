//! Two-qubit concurrence.
//!
//! With `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`, the concurrence is
//! `max(0, λ1 − λ2 − λ3 − λ4)` where `λk` are the square roots of the
//! eigenvalues of `ρ ρ̃` in descending order. Taking square roots of the
//! eigenvalues of the non-Hermitian product loses about half the digits
//! near zero, so the `λk` are computed as the singular values of
//! `τ = Wᵀ (σy⊗σy) W` with `ρ = W W†`; `τ†τ` is similar to `ρ ρ̃`.

use crate::error::{Error, Result};
use crate::gibbs::{DensityMatrix, Diagonalized};
use crate::linalg::{hermitian_eig, pauli, Complex64, ComplexMatrix};
use crate::model::ModelSpec;

/// Eigenvalues of `ρ` below `-PSD_TOL` are rejected; those in
/// `[-PSD_TOL, 0)` are treated as 0.
pub const PSD_TOL: f64 = 1e-8;
/// Eigenvalues of `ρ` at or below this fraction of the largest are rounding
/// noise and are set to 0 before taking square roots; otherwise their
/// `~1e-8` roots would shift the zero `λk` by the same amount.
pub const RANK_TOL: f64 = 1e-14;
const TRACE_TOL: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrenceResult {
    /// 1-based sites of the reduced pair; `(0, 0)` for a bare 4x4 input.
    pub pair: (usize, usize),
    /// Square roots of the eigenvalues of `ρ ρ̃`, descending.
    pub lambdas: [f64; 4],
    pub value: f64,
}

/// `σy ⊗ σy`, which is real.
pub fn sigma_yy() -> ComplexMatrix {
    crate::linalg::kron(&pauli::sigma_y(), &pauli::sigma_y()).expect("4x4 is under the cap")
}

/// Spin-flipped state `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = sigma_yy();
    yy.matmul(&rho.conj()).matmul(&yy)
}

/// `R = ρ ρ̃`.
pub fn r_matrix(rho: &ComplexMatrix) -> ComplexMatrix {
    rho.matmul(&spin_flip(rho))
}

fn check_two_qubit_state(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::contract(format!(
            "concurrence needs a 4x4 state, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if rho.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numeric("state has non-finite entries"));
    }
    if !rho.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::contract("state is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::contract(format!("state trace is {tr}, not 1")));
    }
    Ok(())
}

/// Concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &ComplexMatrix) -> Result<ConcurrenceResult> {
    check_two_qubit_state(rho)?;
    let spec = hermitian_eig(rho)?;
    if spec.eigenvalues[0] < -PSD_TOL {
        return Err(Error::numeric(format!(
            "state has eigenvalue {:e} below -{PSD_TOL:e}",
            spec.eigenvalues[0]
        )));
    }

    let cut = RANK_TOL * spec.eigenvalues[3];
    let root: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&e| if e <= cut { 0.0 } else { e.sqrt() })
        .collect();
    let w = ComplexMatrix::from_fn(4, 4, |i, k| spec.eigenvectors[(i, k)] * root[k]);
    let tau = w.transpose().matmul(&sigma_yy()).matmul(&w);

    // Singular values of τ are the non-negative eigenvalues of [[0, τ], [τ†, 0]].
    let zero = Complex64::new(0.0, 0.0);
    let dilation = ComplexMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, false) => tau[(i, j - 4)],
        (false, true) => tau[(j, i - 4)].conj(),
        _ => zero,
    });
    let sv = hermitian_eig(&dilation)?.eigenvalues;
    let lambdas = [sv[7].max(0.0), sv[6].max(0.0), sv[5].max(0.0), sv[4].max(0.0)];
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult {
        pair: (0, 0),
        lambdas,
        value,
    })
}

/// Concurrence between sites `i` and `j` (1-based, distinct) of an n-qubit state.
pub fn pairwise_concurrence(rho: &DensityMatrix, i: usize, j: usize) -> Result<ConcurrenceResult> {
    if i == j {
        return Err(Error::contract(format!("pair ({i}, {j}) needs two distinct sites")));
    }
    let reduced = rho.partial_trace(&[i, j])?;
    let mut out = concurrence(reduced.matrix())?;
    out.pair = (i.min(j), i.max(j));
    Ok(out)
}

/// Thermal (or, at `t = 0`, ground-manifold) concurrence for a model.
pub fn model_concurrence(spec: &ModelSpec, t: f64, i: usize, j: usize) -> Result<ConcurrenceResult> {
    spec.validate()?;
    if i == 0 || j == 0 || i > spec.n || j > spec.n {
        return Err(Error::contract(format!(
            "pair ({i}, {j}) is outside sites 1..={}",
            spec.n
        )));
    }
    let diag = Diagonalized::from_model(spec)?;
    pairwise_concurrence(&diag.thermal_state(t)?, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pure(psi: &[Complex64]) -> ComplexMatrix {
        DensityMatrix::pure(psi).unwrap().into_matrix()
    }

    fn werner(p: f64) -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        let bell = pure(&[c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
        &bell.scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0)
    }

    #[test]
    fn bell_state_is_maximal() {
        let s = 0.5f64.sqrt();
        let r = concurrence(&pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!((r.lambdas[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_and_mixed_states_are_separable() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert!(concurrence(&pure(&[one, zero, zero, zero])).unwrap().value < 1e-14);
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        let r = concurrence(&mixed).unwrap();
        assert_eq!(r.value, 0.0);
        for l in r.lambdas {
            assert!((l - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn werner_family() {
        assert!(concurrence(&werner(1.0 / 3.0)).unwrap().value < 1e-12);
        for p in [0.4, 0.6, 0.9] {
            let v = concurrence(&werner(p)).unwrap().value;
            assert!((v - (3.0 * p - 1.0) / 2.0).abs() < 1e-12, "p={p} C={v}");
        }
    }

    #[test]
    fn pure_state_matches_amplitude_formula() {
        // C(a|00> + b|01> + c|10> + d|11>) = 2|ad - bc|
        let psi = [c(0.3, 0.1), c(-0.2, 0.5), c(0.4, -0.3), c(0.1, 0.2)];
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let expect = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm() / norm;
        let v = concurrence(&pure(&psi)).unwrap().value;
        assert!((v - expect).abs() < 1e-13);
    }

    #[test]
    fn three_qubit_reference_states() {
        let z = c(0.0, 0.0);
        let s = 0.5f64.sqrt();
        let ghz = DensityMatrix::pure(&[c(s, 0.0), z, z, z, z, z, z, c(s, 0.0)]).unwrap();
        assert!(pairwise_concurrence(&ghz, 1, 2).unwrap().value < 1e-14);
        let w3 = (1.0f64 / 3.0).sqrt();
        let w = DensityMatrix::pure(&[z, c(w3, 0.0), c(w3, 0.0), z, c(w3, 0.0), z, z, z]).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let r = pairwise_concurrence(&w, i, j).unwrap();
            assert!((r.value - 2.0 / 3.0).abs() < 1e-14);
        }
        assert_eq!(pairwise_concurrence(&w, 3, 1).unwrap().pair, (1, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            concurrence(&ComplexMatrix::identity(2)),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            concurrence(&ComplexMatrix::identity(4)),
            Err(Error::Contract(_))
        ));
        let neg = ComplexMatrix::from_diag(&[0.6, 0.6, -0.1, -0.1]);
        assert!(matches!(concurrence(&neg), Err(Error::Numeric(_))));
        let tiny = ComplexMatrix::from_diag(&[0.5, 0.5 + 1e-9, -1e-9, 0.0]);
        assert!(concurrence(&tiny).is_ok());
        let w = DensityMatrix::pure(&[c(1.0, 0.0); 8]).unwrap();
        assert!(pairwise_concurrence(&w, 2, 2).is_err());
        assert!(pairwise_concurrence(&w, 1, 4).is_err());
    }

    fn random_state(seed: u64, rank: usize) -> ComplexMatrix {
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let g = ComplexMatrix::from_fn(4, rank, |_, _| c(next(), next()));
        let m = g.matmul(&g.dagger());
        let tr = m.trace().re;
        m.scale_real(1.0 / tr)
    }

    proptest! {
        #[test]
        fn lambdas_match_sqrt_rho_route(seed in any::<u64>(), rank in 1usize..=4) {
            let rho = random_state(seed, rank);
            let r = concurrence(&rho).unwrap();
            // λ² are the eigenvalues of √ρ ρ̃ √ρ, a Hermitian PSD matrix.
            let sqrt_rho = hermitian_eig(&rho).unwrap().apply_function(|e| e.max(0.0).sqrt());
            let h = sqrt_rho.matmul(&spin_flip(&rho)).matmul(&sqrt_rho);
            let h = (&h + &h.dagger()).scale_real(0.5);
            let mut sq = hermitian_eigenvalues(&h).unwrap();
            sq.reverse();
            for (l, s) in r.lambdas.iter().zip(&sq) {
                prop_assert!((l * l - s).abs() < 1e-12);
            }
            prop_assert!(r.value >= 0.0 && r.value <= 1.0 + 1e-12);
            prop_assert!(r.lambdas.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn local_unitaries_preserve_concurrence(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let rho = random_state(seed, 2);
            let u1 = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => c(a.cos(), 0.0),
                (0, 1) => c(0.0, a.sin()),
                (1, 0) => c(0.0, a.sin()),
                _ => c(a.cos(), 0.0),
            });
            let u2 = ComplexMatrix::from_diag(&[1.0, 1.0]);
            let u2 = &u2.scale(c(b.cos(), 0.0)) + &pauli::sigma_y().scale(c(0.0, b.sin()));
            let u = crate::linalg::kron(&u1, &u2).unwrap();
            let rotated = u.matmul(&rho).matmul(&u.dagger());
            let v0 = concurrence(&rho).unwrap().value;
            let v1 = concurrence(&rotated).unwrap().value;
            prop_assert!((v0 - v1).abs() < 1e-11);
        }
    }
}
