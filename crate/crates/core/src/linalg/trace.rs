use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Reduced matrix on the sites in `keep` (1-based, site 1 is the most
/// significant bit of the basis index). Kept sites appear in ascending order
/// regardless of the order they are listed in.
pub fn partial_trace(m: &ComplexMatrix, n_qubits: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    let dim = 1usize
        .checked_shl(n_qubits as u32)
        .filter(|&d| d == m.rows() && m.is_square())
        .ok_or_else(|| {
            Error::contract(format!(
                "a {}x{} matrix is not an operator on {n_qubits} qubits",
                m.rows(),
                m.cols()
            ))
        })?;
    if keep.is_empty() {
        return Err(Error::contract("partial trace needs at least one kept site"));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::contract(format!("repeated site in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&s| s == 0 || s > n_qubits) {
        return Err(Error::contract(format!(
            "site {bad} outside 1..={n_qubits}"
        )));
    }
    if kept.len() == n_qubits {
        return Ok(m.clone());
    }
    let traced: Vec<usize> = (1..=n_qubits).filter(|s| !kept.contains(s)).collect();

    let bit = |site: usize| 1usize << (n_qubits - site);
    let scatter = |value: usize, sites: &[usize]| -> usize {
        let k = sites.len();
        sites
            .iter()
            .enumerate()
            .filter(|(r, _)| (value >> (k - 1 - r)) & 1 == 1)
            .map(|(_, &s)| bit(s))
            .sum()
    };

    let out_dim = 1usize << kept.len();
    let kept_offsets: Vec<usize> = (0..out_dim).map(|a| scatter(a, &kept)).collect();
    let traced_offsets: Vec<usize> = (0..(1usize << traced.len()))
        .map(|t| scatter(t, &traced))
        .collect();
    debug_assert!(kept_offsets.iter().all(|&o| o < dim));

    Ok(ComplexMatrix::from_fn(out_dim, out_dim, |a, b| {
        let (ra, rb) = (kept_offsets[a], kept_offsets[b]);
        traced_offsets
            .iter()
            .fold(ZERO, |acc, &t| acc + m[(ra + t, rb + t)])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, kron, pauli};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn basis(n: usize, idx: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; 1 << n];
        v[idx] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn maximally_mixed_marginal() {
        let rho = ComplexMatrix::identity(8).scale_real(0.125);
        let r = partial_trace(&rho, 3, &[1, 2]).unwrap();
        assert_eq!(r, ComplexMatrix::identity(4).scale_real(0.25));
    }

    #[test]
    fn product_state_marginal() {
        let rho = ComplexMatrix::projector(&basis(3, 0));
        let r = partial_trace(&rho, 3, &[1, 3]).unwrap();
        assert_eq!(r, ComplexMatrix::projector(&basis(2, 0)));
    }

    #[test]
    fn ghz_outer_pair_is_classical_mixture() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut ghz = vec![ZERO; 8];
        ghz[0] = Complex64::new(h, 0.0);
        ghz[7] = Complex64::new(h, 0.0);
        let r = partial_trace(&ComplexMatrix::projector(&ghz), 3, &[1, 3]).unwrap();
        let expect = ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(r.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn site_order_follows_significance() {
        // ρ = σz ⊗ I ⊗ σx (not a state, but linear): tr over site 2 gives 2 σz ⊗ σx
        let m = kron(&kron(&pauli::sigma_z(), &pauli::identity()).unwrap(), &pauli::sigma_x()).unwrap();
        let r = partial_trace(&m, 3, &[3, 1]).unwrap();
        let expect = kron(&pauli::sigma_z(), &pauli::sigma_x()).unwrap().scale_real(2.0);
        assert_eq!(r, expect);
    }

    #[test]
    fn keeping_everything_is_identity_map() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new(i as f64, j as f64));
        assert_eq!(partial_trace(&m, 2, &[2, 1]).unwrap(), m);
    }

    #[test]
    fn rejects_bad_site_sets() {
        let m = ComplexMatrix::identity(8);
        assert!(partial_trace(&m, 3, &[]).is_err());
        assert!(partial_trace(&m, 3, &[0]).is_err());
        assert!(partial_trace(&m, 3, &[4]).is_err());
        assert!(partial_trace(&m, 3, &[1, 1]).is_err());
        assert!(partial_trace(&m, 2, &[1]).is_err());
    }

    fn random_state(n: usize, seeds: &[f64]) -> ComplexMatrix {
        // ρ = A A† / tr, A built from the seed values
        let d = 1 << n;
        let a = ComplexMatrix::from_fn(d, d, |i, j| {
            let k = (i * d + j) % seeds.len();
            Complex64::new(seeds[k], seeds[(k * 7 + 3) % seeds.len()] * (i as f64 - j as f64).sin())
        });
        let p = a.matmul(&a.dagger());
        let tr = p.trace().re;
        p.scale_real(1.0 / tr)
    }

    proptest! {
        #[test]
        fn trace_and_positivity_preserved(
            seeds in proptest::collection::vec(-1.0f64..1.0, 16..40),
            mask in 1usize..8,
        ) {
            let rho = random_state(3, &seeds);
            let keep: Vec<usize> = (1..=3).filter(|s| mask >> (s - 1) & 1 == 1).collect();
            let r = partial_trace(&rho, 3, &keep).unwrap();
            prop_assert!((r.trace() - rho.trace()).norm() < 1e-12);
            prop_assert!(r.is_hermitian(1e-12));
            let min = hermitian_eig(&r).unwrap().eigenvalues[0];
            prop_assert!(min >= -1e-10);
        }
    }
}
