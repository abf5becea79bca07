//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! The input is first split into the connected components of its sparsity
//! graph; every component is diagonalized on its own. Spin Hamiltonians that
//! conserve total `S^z` fall apart into magnetization sectors this way, so
//! the cost is set by the largest sector rather than the full dimension.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Stop once the off-diagonal Frobenius mass drops below this fraction of `‖M‖_F`.
pub const JACOBI_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(e) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_function(|e| e)
    }

    /// `V diag(f(e)) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.apply_function_indexed(|k| f(self.eigenvalues[k]))
    }

    /// `V diag(w_k) V†` with weights given by eigenvalue index.
    pub fn apply_function_indexed(&self, w: impl Fn(usize) -> f64) -> ComplexMatrix {
        let n = self.len();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = (0..n).map(w).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Output is deterministic: rotations run in a fixed cyclic order, equal
/// eigenvalues keep their block order, and each eigenvector is rotated so
/// that its first component above `1e-10` in modulus is real and positive.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    if !m.is_square() {
        return Err(Error::contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::contract(format!(
            "matrix is not Hermitian (defect {:e})",
            m.hermiticity_defect()
        )));
    }
    let n = m.rows();

    // Power-of-two rescaling is exact and keeps the Frobenius norms used for
    // the convergence test away from overflow and underflow.
    let max = m.max_abs();
    let exp = if max > 0.0 { max.log2().round().clamp(-1000.0, 1000.0) as i32 } else { 0 };
    let (down, up) = (2f64.powi(-exp), 2f64.powi(exp));
    let scaled = m.scale_real(down);

    let mut pairs: Vec<(f64, usize, Vec<Complex64>)> = Vec::with_capacity(n);
    for block in connected_blocks(m) {
        let (vals, vecs) = jacobi(&scaled.submatrix(&block))?;
        let k = block.len();
        for (col, &val) in vals.iter().enumerate() {
            let mut full = vec![ZERO; n];
            for (local, &global) in block.iter().enumerate() {
                full[global] = vecs[local * k + col];
            }
            pairs.push((val * up, pairs.len(), full));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (col, (val, _, mut vec)) in pairs.into_iter().enumerate() {
        normalize_phase(&mut vec);
        for (row, z) in vec.into_iter().enumerate() {
            eigenvectors[(row, col)] = z;
        }
        eigenvalues.push(val);
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m).map(|s| s.eigenvalues)
}

fn normalize_phase(v: &mut [Complex64]) {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-10).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Index sets of the connected components of the off-diagonal sparsity graph,
/// each sorted, ordered by smallest member.
fn connected_blocks(m: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)] != ZERO || m[(j, i)] != ZERO {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// Cyclic Jacobi on a dense Hermitian block. Returns eigenvalues (unsorted)
/// and the row-major eigenvector matrix.
fn jacobi(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let n = m.rows();
    let mut a: Vec<Complex64> = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    })
    .as_slice()
    .to_vec();
    let mut v: Vec<Complex64> = ComplexMatrix::identity(n).as_slice().to_vec();

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let off_mass = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweep = 0;
    loop {
        let off = off_mass(&a);
        if off <= JACOBI_TOL * scale {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::numeric(format!(
                "Jacobi eigensolver did not converge after {MAX_SWEEPS} sweeps \
                 (off-diagonal residual {off:e}, scale {scale:e})"
            )));
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Below roundoff relative to both diagonal entries.
                if sweep > 4 && app.abs() + 100.0 * r == app.abs() && aqq.abs() + 100.0 * r == aqq.abs()
                {
                    a[p * n + q] = ZERO;
                    a[q * n + p] = ZERO;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = (apq / r).conj();
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = phase * -s;
                let g_qq = phase * c;

                for i in 0..n {
                    let x = a[i * n + p];
                    let y = a[i * n + q];
                    a[i * n + p] = x * g_pp + y * g_qp;
                    a[i * n + q] = x * g_pq + y * g_qq;
                    let x = v[i * n + p];
                    let y = v[i * n + q];
                    v[i * n + p] = x * g_pp + y * g_qp;
                    v[i * n + q] = x * g_pq + y * g_qq;
                }
                for j in 0..n {
                    let x = a[p * n + j];
                    let y = a[q * n + j];
                    a[p * n + j] = g_pp.conj() * x + g_qp.conj() * y;
                    a[q * n + j] = g_pq.conj() * x + g_qq.conj() * y;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = Complex64::new(app - t * r, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
            }
        }
    }
    let vals = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((vals, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use proptest::prelude::*;

    fn assert_spectrum_invariants(m: &ComplexMatrix, s: &HermitianSpectrum) {
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let emax = s.eigenvalues.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        let resid = m.max_abs_diff(&s.reconstruct());
        assert!(resid <= 1e-10 * (1.0 + emax), "reconstruction residual {resid:e}");
        let n = m.rows();
        let gram = s.eigenvectors.dagger().matmul(&s.eigenvectors);
        let orth = gram.max_abs_diff(&ComplexMatrix::identity(n));
        assert!(orth <= 1e-10, "orthonormality defect {orth:e}");
    }

    #[test]
    fn extreme_scales() {
        for s in [1e-200, 1e200, 1e300] {
            let m = ComplexMatrix::from_real_rows(&[&[0.0, s], &[s, 0.0]]).unwrap();
            let e = hermitian_eigenvalues(&m).unwrap();
            assert!((e[0] / s + 1.0).abs() < 1e-14 && (e[1] / s - 1.0).abs() < 1e-14);
        }
        let bad = ComplexMatrix::from_real_rows(&[&[f64::INFINITY, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&bad), Err(Error::Numeric(_))));
    }

    #[test]
    fn sigma_z_spectrum() {
        let s = hermitian_eig(&pauli::sigma_z()).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn sigma_x_spectrum_and_vectors() {
        let s = hermitian_eig(&pauli::sigma_x()).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let lo = s.eigenvector(0);
        let hi = s.eigenvector(1);
        // phase-normalized: leading component real positive
        assert!((lo[0].re - h).abs() < 1e-14 && (lo[1].re + h).abs() < 1e-14);
        assert!((hi[0].re - h).abs() < 1e-14 && (hi[1].re - h).abs() < 1e-14);
    }

    #[test]
    fn classical_ising_chain_spectrum() {
        // E = (1/4)(s1 s2 + s2 s3) over the 8 configurations, site 1 = MSB
        let diag: Vec<f64> = (0..8u32)
            .map(|b| {
                let s = |k: u32| if (b >> (2 - k)) & 1 == 0 { 1.0 } else { -1.0 };
                0.25 * (s(0) * s(1) + s(1) * s(2))
            })
            .collect();
        let s = hermitian_eig(&ComplexMatrix::from_diag(&diag)).unwrap();
        assert_eq!(
            s.eigenvalues,
            vec![-0.5, -0.5, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5]
        );
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::Contract(_))));
        assert!(hermitian_eig(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn zero_matrix_is_already_diagonal() {
        let s = hermitian_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn identical_input_gives_identical_output() {
        let m = random_hermitian(12, 7);
        let a = hermitian_eig(&m).unwrap();
        let b = hermitian_eig(&m).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn block_split_matches_dense_route() {
        // permuted direct sum of two dense blocks
        let m = ComplexMatrix::from_fn(6, 6, |i, j| {
            if (i % 2) != (j % 2) {
                ZERO
            } else if i == j {
                Complex64::new(i as f64, 0.0)
            } else if i < j {
                Complex64::new(0.3, 0.1 * (i + j) as f64)
            } else {
                Complex64::new(0.3, -0.1 * (i + j) as f64)
            }
        });
        let s = hermitian_eig(&m).unwrap();
        assert_spectrum_invariants(&m, &s);
        assert_eq!(connected_blocks(&m), vec![vec![0, 2, 4], vec![1, 3, 5]]);
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        // small LCG, keeps this test free of extra dependencies
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(next(), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn dense_64_dimensional_matrix() {
        let m = random_hermitian(64, 42);
        let s = hermitian_eig(&m).unwrap();
        assert_spectrum_invariants(&m, &s);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_hermitian_invariants(n in 1usize..=24, seed in any::<u64>(), scale in 1e-3f64..1e3) {
            let m = random_hermitian(n, seed).scale_real(scale);
            let s = hermitian_eig(&m).unwrap();
            assert_spectrum_invariants(&m, &s);
        }
    }
}
