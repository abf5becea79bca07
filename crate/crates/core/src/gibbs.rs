//! Gibbs states `ρ(T) = e^{−H/T} / Z` (with `k_B = 1`) and ground manifolds.
//!
//! Temperatures are in units of the energy scale of `H`. At `T = 0` the state
//! is the equal-weight mixture over the ground manifold, which is the
//! `T → 0⁺` limit of the Gibbs state.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace, Complex64, ComplexMatrix, HermitianSpectrum};
use crate::model::{build_hamiltonian, ModelSpec};

/// Relative energy window used to group levels into the ground manifold.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

const STATE_HERMITIAN_TOL: f64 = 1e-12;
const STATE_TRACE_TOL: f64 = 1e-12;
const STATE_PSD_TOL: f64 = 1e-10;

/// A positive semidefinite, unit-trace operator on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    n: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, n: usize) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != 1usize << n {
            return Err(Error::contract(format!(
                "a {}x{} matrix is not an operator on {n} qubits",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(STATE_HERMITIAN_TOL) {
            return Err(Error::contract("density matrix is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TRACE_TOL || tr.im.abs() > STATE_TRACE_TOL {
            return Err(Error::contract(format!("density matrix trace is {tr}, not 1")));
        }
        let min = hermitian_eig(&matrix)?.eigenvalues[0];
        if min < -STATE_PSD_TOL {
            return Err(Error::contract(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix, n })
    }

    /// Pure state `|ψ><ψ|`; the vector is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::contract("state vector has zero or non-finite norm"));
        }
        let n = qubit_count(psi.len())?;
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_parts(ComplexMatrix::projector(&unit), n))
    }

    pub(crate) fn from_parts(matrix: ComplexMatrix, n: usize) -> Self {
        Self { matrix, n }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        m.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduced state on `keep` (1-based sites).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = partial_trace(&self.matrix, self.n, keep)?;
        Ok(Self::from_parts(reduced, keep.len()))
    }
}

/// `log2(dim)` for a power-of-two dimension.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::contract(format!("dimension {dim} is not a power of two")))
    }
}

/// The ground level together with its degeneracy and projector.
#[derive(Clone, Debug)]
pub struct GroundManifold {
    pub energy: f64,
    pub degeneracy: usize,
    pub projector: ComplexMatrix,
}

/// `Z = e^{−E_min/T} · Σ_k e^{−(E_k − E_min)/T}`, kept in factored form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionFunction {
    pub e_min: f64,
    pub t: f64,
    pub shifted_sum: f64,
}

impl PartitionFunction {
    pub fn ln(&self) -> f64 {
        -self.e_min / self.t + self.shifted_sum.ln()
    }

    /// `Z` itself; overflows to infinity when `−E_min/T` is very large.
    pub fn value(&self) -> f64 {
        self.ln().exp()
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::contract(format!("temperature must be non-negative, got {t}")));
    }
    Ok(())
}

pub fn partition_function_from_energies(energies: &[f64], t: f64) -> Result<PartitionFunction> {
    check_temperature(t)?;
    if t == 0.0 {
        return Err(Error::contract(
            "the partition function needs t > 0; use the ground manifold at t = 0",
        ));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let shifted_sum = energies.iter().map(|e| (-(e - e_min) / t).exp()).sum();
    Ok(PartitionFunction {
        e_min,
        t,
        shifted_sum,
    })
}

pub fn partition_function(h: &ComplexMatrix, t: f64) -> Result<PartitionFunction> {
    check_temperature(t)?;
    let spectrum = hermitian_eig(h)?;
    partition_function_from_energies(&spectrum.eigenvalues, t)
}

pub fn thermal_state(h: &ComplexMatrix, t: f64) -> Result<DensityMatrix> {
    check_temperature(t)?;
    let n = qubit_count(h.rows())?;
    Diagonalized::from_matrix(h, n)?.thermal_state(t)
}

pub fn ground_manifold(h: &ComplexMatrix, degeneracy_tol: f64) -> Result<GroundManifold> {
    let spectrum = hermitian_eig(h)?;
    Ok(ground_manifold_from_spectrum(&spectrum, degeneracy_tol))
}

/// Number of levels within `tol·(1 + |E_0|)` of the lowest one.
pub fn ground_degeneracy(energies: &[f64], tol: f64) -> usize {
    let e0 = energies[0];
    energies
        .iter()
        .take_while(|&&e| e - e0 <= tol * (1.0 + e0.abs()))
        .count()
}

pub fn ground_manifold_from_spectrum(spectrum: &HermitianSpectrum, tol: f64) -> GroundManifold {
    let energy = spectrum.eigenvalues[0];
    let degeneracy = ground_degeneracy(&spectrum.eigenvalues, tol);
    let dim = spectrum.len();

    // Re-orthonormalize the selected eigenvectors (modified Gram-Schmidt).
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(degeneracy);
    for k in 0..degeneracy {
        let mut v = spectrum.eigenvector(k);
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        basis.push(v);
    }
    let projector = ComplexMatrix::from_fn(dim, dim, |i, j| {
        basis.iter().map(|b| b[i] * b[j].conj()).sum()
    });
    GroundManifold {
        energy,
        degeneracy,
        projector,
    }
}

/// A Hamiltonian diagonalized once, for repeated thermal evaluations.
#[derive(Clone, Debug)]
pub struct Diagonalized {
    pub n: usize,
    pub spectrum: HermitianSpectrum,
    pub degeneracy_tol: f64,
}

impl Diagonalized {
    pub fn from_model(spec: &ModelSpec) -> Result<Self> {
        let h = build_hamiltonian(spec)?;
        Self::from_matrix(&h, spec.n)
    }

    pub fn from_matrix(h: &ComplexMatrix, n: usize) -> Result<Self> {
        Ok(Self {
            n,
            spectrum: hermitian_eig(h)?,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn partition_function(&self, t: f64) -> Result<PartitionFunction> {
        partition_function_from_energies(self.energies(), t)
    }

    pub fn ground_manifold(&self) -> GroundManifold {
        ground_manifold_from_spectrum(&self.spectrum, self.degeneracy_tol)
    }

    pub fn ground_degeneracy(&self) -> usize {
        ground_degeneracy(self.energies(), self.degeneracy_tol)
    }

    /// Distance from the ground level to the next distinct level (0 when the
    /// whole spectrum is one degenerate level).
    pub fn energy_gap(&self) -> f64 {
        let e = self.energies();
        e.get(self.ground_degeneracy()).map_or(0.0, |&next| next - e[0])
    }

    pub fn thermal_state(&self, t: f64) -> Result<DensityMatrix> {
        check_temperature(t)?;
        if t == 0.0 {
            let g = self.ground_manifold();
            let m = g.projector.scale_real(1.0 / g.degeneracy as f64);
            return Ok(DensityMatrix::from_parts(m, self.n));
        }
        let e = self.energies();
        let e_min = e[0];
        let weights: Vec<f64> = e.iter().map(|&x| (-(x - e_min) / t).exp()).collect();
        let total: f64 = weights.iter().sum();
        let m = self.spectrum.apply_function_indexed(|k| weights[k] / total);
        Ok(DensityMatrix::from_parts(m, self.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form;
    use crate::linalg::pauli;
    use crate::model::{ModelSpec, Param};
    use proptest::prelude::*;

    fn assert_valid_state(rho: &DensityMatrix) {
        let m = rho.matrix();
        assert!(m.hermiticity_defect() <= 1e-12);
        assert!((m.trace().re - 1.0).abs() <= 1e-12 && m.trace().im.abs() <= 1e-12);
        assert!(hermitian_eig(m).unwrap().eigenvalues[0] >= -1e-10);
    }

    #[test]
    fn zero_hamiltonian_partition_is_dimension() {
        for t in [0.01, 1.0, 100.0] {
            let z = partition_function(&ComplexMatrix::zeros(8, 8), t).unwrap();
            assert!((z.value() - 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn infinite_temperature_counts_states() {
        let h = build_hamiltonian(&ModelSpec::xxz(1.0, 1.0, 1.0)).unwrap();
        let z = partition_function(&h, 1e9).unwrap().value();
        assert!((z / 8.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn partition_matches_closed_form() {
        let h = build_hamiltonian(&ModelSpec::xxz(1.0, 1.0, 1.0)).unwrap();
        let z = partition_function(&h, 1.0).unwrap().value();
        let expect = closed_form::partition_closed(1.0, 1.0, 1.0, 1.0);
        assert!((z / expect - 1.0).abs() < 1e-10);
    }

    #[test]
    fn log_partition_survives_tiny_temperatures() {
        let h = ComplexMatrix::from_diag(&[-1.0, -1.0, 3.0, 5.0]);
        let z = partition_function(&h, 1e-4).unwrap();
        assert!((z.ln() - (1e4 + 2f64.ln())).abs() < 1e-9);
        assert!(z.value().is_infinite());
    }

    #[test]
    fn negative_temperature_rejected() {
        let h = pauli::sigma_z();
        assert!(matches!(partition_function(&h, -1.0), Err(Error::Contract(_))));
        assert!(partition_function(&h, 0.0).is_err());
        assert!(thermal_state(&h, -0.5).is_err());
        assert!(thermal_state(&h, f64::NAN).is_err());
    }

    #[test]
    fn hot_qubit_is_maximally_mixed() {
        let rho = thermal_state(&pauli::sigma_z(), 1e9).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-6);
    }

    #[test]
    fn cold_qubit_is_spin_down() {
        let rho = thermal_state(&pauli::sigma_z(), 0.0).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_diag(&[0.0, 1.0]));
    }

    #[test]
    fn level_crossing_ground_state_is_rank_four() {
        let d: f64 = 1.0;
        let spec = ModelSpec::xxz(1.0, -(1.0 + d * d).sqrt(), d);
        let h = build_hamiltonian(&spec).unwrap();
        let g = ground_manifold(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(g.degeneracy, 4);
        let rho = thermal_state(&h, 0.0).unwrap();
        assert_valid_state(&rho);
        let eig = hermitian_eig(rho.matrix()).unwrap().eigenvalues;
        assert_eq!(eig.iter().filter(|&&x| x > 1e-10).count(), 4);
    }

    #[test]
    fn ground_manifold_examples() {
        let g = ground_manifold(&ComplexMatrix::from_diag(&[0.0, 0.0, 1.0]), DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!((g.energy, g.degeneracy), (0.0, 2));

        let h = build_hamiltonian(&ModelSpec::ising_dm(1.0, 0.0)).unwrap();
        let g = ground_manifold(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!((g.energy, g.degeneracy), (-0.5, 2));

        let h = build_hamiltonian(&ModelSpec::xxz(1.0, 0.5, 0.0)).unwrap();
        let g = ground_manifold(&h, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(g.degeneracy, 2);
        assert!(g.projector.matmul(&g.projector).max_abs_diff(&g.projector) < 1e-10);
        assert!((g.projector.trace().re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn low_temperature_limit_matches_ground_mixture() {
        let d = Diagonalized::from_model(&ModelSpec::xxz(1.0, 0.5, 0.7)).unwrap();
        assert!(d.energy_gap() > 1e-3);
        let cold = d.thermal_state(1e-8).unwrap();
        let zero = d.thermal_state(0.0).unwrap();
        assert!(cold.matrix().max_abs_diff(zero.matrix()) <= 1e-6);
    }

    #[test]
    fn density_matrix_constructor_checks() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25), 2).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4), 2).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[1.5, -0.5]), 1).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25), 1).is_err());
        assert!(DensityMatrix::pure(&[Complex64::new(0.0, 0.0); 4]).is_err());
        assert!(DensityMatrix::pure(&[Complex64::new(1.0, 0.0); 3]).is_err());
    }

    fn spec_strategy() -> impl Strategy<Value = ModelSpec> {
        (0usize..3, -2.0f64..2.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(
            |(kind, j, delta, d, h)| match kind {
                0 => ModelSpec::xxz(j, delta, d),
                1 => ModelSpec::ising_dm(j, d),
                _ => ModelSpec::ising_dm_field(j, d, h),
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn thermal_states_are_valid_and_commute(spec in spec_strategy(), t in prop_oneof![Just(0.0), 1e-3f64..50.0]) {
            let h = build_hamiltonian(&spec).unwrap();
            let rho = thermal_state(&h, t).unwrap();
            assert_valid_state(&rho);
            prop_assert!(rho.matrix().commutator(&h).max_abs() <= 1e-10);
        }

        #[test]
        fn purity_non_increasing_in_temperature(spec in spec_strategy()) {
            let d = Diagonalized::from_model(&spec).unwrap();
            let mut last = f64::INFINITY;
            for k in 0..40 {
                let t = 0.01 * 1.25f64.powi(k);
                let p = d.thermal_state(t).unwrap().purity();
                prop_assert!(p <= last + 1e-12, "purity rose at t={t}: {last} -> {p}");
                last = p;
            }
        }

        #[test]
        fn closed_form_partition_on_random_points(delta in -3.0f64..3.0, d in -3.0f64..3.0, t in 0.1f64..10.0) {
            let spec = ModelSpec::xxz(1.0, 0.0, 0.0).with_param(Param::Delta, delta).with_param(Param::D, d);
            let z = Diagonalized::from_model(&spec).unwrap().partition_function(t).unwrap().value();
            prop_assert!((z / closed_form::partition_closed(1.0, delta, d, t) - 1.0).abs() < 1e-10);
        }
    }
}
