//! Analytic results for the three-site open chains, kept independent of the
//! numerical pipeline so the two can check each other.
//!
//! Everything here assumes an open 3-site chain with the `+Δ` convention and
//! `k_B = 1`. The mixing parameter is
//! `q = sqrt(Δ² + 8(1 + D²))`; the Ising limit uses `q_I = sqrt(1 + 8D²)`.
//!
//! [`c12_thermal_alt`] and [`alt_tc_residual`] are an alternative
//! finite-temperature form kept for comparison only. Their exponents do not
//! depend on Δ and they are not even in `D`, and they disagree with the
//! numerical concurrence. Critical temperatures used elsewhere come from
//! root-finding the numerical concurrence.

use crate::error::{Error, Result};

/// Closed-form description of the open 3-site XXZ chain with DM coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XxzClosedForm {
    pub j: f64,
    pub delta: f64,
    pub d: f64,
}

impl XxzClosedForm {
    pub fn new(j: f64, delta: f64, d: f64) -> Self {
        Self { j, delta, d }
    }

    pub fn q(&self) -> f64 {
        q_xxz(self.delta, self.d)
    }

    /// The eight levels: `0, 0, JΔ/2, JΔ/2, J(−Δ ± q)/4` (each twice), ascending.
    pub fn levels(&self) -> [f64; 8] {
        let (j, delta, q) = (self.j, self.delta, self.q());
        let mut e = [
            0.0,
            0.0,
            j * delta / 2.0,
            j * delta / 2.0,
            j * (-delta - q) / 4.0,
            j * (-delta - q) / 4.0,
            j * (-delta + q) / 4.0,
            j * (-delta + q) / 4.0,
        ];
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn lambdas(&self, t: f64) -> [f64; 4] {
        lambdas_closed(self.j, self.delta, self.d, t)
    }

    pub fn partition(&self, t: f64) -> f64 {
        partition_closed(self.j, self.delta, self.d, t)
    }
}

pub fn q_xxz(delta: f64, d: f64) -> f64 {
    (delta * delta + 8.0 * (1.0 + d * d)).sqrt()
}

pub fn q_ising(d: f64) -> f64 {
    (1.0 + 8.0 * d * d).sqrt()
}

/// `Σ c_i e^{x_i}` evaluated as `e^m Σ c_i e^{x_i − m}`.
#[derive(Clone, Copy)]
struct ExpSum<const K: usize> {
    coeffs: [f64; K],
    exps: [f64; K],
}

impl<const K: usize> ExpSum<K> {
    fn shifted(&self, m: f64) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.exps)
            .map(|(c, x)| c * (x - m).exp())
            .sum()
    }

    fn max_exp(&self) -> f64 {
        self.exps.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `Z = 4 e^{a} cosh(b) + 4 e^{−a} cosh(a)` with `a = JΔ/(4T)`, `b = Jq/(4T)`,
/// expanded to `2e^{a+b} + 2e^{a−b} + 2 + 2e^{−2a}`.
fn partition_terms(j: f64, delta: f64, d: f64, t: f64) -> ExpSum<4> {
    let beta = 1.0 / t;
    let a = j * beta * delta / 4.0;
    let b = j * beta * q_xxz(delta, d) / 4.0;
    ExpSum {
        coeffs: [2.0; 4],
        exps: [a + b, a - b, 0.0, -2.0 * a],
    }
}

/// Partition function of the open 3-site XXZ chain with DM coupling.
pub fn partition_closed(j: f64, delta: f64, d: f64, t: f64) -> f64 {
    ln_partition_closed(j, delta, d, t).exp()
}

pub fn ln_partition_closed(j: f64, delta: f64, d: f64, t: f64) -> f64 {
    let z = partition_terms(j, delta, d, t);
    let m = z.max_exp();
    m + z.shifted(m).ln()
}

/// Square-root eigenvalues of `R` for the adjacent pair (1,2) of the thermal
/// state, in the order `[λ1, λ2, λ3, λ4]` with `λ1 = λ2`.
pub fn lambdas_closed(j: f64, delta: f64, d: f64, t: f64) -> [f64; 4] {
    let beta = 1.0 / t;
    let q = q_xxz(delta, d);
    let s = (1.0 + d * d).sqrt();
    let a = j * beta * delta / 4.0;
    let b = j * beta * q / 4.0;

    let z = partition_terms(j, delta, d, t);
    let m = z.max_exp();
    let z_shifted = z.shifted(m);

    // e^a [c cosh b + k sinh b] = (c+k)/2 e^{a+b} + (c−k)/2 e^{a−b}
    let thermal = |cosh_coeff: f64, sinh_coeff: f64, extra: (f64, f64)| -> f64 {
        let sum = ExpSum {
            coeffs: [
                0.5,
                extra.0,
                0.5 * (cosh_coeff + sinh_coeff),
                0.5 * (cosh_coeff - sinh_coeff),
            ],
            exps: [0.0, extra.1, a + b, a - b],
        };
        sum.shifted(m) / z_shifted
    };

    let l12 = thermal(0.5, -delta / (2.0 * q), (1.0, -2.0 * a));
    let l3 = thermal(1.5, (delta - 8.0 * s) / (2.0 * q), (0.0, 0.0));
    let l4 = thermal(1.5, (delta + 8.0 * s) / (2.0 * q), (0.0, 0.0));
    [l12, l12, l3, l4]
}

/// Ground-state concurrence of the adjacent pair of the XXZ chain (`J > 0`).
///
/// Nonzero only above the level crossing `Δ_c = −sqrt(1 + D²)`; at and below
/// it the ground manifold contains the disentangled ferromagnetic states.
pub fn c12_ground_xxz(delta: f64, d: f64) -> f64 {
    let s = (1.0 + d * d).sqrt();
    if delta <= -s {
        return 0.0;
    }
    let q = q_xxz(delta, d);
    2.0 * (q + delta - s) * s / (q * (q + delta))
}

/// Ground-state concurrence `2D/q_I` of the adjacent pair of the
/// antiferromagnetic (`J > 0`) Ising chain with DM coupling in a field `h`.
///
/// The value does not depend on `h` until the field saturates the chain at
/// `|h| = (3 + q_I)/2`, beyond which the ground state is fully polarized and
/// the concurrence is 0. At `h = 0` the ground state is a doublet with no
/// closed form here.
pub fn c12_ground_idm_af(d: f64, h: f64) -> Result<f64> {
    if h == 0.0 {
        return Err(Error::contract(
            "the closed form needs h != 0; the h = 0 ground state is a doublet",
        ));
    }
    let q = q_ising(d);
    if 2.0 * h.abs() - 3.0 >= q {
        return Ok(0.0);
    }
    Ok(2.0 * d.abs() / q)
}

/// Ferromagnetic (`J < 0`) counterpart: zero up to [`idm_f_threshold`],
/// `2D/q_I` beyond it.
pub fn c12_ground_idm_f(d: f64, h: f64) -> f64 {
    if d.abs() <= idm_f_threshold(h) {
        0.0
    } else {
        2.0 * d.abs() / q_ising(d)
    }
}

/// DM strength `sqrt(((3 + 2|h|)² − 1)/8)` at which the ferromagnetic Ising
/// chain's ground state turns entangled. Equals 1 at `h = 0`.
pub fn idm_f_threshold(h: f64) -> f64 {
    let k = 3.0 + 2.0 * h.abs();
    ((k * k - 1.0) / 8.0).sqrt()
}

/// The two candidate forms of the negative-anisotropy critical line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalBranch {
    /// `Δ_c = −sqrt(1 + D²)`: the ferromagnetic states cross the ground doublet.
    OnePlusD2,
    /// `Δ_c = −sqrt(1 + 8D²)`.
    OnePlus8D2,
}

impl CriticalBranch {
    pub const ALL: [CriticalBranch; 2] = [CriticalBranch::OnePlusD2, CriticalBranch::OnePlus8D2];

    pub fn delta_c(self, d: f64) -> f64 {
        match self {
            CriticalBranch::OnePlusD2 => -(1.0 + d * d).sqrt(),
            CriticalBranch::OnePlus8D2 => -(1.0 + 8.0 * d * d).sqrt(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CriticalBranch::OnePlusD2 => "-sqrt(1+D^2)",
            CriticalBranch::OnePlus8D2 => "-sqrt(1+8D^2)",
        }
    }
}

fn alt_bracket(delta: f64, d: f64, t: f64) -> f64 {
    let beta = 1.0 / t;
    let q = q_xxz(delta, d);
    let x = beta * q / 4.0;
    (1.0 + 8.0 * d) / q * x.sinh() - x.cosh() - (-beta / 4.0).exp() - 2.0 * (-3.0 * beta / 4.0).exp()
}

/// Residual of the alternative critical-temperature equation (`J = 1`).
/// Tends to −4 as `t → ∞`.
pub fn alt_tc_residual(delta: f64, d: f64, t: f64) -> f64 {
    alt_bracket(delta, d, t)
}

/// Alternative finite-temperature concurrence expression (`J = 1`).
pub fn c12_thermal_alt(delta: f64, d: f64, t: f64) -> f64 {
    let beta = 1.0 / t;
    let z = partition_closed(1.0, delta, d, t);
    (beta / 4.0).exp() / z * alt_bracket(delta, d, t).max(0.0)
}

/// Highest root of [`alt_tc_residual`] in `[t_lo, t_hi]`, located by a
/// log-spaced scan followed by bisection to `tol`.
pub fn alt_tc_root(delta: f64, d: f64, t_lo: f64, t_hi: f64, tol: f64) -> Option<f64> {
    let f = |t: f64| alt_tc_residual(delta, d, t);
    let samples = 256;
    let ts: Vec<f64> = (0..samples)
        .map(|k| t_lo * (t_hi / t_lo).powf(k as f64 / (samples - 1) as f64))
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let k = (0..samples - 1)
        .rev()
        .find(|&k| vals[k].is_finite() && vals[k + 1].is_finite() && vals[k].signum() != vals[k + 1].signum())?;
    let (mut lo, mut hi) = (ts[k], ts[k + 1]);
    let lo_sign = vals[k].signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
