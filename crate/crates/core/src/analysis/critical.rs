use crate::entangle::pairwise_concurrence;
use crate::error::{Error, Result};
use crate::gibbs::Diagonalized;
use crate::model::ModelSpec;

/// Lowest temperature sampled; stands in for `t → 0⁺`.
pub const T_FLOOR: f64 = 1e-6;
pub const SCAN_POINTS: usize = 64;
pub const TC_TOL: f64 = 1e-8;
const MAX_WIDENINGS: usize = 40;

/// Concurrence of `pair` as a function of temperature for a fixed model.
pub struct ThermalConcurrence {
    diag: Diagonalized,
    pair: (usize, usize),
}

impl ThermalConcurrence {
    pub fn new(spec: &ModelSpec, pair: (usize, usize)) -> Result<Self> {
        spec.validate()?;
        let (i, j) = pair;
        if i == 0 || j == 0 || i > spec.n || j > spec.n || i == j {
            return Err(Error::contract(format!(
                "pair ({i}, {j}) is not two distinct sites in 1..={}",
                spec.n
            )));
        }
        Ok(Self {
            diag: Diagonalized::from_model(spec)?,
            pair,
        })
    }

    pub fn at(&self, t: f64) -> Result<f64> {
        let rho = self.diag.thermal_state(t)?;
        Ok(pairwise_concurrence(&rho, self.pair.0, self.pair.1)?.value)
    }
}

/// Temperature above which the concurrence of `pair` is exactly zero.
///
/// Samples 64 log-spaced temperatures on `[1e-6, t_hi]` and bisects the
/// highest positive-to-zero transition, so a window of entanglement that
/// opens only at finite temperature is still found. Returns `None` when no
/// sample is entangled. If the concurrence is still positive at `t_hi`, the
/// upper end is doubled until it vanishes.
pub fn critical_temperature(spec: &ModelSpec, pair: (usize, usize), t_hi: f64) -> Result<Option<f64>> {
    if !t_hi.is_finite() || t_hi <= T_FLOOR {
        return Err(Error::contract(format!(
            "t_hi must be finite and above {T_FLOOR}, got {t_hi}"
        )));
    }
    let c = ThermalConcurrence::new(spec, pair)?;

    let mut hi = t_hi;
    let mut widened = 0;
    while c.at(hi)? > 0.0 {
        widened += 1;
        if widened > MAX_WIDENINGS {
            return Err(Error::numeric(format!(
                "concurrence still positive at t = {hi:e}; no upper bracket"
            )));
        }
        hi *= 2.0;
    }

    let ratio = hi / T_FLOOR;
    let ts: Vec<f64> = (0..SCAN_POINTS)
        .map(|k| match k {
            0 => T_FLOOR,
            k if k == SCAN_POINTS - 1 => hi,
            k => T_FLOOR * ratio.powf(k as f64 / (SCAN_POINTS - 1) as f64),
        })
        .collect();
    let mut values = Vec::with_capacity(SCAN_POINTS);
    for &t in &ts {
        values.push(c.at(t)?);
    }
    let Some(k) = values.iter().rposition(|&v| v > 0.0) else {
        return Ok(None);
    };

    let (mut lo, mut up) = (ts[k], ts[k + 1]);
    while up - lo > TC_TOL {
        let mid = 0.5 * (lo + up);
        if c.at(mid)? > 0.0 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Ok(Some(0.5 * (lo + up)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn never_entangled_gives_none() {
        let spec = ModelSpec::xxz(1.0, -5.0, 0.0);
        assert_eq!(critical_temperature(&spec, (1, 2), 10.0).unwrap(), None);
    }

    #[test]
    fn isotropic_point_has_finite_tc() {
        let spec = ModelSpec::xxz(1.0, 0.0, 0.0);
        let tc = critical_temperature(&spec, (1, 2), 10.0).unwrap().unwrap();
        let c = ThermalConcurrence::new(&spec, (1, 2)).unwrap();
        assert!(c.at(tc - 1e-6).unwrap() > 0.0);
        assert_eq!(c.at(tc + 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn widens_small_upper_bound() {
        let spec = ModelSpec::xxz(1.0, 0.0, 1.0);
        let a = critical_temperature(&spec, (1, 2), 1e-3).unwrap().unwrap();
        let b = critical_temperature(&spec, (1, 2), 20.0).unwrap().unwrap();
        assert!((a - b).abs() < 1e-7);
    }

    #[test]
    fn reentrant_window_is_found() {
        let d = 0.95 * 6f64.sqrt();
        let spec = ModelSpec::ising_dm_field(-1.0, d, 2.0);
        let c = ThermalConcurrence::new(&spec, (1, 2)).unwrap();
        assert_eq!(c.at(T_FLOOR).unwrap(), 0.0);
        let tc = critical_temperature(&spec, (1, 2), 2.0).unwrap().unwrap();
        assert!(c.at(tc - 1e-6).unwrap() > 0.0);
        assert_eq!(c.at(tc + 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let spec = ModelSpec::xxz(1.0, 0.0, 0.0);
        assert!(critical_temperature(&spec, (1, 2), 0.0).is_err());
        assert!(critical_temperature(&spec, (1, 1), 1.0).is_err());
        assert!(critical_temperature(&spec, (1, 4), 1.0).is_err());
    }
}
