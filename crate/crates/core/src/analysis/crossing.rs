//! Level crossings along a one-parameter family of models.
//!
//! Every supported Hamiltonian conserves total `S^z`, so levels from
//! different magnetization sectors can cross while levels inside one sector
//! repel. Each level is tracked as a branch `(sector, index)`; a crossing is
//! a strict sign change of `E_a − E_b` for branches in different sectors,
//! refined by bisection.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gibbs::{ground_degeneracy, DEFAULT_DEGENERACY_TOL};
use crate::linalg::hermitian_eigenvalues;
use crate::model::{build_hamiltonian, magnetization_sectors, ModelSpec, Param};

pub const SCAN_POINTS: usize = 256;
pub const CROSSING_TOL: f64 = 1e-10;
/// Crossings closer than this are reported once.
pub const MERGE_TOL: f64 = 1e-8;

/// Which crossings to report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CrossingScope {
    /// Only crossings that involve the ground level.
    #[default]
    Ground,
    /// Crossings anywhere in the spectrum.
    Full,
}

impl FromStr for CrossingScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ground" => Ok(CrossingScope::Ground),
            "all" | "full" => Ok(CrossingScope::Full),
            other => Err(Error::Parse(format!(
                "unknown level scope '{other}' (expected ground or all)"
            ))),
        }
    }
}

impl fmt::Display for CrossingScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossingScope::Ground => "ground",
            CrossingScope::Full => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossingOptions {
    pub scan_points: usize,
    pub tol: f64,
    pub scope: CrossingScope,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self {
            scan_points: SCAN_POINTS,
            tol: CROSSING_TOL,
            scope: CrossingScope::Ground,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    pub value: f64,
    /// Energy of the crossing levels.
    pub energy: f64,
    pub involves_ground: bool,
    /// Number of levels at `energy` at the crossing.
    pub multiplicity: usize,
    pub degeneracy_below: usize,
    pub degeneracy_at: usize,
    pub degeneracy_above: usize,
}

struct Family<'a> {
    base: &'a ModelSpec,
    param: Param,
    sectors: Vec<Vec<usize>>,
}

impl Family<'_> {
    fn spec_at(&self, x: f64) -> ModelSpec {
        self.base.clone().with_param(self.param, x)
    }

    /// Ascending eigenvalues of each magnetization sector.
    fn sector_levels(&self, x: f64) -> Result<Vec<Vec<f64>>> {
        let h = build_hamiltonian(&self.spec_at(x))?;
        self.sectors
            .iter()
            .map(|idx| hermitian_eigenvalues(&h.submatrix(idx)))
            .collect()
    }

    fn level(&self, x: f64, (sector, k): (usize, usize)) -> Result<f64> {
        let h = build_hamiltonian(&self.spec_at(x))?;
        Ok(hermitian_eigenvalues(&h.submatrix(&self.sectors[sector]))?[k])
    }

    fn spectrum(&self, x: f64) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&build_hamiltonian(&self.spec_at(x))?)
    }
}

fn energy_tol(e: f64) -> f64 {
    DEFAULT_DEGENERACY_TOL * (1.0 + e.abs())
}

/// Parameter values in `range` (endpoints excluded) where two levels from
/// different magnetization sectors cross.
pub fn level_crossings(
    spec: &ModelSpec,
    free: Param,
    range: (f64, f64),
    opts: &CrossingOptions,
) -> Result<Vec<Crossing>> {
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::contract(format!(
            "range ({lo}, {hi}) must be finite and increasing"
        )));
    }
    if free == Param::J {
        return Err(Error::contract("the free parameter must be delta, d or h"));
    }
    if opts.scan_points < 2 || opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::contract("need at least 2 scan points and a positive tolerance"));
    }
    spec.clone().with_param(free, lo).validate()?;
    spec.clone().with_param(free, hi).validate()?;

    let family = Family {
        base: spec,
        param: free,
        sectors: magnetization_sectors(spec.n),
    };
    let xs: Vec<f64> = (0..opts.scan_points)
        .map(|k| {
            if k + 1 == opts.scan_points {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (opts.scan_points - 1) as f64
            }
        })
        .collect();
    let scan: Vec<Vec<Vec<f64>>> = xs
        .iter()
        .map(|&x| family.sector_levels(x))
        .collect::<Result<_>>()?;

    // A ground crossing always involves the lowest level of some sector.
    let branches: Vec<(usize, usize)> = family
        .sectors
        .iter()
        .enumerate()
        .flat_map(|(s, idx)| {
            let count = match opts.scope {
                CrossingScope::Ground => 1,
                CrossingScope::Full => idx.len(),
            };
            (0..count).map(move |k| (s, k))
        })
        .collect();

    let mut found = Vec::new();
    for (ai, &a) in branches.iter().enumerate() {
        for &b in &branches[ai + 1..] {
            if a.0 == b.0 {
                continue;
            }
            let diffs: Vec<(usize, f64)> = scan
                .iter()
                .enumerate()
                .map(|(k, lv)| {
                    let (ea, eb) = (lv[a.0][a.1], lv[b.0][b.1]);
                    let f = ea - eb;
                    (k, if f.abs() <= energy_tol(ea.abs().max(eb.abs())) { 0.0 } else { f })
                })
                .filter(|&(_, f)| f != 0.0)
                .collect();
            for w in diffs.windows(2) {
                let ((k0, f0), (k1, f1)) = (w[0], w[1]);
                if f0.signum() == f1.signum() {
                    continue;
                }
                let f = |x: f64| -> Result<f64> { Ok(family.level(x, a)? - family.level(x, b)?) };
                let (mut l, mut u) = (xs[k0], xs[k1]);
                while u - l > opts.tol {
                    let mid = 0.5 * (l + u);
                    let fm = f(mid)?;
                    if fm == 0.0 {
                        l = mid;
                        u = mid;
                        break;
                    }
                    if fm.signum() == f0.signum() {
                        l = mid;
                    } else {
                        u = mid;
                    }
                }
                let x = 0.5 * (l + u);
                if x > lo && x < hi {
                    found.push((x, family.level(x, a)?));
                }
            }
        }
    }

    found.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (x, e) in found {
        match merged.last() {
            Some(&(px, pe)) if x - px <= MERGE_TOL && (e - pe).abs() <= 1e-6 * (1.0 + e.abs()) => {}
            _ => merged.push((x, e)),
        }
    }

    let step = (hi - lo) * 1e-6;
    let mut out = Vec::new();
    for (x, energy) in merged {
        let at = family.spectrum(x)?;
        let involves_ground = energy - at[0] <= energy_tol(at[0]);
        if opts.scope == CrossingScope::Ground && !involves_ground {
            continue;
        }
        let tol = energy_tol(energy);
        let multiplicity = at.iter().filter(|&&e| (e - energy).abs() <= tol).count();
        let below = family.spectrum((x - step).max(lo))?;
        let above = family.spectrum((x + step).min(hi))?;
        out.push(Crossing {
            value: x,
            energy,
            involves_ground,
            multiplicity,
            degeneracy_below: ground_degeneracy(&below, DEFAULT_DEGENERACY_TOL),
            degeneracy_at: ground_degeneracy(&at, DEFAULT_DEGENERACY_TOL),
            degeneracy_above: ground_degeneracy(&above, DEFAULT_DEGENERACY_TOL),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> CrossingOptions {
        CrossingOptions {
            scope: CrossingScope::Full,
            ..Default::default()
        }
    }

    #[test]
    fn xxz_ground_crossing_at_minus_sqrt2() {
        let spec = ModelSpec::xxz(1.0, 0.0, 1.0);
        let c = level_crossings(&spec, Param::Delta, (-3.0, 0.0), &CrossingOptions::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c[0].value + 2f64.sqrt()).abs() < 1e-8);
        assert_eq!((c[0].degeneracy_below, c[0].degeneracy_at, c[0].degeneracy_above), (2, 4, 2));
        assert!(c[0].involves_ground);
        let all = level_crossings(&spec, Param::Delta, (-3.0, 0.0), &full()).unwrap();
        assert_eq!(all, c);
    }

    #[test]
    fn ising_crossing_at_unit_d() {
        for j in [1.0, -1.0] {
            let spec = ModelSpec::ising_dm(j, 0.0);
            let c = level_crossings(&spec, Param::D, (0.5, 1.5), &full()).unwrap();
            assert_eq!(c.len(), 1, "j={j}: {c:?}");
            assert!((c[0].value - 1.0).abs() < 1e-8);
        }
        // Antiferromagnetic: the crossing is above the ground doublet.
        let af = level_crossings(&ModelSpec::ising_dm(1.0, 0.0), Param::D, (0.5, 1.5), &CrossingOptions::default());
        assert!(af.unwrap().is_empty());
        let f = level_crossings(&ModelSpec::ising_dm(-1.0, 0.0), Param::D, (0.5, 1.5), &CrossingOptions::default());
        assert_eq!(f.unwrap().len(), 1);
    }

    #[test]
    fn empty_when_no_crossing() {
        let spec = ModelSpec::xxz(1.0, 0.0, 1.0);
        assert!(level_crossings(&spec, Param::Delta, (0.5, 0.9), &full()).unwrap().is_empty());
    }

    #[test]
    fn endpoint_crossing_is_excluded() {
        let spec = ModelSpec::xxz(1.0, 0.0, 1.0);
        let c = level_crossings(&spec, Param::Delta, (-2f64.sqrt(), -0.5), &CrossingOptions::default()).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn bad_arguments() {
        let spec = ModelSpec::xxz(1.0, 0.0, 1.0);
        let opts = CrossingOptions::default();
        assert!(level_crossings(&spec, Param::Delta, (1.0, 0.0), &opts).is_err());
        assert!(level_crossings(&spec, Param::J, (0.0, 1.0), &opts).is_err());
        assert!(level_crossings(&spec, Param::H, (0.0, 1.0), &opts).is_err());
        assert!(level_crossings(&spec, Param::Delta, (f64::NAN, 1.0), &opts).is_err());
    }
}
