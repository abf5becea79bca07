use std::fmt;
use std::str::FromStr;

use super::sweep::{Observable, SweepAxis, SweepGrid, SweepVar};
use crate::error::{Error, Result};
use crate::model::ModelSpec;

pub const DEFAULT_TEMPERATURES: [f64; 4] = [0.0, 0.1, 0.5, 1.0];
pub const DEFAULT_POINTS: usize = 101;

/// Ready-made sweeps for the standard concurrence plots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig15,
    Fig19,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig15,
        FigureId::Fig19,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig15 => "fig15",
            FigureId::Fig19 => "fig19",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FigureId::Fig1 => "xxz-dm, c12 vs delta in [-3, 3], d = 0",
            FigureId::Fig2 => "xxz-dm, c12 vs delta in [-4, 4], d = 2",
            FigureId::Fig3 => "xxz-dm, c12 vs d in [0, 3], delta = -1.5",
            FigureId::Fig4 => "xxz-dm, c12 vs d in [0, 3], delta = -0.5",
            FigureId::Fig5 => "xxz-dm, c12 vs d in [0, 3], delta = 0.5",
            FigureId::Fig6 => "xxz-dm, c12 vs d in [0, 3], delta = 1.5",
            FigureId::Fig7 => "ising-dm-field, j = 1, c12 vs d in [0, 3], h = 2",
            FigureId::Fig8 => "ising-dm-field, j = -1, c12 vs d in [0, 4], h = 2",
            FigureId::Fig15 => "ising-dm-field, j = 1, c12 vs h in [0, 5], d = 2",
            FigureId::Fig19 => "ising-dm-field, j = -1, c12 vs h in [0, 5], d = 2",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        match key.as_str() {
            "fig13" => return Ok(FigureId::Fig7),
            "fig17" => return Ok(FigureId::Fig8),
            _ => {}
        }
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::contract(format!("unknown figure id '{}'", s.trim())))
    }
}

fn family(fixed: ModelSpec, var: SweepVar, min: f64, max: f64) -> SweepGrid {
    SweepGrid::new(
        fixed,
        vec![
            SweepAxis::range(var, min, max, DEFAULT_POINTS),
            SweepAxis::list(SweepVar::T, DEFAULT_TEMPERATURES.to_vec()),
        ],
        vec![Observable::C12],
    )
}

/// The sweep behind a figure id: a parameter axis followed by the
/// temperature family.
pub fn figure_preset(id: FigureId) -> SweepGrid {
    use SweepVar::{Delta, D, H};
    match id {
        FigureId::Fig1 => family(ModelSpec::xxz(1.0, 0.0, 0.0), Delta, -3.0, 3.0),
        FigureId::Fig2 => family(ModelSpec::xxz(1.0, 0.0, 2.0), Delta, -4.0, 4.0),
        FigureId::Fig3 => family(ModelSpec::xxz(1.0, -1.5, 0.0), D, 0.0, 3.0),
        FigureId::Fig4 => family(ModelSpec::xxz(1.0, -0.5, 0.0), D, 0.0, 3.0),
        FigureId::Fig5 => family(ModelSpec::xxz(1.0, 0.5, 0.0), D, 0.0, 3.0),
        FigureId::Fig6 => family(ModelSpec::xxz(1.0, 1.5, 0.0), D, 0.0, 3.0),
        FigureId::Fig7 => family(ModelSpec::ising_dm_field(1.0, 0.0, 2.0), D, 0.0, 3.0),
        FigureId::Fig8 => family(ModelSpec::ising_dm_field(-1.0, 0.0, 2.0), D, 0.0, 4.0),
        FigureId::Fig15 => family(ModelSpec::ising_dm_field(1.0, 2.0, 0.0), H, 0.0, 5.0),
        FigureId::Fig19 => family(ModelSpec::ising_dm_field(-1.0, 2.0, 0.0), H, 0.0, 5.0),
    }
}

pub fn figure_preset_by_name(name: &str) -> Result<SweepGrid> {
    Ok(figure_preset(name.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::sweep::run_sweep;

    #[test]
    fn axes_and_fixed_values() {
        let g = figure_preset(FigureId::Fig1);
        assert_eq!(g.axes[0].var, SweepVar::Delta);
        assert_eq!(g.fixed.d, 0.0);
        assert_eq!(figure_preset(FigureId::Fig6).fixed.delta, 1.5);
        assert_eq!(g.header(), ["delta", "t", "c12"]);
        assert_eq!(g.len(), DEFAULT_POINTS * DEFAULT_TEMPERATURES.len());
    }

    #[test]
    fn aliases_and_unknown_ids() {
        assert_eq!("fig13".parse::<FigureId>().unwrap(), FigureId::Fig7);
        assert_eq!("FIG17".parse::<FigureId>().unwrap(), FigureId::Fig8);
        assert!(matches!("fig9".parse::<FigureId>(), Err(Error::Contract(_))));
    }

    #[test]
    fn every_preset_runs() {
        for id in FigureId::ALL {
            let table = run_sweep(&figure_preset(id)).unwrap();
            assert_eq!(table.len(), DEFAULT_POINTS * DEFAULT_TEMPERATURES.len(), "{id}");
            assert!(table.rows.iter().all(|r| r.iter().all(|x| x.is_finite())));
        }
    }
}
