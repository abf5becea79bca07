//! Parameter sweeps, critical temperatures and level crossings.

pub mod critical;
pub mod crossing;
pub mod presets;
pub mod sweep;

pub use critical::{critical_temperature, ThermalConcurrence};
pub use crossing::{level_crossings, Crossing, CrossingOptions, CrossingScope};
pub use presets::{figure_preset, figure_preset_by_name, FigureId, DEFAULT_POINTS, DEFAULT_TEMPERATURES};
pub use sweep::{
    evaluate, format_value, run_sweep, run_sweep_with_threads, AxisValues, Observable, SweepAxis,
    SweepGrid, SweepTable, SweepVar,
};
