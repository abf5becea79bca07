//! Command-line front end. [`run`] holds all the logic so it can be driven
//! from tests; the binary only forwards `std::env::args_os`.
//!
//! Exit codes: 0 on success, 1 for usage and input errors, 2 for numerical
//! failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    critical_temperature, figure_preset, format_value, level_crossings, run_sweep, CrossingOptions,
    CrossingScope, FigureId, Observable, SweepAxis, SweepGrid, SweepTable, SweepVar,
};
use crate::entangle::model_concurrence;
use crate::error::{Error, Result};
use crate::gibbs::Diagonalized;
use crate::model::{ModelSpec, Param};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "spinlab",
    version,
    about = "Exact diagonalization, Gibbs states and pairwise concurrence for small spin chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the energy levels of a model
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Concurrence of one pair at one temperature
    Concurrence {
        #[command(flatten)]
        model: ModelArgs,
        /// Temperature (k_B = 1); 0 selects the ground manifold
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        /// Site pair, 1-based
        #[arg(long, default_value = "1,2", value_parser = parse_pair)]
        pair: (usize, usize),
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate observables on a one- or two-axis grid
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Axis as NAME=MIN:MAX:POINTS or NAME=V1,V2,... with NAME in delta, d, h, t
        #[arg(long = "axis", required = true, value_parser = parse_axis, allow_hyphen_values = true)]
        axes: Vec<SweepAxis>,
        /// Comma-separated observables: c12, c13, energy_gap, purity, ground_degeneracy
        #[arg(long, default_value = "c12", value_delimiter = ',', value_parser = parse_observable)]
        observables: Vec<Observable>,
        /// Temperature when t is not an axis
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Temperature above which a pair's concurrence vanishes
    CriticalTemp {
        #[command(flatten)]
        model: ModelArgs,
        /// Site pair, 1-based
        #[arg(long, default_value = "1,2", value_parser = parse_pair)]
        pair: (usize, usize),
        /// Initial upper end of the temperature bracket (doubled if needed)
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        t_hi: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Level crossings along one free parameter
    PhaseLine {
        #[command(flatten)]
        model: ModelArgs,
        /// Free parameter
        #[arg(long, value_parser = parse_free)]
        free: Param,
        /// Parameter interval as LO,HI (endpoints excluded)
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: (f64, f64),
        /// Report crossings among all levels or only those at the ground level
        #[arg(long, value_enum, default_value_t = Levels::All)]
        levels: Levels,
        /// Number of scan points before bisection
        #[arg(long, default_value_t = crate::analysis::crossing::SCAN_POINTS)]
        scan_points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Data for a preset concurrence plot
    Figure {
        /// Preset id (fig1 ... fig8, fig15, fig19)
        #[arg(long, required_unless_present = "list")]
        id: Option<String>,
        /// Override the number of points on the parameter axis
        #[arg(long)]
        points: Option<usize>,
        /// Override the temperature family, comma-separated
        #[arg(long, value_delimiter = ',')]
        temps: Option<Vec<f64>>,
        /// List the presets and exit
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Model flags; each mirrors a key of the `key=value` config form.
#[derive(Args, Debug)]
struct ModelArgs {
    /// Read model keys from a key=value file (# comments); flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Model kind: xxz-dm, ising-dm or ising-dm-field [default: xxz-dm]
    #[arg(long)]
    kind: Option<String>,
    /// Exchange coupling J; negative is ferromagnetic [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    j: Option<String>,
    /// zz anisotropy (xxz-dm only) [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// z-axis Dzyaloshinskii-Moriya strength [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Longitudinal field (ising-dm-field only) [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Number of sites [default: 3]
    #[arg(long)]
    n: Option<String>,
    /// open or periodic [default: open; see README, Conventions]
    #[arg(long)]
    boundary: Option<String>,
    /// Sign in front of the zz term: plus or minus [default: plus; see README, Conventions]
    #[arg(long)]
    delta_sign: Option<String>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<ModelSpec> {
        let mut spec = ModelSpec::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            spec.merge_kv_text(&text)?;
        }
        let flags = [
            ("kind", &self.kind),
            ("j", &self.j),
            ("delta", &self.delta),
            ("d", &self.d),
            ("h", &self.h),
            ("n", &self.n),
            ("boundary", &self.boundary),
            ("delta_sign", &self.delta_sign),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                spec.apply_kv(key, v)?;
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Table format; scalar commands print plain text when omitted
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Fixed digits after the decimal point [default: shortest round-trip]
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Levels {
    Ground,
    All,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected I,J")?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("'{x}' is not a site"));
    Ok((p(a)?, p(b)?))
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("'{x}' is not a number"));
    Ok((p(a)?, p(b)?))
}

fn parse_free(s: &str) -> std::result::Result<Param, String> {
    match s.trim() {
        "delta" => Ok(Param::Delta),
        "d" => Ok(Param::D),
        "h" => Ok(Param::H),
        other => Err(format!("'{other}' is not one of delta, d, h")),
    }
}

fn parse_axis(s: &str) -> std::result::Result<SweepAxis, String> {
    let (name, spec) = s.split_once('=').ok_or("expected NAME=MIN:MAX:POINTS or NAME=V1,V2,...")?;
    let var: SweepVar = name.parse().map_err(|e: Error| e.to_string())?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("'{x}' is not a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [min, max, points] => {
            let points = points
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("'{points}' is not a point count"))?;
            Ok(SweepAxis::range(var, num(min)?, num(max)?, points))
        }
        [list] => Ok(SweepAxis::list(
            var,
            list.split(',').map(num).collect::<std::result::Result<_, _>>()?,
        )),
        _ => Err("expected NAME=MIN:MAX:POINTS or NAME=V1,V2,...".into()),
    }
}

fn parse_observable(s: &str) -> std::result::Result<Observable, String> {
    s.parse::<Observable>().map_err(|e| e.to_string())
}

/// A command's result, rendered according to the output flags.
enum Report {
    Text(String),
    Table(SweepTable),
    Json(serde_json::Value),
}

fn num(x: f64, precision: Option<usize>) -> String {
    format_value(x, precision)
}

fn table(header: &[&str], rows: Vec<Vec<f64>>) -> Result<SweepTable> {
    SweepTable::from_parts(header.iter().map(|s| s.to_string()).collect(), rows)
}

fn execute(cmd: Command) -> Result<(Report, OutputArgs)> {
    match cmd {
        Command::Spectrum { model, output } => {
            let spec = model.resolve()?;
            let diag = Diagonalized::from_model(&spec)?;
            let rows = diag
                .energies()
                .iter()
                .enumerate()
                .map(|(k, &e)| vec![k as f64, e])
                .collect();
            let mut t = table(&["index", "energy"], rows)?;
            t.mark_integer(0);
            Ok((Report::Table(t), output))
        }
        Command::Concurrence {
            model,
            t,
            pair,
            output,
        } => {
            let spec = model.resolve()?;
            let r = model_concurrence(&spec, t, pair.0, pair.1)?;
            let p = output.precision;
            let text = num(r.value, p);
            let report = match output.format {
                None => Report::Text(text),
                Some(Format::Csv) => Report::Text(format!(
                    "i,j,t,concurrence\n{},{},{},{}",
                    pair.0,
                    pair.1,
                    num(t, p),
                    text
                )),
                Some(Format::Json) => Report::Json(json!({
                    "pair": [pair.0, pair.1],
                    "t": t,
                    "concurrence": r.value,
                    "lambdas": r.lambdas,
                })),
            };
            Ok((report, output))
        }
        Command::Sweep {
            model,
            axes,
            observables,
            t,
            output,
        } => {
            let spec = model.resolve()?;
            let grid = SweepGrid::new(spec, axes, observables).with_t(t);
            Ok((Report::Table(run_sweep(&grid)?), output))
        }
        Command::CriticalTemp {
            model,
            pair,
            t_hi,
            output,
        } => {
            let spec = model.resolve()?;
            let tc = critical_temperature(&spec, pair, t_hi)?;
            let text = tc.map_or_else(|| "none".to_string(), |x| num(x, output.precision));
            let report = match output.format {
                None => Report::Text(text),
                Some(Format::Csv) => Report::Text(format!("i,j,tc\n{},{},{}", pair.0, pair.1, text)),
                Some(Format::Json) => Report::Json(json!({"pair": [pair.0, pair.1], "tc": tc})),
            };
            Ok((report, output))
        }
        Command::PhaseLine {
            model,
            free,
            range,
            levels,
            scan_points,
            output,
        } => {
            let spec = model.resolve()?;
            let opts = CrossingOptions {
                scan_points,
                scope: match levels {
                    Levels::Ground => CrossingScope::Ground,
                    Levels::All => CrossingScope::Full,
                },
                ..Default::default()
            };
            let crossings = level_crossings(&spec, free, range, &opts)?;
            let name = free.name();
            if output.format.is_none() {
                let p = output.precision.unwrap_or(8);
                let mut text = String::new();
                if crossings.is_empty() {
                    text.push_str("no crossing");
                }
                for (k, c) in crossings.iter().enumerate() {
                    if k > 0 {
                        text.push('\n');
                    }
                    text.push_str(&format!(
                        "crossing {name} = {:.p$} energy = {:.p$} levels = {} ground = {} degeneracy {} -> {} -> {}",
                        c.value,
                        c.energy,
                        c.multiplicity,
                        if c.involves_ground { "yes" } else { "no" },
                        c.degeneracy_below,
                        c.degeneracy_at,
                        c.degeneracy_above
                    ));
                }
                return Ok((Report::Text(text), output));
            }
            let rows = crossings
                .iter()
                .map(|c| {
                    vec![
                        c.value,
                        c.energy,
                        c.multiplicity as f64,
                        if c.involves_ground { 1.0 } else { 0.0 },
                        c.degeneracy_below as f64,
                        c.degeneracy_at as f64,
                        c.degeneracy_above as f64,
                    ]
                })
                .collect();
            let mut t = table(
                &[
                    name,
                    "energy",
                    "multiplicity",
                    "ground",
                    "degeneracy_below",
                    "degeneracy_at",
                    "degeneracy_above",
                ],
                rows,
            )?;
            for c in 2..7 {
                t.mark_integer(c);
            }
            Ok((Report::Table(t), output))
        }
        Command::Figure {
            id,
            points,
            temps,
            list,
            output,
        } => {
            if list {
                let text = FigureId::ALL
                    .iter()
                    .map(|f| format!("{:<6} {}", f.name(), f.description()))
                    .collect::<Vec<_>>()
                    .join("\n");
                return Ok((Report::Text(text), output));
            }
            let id: FigureId = id.as_deref().unwrap_or_default().parse()?;
            let mut grid = figure_preset(id);
            if let Some(p) = points {
                grid = grid.with_points(p);
            }
            if let Some(ts) = temps {
                grid = grid.with_temperatures(ts);
            }
            Ok((Report::Table(run_sweep(&grid)?), output))
        }
    }
}

fn render(report: Report, output: &OutputArgs) -> String {
    let mut s = match report {
        Report::Text(text) => text,
        Report::Json(value) => serde_json::to_string_pretty(&value).expect("plain JSON value"),
        Report::Table(t) => match output.format {
            Some(Format::Json) => t.to_json(output.precision),
            _ => t.to_csv(output.precision),
        },
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    let io_err = |e: io::Error| Error::Parse(format!("cannot write output: {e}"));
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| Error::Parse(format!("cannot create {}: {e}", p.display())))?;
            f.write_all(text.as_bytes()).map_err(io_err)
        }
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

/// Parse `argv` (including the program name), run the command and return
/// the process exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{first}");
            return EXIT_USAGE;
        }
    };
    let result = execute(cli.command).and_then(|(report, output)| {
        let text = render(report, &output);
        emit(&text, output.output.as_ref(), out)
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_USAGE
            }
        }
    }
}
