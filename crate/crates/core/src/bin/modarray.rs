use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modarray::sweep::{emit_csv, load_config, report_regions, write_csv, DEFAULT_STEPS};
use modarray::{
    figure_preset, lobe_report_upw, run_figure, run_sweep, ArrayConfig, Error, Figure, PatternModel, PatternSweep,
    PolarPoint, Result, SweepSpec, SweepVariable,
};

#[derive(Parser)]
#[command(name = "modarray", version, about = "Beam patterns and field regions of modular linear arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate beam patterns along one axis and write CSV.
    Sweep(SweepArgs),
    /// Reproduce a figure preset as CSV.
    Figure {
        /// fig3, fig4a, fig4b or fig4c.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the field-region boundaries and classify distances.
    Regions {
        #[command(flatten)]
        array: ArrayArgs,
        /// Comma-separated distances in meters.
        #[arg(long = "r", value_delimiter = ',', allow_negative_numbers = true)]
        distances: Vec<f64>,
    },
    /// Print main-lobe width, resolutions and grating lobes.
    Lobes {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
}

#[derive(Args)]
struct ArrayArgs {
    /// Array configuration file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Take the modular array of a figure preset.
    #[arg(long)]
    preset: Option<String>,
}

impl ArrayArgs {
    fn resolve(&self) -> Result<ArrayConfig> {
        match (&self.config, &self.preset) {
            (Some(path), _) => load_config(path),
            (None, Some(name)) => Ok(*figure_preset(name.parse()?).modular()),
            (None, None) => Err(Error::Usage("either --config or --preset is required".into())),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    array: ArrayArgs,
    /// Comma-separated models.
    #[arg(long, value_delimiter = ',', default_value = "upw")]
    model: Vec<String>,
    /// Focus point as R,THETA_DEG.
    #[arg(long, default_value = "200,0", allow_hyphen_values = true)]
    focus: String,
    /// dtheta, distance or angle (degrees).
    #[arg(long, default_value = "dtheta")]
    var: String,
    /// START:STOP:STEPS, STEPS optional.
    #[arg(long, allow_hyphen_values = true)]
    range: String,
    /// Observation distance for dtheta and angle sweeps; defaults to the focus distance.
    #[arg(long)]
    obs_distance: Option<f64>,
    /// Observation angle in degrees for distance sweeps; defaults to the focus angle.
    #[arg(long, allow_hyphen_values = true)]
    obs_angle: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Usage(format!("{what}: '{s}' is not a number")))
}

fn parse_focus(s: &str) -> Result<PolarPoint> {
    let (r, theta) = s
        .split_once(',')
        .ok_or_else(|| Error::Usage(format!("--focus expects R,THETA_DEG, got '{s}'")))?;
    PolarPoint::from_degrees(parse_number(r, "--focus")?, parse_number(theta, "--focus")?)
}

fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let steps = match parts.len() {
        2 => DEFAULT_STEPS,
        3 => parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("--range: '{}' is not a step count", parts[2])))?,
        _ => return Err(Error::Usage(format!("--range expects START:STOP[:STEPS], got '{s}'"))),
    };
    Ok((parse_number(parts[0], "--range")?, parse_number(parts[1], "--range")?, steps))
}

fn write_output(sweeps: &[PatternSweep], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => emit_csv(sweeps, path),
        None => write_csv(sweeps, io::stdout().lock()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn run_sweep_command(args: &SweepArgs) -> Result<()> {
    let config = args.array.resolve()?;
    let models = args
        .model
        .iter()
        .map(|m| m.parse())
        .collect::<Result<Vec<PatternModel>>>()?;
    let focus = parse_focus(&args.focus)?;
    let variable: SweepVariable = args.var.parse()?;
    let (start, stop, steps) = parse_range(&args.range)?;
    let spec = SweepSpec {
        variable,
        start,
        stop,
        steps,
        focus,
        observation_distance: args.obs_distance.unwrap_or(focus.distance()),
        observation_angle: args.obs_angle.map_or(focus.angle(), f64::to_radians),
    };
    let sweeps = run_sweep(&config, &spec, &models)?;
    write_output(&sweeps, args.out.as_ref())
}

fn print(text: &str) -> Result<()> {
    io::stdout().lock().write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => run_sweep_command(&args),
        Command::Figure { name, out } => {
            let figure: Figure = name.parse()?;
            let sweeps = run_figure(&figure_preset(figure))?;
            write_output(&sweeps, out.as_ref())
        }
        Command::Regions { array, distances } => print(&report_regions(&array.resolve()?, &distances)?),
        Command::Lobes { array, k_max } => {
            let report = lobe_report_upw(&array.resolve()?, k_max);
            let mut text = format!(
                "main_lobe_null_to_null {:.9}\nangular_resolution_sparse {:.9}\nangular_resolution_collocated_factor {:.9}\ngrating_lobe_period {:.9}\n",
                report.main_lobe_null_to_null,
                report.angular_resolution_sparse,
                report.angular_resolution_collocated_factor,
                report.grating_lobe_period
            );
            text.push_str("delta_theta level\n");
            for lobe in &report.grating_lobes {
                text.push_str(&format!("{:.9} {:.9}\n", lobe.delta_theta, lobe.level));
            }
            print(&text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("modarray: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
