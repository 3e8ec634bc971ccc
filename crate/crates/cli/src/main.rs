use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod examples;
mod scenario;

use error::CliError;
use scenario::{load_config, Builtin, Params, Scenario};

/// Realignment entanglement criteria for Gaussian states.
#[derive(Debug, Parser)]
#[command(name = "cvrealign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the entanglement criteria of a scenario.
    Criterion {
        #[command(flatten)]
        input: Input,
        /// Write `<id>.criterion.json` files here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the filter transmittance and emit the curve as CSV.
    SweepT {
        #[command(flatten)]
        input: Input,
        /// Number of grid points (default 400).
        #[arg(long)]
        grid: Option<usize>,
        /// Phase shift on the first mode of A before filtering, e.g. `pi`.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        pre_phase: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the library against the closed forms of the example families.
    Examples {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check a built-in state against the truncated Fock computation.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Fixed Fock cutoff instead of the 40/60/80 ladder.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Also compare attenuation of A at this transmittance.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Built-in state: eprnoise, eprnoise-b, gamma1, gamma2, epr4, vacuum, tmsv, thermal.
    #[arg(conflicts_with = "config")]
    builtin: Option<String>,
    /// JSON scenario file (one scenario or an array).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    r: Option<f64>,
    /// Added noise variance.
    #[arg(long = "V")]
    v: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: Option<f64>,
}

impl Input {
    fn scenarios(&self) -> Result<Vec<Scenario>, CliError> {
        let over = Params {
            r: self.r,
            v: self.v,
            tau: self.tau,
            theta: self.theta,
        };
        match (&self.builtin, &self.config) {
            (Some(name), None) => Ok(vec![Scenario::builtin(Builtin::parse(name)?, over)?]),
            (None, Some(path)) => {
                if over != Params::default() {
                    return Err(CliError::Invalid(
                        "parameter flags apply to builtins only; set them in the config".into(),
                    ));
                }
                load_config(path)
            }
            _ => Err(CliError::Invalid("give a builtin name or --config".into())),
        }
    }
}

/// Angles may be written as numbers or as multiples of `pi`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let value = if let Some(rest) = body.strip_suffix("pi") {
        let k = rest.trim_end_matches('*');
        if k.is_empty() {
            std::f64::consts::PI
        } else {
            k.parse::<f64>()
                .map_err(|e| format!("bad angle `{s}`: {e}"))?
                * std::f64::consts::PI
        }
    } else if let Some((num, den)) = body.split_once("pi/") {
        let k = if num.trim_end_matches('*').is_empty() {
            1.0
        } else {
            num.trim_end_matches('*')
                .parse::<f64>()
                .map_err(|e| format!("bad angle `{s}`: {e}"))?
        };
        k * std::f64::consts::PI
            / den
                .parse::<f64>()
                .map_err(|e| format!("bad angle `{s}`: {e}"))?
    } else {
        body.parse::<f64>()
            .map_err(|e| format!("bad angle `{s}`: {e}"))?
    };
    Ok(sign * value)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Criterion { input, out } => {
            commands::criterion(&input.scenarios()?, out.as_deref())
        }
        Command::SweepT {
            input,
            grid,
            pre_phase,
            out,
        } => commands::sweep(&input.scenarios()?, grid, pre_phase, out.as_deref()),
        Command::Examples { out } => commands::examples(out.as_deref()),
        Command::Oracle {
            input,
            cutoff,
            t,
            out,
        } => commands::oracle(&input.scenarios()?, cutoff, t, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 0.75 * PI);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
