//! `arcspace`: command-line front end. Exit status 0 when every check
//! passes, 1 when a check fails, 2 on bad input.

mod commands;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use arcspace::expr::{parse_job, Command, JobSpec, Params, Report};
use arcspace::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "arcspace",
    version,
    about = "Finite models of arc spaces on hypersurface germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Multiplicity of a plane-curve branch or of an arc
    Mult(Args),
    /// Lift a perturbed plane curve's branch over the job's ring
    Lift(Args),
    /// Lift an arc deformation to the hypersurface
    LiftArc(Args),
    /// Universal obstruction series or finite arc model
    Model(Args),
    /// Flow an arc along a tangent vector field
    Flow(Args),
    /// Move an arc to one with polynomial projection of degree N
    Truncate(Args),
    /// Run the checks of one worked example
    VerifyExample(Args),
    /// Run every property suite and all worked examples
    Selftest(Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Args {
    /// Job file
    #[arg(long)]
    job: Option<PathBuf>,
    /// Worked example 1, 2 or 3
    #[arg(long)]
    example: Option<u8>,
    /// Width of the examples' vector variables
    #[arg(long)]
    r: Option<usize>,
    /// Truncation degree of the arc model
    #[arg(long = "N")]
    n: Option<usize>,
    /// Adic truncation of the model ring
    #[arg(long = "K")]
    k: Option<u32>,
    /// Series precision
    #[arg(long = "T")]
    t: Option<usize>,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized checks
    #[arg(long)]
    seed: Option<u64>,
}

impl Sub {
    fn split(self) -> (Command, Args) {
        match self {
            Sub::Mult(a) => (Command::Mult, a),
            Sub::Lift(a) => (Command::Lift, a),
            Sub::LiftArc(a) => (Command::LiftArc, a),
            Sub::Model(a) => (Command::Model, a),
            Sub::Flow(a) => (Command::Flow, a),
            Sub::Truncate(a) => (Command::Truncate, a),
            Sub::VerifyExample(a) => (Command::VerifyExample, a),
            Sub::Selftest(a) => (Command::Selftest, a),
        }
    }
}

fn load(command: Command, args: &Args) -> Result<JobSpec> {
    let mut job = match &args.job {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Error::Job(format!("cannot read {}: {e}", path.display())))?;
            let job = parse_job(&text).map_err(|e| match e {
                Error::Syntax { line, column, message } => {
                    Error::Job(format!("{}:{line}:{column}: {message}", path.display()))
                }
                other => other,
            })?;
            if job.command != command {
                return Err(Error::Job(format!(
                    "{} is a `{}` job, not `{command}`",
                    path.display(),
                    job.command
                )));
            }
            job
        }
        None if matches!(command, Command::VerifyExample | Command::Selftest) => {
            JobSpec::bare(command, Params::default())
        }
        None => return Err(Error::Job(format!("{command} needs --job"))),
    };
    let p = &mut job.params;
    if let Some(e) = args.example {
        p.example = Some(e);
    }
    if let Some(r) = args.r {
        p.r = r;
    }
    if let Some(n) = args.n {
        p.n = n;
    }
    if let Some(k) = args.k {
        p.k = k;
    }
    if let Some(t) = args.t {
        p.t = t;
    }
    if let Some(s) = args.seed {
        p.seed = s;
    }
    p.validate()?;
    Ok(job)
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.render_text(),
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = report
                .flatten()
                .into_iter()
                .map(|(k, v)| (k, serde_json::Value::String(v)))
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("strings serialize");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let (command, args) = Cli::parse().command.split();
    let report = match load(command, &args).and_then(|job| commands::run(&job)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("arcspace {command}: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&report, args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("arcspace {command}: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(status(&report))
}

fn status(report: &Report) -> u8 {
    if report.passed() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use arcspace::expr::Check;

    #[test]
    fn failing_check_exits_one() {
        let mut r = Report::new();
        r.put("m", 1);
        assert_eq!(status(&r), 0);
        r.check(Check::new("a", true));
        r.check(Check::new("b", false));
        assert_eq!(status(&r), 1);
    }
}
