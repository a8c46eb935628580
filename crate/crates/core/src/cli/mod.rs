//! Command-line front end. [`run_cli`] parses arguments, runs one subcommand
//! and returns the process exit code: 0 success or pass, 1 witnesses found,
//! 2 input or config error, 3 numerical failure.

mod commands;
mod options;
mod output;

pub use options::{parse_list, Opts};
pub use output::{to_json, VERSION};

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "dirdescent",
    version,
    about = "Lower convex envelopes, property checks and two-stage directional descent",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Envelope over a query grid (CSV)
    Lce(Opts),
    /// Points-of-convexity mask of the sample cloud (CSV)
    Convexity(Opts),
    /// Two-stage directional descent with trace and bound check (JSON)
    Descend(Opts),
    /// Check one property and report witnesses (JSON)
    Verify {
        #[arg(value_enum)]
        property: Property,
        #[command(flatten)]
        opts: Opts,
    },
    /// Error-versus-step table over registry functions (CSV)
    Bench(Opts),
    /// Registry ids and tags (CSV)
    List(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Direction,
    Monotone,
    Envelope,
    Caratheodory,
    Preservation,
    Restriction,
    Subgradient,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Direction => "direction",
            Property::Monotone => "monotone",
            Property::Envelope => "envelope",
            Property::Caratheodory => "caratheodory",
            Property::Preservation => "preservation",
            Property::Restriction => "restriction",
            Property::Subgradient => "subgradient",
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap sends help and version to stdout, everything else to stderr.
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

fn dispatch(command: Command) -> crate::Result<i32> {
    match command {
        Command::Lce(o) => commands::lce(&o.resolve()?),
        Command::Convexity(o) => commands::convexity(&o.resolve()?),
        Command::Descend(o) => commands::descend(&o.resolve()?),
        Command::Verify { property, opts } => commands::verify(property, &opts.resolve()?),
        Command::Bench(o) => commands::bench(&o.resolve()?),
        Command::List(o) => commands::list(&o.resolve()?),
    }
}
