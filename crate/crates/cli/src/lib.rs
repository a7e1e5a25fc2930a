//! Scenario files, command dispatch and file emission for the `omnisurf`
//! binary.

pub mod error;
pub mod output;
pub mod run;
pub mod scenario;

pub use error::CliError;
pub use run::{execute, run, Command, Flags};
pub use scenario::{parse_scenario, parse_scenario_in, Scenario};
