//! Stream files, sliding windows, synthetic streams and the `evofreq`
//! command-line driver on top of [`evofreq_core`].

pub mod cli;
pub mod driver;
pub mod generate;
pub mod parse;
pub mod window;

pub use driver::{compare_stream, run_stream, DriveError, DriveOptions, DriveOutput, CSV_HEADER};
pub use generate::{generate_stream, DegreeModel, GenError, GenParams};
pub use parse::{parse_event, parse_stream, read_stream, write_stream, ParseError};
pub use window::{drive_window, WindowDriver};
