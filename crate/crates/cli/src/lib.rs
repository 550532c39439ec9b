//! Document format, command driver and reports for the `reprkit` tool.

pub mod command;
pub mod document;
pub mod emit;
pub mod error;
pub mod report;
pub mod syntax;

pub use command::{run_command, Command, Flags, LinearityMode, Request};
pub use document::{parse_document, Document};
pub use error::CliError;
pub use report::{emit_report, Format, Report};

/// Reads, parses and runs one request. Returns the rendered report and its
/// exit code.
pub fn execute(req: &Request, text: Option<&str>, flags: &Flags, format: Format) -> Result<(String, u8), CliError> {
    let doc = text.map(parse_document).transpose()?;
    let report = run_command(req, doc.as_ref(), flags)?;
    Ok((emit_report(&report, format), report.exit))
}
