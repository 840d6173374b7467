//! Command-line front end for `cfermat-core`: one subcommand per operation,
//! JSON (`cf/1`) or text output, a verifier for emitted documents, and the
//! finite-field sweep.

pub mod commands;
pub mod config;
pub mod docs;
pub mod error;
pub mod sweep;
pub mod verify;

use commands::{Cli, Format};
use docs::{render_text, Document, Envelope, ErrorDoc};

/// Runs a parsed command line, returning the text to print and the exit
/// status.
pub fn execute(cli: &Cli) -> (String, i32) {
    let (doc, exit) = match commands::run(cli) {
        Ok(out) => (out.doc, out.exit),
        Err(e) => (Document::Error(ErrorDoc { result: e.result_tag().into(), message: e.to_string() }), e.exit_code()),
    };
    let text = match cli.format {
        Format::Json => Envelope::new(doc).to_json(),
        Format::Text => render_text(&doc),
    };
    (text, exit)
}
