//! Parsing, dispatch and formatting behind the `ncham` binary.

pub mod commands;
pub mod error;
pub mod expr;
pub mod presentation;

use std::path::Path;

use ncham_core::models::AnyModel;

pub use commands::{run, Command, Format, Options, Output};
pub use error::CliError;

/// Build the model named by `--model`, or read it from `--presentation`.
pub fn load_model(desc: &str, presentation: Option<&Path>, ansatz: Option<&str>) -> Result<AnyModel, CliError> {
    match presentation {
        Some(path) => {
            if ansatz.is_some() {
                return Err(CliError::Usage(
                    "--ansatz does not apply to a presentation file; list `field` lines instead".into(),
                ));
            }
            Ok(AnyModel::Custom(presentation::load(path)?))
        }
        None => Ok(AnyModel::parse_and_build(desc, ansatz)?),
    }
}
