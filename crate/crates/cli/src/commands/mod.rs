pub mod coeff;
pub mod rocca;
pub mod scaling;
pub mod spectrum;
pub mod verify;

use lle_core::coeffs::SpectralFunction;

use crate::CliError;

/// Clap-side check of an f descriptor; the string itself is kept.
pub fn function_spec(s: &str) -> Result<String, String> {
    s.parse::<SpectralFunction>()
        .map(|_| s.trim().to_string())
        .map_err(|e| e.to_string())
}

pub fn parse_function(s: &str) -> Result<SpectralFunction, CliError> {
    s.parse()
        .map_err(|e: lle_core::Error| CliError::Usage(e.to_string()))
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
