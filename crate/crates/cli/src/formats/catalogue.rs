//! Catalogue files: versioned JSON listing MLOps tools with their lifecycle
//! phases and the development tools they integrate with.

use std::fs;
use std::path::Path;

use opsrec_core::ToolCatalogue;

use crate::error::CliError;

/// Loads, normalizes, and validates a catalogue file.
pub fn load_catalogue(path: &Path) -> Result<ToolCatalogue, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let catalogue: ToolCatalogue = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("catalogue {}: {e}", path.display())))?;
    let catalogue = catalogue.normalized();
    catalogue
        .validate()
        .map_err(|e| CliError::validation(format!("catalogue {}: {e}", path.display())))?;
    Ok(catalogue)
}
