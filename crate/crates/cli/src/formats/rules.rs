//! Rule files: versioned JSON with a rule list, conditions using `"*"` as
//! the wildcard. Loading normalizes labels and rejects duplicate ids or
//! unsupported versions.

use std::fs;
use std::path::Path;

use opsrec_core::RuleSet;

use crate::error::CliError;

/// Loads, normalizes, and validates a rule file.
pub fn load_rules(path: &Path) -> Result<RuleSet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let rules: RuleSet = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("rule file {}: {e}", path.display())))?;
    let rules = rules.normalized();
    rules
        .validate()
        .map_err(|e| CliError::validation(format!("rule file {}: {e}", path.display())))?;
    Ok(rules)
}

/// Writes a rule set as pretty-printed JSON with a trailing newline.
pub fn save_rules(path: &Path, rules: &RuleSet) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(rules)
        .map_err(|e| CliError::runtime(format!("serializing rules: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, &e))
}
