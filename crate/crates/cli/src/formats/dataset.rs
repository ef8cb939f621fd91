//! Dataset files: CSV with the canonical ten-column header, or JSON as an
//! array of objects with the same keys. Set-valued cells hold `;`- or
//! `,`-separated labels. Reading normalizes and validates every record;
//! errors name the offending row.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use opsrec_core::{LabelSet, ProjectRecord};

use crate::error::CliError;

/// One row/object exactly as it appears in a dataset file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRecord {
    pub name: String,
    pub description: String,
    pub project_category: String,
    pub data_nature: String,
    pub data_type: String,
    pub preprocessing_tools: String,
    pub project_type: String,
    pub technique: String,
    pub evaluation_metrics: String,
    pub model_tools: String,
}

impl RawRecord {
    fn into_record(self, row: usize) -> Result<ProjectRecord, CliError> {
        ProjectRecord::from_raw_parts(
            &self.name,
            &self.description,
            &self.project_category,
            &self.data_nature,
            &self.data_type,
            &self.preprocessing_tools,
            &self.project_type,
            &self.technique,
            &self.evaluation_metrics,
            &self.model_tools,
        )
        .map_err(|e| CliError::validation(format!("row {row}: {e}")))
    }

    fn from_record(record: &ProjectRecord) -> Self {
        let join = |set: &LabelSet| set.iter().cloned().collect::<Vec<_>>().join("; ");
        RawRecord {
            name: record.name.clone(),
            description: record.description.clone(),
            project_category: record.project_category.as_str().to_string(),
            data_nature: record.data_nature.as_str().to_string(),
            data_type: record.data_type.as_str().to_string(),
            preprocessing_tools: join(&record.preprocessing_tools),
            project_type: record.project_type.clone(),
            technique: record.technique.clone(),
            evaluation_metrics: join(&record.evaluation_metrics),
            model_tools: join(&record.model_tools),
        }
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"))
}

/// Reads and validates a dataset, picking CSV or JSON by file extension.
pub fn read_records(path: &Path) -> Result<Vec<ProjectRecord>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let raw: Vec<RawRecord> = if is_json(path) {
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("dataset {}: {e}", path.display())))?
    } else {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        reader
            .deserialize()
            .enumerate()
            .map(|(i, row)| {
                row.map_err(|e| {
                    CliError::validation(format!("dataset {} row {}: {e}", path.display(), i + 1))
                })
            })
            .collect::<Result<_, _>>()?
    };
    raw.into_iter()
        .enumerate()
        .map(|(i, r)| r.into_record(i + 1))
        .collect()
}

/// Writes a dataset, picking CSV or JSON by file extension. Set-valued
/// cells are `; `-joined in sorted label order, so write→read round-trips.
pub fn write_records(path: &Path, records: &[ProjectRecord]) -> Result<(), CliError> {
    let raw: Vec<RawRecord> = records.iter().map(RawRecord::from_record).collect();
    if is_json(path) {
        let mut text = serde_json::to_string_pretty(&raw)
            .map_err(|e| CliError::runtime(format!("serializing dataset: {e}")))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::io(path, &e))
    } else {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &raw {
            writer
                .serialize(row)
                .map_err(|e| CliError::runtime(format!("serializing dataset: {e}")))?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::runtime(format!("serializing dataset: {e}")))?;
        fs::write(path, bytes).map_err(|e| CliError::io(path, &e))
    }
}
