//! Ground truth of generated matches.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EventType;

/// True frames of one annotated event. `end_frame` and `receiver` are set
/// for pass-like events only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub event_id: String,
    pub period: u8,
    pub event_type: EventType,
    pub start_frame: u32,
    pub end_frame: Option<u32>,
    pub receiver: Option<String>,
}

pub fn write_truth(path: &Path, rows: &[TruthRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Report(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Report(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_truth(path: &Path) -> Result<Vec<TruthRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Validation(format!("{}: {e}", path.display()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("truth.csv");
        let rows = vec![
            TruthRow {
                event_id: "e1".into(),
                period: 1,
                event_type: EventType::Pass,
                start_frame: 50,
                end_frame: Some(70),
                receiver: Some("H4".into()),
            },
            TruthRow {
                event_id: "e2".into(),
                period: 2,
                event_type: EventType::Foul,
                start_frame: 90,
                end_frame: None,
                receiver: None,
            },
        ];
        write_truth(&path, &rows).unwrap();
        assert_eq!(read_truth(&path).unwrap(), rows);
    }
}
