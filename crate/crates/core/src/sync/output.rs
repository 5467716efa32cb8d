use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Fps, Period, SyncResult};

pub const RESULT_HEADER: &str = "event_id,period,start_frame,start_time_s,end_frame,receiver,score,valid";

/// Writes one row per result in the given order. Blank fields mark absent
/// values; numbers use fixed precision so output is byte-stable.
pub fn write_results_to<W: Write>(out: &mut W, results: &[SyncResult], fps: Fps) -> std::io::Result<()> {
    writeln!(out, "{RESULT_HEADER}")?;
    for r in results {
        let start = r.start_frame.map(|f| f.to_string()).unwrap_or_default();
        let time = r
            .start_frame
            .map(|f| format!("{:.2}", f as f64 / fps.as_f64()))
            .unwrap_or_default();
        let end = r.end_frame.map(|f| f.to_string()).unwrap_or_default();
        let receiver = r.receiver.as_ref().map(|x| x.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{start},{time},{end},{receiver},{:.4},{}",
            r.event_id,
            r.period,
            r.score,
            r.valid()
        )?;
    }
    out.flush()
}

pub fn write_results(path: &Path, results: &[SyncResult], fps: Fps) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_results_to(&mut out, results, fps).map_err(|e| Error::io(path, e))
}

/// Reads a file written by [`write_results`].
pub fn read_results(path: &Path) -> Result<Vec<SyncResult>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let bad = |line: u64, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let record = record.map_err(|e| bad(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 8 {
            return Err(bad(line, format!("expected 8 fields, found {}", record.len())));
        }
        let opt_frame = |s: &str| -> Result<Option<u32>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| bad(line, format!("invalid frame {s:?}")))
            }
        };
        let period = record[1]
            .parse::<i64>()
            .map_err(|_| bad(line, format!("invalid period {:?}", &record[1])))
            .and_then(Period::from_number)?;
        out.push(SyncResult {
            event_id: record[0].to_string(),
            period,
            start_frame: opt_frame(&record[2])?,
            end_frame: opt_frame(&record[4])?,
            receiver: if record[5].is_empty() {
                None
            } else {
                Some(record[5].parse()?)
            },
            score: record[6]
                .parse()
                .map_err(|_| bad(line, format!("invalid score {:?}", &record[6])))?,
        });
    }
    Ok(out)
}
