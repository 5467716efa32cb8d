//! Long-format tracking files: one row per entity per frame.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::config::SchemaConfig;
use crate::error::{Error, Result};
use crate::model::{BallState, Fps, Period, Position, TrackingFrame, BALL_ID};
use crate::track::Roster;

#[derive(Debug, Clone, PartialEq)]
pub struct TrackingData {
    pub frames: Vec<TrackingFrame>,
    pub roster: Roster,
    pub fps: Fps,
}

#[derive(Default)]
struct PartialFrame {
    time: Option<f64>,
    ball: Option<Position>,
    state: Option<BallState>,
    players: BTreeMap<String, Position>,
}

pub(crate) fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Schema(format!("missing required column {name:?}")))
}

pub(crate) fn reader(path: &Path, delimiter: char) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .delimiter(delimiter as u8)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn parse_f64(raw: &str, what: &str, path: &Path, line: u64) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("invalid {what} {raw:?}"),
    })
}

/// Reads a tracking file described by `schema.tracking`.
pub fn parse_tracking(path: &Path, schema: &SchemaConfig) -> Result<TrackingData> {
    let cols = &schema.tracking;
    let mut rdr = reader(path, schema.delimiter)?;
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let c_period = column(&headers, &cols.period)?;
    let c_frame = column(&headers, &cols.frame)?;
    let c_entity = column(&headers, &cols.entity_id)?;
    let c_team = column(&headers, &cols.team_id)?;
    let c_x = column(&headers, &cols.x)?;
    let c_y = column(&headers, &cols.y)?;
    let c_z = column(&headers, &cols.z)?;
    let c_state = column(&headers, &cols.ball_state)?;
    let c_time = cols.time.as_deref().map(|t| column(&headers, t)).transpose()?;

    let mut partial: BTreeMap<(Period, u32), PartialFrame> = BTreeMap::new();
    let mut roster = Roster::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let period = field(c_period)
            .parse::<i64>()
            .map_err(|_| bad(format!("invalid period {:?}", field(c_period))))
            .and_then(|p| Period::from_number(p).map_err(|e| bad(e.to_string())))?;
        let frame = field(c_frame)
            .parse::<u32>()
            .map_err(|_| bad(format!("invalid frame {:?}", field(c_frame))))?;
        let entity = field(c_entity).to_string();
        if entity.is_empty() {
            return Err(bad("empty entity id".into()));
        }
        let x = parse_f64(field(c_x), "x", path, line)?;
        let y = parse_f64(field(c_y), "y", path, line)?;
        let z = match field(c_z) {
            "" => 0.0,
            raw => parse_f64(raw, "z", path, line)?,
        };
        let pos = Position::new(x, y, z);
        if !pos.is_finite() {
            return Err(bad("non-finite coordinate".into()));
        }
        let slot = partial.entry((period, frame)).or_default();
        if let Some(ct) = c_time {
            slot.time = Some(parse_f64(field(ct), "time", path, line)?);
        }
        if entity == BALL_ID {
            if slot.ball.is_some() {
                return Err(Error::DuplicateFrame {
                    period: period.number(),
                    frame,
                });
            }
            slot.ball = Some(Position::new(x, y, z.max(0.0)));
            slot.state = Some(field(c_state).parse().map_err(|e: Error| bad(e.to_string()))?);
        } else {
            match slot.players.entry(entity.clone()) {
                Entry::Occupied(_) => {
                    return Err(Error::DuplicateFrame {
                        period: period.number(),
                        frame,
                    })
                }
                Entry::Vacant(v) => {
                    v.insert(Position::ground(x, y));
                }
            }
            if slot.state.is_none() {
                slot.state = Some(field(c_state).parse().map_err(|e: Error| bad(e.to_string()))?);
            }
            let team = field(c_team);
            if !team.is_empty() {
                roster.entry(entity).or_insert_with(|| team.to_string());
            }
        }
    }

    let fps = infer_fps(&partial, schema)?;
    let mut frames = Vec::with_capacity(partial.len());
    let mut last_ball: Option<Position> = None;
    for ((period, frame_index), p) in partial {
        let state = p.state.unwrap_or(BallState::Dead);
        let ball = match p.ball {
            Some(b) => b,
            None if state.is_alive() => {
                return Err(Error::Validation(format!(
                    "alive frame {frame_index} in period {period} has no ball"
                )))
            }
            None => last_ball.unwrap_or_default(),
        };
        last_ball = Some(ball);
        frames.push(TrackingFrame {
            frame_index,
            period,
            fps,
            players: p.players,
            ball,
            ball_state: state,
        });
    }
    validate_alive_ball(&frames)?;
    Ok(TrackingData { frames, roster, fps })
}

fn validate_alive_ball(frames: &[TrackingFrame]) -> Result<()> {
    for f in frames {
        if f.ball_state.is_alive() && f.players.is_empty() {
            return Err(Error::Validation(format!(
                "alive frame {} in period {} has no players",
                f.frame_index, f.period
            )));
        }
    }
    Ok(())
}

fn infer_fps(partial: &BTreeMap<(Period, u32), PartialFrame>, schema: &SchemaConfig) -> Result<Fps> {
    if schema.tracking.time.is_none() {
        return match schema.tracking.fps {
            Some(f) => Fps::new(f),
            None => Err(Error::Schema(
                "tracking schema has neither a time column nor an fps value".into(),
            )),
        };
    }
    let mut deltas = Vec::new();
    let mut prev: Option<(Period, u32, f64)> = None;
    for ((period, frame), p) in partial {
        let Some(t) = p.time else { continue };
        if let Some((pp, pf, pt)) = prev {
            if pp == *period && frame > &pf {
                deltas.push((t - pt) / (frame - pf) as f64);
            }
        }
        prev = Some((*period, *frame, t));
    }
    if deltas.is_empty() {
        return Err(Error::Schema("cannot infer fps from fewer than two frames".into()));
    }
    deltas.sort_by(f64::total_cmp);
    let median = deltas[deltas.len() / 2];
    if !(median > 0.0) {
        return Err(Error::Schema(format!("non-positive frame interval {median}")));
    }
    let rate = (1.0 / median).round() as u32;
    Fps::new(rate)
}

/// Writes frames in the default long format with a `time_s` column.
pub fn write_tracking(path: &Path, frames: &[TrackingFrame], roster: &Roster) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_tracking_to(&mut out, frames, roster).map_err(|e| Error::io(path, e))
}

pub fn write_tracking_to<W: Write>(out: &mut W, frames: &[TrackingFrame], roster: &Roster) -> std::io::Result<()> {
    writeln!(out, "period,frame,time_s,entity_id,team_id,x,y,z,ball_state")?;
    for f in frames {
        let time = f.frame_index as f64 / f.fps.as_f64();
        writeln!(
            out,
            "{},{},{},{},,{},{},{},{}",
            f.period, f.frame_index, time, BALL_ID, f.ball.x, f.ball.y, f.ball.z, f.ball_state
        )?;
        for (id, p) in &f.players {
            let team = roster.get(id).map(String::as_str).unwrap_or("");
            writeln!(
                out,
                "{},{},{},{},{},{},{},0,{}",
                f.period, f.frame_index, time, id, team, p.x, p.y, f.ball_state
            )?;
        }
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn schema_with_time() -> SchemaConfig {
        let mut s = SchemaConfig::default();
        s.tracking.time = Some("time_s".into());
        s
    }

    fn write_rows(dir: &tempfile::TempDir, body: &str) -> std::path::PathBuf {
        let path = dir.path().join("tracking.csv");
        fs::write(
            &path,
            format!("period,frame,time_s,entity_id,team_id,x,y,z,ball_state\n{body}"),
        )
        .unwrap();
        path
    }

    #[test]
    fn well_formed_file_at_25_fps() {
        let dir = tempfile::tempdir().unwrap();
        let mut body = String::new();
        for f in 0..1000 {
            let t = f as f64 * 0.04;
            body.push_str(&format!(
                "1,{f},{t},BALL,,50,30,0,alive\n1,{f},{t},H1,HOME,49,30,0,alive\n"
            ));
        }
        let data = parse_tracking(&write_rows(&dir, &body), &schema_with_time()).unwrap();
        assert_eq!(data.frames.len(), 1000);
        assert_eq!(data.fps, Fps::TWENTY_FIVE);
        assert_eq!(data.roster["H1"], "HOME");
    }

    #[test]
    fn duplicate_rows_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let body = "1,7,0.28,BALL,,1,1,0,alive\n1,7,0.28,BALL,,1,1,0,alive\n1,7,0.28,H1,HOME,1,1,0,alive\n";
        let err = parse_tracking(&write_rows(&dir, body), &schema_with_time()).unwrap_err();
        assert!(matches!(err, Error::DuplicateFrame { period: 1, frame: 7 }));
    }

    #[test]
    fn malformed_row_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let body = "1,0,0,BALL,,1,1,0,alive\n1,1,0.04,BALL,,abc,1,0,alive\n";
        match parse_tracking(&write_rows(&dir, body), &schema_with_time()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_fps_is_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        let body = "1,0,0,BALL,,1,1,0,alive\n1,0,0,H1,HOME,1,1,0,alive\n1,1,0.033,BALL,,1,1,0,alive\n1,1,0.033,H1,HOME,1,1,0,alive\n";
        assert!(matches!(
            parse_tracking(&write_rows(&dir, body), &schema_with_time()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn alive_frame_without_ball_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let body = "1,0,0,BALL,,1,1,0,alive\n1,0,0,H1,HOME,1,1,0,alive\n1,1,0.04,H1,HOME,1,1,0,alive\n";
        let err = parse_tracking(&write_rows(&dir, body), &schema_with_time()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
    }
}
