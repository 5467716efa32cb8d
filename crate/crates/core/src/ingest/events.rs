use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use log::warn;

use crate::config::SchemaConfig;
use crate::error::{Error, Result};
use crate::ingest::tracking::{column, reader};
use crate::model::{Event, Period, Position};

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEvents {
    pub events: Vec<Event>,
    /// Provider type strings without a mapping, with their counts.
    pub unmapped: BTreeMap<String, usize>,
}

impl ParsedEvents {
    pub fn dropped(&self) -> usize {
        self.unmapped.values().sum()
    }
}

/// Reads an event file. Rows whose type has no mapping are dropped and
/// counted; the result is sorted by period and annotated time, keeping file
/// order among ties.
pub fn parse_events(path: &Path, schema: &SchemaConfig) -> Result<ParsedEvents> {
    let cols = &schema.events;
    let mut rdr = reader(path, schema.delimiter)?;
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let c_id = column(&headers, &cols.event_id)?;
    let c_period = column(&headers, &cols.period)?;
    let c_time = column(&headers, &cols.time)?;
    let c_type = column(&headers, &cols.event_type)?;
    let c_player = column(&headers, &cols.player_id)?;
    let c_team = column(&headers, &cols.team_id)?;
    let c_outcome = column(&headers, &cols.outcome)?;
    let c_x = column(&headers, &cols.x).ok();
    let c_y = column(&headers, &cols.y).ok();

    let mut events = Vec::new();
    let mut unmapped: BTreeMap<String, usize> = BTreeMap::new();
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
        let provider_type = field(c_type);
        let Some(event_type) = schema.map_event_type(provider_type) else {
            *unmapped.entry(provider_type.to_string()).or_default() += 1;
            continue;
        };
        let period = field(c_period)
            .parse::<i64>()
            .map_err(|_| bad(format!("invalid period {:?}", field(c_period))))
            .and_then(|p| Period::from_number(p).map_err(|e| bad(e.to_string())))?;
        let time: f64 = field(c_time)
            .parse()
            .map_err(|_| bad(format!("invalid time {:?}", field(c_time))))?;
        if time < 0.0 || !time.is_finite() {
            return Err(Error::Validation(format!(
                "{}:{line}: negative or non-finite time {time}",
                path.display()
            )));
        }
        let outcome = field(c_outcome).parse().map_err(|e: Error| bad(e.to_string()))?;
        let coord = |c: Option<usize>| -> Result<Option<f64>> {
            match c.map(field) {
                None | Some("") => Ok(None),
                Some(raw) => raw
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| bad(format!("invalid coordinate {raw:?}"))),
            }
        };
        let annotated_location = match (coord(c_x)?, coord(c_y)?) {
            (Some(x), Some(y)) => Some(Position::ground(x, y)),
            _ => None,
        };
        events.push(Event {
            event_id: field(c_id).to_string(),
            period,
            annotated_time: time,
            event_type,
            player_id: field(c_player).to_string(),
            team_id: field(c_team).to_string(),
            outcome,
            annotated_location,
        });
    }
    if !unmapped.is_empty() {
        warn!(
            "{}: dropped {} events with unmapped types {:?}",
            path.display(),
            unmapped.values().sum::<usize>(),
            unmapped.keys().collect::<Vec<_>>()
        );
    }
    sort_events(&mut events);
    Ok(ParsedEvents { events, unmapped })
}

pub fn sort_events(events: &mut [Event]) {
    events.sort_by(|a, b| {
        a.period
            .cmp(&b.period)
            .then(a.annotated_time.total_cmp(&b.annotated_time))
    });
}

pub fn write_events(path: &Path, events: &[Event]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_events_to(&mut out, events).map_err(|e| Error::io(path, e))
}

pub fn write_events_to<W: Write>(out: &mut W, events: &[Event]) -> std::io::Result<()> {
    writeln!(out, "event_id,period,time_s,type,player_id,team_id,outcome,x,y")?;
    for e in events {
        let (x, y) = match e.annotated_location {
            Some(p) => (p.x.to_string(), p.y.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            e.event_id, e.period, e.annotated_time, e.event_type, e.player_id, e.team_id, e.outcome, x, y
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EventType;

    fn write(dir: &tempfile::TempDir, body: &str) -> std::path::PathBuf {
        let path = dir.path().join("events.csv");
        std::fs::write(
            &path,
            format!("event_id,period,time_s,type,player_id,team_id,outcome,x,y\n{body}"),
        )
        .unwrap();
        path
    }

    #[test]
    fn complete_mapping() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(
            &dir,
            "e1,1,3.0,SHOT,H9,HOME,failure,,\ne2,1,1.0,PASS,H2,HOME,success,30,20\ne3,1,2.0,TACKLE,A4,AWAY,success,,\n",
        );
        let mut schema = SchemaConfig::default();
        for (k, v) in [("PASS", "pass"), ("SHOT", "shot"), ("TACKLE", "tackle")] {
            schema.type_map.insert(k.into(), v.into());
        }
        let parsed = parse_events(&path, &schema).unwrap();
        assert_eq!(parsed.events.len(), 3);
        assert_eq!(parsed.dropped(), 0);
        let ids: Vec<&str> = parsed.events.iter().map(|e| e.event_id.as_str()).collect();
        assert_eq!(ids, ["e2", "e3", "e1"]);
        assert_eq!(parsed.events[0].annotated_location, Some(Position::ground(30.0, 20.0)));
        assert_eq!(parsed.events[2].event_type, EventType::Shot);
    }

    #[test]
    fn unmapped_type_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(
            &dir,
            "e1,1,1.0,pass,H2,HOME,success,,\ne2,1,2.0,50_50,H3,HOME,success,,\n",
        );
        let parsed = parse_events(&path, &SchemaConfig::default()).unwrap();
        assert_eq!(parsed.events.len(), 1);
        assert_eq!(parsed.dropped(), 1);
        assert_eq!(parsed.unmapped["50_50"], 1);
    }

    #[test]
    fn extended_spadl_types() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(
            &dir,
            "a,1,1,ball_recovery,H1,HOME,success,,\nb,1,2,dispossessed,H1,HOME,failure,,\nc,1,3,shot_block,H1,HOME,success,,\nd,1,4,keeper_sweep,H1,HOME,success,,\n",
        );
        let parsed = parse_events(&path, &SchemaConfig::default()).unwrap();
        let types: Vec<EventType> = parsed.events.iter().map(|e| e.event_type).collect();
        assert_eq!(
            types,
            [
                EventType::BallRecovery,
                EventType::Dispossessed,
                EventType::ShotBlock,
                EventType::KeeperSweep
            ]
        );
    }

    #[test]
    fn negative_time_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(&dir, "e1,1,-1.0,pass,H2,HOME,success,,\n");
        assert!(matches!(
            parse_events(&path, &SchemaConfig::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_column_is_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("events.csv");
        std::fs::write(&path, "event_id,period,type\n").unwrap();
        assert!(matches!(
            parse_events(&path, &SchemaConfig::default()),
            Err(Error::Schema(_))
        ));
    }
}
