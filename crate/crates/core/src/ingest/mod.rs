//! Reading, validating and normalizing match data.

mod events;
mod kickoff;
mod normalize;
mod tracking;

use std::path::Path;

pub use events::{parse_events, sort_events, write_events, write_events_to, ParsedEvents};
pub use kickoff::{apply_offset, detect_kickoff};
pub use normalize::normalize;
pub use tracking::{parse_tracking, write_tracking, write_tracking_to, TrackingData};

use crate::config::SchemaConfig;
use crate::error::{Error, Result};
use crate::model::{Event, Fps, Period, PlayerId, TeamId, TrackingFrame};
use crate::track::{PeriodTrack, Roster};

#[derive(Debug, Clone, PartialEq)]
pub struct MatchMetadata {
    pub match_id: String,
    pub fps: Fps,
    pub home_team: TeamId,
    pub away_team: TeamId,
    pub pitch_length: f64,
    pub pitch_width: f64,
    pub goalkeepers: Vec<PlayerId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchData {
    pub metadata: MatchMetadata,
    pub periods: Vec<PeriodTrack>,
    pub roster: Roster,
    pub events: Vec<Event>,
}

impl MatchData {
    pub fn from_parts(
        metadata: MatchMetadata,
        frames: &[TrackingFrame],
        roster: Roster,
        mut events: Vec<Event>,
    ) -> Result<Self> {
        let mut periods = Vec::new();
        for period in [Period::First, Period::Second] {
            let part: Vec<TrackingFrame> = frames.iter().filter(|f| f.period == period).cloned().collect();
            if !part.is_empty() {
                periods.push(PeriodTrack::from_frames(&part)?);
            }
        }
        if periods.is_empty() {
            return Err(Error::Validation("no tracking frames".into()));
        }
        sort_events(&mut events);
        Ok(Self {
            metadata,
            periods,
            roster,
            events,
        })
    }

    pub fn period(&self, period: Period) -> Option<&PeriodTrack> {
        self.periods.iter().find(|p| p.period == period)
    }

    pub fn frames(&self) -> Vec<TrackingFrame> {
        self.periods.iter().flat_map(|p| p.to_frames()).collect()
    }

    pub fn team_of(&self, player: &str) -> Option<&TeamId> {
        self.roster.get(player)
    }

    /// Removes every annotated event location.
    pub fn without_event_locations(&self) -> Self {
        let mut out = self.clone();
        for e in &mut out.events {
            e.annotated_location = None;
        }
        out
    }
}

/// Parses tracking and event files described by `schema`.
pub fn load_match(tracking: &Path, events: &Path, schema: &SchemaConfig) -> Result<MatchData> {
    let tracking = parse_tracking(tracking, schema)?;
    let parsed = parse_events(events, schema)?;
    let metadata = MatchMetadata {
        match_id: schema.match_id.clone(),
        fps: tracking.fps,
        home_team: schema.teams.home.clone(),
        away_team: schema.teams.away.clone(),
        pitch_length: schema.pitch.length,
        pitch_width: schema.pitch.width,
        goalkeepers: schema.teams.goalkeepers.clone(),
    };
    MatchData::from_parts(metadata, &tracking.frames, tracking.roster, parsed.events)
}

/// Writes tracking and events in the default file formats.
pub fn save_match(data: &MatchData, tracking: &Path, events: &Path) -> Result<()> {
    write_tracking(tracking, &data.frames(), &data.roster)?;
    write_events(events, &data.events)
}
