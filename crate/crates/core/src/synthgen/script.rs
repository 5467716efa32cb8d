use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EventType, Outcome};

/// A complete, replayable description of one synthetic match.
///
/// Coordinates are in the normalized frame (home attacks towards x = 105 in
/// both periods); the generator mirrors the second period when writing raw
/// data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioScript {
    pub name: String,
    pub seed: u64,
    pub fps: u32,
    pub noise: NoiseModel,
    #[serde(default)]
    pub location_bias: LocationBias,
    pub periods: Vec<PeriodScript>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Annotated times are shifted by a uniform draw in ±`jitter_s`.
    pub jitter_s: f64,
    /// Standard deviation of Gaussian noise on planar positions (m).
    pub position_std: f64,
    /// Probability that a player sample is missing in a frame.
    pub dropout: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            jitter_s: 3.0,
            position_std: 0.1,
            dropout: 0.0,
        }
    }
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        jitter_s: 0.0,
        position_std: 0.0,
        dropout: 0.0,
    };
}

/// Where annotated event locations are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationBias {
    /// At the ball contact.
    #[default]
    Contact,
    /// At the spot where the executing player last received the ball, as a
    /// careless annotator might click.
    PreviousReceive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodScript {
    pub period: u8,
    /// Number of frames in the period, starting at frame 0.
    pub frames: u32,
    pub kickoff_frame: u32,
    /// Ball contacts in strictly increasing frame order.
    pub contacts: Vec<Contact>,
    /// Extra player positions the tracks must pass through.
    #[serde(default)]
    pub waypoints: Vec<Waypoint>,
    /// Inclusive frame ranges during which the ball is out of play.
    #[serde(default)]
    pub dead: Vec<[u32; 2]>,
    /// The event plan, ordered by true frame.
    pub events: Vec<PlannedEvent>,
}

/// The ball is at `(x, y)` on the ground at `frame`. A contact without a
/// player marks where the ball leaves the pitch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub frame: u32,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub player: Option<String>,
    /// Apex height of the flight leaving this contact; 0 rolls on the ground.
    #[serde(default)]
    pub loft: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub frame: u32,
    pub player: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedEvent {
    pub event_id: String,
    pub frame: u32,
    pub event_type: EventType,
    pub player: String,
    pub team: String,
    pub outcome: Outcome,
    /// True receive frame of pass-like events.
    #[serde(default)]
    pub end_frame: Option<u32>,
    /// True receiver of pass-like events: a player id, `OUT` or `GOAL`.
    #[serde(default)]
    pub receiver: Option<String>,
    /// Ball position annotated for the event.
    #[serde(default)]
    pub location: Option<[f64; 2]>,
}

impl ScenarioScript {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: ScenarioScript = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.check()?;
        Ok(s)
    }

    /// The same match under another noise model.
    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("script serializes")
    }

    /// Structural checks that do not need rendering.
    pub fn check(&self) -> Result<()> {
        crate::model::Fps::new(self.fps)?;
        if !(self.noise.jitter_s >= 0.0 && self.noise.position_std >= 0.0 && (0.0..1.0).contains(&self.noise.dropout)) {
            return Err(Error::Generation(format!("{}: invalid noise model", self.name)));
        }
        for p in &self.periods {
            if !(1..=2).contains(&p.period) {
                return Err(Error::Generation(format!(
                    "{}: unsupported period {}",
                    self.name, p.period
                )));
            }
            for w in p.contacts.windows(2) {
                if w[1].frame <= w[0].frame {
                    return Err(Error::Generation(format!(
                        "{}: contacts not strictly increasing at frame {}",
                        self.name, w[1].frame
                    )));
                }
            }
            // Events sharing a contact (tackle and dispossessed, a bad touch
            // on reception) may share a frame; otherwise order is strict.
            for w in p.events.windows(2) {
                if w[1].frame < w[0].frame {
                    return Err(Error::Generation(format!(
                        "{}: event {} precedes its predecessor",
                        self.name, w[1].event_id
                    )));
                }
            }
            if let Some(e) = p.events.iter().find(|e| e.frame >= p.frames) {
                return Err(Error::Generation(format!(
                    "{}: event {} beyond period end",
                    self.name, e.event_id
                )));
            }
        }
        Ok(())
    }
}
