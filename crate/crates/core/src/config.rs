//! Schema and tuning configuration.
//!
//! A single TOML file describes how to read a provider's files (column
//! names, type mapping, pitch size, team ids) and optionally overrides any
//! synchronizer threshold under `[sync]`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EventType, Fps, ScoreCoefficients};

/// Environment variable naming a default schema config file.
pub const CONFIG_ENV: &str = "ELASTIC_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageOrder {
    /// Every event synchronized chronologically before receive detection.
    AllBeforeReceive,
    /// Majors, then receives, then minors.
    #[default]
    MinorsAfterReceive,
    /// Pass-like events, then receives, then incoming, then minors.
    IncomingAndMinorsAfterReceive,
}

impl StageOrder {
    pub const ALL: [StageOrder; 3] = [
        StageOrder::AllBeforeReceive,
        StageOrder::MinorsAfterReceive,
        StageOrder::IncomingAndMinorsAfterReceive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StageOrder::AllBeforeReceive => "all-before-receive",
            StageOrder::MinorsAfterReceive => "minors-after-receive",
            StageOrder::IncomingAndMinorsAfterReceive => "incoming-and-minors-after-receive",
        }
    }
}

impl FromStr for StageOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StageOrder::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown stage order {s:?}")))
    }
}

impl fmt::Display for StageOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalConfig {
    /// Savitzky-Golay window at 25 FPS; scaled to the feed rate otherwise.
    pub sg_window: usize,
    pub sg_poly_order: usize,
    /// Minimum prominence of a ball-acceleration peak, m/s².
    pub accel_prominence: f64,
    pub min_episode_s: f64,
    pub merge_gap_s: f64,
}

impl Default for SignalConfig {
    fn default() -> Self {
        Self {
            sg_window: 11,
            sg_poly_order: 2,
            accel_prominence: 1.0,
            min_episode_s: 0.5,
            merge_gap_s: 0.2,
        }
    }
}

impl SignalConfig {
    /// Window length for a feed, kept odd and above the polynomial order.
    pub fn window_for(&self, fps: Fps) -> usize {
        let scaled = (self.sg_window as f64 * fps.as_f64() / 25.0).round() as usize;
        let mut w = scaled.max(self.sg_poly_order + 1);
        if w.is_multiple_of(2) {
            w += 1;
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KickoffConfig {
    pub center_radius: f64,
    pub own_half_share: f64,
    pub min_accel: f64,
    pub lookback_s: f64,
}

impl Default for KickoffConfig {
    fn default() -> Self {
        Self {
            center_radius: 3.0,
            own_half_share: 0.9,
            min_accel: 3.0,
            lookback_s: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizeConfig {
    pub orientation_window_s: f64,
    pub ambiguity_margin: f64,
    /// Ball positions beyond the pitch by more than this are clamped.
    pub out_of_bounds_tolerance: f64,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        Self {
            orientation_window_s: 30.0,
            ambiguity_margin: 2.0,
            out_of_bounds_tolerance: 1.0,
        }
    }
}

/// Upper clip limits of the clipped-linear feature scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClipBounds {
    pub pbd: f64,
    pub ba: f64,
    pub post_kd: f64,
    pub pre_kd: f64,
    pub fd_s: f64,
    pub cpbd: f64,
    pub npbd: f64,
    pub tobd: f64,
    pub pms_min: f64,
    pub pms_max: f64,
    pub pds: f64,
    pub poac_deg: f64,
    pub rba: f64,
}

impl Default for ClipBounds {
    fn default() -> Self {
        Self {
            pbd: 3.0,
            ba: 20.0,
            post_kd: 5.0,
            pre_kd: 5.0,
            fd_s: 5.0,
            cpbd: 3.0,
            npbd: 3.0,
            tobd: 3.0,
            pms_min: 2.0,
            pms_max: 7.0,
            pds: 3.0,
            poac_deg: 90.0,
            rba: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoefficientSets {
    pub pass_like: ScoreCoefficients,
    pub incoming: ScoreCoefficients,
    pub receive: ScoreCoefficients,
}

impl Default for CoefficientSets {
    fn default() -> Self {
        Self {
            pass_like: ScoreCoefficients::PASS_LIKE,
            incoming: ScoreCoefficients::INCOMING,
            receive: ScoreCoefficients::RECEIVE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyncConfig {
    pub stage_order: StageOrder,
    pub signal: SignalConfig,
    pub kickoff: KickoffConfig,
    pub normalize: NormalizeConfig,
    pub clip: ClipBounds,
    pub coefficients: CoefficientSets,
    pub max_player_ball_dist: f64,
    pub max_ball_height: f64,
    pub window_half_s: f64,
    pub set_piece_window_s: f64,
    /// Radius around the center mark that counts as a restart from the
    /// center circle when labelling goals.
    pub center_circle_radius: f64,
    /// Half-width of the span over which the player-opponent angle change is
    /// measured for take-ons.
    pub poac_half_window_s: f64,
}

impl Default for SyncConfig {
    fn default() -> Self {
        Self {
            stage_order: StageOrder::default(),
            signal: SignalConfig::default(),
            kickoff: KickoffConfig::default(),
            normalize: NormalizeConfig::default(),
            clip: ClipBounds::default(),
            coefficients: CoefficientSets::default(),
            max_player_ball_dist: 3.0,
            max_ball_height: 3.5,
            window_half_s: 5.0,
            set_piece_window_s: 1.0,
            center_circle_radius: 3.0,
            poac_half_window_s: 0.5,
        }
    }
}

impl SyncConfig {
    pub fn validate(&self) -> Result<()> {
        self.coefficients.pass_like.validate()?;
        self.coefficients.incoming.validate()?;
        self.coefficients.receive.validate()?;
        if self.signal.sg_poly_order + 1 > self.signal.sg_window {
            return Err(Error::Config("sg_poly_order must be below sg_window".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingColumns {
    pub period: String,
    pub frame: String,
    pub entity_id: String,
    pub team_id: String,
    pub x: String,
    pub y: String,
    pub z: String,
    pub ball_state: String,
    /// Optional timestamp column (seconds); when present the frame rate is
    /// inferred from it.
    pub time: Option<String>,
    /// Frame rate used when no timestamp column exists.
    pub fps: Option<u32>,
}

impl Default for TrackingColumns {
    fn default() -> Self {
        Self {
            period: "period".into(),
            frame: "frame".into(),
            entity_id: "entity_id".into(),
            team_id: "team_id".into(),
            x: "x".into(),
            y: "y".into(),
            z: "z".into(),
            ball_state: "ball_state".into(),
            time: None,
            fps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventColumns {
    pub event_id: String,
    pub period: String,
    pub time: String,
    #[serde(rename = "type")]
    pub event_type: String,
    pub player_id: String,
    pub team_id: String,
    pub outcome: String,
    pub x: String,
    pub y: String,
}

impl Default for EventColumns {
    fn default() -> Self {
        Self {
            event_id: "event_id".into(),
            period: "period".into(),
            time: "time_s".into(),
            event_type: "type".into(),
            player_id: "player_id".into(),
            team_id: "team_id".into(),
            outcome: "outcome".into(),
            x: "x".into(),
            y: "y".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PitchConfig {
    pub length: f64,
    pub width: f64,
}

impl Default for PitchConfig {
    fn default() -> Self {
        Self {
            length: crate::model::PITCH_LENGTH,
            width: crate::model::PITCH_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TeamsConfig {
    pub home: String,
    pub away: String,
    pub goalkeepers: Vec<String>,
}

impl Default for TeamsConfig {
    fn default() -> Self {
        Self {
            home: "HOME".into(),
            away: "AWAY".into(),
            goalkeepers: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemaConfig {
    pub match_id: String,
    pub delimiter: char,
    pub tracking: TrackingColumns,
    pub events: EventColumns,
    /// Provider type string → canonical event type name.
    pub type_map: BTreeMap<String, String>,
    pub pitch: PitchConfig,
    pub teams: TeamsConfig,
    pub sync: SyncConfig,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        Self {
            match_id: "match".into(),
            delimiter: ',',
            tracking: TrackingColumns::default(),
            events: EventColumns::default(),
            type_map: BTreeMap::new(),
            pitch: PitchConfig::default(),
            teams: TeamsConfig::default(),
            sync: SyncConfig::default(),
        }
    }
}

/// SPADL action names and the four extended types, lower-case.
const SPADL_ALIASES: &[(&str, EventType)] = &[
    ("shot_penalty", EventType::PenaltyShot),
    ("shot_freekick", EventType::FreekickShot),
    ("keeper_pick_up", EventType::KeeperPickup),
    ("goalkick", EventType::GoalKick),
    ("ball recovery", EventType::BallRecovery),
    ("shot block", EventType::ShotBlock),
    ("keeper sweep", EventType::KeeperSweep),
];

impl SchemaConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SchemaConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.sync.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Sets a dotted key (e.g. `sync.clip.ba`) from its string form.
    pub fn set_override(&mut self, key: &str, raw: &str) -> Result<()> {
        let mut tree = toml::Value::try_from(&*self).map_err(|e| Error::Config(e.to_string()))?;
        let mut node = &mut tree;
        let parts: Vec<&str> = key.split('.').collect();
        for part in &parts[..parts.len() - 1] {
            node = node
                .get_mut(*part)
                .ok_or_else(|| Error::Config(format!("unknown config key {key:?}")))?;
        }
        let leaf = parts[parts.len() - 1];
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("unknown config key {key:?}")))?;
        let value = match table.get(leaf) {
            Some(toml::Value::Integer(_)) => raw
                .parse::<i64>()
                .map(toml::Value::Integer)
                .map_err(|e| Error::Config(format!("{key}: {e}")))?,
            Some(toml::Value::Float(_)) => raw
                .parse::<f64>()
                .map(toml::Value::Float)
                .map_err(|e| Error::Config(format!("{key}: {e}")))?,
            Some(toml::Value::Boolean(_)) => raw
                .parse::<bool>()
                .map(toml::Value::Boolean)
                .map_err(|e| Error::Config(format!("{key}: {e}")))?,
            Some(_) => toml::Value::String(raw.to_string()),
            // Optional keys are absent when unset.
            None if key == "tracking.fps" => raw
                .parse::<i64>()
                .map(toml::Value::Integer)
                .map_err(|e| Error::Config(format!("{key}: {e}")))?,
            None if key == "tracking.time" => toml::Value::String(raw.to_string()),
            None => return Err(Error::Config(format!("unknown config key {key:?}"))),
        };
        table.insert(leaf.to_string(), value);
        let updated: SchemaConfig = tree
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        updated.sync.validate()?;
        *self = updated;
        Ok(())
    }

    /// Maps a provider type string onto an event type, or `None` if unmapped.
    pub fn map_event_type(&self, provider: &str) -> Option<EventType> {
        if let Some(canonical) = self.type_map.get(provider) {
            return canonical.parse().ok();
        }
        let lower = provider.trim().to_ascii_lowercase();
        if let Ok(t) = lower.parse::<EventType>() {
            return Some(t);
        }
        SPADL_ALIASES.iter().find(|(name, _)| *name == lower).map(|(_, t)| *t)
    }
}
