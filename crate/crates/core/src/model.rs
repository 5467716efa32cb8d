//! Domain types shared across the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pitch length in meters after normalization.
pub const PITCH_LENGTH: f64 = 105.0;
/// Pitch width in meters after normalization.
pub const PITCH_WIDTH: f64 = 68.0;
/// Center mark of the normalized pitch.
pub const CENTER_MARK: (f64, f64) = (PITCH_LENGTH / 2.0, PITCH_WIDTH / 2.0);

/// Reserved entity id for the ball in tracking files.
pub const BALL_ID: &str = "BALL";

pub type PlayerId = String;
pub type TeamId = String;
/// Frame number as it appears in the tracking file.
pub type FrameIndex = u32;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    /// Distance on the ground plane, ignoring height.
    pub fn planar_distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Period {
    First,
    Second,
}

impl Period {
    pub fn number(self) -> u8 {
        match self {
            Period::First => 1,
            Period::Second => 2,
        }
    }

    pub fn from_number(n: i64) -> Result<Self> {
        match n {
            1 => Ok(Period::First),
            2 => Ok(Period::Second),
            other => Err(Error::Validation(format!("unsupported period {other}"))),
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Tracking sample rate. Only 10 and 25 FPS feeds are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Fps(u32);

impl Fps {
    pub const TEN: Fps = Fps(10);
    pub const TWENTY_FIVE: Fps = Fps(25);

    pub fn new(value: u32) -> Result<Self> {
        match value {
            10 | 25 => Ok(Fps(value)),
            other => Err(Error::Schema(format!("fps must be 10 or 25, got {other}"))),
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// Number of frames spanning `seconds`, rounded to the nearest frame.
    pub fn frames(self, seconds: f64) -> i64 {
        (seconds * self.as_f64()).round() as i64
    }
}

impl TryFrom<u32> for Fps {
    type Error = Error;
    fn try_from(value: u32) -> Result<Self> {
        Fps::new(value)
    }
}

impl From<Fps> for u32 {
    fn from(value: Fps) -> u32 {
        value.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallState {
    Alive,
    Dead,
}

impl BallState {
    pub fn is_alive(self) -> bool {
        matches!(self, BallState::Alive)
    }
}

impl FromStr for BallState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alive" => Ok(BallState::Alive),
            "dead" => Ok(BallState::Dead),
            other => Err(Error::Validation(format!("unknown ball state {other:?}"))),
        }
    }
}

impl fmt::Display for BallState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallState::Alive => "alive",
            BallState::Dead => "dead",
        })
    }
}

/// One snapshot of every tracked entity.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingFrame {
    pub frame_index: FrameIndex,
    pub period: Period,
    pub fps: Fps,
    pub players: BTreeMap<PlayerId, Position>,
    pub ball: Position,
    pub ball_state: BallState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventCategory {
    OpenPlayPassLike,
    SetPiecePassLike,
    Incoming,
    Minor,
}

impl EventCategory {
    pub const ALL: [EventCategory; 4] = [
        EventCategory::OpenPlayPassLike,
        EventCategory::SetPiecePassLike,
        EventCategory::Incoming,
        EventCategory::Minor,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EventCategory::OpenPlayPassLike => "Pass-like",
            EventCategory::SetPiecePassLike => "Set-piece",
            EventCategory::Incoming => "Incoming",
            EventCategory::Minor => "Minor",
        }
    }

    pub fn is_pass_like(self) -> bool {
        matches!(self, EventCategory::OpenPlayPassLike | EventCategory::SetPiecePassLike)
    }

    /// Categories synchronized in the major stage.
    pub fn is_major(self) -> bool {
        !matches!(self, EventCategory::Minor)
    }
}

macro_rules! event_types {
    ($( $variant:ident => $name:literal, $cat:ident; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum EventType {
            $( $variant, )*
        }

        impl EventType {
            pub const ALL: &'static [EventType] = &[ $( EventType::$variant, )* ];

            pub fn name(self) -> &'static str {
                match self { $( EventType::$variant => $name, )* }
            }

            pub fn category(self) -> EventCategory {
                match self { $( EventType::$variant => EventCategory::$cat, )* }
            }
        }

        impl FromStr for EventType {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $( $name => Ok(EventType::$variant), )*
                    other => Err(Error::Validation(format!("unknown event type {other:?}"))),
                }
            }
        }
    };
}

event_types! {
    Pass => "pass", OpenPlayPassLike;
    Cross => "cross", OpenPlayPassLike;
    Shot => "shot", OpenPlayPassLike;
    Clearance => "clearance", OpenPlayPassLike;
    KeeperPunch => "keeper_punch", OpenPlayPassLike;
    ShotBlock => "shot_block", OpenPlayPassLike;
    ThrowIn => "throw_in", SetPiecePassLike;
    GoalKick => "goal_kick", SetPiecePassLike;
    CornerShort => "corner_short", SetPiecePassLike;
    CornerCrossed => "corner_crossed", SetPiecePassLike;
    FreekickShort => "freekick_short", SetPiecePassLike;
    FreekickCrossed => "freekick_crossed", SetPiecePassLike;
    FreekickShot => "freekick_shot", SetPiecePassLike;
    PenaltyShot => "penalty_shot", SetPiecePassLike;
    Interception => "interception", Incoming;
    KeeperSave => "keeper_save", Incoming;
    KeeperClaim => "keeper_claim", Incoming;
    KeeperPickup => "keeper_pickup", Incoming;
    KeeperSweep => "keeper_sweep", Incoming;
    BallRecovery => "ball_recovery", Incoming;
    Tackle => "tackle", Minor;
    Foul => "foul", Minor;
    BadTouch => "bad_touch", Minor;
    TakeOn => "take_on", Minor;
    Dispossessed => "dispossessed", Minor;
}

impl EventType {
    pub fn is_shot(self) -> bool {
        matches!(self, EventType::Shot | EventType::FreekickShot | EventType::PenaltyShot)
    }

    /// Set-pieces whose qualifying window is anchored at an episode start.
    pub fn opens_episode(self) -> bool {
        self.category() == EventCategory::SetPiecePassLike && self != EventType::ThrowIn
    }
}

impl Serialize for EventType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for EventType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
}

impl FromStr for Outcome {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "success" | "successful" | "1" | "true" => Ok(Outcome::Success),
            "failure" | "fail" | "unsuccessful" | "0" | "false" => Ok(Outcome::Failure),
            other => Err(Error::Validation(format!("unknown outcome {other:?}"))),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Success => "success",
            Outcome::Failure => "failure",
        })
    }
}

/// An annotated on-the-ball action.
///
/// `annotated_location` is carried for round-tripping only. The synchronizer
/// works on [`crate::sync::Action`], which has no location field.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub event_id: String,
    pub period: Period,
    pub annotated_time: f64,
    pub event_type: EventType,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    pub outcome: Outcome,
    pub annotated_location: Option<Position>,
}

/// Maximal run of open-play frames. Bounds are frame numbers, both inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Episode {
    pub episode_id: u32,
    pub start_frame: FrameIndex,
    pub end_frame: FrameIndex,
}

impl Episode {
    pub fn contains(&self, frame: FrameIndex) -> bool {
        (self.start_frame..=self.end_frame).contains(&frame)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Receiver {
    Player(PlayerId),
    Out,
    Goal,
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Receiver::Player(p) => f.write_str(p),
            Receiver::Out => f.write_str("OUT"),
            Receiver::Goal => f.write_str("GOAL"),
        }
    }
}

impl FromStr for Receiver {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "" => Err(Error::Validation("empty receiver".into())),
            "OUT" => Ok(Receiver::Out),
            "GOAL" => Ok(Receiver::Goal),
            p => Ok(Receiver::Player(p.to_string())),
        }
    }
}

/// Synchronization outcome of one event. `start_frame == None` marks an
/// event for which no candidate survived.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncResult {
    pub event_id: String,
    pub period: Period,
    pub start_frame: Option<FrameIndex>,
    pub end_frame: Option<FrameIndex>,
    pub receiver: Option<Receiver>,
    pub score: f64,
}

impl SyncResult {
    pub fn invalid(event_id: impl Into<String>, period: Period) -> Self {
        Self {
            event_id: event_id.into(),
            period,
            start_frame: None,
            end_frame: None,
            receiver: None,
            score: 0.0,
        }
    }

    pub fn valid(&self) -> bool {
        self.start_frame.is_some()
    }
}

/// Scaling coefficients λ1..λ7 of the feature scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreCoefficients {
    pub pbd: f64,
    pub ba: f64,
    pub post_kd: f64,
    pub pre_kd: f64,
    pub fd: f64,
    pub cpbd: f64,
    pub npbd: f64,
}

impl ScoreCoefficients {
    pub const PASS_LIKE: ScoreCoefficients = ScoreCoefficients {
        pbd: 20.0,
        ba: 20.0,
        post_kd: 20.0,
        pre_kd: 0.0,
        fd: 40.0,
        cpbd: 0.0,
        npbd: 0.0,
    };

    pub const INCOMING: ScoreCoefficients = ScoreCoefficients {
        pbd: 20.0,
        ba: 20.0,
        post_kd: 0.0,
        pre_kd: 20.0,
        fd: 40.0,
        cpbd: 0.0,
        npbd: 0.0,
    };

    pub const RECEIVE: ScoreCoefficients = ScoreCoefficients {
        pbd: 0.0,
        ba: 25.0,
        post_kd: 0.0,
        pre_kd: 25.0,
        fd: 0.0,
        cpbd: 25.0,
        npbd: 25.0,
    };

    pub fn total(&self) -> f64 {
        self.pbd + self.ba + self.post_kd + self.pre_kd + self.fd + self.cpbd + self.npbd
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.pbd,
            self.ba,
            self.post_kd,
            self.pre_kd,
            self.fd,
            self.cpbd,
            self.npbd,
        ];
        if all.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::Parameter("coefficients must be finite and non-negative".into()));
        }
        if (self.total() - 100.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "active coefficients must sum to 100, got {}",
                self.total()
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            pbd: self.pbd * factor,
            ba: self.ba * factor,
            post_kd: self.post_kd * factor,
            pre_kd: self.pre_kd * factor,
            fd: self.fd * factor,
            cpbd: self.cpbd * factor,
            npbd: self.npbd * factor,
        }
    }
}
