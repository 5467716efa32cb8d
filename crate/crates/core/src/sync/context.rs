use std::collections::BTreeMap;
use std::ops::Range;

use crate::config::SyncConfig;
use crate::model::{
    Episode, Event, EventType, Fps, FrameIndex, Outcome, Period, PlayerId, Position, TeamId, PITCH_LENGTH, PITCH_WIDTH,
};
use crate::scoring::FeatureScorer;
use crate::signal::{derive_kinematics, episode_at, find_extrema, segment_episodes, ExtremumKind, SignalSet};
use crate::track::{PeriodTrack, Roster};

/// The synchronizer's view of an event. There is deliberately no location
/// field: nothing downstream of ingestion can read annotated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub event_id: String,
    pub period: Period,
    pub event_type: EventType,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    pub outcome: Outcome,
    /// Offset-corrected annotated time in frames.
    pub annotated_frame: i64,
}

impl Action {
    pub fn from_event(event: &Event, fps: Fps) -> Self {
        Self {
            event_id: event.event_id.clone(),
            period: event.period,
            event_type: event.event_type,
            player_id: event.player_id.clone(),
            team_id: event.team_id.clone(),
            outcome: event.outcome,
            annotated_frame: (event.annotated_time * fps.as_f64()).round() as i64,
        }
    }
}

/// Everything the stages need about one period, computed once.
#[derive(Debug, Clone)]
pub struct PeriodContext<'a> {
    pub track: &'a PeriodTrack,
    pub signals: SignalSet,
    pub episodes: Vec<Episode>,
    pub roster: &'a Roster,
    pub home_team: &'a str,
    pub cfg: &'a SyncConfig,
    pub scorer: FeatureScorer,
    accel_peaks: Vec<bool>,
    height_minima: Vec<bool>,
    distance_minima: BTreeMap<PlayerId, Vec<bool>>,
}

fn mask(len: usize, idx: &[usize]) -> Vec<bool> {
    let mut m = vec![false; len];
    for &i in idx {
        m[i] = true;
    }
    m
}

impl<'a> PeriodContext<'a> {
    pub fn new(track: &'a PeriodTrack, roster: &'a Roster, home_team: &'a str, cfg: &'a SyncConfig) -> Self {
        let signals = derive_kinematics(track, &cfg.signal);
        let episodes = segment_episodes(track, &cfg.signal);
        let n = track.len();
        let accel_peaks = mask(
            n,
            &find_extrema(&signals.ball.accel, ExtremumKind::LocalMax, cfg.signal.accel_prominence).frames,
        );
        let height_minima = mask(
            n,
            &find_extrema(&signals.ball_height, ExtremumKind::LocalMin, 0.0).frames,
        );
        let distance_minima = signals
            .players
            .iter()
            .map(|(id, p)| {
                let minima = find_extrema(&p.ball_distance, ExtremumKind::LocalMin, 0.0);
                (id.clone(), mask(n, &minima.frames))
            })
            .collect();
        Self {
            track,
            signals,
            episodes,
            roster,
            home_team,
            cfg,
            scorer: FeatureScorer::new(cfg.clip.clone()),
            accel_peaks,
            height_minima,
            distance_minima,
        }
    }

    pub fn fps(&self) -> f64 {
        self.track.fps.as_f64()
    }

    pub fn frames_for(&self, seconds: f64) -> i64 {
        self.track.fps.frames(seconds)
    }

    pub fn frame(&self, idx: usize) -> FrameIndex {
        self.track.frames[idx]
    }

    pub fn len(&self) -> usize {
        self.track.len()
    }

    pub fn is_empty(&self) -> bool {
        self.track.is_empty()
    }

    /// Indices whose frame lies in `[lo, hi]`.
    pub fn index_range(&self, lo: i64, hi: i64) -> Range<usize> {
        let start = self.track.lower_index(lo);
        let end = self.track.upper_index(hi).map_or(0, |i| i + 1);
        start..end.max(start)
    }

    pub fn is_accel_peak(&self, idx: usize) -> bool {
        self.accel_peaks[idx]
    }

    pub fn is_height_minimum(&self, idx: usize) -> bool {
        self.height_minima[idx]
    }

    pub fn distance_minima(&self, player: &str) -> Option<&[bool]> {
        self.distance_minima.get(player).map(Vec::as_slice)
    }

    pub fn distance_series(&self, player: &str) -> Option<&[f64]> {
        self.signals.distance_series(player)
    }

    pub fn ball_accel(&self, idx: usize) -> f64 {
        self.signals.ball.accel[idx]
    }

    pub fn ball(&self, idx: usize) -> Position {
        self.track.ball[idx]
    }

    pub fn player_position(&self, player: &str, idx: usize) -> Option<Position> {
        self.track.player_position(player, idx)
    }

    pub fn player_speed(&self, player: &str, idx: usize) -> f64 {
        self.signals
            .players
            .get(player)
            .map_or(f64::NAN, |p| p.kinematics.speed[idx])
    }

    pub fn team_of(&self, player: &str) -> Option<&TeamId> {
        self.roster.get(player)
    }

    /// Tracked players of `team`, optionally excluding one.
    pub fn team_players(&self, team: &str, except: Option<&str>) -> Vec<&'a str> {
        self.roster
            .iter()
            .filter(|(id, t)| t.as_str() == team && Some(id.as_str()) != except && self.track.players.contains_key(*id))
            .map(|(id, _)| id.as_str())
            .collect()
    }

    /// Tracked players not in `team`.
    pub fn opponents_of_team(&self, team: &str) -> Vec<&'a str> {
        self.roster
            .iter()
            .filter(|(id, t)| t.as_str() != team && self.track.players.contains_key(*id))
            .map(|(id, _)| id.as_str())
            .collect()
    }

    /// Goal attacked by `team`; the home team attacks towards x = 105.
    pub fn target_goal(&self, team: &str) -> Position {
        let x = if team == self.home_team { PITCH_LENGTH } else { 0.0 };
        Position::ground(x, PITCH_WIDTH / 2.0)
    }

    pub fn episode_at(&self, frame: FrameIndex) -> Option<&Episode> {
        episode_at(&self.episodes, frame)
    }

    /// Episode containing `frame`, or else the first one starting after it.
    pub fn episode_at_or_after(&self, frame: i64) -> Option<&Episode> {
        self.episodes.iter().find(|e| e.end_frame as i64 >= frame)
    }
}

/// Largest finite value of `series` over `range`, 0 if there is none.
pub(crate) fn max_over(series: &[f64], range: Range<usize>) -> f64 {
    series[range]
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

/// NaN distances count as arbitrarily far.
pub(crate) fn far_if_nan(d: f64) -> f64 {
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// NaN magnitudes count as zero.
pub(crate) fn zero_if_nan(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v
    }
}
