//! Column-oriented view of one period of tracking data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{BallState, Fps, FrameIndex, Period, PlayerId, Position, TeamId, TrackingFrame};

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodTrack {
    pub period: Period,
    pub fps: Fps,
    pub frames: Vec<FrameIndex>,
    pub ball: Vec<Position>,
    pub alive: Vec<bool>,
    /// `None` where the player is not tracked in that frame.
    pub players: BTreeMap<PlayerId, Vec<Option<Position>>>,
}

impl PeriodTrack {
    /// Builds the columnar view from frames of a single period, sorted by
    /// frame index.
    pub fn from_frames(frames: &[TrackingFrame]) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::Validation("period without frames".into()))?;
        let n = frames.len();
        let mut players: BTreeMap<PlayerId, Vec<Option<Position>>> = BTreeMap::new();
        for (i, f) in frames.iter().enumerate() {
            if f.period != first.period || f.fps != first.fps {
                return Err(Error::Validation("mixed periods or frame rates in one track".into()));
            }
            if i > 0 && f.frame_index <= frames[i - 1].frame_index {
                return Err(Error::Validation(format!(
                    "frame indices not increasing at {}",
                    f.frame_index
                )));
            }
            for (id, pos) in &f.players {
                players.entry(id.clone()).or_insert_with(|| vec![None; n])[i] = Some(*pos);
            }
        }
        Ok(Self {
            period: first.period,
            fps: first.fps,
            frames: frames.iter().map(|f| f.frame_index).collect(),
            ball: frames.iter().map(|f| f.ball).collect(),
            alive: frames.iter().map(|f| f.ball_state.is_alive()).collect(),
            players,
        })
    }

    pub fn to_frames(&self) -> Vec<TrackingFrame> {
        (0..self.len())
            .map(|i| TrackingFrame {
                frame_index: self.frames[i],
                period: self.period,
                fps: self.fps,
                players: self
                    .players
                    .iter()
                    .filter_map(|(id, track)| track[i].map(|p| (id.clone(), p)))
                    .collect(),
                ball: self.ball[i],
                ball_state: if self.alive[i] {
                    BallState::Alive
                } else {
                    BallState::Dead
                },
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn first_frame(&self) -> FrameIndex {
        self.frames[0]
    }

    pub fn last_frame(&self) -> FrameIndex {
        self.frames[self.len() - 1]
    }

    pub fn index_of(&self, frame: FrameIndex) -> Option<usize> {
        self.frames.binary_search(&frame).ok()
    }

    /// First index whose frame is `>= frame`.
    pub fn lower_index(&self, frame: i64) -> usize {
        self.frames.partition_point(|&f| (f as i64) < frame)
    }

    /// Index of the last frame `<= frame`, if any.
    pub fn upper_index(&self, frame: i64) -> Option<usize> {
        self.frames.partition_point(|&f| (f as i64) <= frame).checked_sub(1)
    }

    /// Frame index reached `seconds` after the period's first frame.
    pub fn frame_at_time(&self, seconds: f64) -> i64 {
        self.first_frame() as i64 + self.fps.frames(seconds)
    }

    /// Maximal index ranges with consecutive frame numbers.
    pub fn contiguous_segments(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.len() {
            if i == self.len() || self.frames[i] != self.frames[i - 1] + 1 {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    pub fn player_position(&self, player: &str, idx: usize) -> Option<Position> {
        self.players.get(player).and_then(|t| t[idx])
    }

    /// Planar player-ball distance, NaN where the player is untracked.
    pub fn player_ball_distance(&self, player: &str, idx: usize) -> f64 {
        self.player_position(player, idx)
            .map(|p| p.planar_distance(&self.ball[idx]))
            .unwrap_or(f64::NAN)
    }
}

/// Team membership of every player seen in the tracking data.
pub type Roster = BTreeMap<PlayerId, TeamId>;
