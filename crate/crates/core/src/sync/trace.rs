//! Per-frame feature values around one event, for plotting and debugging.
//!
//! Ball acceleration and frame delay are divided by 5 so that every column
//! shares the scale of a distance in metres.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::config::SyncConfig;
use crate::error::{Error, Result};
use crate::ingest::MatchData;
use crate::model::{EventCategory, EventType, FrameIndex, Receiver};
use crate::sync::candidates::extract_candidates;
use crate::sync::context::{max_over, Action, PeriodContext};
use crate::sync::minor::take_on_target;
use crate::sync::pipeline::{prepare_periods, run_period};
use crate::sync::receive::{closest_distance, receiver_pool};
use crate::sync::window::qualifying_window;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    Pbd,
    BaDiv5,
    PostKd,
    PreKd,
    FdDiv5,
    Cpbd,
    Npbd,
    Tobd,
}

impl Feature {
    pub const ALL: [Feature; 8] = [
        Feature::Pbd,
        Feature::BaDiv5,
        Feature::PostKd,
        Feature::PreKd,
        Feature::FdDiv5,
        Feature::Cpbd,
        Feature::Npbd,
        Feature::Tobd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Pbd => "PBD",
            Feature::BaDiv5 => "BA/5",
            Feature::PostKd => "PostKD",
            Feature::PreKd => "PreKD",
            Feature::FdDiv5 => "FD/5",
            Feature::Cpbd => "CPBD",
            Feature::Npbd => "NPBD",
            Feature::Tobd => "TOBD",
        }
    }

    /// Columns shown when none are requested.
    pub fn defaults_for(event_type: EventType) -> Vec<Feature> {
        match event_type.category() {
            EventCategory::Incoming => vec![Feature::Pbd, Feature::BaDiv5, Feature::PreKd, Feature::FdDiv5],
            EventCategory::Minor => vec![Feature::Pbd, Feature::BaDiv5, Feature::Tobd],
            _ => vec![
                Feature::Pbd,
                Feature::BaDiv5,
                Feature::PostKd,
                Feature::FdDiv5,
                Feature::Cpbd,
                Feature::Npbd,
            ],
        }
    }

    pub fn valid_names() -> String {
        Feature::ALL.map(Feature::name).join(", ")
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        Feature::ALL
            .into_iter()
            .find(|f| {
                f.name().to_ascii_uppercase() == key || f.name().trim_end_matches("/5").to_ascii_uppercase() == key
            })
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "unknown feature {s:?}; valid features: {}",
                    Feature::valid_names()
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub event_id: String,
    pub features: Vec<Feature>,
    /// Frame and one value per feature; NaN where undefined.
    pub rows: Vec<(FrameIndex, Vec<f64>)>,
    /// Synchronized start frame, if any.
    pub start_frame: Option<FrameIndex>,
    pub end_frame: Option<FrameIndex>,
}

impl Trace {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let header: Vec<&str> = std::iter::once("frame")
            .chain(self.features.iter().map(|f| f.name()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for (frame, values) in &self.rows {
            let cells: Vec<String> = values
                .iter()
                .map(|v| {
                    if v.is_finite() {
                        format!("{v:.4}")
                    } else {
                        String::new()
                    }
                })
                .collect();
            writeln!(out, "{frame},{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn column(&self, feature: Feature) -> Option<Vec<f64>> {
        let k = self.features.iter().position(|f| *f == feature)?;
        Some(self.rows.iter().map(|(_, v)| v[k]).collect())
    }
}

/// Runs the pipeline on the event's period and samples the requested
/// features over its qualifying window, extended to the receive search
/// range for pass-like events.
pub fn trace_event(data: &MatchData, cfg: &SyncConfig, event_id: &str, features: Option<&[Feature]>) -> Result<Trace> {
    let periods = prepare_periods(data, cfg)?;
    let (period, i) = periods
        .iter()
        .find_map(|p| p.actions.iter().position(|a| a.event_id == event_id).map(|i| (p, i)))
        .ok_or_else(|| Error::Parameter(format!("unknown event id {event_id:?}")))?;
    let ctx = &period.ctx;
    let actions = &period.actions;
    let action = &actions[i];
    let features = features.map_or_else(|| Feature::defaults_for(action.event_type), <[Feature]>::to_vec);
    let state = run_period(ctx, actions);
    let result = &state.results[i];

    let window = qualifying_window(ctx, action, None);
    let mut lo = window.start_frame as i64;
    let mut hi = window.end_frame as i64;
    let next = (i + 1..actions.len()).find(|&k| actions[k].event_type.category().is_major());
    if action.event_type.category().is_pass_like() {
        if let Some(end) = result.end_frame {
            hi = hi.max(end as i64);
        }
        if let Some(f) = next.and_then(|k| state.results[k].start_frame) {
            hi = hi.max(f as i64);
        }
    }
    if let Some(s) = result.start_frame {
        lo = lo.min(s as i64);
    }
    let range = ctx.index_range(lo, hi);

    let nan = vec![f64::NAN; ctx.len()];
    let dist = ctx.distance_series(&action.player_id).unwrap_or(&nan);
    let cands = extract_candidates(ctx, &window, &action.player_id, None);
    let pool = receiver_pool(ctx, action);
    let cpbd = closest_distance(ctx, &pool);
    let next_player = next.map(|k| actions[k].player_id.as_str()).or(match &result.receiver {
        Some(Receiver::Player(p)) => Some(p.as_str()),
        _ => None,
    });
    let npbd = next_player.and_then(|p| ctx.distance_series(p)).unwrap_or(&nan);

    let mut rows = Vec::with_capacity(range.len());
    for t in range.clone() {
        let values = features
            .iter()
            .map(|f| match f {
                Feature::Pbd => dist[t],
                Feature::BaDiv5 => ctx.ball_accel(t) / 5.0,
                Feature::PostKd => {
                    let end = cands.iter().copied().find(|&c| c > t).unwrap_or(range.end);
                    max_over(dist, (t + 1).min(end)..end)
                }
                Feature::PreKd => {
                    let start = cands
                        .iter()
                        .copied()
                        .rev()
                        .find(|&c| c < t)
                        .map_or(range.start, |c| c + 1);
                    max_over(dist, start.min(t)..t)
                }
                Feature::FdDiv5 => ((ctx.frame(t) as i64 - action.annotated_frame) as f64 / ctx.fps()).max(0.0) / 5.0,
                Feature::Cpbd => cpbd[t],
                Feature::Npbd => npbd[t],
                Feature::Tobd => opponent_distance(ctx, action, t),
            })
            .collect();
        rows.push((ctx.frame(t), values));
    }
    Ok(Trace {
        event_id: event_id.to_string(),
        features,
        rows,
        start_frame: result.start_frame,
        end_frame: result.end_frame,
    })
}

/// Ball distance of the take-on target, or of the closest opponent.
fn opponent_distance(ctx: &PeriodContext, action: &Action, t: usize) -> f64 {
    if action.event_type == EventType::TakeOn {
        return take_on_target(ctx, action, t)
            .and_then(|o| ctx.distance_series(o))
            .map_or(f64::NAN, |s| s[t]);
    }
    ctx.opponents_of_team(&action.team_id)
        .iter()
        .filter_map(|o| ctx.distance_series(o).map(|s| s[t]))
        .filter(|d| !d.is_nan())
        .fold(f64::NAN, f64::min)
}
