use std::ops::Range;

use crate::model::{EventType, FrameIndex, SyncResult};
use crate::scoring::{CandidateFrame, MinorFeatures};
use crate::sync::candidates::filter_candidates;
use crate::sync::context::{far_if_nan, max_over, zero_if_nan, Action, PeriodContext};
use crate::sync::major::{best_candidate, major_candidates};
use crate::sync::window::QualifyingWindow;

/// Opponent whose distance to the ball feeds a tackle's TOBD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TackleTarget {
    Player(String),
    /// Used when the opponent in possession is unknown.
    ClosestOpponent,
}

/// Score given to results fixed by a rule rather than by candidate scoring.
pub const RULE_SCORE: f64 = 100.0;

/// Last frame of the episode in play at `lower`.
pub fn foul_frame(ctx: &PeriodContext, lower: i64) -> Option<FrameIndex> {
    ctx.episode_at_or_after(lower).map(|e| e.end_frame)
}

fn ruled(action: &Action, frame: Option<FrameIndex>, score: f64) -> SyncResult {
    SyncResult {
        start_frame: frame,
        score: if frame.is_some() { score } else { 0.0 },
        ..SyncResult::invalid(action.event_id.clone(), action.period)
    }
}

pub fn sync_foul(ctx: &PeriodContext, action: &Action, lower: i64) -> SyncResult {
    ruled(action, foul_frame(ctx, lower), RULE_SCORE)
}

/// A result copied from another event's frame and score.
pub fn copied(action: &Action, from: &SyncResult) -> SyncResult {
    ruled(action, from.start_frame, from.score)
}

/// A bad touch by the previous receiver happens at that receive.
pub fn bad_touch_at(action: &Action, receive_frame: FrameIndex) -> SyncResult {
    ruled(action, Some(receive_frame), RULE_SCORE)
}

/// Bad touch located like a pass-like event inside `(lower, upper)`.
pub fn sync_bad_touch_search(ctx: &PeriodContext, action: &Action, lower: i64, upper: i64) -> SyncResult {
    let Some(range) = open_range(ctx, lower, upper) else {
        return SyncResult::invalid(action.event_id.clone(), action.period);
    };
    let window = QualifyingWindow {
        event_id: action.event_id.clone(),
        start_frame: ctx.frame(range.start),
        end_frame: ctx.frame(range.end - 1),
    };
    let scored = major_candidates(ctx, action, &window, Some(lower));
    result_from(action, best_candidate(&scored))
}

fn result_from(action: &Action, best: Option<&CandidateFrame>) -> SyncResult {
    match best {
        Some(b) => SyncResult {
            start_frame: Some(b.frame),
            score: b.total_score,
            ..SyncResult::invalid(action.event_id.clone(), action.period)
        },
        None => SyncResult::invalid(action.event_id.clone(), action.period),
    }
}

/// Track indices strictly between the two frames, if any.
fn open_range(ctx: &PeriodContext, lower: i64, upper: i64) -> Option<Range<usize>> {
    let r = ctx.index_range(lower + 1, upper - 1);
    (!r.is_empty()).then_some(r)
}

/// Scored candidates of a tackle, take-on or dispossessed event in
/// `(lower, upper)`.
pub fn minor_candidates(
    ctx: &PeriodContext,
    action: &Action,
    lower: i64,
    upper: i64,
    target: &TackleTarget,
) -> Vec<CandidateFrame> {
    let (Some(range), Some(dist), Some(minima)) = (
        open_range(ctx, lower, upper),
        ctx.distance_series(&action.player_id),
        ctx.distance_minima(&action.player_id),
    ) else {
        return Vec::new();
    };
    let cands = filter_candidates(ctx, range.clone(), dist, minima, Some(lower));
    let tobd_series = match action.event_type {
        EventType::Tackle => Some(target_distance(ctx, action, target)),
        _ => None,
    };
    cands
        .iter()
        .enumerate()
        .filter_map(|(k, &t)| {
            let next = cands.get(k + 1).copied().unwrap_or(range.end);
            let f = match action.event_type {
                EventType::Tackle => MinorFeatures {
                    pbd: Some(far_if_nan(dist[t])),
                    ba: Some(zero_if_nan(ctx.ball_accel(t))),
                    tobd: tobd_series.as_ref().map(|s| far_if_nan(s[t])),
                    ..Default::default()
                },
                EventType::TakeOn => take_on_features(ctx, action, t, next, &range),
                EventType::Dispossessed => MinorFeatures {
                    pbd: Some(far_if_nan(dist[t])),
                    post_kd: Some(max_over(dist, (t + 1).min(next)..next)),
                    rba: Some(relative_ball_accel(ctx, &action.player_id, t)),
                    ..Default::default()
                },
                _ => return None,
            };
            let total_score = ctx.scorer.score_minor(&f, action.event_type).ok()?;
            Some(CandidateFrame {
                frame: ctx.frame(t),
                features: f.to_map(),
                total_score,
            })
        })
        .collect()
}

/// Tackle, take-on or dispossessed event scored inside `(lower, upper)`.
pub fn sync_scored_minor(
    ctx: &PeriodContext,
    action: &Action,
    lower: i64,
    upper: i64,
    target: &TackleTarget,
) -> SyncResult {
    let scored = minor_candidates(ctx, action, lower, upper, target);
    result_from(action, best_candidate(&scored))
}

fn target_distance(ctx: &PeriodContext, action: &Action, target: &TackleTarget) -> Vec<f64> {
    match target {
        TackleTarget::Player(p) => ctx
            .distance_series(p)
            .map_or_else(|| vec![f64::NAN; ctx.len()], <[f64]>::to_vec),
        TackleTarget::ClosestOpponent => {
            let opponents = ctx.opponents_of_team(&action.team_id);
            (0..ctx.len())
                .map(|i| {
                    opponents
                        .iter()
                        .filter_map(|o| ctx.distance_series(o).map(|s| s[i]))
                        .filter(|d| !d.is_nan())
                        .fold(f64::NAN, f64::min)
                })
                .collect()
        }
    }
}

/// Closest opponent among those nearer the attacked goal than the carrier.
pub fn take_on_target<'a>(ctx: &PeriodContext<'a>, action: &Action, idx: usize) -> Option<&'a str> {
    let goal = ctx.target_goal(&action.team_id);
    let me = ctx.player_position(&action.player_id, idx)?;
    let my_goal_dist = me.planar_distance(&goal);
    ctx.opponents_of_team(&action.team_id)
        .into_iter()
        .filter_map(|o| Some((o, ctx.player_position(o, idx)?)))
        .filter(|(_, p)| p.planar_distance(&goal) < my_goal_dist)
        .min_by(|a, b| a.1.planar_distance(&me).total_cmp(&b.1.planar_distance(&me)))
        .map(|(o, _)| o)
}

fn take_on_features(
    ctx: &PeriodContext,
    action: &Action,
    t: usize,
    next: usize,
    range: &Range<usize>,
) -> MinorFeatures {
    let player = action.player_id.as_str();
    let target = take_on_target(ctx, action, t);
    let tobd = target
        .and_then(|o| ctx.distance_series(o))
        .map_or(f64::INFINITY, |s| far_if_nan(s[t]));
    let speed_now = zero_if_nan(ctx.player_speed(player, t));
    let pms = ((t + 1).min(next)..next)
        .map(|i| ctx.player_speed(player, i))
        .filter(|v| v.is_finite())
        .fold(speed_now, f64::max);
    let half = ctx.frames_for(ctx.cfg.poac_half_window_s).max(0) as usize;
    let before = t.saturating_sub(half).max(range.start);
    let after = (t + half).min(range.end - 1);
    let poac = target
        .and_then(|o| {
            let angle = |i: usize| {
                let p = ctx.player_position(player, i)?;
                let q = ctx.player_position(o, i)?;
                Some((q.y - p.y).atan2(q.x - p.x))
            };
            let diff = (angle(after)? - angle(before)?).to_degrees().abs() % 360.0;
            Some(if diff > 180.0 { 360.0 - diff } else { diff })
        })
        .unwrap_or(0.0);
    MinorFeatures {
        ba: Some(zero_if_nan(ctx.ball_accel(t))),
        tobd: Some(tobd),
        pms: Some(pms),
        pds: Some(pms - speed_now),
        poac: Some(poac),
        ..Default::default()
    }
}

/// Rate of change of the planar ball speed relative to `player`.
pub fn relative_ball_accel(ctx: &PeriodContext, player: &str, idx: usize) -> f64 {
    let Some(kin) = ctx.signals.players.get(player).map(|p| &p.kinematics) else {
        return 0.0;
    };
    let rel = |i: usize| {
        let b = ctx.signals.ball.velocity[i];
        let p = kin.velocity[i];
        ((b[0] - p[0]).powi(2) + (b[1] - p[1]).powi(2)).sqrt()
    };
    let lo = idx.saturating_sub(1);
    let hi = (idx + 1).min(ctx.len() - 1);
    if hi == lo {
        return 0.0;
    }
    let rate = (rel(hi) - rel(lo)) * ctx.fps() / (hi - lo) as f64;
    zero_if_nan(rate.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SyncConfig;
    use crate::model::{BallState, Fps, Outcome, Period, Position, TrackingFrame};
    use crate::track::{PeriodTrack, Roster};

    /// H2 carries the ball right along y = 34; A1 comes the other way and
    /// takes it at frame 100, then runs back left with it. Dead from 180.
    fn track() -> PeriodTrack {
        let frames = (0..200u32)
            .map(|i| {
                let t = i as f64;
                let h2 = Position::ground(30.0 + 0.1 * t.min(100.0), 34.0);
                let ball = if i <= 100 {
                    h2
                } else {
                    Position::ground(40.0 - 0.2 * (t - 100.0), 34.0)
                };
                let a1 = if i <= 100 {
                    Position::ground(50.0 - 0.1 * t, 34.5)
                } else {
                    Position::ground(ball.x, 34.5)
                };
                TrackingFrame {
                    frame_index: i,
                    period: Period::First,
                    fps: Fps::TWENTY_FIVE,
                    players: [("H2".to_string(), h2), ("A1".to_string(), a1)].into(),
                    ball,
                    ball_state: if i < 180 { BallState::Alive } else { BallState::Dead },
                }
            })
            .collect::<Vec<_>>();
        PeriodTrack::from_frames(&frames).unwrap()
    }

    fn roster() -> Roster {
        [("H2", "HOME"), ("A1", "AWAY")]
            .into_iter()
            .map(|(p, t)| (p.to_string(), t.to_string()))
            .collect()
    }

    fn action(event_type: EventType, player: &str, team: &str) -> Action {
        Action {
            event_id: "m".into(),
            period: Period::First,
            event_type,
            player_id: player.into(),
            team_id: team.into(),
            outcome: Outcome::Success,
            annotated_frame: 100,
        }
    }

    #[test]
    fn tackle_found_where_both_players_meet_the_ball() {
        let (tr, ro, cfg) = (track(), roster(), SyncConfig::default());
        let ctx = PeriodContext::new(&tr, &ro, "HOME", &cfg);
        let tackle = action(EventType::Tackle, "A1", "AWAY");
        let r = sync_scored_minor(&ctx, &tackle, 0, 170, &TackleTarget::Player("H2".into()));
        assert_eq!(r.start_frame, Some(100), "{r:?}");
    }

    #[test]
    fn foul_takes_episode_end() {
        let (tr, ro, cfg) = (track(), roster(), SyncConfig::default());
        let ctx = PeriodContext::new(&tr, &ro, "HOME", &cfg);
        let r = sync_foul(&ctx, &action(EventType::Foul, "A1", "AWAY"), 120);
        assert_eq!((r.start_frame, r.score), (Some(179), RULE_SCORE));
    }

    #[test]
    fn copy_keeps_frame_and_score() {
        let disp = action(EventType::Dispossessed, "H2", "HOME");
        let tackle = SyncResult {
            start_frame: Some(100),
            score: 77.0,
            ..SyncResult::invalid("t", Period::First)
        };
        let r = copied(&disp, &tackle);
        assert_eq!((r.start_frame, r.score, r.event_id.as_str()), (Some(100), 77.0, "m"));
    }

    #[test]
    fn empty_window_is_invalid() {
        let (tr, ro, cfg) = (track(), roster(), SyncConfig::default());
        let ctx = PeriodContext::new(&tr, &ro, "HOME", &cfg);
        let r = sync_scored_minor(
            &ctx,
            &action(EventType::Dispossessed, "H2", "HOME"),
            50,
            51,
            &TackleTarget::ClosestOpponent,
        );
        assert!(!r.valid());
    }

    #[test]
    fn take_on_target_is_ahead_of_carrier() {
        let (tr, ro, cfg) = (track(), roster(), SyncConfig::default());
        let ctx = PeriodContext::new(&tr, &ro, "HOME", &cfg);
        let a = action(EventType::TakeOn, "H2", "HOME");
        // Home attacks towards x = 105 and A1 starts ahead of H2.
        assert_eq!(take_on_target(&ctx, &a, 10), Some("A1"));
        assert_eq!(take_on_target(&ctx, &a, 150), None);
    }
}
