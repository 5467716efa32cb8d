use log::warn;

use crate::model::{EventCategory, EventType, FrameIndex, Outcome, Position, Receiver, CENTER_MARK};
use crate::scoring::CandidateFrame;
use crate::signal::{find_extrema, ExtremumKind};
use crate::sync::candidates::filter_candidates;
use crate::sync::context::{Action, PeriodContext};
use crate::sync::major::{best_candidate, score_candidates};

/// How a receive was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiveCase {
    /// Next event restarts play: the ball went out.
    Out,
    /// A shot followed by the opponent kicking off.
    Goal,
    /// The next event itself is the receive.
    NextEvent,
    /// Joint search for the receiving frame and player.
    Search,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiveOutcome {
    pub case: ReceiveCase,
    pub end_frame: Option<FrameIndex>,
    pub receiver: Option<Receiver>,
}

/// The major event following a pass-like event, with its start frame if it
/// has been synchronized.
#[derive(Debug, Clone, Copy)]
pub struct NextMajor<'a> {
    pub action: &'a Action,
    pub start_frame: Option<FrameIndex>,
}

fn implies_receive(t: EventType) -> bool {
    matches!(t, EventType::ShotBlock | EventType::KeeperPunch) || t.category() == EventCategory::Incoming
}

/// Players who may receive: teammates after a successful pass, opponents
/// after a failed one.
pub fn receiver_pool<'a>(ctx: &PeriodContext<'a>, current: &Action) -> Vec<&'a str> {
    match current.outcome {
        Outcome::Success => ctx.team_players(&current.team_id, Some(&current.player_id)),
        Outcome::Failure => ctx.opponents_of_team(&current.team_id),
    }
}

/// Per-frame minimum ball distance over `pool`; NaN where none is tracked.
pub fn closest_distance(ctx: &PeriodContext, pool: &[&str]) -> Vec<f64> {
    let series: Vec<&[f64]> = pool.iter().filter_map(|p| ctx.distance_series(p)).collect();
    (0..ctx.len())
        .map(|i| {
            series
                .iter()
                .map(|s| s[i])
                .filter(|d| !d.is_nan())
                .fold(f64::NAN, f64::min)
        })
        .collect()
}

/// Finds the end frame and receiver of a synchronized pass-like event.
/// `upper` bounds the joint search and is normally the next major start.
pub fn detect_receive(
    ctx: &PeriodContext,
    current: &Action,
    start: FrameIndex,
    next: Option<NextMajor>,
    upper: i64,
) -> ReceiveOutcome {
    let episode_end = ctx.episode_at(start).map(|e| e.end_frame);
    if let Some(next) = next {
        let t = next.action.event_type;
        if t.category() == EventCategory::SetPiecePassLike {
            return ReceiveOutcome {
                case: ReceiveCase::Out,
                end_frame: episode_end,
                receiver: Some(Receiver::Out),
            };
        }
        if current.event_type.is_shot() && t == EventType::Pass && next.action.team_id != current.team_id {
            let from_center = next.start_frame.and_then(|f| ctx.track.index_of(f)).is_some_and(|i| {
                ctx.ball(i)
                    .planar_distance(&Position::ground(CENTER_MARK.0, CENTER_MARK.1))
                    <= ctx.cfg.center_circle_radius
            });
            if from_center {
                return ReceiveOutcome {
                    case: ReceiveCase::Goal,
                    end_frame: episode_end,
                    receiver: Some(Receiver::Goal),
                };
            }
        }
        if implies_receive(t) {
            let contradiction = current.outcome == Outcome::Success
                && t.category() == EventCategory::Incoming
                && next.action.team_id != current.team_id;
            if contradiction {
                warn!(
                    "{}: successful pass followed by opponent's {} {}",
                    current.event_id, t, next.action.event_id
                );
            } else if let Some(f) = next.start_frame.filter(|&f| f > start) {
                return ReceiveOutcome {
                    case: ReceiveCase::NextEvent,
                    end_frame: Some(f),
                    receiver: Some(Receiver::Player(next.action.player_id.clone())),
                };
            }
        }
    }
    let (best, _) = search_receive(ctx, current, start, next.map(|n| n.action), upper);
    ReceiveOutcome {
        case: ReceiveCase::Search,
        end_frame: best.as_ref().map(|(f, _)| *f),
        receiver: best.map(|(_, p)| Receiver::Player(p)),
    }
}

/// Joint search over `(start, upper]` scored with BA, Pre-KD, CPBD and NPBD.
/// Returns the chosen frame and closest pool player, plus every scored
/// candidate.
pub fn search_receive(
    ctx: &PeriodContext,
    current: &Action,
    start: FrameIndex,
    next: Option<&Action>,
    upper: i64,
) -> (Option<(FrameIndex, String)>, Vec<CandidateFrame>) {
    let pool = receiver_pool(ctx, current);
    if pool.is_empty() {
        return (None, Vec::new());
    }
    let cpbd = closest_distance(ctx, &pool);
    let range = ctx.index_range(start as i64 + 1, upper);
    if range.is_empty() {
        return (None, Vec::new());
    }
    let minima = local_minima(&cpbd, range.clone(), ctx.cfg.signal.window_for(ctx.track.fps));
    let cands = filter_candidates(ctx, range.clone(), &cpbd, &minima, Some(start as i64));
    let next_dist = next.and_then(|n| ctx.distance_series(&n.player_id));
    let scored = score_candidates(ctx, &cands, &cpbd, next_dist, range, 0, &ctx.cfg.coefficients.receive);
    let chosen = best_candidate(&scored).and_then(|best| {
        let idx = ctx.track.index_of(best.frame)?;
        let player = pool
            .iter()
            .filter_map(|p| Some((*p, ctx.distance_series(p)?[idx])))
            .filter(|(_, d)| !d.is_nan())
            .min_by(|a, b| a.1.total_cmp(&b.1))?
            .0;
        Some((best.frame, player.to_string()))
    });
    (chosen, scored)
}

/// Local-minimum mask of `series` over `range`, evaluated with `pad` extra
/// samples of context on each side.
fn local_minima(series: &[f64], range: std::ops::Range<usize>, pad: usize) -> Vec<bool> {
    let lo = range.start.saturating_sub(pad);
    let hi = (range.end + pad).min(series.len());
    let mut mask = vec![false; series.len()];
    for i in find_extrema(&series[lo..hi], ExtremumKind::LocalMin, 0.0).frames {
        mask[lo + i] = true;
    }
    mask
}
