use std::ops::Range;

use crate::sync::context::PeriodContext;
use crate::sync::window::QualifyingWindow;

/// Track indices in `range` that may hold the event: alive, strictly after
/// `floor`, close to the ball (by `dist`) with the ball low, and at a local
/// minimum of `dist` or of ball height or at a ball-acceleration peak.
pub(crate) fn filter_candidates(
    ctx: &PeriodContext,
    range: Range<usize>,
    dist: &[f64],
    dist_minima: &[bool],
    floor: Option<i64>,
) -> Vec<usize> {
    let cfg = ctx.cfg;
    range
        .filter(|&i| {
            ctx.track.alive[i]
                && floor.is_none_or(|f| ctx.frame(i) as i64 > f)
                && dist[i] < cfg.max_player_ball_dist
                && ctx.signals.ball_height[i] < cfg.max_ball_height
                && (dist_minima[i] || ctx.is_height_minimum(i) || ctx.is_accel_peak(i))
        })
        .collect()
}

/// Whether track index `idx` passes the candidate filter for `player`,
/// regardless of any window or floor.
pub fn is_candidate(ctx: &PeriodContext, player: &str, idx: usize) -> bool {
    let (Some(dist), Some(minima)) = (ctx.distance_series(player), ctx.distance_minima(player)) else {
        return false;
    };
    idx < ctx.len() && !filter_candidates(ctx, idx..idx + 1, dist, minima, None).is_empty()
}

/// Candidate track indices for `player` inside `window`, sorted.
pub fn extract_candidates(
    ctx: &PeriodContext,
    window: &QualifyingWindow,
    player: &str,
    floor: Option<i64>,
) -> Vec<usize> {
    let (Some(dist), Some(minima)) = (ctx.distance_series(player), ctx.distance_minima(player)) else {
        return Vec::new();
    };
    let range = ctx.index_range(window.start_frame as i64, window.end_frame as i64);
    filter_candidates(ctx, range, dist, minima, floor)
}
