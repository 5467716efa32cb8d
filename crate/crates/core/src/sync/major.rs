use std::collections::BTreeMap;
use std::ops::Range;

use crate::config::SyncConfig;
use crate::model::{EventCategory, EventType, ScoreCoefficients, SyncResult};
use crate::scoring::CandidateFrame;
use crate::sync::candidates::extract_candidates;
use crate::sync::context::{far_if_nan, max_over, zero_if_nan, Action, PeriodContext};
use crate::sync::window::QualifyingWindow;

/// Coefficients used to score an event of this type as a major event.
pub fn coefficients_for(cfg: &SyncConfig, event_type: EventType) -> ScoreCoefficients {
    match event_type.category() {
        EventCategory::Incoming => cfg.coefficients.incoming,
        _ => cfg.coefficients.pass_like,
    }
}

/// Scores sorted candidate indices. `dist` feeds PBD and CPBD (whichever has
/// a non-zero coefficient) and both kick distances; `next_dist` feeds NPBD.
/// Only features with a non-zero coefficient are recorded.
pub fn score_candidates(
    ctx: &PeriodContext,
    candidates: &[usize],
    dist: &[f64],
    next_dist: Option<&[f64]>,
    window: Range<usize>,
    annotated_frame: i64,
    coeffs: &ScoreCoefficients,
) -> Vec<CandidateFrame> {
    let s = &ctx.scorer;
    let fps = ctx.fps();
    candidates
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut features = BTreeMap::new();
            let mut total = 0.0;
            let d = far_if_nan(dist[t]);
            if coeffs.pbd > 0.0 {
                features.insert("PBD", d);
                total += s.pbd(d, coeffs.pbd);
            }
            if coeffs.cpbd > 0.0 {
                features.insert("CPBD", d);
                total += s.cpbd(d, coeffs.cpbd);
            }
            if coeffs.ba > 0.0 {
                let a = zero_if_nan(ctx.ball_accel(t));
                features.insert("BA", a);
                total += s.ba(a, coeffs.ba);
            }
            if coeffs.post_kd > 0.0 {
                let end = candidates.get(k + 1).copied().unwrap_or(window.end);
                let kd = max_over(dist, (t + 1).min(end)..end);
                features.insert("PostKD", kd);
                total += s.post_kd(kd, coeffs.post_kd);
            }
            if coeffs.pre_kd > 0.0 {
                let start = if k == 0 { window.start } else { candidates[k - 1] + 1 };
                let kd = max_over(dist, start.min(t)..t);
                features.insert("PreKD", kd);
                total += s.pre_kd(kd, coeffs.pre_kd);
            }
            if coeffs.fd > 0.0 {
                let frame = ctx.frame(t) as i64;
                features.insert("FD", ((frame - annotated_frame) as f64 / fps).max(0.0));
                total += s.fd(frame, annotated_frame, fps, coeffs.fd);
            }
            if coeffs.npbd > 0.0 {
                let nd = far_if_nan(next_dist.map_or(f64::NAN, |n| n[t]));
                features.insert("NPBD", nd);
                total += s.npbd(nd, coeffs.npbd);
            }
            CandidateFrame {
                frame: ctx.frame(t),
                features,
                total_score: total,
            }
        })
        .collect()
}

/// Highest total; the earliest frame wins ties.
pub fn best_candidate(scored: &[CandidateFrame]) -> Option<&CandidateFrame> {
    scored.iter().fold(None, |best: Option<&CandidateFrame>, c| match best {
        Some(b) if b.total_score >= c.total_score => Some(b),
        _ => Some(c),
    })
}

/// Candidates of a major event with their scores, in frame order.
pub fn major_candidates(
    ctx: &PeriodContext,
    action: &Action,
    window: &QualifyingWindow,
    floor: Option<i64>,
) -> Vec<CandidateFrame> {
    let Some(dist) = ctx.distance_series(&action.player_id) else {
        return Vec::new();
    };
    let cands = extract_candidates(ctx, window, &action.player_id, floor);
    let range = ctx.index_range(window.start_frame as i64, window.end_frame as i64);
    let coeffs = coefficients_for(ctx.cfg, action.event_type);
    score_candidates(ctx, &cands, dist, None, range, action.annotated_frame, &coeffs)
}

/// Best-scoring frame of a pass-like or incoming event.
pub fn sync_major(ctx: &PeriodContext, action: &Action, window: &QualifyingWindow, floor: Option<i64>) -> SyncResult {
    let scored = major_candidates(ctx, action, window, floor);
    match best_candidate(&scored) {
        Some(best) => SyncResult {
            start_frame: Some(best.frame),
            score: best.total_score,
            ..SyncResult::invalid(action.event_id.clone(), action.period)
        },
        None => SyncResult::invalid(action.event_id.clone(), action.period),
    }
}
