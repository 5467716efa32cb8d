use log::warn;

use crate::model::FrameIndex;
use crate::sync::context::{Action, PeriodContext};

/// Frames searched for one event; both bounds inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifyingWindow {
    pub event_id: String,
    pub start_frame: FrameIndex,
    pub end_frame: FrameIndex,
}

/// Set-pieces other than throw-ins search the first second of the episode
/// they open; everything else searches symmetrically around the annotated
/// frame. `floor` is the previous synchronized frame.
pub fn qualifying_window(ctx: &PeriodContext, action: &Action, floor: Option<i64>) -> QualifyingWindow {
    let first = ctx.track.first_frame() as i64;
    let last = ctx.track.last_frame() as i64;
    let clamp = |f: i64| f.clamp(first, last) as FrameIndex;
    if action.event_type.opens_episode() {
        let floor = floor.unwrap_or(i64::MIN);
        let a = action.annotated_frame;
        let opening = ctx
            .episodes
            .iter()
            .filter(|e| e.start_frame as i64 >= floor)
            .min_by_key(|e| (e.start_frame as i64 - a).abs());
        match opening {
            Some(e) => {
                return QualifyingWindow {
                    event_id: action.event_id.clone(),
                    start_frame: e.start_frame,
                    end_frame: clamp(e.start_frame as i64 + ctx.frames_for(ctx.cfg.set_piece_window_s)),
                }
            }
            None => warn!(
                "{}: no episode starts after frame {floor}; using the symmetric window",
                action.event_id
            ),
        }
    }
    let half = ctx.frames_for(ctx.cfg.window_half_s);
    QualifyingWindow {
        event_id: action.event_id.clone(),
        start_frame: clamp(action.annotated_frame - half),
        end_frame: clamp(action.annotated_frame + half),
    }
}
