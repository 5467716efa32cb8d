use crate::config::KickoffConfig;
use crate::error::{Error, Result};
use crate::model::{Event, Fps, FrameIndex, Position, CENTER_MARK};
use crate::signal::{find_extrema, ExtremumKind, SignalSet};
use crate::track::{PeriodTrack, Roster};

/// First frame of the period at which the ball is kicked from the center mark
/// with both teams lined up in their own halves. Expects normalized
/// coordinates, with `home_team` defending the left half.
pub fn detect_kickoff(
    track: &PeriodTrack,
    signals: &SignalSet,
    roster: &Roster,
    home_team: &str,
    cfg: &KickoffConfig,
) -> Result<FrameIndex> {
    let lookback = track.fps.frames(cfg.lookback_s).max(0) as usize;
    let center = Position::ground(CENTER_MARK.0, CENTER_MARK.1);
    let near_center: Vec<bool> = track
        .ball
        .iter()
        .map(|b| b.planar_distance(&center) <= cfg.center_radius)
        .collect();
    let peaks = find_extrema(&signals.ball.accel, ExtremumKind::LocalMax, 0.0);
    for &t in &peaks.frames {
        if !(signals.ball.accel[t] >= cfg.min_accel) || !track.alive[t] {
            continue;
        }
        let from = t.saturating_sub(lookback);
        if !near_center[from..=t].iter().any(|&c| c) {
            continue;
        }
        if teams_in_own_halves(track, from, roster, home_team, cfg.own_half_share) {
            return Ok(track.frames[t]);
        }
    }
    Err(Error::KickoffNotFound(track.period.number()))
}

fn teams_in_own_halves(track: &PeriodTrack, idx: usize, roster: &Roster, home_team: &str, share: f64) -> bool {
    let (mut home, mut home_ok, mut away, mut away_ok) = (0usize, 0usize, 0usize, 0usize);
    for (id, series) in &track.players {
        let (Some(team), Some(p)) = (roster.get(id), series[idx]) else {
            continue;
        };
        if team == home_team {
            home += 1;
            home_ok += usize::from(p.x < CENTER_MARK.0);
        } else {
            away += 1;
            away_ok += usize::from(p.x > CENTER_MARK.0);
        }
    }
    home > 0 && away > 0 && home_ok as f64 >= share * home as f64 && away_ok as f64 >= share * away as f64
}

/// Shifts every annotated time so that `kickoff_event_time` lands on the
/// detected kick-off frame.
pub fn apply_offset(events: &[Event], kickoff_frame: FrameIndex, kickoff_event_time: f64, fps: Fps) -> Vec<Event> {
    let shift = kickoff_frame as f64 / fps.as_f64() - kickoff_event_time;
    events
        .iter()
        .map(|e| Event {
            annotated_time: e.annotated_time + shift,
            ..e.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SignalConfig;
    use crate::model::{BallState, EventType, Outcome, Period, TrackingFrame};
    use crate::signal::derive_kinematics;
    use proptest::prelude::*;

    /// Ball rests at `ball_start`, is touched at `touch` (if any) and kicked
    /// at `kick`. Players cross into their own halves at `line_up`.
    fn period(ball_start: (f64, f64), touch: Option<usize>, kick: usize, line_up: usize) -> (PeriodTrack, Roster) {
        let mut ball = Position::ground(ball_start.0, ball_start.1);
        let mut frames = Vec::new();
        for i in 0..250usize {
            if Some(i) == touch.map(|t| t + 1) {
                ball.y += 0.4;
            }
            if i > kick {
                ball.x -= 0.4;
            }
            let side = if i >= line_up { 1.0 } else { -1.0 };
            let players = (0..10)
                .flat_map(|k| {
                    let y = 5.0 + 6.0 * k as f64;
                    [
                        (format!("H{k}"), Position::ground(CENTER_MARK.0 - side * 10.0, y)),
                        (format!("A{k}"), Position::ground(CENTER_MARK.0 + side * 10.0, y)),
                    ]
                })
                .collect();
            frames.push(TrackingFrame {
                frame_index: i as u32,
                period: Period::First,
                fps: Fps::TWENTY_FIVE,
                players,
                ball,
                ball_state: BallState::Alive,
            });
        }
        let roster = (0..10)
            .flat_map(|k| {
                [
                    (format!("H{k}"), "HOME".to_string()),
                    (format!("A{k}"), "AWAY".to_string()),
                ]
            })
            .collect();
        (PeriodTrack::from_frames(&frames).unwrap(), roster)
    }

    fn detect(track: &PeriodTrack, roster: &Roster) -> Result<FrameIndex> {
        let signals = derive_kinematics(track, &SignalConfig::default());
        detect_kickoff(track, &signals, roster, "HOME", &KickoffConfig::default())
    }

    #[test]
    fn kick_from_center_detected() {
        let (track, roster) = period(CENTER_MARK, None, 120, 0);
        assert_eq!(detect(&track, &roster).unwrap(), 120);
    }

    #[test]
    fn warm_up_touch_skipped() {
        let (track, roster) = period(CENTER_MARK, Some(80), 120, 70);
        assert_eq!(detect(&track, &roster).unwrap(), 120);
    }

    #[test]
    fn ball_away_from_center_fails() {
        let (track, roster) = period((30.0, 20.0), None, 120, 0);
        assert!(matches!(detect(&track, &roster), Err(Error::KickoffNotFound(1))));
    }

    fn events(times: &[f64]) -> Vec<Event> {
        times
            .iter()
            .enumerate()
            .map(|(i, t)| Event {
                event_id: format!("e{i}"),
                period: Period::First,
                annotated_time: *t,
                event_type: EventType::Pass,
                player_id: "H1".into(),
                team_id: "HOME".into(),
                outcome: Outcome::Success,
                annotated_location: None,
            })
            .collect()
    }

    #[test]
    fn offsets() {
        let shifted = apply_offset(&events(&[0.0, 3.5]), 250, 0.0, Fps::TWENTY_FIVE);
        assert_eq!(shifted[0].annotated_time, 10.0);
        assert_eq!(shifted[1].annotated_time, 13.5);
        let same = events(&[10.0, 11.0]);
        assert_eq!(apply_offset(&same, 250, 10.0, Fps::TWENTY_FIVE), same);
        let back = apply_offset(&events(&[12.0, 20.0]), 250, 12.0, Fps::TWENTY_FIVE);
        assert_eq!(back[1].annotated_time, 18.0);
    }

    proptest! {
        #[test]
        fn offset_preserves_differences(times in prop::collection::vec(0.0f64..3000.0, 1..30), k in 0u32..100_000) {
            let mut times = times;
            times.sort_by(f64::total_cmp);
            let ev = events(&times);
            let out = apply_offset(&ev, k, times[0], Fps::TWENTY_FIVE);
            for w in ev.windows(2).zip(out.windows(2)) {
                let before = w.0[1].annotated_time - w.0[0].annotated_time;
                let after = w.1[1].annotated_time - w.1[0].annotated_time;
                prop_assert!((before - after).abs() < 1e-9);
            }
        }
    }
}
