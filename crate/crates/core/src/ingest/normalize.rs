use crate::config::NormalizeConfig;
use crate::error::{Error, Result};
use crate::ingest::MatchData;
use crate::model::{Position, CENTER_MARK, PITCH_LENGTH, PITCH_WIDTH};
use crate::track::PeriodTrack;

/// Rescales coordinates to a 105 × 68 pitch and reflects every period in
/// which the home team attacks right-to-left.
pub fn normalize(data: &MatchData, cfg: &NormalizeConfig) -> Result<MatchData> {
    let mut out = data.clone();
    let sx = PITCH_LENGTH / data.metadata.pitch_length;
    let sy = PITCH_WIDTH / data.metadata.pitch_width;
    let tol = cfg.out_of_bounds_tolerance;
    let scale = |p: Position| Position::new(p.x * sx, p.y * sy, p.z);
    let clamp = |p: Position| {
        Position::new(
            p.x.clamp(-tol, PITCH_LENGTH + tol),
            p.y.clamp(-tol, PITCH_WIDTH + tol),
            p.z.max(0.0),
        )
    };
    let reflect = |p: Position| Position::new(PITCH_LENGTH - p.x, PITCH_WIDTH - p.y, p.z);

    for track in &mut out.periods {
        for b in &mut track.ball {
            *b = clamp(scale(*b));
        }
        for series in track.players.values_mut() {
            for p in series.iter_mut().flatten() {
                *p = clamp(scale(*p));
            }
        }
        let flip = home_attacks_right_to_left(track, data, cfg)?;
        if flip {
            for b in &mut track.ball {
                *b = reflect(*b);
            }
            for series in track.players.values_mut() {
                for p in series.iter_mut().flatten() {
                    *p = reflect(*p);
                }
            }
        }
        for e in out.events.iter_mut().filter(|e| e.period == track.period) {
            if let Some(loc) = e.annotated_location.as_mut() {
                let scaled = scale(*loc);
                *loc = if flip { reflect(scaled) } else { scaled };
            }
        }
    }
    out.metadata.pitch_length = PITCH_LENGTH;
    out.metadata.pitch_width = PITCH_WIDTH;
    Ok(out)
}

/// Mean x of `players` over the first alive frames of the period.
fn mean_x<'a>(track: &PeriodTrack, players: impl Iterator<Item = &'a String>, horizon: usize) -> Option<f64> {
    let alive: Vec<usize> = (0..track.len()).filter(|&i| track.alive[i]).take(horizon).collect();
    let (mut sum, mut n) = (0.0, 0usize);
    for id in players {
        if let Some(series) = track.players.get(id) {
            for &i in &alive {
                if let Some(p) = series[i] {
                    sum += p.x;
                    n += 1;
                }
            }
        }
    }
    (n > 0).then(|| sum / n as f64)
}

fn home_attacks_right_to_left(track: &PeriodTrack, data: &MatchData, cfg: &NormalizeConfig) -> Result<bool> {
    let horizon = (cfg.orientation_window_s * track.fps.as_f64()).round() as usize;
    let meta = &data.metadata;
    let in_team = |team: &str| {
        let team = team.to_string();
        move |id: &&String| data.roster.get(*id) == Some(&team)
    };

    let home_gk = meta.goalkeepers.iter().filter(in_team(&meta.home_team));
    let away_gk = meta.goalkeepers.iter().filter(in_team(&meta.away_team));
    if let (Some(h), Some(a)) = (mean_x(track, home_gk, horizon), mean_x(track, away_gk, horizon)) {
        if (h - a).abs() >= cfg.ambiguity_margin {
            return Ok(h > a);
        }
    } else if let Some(h) = mean_x(track, meta.goalkeepers.iter().filter(in_team(&meta.home_team)), horizon) {
        if (h - CENTER_MARK.0).abs() >= cfg.ambiguity_margin {
            return Ok(h > CENTER_MARK.0);
        }
    }

    let home = mean_x(track, data.roster.keys().filter(in_team(&meta.home_team)), horizon);
    let away = mean_x(track, data.roster.keys().filter(in_team(&meta.away_team)), horizon);
    match (home, away) {
        (Some(h), Some(a)) if (h - a).abs() >= cfg.ambiguity_margin => Ok(h > a),
        _ => Err(Error::Orientation {
            period: track.period.number(),
            reason: "team mean positions are within the ambiguity margin".into(),
        }),
    }
}
