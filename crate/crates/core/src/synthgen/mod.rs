//! Synthetic matches with known ground truth.
//!
//! A [`ScenarioScript`] fixes every ball contact, the player positions that
//! matter for them and the annotated events. Rendering turns it into
//! tracking data; the noise model then degrades the annotation clock and the
//! positions. Scripts are either hand-written or produced by [`plan`].

pub mod motion;
pub mod noise;
pub mod planner;
pub mod render;
pub mod script;
pub mod truth;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SchemaConfig;
use crate::error::{Error, Result};
use crate::ingest::{save_match, MatchData, MatchMetadata};
use crate::model::{BallState, Event, Fps, Period, Position, TrackingFrame, PITCH_LENGTH, PITCH_WIDTH};

pub use planner::{plan, PlanParams};
pub use script::{LocationBias, NoiseModel, ScenarioScript};
pub use truth::{read_truth, write_truth, TruthRow};

use motion::{all_players, keeper, team_of, BaseMotion, AWAY, HOME, P2};
use noise::{annotated_times, jitter_position, reflect};
use render::render_period;

/// Raw match data (second period mirrored, as a provider would deliver it)
/// plus the true frame of every event.
#[derive(Debug, Clone)]
pub struct Generated {
    pub script: ScenarioScript,
    pub data: MatchData,
    pub truth: Vec<TruthRow>,
}

impl Generated {
    /// Schema that loads the written files back.
    pub fn schema(&self) -> SchemaConfig {
        let mut s = SchemaConfig {
            match_id: self.script.name.clone(),
            ..SchemaConfig::default()
        };
        s.tracking.time = Some("time_s".into());
        s.teams.home = HOME.into();
        s.teams.away = AWAY.into();
        s.teams.goalkeepers = vec![keeper(HOME), keeper(AWAY)];
        s
    }
}

/// Separates the noise stream from the planner's stream of the same seed
/// ("noise" in ASCII).
const NOISE_STREAM: u64 = 0x006e_6f69_7365;

/// Renders `script` and applies its noise model.
pub fn generate(script: &ScenarioScript) -> Result<Generated> {
    script.check()?;
    let fps = Fps::new(script.fps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(script.seed ^ NOISE_STREAM);
    let noise = script.noise;
    let mut frames = Vec::new();
    let mut events = Vec::new();
    let mut truth = Vec::new();
    for p in &script.periods {
        let period = Period::from_number(p.period as i64)?;
        let base = BaseMotion::new(script.seed, p.period);
        let r =
            render_period(p, &base, fps.as_f64()).map_err(|e| Error::Generation(format!("{}: {e}", script.name)))?;
        let put = |q: P2| if period == Period::Second { reflect(q) } else { q };
        for i in 0..r.ball.len() {
            let mut players = BTreeMap::new();
            for (id, track) in &r.players {
                if noise.dropout > 0.0 && rng.random::<f64>() < noise.dropout {
                    continue;
                }
                let q = put(jitter_position(track[i], noise.position_std, &mut rng));
                players.insert(id.clone(), Position::ground(q[0], q[1]));
            }
            let b = r.ball[i];
            let q = put(jitter_position([b[0], b[1]], noise.position_std, &mut rng));
            frames.push(TrackingFrame {
                frame_index: i as u32,
                period,
                fps,
                players,
                ball: Position::new(q[0], q[1], b[2]),
                ball_state: if r.alive[i] { BallState::Alive } else { BallState::Dead },
            });
        }
        let true_frames: Vec<u32> = p.events.iter().map(|e| e.frame).collect();
        let times = annotated_times(&true_frames, p.kickoff_frame, fps.as_f64(), noise.jitter_s, &mut rng);
        for (e, t) in p.events.iter().zip(times) {
            events.push(Event {
                event_id: e.event_id.clone(),
                period,
                annotated_time: t,
                event_type: e.event_type,
                player_id: e.player.clone(),
                team_id: e.team.clone(),
                outcome: e.outcome,
                annotated_location: e.location.map(|l| {
                    let q = put(l);
                    Position::ground(q[0], q[1])
                }),
            });
            truth.push(TruthRow {
                event_id: e.event_id.clone(),
                period: p.period,
                event_type: e.event_type,
                start_frame: e.frame,
                end_frame: e.end_frame,
                receiver: e.receiver.clone(),
            });
        }
    }
    let roster = all_players().into_iter().map(|p| {
        let team = team_of(&p).to_string();
        (p, team)
    });
    let metadata = MatchMetadata {
        match_id: script.name.clone(),
        fps,
        home_team: HOME.into(),
        away_team: AWAY.into(),
        pitch_length: PITCH_LENGTH,
        pitch_width: PITCH_WIDTH,
        goalkeepers: vec![keeper(HOME), keeper(AWAY)],
    };
    let data = MatchData::from_parts(metadata, &frames, roster.collect(), events)?;
    Ok(Generated {
        script: script.clone(),
        data,
        truth,
    })
}

/// Writes `tracking.csv`, `events.csv`, `schema.toml`, `truth.csv` and
/// `script.json` into `dir`.
pub fn write_generated(g: &Generated, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    save_match(&g.data, &dir.join("tracking.csv"), &dir.join("events.csv"))?;
    let schema = dir.join("schema.toml");
    std::fs::write(&schema, g.schema().to_toml_string()?).map_err(|e| Error::io(&schema, e))?;
    write_truth(&dir.join("truth.csv"), &g.truth)?;
    let script = dir.join("script.json");
    std::fs::write(&script, g.script.to_json()).map_err(|e| Error::io(&script, e))
}

/// The evaluation suite: ten matches with varied play styles and the
/// default noise model. One is sampled at 10 FPS, one has careless event
/// locations and one awards penalties generously.
pub fn standard_suite(seed: u64) -> Result<Vec<ScenarioScript>> {
    standard_params(seed).iter().map(plan).collect()
}

/// Planner settings behind [`standard_suite`].
pub fn standard_params(seed: u64) -> Vec<PlanParams> {
    (0..10u64)
        .map(|i| {
            let mut p = PlanParams::new(format!("synth-{i:02}"), seed.wrapping_add(i * 7919));
            p.touch_rate = [0.2, 0.5, 0.3, 0.0, 0.6, 0.3, 0.4, 0.1, 0.3, 0.5][i as usize];
            p.long_hold_rate = [0.05, 0.0, 0.1, 0.05, 0.15, 0.0, 0.05, 0.1, 0.05, 0.0][i as usize];
            p.minor_weight = [1.0, 1.2, 0.8, 1.0, 1.1, 0.9, 1.0, 1.3, 1.0, 0.8][i as usize];
            p.out_weight = [1.0, 0.8, 1.2, 1.0, 1.0, 1.4, 0.9, 1.0, 1.1, 1.0][i as usize];
            if i == 3 {
                p.fps = 10;
            }
            if i == 5 {
                p.penalty_rate = 1.0;
            }
            if i == 7 {
                p.location_bias = LocationBias::PreviousReceive;
            }
            p
        })
        .collect()
}
