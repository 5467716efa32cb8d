//! Smoothed velocity, speed and acceleration series.

use std::collections::BTreeMap;

use crate::config::SignalConfig;
use crate::model::{PlayerId, Position};
use crate::signal::savgol::smooth_adaptive;
use crate::track::PeriodTrack;

/// Kinematic series of one entity, indexed like the period's frames.
/// Values are NaN where the entity is untracked.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Kinematics {
    pub velocity: Vec<[f64; 3]>,
    pub speed: Vec<f64>,
    /// Norm of the derivative of the velocity vector.
    pub accel: Vec<f64>,
    /// Derivative of scalar (path) speed. Diagnostic only.
    pub speed_accel: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerSignals {
    pub kinematics: Kinematics,
    /// Planar distance to the ball.
    pub ball_distance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    pub ball: Kinematics,
    pub ball_height: Vec<f64>,
    pub players: BTreeMap<PlayerId, PlayerSignals>,
}

impl SignalSet {
    pub fn len(&self) -> usize {
        self.ball_height.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ball_height.is_empty()
    }

    /// Player-ball distance at `idx`; NaN for unknown players.
    pub fn distance(&self, player: &str, idx: usize) -> f64 {
        self.players
            .get(player)
            .map(|p| p.ball_distance[idx])
            .unwrap_or(f64::NAN)
    }

    pub fn distance_series(&self, player: &str) -> Option<&[f64]> {
        self.players.get(player).map(|p| p.ball_distance.as_slice())
    }
}

/// Central differences scaled by `rate`, one-sided at the ends.
fn gradient(xs: &[f64], rate: f64) -> Vec<f64> {
    let n = xs.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    (xs[1] - xs[0]) * rate
                } else if i == n - 1 {
                    (xs[n - 1] - xs[n - 2]) * rate
                } else {
                    (xs[i + 1] - xs[i - 1]) * rate / 2.0
                }
            })
            .collect(),
    }
}

/// Kinematics of a 3D trajectory. `present[i] == false` or a break in
/// `segments` splits the series; derivatives never cross a split.
pub fn entity_kinematics(
    positions: &[Option<Position>],
    segments: &[std::ops::Range<usize>],
    rate: f64,
    window: usize,
    poly_order: usize,
) -> Kinematics {
    let n = positions.len();
    let mut kin = Kinematics {
        velocity: vec![[f64::NAN; 3]; n],
        speed: vec![f64::NAN; n],
        accel: vec![f64::NAN; n],
        speed_accel: vec![f64::NAN; n],
    };
    for seg in segments {
        let mut i = seg.start;
        while i < seg.end {
            if positions[i].is_none() {
                i += 1;
                continue;
            }
            let start = i;
            while i < seg.end && positions[i].is_some() {
                i += 1;
            }
            fill_run(&mut kin, positions, start..i, rate, window, poly_order);
        }
    }
    kin
}

fn fill_run(
    kin: &mut Kinematics,
    positions: &[Option<Position>],
    run: std::ops::Range<usize>,
    rate: f64,
    window: usize,
    poly_order: usize,
) {
    let pts: Vec<Position> = positions[run.clone()].iter().map(|p| p.unwrap()).collect();
    let comps: [Vec<f64>; 3] = [
        pts.iter().map(|p| p.x).collect(),
        pts.iter().map(|p| p.y).collect(),
        pts.iter().map(|p| p.z).collect(),
    ];
    let vel: Vec<Vec<f64>> = comps
        .iter()
        .map(|c| smooth_adaptive(&gradient(c, rate), window, poly_order))
        .collect();
    let dv: Vec<Vec<f64>> = vel.iter().map(|v| gradient(v, rate)).collect();
    let len = pts.len();
    let raw_acc: Vec<f64> = (0..len)
        .map(|k| (dv[0][k].powi(2) + dv[1][k].powi(2) + dv[2][k].powi(2)).sqrt())
        .collect();
    let acc = smooth_adaptive(&raw_acc, window, poly_order);
    let speed: Vec<f64> = (0..len)
        .map(|k| (vel[0][k].powi(2) + vel[1][k].powi(2) + vel[2][k].powi(2)).sqrt())
        .collect();
    // Path speed from step lengths, so pure turns leave it unchanged.
    let path_speed: Vec<f64> = (0..len)
        .map(|k| {
            let back = if k > 0 { step(&pts[k - 1], &pts[k]) } else { f64::NAN };
            let fwd = if k + 1 < len {
                step(&pts[k], &pts[k + 1])
            } else {
                f64::NAN
            };
            match (back.is_nan(), fwd.is_nan()) {
                (false, false) => (back + fwd) / 2.0 * rate,
                (true, false) => fwd * rate,
                (false, true) => back * rate,
                (true, true) => 0.0,
            }
        })
        .collect();
    let speed_acc = gradient(&smooth_adaptive(&path_speed, window, poly_order), rate);
    for k in 0..len {
        let i = run.start + k;
        kin.velocity[i] = [vel[0][k], vel[1][k], vel[2][k]];
        kin.speed[i] = speed[k];
        kin.accel[i] = acc[k].max(0.0);
        kin.speed_accel[i] = speed_acc[k];
    }
}

fn step(a: &Position, b: &Position) -> f64 {
    ((b.x - a.x).powi(2) + (b.y - a.y).powi(2) + (b.z - a.z).powi(2)).sqrt()
}

/// Computes every signal used by the synchronizer for one period.
pub fn derive_kinematics(track: &PeriodTrack, cfg: &SignalConfig) -> SignalSet {
    let rate = track.fps.as_f64();
    let window = cfg.window_for(track.fps);
    let segments = track.contiguous_segments();
    let ball_pos: Vec<Option<Position>> = track.ball.iter().copied().map(Some).collect();
    let ball = entity_kinematics(&ball_pos, &segments, rate, window, cfg.sg_poly_order);
    let players = track
        .players
        .iter()
        .map(|(id, positions)| {
            let ground: Vec<Option<Position>> = positions
                .iter()
                .map(|p| p.map(|p| Position::ground(p.x, p.y)))
                .collect();
            let kinematics = entity_kinematics(&ground, &segments, rate, window, cfg.sg_poly_order);
            let ball_distance = positions
                .iter()
                .zip(&track.ball)
                .map(|(p, b)| p.map(|p| p.planar_distance(b)).unwrap_or(f64::NAN))
                .collect();
            (
                id.clone(),
                PlayerSignals {
                    kinematics,
                    ball_distance,
                },
            )
        })
        .collect();
    SignalSet {
        ball,
        ball_height: track.ball.iter().map(|b| b.z).collect(),
        players,
    }
}
