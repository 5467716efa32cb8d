use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{PITCH_LENGTH, PITCH_WIDTH};

pub const HOME: &str = "HOME";
pub const AWAY: &str = "AWAY";
pub const SQUAD_SIZE: usize = 11;

pub type P2 = [f64; 2];

pub fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn scale(a: P2, k: f64) -> P2 {
    [a[0] * k, a[1] * k]
}

/// Unit vector along `a`; `[1, 0]` for a zero vector.
pub fn unit(a: P2) -> P2 {
    let n = a[0].hypot(a[1]);
    if n < 1e-12 {
        [1.0, 0.0]
    } else {
        [a[0] / n, a[1] / n]
    }
}

pub fn perp(a: P2) -> P2 {
    [-a[1], a[0]]
}

pub fn clamp_to_pitch(p: P2, margin: f64) -> P2 {
    [
        p[0].clamp(margin, PITCH_LENGTH - margin),
        p[1].clamp(margin, PITCH_WIDTH - margin),
    ]
}

pub fn player_id(team: &str, number: usize) -> String {
    format!("{}{number}", if team == HOME { 'H' } else { 'A' })
}

pub fn team_of(player: &str) -> &'static str {
    if player.starts_with('H') {
        HOME
    } else {
        AWAY
    }
}

pub fn opponent(team: &str) -> &'static str {
    if team == HOME {
        AWAY
    } else {
        HOME
    }
}

pub fn squad(team: &str) -> Vec<String> {
    (1..=SQUAD_SIZE).map(|n| player_id(team, n)).collect()
}

pub fn all_players() -> Vec<String> {
    let mut v = squad(HOME);
    v.extend(squad(AWAY));
    v
}

pub fn keeper(team: &str) -> String {
    player_id(team, 1)
}

pub fn is_keeper(player: &str) -> bool {
    player.len() == 2 && player.ends_with('1')
}

pub fn shirt(player: &str) -> usize {
    player[1..].parse().unwrap_or(0)
}

/// +1 when the team attacks towards x = 105.
pub fn attack_sign(team: &str) -> f64 {
    if team == HOME {
        1.0
    } else {
        -1.0
    }
}

/// Distance covered towards the opponent goal, 0 at the own goal line.
pub fn progress(team: &str, p: P2) -> f64 {
    if team == HOME {
        p[0]
    } else {
        PITCH_LENGTH - p[0]
    }
}

/// x of the goal line the team attacks.
pub fn target_goal_x(team: &str) -> f64 {
    if team == HOME {
        PITCH_LENGTH
    } else {
        0.0
    }
}

/// 4-4-2 anchor of a home shirt number; away anchors are point-mirrored.
fn anchor(team: &str, number: usize) -> P2 {
    let home = match number {
        1 => [6.0, 34.0],
        2..=5 => [22.0, [10.0, 26.0, 42.0, 58.0][number - 2]],
        6..=9 => [40.0, [10.0, 26.0, 42.0, 58.0][number - 6]],
        _ => [55.0, if number == 10 { 25.0 } else { 43.0 }],
    };
    if team == HOME {
        home
    } else {
        [PITCH_LENGTH - home[0], PITCH_WIDTH - home[1]]
    }
}

#[derive(Debug, Clone, Copy)]
struct Wander {
    amp: [f64; 2],
    period: [f64; 2],
    phase: [f64; 2],
}

/// Smooth free movement of every player: the whole block drifts along the
/// pitch and each player wanders around its anchor. Speeds stay below
/// about 4 m/s.
#[derive(Debug, Clone)]
pub struct BaseMotion {
    block_phase: [f64; 2],
    wander: BTreeMap<String, Wander>,
}

const BLOCK_AMP: [f64; 2] = [14.0, 7.0];
const BLOCK_PERIOD: [f64; 2] = [75.0, 53.0];

impl BaseMotion {
    pub fn new(seed: u64, period: u8) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(period as u64));
        let block_phase = [rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)];
        let wander = all_players()
            .into_iter()
            .map(|p| {
                let w = Wander {
                    amp: [rng.random_range(1.5..3.5), rng.random_range(1.5..3.5)],
                    period: [rng.random_range(17.0..41.0), rng.random_range(17.0..41.0)],
                    phase: [rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)],
                };
                (p, w)
            })
            .collect();
        Self { block_phase, wander }
    }

    pub fn at(&self, player: &str, t: f64) -> P2 {
        let team = team_of(player);
        let number = shirt(player);
        let a = anchor(team, number);
        let w = self.wander.get(player).copied().unwrap_or(Wander {
            amp: [0.0; 2],
            period: [1.0; 2],
            phase: [0.0; 2],
        });
        let block = [
            BLOCK_AMP[0] * (TAU * t / BLOCK_PERIOD[0] + self.block_phase[0]).sin(),
            BLOCK_AMP[1] * (TAU * t / BLOCK_PERIOD[1] + self.block_phase[1]).sin(),
        ];
        let share = if number == 1 { 0.2 } else { 1.0 };
        let p = [
            a[0] + share * block[0] + w.amp[0] * (TAU * t / w.period[0] + w.phase[0]).sin(),
            a[1] + share * block[1] + w.amp[1] * (TAU * t / w.period[1] + w.phase[1]).sin(),
        ];
        clamp_to_pitch(p, 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_motion_is_slow_and_on_the_pitch() {
        let m = BaseMotion::new(7, 1);
        for p in all_players() {
            let mut prev = m.at(&p, 0.0);
            for i in 1..3000 {
                let cur = m.at(&p, i as f64 * 0.1);
                assert!(dist(prev, cur) / 0.1 < 5.0, "{p} too fast at step {i}");
                assert!((0.0..=PITCH_LENGTH).contains(&cur[0]) && (0.0..=PITCH_WIDTH).contains(&cur[1]));
                prev = cur;
            }
        }
    }

    #[test]
    fn ids_and_teams() {
        assert_eq!(player_id(HOME, 7), "H7");
        assert_eq!(team_of("A11"), AWAY);
        assert!(is_keeper("A1") && !is_keeper("A11"));
        assert_eq!(shirt("H10"), 10);
        assert_eq!(progress(AWAY, [5.0, 0.0]), 100.0);
    }
}
