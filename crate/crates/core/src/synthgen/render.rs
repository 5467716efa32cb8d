use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::synthgen::motion::{all_players, dist, BaseMotion, P2};
use crate::synthgen::script::{Contact, PeriodScript};

/// Apex of the flattest flight (m). No flight hugs the ground exactly, so
/// every contact is a strict minimum of ball height rather than part of a
/// flat run.
pub const MIN_APEX: f64 = 0.1;
const GRAVITY: f64 = 9.81;
/// Drag coefficient of a rolling or flying ball (1/s).
pub const DRAG: f64 = 0.3;
/// Keyframes closer than this are joined by straight-line motion (s).
pub const CLUSTER_GAP_S: f64 = 2.5;
/// Shortest blend between free movement and a keyframe (s).
pub const MIN_BLEND_S: f64 = 1.5;
/// Preferred speed when blending towards a distant keyframe (m/s).
pub const BLEND_SPEED: f64 = 5.0;
/// Average speed a player may need to reach a keyframe (m/s).
pub const MAX_PLAYER_SPEED: f64 = 9.0;

/// Noise-free positions of one period in normalized coordinates.
#[derive(Debug, Clone)]
pub struct RenderedPeriod {
    pub ball: Vec<[f64; 3]>,
    pub alive: Vec<bool>,
    pub players: BTreeMap<String, Vec<P2>>,
}

/// Distance travelled after `t` seconds by a ball launched at `v0` under
/// linear drag.
fn drag_distance(v0: f64, t: f64) -> f64 {
    v0 * (1.0 - (-DRAG * t).exp()) / DRAG
}

/// Launch speed that covers `d` meters in exactly `t` seconds.
pub fn launch_speed(d: f64, t: f64) -> f64 {
    d * DRAG / (1.0 - (-DRAG * t).exp())
}

fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

fn lerp(a: P2, b: P2, u: f64) -> P2 {
    [a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u]
}

fn dead_mask(p: &PeriodScript) -> Vec<bool> {
    let n = p.frames as usize;
    let mut dead = vec![false; n];
    for [a, b] in &p.dead {
        let hi = (*b as usize + 1).min(n);
        if let Some(range) = dead.get_mut(*a as usize..hi) {
            range.fill(true);
        }
    }
    dead
}

pub fn render_ball(p: &PeriodScript, fps: f64) -> (Vec<[f64; 3]>, Vec<bool>) {
    let n = p.frames as usize;
    let dead = dead_mask(p);
    let mut ball = vec![[0.0; 3]; n];
    let Some(first) = p.contacts.first() else {
        return (ball, dead.iter().map(|d| !d).collect());
    };
    ball[..=(first.frame as usize).min(n - 1)].fill([first.x, first.y, 0.0]);
    for pair in p.contacts.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let span = (a.frame as usize + 1)..(b.frame as usize).min(n);
        let dead_from = span.clone().find(|&f| dead[f]);
        match dead_from {
            Some(d0) => transport(&mut ball, a, b, d0 as u32, fps),
            None => flight(&mut ball, a, b, fps),
        }
        if (b.frame as usize) < n {
            ball[b.frame as usize] = [b.x, b.y, 0.0];
        }
    }
    let last = p.contacts.last().expect("non-empty");
    for b in ball.iter_mut().skip(last.frame as usize + 1) {
        *b = [last.x, last.y, 0.0];
    }
    (ball, dead.iter().map(|d| !d).collect())
}

fn flight(ball: &mut [[f64; 3]], a: &Contact, b: &Contact, fps: f64) {
    let total = (b.frame - a.frame) as f64 / fps;
    let (from, to) = ([a.x, a.y], [b.x, b.y]);
    let d = dist(from, to);
    let v0 = launch_speed(d, total);
    // No higher than a free ballistic arc of the same duration.
    let apex = a.loft.max(MIN_APEX).min(GRAVITY * total * total / 8.0);
    for f in (a.frame + 1)..b.frame.min(ball.len() as u32) {
        let t = (f - a.frame) as f64 / fps;
        let u = if d > 0.0 { drag_distance(v0, t) / d } else { 0.0 };
        let s = t / total;
        let xy = lerp(from, to, u);
        ball[f as usize] = [xy[0], xy[1], apex * 4.0 * s * (1.0 - s)];
    }
}

/// Dead-ball relocation: the ball rests, is carried to the restart spot and
/// rests again well before play resumes.
fn transport(ball: &mut [[f64; 3]], a: &Contact, b: &Contact, dead_from: u32, fps: f64) {
    let second = fps.round() as u32;
    let (mut m0, mut m1) = (dead_from + second, b.frame.saturating_sub(2 * second));
    if m1 <= m0 {
        m0 = dead_from;
        m1 = (dead_from + 1).max((dead_from + b.frame) / 2);
    }
    let (from, to) = ([a.x, a.y], [b.x, b.y]);
    for f in (a.frame + 1)..b.frame.min(ball.len() as u32) {
        let u = smoothstep((f as f64 - m0 as f64) / (m1 - m0) as f64);
        let xy = lerp(from, to, u);
        ball[f as usize] = [xy[0], xy[1], 0.0];
    }
}

#[derive(Debug, Clone, Copy)]
struct Key {
    frame: u32,
    pos: P2,
}

/// Keyframes of every player: contacts first, so a waypoint on the same
/// frame as a contact is ignored.
fn keyframes(p: &PeriodScript) -> BTreeMap<String, Vec<Key>> {
    let mut keys: BTreeMap<String, Vec<Key>> = BTreeMap::new();
    for c in &p.contacts {
        if let Some(pl) = &c.player {
            keys.entry(pl.clone()).or_default().push(Key {
                frame: c.frame,
                pos: [c.x, c.y],
            });
        }
    }
    for w in &p.waypoints {
        let list = keys.entry(w.player.clone()).or_default();
        if !list.iter().any(|k| k.frame == w.frame) {
            list.push(Key {
                frame: w.frame,
                pos: [w.x, w.y],
            });
        }
    }
    for list in keys.values_mut() {
        list.sort_by_key(|k| k.frame);
    }
    keys
}

fn describe(p: &PeriodScript, player: &str, frame: u32) -> String {
    p.events
        .iter()
        .find(|e| e.frame == frame && e.player == player)
        .or_else(|| p.events.iter().find(|e| e.frame >= frame))
        .map(|e| format!("event {}", e.event_id))
        .unwrap_or_else(|| format!("{player} at frame {frame}"))
}

struct Cluster {
    keys: Vec<Key>,
    blend_in: f64,
    blend_out: f64,
}

/// Renders one player. Within a cluster the player moves in straight lines
/// between keyframes; elsewhere the free movement is offset by smoothly
/// fading corrections towards the nearest clusters.
fn render_player(p: &PeriodScript, player: &str, keys: &[Key], base: &BaseMotion, fps: f64) -> Result<Vec<P2>> {
    let n = p.frames as usize;
    let at = |f: f64| base.at(player, f / fps);
    let gap = CLUSTER_GAP_S * fps;
    let mut clusters: Vec<Cluster> = Vec::new();
    for k in keys {
        match clusters.last_mut() {
            Some(c) if (k.frame - c.keys.last().expect("non-empty").frame) as f64 <= gap => c.keys.push(*k),
            _ => clusters.push(Cluster {
                keys: vec![*k],
                blend_in: 0.0,
                blend_out: 0.0,
            }),
        }
    }
    for c in &clusters {
        for w in c.keys.windows(2) {
            let speed = dist(w[0].pos, w[1].pos) / ((w[1].frame - w[0].frame) as f64 / fps);
            if speed > MAX_PLAYER_SPEED {
                return Err(Error::Generation(format!(
                    "{}: {player} needs {speed:.1} m/s to reach the ball",
                    describe(p, player, w[1].frame)
                )));
            }
        }
    }
    for i in 0..clusters.len() {
        let first = clusters[i].keys[0];
        let last = *clusters[i].keys.last().expect("non-empty");
        let room_before = match i {
            0 => first.frame as f64,
            _ => (first.frame - clusters[i - 1].keys.last().expect("non-empty").frame) as f64,
        };
        let room_after = match clusters.get(i + 1) {
            Some(next) => (next.keys[0].frame - last.frame) as f64,
            None => f64::INFINITY,
        };
        let want = |d: f64| (MIN_BLEND_S * fps).max(d / BLEND_SPEED * fps);
        let d_in = dist(first.pos, at(first.frame as f64));
        let d_out = dist(last.pos, at(last.frame as f64));
        // Half the room each way, so neighbouring blends never reach a
        // cluster interior.
        let blend_in = want(d_in).min(room_before / 2.0).max(1.0);
        let blend_out = want(d_out).min(room_after / 2.0).max(1.0);
        if first.frame > 0 && d_in / (blend_in / fps) > MAX_PLAYER_SPEED {
            return Err(Error::Generation(format!(
                "{}: {player} cannot reach the ball in time",
                describe(p, player, first.frame)
            )));
        }
        if d_out / (blend_out / fps) > MAX_PLAYER_SPEED && room_after.is_finite() {
            return Err(Error::Generation(format!(
                "{}: {player} cannot leave the ball in time",
                describe(p, player, last.frame)
            )));
        }
        clusters[i].blend_in = blend_in;
        clusters[i].blend_out = blend_out;
    }

    let mut out = Vec::with_capacity(n);
    let mut ci = 0;
    for f in 0..n {
        let ff = f as f64;
        while ci < clusters.len() && (clusters[ci].keys.last().expect("non-empty").frame as usize) < f {
            ci += 1;
        }
        if let Some(c) = clusters.get(ci) {
            let (k0, k1) = (
                c.keys[0].frame as usize,
                c.keys.last().expect("non-empty").frame as usize,
            );
            if (k0..=k1).contains(&f) {
                let j = c.keys.partition_point(|k| (k.frame as usize) <= f);
                let a = c.keys[j - 1];
                let pos = match c.keys.get(j) {
                    Some(b) => lerp(a.pos, b.pos, (ff - a.frame as f64) / (b.frame - a.frame) as f64),
                    None => a.pos,
                };
                out.push(pos);
                continue;
            }
        }
        let mut pos = at(ff);
        // Only the clusters on either side can have an active blend.
        for c in clusters
            .get(ci.saturating_sub(1)..(ci + 1).min(clusters.len()))
            .unwrap_or(&[])
        {
            let first = c.keys[0];
            let last = *c.keys.last().expect("non-empty");
            let (f0, f1) = (first.frame as f64, last.frame as f64);
            let w = if ff < f0 && ff >= f0 - c.blend_in {
                Some((smoothstep((ff - (f0 - c.blend_in)) / c.blend_in), first, f0))
            } else if ff > f1 && ff <= f1 + c.blend_out {
                Some((1.0 - smoothstep((ff - f1) / c.blend_out), last, f1))
            } else {
                None
            };
            if let Some((w, key, kf)) = w {
                let free = at(kf);
                pos[0] += w * (key.pos[0] - free[0]);
                pos[1] += w * (key.pos[1] - free[1]);
            }
        }
        out.push(pos);
    }
    Ok(out)
}

pub fn render_period(p: &PeriodScript, base: &BaseMotion, fps: f64) -> Result<RenderedPeriod> {
    let (ball, alive) = render_ball(p, fps);
    let keys = keyframes(p);
    let mut players = BTreeMap::new();
    for pl in all_players() {
        let k = keys.get(&pl).map(Vec::as_slice).unwrap_or(&[]);
        players.insert(pl.clone(), render_player(p, &pl, k, base, fps)?);
    }
    Ok(RenderedPeriod { ball, alive, players })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthgen::script::Waypoint;

    fn contact(frame: u32, x: f64, y: f64, player: Option<&str>) -> Contact {
        Contact {
            frame,
            x,
            y,
            player: player.map(str::to_string),
            loft: 0.0,
        }
    }

    fn period(contacts: Vec<Contact>, waypoints: Vec<Waypoint>, dead: Vec<[u32; 2]>) -> PeriodScript {
        PeriodScript {
            period: 1,
            frames: 400,
            kickoff_frame: 50,
            contacts,
            waypoints,
            dead,
            events: Vec::new(),
        }
    }

    #[test]
    fn drag_flight_arrives_on_time() {
        let v0 = launch_speed(20.0, 1.6);
        assert!((drag_distance(v0, 1.6) - 20.0).abs() < 1e-9);
        let p = period(
            vec![contact(50, 10.0, 10.0, Some("H2")), contact(90, 30.0, 10.0, Some("H3"))],
            vec![],
            vec![],
        );
        let (ball, alive) = render_ball(&p, 25.0);
        assert_eq!(ball[90], [30.0, 10.0, 0.0]);
        assert!(alive.iter().all(|a| *a));
        // Decelerating: the first half covers more than half the distance.
        assert!(ball[70][0] > 20.0);
    }

    #[test]
    fn dead_phase_moves_ball_to_restart_spot() {
        let p = period(
            vec![
                contact(50, 10.0, 10.0, Some("H2")),
                contact(80, 20.0, -0.5, None),
                contact(300, 25.0, 0.0, Some("A3")),
            ],
            vec![],
            vec![[81, 296]],
        );
        let (ball, alive) = render_ball(&p, 25.0);
        assert!(alive[80] && !alive[81] && alive[297]);
        assert_eq!(&ball[81][..2], &[20.0, -0.5]);
        assert_eq!(&ball[260][..2], &[25.0, 0.0]);
    }

    #[test]
    fn players_pass_through_keyframes() {
        let base = BaseMotion::new(1, 1);
        let [x, y] = base.at("H6", 4.0);
        let p = period(
            vec![
                contact(100, x, y, Some("H6")),
                contact(140, x + 1.0, y + 1.0, Some("H6")),
            ],
            vec![Waypoint {
                frame: 120,
                player: "H6".into(),
                x: x + 0.2,
                y: y + 0.2,
            }],
            vec![],
        );
        let r = render_period(&p, &base, 25.0).unwrap();
        let h6 = &r.players["H6"];
        assert_eq!(h6[100], [x, y]);
        assert_eq!(h6[120], [x + 0.2, y + 0.2]);
        assert_eq!(h6[140], [x + 1.0, y + 1.0]);
        for w in h6.windows(2) {
            assert!(dist(w[0], w[1]) * 25.0 < 12.0);
        }
    }

    #[test]
    fn unreachable_contact_is_an_error() {
        let base = BaseMotion::new(1, 1);
        let p = period(
            vec![
                contact(100, 10.0, 10.0, Some("H6")),
                contact(140, 60.0, 60.0, Some("H6")),
            ],
            vec![],
            vec![],
        );
        let err = render_period(&p, &base, 25.0).unwrap_err();
        assert!(err.to_string().contains("H6"), "{err}");
    }
}
