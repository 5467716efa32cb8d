//! Random but physically consistent match plans.
//!
//! The planner walks possession by possession and emits ball contacts,
//! player waypoints, dead phases and the annotated events they stand for.
//! Receivers are chosen near where they already are, so the rendered
//! players never need to sprint; the scenario shapes that make a frame
//! ambiguous for any synchronizer (a tackle right after a plain reception)
//! are avoided so the ground truth is well defined.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{EventType, Outcome, CENTER_MARK, PITCH_LENGTH, PITCH_WIDTH};
use crate::synthgen::motion::*;
use crate::synthgen::render::{launch_speed, BLEND_SPEED, CLUSTER_GAP_S, DRAG, MIN_BLEND_S};
use crate::synthgen::script::{
    Contact, LocationBias, NoiseModel, PeriodScript, PlannedEvent, ScenarioScript, Waypoint,
};

/// Knobs of one generated match.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanParams {
    pub name: String,
    pub seed: u64,
    pub fps: u32,
    pub events_per_period: usize,
    pub noise: NoiseModel,
    pub location_bias: LocationBias,
    /// Chance that a hold longer than 1.1 s is broken up by dribble touches.
    pub touch_rate: f64,
    /// Share of holds lasting 2 to 3 s instead of 0.6 to 1.9 s.
    pub long_hold_rate: f64,
    /// Multiplies the chance of every minor-event scenario.
    pub minor_weight: f64,
    /// Multiplies the chance of passes going out of play.
    pub out_weight: f64,
    /// Chance that a foul in the attacking quarter is given as a penalty
    /// even outside the box.
    pub penalty_rate: f64,
}

impl PlanParams {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        Self {
            name: name.into(),
            seed,
            fps: 25,
            events_per_period: 110,
            noise: NoiseModel::default(),
            location_bias: LocationBias::Contact,
            touch_rate: 0.3,
            long_hold_rate: 0.05,
            minor_weight: 1.0,
            out_weight: 1.0,
            penalty_rate: 0.0,
        }
    }
}

/// Plans both periods. Home kicks off the first period, away the second.
pub fn plan(params: &PlanParams) -> Result<ScenarioScript> {
    let mut periods = Vec::new();
    for (period, team) in [(1u8, HOME), (2u8, AWAY)] {
        let planner = Planner::new(params, period);
        periods.push(planner.run(team)?);
    }
    let script = ScenarioScript {
        name: params.name.clone(),
        seed: params.seed,
        fps: params.fps,
        noise: params.noise,
        location_bias: params.location_bias,
        periods,
    };
    script.check()?;
    Ok(script)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Via {
    Pass,
    Incoming,
    Keeper,
    Tackle,
}

/// The ball is at `player`'s feet at `frame`. `touched` tells whether that
/// contact is already planned; if not, the next action kicks right there.
#[derive(Debug, Clone)]
struct Poss {
    player: String,
    at: P2,
    frame: u32,
    via: Via,
    touched: bool,
}

#[derive(Debug, Clone)]
enum Next {
    Poss(Poss),
    Restart {
        kind: EventType,
        team: &'static str,
        spot: P2,
        dead_from: u32,
    },
}

struct Planner<'a> {
    params: &'a PlanParams,
    rng: ChaCha8Rng,
    fps: f64,
    period: u8,
    base: BaseMotion,
    contacts: Vec<Contact>,
    waypoints: Vec<Waypoint>,
    dead: Vec<[u32; 2]>,
    events: Vec<PlannedEvent>,
    last_key: BTreeMap<String, (u32, P2)>,
    last_receive: BTreeMap<String, P2>,
    /// Pass-like event still waiting for its receive.
    pending: Option<usize>,
    recent: VecDeque<String>,
}

impl<'a> Planner<'a> {
    fn new(params: &'a PlanParams, period: u8) -> Self {
        Self {
            params,
            rng: ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(31).wrapping_add(period as u64)),
            fps: params.fps as f64,
            period,
            base: BaseMotion::new(params.seed, period),
            contacts: Vec::new(),
            waypoints: Vec::new(),
            dead: Vec::new(),
            events: Vec::new(),
            last_key: BTreeMap::new(),
            last_receive: BTreeMap::new(),
            pending: None,
            recent: VecDeque::new(),
        }
    }

    fn fr(&self, s: f64) -> u32 {
        (s * self.fps).round().max(0.0) as u32
    }

    /// Minimum spacing between consecutive contacts.
    fn min_sep(&self) -> u32 {
        self.fr(0.4)
    }

    fn roll(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            lo
        } else {
            self.rng.random_range(lo..hi)
        }
    }

    fn offset(&mut self, r: f64) -> P2 {
        [self.uniform(-r, r), self.uniform(-r, r)]
    }

    fn free(&self, player: &str, frame: u32) -> P2 {
        self.base.at(player, frame as f64 / self.fps)
    }

    /// Where `player` will roughly be at `frame` given the plan so far.
    fn expected(&self, player: &str, frame: u32) -> P2 {
        match self.last_key.get(player) {
            Some(&(kf, kp)) if frame >= kf && (frame - kf) as f64 <= CLUSTER_GAP_S * self.fps => kp,
            _ => self.free(player, frame),
        }
    }

    /// Whether `player` can be at `pt` at `frame` without sprinting, given
    /// how the renderer joins keyframes.
    fn can_reach(&self, player: &str, frame: u32, pt: P2) -> bool {
        const LIMIT: f64 = 8.0;
        let fps = self.fps;
        let want = |d: f64| (MIN_BLEND_S * fps).max(d / BLEND_SPEED * fps);
        let d_in = dist(self.free(player, frame), pt);
        match self.last_key.get(player) {
            None => {
                let blend = want(d_in).min(frame as f64 / 2.0).max(1.0);
                d_in / (blend / fps) <= LIMIT
            }
            Some(&(kf, _)) if frame < kf + self.min_sep() => false,
            Some(&(kf, kp)) if (frame - kf) as f64 <= CLUSTER_GAP_S * fps => {
                dist(kp, pt) / ((frame - kf) as f64 / fps) <= LIMIT
            }
            Some(&(kf, kp)) => {
                let room = (frame - kf) as f64 / 2.0;
                let d_out = dist(kp, self.free(player, kf));
                let out = want(d_out).min(room);
                let inn = want(d_in).min(room);
                d_out / (out / fps) <= LIMIT && d_in / (inn / fps) <= LIMIT
            }
        }
    }

    fn key(&mut self, player: &str, frame: u32, pos: P2, contact: bool) {
        self.last_key.insert(player.to_string(), (frame, pos));
        if !contact {
            self.waypoints.push(Waypoint {
                frame,
                player: player.to_string(),
                x: pos[0],
                y: pos[1],
            });
        }
    }

    fn touch(&mut self, frame: u32, pos: P2, player: Option<&str>, loft: f64) {
        debug_assert!(self.contacts.last().is_none_or(|c| c.frame < frame));
        self.contacts.push(Contact {
            frame,
            x: pos[0],
            y: pos[1],
            player: player.map(str::to_string),
            loft,
        });
        if let Some(p) = player {
            self.key(p, frame, pos, true);
        }
    }

    fn event(&mut self, frame: u32, ty: EventType, player: &str, outcome: Outcome, at: P2) -> usize {
        let location = match self.params.location_bias {
            LocationBias::PreviousReceive if ty.category().is_pass_like() => {
                self.last_receive.get(player).copied().unwrap_or(at)
            }
            _ => at,
        };
        let n = self.events.len();
        self.events.push(PlannedEvent {
            event_id: format!("{}-p{}-{:04}", self.params.name, self.period, n),
            frame,
            event_type: ty,
            player: player.to_string(),
            team: team_of(player).to_string(),
            outcome,
            end_frame: None,
            receiver: None,
            location: Some(location),
        });
        if ty.category().is_pass_like() {
            self.pending = Some(n);
            self.recent.push_back(player.to_string());
            while self.recent.len() > 2 {
                self.recent.pop_front();
            }
        }
        n
    }

    fn close(&mut self, frame: u32, receiver: &str) {
        if let Some(i) = self.pending.take() {
            self.events[i].end_frame = Some(frame);
            self.events[i].receiver = Some(receiver.to_string());
        }
        if receiver != "OUT" && receiver != "GOAL" {
            if let Some(c) = self.contacts.last() {
                self.last_receive.insert(receiver.to_string(), [c.x, c.y]);
            }
        }
    }

    /// True if a player outside `except` is expected within `radius` of `pt`.
    fn crowded(&self, pt: P2, frame: u32, except: &[&str], radius: f64) -> bool {
        all_players()
            .iter()
            .filter(|p| !except.contains(&p.as_str()))
            .any(|p| dist(self.expected(p, frame), pt) < radius)
    }

    /// Arrival frame of a ball covering `d` at about `speed` on average.
    /// Long slow balls are sped up so they still arrive at a decent pace,
    /// which makes every reception a clear change of ball velocity.
    fn arrival(&self, from: u32, d: f64, speed: f64) -> u32 {
        const MIN_ARRIVAL_SPEED: f64 = 7.0;
        let mut frames = self.fr(d / speed).max(self.min_sep());
        while frames > self.min_sep() {
            let t = frames as f64 / self.fps;
            if launch_speed(d, t) * (-DRAG * t).exp() >= MIN_ARRIVAL_SPEED {
                break;
            }
            frames -= 1;
        }
        from + frames
    }

    fn pick(&mut self, options: Vec<(String, f64)>) -> Option<String> {
        let total: f64 = options.iter().map(|(_, w)| w).sum();
        if options.is_empty() || total <= 0.0 {
            return None;
        }
        let mut r = self.uniform(0.0, total);
        for (p, w) in &options {
            if r < *w {
                return Some(p.clone());
            }
            r -= w;
        }
        options.last().map(|(p, _)| p.clone())
    }

    fn sample_hold(&mut self) -> f64 {
        if self.roll() < self.params.long_hold_rate {
            self.uniform(2.0, 3.0)
        } else {
            self.uniform(0.6, 1.9)
        }
    }

    fn forward_dir(&mut self, team: &str, at: P2) -> P2 {
        let angle = self.uniform(-0.9, 0.9);
        let mut d = [attack_sign(team) * angle.cos(), angle.sin()];
        if (at[1] < 10.0 && d[1] < 0.0) || (at[1] > PITCH_WIDTH - 10.0 && d[1] > 0.0) {
            d[1] = -d[1];
        }
        d
    }

    /// Dribble from `from` for `hold_s`; returns where and when the ball is
    /// next played. Touches along the way are planned as contacts and the
    /// player trails the ball between them.
    fn carry(&mut self, player: &str, from: P2, f0: u32, hold_s: f64, speed: f64) -> (P2, u32) {
        let team = team_of(player);
        let dir = self.forward_dir(team, from);
        let g = f0 + self.fr(hold_s).max(self.min_sep());
        let secs = (g - f0) as f64 / self.fps;
        let end = clamp_to_pitch(add(from, scale(dir, speed * secs)), 3.0);
        let touches = if secs > 1.1 && self.roll() < self.params.touch_rate {
            ((secs / 0.55).floor() as u32).saturating_sub(1).max(1)
        } else {
            0
        };
        let mut marks = vec![(f0, from)];
        for i in 1..=touches {
            let u = i as f64 / (touches + 1) as f64;
            let f = f0 + ((g - f0) as f64 * u).round() as u32;
            let pos = [from[0] + (end[0] - from[0]) * u, from[1] + (end[1] - from[1]) * u];
            marks.push((f, pos));
        }
        marks.push((g, end));
        for (i, w) in marks.windows(2).enumerate() {
            let ((fa, pa), (fb, pb)) = (w[0], w[1]);
            if i > 0 {
                self.touch(fa, pa, Some(player), 0.0);
            }
            if fb - fa >= self.fr(0.3) {
                let half_s = (fb - fa) as f64 / self.fps / 2.0;
                let lag = self.uniform(0.4, 0.8).min(2.0 * half_s);
                let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                let pos = clamp_to_pitch(sub(mid, scale(unit(sub(pb, pa)), lag)), 0.5);
                self.key(player, (fa + fb) / 2, pos, false);
            }
        }
        (end, g)
    }

    /// Plans the ball from `at` (kicked by `kicker` at `frame`) to `pt`,
    /// touched by `receiver` on arrival. Returns the arrival frame.
    #[allow(clippy::too_many_arguments)]
    fn deliver(
        &mut self,
        ty: EventType,
        kicker: &str,
        at: P2,
        frame: u32,
        outcome: Outcome,
        receiver: Option<&str>,
        pt: P2,
        arrive: u32,
        loft: f64,
    ) -> u32 {
        self.touch(frame, at, Some(kicker), loft);
        self.event(frame, ty, kicker, outcome, at);
        self.touch(arrive, pt, receiver, 0.0);
        arrive
    }

    /// Candidate reception spot for `q`: near its expected position, clear of
    /// everybody else.
    /// `run` shifts the spot, for a receiver making a run into space.
    fn reception(&mut self, q: &str, kicker: &str, at: P2, frame: u32, speed: f64, run: P2) -> Option<(P2, u32)> {
        let guess = self.arrival(frame, dist(at, self.expected(q, frame + self.fr(1.0))), speed);
        let off = add(self.offset(0.8), run);
        let pt = clamp_to_pitch(add(self.expected(q, guess), off), 1.0);
        let arrive = self.arrival(frame, dist(at, pt), speed);
        if !self.can_reach(q, arrive, pt) || self.crowded(pt, arrive, &[q, kicker], 3.0) {
            return None;
        }
        Some((pt, arrive))
    }

    #[allow(clippy::too_many_arguments)]
    fn choose_receiver(
        &mut self,
        pool: Vec<String>,
        kicker: &str,
        at: P2,
        frame: u32,
        range: (f64, f64),
        speed: f64,
        forward_team: Option<&str>,
    ) -> Option<(String, P2, u32)> {
        let mut options = Vec::new();
        for q in pool {
            if q == kicker || self.recent.contains(&q) {
                continue;
            }
            let d = dist(at, self.expected(&q, frame + self.fr(1.0)));
            if d < range.0 || d > range.1 {
                continue;
            }
            let w = match forward_team {
                Some(t) => 1.0 + ((progress(t, self.expected(&q, frame)) - progress(t, at)) / 8.0).max(0.0),
                None => 1.0,
            };
            options.push((q, w));
        }
        for _ in 0..4 {
            let q = self.pick(options.clone())?;
            if let Some(t) = forward_team {
                if progress(t, self.expected(&q, frame)) > 45.0 {
                    let run = [attack_sign(t) * self.uniform(4.0, 16.0), 0.0];
                    if let Some((pt, arrive)) = self
                        .reception(&q, kicker, at, frame, speed, run)
                        .filter(|r| dist(at, r.0) >= range.0)
                    {
                        return Some((q, pt, arrive));
                    }
                }
            }
            if let Some((pt, arrive)) = self
                .reception(&q, kicker, at, frame, speed, [0.0, 0.0])
                .filter(|r| dist(at, r.0) >= range.0)
            {
                return Some((q, pt, arrive));
            }
            options.retain(|(p, _)| *p != q);
        }
        None
    }

    fn outfield(&self, team: &str) -> Vec<String> {
        squad(team).into_iter().filter(|p| !is_keeper(p)).collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn pass_success(
        &mut self,
        ty: EventType,
        kicker: &str,
        at: P2,
        frame: u32,
        range: (f64, f64),
        speed: (f64, f64),
        loft: f64,
    ) -> Option<Next> {
        let team = team_of(kicker);
        let v = self.uniform(speed.0, speed.1);
        let (q, pt, arrive) = self.choose_receiver(self.outfield(team), kicker, at, frame, range, v, Some(team))?;
        self.deliver(ty, kicker, at, frame, Outcome::Success, Some(&q), pt, arrive, loft);
        self.close(arrive, &q);
        Some(Next::Poss(Poss {
            player: q,
            at: pt,
            frame: arrive,
            via: Via::Pass,
            touched: true,
        }))
    }

    #[allow(clippy::too_many_arguments)]
    fn pass_to_opponent(
        &mut self,
        ty: EventType,
        kicker: &str,
        at: P2,
        frame: u32,
        kind: EventType,
        range: (f64, f64),
        loft: f64,
    ) -> Option<Next> {
        let team = team_of(kicker);
        let v = self.uniform(9.0, 15.0);
        let (z, pt, arrive) = self.choose_receiver(self.outfield(opponent(team)), kicker, at, frame, range, v, None)?;
        self.deliver(ty, kicker, at, frame, Outcome::Failure, Some(&z), pt, arrive, loft);
        self.close(arrive, &z);
        self.event(arrive, kind, &z, Outcome::Success, pt);
        Some(Next::Poss(Poss {
            player: z,
            at: pt,
            frame: arrive,
            via: Via::Incoming,
            touched: true,
        }))
    }

    fn pass_out(&mut self, ty: EventType, kicker: &str, at: P2, frame: u32, loft: f64) -> Next {
        let team = team_of(kicker);
        let side = if at[1] < PITCH_WIDTH / 2.0 {
            -0.5
        } else {
            PITCH_WIDTH + 0.5
        };
        let mut x = (at[0] + attack_sign(team) * self.uniform(-5.0, 15.0)).clamp(3.0, PITCH_LENGTH - 3.0);
        if (at[1] - side).abs() < 8.0 {
            x = (at[0] + attack_sign(team) * self.uniform(8.0, 20.0)).clamp(3.0, PITCH_LENGTH - 3.0);
        }
        let pt = [x, side];
        let speed = self.uniform(9.0, 13.0);
        let out = self.arrival(frame, dist(at, pt), speed);
        self.deliver(ty, kicker, at, frame, Outcome::Failure, None, pt, out, loft);
        self.close(out, "OUT");
        Next::Restart {
            kind: EventType::ThrowIn,
            team: opponent(team),
            spot: [x, side.clamp(0.0, PITCH_WIDTH)],
            dead_from: out + 1,
        }
    }

    /// Open-play or set-piece pass with the usual outcome mix.
    fn pass(&mut self, ty: EventType, kicker: &str, at: P2, frame: u32, range: (f64, f64), loft: f64) -> Next {
        let r = self.roll();
        let out_share = 0.06 * self.params.out_weight;
        if r < 1.0 - 0.05 - out_share {
            if let Some(n) = self.pass_success(ty, kicker, at, frame, range, (9.0, 15.0), loft) {
                return n;
            }
        } else if r < 1.0 - out_share {
            let kind = if r < 1.0 - out_share - 0.02 {
                EventType::Interception
            } else {
                EventType::BallRecovery
            };
            if let Some(n) = self.pass_to_opponent(ty, kicker, at, frame, kind, (6.0, 25.0), loft) {
                return n;
            }
        } else {
            return self.pass_out(ty, kicker, at, frame, loft);
        }
        self.pass_success(ty, kicker, at, frame, (5.0, 40.0), (9.0, 15.0), loft)
            .or_else(|| self.pass_to_opponent(ty, kicker, at, frame, EventType::BallRecovery, (4.0, 40.0), loft))
            .unwrap_or_else(|| self.pass_out(ty, kicker, at, frame, loft))
    }

    fn shot(&mut self, ty: EventType, shooter: &str, at: P2, frame: u32) -> Next {
        let team = team_of(shooter);
        let def = opponent(team);
        let gx = target_goal_x(team);
        let sign = attack_sign(team);
        let r = self.roll();
        let (p_goal, p_save, p_block) = match ty {
            EventType::PenaltyShot => (0.75, 0.15, 0.0),
            _ => (0.22, 0.35, 0.2),
        };
        if r < p_goal {
            let pt = [gx + sign * 0.5, CENTER_MARK.1 + self.uniform(-3.0, 3.0)];
            let speed = self.uniform(18.0, 26.0);
            let o = self.arrival(frame, dist(at, pt), speed);
            self.deliver(ty, shooter, at, frame, Outcome::Success, None, pt, o, 0.8);
            self.close(o, "GOAL");
            return Next::Restart {
                kind: EventType::Pass,
                team: def,
                spot: [CENTER_MARK.0, CENTER_MARK.1],
                dead_from: o + 1,
            };
        }
        if r < p_goal + p_save {
            let k = keeper(def);
            let speed = self.uniform(16.0, 24.0);
            let guess = self.arrival(frame, dist(at, self.expected(&k, frame)), speed);
            let off = self.offset(1.2);
            let pt = add(self.expected(&k, guess), off);
            let arrive = self.arrival(frame, dist(at, pt), speed);
            if self.can_reach(&k, arrive, pt) {
                self.deliver(ty, shooter, at, frame, Outcome::Failure, Some(&k), pt, arrive, 0.6);
                self.close(arrive, &k);
                self.event(arrive, EventType::KeeperSave, &k, Outcome::Success, pt);
                if ty != EventType::PenaltyShot && self.roll() < 0.3 {
                    // Parried behind for a corner.
                    let y = if pt[1] < CENTER_MARK.1 {
                        self.uniform(10.0, 22.0)
                    } else {
                        self.uniform(46.0, 58.0)
                    };
                    let out = [gx + sign * 0.5, y];
                    let speed = self.uniform(8.0, 12.0);
                    let o = self.arrival(arrive, dist(pt, out), speed);
                    if let Some(c) = self.contacts.last_mut() {
                        c.loft = 1.0;
                    }
                    self.touch(o, out, None, 0.0);
                    let kind = if self.roll() < 0.5 {
                        EventType::CornerCrossed
                    } else {
                        EventType::CornerShort
                    };
                    return Next::Restart {
                        kind,
                        team,
                        spot: [gx, if y < CENTER_MARK.1 { 0.0 } else { PITCH_WIDTH }],
                        dead_from: o + 1,
                    };
                }
                return Next::Poss(Poss {
                    player: k,
                    at: pt,
                    frame: arrive,
                    via: Via::Keeper,
                    touched: true,
                });
            }
        } else if r < p_goal + p_save + p_block {
            if let Some(n) = self.blocked_shot(ty, shooter, at, frame) {
                return n;
            }
        }
        // Wide: over the goal line, goal kick.
        let side = if self.roll() < 0.5 { -1.0 } else { 1.0 };
        let pt = [gx + sign * 0.5, CENTER_MARK.1 + side * self.uniform(5.0, 14.0)];
        let speed = self.uniform(18.0, 26.0);
        let o = self.arrival(frame, dist(at, pt), speed);
        self.deliver(ty, shooter, at, frame, Outcome::Failure, None, pt, o, 1.5);
        self.close(o, "OUT");
        Next::Restart {
            kind: EventType::GoalKick,
            team: def,
            spot: [gx - sign * 5.5, CENTER_MARK.1 + self.uniform(-4.0, 4.0)],
            dead_from: o + 1,
        }
    }

    fn blocked_shot(&mut self, ty: EventType, shooter: &str, at: P2, frame: u32) -> Option<Next> {
        let team = team_of(shooter);
        let def = opponent(team);
        let toward = unit(sub([target_goal_x(team), CENTER_MARK.1], at));
        let bp = add(at, scale(toward, self.uniform(5.0, 8.0)));
        let arrive = frame + self.min_sep();
        let blocker = self
            .outfield(def)
            .into_iter()
            .filter(|p| self.can_reach(p, arrive, bp) && dist(self.expected(p, arrive), bp) < 7.0)
            .min_by(|a, b| dist(self.expected(a, arrive), bp).total_cmp(&dist(self.expected(b, arrive), bp)))?;
        self.deliver(
            ty,
            shooter,
            at,
            frame,
            Outcome::Failure,
            Some(&blocker),
            bp,
            arrive,
            0.5,
        );
        self.close(arrive, &blocker);
        let block = self.event(arrive, EventType::ShotBlock, &blocker, Outcome::Failure, bp);
        if self.roll() < 0.6 {
            let speed = self.uniform(8.0, 13.0);
            let pool: Vec<String> = all_players().into_iter().filter(|p| !is_keeper(p)).collect();
            if let Some((z, pt, r)) = self.choose_receiver(pool, &blocker, bp, arrive, (6.0, 18.0), speed, None) {
                self.touch(r, pt, Some(&z), 0.0);
                self.close(r, &z);
                if team_of(&z) == def {
                    self.events[block].outcome = Outcome::Success;
                }
                self.event(r, EventType::BallRecovery, &z, Outcome::Success, pt);
                return Some(Next::Poss(Poss {
                    player: z,
                    at: pt,
                    frame: r,
                    via: Via::Incoming,
                    touched: true,
                }));
            }
        }
        // Deflected over the defenders' own goal line: corner.
        let gx = target_goal_x(team);
        let y = if bp[1] < CENTER_MARK.1 {
            self.uniform(8.0, 20.0)
        } else {
            self.uniform(48.0, 60.0)
        };
        let pt = [gx + attack_sign(team) * 0.5, y];
        let speed = self.uniform(8.0, 12.0);
        let o = self.arrival(arrive, dist(bp, pt), speed);
        self.touch(o, pt, None, 0.0);
        self.close(o, "OUT");
        let kind = if self.roll() < 0.6 {
            EventType::CornerCrossed
        } else {
            EventType::CornerShort
        };
        Some(Next::Restart {
            kind,
            team,
            spot: [gx, if y < CENTER_MARK.1 { 0.0 } else { PITCH_WIDTH }],
            dead_from: o + 1,
        })
    }

    /// Lofted ball into the box from a wide position or a set-piece.
    fn cross(&mut self, ty: EventType, crosser: &str, at: P2, frame: u32) -> Next {
        let team = team_of(crosser);
        let def = opponent(team);
        let gx = target_goal_x(team);
        let sign = attack_sign(team);
        let target = [
            gx - sign * self.uniform(5.0, 12.0),
            CENTER_MARK.1 + self.uniform(-8.0, 8.0),
        ];
        let speed = self.uniform(14.0, 18.0);
        let loft = self.uniform(4.0, 7.0);
        let r = self.roll();
        let near_target = |s: &Self, p: &String, f: u32| dist(s.expected(p, f), target) < 12.0;
        if r < 0.35 {
            let f1 = frame + self.fr(1.0);
            let pool: Vec<String> = self
                .outfield(team)
                .into_iter()
                .filter(|p| near_target(self, p, f1))
                .collect();
            if let Some((q, pt, arrive)) = self.choose_receiver(pool, crosser, at, frame, (5.0, 60.0), speed, None) {
                self.deliver(ty, crosser, at, frame, Outcome::Success, Some(&q), pt, arrive, loft);
                self.close(arrive, &q);
                return Next::Poss(Poss {
                    player: q,
                    at: pt,
                    frame: arrive,
                    via: Via::Pass,
                    touched: true,
                });
            }
        } else if r < 0.6 {
            let f1 = frame + self.fr(1.0);
            let pool: Vec<String> = self
                .outfield(def)
                .into_iter()
                .filter(|p| near_target(self, p, f1))
                .collect();
            if let Some((d, pt, arrive)) = self.choose_receiver(pool, crosser, at, frame, (5.0, 60.0), speed, None) {
                // Headed clear first time: the reception is the clearance.
                self.deliver(ty, crosser, at, frame, Outcome::Failure, Some(&d), pt, arrive, loft);
                self.close(arrive, &d);
                self.contacts.pop();
                if self.roll() < 0.35 {
                    return self.clear_for_corner(&d, pt, arrive);
                }
                return self.clearance(&d, pt, arrive);
            }
        }
        let k = keeper(def);
        let off = self.offset(1.5);
        let kp = clamp_to_pitch(
            add(
                self.expected(&k, frame),
                add([-sign * self.uniform(1.0, 4.0), 0.0], off),
            ),
            0.5,
        );
        let arrive = self.arrival(frame, dist(at, kp), speed);
        if !self.can_reach(&k, arrive, kp) {
            return self.pass(ty, crosser, at, frame, (5.0, 30.0), 0.0);
        }
        self.deliver(ty, crosser, at, frame, Outcome::Failure, Some(&k), kp, arrive, loft);
        self.close(arrive, &k);
        if self.roll() < 0.6 {
            self.event(arrive, EventType::KeeperClaim, &k, Outcome::Success, kp);
            return Next::Poss(Poss {
                player: k,
                at: kp,
                frame: arrive,
                via: Via::Keeper,
                touched: true,
            });
        }
        // Punched away first time.
        self.contacts.pop();
        self.last_key.remove(&k);
        let punch_from = kp;
        self.punch(&k, punch_from, arrive)
    }

    /// Defender's clearance deflected over the own goal line.
    fn clear_for_corner(&mut self, defender: &str, at: P2, frame: u32) -> Next {
        let att = opponent(team_of(defender));
        let gx = target_goal_x(att);
        let y = if at[1] < CENTER_MARK.1 {
            self.uniform(5.0, 20.0)
        } else {
            self.uniform(48.0, 63.0)
        };
        let pt = [gx + attack_sign(att) * 0.5, y];
        let speed = self.uniform(10.0, 15.0);
        let o = self.arrival(frame, dist(at, pt), speed);
        self.deliver(
            EventType::Clearance,
            defender,
            at,
            frame,
            Outcome::Failure,
            None,
            pt,
            o,
            1.0,
        );
        self.close(o, "OUT");
        let kind = if self.roll() < 0.5 {
            EventType::CornerCrossed
        } else {
            EventType::CornerShort
        };
        Next::Restart {
            kind,
            team: att,
            spot: [gx, if y < CENTER_MARK.1 { 0.0 } else { PITCH_WIDTH }],
            dead_from: o + 1,
        }
    }

    fn punch(&mut self, k: &str, at: P2, frame: u32) -> Next {
        let speed = self.uniform(10.0, 15.0);
        let pool: Vec<String> = all_players().into_iter().filter(|p| !is_keeper(p)).collect();
        let r = self.roll();
        if r < 0.8 {
            if let Some((z, pt, arrive)) = self.choose_receiver(pool, k, at, frame, (12.0, 30.0), speed, None) {
                let ok = team_of(&z) == team_of(k);
                let outcome = if ok { Outcome::Success } else { Outcome::Failure };
                self.deliver(EventType::KeeperPunch, k, at, frame, outcome, Some(&z), pt, arrive, 3.0);
                self.close(arrive, &z);
                self.event(arrive, EventType::BallRecovery, &z, Outcome::Success, pt);
                return Next::Poss(Poss {
                    player: z,
                    at: pt,
                    frame: arrive,
                    via: Via::Incoming,
                    touched: true,
                });
            }
        }
        self.pass_out(EventType::KeeperPunch, k, at, frame, 3.0)
    }

    fn clearance(&mut self, player: &str, at: P2, frame: u32) -> Next {
        let loft = self.uniform(6.0, 10.0);
        let r = self.roll();
        if r < 0.25 {
            if let Some(n) = self.pass_success(
                EventType::Clearance,
                player,
                at,
                frame,
                (20.0, 45.0),
                (16.0, 22.0),
                loft,
            ) {
                return n;
            }
        } else if r < 0.75 {
            if let Some(n) = self.pass_to_opponent(
                EventType::Clearance,
                player,
                at,
                frame,
                EventType::BallRecovery,
                (20.0, 45.0),
                loft,
            ) {
                return n;
            }
        }
        self.pass_out(EventType::Clearance, player, at, frame, loft)
    }

    fn keeper_distribution(&mut self, poss: &Poss) -> Next {
        let hold = self.uniform(1.0, 1.8);
        let (at, g) = self.carry(&poss.player, poss.at, poss.frame, hold, 0.8);
        let loft = if self.roll() < 0.5 { self.uniform(3.0, 8.0) } else { 0.0 };
        self.pass_success(EventType::Pass, &poss.player, at, g, (12.0, 40.0), (12.0, 18.0), loft)
            .unwrap_or_else(|| self.pass(EventType::Pass, &poss.player, at, g, (5.0, 45.0), loft))
    }

    /// Shot, cross, clearance or pass from where the ball is played.
    fn kick(&mut self, player: &str, at: P2, frame: u32) -> Next {
        let team = team_of(player);
        let prog = progress(team, at);
        let central = (at[1] - CENTER_MARK.1).abs() < 18.0;
        let wide = at[1] < 16.0 || at[1] > PITCH_WIDTH - 16.0;
        let defender = (2..=5).contains(&shirt(player));
        let r = self.roll();
        if prog > 82.0 && central && r < 0.55 {
            self.shot(EventType::Shot, player, at, frame)
        } else if prog > 72.0 && wide && r < 0.5 {
            self.cross(EventType::Cross, player, at, frame)
        } else if defender && prog < 30.0 && r < 0.2 {
            self.clearance(player, at, frame)
        } else {
            self.pass(EventType::Pass, player, at, frame, (8.0, 30.0), 0.0)
        }
    }

    fn normal(&mut self, poss: &Poss) -> Next {
        let hold = self.sample_hold();
        let speed = self.uniform(1.5, 4.0);
        let (at, g) = self.carry(&poss.player, poss.at, poss.frame, hold, speed);
        self.kick(&poss.player, at, g)
    }

    fn play(&mut self, poss: Poss) -> Next {
        if !poss.touched {
            return self.kick(&poss.player, poss.at, poss.frame);
        }
        let outfield = !is_keeper(&poss.player);
        let team = team_of(&poss.player);
        let prog = progress(team, poss.at);
        let w = self.params.minor_weight;
        match poss.via {
            Via::Keeper => self.keeper_distribution(&poss),
            Via::Pass if outfield => {
                let r = self.roll();
                if r < 0.02 * w {
                    if let Some(n) = self.bad_touch_on_reception(&poss) {
                        return n;
                    }
                } else if r < 0.28 * w && (25.0..90.0).contains(&prog) {
                    if let Some(n) = self.take_on(&poss) {
                        return n;
                    }
                } else if r > 0.95 && (2..=5).contains(&shirt(&poss.player)) && prog < 35.0 {
                    if let Some(n) = self.back_pass(&poss) {
                        return n;
                    }
                } else if r > 0.98 && (55.0..78.0).contains(&prog) {
                    if let Some(n) = self.through_ball(&poss) {
                        return n;
                    }
                }
                self.normal(&poss)
            }
            Via::Incoming if outfield && self.roll() < (0.8 * w).min(1.0) => self.minor_chain(&poss),
            _ => self.normal(&poss),
        }
    }

    fn bad_touch_on_reception(&mut self, poss: &Poss) -> Option<Next> {
        let y = &poss.player;
        let speed = self.uniform(6.0, 10.0);
        let pool = self.outfield(opponent(team_of(y)));
        // The pass counts as completed, so its receive is searched among the
        // passer's team: keep them all well clear of where the ball ends up.
        let mates = squad(team_of(y));
        // Incoming direction of the pass, from the contact before the reception.
        let incoming = self
            .contacts
            .iter()
            .rev()
            .find(|c| c.frame < poss.frame)
            .map(|c| unit(sub(poss.at, [c.x, c.y])));
        let mut found = None;
        for _ in 0..3 {
            let Some((z, pt, r)) = self.choose_receiver(pool.clone(), y, poss.at, poss.frame, (5.0, 12.0), speed, None)
            else {
                break;
            };
            let clear = mates
                .iter()
                .all(|m| dist(self.expected(m, r), pt) > 5.0 && dist(self.free(m, r), pt) > 5.0);
            // A glancing deflection hides the contact in the tracking data.
            let out = unit(sub(pt, poss.at));
            let turned = incoming.is_none_or(|i| i[0] * out[0] + i[1] * out[1] < 0.5);
            if clear && turned {
                found = Some((z, pt, r));
                break;
            }
        }
        let (z, pt, r) = found?;
        self.event(poss.frame, EventType::BadTouch, y, Outcome::Failure, poss.at);
        self.touch(r, pt, Some(&z), 0.0);
        self.event(r, EventType::BallRecovery, &z, Outcome::Success, pt);
        Some(Next::Poss(Poss {
            player: z,
            at: pt,
            frame: r,
            via: Via::Incoming,
            touched: true,
        }))
    }

    /// Beat a defender standing just ahead, then accelerate and play on.
    fn take_on(&mut self, poss: &Poss) -> Option<Next> {
        let x = poss.player.clone();
        let team = team_of(&x);
        let sign = attack_sign(team);
        let h1 = self.uniform(0.6, 0.9);
        let t = poss.frame + self.fr(h1);
        let dir = [sign, 0.0];
        let q = clamp_to_pitch(add(poss.at, scale(dir, 1.5 * h1)), 3.0);
        let ahead = add(q, scale(dir, 1.0));
        let d = self
            .outfield(opponent(team))
            .into_iter()
            .filter(|p| {
                self.can_reach(p, t, ahead)
                    && self.can_reach(p, t + self.fr(0.6), ahead)
                    && dist(self.expected(p, t), ahead) < 7.0
            })
            .min_by(|a, b| dist(self.expected(a, t), ahead).total_cmp(&dist(self.expected(b, t), ahead)))?;
        let h2 = self.uniform(1.2, 1.5);
        let burst = 6.5;
        let m = t + self.fr(h2 / 2.0);
        let s = t + self.fr(h2);
        let mid_pt = clamp_to_pitch(add(q, scale(dir, burst * h2 / 2.0)), 3.0);
        let end = clamp_to_pitch(add(q, scale(dir, burst * h2)), 3.0);
        if s <= m || m <= t {
            return None;
        }
        // Slow approach, lagging behind the ball.
        let lag = self.uniform(0.3, 0.5);
        self.key(
            &x,
            (poss.frame + t) / 2,
            sub([(poss.at[0] + q[0]) / 2.0, (poss.at[1] + q[1]) / 2.0], scale(dir, lag)),
            false,
        );
        let side = if self.roll() < 0.5 { 1.0 } else { -1.0 };
        self.key(&d, t, add(add(q, scale(dir, 0.9)), [0.0, 0.4 * side]), false);
        self.touch(t, q, Some(&x), 0.0);
        self.event(t, EventType::TakeOn, &x, Outcome::Success, q);
        // The defender turns but is left behind.
        self.key(
            &d,
            t + self.fr(0.6),
            add(add(q, scale(dir, 1.5)), [0.0, 0.6 * side]),
            false,
        );
        let lag2 = self.uniform(0.15, 0.3);
        self.key(
            &x,
            (t + m) / 2,
            sub([(q[0] + mid_pt[0]) / 2.0, (q[1] + mid_pt[1]) / 2.0], scale(dir, lag2)),
            false,
        );
        self.touch(m, mid_pt, Some(&x), 0.0);
        self.key(
            &x,
            (m + s) / 2,
            sub(
                [(mid_pt[0] + end[0]) / 2.0, (mid_pt[1] + end[1]) / 2.0],
                scale(dir, lag2),
            ),
            false,
        );
        Some(Next::Poss(Poss {
            player: x,
            at: end,
            frame: s,
            via: Via::Pass,
            touched: false,
        }))
    }

    fn back_pass(&mut self, poss: &Poss) -> Option<Next> {
        let x = poss.player.clone();
        let k = keeper(team_of(&x));
        let hold = self.uniform(0.6, 1.5);
        let (at, g) = self.carry(&x, poss.at, poss.frame, hold, 1.5);
        let speed = self.uniform(10.0, 14.0);
        match self.reception(&k, &x, at, g, speed, [0.0, 0.0]) {
            Some((pt, arrive)) if dist(at, pt) > 8.0 => {
                self.deliver(EventType::Pass, &x, at, g, Outcome::Success, Some(&k), pt, arrive, 0.0);
                self.close(arrive, &k);
                self.event(arrive, EventType::KeeperPickup, &k, Outcome::Success, pt);
                Some(Next::Poss(Poss {
                    player: k,
                    at: pt,
                    frame: arrive,
                    via: Via::Keeper,
                    touched: true,
                }))
            }
            _ => Some(self.kick(&x, at, g)),
        }
    }

    /// Ball played in behind the defence; the keeper comes out to sweep.
    fn through_ball(&mut self, poss: &Poss) -> Option<Next> {
        let x = poss.player.clone();
        let team = team_of(&x);
        let k = keeper(opponent(team));
        let hold = self.uniform(0.6, 1.5);
        let (at, g) = self.carry(&x, poss.at, poss.frame, hold, 2.0);
        let speed = self.uniform(12.0, 16.0);
        let out = self.uniform(9.0, 13.0);
        let home = self.expected(&k, g);
        let pt = clamp_to_pitch(add(home, [-attack_sign(team) * out, self.uniform(-4.0, 4.0)]), 1.0);
        let arrive = self.arrival(g, dist(at, pt), speed);
        if dist(at, pt) < 8.0 || !self.can_reach(&k, arrive, pt) || self.crowded(pt, arrive, &[&k, &x], 3.0) {
            return Some(self.kick(&x, at, g));
        }
        self.deliver(EventType::Pass, &x, at, g, Outcome::Failure, Some(&k), pt, arrive, 0.0);
        self.close(arrive, &k);
        self.event(arrive, EventType::KeeperSweep, &k, Outcome::Success, pt);
        Some(Next::Poss(Poss {
            player: k,
            at: pt,
            frame: arrive,
            via: Via::Keeper,
            touched: true,
        }))
    }

    /// After winning the ball: tackled, loses it, or fouled.
    fn minor_chain(&mut self, poss: &Poss) -> Next {
        let x = poss.player.clone();
        let team = team_of(&x);
        let hold = self.uniform(0.6, 1.2);
        let speed = self.uniform(1.5, 3.0);
        let (q, t) = self.carry(&x, poss.at, poss.frame, hold, speed);
        // Matches with a penalty rate favor fouls high up the pitch.
        let r = if self.params.penalty_rate > 0.0
            && progress(team, q) > 50.0
            && self.roll() < 0.7 * self.params.penalty_rate
        {
            1.0
        } else {
            self.roll()
        };
        let near = |s: &Self, radius: f64| {
            s.outfield(opponent(team))
                .into_iter()
                .filter(|p| s.can_reach(p, t, q) && dist(s.expected(p, t), q) < radius)
                .min_by(|a, b| dist(s.expected(a, t), q).total_cmp(&dist(s.expected(b, t), q)))
        };
        if r < 0.5 {
            let Some(y) = near(self, 9.0) else {
                return self.kick(&x, q, t);
            };
            let u = unit(sub(q, self.expected(&y, t)));
            self.key(&x, t, add(q, scale(u, 0.5)), false);
            self.touch(t, q, Some(&y), 0.0);
            self.event(t, EventType::Dispossessed, &x, Outcome::Failure, q);
            self.event(t, EventType::Tackle, &y, Outcome::Success, q);
            if self.roll() < 0.3 {
                let speed = self.uniform(7.0, 11.0);
                let pool = self.outfield(opponent(team));
                if let Some((z, pt, arrive)) = self.choose_receiver(pool, &y, q, t, (6.0, 15.0), speed, None) {
                    self.touch(arrive, pt, Some(&z), 0.0);
                    self.event(arrive, EventType::BallRecovery, &z, Outcome::Success, pt);
                    return Next::Poss(Poss {
                        player: z,
                        at: pt,
                        frame: arrive,
                        via: Via::Incoming,
                        touched: true,
                    });
                }
            }
            return Next::Poss(Poss {
                player: y,
                at: q,
                frame: t,
                via: Via::Tackle,
                touched: true,
            });
        }
        if r < 0.75 {
            let kind = if r < 0.65 {
                EventType::Dispossessed
            } else {
                EventType::BadTouch
            };
            let speed = self.uniform(8.0, 12.0);
            let pool = self.outfield(opponent(team));
            let found = self.choose_receiver(pool, &x, q, t, (6.0, 15.0), speed, None);
            let Some((z, pt, arrive)) = found else {
                return self.kick(&x, q, t);
            };
            self.touch(t, q, Some(&x), 0.0);
            self.event(t, kind, &x, Outcome::Failure, q);
            self.touch(arrive, pt, Some(&z), 0.0);
            self.event(arrive, EventType::BallRecovery, &z, Outcome::Success, pt);
            return Next::Poss(Poss {
                player: z,
                at: pt,
                frame: arrive,
                via: Via::Incoming,
                touched: true,
            });
        }
        let Some(y) = near(self, 9.0) else {
            return self.kick(&x, q, t);
        };
        self.foul(&x, &y, poss.at, q, t)
    }

    /// `y` fouls `x`, who was carrying the ball from `from` to `q`.
    fn foul(&mut self, x: &str, y: &str, from: P2, q: P2, t: u32) -> Next {
        let team = team_of(x);
        // The whistle stops the ball where the foul happens.
        self.touch(t, q, None, 0.0);
        let back = unit(sub(from, q));
        self.key(x, t, add(q, scale(back, 0.3)), false);
        let side = perp(back);
        self.key(y, t, add(q, scale(side, 0.8)), false);
        self.event(t, EventType::Foul, y, Outcome::Failure, q);
        let prog = progress(team, q);
        let sign = attack_sign(team);
        let in_box = prog > PITCH_LENGTH - 16.5 && (q[1] - CENTER_MARK.1).abs() < 20.16;
        let awarded = in_box || (prog > 50.0 && self.roll() < self.params.penalty_rate);
        let (kind, spot) = if awarded {
            (
                EventType::PenaltyShot,
                [target_goal_x(team) - sign * 11.0, CENTER_MARK.1],
            )
        } else if prog > 70.0 && (q[1] - CENTER_MARK.1).abs() < 20.0 && self.roll() < 0.5 {
            (EventType::FreekickShot, q)
        } else if prog > 55.0 {
            (EventType::FreekickCrossed, q)
        } else {
            (EventType::FreekickShort, q)
        };
        Next::Restart {
            kind,
            team,
            spot,
            dead_from: t + 1,
        }
    }

    /// Dead ball until a kicker has walked to `spot`, then the restart.
    fn restart(&mut self, kind: EventType, team: &'static str, spot: P2, dead_from: u32) -> Next {
        let probe = dead_from + self.fr(3.0);
        let kicker = if kind == EventType::GoalKick {
            keeper(team)
        } else {
            let pool: Vec<String> = self
                .outfield(team)
                .into_iter()
                .filter(|p| !self.recent.contains(p))
                .collect();
            pool.into_iter()
                .min_by(|a, b| dist(self.expected(a, probe), spot).total_cmp(&dist(self.expected(b, probe), spot)))
                .expect("ten outfield players")
        };
        let walk = dist(spot, self.expected(&kicker, dead_from));
        let pause: f64 = if kind == EventType::Pass { 8.0 } else { 5.0 };
        let mut k = dead_from + self.fr(pause.max(walk / BLEND_SPEED + MIN_BLEND_S + 3.0));
        while !self.can_reach(&kicker, k - self.fr(2.0), spot) {
            k += self.fr(1.0);
        }
        self.dead.push([dead_from, k - 4]);
        self.key(&kicker, k - self.fr(2.0), spot, false);
        self.recent.clear();
        let r = self.roll();
        match kind {
            EventType::ThrowIn => self
                .pass_success(kind, &kicker, spot, k, (6.0, 20.0), (8.0, 12.0), 1.5)
                .or_else(|| self.pass_success(kind, &kicker, spot, k, (4.0, 30.0), (8.0, 12.0), 1.5))
                .unwrap_or_else(|| self.pass(kind, &kicker, spot, k, (4.0, 30.0), 1.5)),
            EventType::GoalKick => {
                let loft = self.uniform(6.0, 12.0);
                let first = if r < 0.7 {
                    self.pass_success(kind, &kicker, spot, k, (25.0, 55.0), (16.0, 22.0), loft)
                } else {
                    self.pass_to_opponent(kind, &kicker, spot, k, EventType::Interception, (25.0, 55.0), loft)
                };
                first.unwrap_or_else(|| self.pass(kind, &kicker, spot, k, (10.0, 60.0), loft))
            }
            EventType::CornerCrossed | EventType::FreekickCrossed => self.cross(kind, &kicker, spot, k),
            EventType::FreekickShot | EventType::PenaltyShot => self.shot(kind, &kicker, spot, k),
            EventType::Pass => self.pass(kind, &kicker, spot, k, (8.0, 25.0), 0.0),
            _ => self.pass(kind, &kicker, spot, k, (5.0, 25.0), 0.0),
        }
    }

    fn kickoff(&mut self, team: &'static str) -> Next {
        let k0 = self.fr(2.0);
        self.dead.push([0, k0 - 4]);
        let kicker = player_id(team, 10);
        let center = [CENTER_MARK.0, CENTER_MARK.1];
        let mate = player_id(team, 11);
        for p in all_players() {
            if p == mate {
                continue;
            }
            if p == kicker {
                self.key(&p, 0, center, false);
                continue;
            }
            let mut pos = self.free(&p, k0);
            pos[0] = if team_of(&p) == HOME {
                pos[0].min(50.0)
            } else {
                pos[0].max(55.0)
            };
            let off = sub(pos, center);
            if dist(pos, center) < 10.0 {
                pos = add(center, scale(unit(off), 10.0));
                pos[0] = if team_of(&p) == HOME {
                    pos[0].min(50.0)
                } else {
                    pos[0].max(55.0)
                };
            }
            self.key(&p, 0, pos, false);
            self.key(&p, k0, pos, false);
        }
        // Played back to the strike partner, who waits just inside the own
        // half.
        let mate = player_id(team, 11);
        let side = if self.roll() < 0.5 { 1.0 } else { -1.0 };
        let pt = add(
            center,
            [
                -attack_sign(team) * self.uniform(8.0, 11.0),
                side * self.uniform(2.0, 5.0),
            ],
        );
        self.key(&mate, 0, pt, false);
        self.key(&mate, k0, pt, false);
        let speed = self.uniform(8.0, 11.0);
        let arrive = self.arrival(k0, dist(center, pt), speed);
        self.deliver(
            EventType::Pass,
            &kicker,
            center,
            k0,
            Outcome::Success,
            Some(&mate),
            pt,
            arrive,
            0.0,
        );
        self.close(arrive, &mate);
        Next::Poss(Poss {
            player: mate,
            at: pt,
            frame: arrive,
            via: Via::Pass,
            touched: true,
        })
    }

    fn run(mut self, first: &'static str) -> Result<PeriodScript> {
        let target = self.params.events_per_period;
        let mut next = self.kickoff(first);
        let mut steps = 0usize;
        let end = loop {
            steps += 1;
            if steps > target * 20 {
                return Err(Error::Generation(format!(
                    "{}: planner did not converge",
                    self.params.name
                )));
            }
            next = match next {
                Next::Poss(p) => {
                    if self.events.len() >= target && p.via == Via::Pass && p.touched {
                        break p.frame;
                    }
                    self.play(p)
                }
                Next::Restart {
                    kind,
                    team,
                    spot,
                    dead_from,
                } => self.restart(kind, team, spot, dead_from),
            };
        };
        let frames = end + self.fr(3.0);
        let kickoff_frame = self.fr(2.0);
        self.events.sort_by_key(|e| e.frame);
        Ok(PeriodScript {
            period: self.period,
            frames,
            kickoff_frame,
            contacts: self.contacts,
            waypoints: self.waypoints,
            dead: self.dead,
            events: self.events,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_deterministic_and_ordered() {
        let mut params = PlanParams::new("t", 11);
        params.events_per_period = 60;
        let a = plan(&params).unwrap();
        let b = plan(&params).unwrap();
        assert_eq!(a, b);
        for p in &a.periods {
            assert!(p.events.len() >= 60);
            assert_eq!(p.events[0].frame, p.kickoff_frame);
            for e in &p.events {
                if e.event_type.category().is_pass_like() {
                    assert!(e.end_frame.is_some_and(|f| f > e.frame), "{e:?}");
                }
            }
        }
    }
}
