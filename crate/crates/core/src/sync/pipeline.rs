use log::debug;

use crate::config::{StageOrder, SyncConfig};
use crate::error::Result;
use crate::ingest::{apply_offset, detect_kickoff, normalize, MatchData};
use crate::model::{EventCategory, EventType, FrameIndex, Receiver, SyncResult};
use crate::sync::context::{Action, PeriodContext};
use crate::sync::major::sync_major;
use crate::sync::minor::{bad_touch_at, copied, sync_bad_touch_search, sync_foul, sync_scored_minor, TackleTarget};
use crate::sync::receive::{detect_receive, NextMajor};
use crate::sync::window::qualifying_window;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    KickoffDone,
    MajorsDone,
    ReceivesDone,
    MinorsDone,
}

/// Mutable state of one period's run.
#[derive(Debug, Clone)]
pub struct PipelineState {
    /// One result per action, in action order.
    pub results: Vec<SyncResult>,
    /// Whether the action at each index has been processed.
    pub done: Vec<bool>,
    /// Floor of the running chronological chain.
    pub last_sync_frame: Option<i64>,
    pub stage: Stage,
}

impl PipelineState {
    pub fn new(actions: &[Action]) -> Self {
        Self {
            results: actions
                .iter()
                .map(|a| SyncResult::invalid(a.event_id.clone(), a.period))
                .collect(),
            done: vec![false; actions.len()],
            last_sync_frame: None,
            stage: Stage::KickoffDone,
        }
    }

    fn set(&mut self, i: usize, r: SyncResult) {
        self.results[i] = r;
        self.done[i] = true;
    }

    /// Start frame, or the annotated frame of an invalid result.
    fn anchor(&self, actions: &[Action], i: usize) -> i64 {
        self.results[i]
            .start_frame
            .map_or(actions[i].annotated_frame, |f| f as i64)
    }

    /// End frame if known, else the anchor.
    fn end_anchor(&self, actions: &[Action], i: usize) -> i64 {
        self.results[i]
            .end_frame
            .map_or_else(|| self.anchor(actions, i), |f| f as i64)
    }

    fn advance_floor(&mut self, frame: i64) {
        self.last_sync_frame = Some(self.last_sync_frame.map_or(frame, |f| f.max(frame)));
    }
}

/// One period ready to synchronize: signals computed and annotated times
/// shifted onto the tracking clock.
pub struct PreparedPeriod<'a> {
    pub ctx: PeriodContext<'a>,
    pub actions: Vec<Action>,
    /// Positions of the actions in the match's event list.
    pub event_indices: Vec<usize>,
    pub kickoff_frame: FrameIndex,
}

/// Detects each period's kick-off and aligns its events. Periods without
/// events are skipped.
pub fn prepare_periods<'a>(data: &'a MatchData, cfg: &'a SyncConfig) -> Result<Vec<PreparedPeriod<'a>>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for track in &data.periods {
        let (event_indices, events): (Vec<usize>, Vec<_>) = data
            .events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.period == track.period)
            .map(|(i, e)| (i, e.clone()))
            .unzip();
        if events.is_empty() {
            continue;
        }
        let ctx = PeriodContext::new(track, &data.roster, &data.metadata.home_team, cfg);
        let kickoff_frame = detect_kickoff(
            track,
            &ctx.signals,
            &data.roster,
            &data.metadata.home_team,
            &cfg.kickoff,
        )?;
        debug!("period {}: kick-off at frame {kickoff_frame}", track.period);
        let shifted = apply_offset(&events, kickoff_frame, events[0].annotated_time, track.fps);
        let actions = shifted.iter().map(|e| Action::from_event(e, track.fps)).collect();
        out.push(PreparedPeriod {
            ctx,
            actions,
            event_indices,
            kickoff_frame,
        });
    }
    Ok(out)
}

/// Synchronizes a whole match. Results follow the order of `data.events`;
/// events in a period without tracking come back invalid.
pub fn run_pipeline(data: &MatchData, cfg: &SyncConfig) -> Result<Vec<SyncResult>> {
    let mut results: Vec<SyncResult> = data
        .events
        .iter()
        .map(|e| SyncResult::invalid(e.event_id.clone(), e.period))
        .collect();
    for period in prepare_periods(data, cfg)? {
        let state = run_period(&period.ctx, &period.actions);
        for (i, r) in period.event_indices.into_iter().zip(state.results) {
            results[i] = r;
        }
    }
    Ok(results)
}

/// Normalizes raw match data and synchronizes it.
pub fn synchronize(data: &MatchData, cfg: &SyncConfig) -> Result<Vec<SyncResult>> {
    let data = normalize(data, &cfg.normalize)?;
    run_pipeline(&data, cfg)
}

fn in_first_pass(order: StageOrder, category: EventCategory) -> bool {
    match order {
        StageOrder::AllBeforeReceive => true,
        StageOrder::MinorsAfterReceive => category.is_major(),
        StageOrder::IncomingAndMinorsAfterReceive => category.is_pass_like(),
    }
}

fn is_major(a: &Action) -> bool {
    a.event_type.category().is_major()
}

/// Runs every stage for one period's actions, given in annotated order.
pub fn run_period(ctx: &PeriodContext, actions: &[Action]) -> PipelineState {
    let order = ctx.cfg.stage_order;
    let mut st = PipelineState::new(actions);

    // Chronological pass with a strict floor.
    for i in 0..actions.len() {
        let a = &actions[i];
        if !in_first_pass(order, a.event_type.category()) {
            continue;
        }
        if !st.done[i] {
            let floor = st.last_sync_frame;
            let r = if is_major(a) {
                let w = qualifying_window(ctx, a, floor);
                sync_major(ctx, a, &w, floor)
            } else {
                let lower = floor.unwrap_or(ctx.track.first_frame() as i64 - 1);
                let upper = a.annotated_frame + ctx.frames_for(ctx.cfg.window_half_s) + 1;
                sync_minor(ctx, actions, &mut st, i, lower, upper)
            };
            st.set(i, r);
        }
        let anchor = st.anchor(actions, i);
        st.advance_floor(anchor);
    }
    st.stage = Stage::MajorsDone;

    receive_stage(ctx, actions, &mut st);
    st.stage = Stage::ReceivesDone;

    if order == StageOrder::IncomingAndMinorsAfterReceive {
        incoming_stage(ctx, actions, &mut st);
    }
    if order != StageOrder::AllBeforeReceive {
        for i in 0..actions.len() {
            if is_major(&actions[i]) || st.done[i] {
                continue;
            }
            let lower = (0..i)
                .rev()
                .find(|&j| is_major(&actions[j]))
                .map_or(ctx.track.first_frame() as i64 - 1, |j| st.end_anchor(actions, j));
            let upper = (i + 1..actions.len())
                .find(|&k| is_major(&actions[k]))
                .map_or(ctx.track.last_frame() as i64 + 1, |k| st.anchor(actions, k));
            let r = sync_minor(ctx, actions, &mut st, i, lower, upper);
            st.set(i, r);
        }
    }
    st.stage = Stage::MinorsDone;
    st
}

fn receive_stage(ctx: &PeriodContext, actions: &[Action], st: &mut PipelineState) {
    for i in 0..actions.len() {
        let a = &actions[i];
        if !a.event_type.category().is_pass_like() {
            continue;
        }
        let Some(start) = st.results[i].start_frame else {
            continue;
        };
        let next_idx = (i + 1..actions.len()).find(|&k| is_major(&actions[k]));
        let next = next_idx.map(|k| NextMajor {
            action: &actions[k],
            start_frame: if st.done[k] { st.results[k].start_frame } else { None },
        });
        let upper = (i + 1..actions.len())
            .find(|&k| is_major(&actions[k]) && st.done[k])
            .map_or(ctx.track.last_frame() as i64, |k| st.anchor(actions, k));
        let out = detect_receive(ctx, a, start, next, upper);
        st.results[i].end_frame = out.end_frame;
        st.results[i].receiver = out.receiver;
    }
}

/// Incoming events synchronized after receives: candidates must follow the
/// previous major's start and may not precede its end.
fn incoming_stage(ctx: &PeriodContext, actions: &[Action], st: &mut PipelineState) {
    let mut prev: Option<usize> = None;
    for i in 0..actions.len() {
        let a = &actions[i];
        if !is_major(a) {
            continue;
        }
        if a.event_type.category() == EventCategory::Incoming {
            let floor = prev.map(|j| {
                let start = st.anchor(actions, j);
                st.results[j].end_frame.map_or(start, |e| start.max(e as i64 - 1))
            });
            let w = qualifying_window(ctx, a, floor);
            let r = sync_major(ctx, a, &w, floor);
            st.set(i, r);
        }
        prev = Some(i);
    }
}

/// Minor event `i` inside `(lower, upper)`.
fn sync_minor(
    ctx: &PeriodContext,
    actions: &[Action],
    st: &mut PipelineState,
    i: usize,
    lower: i64,
    upper: i64,
) -> SyncResult {
    let a = &actions[i];
    let prev_major = (0..i).rev().find(|&j| is_major(&actions[j]));
    match a.event_type {
        EventType::Foul => sync_foul(ctx, a, lower),
        EventType::BadTouch => {
            let receive = prev_major.and_then(|j| {
                let r = &st.results[j];
                match (&r.receiver, r.end_frame) {
                    (Some(Receiver::Player(p)), Some(end)) if *p == a.player_id => Some(end),
                    _ => None,
                }
            });
            match receive {
                Some(end) => bad_touch_at(a, end),
                None => sync_bad_touch_search(ctx, a, lower, upper),
            }
        }
        EventType::Dispossessed if actions.get(i + 1).is_some_and(|n| n.event_type == EventType::Tackle) => {
            let target = TackleTarget::Player(a.player_id.clone());
            let tackle = sync_scored_minor(ctx, &actions[i + 1], lower, upper, &target);
            let r = copied(a, &tackle);
            st.set(i + 1, tackle);
            r
        }
        EventType::Tackle => {
            let target = tackle_target(actions, st, i, prev_major);
            sync_scored_minor(ctx, a, lower, upper, &target)
        }
        _ => sync_scored_minor(ctx, a, lower, upper, &TackleTarget::ClosestOpponent),
    }
}

/// The dispossessed player just before, else the previous major's receiver
/// (pass-like) or executor (incoming).
fn tackle_target(actions: &[Action], st: &PipelineState, i: usize, prev_major: Option<usize>) -> TackleTarget {
    if let Some(p) = i
        .checked_sub(1)
        .map(|j| &actions[j])
        .filter(|p| p.event_type == EventType::Dispossessed)
    {
        return TackleTarget::Player(p.player_id.clone());
    }
    let Some(j) = prev_major else {
        return TackleTarget::ClosestOpponent;
    };
    if actions[j].event_type.category() == EventCategory::Incoming {
        return TackleTarget::Player(actions[j].player_id.clone());
    }
    match &st.results[j].receiver {
        Some(Receiver::Player(p)) => TackleTarget::Player(p.clone()),
        _ => TackleTarget::ClosestOpponent,
    }
}
