use std::collections::{BTreeMap, BTreeSet};

use elastic_sync::model::{EventCategory, EventType, Outcome, Position};
use elastic_sync::synthgen::script::{Contact, PeriodScript, PlannedEvent};
use elastic_sync::synthgen::{generate, standard_suite, write_generated, Generated, NoiseModel, ScenarioScript};

fn suite() -> Vec<ScenarioScript> {
    standard_suite(1).expect("suite plans")
}

fn clean(script: &ScenarioScript) -> Generated {
    generate(&script.clone().with_noise(NoiseModel::NONE)).expect("renders")
}

#[test]
fn same_seed_gives_identical_files() {
    let script = &suite()[0];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_generated(&generate(script).unwrap(), a.path()).unwrap();
    write_generated(&generate(script).unwrap(), b.path()).unwrap();
    let names: BTreeSet<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert!(names.len() >= 3);
    for n in names {
        assert_eq!(
            std::fs::read(a.path().join(&n)).unwrap(),
            std::fs::read(b.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
    assert_eq!(standard_suite(9).unwrap(), standard_suite(9).unwrap());
    assert_ne!(standard_suite(9).unwrap()[0], standard_suite(10).unwrap()[0]);
}

#[test]
fn suite_is_large_and_covers_every_event_type() {
    let scripts = suite();
    assert!(scripts.len() >= 10);
    let mut seen = BTreeSet::new();
    for s in &scripts {
        let events: usize = s.periods.iter().map(|p| p.events.len()).sum();
        assert!(events >= 200, "{} has {events} events", s.name);
        seen.extend(s.periods.iter().flat_map(|p| p.events.iter().map(|e| e.event_type)));
    }
    let missing: Vec<_> = EventType::ALL.iter().filter(|t| !seen.contains(t)).collect();
    assert!(missing.is_empty(), "never generated: {missing:?}");
}

#[test]
fn category_mix_is_close_to_the_reference_counts() {
    // Reference row counts per category.
    let reference = [
        (EventCategory::OpenPlayPassLike, 1590.0),
        (EventCategory::SetPiecePassLike, 117.0),
        (EventCategory::Incoming, 168.0),
        (EventCategory::Minor, 259.0),
    ];
    let ref_total: f64 = reference.iter().map(|r| r.1).sum();
    let mut counts: BTreeMap<EventCategory, usize> = BTreeMap::new();
    for s in suite() {
        for e in s.periods.iter().flat_map(|p| &p.events) {
            *counts.entry(e.event_type.category()).or_default() += 1;
        }
    }
    let total: usize = counts.values().sum();
    for (cat, n) in reference {
        let share = counts.get(&cat).copied().unwrap_or(0) as f64 / total as f64;
        assert!(
            (share - n / ref_total).abs() <= 0.05,
            "{cat:?}: {share:.3} vs {:.3}",
            n / ref_total
        );
    }
}

#[test]
fn tracks_are_physically_plausible() {
    for script in suite().iter().take(3) {
        let g = clean(script);
        for track in &g.data.periods {
            let frames = track.to_frames();
            let dt = 1.0 / g.data.metadata.fps.as_f64();
            assert!(frames.iter().all(|f| f.ball.z >= 0.0));
            for w in frames.windows(2) {
                assert_eq!(w[1].frame_index, w[0].frame_index + 1);
                for (p, a) in &w[0].players {
                    if let Some(b) = w[1].players.get(p) {
                        let v = a.planar_distance(b) / dt;
                        assert!(
                            v <= 12.0,
                            "{}: {p} at {v:.1} m/s, frame {}",
                            script.name,
                            w[0].frame_index
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn executing_player_is_at_the_ball_on_the_true_frame() {
    let g = clean(&suite()[0]);
    let events: BTreeMap<&str, &str> = g
        .data
        .events
        .iter()
        .map(|e| (e.event_id.as_str(), e.player_id.as_str()))
        .collect();
    let mut checked = 0;
    // Fouls and dispossessions happen to a player next to the ball; the
    // contact itself belongs to the carrier or the tackler.
    let off_ball = [EventType::Foul, EventType::Dispossessed];
    for t in g.truth.iter().filter(|t| !off_ball.contains(&t.event_type)) {
        let track = g.data.periods.iter().find(|p| p.period.number() == t.period).unwrap();
        let frame = &track.to_frames()[track.index_of(t.start_frame).unwrap()];
        let player = events[t.event_id.as_str()];
        let p: &Position = &frame.players[player];
        let d = p.planar_distance(&frame.ball);
        assert!(
            d <= 0.3,
            "{} ({:?}): {player} is {d:.2} m from the ball",
            t.event_id,
            t.event_type
        );
        checked += 1;
    }
    assert!(checked >= 200);
}

#[test]
fn ground_truth_is_complete() {
    let g = generate(&suite()[0]).unwrap();
    assert_eq!(g.truth.len(), g.data.events.len());
    for t in &g.truth {
        let pass_like = t.event_type.category().is_pass_like();
        assert_eq!(t.end_frame.is_some(), pass_like, "{}", t.event_id);
        assert_eq!(t.receiver.is_some(), pass_like, "{}", t.event_id);
        if let Some(end) = t.end_frame {
            assert!(end > t.start_frame);
        }
    }
}

#[test]
fn annotation_jitter_stays_within_three_seconds() {
    let script = &suite()[0];
    assert_eq!(script.noise.jitter_s, 3.0);
    let g = generate(script).unwrap();
    let truth: BTreeMap<&str, u32> = g.truth.iter().map(|t| (t.event_id.as_str(), t.start_frame)).collect();
    let mut worst = 0;
    for e in &g.data.events {
        let p = script.periods.iter().find(|p| p.period == e.period.number()).unwrap();
        let annotated = p.kickoff_frame as i64 + (e.annotated_time * script.fps as f64).round() as i64;
        worst = worst.max((annotated - truth[e.event_id.as_str()] as i64).abs());
    }
    assert!(worst <= 75, "{worst} frames");
    assert!(worst > 25, "jitter looks inactive: {worst} frames");
}

#[test]
fn unreachable_ball_names_the_event() {
    let event = |id: &str, frame: u32, player: &str| PlannedEvent {
        event_id: id.into(),
        frame,
        event_type: EventType::Pass,
        player: player.into(),
        team: "H".into(),
        outcome: Outcome::Success,
        end_frame: None,
        receiver: None,
        location: None,
    };
    let contact = |frame: u32, x: f64, player: &str| Contact {
        frame,
        x,
        y: 34.0,
        player: Some(player.into()),
        loft: 0.0,
    };
    let mut script = suite()[0].clone();
    let home = &script.periods[0].events[0];
    let (team, a) = (home.team.clone(), home.player.clone());
    let b = script.periods[0]
        .events
        .iter()
        .find(|e| e.team == team && e.player != a)
        .map(|e| e.player.clone())
        .unwrap();
    // The second player would need to cover 80 m in one second.
    script.periods = vec![PeriodScript {
        period: 1,
        frames: 500,
        kickoff_frame: 0,
        contacts: vec![contact(0, 52.5, &a), contact(100, 10.0, &b), contact(125, 90.0, &b)],
        waypoints: Vec::new(),
        dead: Vec::new(),
        events: vec![
            PlannedEvent {
                team: team.clone(),
                ..event("ko", 0, &a)
            },
            PlannedEvent {
                team: team.clone(),
                ..event("near", 100, &b)
            },
            PlannedEvent {
                team,
                ..event("far", 125, &b)
            },
        ],
    }];
    let err = generate(&script).unwrap_err().to_string();
    assert!(err.contains("far") || err.contains("near"), "{err}");
}
