//! Annotation and tracking imperfections.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::model::{PITCH_LENGTH, PITCH_WIDTH};
use crate::synthgen::motion::P2;

/// Annotated times (seconds since the kick-off) for events with the given
/// true frames. The first event is the period kick-off and is annotated
/// exactly. The others get uniform jitter in ±`jitter_s`, stay after the
/// kick-off, and keep their true order: jittered times are sorted and handed
/// out in sequence, as annotators log events in order.
pub fn annotated_times(frames: &[u32], kickoff: u32, fps: f64, jitter_s: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let true_time = |f: u32| (f as f64 - kickoff as f64) / fps;
    let mut times: Vec<f64> = frames
        .iter()
        .map(|&f| {
            let j = if jitter_s > 0.0 {
                rng.random_range(-jitter_s..=jitter_s)
            } else {
                0.0
            };
            true_time(f) + j
        })
        .collect();
    if let Some(first) = times.first_mut() {
        *first = true_time(frames[0]);
    }
    let floor = 1.0 / fps;
    let mut tail: Vec<f64> = times.iter().skip(1).map(|t| t.max(floor)).collect();
    tail.sort_by(f64::total_cmp);
    for (t, v) in times.iter_mut().skip(1).zip(tail) {
        *t = v;
    }
    times
}

/// Adds planar Gaussian noise; heights are left alone.
pub fn jitter_position(p: P2, std: f64, rng: &mut ChaCha8Rng) -> P2 {
    if std <= 0.0 {
        return p;
    }
    let n = Normal::new(0.0, std).expect("finite std");
    [p[0] + n.sample(rng), p[1] + n.sample(rng)]
}

/// Point reflection through the centre mark.
pub fn reflect(p: P2) -> P2 {
    [PITCH_LENGTH - p[0], PITCH_WIDTH - p[1]]
}
