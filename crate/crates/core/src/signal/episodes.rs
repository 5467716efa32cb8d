use crate::config::SignalConfig;
use crate::model::Episode;
use crate::track::PeriodTrack;

/// Splits a period into open-play episodes.
///
/// An alive run shorter than `min_episode_s` with alive neighbors on both
/// sides, each separated from it by less than `merge_gap_s` of dead frames,
/// is merged with both neighbors; the gap frames then belong to the merged
/// episode.
pub fn segment_episodes(track: &PeriodTrack, cfg: &SignalConfig) -> Vec<Episode> {
    let fps = track.fps.as_f64();
    let min_len = cfg.min_episode_s * fps;
    let max_gap = cfg.merge_gap_s * fps;

    // Raw alive runs as index ranges, split at frame gaps too.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for seg in track.contiguous_segments() {
        let mut i = seg.start;
        while i < seg.end {
            if !track.alive[i] {
                i += 1;
                continue;
            }
            let start = i;
            while i < seg.end && track.alive[i] {
                i += 1;
            }
            runs.push((start, i - 1));
        }
    }

    let frames = &track.frames;
    let len = |r: &(usize, usize)| (frames[r.1] - frames[r.0] + 1) as f64;
    let gap = |a: &(usize, usize), b: &(usize, usize)| (frames[b.0] - frames[a.1] - 1) as f64;
    let mut join_prev = vec![false; runs.len()];
    for k in 1..runs.len().saturating_sub(1) {
        if len(&runs[k]) < min_len && gap(&runs[k - 1], &runs[k]) < max_gap && gap(&runs[k], &runs[k + 1]) < max_gap {
            join_prev[k] = true;
            join_prev[k + 1] = true;
        }
    }
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for (k, run) in runs.into_iter().enumerate() {
        match merged.last_mut() {
            Some(prev) if join_prev[k] => prev.1 = run.1,
            _ => merged.push(run),
        }
    }

    merged
        .into_iter()
        .enumerate()
        .map(|(k, (s, e))| Episode {
            episode_id: k as u32,
            start_frame: frames[s],
            end_frame: frames[e],
        })
        .collect()
}

/// Episode containing `frame`, if any.
pub fn episode_at(episodes: &[Episode], frame: u32) -> Option<&Episode> {
    let k = episodes.partition_point(|e| e.end_frame < frame);
    episodes.get(k).filter(|e| e.contains(frame))
}
