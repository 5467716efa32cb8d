//! Clipped-linear feature scores.
//!
//! Everything here is a function of tracking-derived feature values only;
//! no annotated event location can reach this module.

use std::collections::BTreeMap;

use crate::config::ClipBounds;
use crate::error::{Error, Result};
use crate::model::{EventType, FrameIndex};

/// 0 below `x0`, 1 above `x1`, linear in between.
pub fn clip_linear(x: f64, x0: f64, x1: f64) -> Result<f64> {
    if !(x0 < x1) {
        return Err(Error::Parameter(format!(
            "clip bounds must satisfy x0 < x1, got {x0} >= {x1}"
        )));
    }
    Ok(clip(x, x0, x1))
}

fn clip(x: f64, x0: f64, x1: f64) -> f64 {
    if x <= x0 {
        0.0
    } else if x >= x1 {
        1.0
    } else {
        (x - x0) / (x1 - x0)
    }
}

/// A scored candidate frame with the feature values behind its score.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateFrame {
    pub frame: FrameIndex,
    pub features: BTreeMap<&'static str, f64>,
    pub total_score: f64,
}

/// Feature scores parameterized by clip limits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureScorer {
    pub clip: ClipBounds,
}

impl FeatureScorer {
    pub fn new(clip: ClipBounds) -> Self {
        Self { clip }
    }

    /// Player-ball distance: closer is better.
    pub fn pbd(&self, d: f64, lambda: f64) -> f64 {
        lambda * (1.0 - clip(d, 0.0, self.clip.pbd))
    }

    /// Ball acceleration: larger is better.
    pub fn ba(&self, a: f64, lambda: f64) -> f64 {
        lambda * clip(a, 0.0, self.clip.ba)
    }

    pub fn post_kd(&self, max_d_after: f64, lambda: f64) -> f64 {
        lambda * clip(max_d_after, 0.0, self.clip.post_kd)
    }

    pub fn pre_kd(&self, max_d_before: f64, lambda: f64) -> f64 {
        lambda * clip(max_d_before, 0.0, self.clip.pre_kd)
    }

    /// Frame delay: candidates after the annotated frame are penalized.
    pub fn fd(&self, frame: i64, annotated: i64, fps: f64, lambda: f64) -> f64 {
        let delay = ((frame - annotated) as f64 / fps).max(0.0);
        lambda * (1.0 - clip(delay, 0.0, self.clip.fd_s))
    }

    pub fn cpbd(&self, min_dist: f64, lambda: f64) -> f64 {
        lambda * (1.0 - clip(min_dist, 0.0, self.clip.cpbd))
    }

    pub fn npbd(&self, dist_next_player: f64, lambda: f64) -> f64 {
        lambda * (1.0 - clip(dist_next_player, 0.0, self.clip.npbd))
    }

    pub fn tobd(&self, d: f64, lambda: f64) -> f64 {
        lambda * (1.0 - clip(d, 0.0, self.clip.tobd))
    }

    pub fn pms(&self, speed: f64, lambda: f64) -> f64 {
        lambda * clip(speed, self.clip.pms_min, self.clip.pms_max)
    }

    pub fn pds(&self, delta: f64, lambda: f64) -> f64 {
        lambda * clip(delta, 0.0, self.clip.pds)
    }

    pub fn poac(&self, degrees: f64, lambda: f64) -> f64 {
        lambda * clip(degrees, 0.0, self.clip.poac_deg)
    }

    pub fn rba(&self, a: f64, lambda: f64) -> f64 {
        lambda * clip(a, 0.0, self.clip.rba)
    }

    /// Weighted sum of the feature scores defined for a minor event type,
    /// with equal weights summing to 100.
    pub fn score_minor(&self, features: &MinorFeatures, event_type: EventType) -> Result<f64> {
        let need = |v: Option<f64>, name: &'static str| v.ok_or(Error::MissingFeature(name));
        let f = features;
        match event_type {
            EventType::Tackle => {
                let w = 100.0 / 3.0;
                Ok(self.pbd(need(f.pbd, "PBD")?, w)
                    + self.ba(need(f.ba, "BA")?, w)
                    + self.tobd(need(f.tobd, "TOBD")?, w))
            }
            EventType::TakeOn => {
                let w = 20.0;
                Ok(self.ba(need(f.ba, "BA")?, w)
                    + self.tobd(need(f.tobd, "TOBD")?, w)
                    + self.pms(need(f.pms, "PMS")?, w)
                    + self.pds(need(f.pds, "PDS")?, w)
                    + self.poac(need(f.poac, "POAC")?, w))
            }
            EventType::Dispossessed => {
                let w = 100.0 / 3.0;
                Ok(self.pbd(need(f.pbd, "PBD")?, w)
                    + self.post_kd(need(f.post_kd, "PostKD")?, w)
                    + self.rba(need(f.rba, "RBA")?, w))
            }
            other => Err(Error::Parameter(format!("{other} has no minor-event feature score"))),
        }
    }
}

/// Feature values of one candidate frame for minor-event scoring.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinorFeatures {
    pub pbd: Option<f64>,
    pub ba: Option<f64>,
    pub post_kd: Option<f64>,
    pub tobd: Option<f64>,
    pub pms: Option<f64>,
    pub pds: Option<f64>,
    pub poac: Option<f64>,
    pub rba: Option<f64>,
}

impl MinorFeatures {
    pub fn to_map(&self) -> BTreeMap<&'static str, f64> {
        [
            ("PBD", self.pbd),
            ("BA", self.ba),
            ("PostKD", self.post_kd),
            ("TOBD", self.tobd),
            ("PMS", self.pms),
            ("PDS", self.pds),
            ("POAC", self.poac),
            ("RBA", self.rba),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}
