//! Kinematic signals, extrema and episode segmentation.

pub mod episodes;
pub mod extrema;
pub mod kinematics;
pub mod savgol;

pub use episodes::{episode_at, segment_episodes};
pub use extrema::{find_extrema, ExtremaIndex, ExtremumKind};
pub use kinematics::{derive_kinematics, Kinematics, PlayerSignals, SignalSet};
pub use savgol::savitzky_golay;
