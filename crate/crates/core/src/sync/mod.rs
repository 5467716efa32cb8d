//! Staged synchronization: major events in chronological order, then
//! receives of pass-like events, then minor events.

pub mod candidates;
pub mod context;
pub mod major;
pub mod minor;
pub mod output;
pub mod pipeline;
pub mod receive;
pub mod trace;
pub mod window;

pub use candidates::{extract_candidates, is_candidate};
pub use context::{Action, PeriodContext};
pub use major::{best_candidate, coefficients_for, major_candidates, score_candidates, sync_major};
pub use minor::{minor_candidates, take_on_target, TackleTarget, RULE_SCORE};
pub use output::{read_results, write_results, write_results_to, RESULT_HEADER};
pub use pipeline::{prepare_periods, run_period, run_pipeline, synchronize, PipelineState, PreparedPeriod, Stage};
pub use receive::{detect_receive, search_receive, NextMajor, ReceiveCase, ReceiveOutcome};
pub use trace::{trace_event, Feature, Trace};
pub use window::{qualifying_window, QualifyingWindow};
