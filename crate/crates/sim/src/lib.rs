//! Deterministic closed-loop simulator for the `lipwalk` balance stack.
//!
//! A scenario file ([`config::ScenarioConfig`]) describes the robot, its
//! sensors and a list of events (pendulum pushes, ball passes). Running it
//! ([`scenario::run_scenario`]) produces one [`trace::TraceRecord`] per tick
//! plus a one-line [`scenario::Summary`].

pub mod batch;
pub mod config;
pub mod presets;
pub mod scenario;
pub mod trace;
pub mod world;

pub use config::{ConfigError, ScenarioConfig};
pub use scenario::{run_scenario, RunResult, SimError, Summary};
pub use trace::{read_trace, write_trace, TraceRecord, TRACE_HEADER};
