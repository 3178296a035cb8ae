//! Running independent scenarios on several threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::config::ScenarioConfig;
use crate::scenario::{run_scenario, RunResult, SimError};

/// `count` copies of `base` whose seeds are `base.seed + index`.
pub fn seeded_copies(base: &ScenarioConfig, count: usize) -> Vec<ScenarioConfig> {
    (0..count)
        .map(|i| ScenarioConfig {
            seed: base.seed.wrapping_add(i as u64),
            ..base.clone()
        })
        .collect()
}

/// Runs every scenario and returns the results in input order. Each run
/// owns its world and random stream, so results do not depend on `threads`.
pub fn run_batch(configs: &[ScenarioConfig], threads: usize) -> Vec<Result<RunResult, SimError>> {
    let threads = threads.clamp(1, configs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunResult, SimError>>>> = Mutex::new((0..configs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(config) = configs.get(i) else {
                    break;
                };
                let result = run_scenario(config);
                slots.lock().expect("no panics while holding the lock")[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every index was claimed"))
        .collect()
}
