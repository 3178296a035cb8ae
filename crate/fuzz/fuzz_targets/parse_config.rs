#![no_main]

use libfuzzer_sys::fuzz_target;
use lipwalk_sim::ScenarioConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(config) = ScenarioConfig::from_toml(text) else {
        return;
    };
    // Anything accepted must serialize and parse back to the same scenario.
    let again = config.to_toml().expect("accepted configs serialize");
    assert_eq!(ScenarioConfig::from_toml(&again).expect("own output parses"), config);
});
