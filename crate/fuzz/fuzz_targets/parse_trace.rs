#![no_main]

use libfuzzer_sys::fuzz_target;
use lipwalk_sim::trace::trace_to_string;
use lipwalk_sim::read_trace;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_trace(data) else {
        return;
    };
    let text = trace_to_string(&records);
    let again = read_trace(text.as_bytes()).expect("own output parses");
    assert_eq!(trace_to_string(&again), text);
});
