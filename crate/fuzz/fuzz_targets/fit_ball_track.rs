#![no_main]

use libfuzzer_sys::fuzz_target;
use lipwalk::behavior::{fit_ball_track, Detection};
use nalgebra::Vector2;

// Input is a sequence of little-endian (t, x, y) f64 triples.
fuzz_target!(|data: &[u8]| {
    let detections: Vec<Detection> = data
        .chunks_exact(24)
        .map(|c| {
            let f = |i: usize| f64::from_le_bytes(c[i..i + 8].try_into().unwrap());
            Detection {
                t: f(0),
                pos: Vector2::new(f(8), f(16)),
            }
        })
        .collect();
    if let Ok(track) = fit_ball_track(&detections) {
        assert!(track.t0.is_finite());
        let _ = track.position_at(0.1);
        let _ = track.advanced_to(track.t0 + 0.5);
    }
});
