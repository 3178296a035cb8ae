use lipwalk_sim::config::{BallPassEvent, ConfigError, Feedback};
use lipwalk_sim::presets;
use lipwalk_sim::trace::{read_trace, trace_to_string, Flags};
use lipwalk_sim::{run_scenario, ScenarioConfig};

fn truth(mut c: ScenarioConfig) -> ScenarioConfig {
    c.robot.feedback = Feedback::Truth;
    c
}

#[test]
fn same_seed_same_trace() {
    let c = presets::walk(21);
    let a = trace_to_string(&run_scenario(&c).unwrap().trace);
    let b = trace_to_string(&run_scenario(&c).unwrap().trace);
    assert_eq!(a, b);
    let other = trace_to_string(&run_scenario(&presets::walk(22)).unwrap().trace);
    assert_ne!(a, other);
}

#[test]
fn nominal_start_stays_on_the_limit_cycle() {
    let base = presets::noiseless(ScenarioConfig::default());
    let est = run_scenario(&base).unwrap();
    let exact = run_scenario(&truth(base.clone())).unwrap();
    assert!(est.summary.capture_count == 0 && !est.summary.fell);
    let mut dev = 0.0f64;
    for (a, b) in est.trace.iter().zip(&exact.trace) {
        for i in 0..2 {
            dev = dev.max((a.com[i] - b.com[i]).abs()).max((a.com_vel[i] - b.com_vel[i]).abs());
        }
    }
    assert!(dev < 1e-6, "{dev:e}");
    let t0 = base.robot.gait.step_duration;
    for s in exact.steps.iter().skip(1) {
        assert!((s.duration() - t0).abs() < 1e-9, "{}", s.duration());
        assert!((s.landing[1].abs() - base.robot.gait.lateral_step_width).abs() < 1e-9);
    }
}

#[test]
fn forward_walking_holds_apex_velocity() {
    let mut c = truth(presets::noiseless(presets::walk(0)));
    c.duration = 4.0;
    let run = run_scenario(&c).unwrap();
    let apexes: Vec<f64> = run.steps.iter().filter_map(|s| s.apex_velocity).collect();
    assert!(apexes.len() >= 7);
    for a in apexes {
        assert!((a - 0.2).abs() < 1e-6, "{a}");
    }
}

#[test]
fn zero_noise_estimate_tracks_position() {
    let run = run_scenario(&presets::noiseless(ScenarioConfig::default())).unwrap();
    let worst = run
        .trace
        .iter()
        .flat_map(|r| [(r.est[0][0] - r.com[0]).abs(), (r.est[1][0] - r.com[1]).abs()])
        .fold(0.0f64, f64::max);
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn noisy_walk_does_not_fall() {
    for seed in 0..4 {
        let run = run_scenario(&presets::walk(seed)).unwrap();
        assert!(!run.summary.fell, "seed {seed}");
    }
}

#[test]
fn rolling_ball_stops_on_schedule() {
    // 1 m/s against rolling friction 0.05 g: 2.04 s and 1.02 m to rest.
    let mut c = ScenarioConfig {
        duration: 3.0,
        ..ScenarioConfig::default()
    };
    c.robot.walking = false;
    c.ball.position = [0.0, 3.0];
    c.events.ball_pass.push(BallPassEvent {
        time: 0.5,
        start: [0.0, 3.0],
        velocity: [-1.0, 0.0],
    });
    let run = run_scenario(&c).unwrap();
    let decel = c.ball.mu_roll * c.robot.gravity;
    let stopped = run
        .trace
        .windows(2)
        .find(|w| w[0].t > 0.5 && w[1].ball == w[0].ball)
        .map(|w| w[0].t)
        .unwrap();
    assert!((stopped - 0.5 - 1.0 / decel).abs() < 0.03, "{stopped}");
    let end = run.trace.last().unwrap().ball;
    assert!((end[0] + 1.0 / (2.0 * decel)).abs() < 1e-3, "{end:?}");
    assert_eq!(end[1], 3.0);
}

#[test]
fn capture_step_grows_with_push_until_fall() {
    let mut last = 0.0;
    let mut fallen = false;
    for i in 1..=16 {
        let speed = 0.5 * i as f64;
        let run = run_scenario(&presets::push_recovery(0, presets::HEAVY_PENDULUM, speed)).unwrap();
        if run.summary.fell {
            fallen = true;
            continue;
        }
        assert!(!fallen, "survived {speed} m/s after falling at a lower speed");
        let p = run.steps.iter().position(|s| s.pushed).unwrap();
        let step = run.steps[p].landing[0];
        assert!(step >= last, "{speed} m/s: {step} < {last}");
        last = step;
    }
    assert!(fallen);
}

#[test]
fn push_is_flagged_once() {
    let run = run_scenario(&presets::sagittal_push()).unwrap();
    let flagged = run.trace.iter().filter(|r| r.flags.contains(Flags::PUSH)).count();
    assert_eq!(flagged, 1);
}

#[test]
fn trace_text_survives_a_parse() {
    let run = run_scenario(&presets::moving_ball(1)).unwrap();
    let text = trace_to_string(&run.trace);
    let parsed = read_trace(text.as_bytes()).unwrap();
    assert_eq!(parsed.len(), run.trace.len());
    assert_eq!(trace_to_string(&parsed), text);
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.toml");
    let c = presets::push_recovery(4, presets::LIGHT_PENDULUM, 2.0);
    c.write(&path).unwrap();
    assert_eq!(ScenarioConfig::read(&path).unwrap(), c);
}

#[test]
fn negative_mass_is_rejected() {
    let mut c = ScenarioConfig::default();
    c.robot.mass = -1.0;
    match c.validate() {
        Err(ConfigError::Invalid(errors)) => assert!(errors.iter().any(|e| e.path == "robot.mass"), "{errors:?}"),
        other => panic!("{other:?}"),
    }
    let err = run_scenario(&c).unwrap_err();
    assert!(err.to_string().contains("robot.mass"), "{err}");
}

#[test]
fn shipped_scenarios_load_and_run() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let c = ScenarioConfig::read(&path).unwrap();
            let run = run_scenario(&c).unwrap();
            assert!(!run.summary.fell, "{}", path.display());
            count += 1;
        }
    }
    assert!(count >= 3);
}
