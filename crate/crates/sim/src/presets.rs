//! Built-in scenarios used by the CLI when no scenario file is given.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{BallPassEvent, Direction, PushEvent, ScenarioConfig};
use crate::scenario::{run_scenario, SimError};

/// Impact speed at which both pendulums are expected to be survivable, m/s.
pub const DEFAULT_PUSH_SPEED: f64 = 1.5;
pub const LIGHT_PENDULUM: f64 = 3.0;
pub const HEAVY_PENDULUM: f64 = 5.0;

/// Middle of the third step (left support) on the default gait.
const MID_STEP: f64 = 1.125;

/// Forward walking with default sensor noise.
pub fn walk(seed: u64) -> ScenarioConfig {
    let mut c = ScenarioConfig {
        seed,
        duration: 10.0,
        ..ScenarioConfig::default()
    };
    c.robot.gait.apex_velocity = 0.2;
    c
}

/// Removes sensor noise and makes the filter trust its measurements.
pub fn noiseless(mut c: ScenarioConfig) -> ScenarioConfig {
    c.sensors.sigma_pos = 0.0;
    c.sensors.sigma_acc = 0.0;
    c.sensors.ball_sigma = 0.0;
    c.estimator.meas_noise_pos = 1e-14;
    c.estimator.meas_noise_acc = 1e-8;
    c
}

fn push(time: f64, direction: Direction, pendulum_mass: f64, impact_speed: f64) -> PushEvent {
    PushEvent {
        time,
        direction,
        pendulum_mass,
        impact_speed: Some(impact_speed),
        retraction_distance: None,
        pendulum_length: None,
    }
}

/// Stepping on the spot, pushed sideways toward the stance foot mid-step.
pub fn lateral_push() -> ScenarioConfig {
    let mut c = noiseless(ScenarioConfig {
        duration: 4.0,
        ..ScenarioConfig::default()
    });
    c.events.push.push(push(MID_STEP, Direction::Left, HEAVY_PENDULUM, 1.0));
    c
}

/// Walking forward, pushed backward mid-step.
pub fn sagittal_push() -> ScenarioConfig {
    let mut c = noiseless(ScenarioConfig {
        duration: 4.0,
        ..ScenarioConfig::default()
    });
    c.robot.gait.apex_velocity = 0.2;
    c.events.push.push(push(MID_STEP, Direction::Backward, HEAVY_PENDULUM, 2.0));
    c
}

/// One pendulum push from behind while stepping on the spot, with sensor noise.
pub fn push_recovery(seed: u64, pendulum_mass: f64, impact_speed: f64) -> ScenarioConfig {
    let mut c = ScenarioConfig {
        seed,
        duration: 6.0,
        ..ScenarioConfig::default()
    };
    c.events.push.push(push(2.0, Direction::Forward, pendulum_mass, impact_speed));
    c
}

/// Sets the impact speed of every push.
pub fn with_push_speed(mut c: ScenarioConfig, impact_speed: f64) -> ScenarioConfig {
    for p in &mut c.events.push {
        p.impact_speed = Some(impact_speed);
        p.retraction_distance = None;
        p.pendulum_length = None;
    }
    c
}

/// Distance from the goal line to the penalty mark, m.
const PENALTY_DISTANCE: f64 = 2.1;
const PASS_DISTANCE: f64 = 0.9;
const PASS_INTERVAL: f64 = 4.0;

/// A standing robot at the penalty mark receives three passes rolled from
/// in front of it. Speeds, approach bearings and aiming errors are drawn
/// from `seed`.
pub fn moving_ball(seed: u64) -> ScenarioConfig {
    let mut c = ScenarioConfig {
        seed,
        duration: 0.5 + 3.0 * PASS_INTERVAL,
        ..ScenarioConfig::default()
    };
    c.robot.walking = false;
    c.robot.start = [c.field.goal_x - PENALTY_DISTANCE, 0.0];

    let kick_leg: lipwalk::Side = c.kick.leg.into();
    let home_y = kick_leg.sign() * 0.5 * c.robot.gait.lateral_step_width;
    let home = [c.robot.start[0], c.robot.start[1] + home_y];
    let direction = (-home[1]).atan2(c.field.goal_x - home[0]);
    let contact = [
        home[0] + c.kick.optimal_distance * direction.cos(),
        home[1] + c.kick.optimal_distance * direction.sin(),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..3 {
        let speed = rng.random_range(1.0..=2.5);
        let bearing = direction + rng.random_range(-20.0f64..=20.0).to_radians();
        let jitter = rng.random_range(-10.0f64..=10.0).to_radians();
        let start = [
            contact[0] + PASS_DISTANCE * bearing.cos(),
            contact[1] + PASS_DISTANCE * bearing.sin(),
        ];
        let heading = bearing + std::f64::consts::PI + jitter;
        c.events.ball_pass.push(BallPassEvent {
            time: 0.5 + PASS_INTERVAL * i as f64,
            start,
            velocity: [speed * heading.cos(), speed * heading.sin()],
        });
    }
    c.ball.position = c.events.ball_pass[0].start;
    c
}

/// Result of a bisection over impact speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PushThreshold {
    /// Highest speed seen that the robot survived, m/s.
    pub survived: f64,
    /// Lowest speed seen that made the robot fall, m/s.
    pub fell: f64,
}

/// Bisects the impact speed of the pushes in `base` between a survived
/// `low` and a falling `high`. Returns `None` if the bracket is not one.
pub fn push_threshold(base: &ScenarioConfig, low: f64, high: f64, iterations: usize) -> Result<Option<PushThreshold>, SimError> {
    let fell = |speed: f64| -> Result<bool, SimError> { Ok(run_scenario(&with_push_speed(base.clone(), speed))?.summary.fell) };
    if fell(low)? || !fell(high)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (low, high);
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if fell(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(PushThreshold { survived: lo, fell: hi }))
}
