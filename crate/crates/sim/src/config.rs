//! Scenario files.
//!
//! A scenario is a TOML document whose sections mirror [`ScenarioConfig`].
//! Every section is optional and falls back to its defaults; unknown keys
//! are rejected. See `docs/scenario-format.md` for the full schema.

use std::fmt;
use std::path::Path;

use lipwalk::behavior::BehaviorGains;
use lipwalk::capture::{CapturePlanner, FootGeometry, GaitNominal, StepLimits};
use lipwalk::estimator::FilterConfig;
use lipwalk::kick::{FeasibilitySector, KickParams};
use lipwalk::lip::PendulumParams;
use lipwalk::Side;
use nalgebra::{Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Simulated time, s.
    pub duration: f64,
    /// Control period, s.
    pub tick: f64,
    pub robot: RobotConfig,
    pub estimator: EstimatorConfig,
    pub sensors: SensorConfig,
    pub behavior: BehaviorConfig,
    pub kick: KickConfig,
    pub ball: BallConfig,
    pub field: FieldConfig,
    pub events: Events,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            duration: 5.0,
            tick: 0.005,
            robot: RobotConfig::default(),
            estimator: EstimatorConfig::default(),
            sensors: SensorConfig::default(),
            behavior: BehaviorConfig::default(),
            kick: KickConfig::default(),
            ball: BallConfig::default(),
            field: FieldConfig::default(),
            events: Events::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Left,
    Right,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Side {
        match s {
            SideName::Left => Side::Left,
            SideName::Right => Side::Right,
        }
    }
}

/// Which CoM state the planner sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feedback {
    Estimate,
    Truth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RobotConfig {
    /// Robot mass, kg.
    pub mass: f64,
    pub com_height: f64,
    pub gravity: f64,
    /// Walk on the spot (true) or stand on one foot (false).
    pub walking: bool,
    /// Support foot at t = 0.
    pub start_support: SideName,
    /// Midpoint between the feet at t = 0, world frame.
    pub start: [f64; 2],
    pub feedback: Feedback,
    pub lift_height: f64,
    /// CoM-to-support distance beyond which the robot counts as falling, m.
    pub capture_bound: f64,
    /// How long the bound must be exceeded to declare a fall, s.
    pub fall_time: f64,
    pub gait: GaitConfig,
    pub foot: FootConfig,
    pub limits: LimitsConfig,
}

impl Default for RobotConfig {
    fn default() -> Self {
        Self {
            mass: 19.0,
            com_height: lipwalk::lip::DEFAULT_COM_HEIGHT,
            gravity: lipwalk::lip::STANDARD_GRAVITY,
            walking: true,
            start_support: SideName::Left,
            start: [0.0, 0.0],
            feedback: Feedback::Estimate,
            lift_height: lipwalk::gait::DEFAULT_LIFT_HEIGHT,
            capture_bound: 0.6,
            fall_time: 0.5,
            gait: GaitConfig::default(),
            foot: FootConfig::default(),
            limits: LimitsConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaitConfig {
    pub step_duration: f64,
    pub lateral_step_width: f64,
    pub apex_velocity: f64,
}

impl Default for GaitConfig {
    fn default() -> Self {
        let n = GaitNominal::default();
        Self {
            step_duration: n.step_duration,
            lateral_step_width: n.lateral_step_width,
            apex_velocity: n.apex_velocity_sagittal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FootConfig {
    pub zmp_min: f64,
    pub zmp_max: f64,
    /// Half the foot width, used for ball contact, m.
    pub half_width: f64,
}

impl Default for FootConfig {
    fn default() -> Self {
        let f = FootGeometry::default();
        Self {
            zmp_min: f.zmp_min,
            zmp_max: f.zmp_max,
            half_width: 0.07,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimitsConfig {
    pub duration_min_ratio: f64,
    pub duration_max_ratio: f64,
    pub reach_sagittal: f64,
    pub reach_lateral_min: f64,
    pub reach_lateral_max: f64,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        let l = StepLimits::default();
        Self {
            duration_min_ratio: l.duration_min_ratio,
            duration_max_ratio: l.duration_max_ratio,
            reach_sagittal: l.reach_sagittal,
            reach_lateral_min: l.reach_lateral_min,
            reach_lateral_max: l.reach_lateral_max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorConfig {
    pub process_noise_jerk: f64,
    pub meas_noise_pos: f64,
    pub meas_noise_acc: f64,
    /// Diagonal of the initial covariance (position, velocity, acceleration).
    pub initial_variance: [f64; 3],
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        let f = FilterConfig::default();
        let d = f.initial_covariance.diagonal();
        Self {
            process_noise_jerk: f.process_noise_jerk,
            meas_noise_pos: f.meas_noise_pos,
            meas_noise_acc: f.meas_noise_acc,
            initial_variance: [d[0], d[1], d[2]],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensorConfig {
    /// Kinematic CoM noise, m.
    pub sigma_pos: f64,
    /// Accelerometer noise, m/s^2.
    pub sigma_acc: f64,
    pub rate_hz: f64,
    pub trunk_roll_deg: f64,
    pub trunk_pitch_deg: f64,
    /// Ball detection noise, m.
    pub ball_sigma: f64,
    pub ball_rate_hz: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            sigma_pos: 0.002,
            sigma_acc: 0.3,
            rate_hz: 200.0,
            trunk_roll_deg: 3.0,
            trunk_pitch_deg: 6.0,
            ball_sigma: 0.005,
            ball_rate_hz: 30.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BehaviorConfig {
    pub attract_gain: f64,
    pub repel_gain: f64,
    pub orthogonal_ball_gain: f64,
    pub orthogonal_obstacle_gain: f64,
    pub face_ball_gain: f64,
    pub face_target_gain: f64,
    pub obstacle_radius: f64,
    pub near_threshold: f64,
    pub standoff: f64,
    /// Detections kept for the ball fit.
    pub window_len: usize,
    /// Oldest detection kept for the ball fit, s.
    pub window_age: f64,
    /// Detections required before a kick may be triggered.
    pub min_detections: usize,
}

impl Default for BehaviorConfig {
    fn default() -> Self {
        let g = BehaviorGains::default();
        Self {
            attract_gain: g.attract_gain,
            repel_gain: g.repel_gain,
            orthogonal_ball_gain: g.orthogonal_ball_gain,
            orthogonal_obstacle_gain: g.orthogonal_obstacle_gain,
            face_ball_gain: g.face_ball_gain,
            face_target_gain: g.face_target_gain,
            obstacle_radius: g.obstacle_radius,
            near_threshold: g.near_threshold,
            standoff: g.standoff,
            window_len: 20,
            window_age: 1.0,
            min_detections: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KickConfig {
    pub leg: SideName,
    pub alpha_opt: f64,
    pub optimal_distance: f64,
    pub approach_gain: f64,
    pub phi_fw: f64,
    pub phi_bw: f64,
    pub phi_adj: f64,
    pub c_fw: f64,
    pub c_bw: f64,
    pub c_adj: f64,
    /// Right-leg sector; the left leg mirrors it.
    pub sector_min_deg: f64,
    pub sector_max_deg: f64,
    /// Duration of the kicking step, s.
    pub duration: f64,
    /// Bound on the lateral adjust amplitude, m.
    pub max_adjust: f64,
}

impl Default for KickConfig {
    fn default() -> Self {
        let k = KickParams::default();
        Self {
            leg: SideName::Right,
            alpha_opt: k.alpha_opt,
            optimal_distance: k.optimal_distance,
            approach_gain: k.approach_gain,
            phi_fw: k.phi_fw,
            phi_bw: k.phi_bw,
            phi_adj: k.phi_adj,
            c_fw: k.c_fw,
            c_bw: k.c_bw,
            c_adj: k.c_adj,
            sector_min_deg: k.sector.min_angle.to_degrees().round(),
            sector_max_deg: k.sector.max_angle.to_degrees().round(),
            duration: GaitNominal::default().step_duration,
            max_adjust: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BallConfig {
    /// Resting position at t = 0.
    pub position: [f64; 2],
    pub radius: f64,
    pub mu_roll: f64,
    /// Normal restitution of foot-ball contact.
    pub restitution: f64,
    /// Speed below which the ball is stopped, m/s.
    pub stop_speed: f64,
}

impl Default for BallConfig {
    fn default() -> Self {
        Self {
            position: [1.0, 0.0],
            radius: 0.11,
            mu_roll: 0.05,
            restitution: 0.5,
            stop_speed: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    /// x coordinate of the goal line, m.
    pub goal_x: f64,
    pub goal_half_width: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            goal_x: 4.5,
            goal_half_width: 1.3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Events {
    pub push: Vec<PushEvent>,
    pub ball_pass: Vec<BallPassEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
    Left,
    Right,
}

impl Direction {
    pub fn unit(self) -> Vector2<f64> {
        match self {
            Direction::Forward => Vector2::new(1.0, 0.0),
            Direction::Backward => Vector2::new(-1.0, 0.0),
            Direction::Left => Vector2::new(0.0, 1.0),
            Direction::Right => Vector2::new(0.0, -1.0),
        }
    }
}

/// A pendulum hitting the robot at CoM height.
///
/// Give either `impact_speed` or the pair `retraction_distance` and
/// `pendulum_length`; the latter is converted by energy conservation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushEvent {
    pub time: f64,
    pub direction: Direction,
    pub pendulum_mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impact_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retraction_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pendulum_length: Option<f64>,
}

impl PushEvent {
    /// Impact speed, from the retraction geometry if no speed is given.
    pub fn speed(&self, gravity: f64) -> f64 {
        if let Some(speed) = self.impact_speed {
            return speed;
        }
        match (self.retraction_distance, self.pendulum_length) {
            (Some(d), Some(l)) => retraction_speed(d, l, gravity),
            _ => 0.0,
        }
    }
}

/// Speed at the bottom of the swing for a pendulum of length `length`
/// released `distance` away from vertical, measured horizontally.
pub fn retraction_speed(distance: f64, length: f64, gravity: f64) -> f64 {
    let rise = length - (length * length - distance * distance).sqrt();
    (2.0 * gravity * rise).sqrt()
}

/// A ball appearing at `start` and rolling with `velocity`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallPassEvent {
    pub time: f64,
    pub start: [f64; 2],
    pub velocity: [f64; 2],
}

/// One invalid field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scenario:\n{}", format_field_errors(.0))]
    Invalid(Vec<FieldError>),
    #[error("cannot serialize scenario: {0}")]
    Serialize(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn format_field_errors(errors: &[FieldError]) -> String {
    errors.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text.as_bytes()[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset - before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

impl ScenarioConfig {
    /// Parses and validates a scenario document.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |span| line_column(text, span.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        toml::to_string(self).map_err(|e| ConfigError::Serialize(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), ConfigError> {
        std::fs::write(path, self.to_toml()?).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut v = Validator::default();
        if self.seed > i64::MAX as u64 {
            v.fail("seed", format!("must not exceed {}", i64::MAX));
        }
        v.positive("duration", self.duration, true);
        v.positive("tick", self.tick, false);
        if self.tick.is_finite() && self.duration.is_finite() && self.tick > 0.0 && self.duration / self.tick > 1e8 {
            v.fail("duration", "more than 1e8 ticks".into());
        }

        let r = &self.robot;
        v.positive("robot.mass", r.mass, false);
        v.positive("robot.com_height", r.com_height, false);
        v.positive("robot.gravity", r.gravity, false);
        v.finite("robot.start[0]", r.start[0]);
        v.finite("robot.start[1]", r.start[1]);
        v.positive("robot.lift_height", r.lift_height, true);
        v.positive("robot.capture_bound", r.capture_bound, false);
        v.positive("robot.fall_time", r.fall_time, true);
        v.positive("robot.gait.step_duration", r.gait.step_duration, false);
        v.positive("robot.gait.lateral_step_width", r.gait.lateral_step_width, false);
        v.finite("robot.gait.apex_velocity", r.gait.apex_velocity);
        if !(r.foot.zmp_min < 0.0) {
            v.fail("robot.foot.zmp_min", format!("must be negative, got {}", r.foot.zmp_min));
        }
        if !(r.foot.zmp_max > 0.0 && r.foot.zmp_max.is_finite()) {
            v.fail("robot.foot.zmp_max", format!("must be positive, got {}", r.foot.zmp_max));
        }
        v.finite("robot.foot.zmp_min", r.foot.zmp_min);
        v.positive("robot.foot.half_width", r.foot.half_width, false);
        let l = &r.limits;
        v.positive("robot.limits.duration_min_ratio", l.duration_min_ratio, false);
        v.positive("robot.limits.duration_max_ratio", l.duration_max_ratio, false);
        if !(l.duration_min_ratio <= 1.0 && 1.0 <= l.duration_max_ratio) {
            v.fail(
                "robot.limits",
                "duration ratios must bracket 1 (min <= 1 <= max)".into(),
            );
        }
        v.positive("robot.limits.reach_sagittal", l.reach_sagittal, false);
        v.positive("robot.limits.reach_lateral_min", l.reach_lateral_min, false);
        v.positive("robot.limits.reach_lateral_max", l.reach_lateral_max, false);
        if !(l.reach_lateral_min <= r.gait.lateral_step_width && r.gait.lateral_step_width <= l.reach_lateral_max) {
            v.fail(
                "robot.limits",
                "lateral reach must contain robot.gait.lateral_step_width".into(),
            );
        }

        let e = &self.estimator;
        v.positive("estimator.process_noise_jerk", e.process_noise_jerk, false);
        v.positive("estimator.meas_noise_pos", e.meas_noise_pos, false);
        v.positive("estimator.meas_noise_acc", e.meas_noise_acc, false);
        for (i, var) in e.initial_variance.iter().enumerate() {
            v.positive(&format!("estimator.initial_variance[{i}]"), *var, true);
        }

        let s = &self.sensors;
        v.positive("sensors.sigma_pos", s.sigma_pos, true);
        v.positive("sensors.sigma_acc", s.sigma_acc, true);
        v.positive("sensors.rate_hz", s.rate_hz, false);
        v.finite("sensors.trunk_roll_deg", s.trunk_roll_deg);
        v.finite("sensors.trunk_pitch_deg", s.trunk_pitch_deg);
        v.positive("sensors.ball_sigma", s.ball_sigma, true);
        v.positive("sensors.ball_rate_hz", s.ball_rate_hz, false);

        let b = &self.behavior;
        for (name, value) in [
            ("attract_gain", b.attract_gain),
            ("repel_gain", b.repel_gain),
            ("orthogonal_ball_gain", b.orthogonal_ball_gain),
            ("orthogonal_obstacle_gain", b.orthogonal_obstacle_gain),
            ("face_ball_gain", b.face_ball_gain),
            ("face_target_gain", b.face_target_gain),
            ("obstacle_radius", b.obstacle_radius),
            ("near_threshold", b.near_threshold),
            ("standoff", b.standoff),
        ] {
            v.positive(&format!("behavior.{name}"), value, true);
        }
        if b.window_len < 3 {
            v.fail("behavior.window_len", format!("must be at least 3, got {}", b.window_len));
        }
        v.positive("behavior.window_age", b.window_age, false);
        if b.min_detections < 3 || b.min_detections > b.window_len {
            v.fail(
                "behavior.min_detections",
                format!("must lie in [3, window_len], got {}", b.min_detections),
            );
        }

        let k = &self.kick;
        v.positive("kick.alpha_opt", k.alpha_opt, false);
        v.positive("kick.optimal_distance", k.optimal_distance, true);
        v.finite("kick.approach_gain", k.approach_gain);
        for (name, phi) in [("phi_fw", k.phi_fw), ("phi_bw", k.phi_bw), ("phi_adj", k.phi_adj)] {
            if !(phi > 0.0 && phi < 1.0) {
                v.fail(&format!("kick.{name}"), format!("must lie strictly inside (0, 1), got {phi}"));
            }
        }
        v.finite("kick.c_fw", k.c_fw);
        v.finite("kick.c_bw", k.c_bw);
        v.finite("kick.c_adj", k.c_adj);
        v.finite("kick.sector_min_deg", k.sector_min_deg);
        v.finite("kick.sector_max_deg", k.sector_max_deg);
        if !(k.sector_min_deg < k.sector_max_deg) {
            v.fail("kick.sector_min_deg", "must be below kick.sector_max_deg".into());
        }
        v.positive("kick.duration", k.duration, false);
        v.positive("kick.max_adjust", k.max_adjust, true);

        let ball = &self.ball;
        v.finite("ball.position[0]", ball.position[0]);
        v.finite("ball.position[1]", ball.position[1]);
        v.positive("ball.radius", ball.radius, false);
        v.positive("ball.mu_roll", ball.mu_roll, true);
        v.positive("ball.restitution", ball.restitution, true);
        v.positive("ball.stop_speed", ball.stop_speed, true);
        v.finite("field.goal_x", self.field.goal_x);
        v.positive("field.goal_half_width", self.field.goal_half_width, false);

        for (i, p) in self.events.push.iter().enumerate() {
            let at = |field: &str| format!("events.push[{i}].{field}");
            v.positive(&at("time"), p.time, true);
            v.positive(&at("pendulum_mass"), p.pendulum_mass, false);
            match (p.impact_speed, p.retraction_distance, p.pendulum_length) {
                (Some(speed), None, None) => v.positive(&at("impact_speed"), speed, true),
                (None, Some(d), Some(l)) => {
                    v.positive(&at("retraction_distance"), d, true);
                    v.positive(&at("pendulum_length"), l, false);
                    if d.is_finite() && l.is_finite() && d > l {
                        v.fail(&at("retraction_distance"), "must not exceed pendulum_length".into());
                    }
                }
                _ => v.fail(
                    &format!("events.push[{i}]"),
                    "give either impact_speed or retraction_distance with pendulum_length".into(),
                ),
            }
            if !r.walking {
                v.fail(&format!("events.push[{i}]"), "pushes need robot.walking = true".into());
            }
        }
        for (i, pass) in self.events.ball_pass.iter().enumerate() {
            let at = |field: &str| format!("events.ball_pass[{i}].{field}");
            v.positive(&at("time"), pass.time, true);
            for j in 0..2 {
                v.finite(&at(&format!("start[{j}]")), pass.start[j]);
                v.finite(&at(&format!("velocity[{j}]")), pass.velocity[j]);
            }
        }
        if self.events.ball_pass.windows(2).any(|w| !(w[1].time > w[0].time)) {
            v.fail("events.ball_pass", "times must be strictly increasing".into());
        }
        v.finish()
    }

    pub fn pendulum(&self) -> PendulumParams {
        PendulumParams::new(self.robot.com_height, self.robot.gravity).expect("validated pendulum parameters")
    }

    pub fn nominal(&self) -> GaitNominal {
        GaitNominal {
            step_duration: self.robot.gait.step_duration,
            lateral_step_width: self.robot.gait.lateral_step_width,
            apex_velocity_sagittal: self.robot.gait.apex_velocity,
        }
    }

    pub fn planner(&self) -> CapturePlanner {
        let l = &self.robot.limits;
        CapturePlanner::new(
            self.pendulum(),
            self.nominal(),
            FootGeometry {
                zmp_min: self.robot.foot.zmp_min,
                zmp_max: self.robot.foot.zmp_max,
            },
            StepLimits {
                duration_min_ratio: l.duration_min_ratio,
                duration_max_ratio: l.duration_max_ratio,
                reach_sagittal: l.reach_sagittal,
                reach_lateral_min: l.reach_lateral_min,
                reach_lateral_max: l.reach_lateral_max,
            },
        )
    }

    pub fn filter(&self) -> FilterConfig {
        let e = &self.estimator;
        let d = e.initial_variance;
        FilterConfig {
            process_noise_jerk: e.process_noise_jerk,
            meas_noise_pos: e.meas_noise_pos,
            meas_noise_acc: e.meas_noise_acc,
            initial_covariance: Matrix3::from_diagonal(&Vector3::new(d[0], d[1], d[2])),
        }
    }

    pub fn kick_params(&self) -> KickParams {
        let k = &self.kick;
        KickParams {
            alpha_opt: k.alpha_opt,
            optimal_distance: k.optimal_distance,
            approach_gain: k.approach_gain,
            phi_fw: k.phi_fw,
            phi_bw: k.phi_bw,
            phi_adj: k.phi_adj,
            c_fw: k.c_fw,
            c_bw: k.c_bw,
            c_adj: k.c_adj,
            sector: FeasibilitySector {
                min_angle: k.sector_min_deg.to_radians(),
                max_angle: k.sector_max_deg.to_radians(),
            },
        }
    }

    pub fn gains(&self) -> BehaviorGains {
        let b = &self.behavior;
        BehaviorGains {
            attract_gain: b.attract_gain,
            repel_gain: b.repel_gain,
            orthogonal_ball_gain: b.orthogonal_ball_gain,
            orthogonal_obstacle_gain: b.orthogonal_obstacle_gain,
            face_ball_gain: b.face_ball_gain,
            face_target_gain: b.face_target_gain,
            obstacle_radius: b.obstacle_radius,
            near_threshold: b.near_threshold,
            standoff: b.standoff,
        }
    }

    /// Number of ticks after t = 0.
    pub fn tick_count(&self) -> usize {
        (self.duration / self.tick).round() as usize
    }
}

#[derive(Default)]
struct Validator {
    errors: Vec<FieldError>,
}

impl Validator {
    fn fail(&mut self, path: &str, message: String) {
        self.errors.push(FieldError {
            path: path.to_string(),
            message,
        });
    }

    fn finite(&mut self, path: &str, value: f64) {
        if !value.is_finite() {
            self.fail(path, format!("must be finite, got {value}"));
        }
    }

    fn positive(&mut self, path: &str, value: f64, allow_zero: bool) {
        let ok = value.is_finite() && if allow_zero { value >= 0.0 } else { value > 0.0 };
        if !ok {
            let want = if allow_zero { "non-negative" } else { "positive" };
            self.fail(path, format!("must be finite and {want}, got {value}"));
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(self.errors))
        }
    }
}
