//! Force-field behavior and moving-ball tracking.
//!
//! The robot is treated as a holonomic point mass. Forces pulling it to the
//! behind-ball position, pushing it away from obstacles and sliding it
//! around the ball and obstacles are summed into one walk vector, saturated
//! to the unit disk. Turning is controlled separately.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, Vector2};

use crate::error::{Error, Result};
use crate::wrap_angle;

/// Planar walk vector plus an independent turn command.
///
/// `walk` is expressed in the world frame; its direction is the walking
/// direction and its length the fraction of the maximum walking speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaitCommand {
    pub walk: Vector2<f64>,
    pub turn: f64,
}

impl GaitCommand {
    /// Walk vector expressed in the robot frame.
    pub fn walk_in_robot_frame(&self, heading: f64) -> Vector2<f64> {
        rotate(self.walk, -heading)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BehaviorGains {
    pub attract_gain: f64,
    pub repel_gain: f64,
    pub orthogonal_ball_gain: f64,
    pub orthogonal_obstacle_gain: f64,
    pub face_ball_gain: f64,
    pub face_target_gain: f64,
    /// Distance from an obstacle's edge within which it repels, m.
    pub obstacle_radius: f64,
    /// Distance to the behind-ball position below which the robot faces the target, m.
    pub near_threshold: f64,
    /// Distance of the behind-ball position from the ball, m.
    pub standoff: f64,
}

impl Default for BehaviorGains {
    fn default() -> Self {
        Self {
            attract_gain: 2.0,
            repel_gain: 0.02,
            orthogonal_ball_gain: 0.8,
            orthogonal_obstacle_gain: 0.6,
            face_ball_gain: 1.5,
            face_target_gain: 1.5,
            obstacle_radius: 0.6,
            near_threshold: 0.3,
            standoff: 0.25,
        }
    }
}

impl BehaviorGains {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("attract_gain", self.attract_gain),
            ("repel_gain", self.repel_gain),
            ("orthogonal_ball_gain", self.orthogonal_ball_gain),
            ("orthogonal_obstacle_gain", self.orthogonal_obstacle_gain),
            ("face_ball_gain", self.face_ball_gain),
            ("face_target_gain", self.face_target_gain),
            ("obstacle_radius", self.obstacle_radius),
            ("near_threshold", self.near_threshold),
            ("standoff", self.standoff),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and non-negative, got {value}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2 {
    pub fn position(&self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obstacle {
    pub center: Vector2<f64>,
    pub radius: f64,
}

/// Repulsion distances are floored at this value, m.
pub const REPULSION_FLOOR: f64 = 0.01;

fn rotate(v: Vector2<f64>, angle: f64) -> Vector2<f64> {
    let (s, c) = angle.sin_cos();
    Vector2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

fn perp(v: Vector2<f64>) -> Vector2<f64> {
    Vector2::new(-v.y, v.x)
}

fn cross(a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Point `standoff` behind the ball on the target-ball line.
pub fn behind_ball_position(ball: Vector2<f64>, kick_target: Vector2<f64>, standoff: f64) -> Result<Vector2<f64>> {
    let dir = kick_target - ball;
    let len = dir.norm();
    if !(len > 0.0) {
        return Err(Error::CoincidentBallTarget);
    }
    Ok(ball - dir * (standoff / len))
}

/// Individual force terms before saturation, in the world frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldForces {
    pub attraction: Vector2<f64>,
    pub repulsion: Vector2<f64>,
    pub ball_orthogonal: Vector2<f64>,
    pub obstacle_orthogonal: Vector2<f64>,
    /// Unit vector from the robot to the ball (zero when on top of it).
    pub robot_to_ball: Vector2<f64>,
    /// Per obstacle: unit vector robot to obstacle and that obstacle's orthogonal force.
    pub obstacle_terms: Vec<(Vector2<f64>, Vector2<f64>)>,
    pub behind_ball: Vector2<f64>,
}

impl FieldForces {
    pub fn total(&self) -> Vector2<f64> {
        self.attraction + self.repulsion + self.ball_orthogonal + self.obstacle_orthogonal
    }
}

pub fn field_forces(
    robot: &Pose2,
    ball: Vector2<f64>,
    kick_target: Vector2<f64>,
    obstacles: &[Obstacle],
    gains: &BehaviorGains,
) -> Result<FieldForces> {
    let pos = robot.position();
    let behind = behind_ball_position(ball, kick_target, gains.standoff)?;
    let attraction = gains.attract_gain * (behind - pos);

    // Circumvent the ball when standing on its target side.
    let to_ball = ball - pos;
    let ball_dist = to_ball.norm();
    let robot_to_ball = if ball_dist > 0.0 { to_ball / ball_dist } else { Vector2::zeros() };
    let target_dir = (kick_target - ball).normalize();
    let mut ball_orthogonal = Vector2::zeros();
    if ball_dist > 0.0 {
        let in_front = (-robot_to_ball).dot(&target_dir);
        if in_front > 0.0 {
            // Go around on the side the behind-ball position lies on.
            let side = if cross(robot_to_ball, behind - pos) >= 0.0 { 1.0 } else { -1.0 };
            ball_orthogonal = gains.orthogonal_ball_gain * in_front * side * perp(robot_to_ball);
        }
    }

    let mut repulsion = Vector2::zeros();
    let mut obstacle_orthogonal = Vector2::zeros();
    let mut obstacle_terms = Vec::with_capacity(obstacles.len());
    for obstacle in obstacles {
        let to_obstacle = obstacle.center - pos;
        let dist = to_obstacle.norm();
        let dir = if dist > 0.0 { to_obstacle / dist } else { Vector2::x() };
        let clearance = dist - obstacle.radius;
        let mut ortho = Vector2::zeros();
        if clearance <= gains.obstacle_radius {
            let floored = clearance.max(REPULSION_FLOOR);
            repulsion -= dir * (gains.repel_gain / (floored * floored));
            let closeness = 1.0 - clearance.max(0.0) / gains.obstacle_radius.max(f64::MIN_POSITIVE);
            // Slide toward the side the attraction already leans to; left on a tie.
            let side = if cross(dir, attraction) >= 0.0 { 1.0 } else { -1.0 };
            ortho = gains.orthogonal_obstacle_gain * closeness * side * perp(dir);
        }
        obstacle_orthogonal += ortho;
        obstacle_terms.push((dir, ortho));
    }

    Ok(FieldForces {
        attraction,
        repulsion,
        ball_orthogonal,
        obstacle_orthogonal,
        robot_to_ball,
        obstacle_terms,
        behind_ball: behind,
    })
}

fn saturate(v: Vector2<f64>) -> Vector2<f64> {
    let n = v.norm();
    if n > 1.0 {
        v / n
    } else if n.is_finite() {
        v
    } else {
        Vector2::zeros()
    }
}

/// Sums the field into a gait command.
///
/// Far from the behind-ball position the robot turns toward the ball; within
/// `near_threshold` it turns toward the kick target, with a linear blend in
/// between up to twice that distance.
pub fn compute_command(
    robot: &Pose2,
    ball: Vector2<f64>,
    kick_target: Vector2<f64>,
    obstacles: &[Obstacle],
    gains: &BehaviorGains,
) -> Result<GaitCommand> {
    let forces = field_forces(robot, ball, kick_target, obstacles, gains)?;
    let walk = saturate(forces.total());

    let pos = robot.position();
    let heading_error = |goal: Vector2<f64>| {
        let d = goal - pos;
        if d.norm() > 0.0 {
            wrap_angle(d.y.atan2(d.x) - robot.theta)
        } else {
            0.0
        }
    };
    let face_ball = gains.face_ball_gain * heading_error(ball);
    let face_target = gains.face_target_gain * heading_error(kick_target);
    let dist = (forces.behind_ball - pos).norm();
    let near = gains.near_threshold;
    let weight = if near > 0.0 { ((dist - near) / near).clamp(0.0, 1.0) } else { 1.0 };
    let turn = (weight * face_ball + (1.0 - weight) * face_target).clamp(-1.0, 1.0);
    Ok(GaitCommand {
        walk,
        turn: if turn.is_finite() { turn } else { 0.0 },
    })
}

/// Integrates the command on a holonomic point mass and reports the path.
pub fn holonomic_rollout(
    start: Pose2,
    ball: Vector2<f64>,
    kick_target: Vector2<f64>,
    obstacles: &[Obstacle],
    gains: &BehaviorGains,
    max_speed: f64,
    max_turn_rate: f64,
    dt: f64,
    steps: usize,
) -> Result<Vec<Pose2>> {
    let mut pose = start;
    let mut path = Vec::with_capacity(steps + 1);
    path.push(pose);
    for _ in 0..steps {
        let cmd = compute_command(&pose, ball, kick_target, obstacles, gains)?;
        pose.x += cmd.walk.x * max_speed * dt;
        pose.y += cmd.walk.y * max_speed * dt;
        pose.theta = wrap_angle(pose.theta + cmd.turn * max_turn_rate * dt);
        path.push(pose);
    }
    Ok(path)
}

/// One ball observation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection {
    pub t: f64,
    pub pos: Vector2<f64>,
}

/// Quadratic ball motion about epoch `t0`.
///
/// Fits are anchored at the mean detection time, where the velocity
/// estimate is best conditioned; use [`BallTrack::advanced_to`] to move the
/// epoch to the current time before predicting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallTrack {
    pub p0: Vector2<f64>,
    pub v0: Vector2<f64>,
    pub a0: Vector2<f64>,
    pub t0: f64,
    pub residual_rms: f64,
}

impl BallTrack {
    pub fn position_at(&self, dt: f64) -> Vector2<f64> {
        self.p0 + self.v0 * dt + self.a0 * (0.5 * dt * dt)
    }

    /// Same motion with its epoch moved to `t`.
    pub fn advanced_to(&self, t: f64) -> BallTrack {
        let dt = t - self.t0;
        BallTrack {
            p0: self.position_at(dt),
            v0: self.v0 + self.a0 * dt,
            t0: t,
            ..*self
        }
    }

    /// Re-expresses the track in a frame with the given origin and x axis.
    pub fn in_frame(&self, origin: Vector2<f64>, x_axis_angle: f64) -> BallTrack {
        BallTrack {
            p0: rotate(self.p0 - origin, -x_axis_angle),
            v0: rotate(self.v0, -x_axis_angle),
            a0: rotate(self.a0, -x_axis_angle),
            ..*self
        }
    }
}

const SVD_MAX_ITERATIONS: usize = 1000;

/// Least-squares fit of `p0 + v0 dt + a0 dt^2 / 2` per axis.
pub fn fit_ball_track(detections: &[Detection]) -> Result<BallTrack> {
    let n = detections.len();
    if n < 3 {
        return Err(Error::TooFewDetections(n));
    }
    if detections.iter().any(|d| !(d.t.is_finite() && d.pos.x.is_finite() && d.pos.y.is_finite())) {
        return Err(Error::NonFinite("ball detection"));
    }
    if detections.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(Error::NonIncreasingTimestamps);
    }
    let t0 = detections.iter().map(|d| d.t).sum::<f64>() / n as f64;
    let design = DMatrix::from_fn(n, 3, |i, j| {
        let dt = detections[i].t - t0;
        match j {
            0 => 1.0,
            1 => dt,
            _ => 0.5 * dt * dt,
        }
    });
    if design.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("ball detection times"));
    }
    let svd = design.clone().try_svd(true, true, f64::EPSILON, SVD_MAX_ITERATIONS).ok_or(Error::RankDeficient)?;
    let sv = &svd.singular_values;
    let (max, min) = (sv.max(), sv.min());
    if !(min > max * 1e-12) {
        return Err(Error::RankDeficient);
    }
    let mut coeffs = [[0.0; 3]; 2];
    let mut sq = 0.0;
    for axis in 0..2 {
        let b = DVector::from_iterator(n, detections.iter().map(|d| d.pos[axis]));
        let x = svd.solve(&b, 0.0).map_err(|_| Error::RankDeficient)?;
        sq += (&design * &x - &b).norm_squared();
        coeffs[axis] = [x[0], x[1], x[2]];
    }
    if !(coeffs.iter().flatten().all(|c| c.is_finite()) && sq.is_finite()) {
        return Err(Error::NonFinite("ball track fit"));
    }
    Ok(BallTrack {
        p0: Vector2::new(coeffs[0][0], coeffs[1][0]),
        v0: Vector2::new(coeffs[0][1], coeffs[1][1]),
        a0: Vector2::new(coeffs[0][2], coeffs[1][2]),
        t0,
        residual_rms: (sq / n as f64).sqrt(),
    })
}

/// Bounded buffer of recent detections.
#[derive(Clone, Debug)]
pub struct DetectionWindow {
    buffer: VecDeque<Detection>,
    max_len: usize,
    max_age: f64,
}

impl Default for DetectionWindow {
    fn default() -> Self {
        Self::new(20, 1.0)
    }
}

impl DetectionWindow {
    pub fn new(max_len: usize, max_age: f64) -> Self {
        Self {
            buffer: VecDeque::with_capacity(max_len),
            max_len,
            max_age,
        }
    }

    pub fn push(&mut self, detection: Detection) {
        if self.buffer.back().is_some_and(|last| detection.t <= last.t) {
            self.buffer.clear();
        }
        self.buffer.push_back(detection);
        while self.buffer.len() > self.max_len {
            self.buffer.pop_front();
        }
        while self
            .buffer
            .front()
            .is_some_and(|first| detection.t - first.t > self.max_age)
        {
            self.buffer.pop_front();
        }
    }

    pub fn clear(&mut self) {
        self.buffer.clear();
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn fit(&self) -> Result<BallTrack> {
        let detections: Vec<Detection> = self.buffer.iter().copied().collect();
        fit_ball_track(&detections)
    }
}

/// Time after the fit epoch at which the ball crosses `x = contact_line_x`,
/// or `None` if it stops or turns away first.
pub fn predict_arrival(track: &BallTrack, contact_line_x: f64) -> Option<f64> {
    let (p, v, a) = (track.p0.x - contact_line_x, track.v0.x, track.a0.x);
    if p == 0.0 {
        return Some(0.0);
    }
    // The quadratic model only holds until friction brings the ball to rest.
    let stop = if a * v < 0.0 { -v / a } else { f64::INFINITY };
    let mut roots = Vec::with_capacity(2);
    if a.abs() < 1e-12 {
        if v != 0.0 {
            roots.push(-p / v);
        }
    } else {
        let disc = v * v - 2.0 * a * p;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let q = -0.5 * (v + if v >= 0.0 { sq } else { -sq });
        if q != 0.0 {
            roots.push(q / (0.5 * a));
            roots.push(p / q);
        } else {
            roots.push((-v) / a);
        }
    }
    roots
        .into_iter()
        .filter(|t| t.is_finite() && *t >= 0.0 && *t <= stop)
        .min_by(f64::total_cmp)
}

/// True when the predicted arrival is within `tolerance` of `kick_lead`.
pub fn should_kick(track: &BallTrack, contact_line_x: f64, kick_lead: f64, tolerance: f64) -> bool {
    match predict_arrival(track, contact_line_x) {
        Some(t) => (t - kick_lead).abs() <= tolerance,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};
    use std::f64::consts::FRAC_PI_2;

    fn v(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(x, y)
    }

    #[test]
    fn behind_ball_geometry() {
        let p = behind_ball_position(v(0.0, 0.0), v(1.0, 0.0), 0.2).unwrap();
        assert!((p - v(-0.2, 0.0)).norm() < 1e-15);
        let r = behind_ball_position(v(0.0, 0.0), v(0.0, 1.0), 0.2).unwrap();
        assert!((r - v(0.0, -0.2)).norm() < 1e-15);
        assert_eq!(behind_ball_position(v(0.3, 0.4), v(2.0, 1.0), 0.0).unwrap(), v(0.3, 0.4));
        assert_eq!(behind_ball_position(v(1.0, 1.0), v(1.0, 1.0), 0.2), Err(Error::CoincidentBallTarget));
    }

    #[test]
    fn far_robot_walks_straight_at_full_speed() {
        let gains = BehaviorGains::default();
        let ball = v(0.0, 0.0);
        let target = v(1.0, 0.0);
        let robot = Pose2 { x: -3.0, y: 0.0, theta: 0.0 };
        let cmd = compute_command(&robot, ball, target, &[], &gains).unwrap();
        assert!((cmd.walk.norm() - 1.0).abs() < 1e-12);
        let behind = behind_ball_position(ball, target, gains.standoff).unwrap();
        let want = behind - robot.position();
        let angle = cmd.walk.y.atan2(cmd.walk.x) - want.y.atan2(want.x);
        assert!(angle.abs() < 1e-9);
    }

    #[test]
    fn equilibrium_at_behind_ball_pose() {
        let gains = BehaviorGains::default();
        let ball = v(1.0, 0.5);
        let target = v(4.0, 0.5);
        let behind = behind_ball_position(ball, target, gains.standoff).unwrap();
        let robot = Pose2 { x: behind.x, y: behind.y, theta: 0.0 };
        let cmd = compute_command(&robot, ball, target, &[], &gains).unwrap();
        assert!(cmd.walk.norm() < 0.05);
        assert!(cmd.turn.abs() < 0.05);
    }

    #[test]
    fn obstacle_is_avoided() {
        let gains = BehaviorGains::default();
        let ball = v(3.0, 0.0);
        let target = v(5.0, 0.0);
        let obstacle = Obstacle { center: v(1.0, 0.0), radius: 0.25 };
        let start = Pose2 { x: -1.0, y: 0.0, theta: 0.0 };
        let path = holonomic_rollout(start, ball, target, &[obstacle], &gains, 0.3, 1.0, 0.01, 3000).unwrap();
        let min_clearance = path
            .iter()
            .map(|p| (p.position() - obstacle.center).norm() - obstacle.radius)
            .fold(f64::INFINITY, f64::min);
        assert!(min_clearance > 0.0, "{min_clearance}");
        // And it gets past the obstacle.
        assert!(path.last().unwrap().x > 2.0);
    }

    proptest! {
        #[test]
        fn command_is_saturated(x in -5.0..5.0f64, y in -5.0..5.0f64, th in -3.2..3.2f64,
                                bx in -3.0..3.0f64, by in -3.0..3.0f64,
                                ox in -3.0..3.0f64, oy in -3.0..3.0f64) {
            let gains = BehaviorGains::default();
            let robot = Pose2 { x, y, theta: th };
            let obstacle = Obstacle { center: v(ox, oy), radius: 0.2 };
            let cmd = compute_command(&robot, v(bx, by), v(4.5, 0.0), &[obstacle], &gains).unwrap();
            prop_assert!(cmd.walk.norm() <= 1.0 + 1e-12);
            prop_assert!(cmd.turn.abs() <= 1.0);
        }

        #[test]
        fn orthogonal_terms_are_perpendicular(x in -5.0..5.0f64, y in -5.0..5.0f64,
                                              ox in -3.0..3.0f64, oy in -3.0..3.0f64) {
            let gains = BehaviorGains::default();
            let robot = Pose2 { x, y, theta: 0.0 };
            let obstacle = Obstacle { center: v(ox, oy), radius: 0.2 };
            let f = field_forces(&robot, v(0.5, 0.2), v(4.5, 0.0), &[obstacle], &gains).unwrap();
            prop_assert!(f.ball_orthogonal.dot(&f.robot_to_ball).abs() < 1e-12);
            for (dir, ortho) in &f.obstacle_terms {
                prop_assert!(ortho.dot(dir).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_velocity_fit_is_exact() {
        let dets: Vec<Detection> = (0..20)
            .map(|k| {
                let t = 1.0 + k as f64 / 30.0;
                Detection { t, pos: v(2.0 - 1.3 * t, 0.4 + 0.2 * t) }
            })
            .collect();
        let track = fit_ball_track(&dets).unwrap();
        assert!((track.v0 - v(-1.3, 0.2)).norm() < 1e-9);
        assert!(track.a0.norm() < 1e-9);
        assert!(track.residual_rms < 1e-9);
        let now = track.advanced_to(dets[19].t);
        assert!((now.p0 - dets[19].pos).norm() < 1e-9);
    }

    #[test]
    fn decelerating_ball_velocity_within_tolerance() {
        let v_true = v(-1.5, 0.3);
        let a_true = -0.5 * v_true.normalize();
        let mut errors: Vec<f64> = (0..100)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let noise = Normal::new(0.0, 0.01).unwrap();
                let dets: Vec<Detection> = (0..20)
                    .map(|k| {
                        let t = k as f64 / 30.0;
                        let p = v(3.0, 0.0) + v_true * t + a_true * (0.5 * t * t);
                        Detection { t, pos: p + v(noise.sample(&mut rng), noise.sample(&mut rng)) }
                    })
                    .collect();
                let track = fit_ball_track(&dets).unwrap();
                (track.v0 - (v_true + a_true * track.t0)).norm()
            })
            .collect();
        errors.sort_by(f64::total_cmp);
        assert!(errors[94] < 0.1, "p95 {}", errors[94]);
    }

    #[test]
    fn fit_errors() {
        let two = [
            Detection { t: 0.0, pos: v(0.0, 0.0) },
            Detection { t: 0.1, pos: v(0.1, 0.0) },
        ];
        assert_eq!(fit_ball_track(&two), Err(Error::TooFewDetections(2)));
        let dup = [
            Detection { t: 0.0, pos: v(0.0, 0.0) },
            Detection { t: 0.1, pos: v(0.1, 0.0) },
            Detection { t: 0.1, pos: v(0.1, 0.0) },
        ];
        assert_eq!(fit_ball_track(&dup), Err(Error::NonIncreasingTimestamps));
        let huge = [
            Detection { t: -1e300, pos: v(0.0, 0.0) },
            Detection { t: 0.0, pos: v(0.1, 0.0) },
            Detection { t: 1e300, pos: v(0.2, 0.0) },
        ];
        assert!(matches!(fit_ball_track(&huge), Err(Error::NonFinite(_))));
    }

    fn track(p: Vector2<f64>, vel: Vector2<f64>, acc: Vector2<f64>) -> BallTrack {
        BallTrack { p0: p, v0: vel, a0: acc, t0: 0.0, residual_rms: 0.0 }
    }

    #[test]
    fn arrival_cases() {
        assert_eq!(predict_arrival(&track(v(2.0, 0.0), v(-1.0, 0.0), v(0.0, 0.0)), 0.0), Some(2.0));
        // Stops at x = 2 - 1.25 = 0.75 before reaching the line.
        assert_eq!(predict_arrival(&track(v(2.0, 0.0), v(-1.0, 0.0), v(0.4, 0.0)), 0.0), None);
        assert_eq!(predict_arrival(&track(v(2.0, 0.0), v(1.0, 0.0), v(0.0, 0.0)), 0.0), None);
        // Decelerating but reaching: 0.5*0.2 t^2 - t + 1 = 0.
        let t = predict_arrival(&track(v(1.0, 0.0), v(-1.0, 0.0), v(0.2, 0.0)), 0.0).unwrap();
        assert!((t - (1.0 - (0.6f64).sqrt()) / 0.2).abs() < 1e-12);
    }

    #[test]
    fn kick_trigger_window() {
        let tr = track(v(2.0, 0.0), v(-1.0, 0.0), v(0.0, 0.0));
        assert!(should_kick(&tr, 0.0, 2.0, 0.0));
        assert!(!should_kick(&tr, 0.0, 1.5, 0.1));
        let never = track(v(2.0, 0.0), v(-1.0, 0.0), v(0.4, 0.0));
        assert!(!should_kick(&never, 0.0, 2.0, 10.0));
    }

    #[test]
    fn window_is_bounded() {
        let mut w = DetectionWindow::default();
        for k in 0..100 {
            w.push(Detection { t: k as f64 / 30.0, pos: v(0.0, 0.0) });
        }
        assert_eq!(w.len(), 20);
        let mut w = DetectionWindow::new(100, 1.0);
        for k in 0..100 {
            w.push(Detection { t: k as f64 / 10.0, pos: v(0.0, 0.0) });
        }
        assert_eq!(w.len(), 11);
    }

    #[test]
    fn rotation_equivariance() {
        let gains = BehaviorGains::default();
        let robot = Pose2 { x: -1.0, y: 0.7, theta: 0.3 };
        let ball = v(0.4, -0.2);
        let target = v(4.5, 0.0);
        let obstacle = Obstacle { center: v(-0.2, 0.3), radius: 0.2 };
        let base = compute_command(&robot, ball, target, &[obstacle], &gains).unwrap();
        let angle = FRAC_PI_2 * 0.7;
        let rp = rotate(robot.position(), angle);
        let rotated = compute_command(
            &Pose2 { x: rp.x, y: rp.y, theta: robot.theta + angle },
            rotate(ball, angle),
            rotate(target, angle),
            &[Obstacle { center: rotate(obstacle.center, angle), radius: 0.2 }],
            &gains,
        )
        .unwrap();
        assert!((rotated.walk - rotate(base.walk, angle)).norm() < 1e-9);
        assert!((rotated.turn - base.turn).abs() < 1e-9);
    }
}
