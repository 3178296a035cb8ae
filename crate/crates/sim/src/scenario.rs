//! Closed-loop scenario runner.
//!
//! Each tick the planner reads the CoM state (estimated or true), the gait
//! oscillator advances, the world integrates the pendulum exactly (splitting
//! the tick at support exchange), and the sensors feed the estimator. Records
//! are taken at tick boundaries, before the world moves on.

use std::fmt;

use lipwalk::behavior::{predict_arrival, should_kick, Detection, DetectionWindow};
use lipwalk::capture::{CapturePlanner, GaitNominal, Saturation, StepPlan};
use lipwalk::estimator::{CoMState, ComEstimator, TrunkImu};
use lipwalk::gait::GaitGenerator;
use lipwalk::kick::{compose_kick, feasible, kick_frame_to_local, strike_phase, swing_rate, kick_rate, SwingSpec};
use lipwalk::lip::{propagate, AxisState, PendulumParams};
use lipwalk::Side;
use nalgebra::{Matrix3, Rotation3, Vector2, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{ConfigError, Feedback, ScenarioConfig};
use crate::trace::{Flags, TraceRecord};
use crate::world::{push_delta_v, Ball, Rolling};

/// Relative tolerance for a step to count as back on the nominal gait.
pub const NOMINAL_TOLERANCE: f64 = 0.05;

/// Maximum gap between predicted arrival and actual contact for a valid kick, s.
pub const CONTACT_TIMING_TOLERANCE: f64 = 0.05;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("tick {tick}: {source}")]
    Core {
        tick: usize,
        #[source]
        source: lipwalk::Error,
    },
    #[error("non-finite state at record {record}")]
    NonFinite { record: usize },
}

/// One completed step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub start: f64,
    pub end: f64,
    pub support: Side,
    /// Where the swing foot landed relative to the support foot.
    pub landing: [f64; 2],
    /// Sagittal CoM velocity when passing over the support foot, if it did.
    pub apex_velocity: Option<f64>,
    pub pushed: bool,
}

impl StepRecord {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    /// Duration and landing within `tol` of the nominal gait.
    pub fn is_nominal(&self, nominal: &GaitNominal, params: &PendulumParams, tol: f64) -> bool {
        let t0 = nominal.step_duration;
        let w = nominal.lateral_step_width;
        let l = nominal.sagittal_step_length(params);
        (self.duration() - t0).abs() <= tol * t0
            && (self.landing[1].abs() - w).abs() <= tol * w
            && (self.landing[0] - l).abs() <= tol * l.abs().max(w)
    }
}

/// What happened to one ball pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassOutcome {
    pub pass: usize,
    pub kick_start: Option<f64>,
    /// Absolute time at which the ball was predicted to reach the contact line.
    pub predicted_arrival: Option<f64>,
    pub contact_time: Option<f64>,
    pub lateral_error: Option<f64>,
    pub contact: bool,
    pub goal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub seed: u64,
    pub ticks: usize,
    pub fell: bool,
    pub fall_time: Option<f64>,
    pub steps: usize,
    pub steps_to_recover: Option<usize>,
    pub max_step_sagittal: f64,
    pub max_step_lateral: f64,
    pub capture_count: usize,
    pub passes: usize,
    pub contacts: usize,
    pub goals: usize,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt_usize = |v: Option<usize>| v.map_or("none".to_string(), |v| v.to_string());
        let opt_f64 = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.3}"));
        write!(
            f,
            "seed={} ticks={} fell={} fall_time={} steps={} steps_to_recover={} max_step_x={:.4} max_step_y={:.4} \
             capture_count={} passes={} contacts={} goals={}",
            self.seed,
            self.ticks,
            self.fell,
            opt_f64(self.fall_time),
            self.steps,
            opt_usize(self.steps_to_recover),
            self.max_step_sagittal,
            self.max_step_lateral,
            self.capture_count,
            self.passes,
            self.contacts,
            self.goals
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub trace: Vec<TraceRecord>,
    pub steps: Vec<StepRecord>,
    pub passes: Vec<PassOutcome>,
    pub summary: Summary,
}

/// Validates `config` and runs it to completion or until the robot falls.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunResult, SimError> {
    config.validate()?;
    Simulation::new(config)?.run()
}

fn rotate(v: Vector2<f64>, angle: f64) -> Vector2<f64> {
    let (s, c) = angle.sin_cos();
    Vector2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

struct ActiveKick {
    start: f64,
    spec: SwingSpec,
    predicted_arrival: f64,
}

struct PassState {
    index: usize,
    kicked: bool,
    contact_checked: bool,
}

/// Kicking geometry of the standing robot.
struct Kicker {
    home: Vector2<f64>,
    direction: f64,
    feasible: bool,
    lead: f64,
    base_spec: SwingSpec,
}

struct Simulation<'a> {
    cfg: &'a ScenarioConfig,
    dt: f64,
    params: PendulumParams,
    tau: f64,
    planner: CapturePlanner,
    gait: GaitGenerator,
    estimator: ComEstimator,
    rng: ChaCha8Rng,
    pos_noise: Normal<f64>,
    acc_noise: Normal<f64>,
    ball_noise: Normal<f64>,
    trunk: Matrix3<f64>,

    support: Side,
    foot: Vector2<f64>,
    com: [AxisState; 2],
    accel: Vector2<f64>,
    plan: StepPlan,
    pushes: Vec<(f64, Vector2<f64>)>,
    next_push: usize,
    pending: Flags,

    steps: Vec<StepRecord>,
    step_start: f64,
    step_pushed: bool,
    step_apex: Option<f64>,
    fall_timer: f64,
    fall_time: Option<f64>,

    ball: Ball,
    rolling: Rolling,
    window: DetectionWindow,
    next_pass: usize,
    pass: Option<PassState>,
    outcomes: Vec<PassOutcome>,
    kicker: Kicker,
    kick: Option<ActiveKick>,
}

impl<'a> Simulation<'a> {
    fn new(cfg: &'a ScenarioConfig) -> Result<Self, SimError> {
        let core = |source| SimError::Core { tick: 0, source };
        let params = cfg.pendulum();
        let tau = params.tau();
        let planner = cfg.planner();
        let nominal = cfg.nominal();
        let r = &cfg.robot;
        let support: Side = r.start_support.into();
        let half_width = 0.5 * r.gait.lateral_step_width;
        let start = Vector2::new(r.start[0], r.start[1]);
        let foot = start + Vector2::new(0.0, support.sign() * half_width);

        let (com, lift_off) = if r.walking {
            let (sag, lat) = nominal.initial_state(&params, support);
            let com = [sag.shifted(-foot.x), lat.shifted(-foot.y)];
            let lift_off = Vector2::new(
                -nominal.sagittal_step_length(&params),
                -support.sign() * nominal.lateral_step_width,
            );
            (com, lift_off)
        } else {
            (
                [AxisState::new(foot.x, 0.0), AxisState::new(foot.y, 0.0)],
                Vector2::new(0.0, -support.sign() * nominal.lateral_step_width),
            )
        };
        let gait = GaitGenerator::new(nominal.step_duration, support, lift_off, r.lift_height).map_err(core)?;
        let accel = Vector2::new((com[0].x - foot.x) / (tau * tau), (com[1].x - foot.y) / (tau * tau));
        let accel = if r.walking { accel } else { Vector2::zeros() };
        let estimator = ComEstimator::new(
            cfg.filter(),
            r.gravity,
            [
                CoMState::new(com[0].x, com[0].v, accel.x),
                CoMState::new(com[1].x, com[1].v, accel.y),
            ],
        )
        .map_err(core)?;

        let s = &cfg.sensors;
        let trunk = *Rotation3::from_euler_angles(s.trunk_roll_deg.to_radians(), s.trunk_pitch_deg.to_radians(), 0.0)
            .matrix();

        let mut pushes: Vec<(f64, Vector2<f64>)> = cfg
            .events
            .push
            .iter()
            .map(|p| {
                let dv = push_delta_v(p.pendulum_mass, p.speed(r.gravity), r.mass);
                (p.time, p.direction.unit() * dv)
            })
            .collect();
        pushes.sort_by(|a, b| a.0.total_cmp(&b.0));

        let kick_leg: Side = cfg.kick.leg.into();
        let kick_params = cfg.kick_params();
        let home = start + Vector2::new(0.0, kick_leg.sign() * half_width);
        let goal = Vector2::new(cfg.field.goal_x, 0.0);
        let to_goal = goal - home;
        let direction = to_goal.y.atan2(to_goal.x);
        let base_spec = kick_params.swing_spec(&kick_params.amplitudes(Vector2::new(kick_params.optimal_distance, 0.0)));
        let kicker = Kicker {
            home,
            direction,
            feasible: !r.walking && kick_leg != support && feasible(direction, kick_leg, &kick_params.sector),
            lead: strike_phase(&base_spec) * cfg.kick.duration,
            base_spec,
        };

        let normal = |sigma: f64| Normal::new(0.0, sigma).expect("validated noise level");
        Ok(Self {
            cfg,
            dt: cfg.tick,
            params,
            tau,
            plan: if r.walking { planner.nominal_plan(support) } else { idle_plan() },
            planner,
            gait,
            estimator,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            pos_noise: normal(s.sigma_pos),
            acc_noise: normal(s.sigma_acc),
            ball_noise: normal(s.ball_sigma),
            trunk,
            support,
            foot,
            com,
            accel,
            pushes,
            next_push: 0,
            pending: Flags::empty(),
            steps: Vec::new(),
            step_start: 0.0,
            step_pushed: false,
            step_apex: None,
            fall_timer: 0.0,
            fall_time: None,
            ball: Ball::at_rest(Vector2::new(cfg.ball.position[0], cfg.ball.position[1])),
            rolling: Rolling {
                mu_roll: cfg.ball.mu_roll,
                gravity: r.gravity,
                stop_speed: cfg.ball.stop_speed,
            },
            window: DetectionWindow::new(cfg.behavior.window_len, cfg.behavior.window_age),
            next_pass: 0,
            pass: None,
            outcomes: Vec::new(),
            kicker,
            kick: None,
        })
    }

    fn run(mut self) -> Result<RunResult, SimError> {
        let n = self.cfg.tick_count();
        let mut trace = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let t = k as f64 * self.dt;
            if self.cfg.robot.walking {
                let [sag, lat] = self.relative_feedback();
                self.plan = self.planner.plan_step(&sag, &lat, self.support, self.gait.elapsed());
            }
            let record = self.record(t);
            if !record.is_finite() {
                return Err(SimError::NonFinite { record: k });
            }
            trace.push(record);
            if k == n || self.fall_time.is_some() {
                break;
            }
            self.step(t).map_err(|source| SimError::Core { tick: k, source })?;
        }
        self.finish_pass();
        let summary = self.summary(trace.len());
        Ok(RunResult {
            trace,
            steps: self.steps,
            passes: self.outcomes,
            summary,
        })
    }

    fn feedback(&self) -> [CoMState; 2] {
        match self.cfg.robot.feedback {
            Feedback::Estimate => self.estimator.states(),
            Feedback::Truth => [
                CoMState::new(self.com[0].x, self.com[0].v, self.accel.x),
                CoMState::new(self.com[1].x, self.com[1].v, self.accel.y),
            ],
        }
    }

    fn relative_feedback(&self) -> [CoMState; 2] {
        let [x, y] = self.feedback();
        [
            CoMState::new(x.c - self.foot.x, x.c_dot, x.c_ddot),
            CoMState::new(y.c - self.foot.y, y.c_dot, y.c_ddot),
        ]
    }

    fn record(&mut self, t: f64) -> TraceRecord {
        let mut flags = std::mem::take(&mut self.pending);
        if self.cfg.robot.walking {
            flags.insert(saturation_flags(&self.plan.saturation));
        }
        let est = self.estimator.states();
        TraceRecord {
            t,
            com: [self.com[0].x, self.com[1].x],
            com_vel: [self.com[0].v, self.com[1].v],
            est: [
                [est[0].c, est[0].c_dot, est[0].c_ddot],
                [est[1].c, est[1].c_dot, est[1].c_ddot],
            ],
            zmp: self.plan.zmp_offset,
            step_duration: self.plan.duration,
            step: self.plan.landing_offset,
            support: self.support,
            gait_phase: if self.cfg.robot.walking { self.gait.phase().phi } else { 0.0 },
            kick_phase: self.kick.as_ref().map_or(-1.0, |k| ((t - k.start) / self.cfg.kick.duration).clamp(0.0, 1.0)),
            ball: [self.ball.pos.x, self.ball.pos.y],
            flags,
        }
    }

    fn step(&mut self, t: f64) -> lipwalk::Result<()> {
        let dt = self.dt;
        if self.cfg.robot.walking {
            self.step_robot(t)?;
        }
        self.step_ball(t);
        self.sense(t + dt)?;
        if !(self.com.iter().all(AxisState::is_finite) && self.estimator.states().iter().all(CoMState::is_finite)) {
            return Err(lipwalk::Error::NonFinite("simulated state"));
        }
        if self.cfg.robot.walking {
            let offset = Vector2::new(self.com[0].x, self.com[1].x) - self.foot;
            if offset.norm() > self.cfg.robot.capture_bound {
                self.fall_timer += dt;
                if self.fall_timer > self.cfg.robot.fall_time {
                    self.fall_time = Some(t + dt);
                    self.pending.insert(Flags::FALL);
                }
            } else {
                self.fall_timer = 0.0;
            }
        }
        Ok(())
    }

    fn step_robot(&mut self, t: f64) -> lipwalk::Result<()> {
        let dt = self.dt;
        // A push acts as a constant force over the tick it falls into.
        let mut dv = Vector2::zeros();
        while self.next_push < self.pushes.len() && self.pushes[self.next_push].0 < t + dt {
            dv += self.pushes[self.next_push].1;
            self.next_push += 1;
            self.pending.insert(Flags::PUSH);
            self.step_pushed = true;
        }
        let shift = dv / dt * (self.tau * self.tau);
        let zmp = self.foot + Vector2::new(self.plan.zmp_offset[0], self.plan.zmp_offset[1]);
        let plan = self.plan;

        match self.gait.advance_phase(dt, &plan)? {
            Some(exchange) => {
                let pivot = zmp - shift;
                self.advance_com(pivot, exchange.offset)?;
                let end = t + exchange.offset;
                self.steps.push(StepRecord {
                    start: self.step_start,
                    end,
                    support: self.support,
                    landing: plan.landing_offset,
                    apex_velocity: self.step_apex,
                    pushed: self.step_pushed,
                });
                self.foot += Vector2::new(plan.landing_offset[0], plan.landing_offset[1]);
                self.support = exchange.support_side;
                self.step_start = end;
                self.step_pushed = false;
                self.step_apex = None;
                self.pending.insert(Flags::EXCHANGE);
                let pivot = self.foot - shift;
                self.advance_com(pivot, dt - exchange.offset)?;
                self.set_accel(pivot);
            }
            None => {
                let pivot = zmp - shift;
                self.advance_com(pivot, dt)?;
                self.set_accel(pivot);
            }
        }
        Ok(())
    }

    fn advance_com(&mut self, pivot: Vector2<f64>, dt: f64) -> lipwalk::Result<()> {
        let before = self.com[0].x - self.foot.x;
        let v_before = self.com[0].v;
        for i in 0..2 {
            self.com[i] = propagate(self.com[i], pivot[i], &self.params, dt)?;
        }
        let after = self.com[0].x - self.foot.x;
        if self.step_apex.is_none() && before < 0.0 && after >= 0.0 {
            let frac = before / (before - after);
            self.step_apex = Some(v_before + (self.com[0].v - v_before) * frac);
        }
        Ok(())
    }

    fn set_accel(&mut self, pivot: Vector2<f64>) {
        let k = 1.0 / (self.tau * self.tau);
        self.accel = Vector2::new((self.com[0].x - pivot.x) * k, (self.com[1].x - pivot.y) * k);
    }

    fn due(&self, rate: f64, t_next: f64) -> bool {
        let eps = 1e-9;
        ((t_next * rate + eps).floor() - ((t_next - self.dt) * rate + eps).floor()) >= 1.0
    }

    fn sense(&mut self, t_next: f64) -> lipwalk::Result<()> {
        if self.due(self.cfg.sensors.rate_hz, t_next) {
            let measured = Vector2::new(
                self.com[0].x + self.pos_noise.sample(&mut self.rng),
                self.com[1].x + self.pos_noise.sample(&mut self.rng),
            );
            let g = self.cfg.robot.gravity;
            let specific = Vector3::new(self.accel.x, self.accel.y, g);
            let noise = Vector3::new(
                self.acc_noise.sample(&mut self.rng),
                self.acc_noise.sample(&mut self.rng),
                self.acc_noise.sample(&mut self.rng),
            );
            let imu = TrunkImu {
                accel: self.trunk.transpose() * specific + noise,
                orientation: self.trunk,
            };
            self.estimator.step(measured, &imu, self.dt)?;
        } else {
            self.estimator.predict(self.dt)?;
        }

        if !self.cfg.events.ball_pass.is_empty() && self.due(self.cfg.sensors.ball_rate_hz, t_next) {
            let pos = self.ball.pos
                + Vector2::new(self.ball_noise.sample(&mut self.rng), self.ball_noise.sample(&mut self.rng));
            self.window.push(Detection { t: t_next, pos });
            self.pending.insert(Flags::DETECTION);
        }
        Ok(())
    }

    fn finish_pass(&mut self) {
        if let Some(pass) = self.pass.take() {
            if self.outcomes.len() <= pass.index {
                self.outcomes.push(PassOutcome {
                    pass: pass.index,
                    kick_start: None,
                    predicted_arrival: None,
                    contact_time: None,
                    lateral_error: None,
                    contact: false,
                    goal: false,
                });
            }
        }
    }

    fn outcome(&mut self) -> Option<&mut PassOutcome> {
        let index = self.pass.as_ref()?.index;
        if self.outcomes.len() <= index {
            self.outcomes.push(PassOutcome {
                pass: index,
                kick_start: None,
                predicted_arrival: None,
                contact_time: None,
                lateral_error: None,
                contact: false,
                goal: false,
            });
        }
        self.outcomes.last_mut()
    }

    /// Ball in the kick frame: origin at the kicking foot, x toward the goal.
    fn to_kick_frame(&self, p: Vector2<f64>) -> Vector2<f64> {
        rotate(p - self.kicker.home, -self.kicker.direction)
    }

    fn step_ball(&mut self, t: f64) {
        let dt = self.dt;
        let passes = &self.cfg.events.ball_pass;
        while self.next_pass < passes.len() && passes[self.next_pass].time < t + dt {
            let pass = &passes[self.next_pass];
            self.finish_pass();
            self.ball = Ball {
                pos: Vector2::new(pass.start[0], pass.start[1]),
                vel: Vector2::new(pass.velocity[0], pass.velocity[1]),
            };
            // Each pass starts a fresh track.
            self.window.clear();
            self.kick = None;
            self.pass = Some(PassState {
                index: self.next_pass,
                kicked: false,
                contact_checked: false,
            });
            self.next_pass += 1;
            self.pending.insert(Flags::PASS);
        }

        self.maybe_trigger_kick(t);

        let before = self.ball;
        let mut after = before.advanced(dt, &self.rolling);
        let line = self.cfg.kick.optimal_distance;
        let x0 = self.to_kick_frame(before.pos).x;
        let x1 = self.to_kick_frame(after.pos).x;
        let checked = self.pass.as_ref().is_none_or(|p| p.contact_checked);
        if !checked && x0 > line && x1 <= line {
            if let Some(p) = self.pass.as_mut() {
                p.contact_checked = true;
            }
            let frac = (x0 - line) / (x0 - x1);
            let tc = t + frac * dt;
            let at_contact = before.advanced(frac * dt, &self.rolling);
            if let Some(kicked) = self.contact(tc, &at_contact) {
                after = kicked.advanced((1.0 - frac) * dt, &self.rolling);
                self.pending.insert(Flags::CONTACT);
            }
        }

        // Goal line crossing.
        let gx = self.cfg.field.goal_x;
        if before.pos.x < gx && after.pos.x >= gx {
            let frac = (gx - before.pos.x) / (after.pos.x - before.pos.x);
            let y = before.pos.y + frac * (after.pos.y - before.pos.y);
            if y.abs() <= self.cfg.field.goal_half_width {
                self.pending.insert(Flags::GOAL);
                if let Some(o) = self.outcome() {
                    o.goal = true;
                }
            }
            // The ball comes to rest in the net or behind the line.
            after = Ball::at_rest(Vector2::new(gx, y));
        }
        self.ball = after;

        if let Some(kick) = &self.kick {
            if t + dt - kick.start >= self.cfg.kick.duration {
                self.kick = None;
            }
        }
    }

    fn maybe_trigger_kick(&mut self, t: f64) {
        let ready = self.kicker.feasible
            && self.kick.is_none()
            && self.pass.as_ref().is_some_and(|p| !p.kicked)
            && self.window.len() >= self.cfg.behavior.min_detections;
        if !ready {
            return;
        }
        let Ok(track) = self.window.fit() else {
            return;
        };
        let local = track.advanced_to(t).in_frame(self.kicker.home, self.kicker.direction);
        if local.v0.x >= 0.0 {
            return;
        }
        let line = self.cfg.kick.optimal_distance;
        let Some(arrival) = predict_arrival(&local, line) else {
            return;
        };
        let lead = self.kicker.lead;
        if !(should_kick(&local, line, lead, 0.5 * self.dt) || arrival < lead) {
            return;
        }
        let max_adjust = self.cfg.kick.max_adjust;
        let adjust = local.position_at(arrival).y.clamp(-max_adjust, max_adjust);
        let spec = SwingSpec {
            alpha_y: adjust,
            ..self.kicker.base_spec
        };
        self.kick = Some(ActiveKick {
            start: t,
            spec,
            predicted_arrival: t + arrival,
        });
        self.pending.insert(Flags::KICK);
        if let Some(p) = self.pass.as_mut() {
            p.kicked = true;
        }
        if let Some(o) = self.outcome() {
            o.kick_start = Some(t);
            o.predicted_arrival = Some(t + arrival);
        }
    }

    /// Resolves a ball reaching the contact line at `tc`. Returns the ball
    /// state after a valid strike.
    fn contact(&mut self, tc: f64, ball: &Ball) -> Option<Ball> {
        let kick = self.kick.as_ref()?;
        let duration = self.cfg.kick.duration;
        let phi = (tc - kick.start) / duration;
        if !(0.0..=1.0).contains(&phi) {
            return None;
        }
        let spec = kick.spec;
        let predicted = kick.predicted_arrival;
        let foot = compose_kick(phi, &spec).ok()?;
        let lateral_error = (self.to_kick_frame(ball.pos).y - foot.y).abs();
        let timing_ok = (tc - predicted).abs() <= CONTACT_TIMING_TOLERANCE;
        let aligned = lateral_error <= self.cfg.robot.foot.half_width + self.cfg.ball.radius;

        let foot_rate = Vector2::new(
            kick_rate(phi, &spec).ok()?,
            swing_rate(phi, spec.alpha_y, spec.phi_adj, spec.c_adj).ok()?,
        ) / duration;
        let foot_vel = kick_frame_to_local(foot_rate, self.kicker.direction);
        let n = Vector2::new(self.kicker.direction.cos(), self.kicker.direction.sin());
        let vn = ball.vel.dot(&n);
        let fn_ = foot_vel.dot(&n);
        let valid = timing_ok && aligned && fn_ > vn;

        if let Some(o) = self.outcome() {
            o.contact_time = Some(tc);
            o.lateral_error = Some(lateral_error);
            o.contact = valid;
        }
        if !valid {
            return None;
        }
        let e = self.cfg.ball.restitution;
        let vn_after = fn_ + e * (fn_ - vn);
        Some(Ball {
            pos: ball.pos,
            vel: ball.vel + n * (vn_after - vn),
        })
    }

    fn summary(&self, ticks: usize) -> Summary {
        let nominal = self.planner.nominal;
        let is_nominal = |s: &StepRecord| s.is_nominal(&nominal, &self.params, NOMINAL_TOLERANCE);
        let last_push = self.steps.iter().rposition(|s| s.pushed);
        let steps_to_recover = last_push.and_then(|p| {
            self.steps[p + 1..]
                .iter()
                .position(is_nominal)
                .map(|j| j + 2)
        });
        Summary {
            seed: self.cfg.seed,
            ticks,
            fell: self.fall_time.is_some(),
            fall_time: self.fall_time,
            steps: self.steps.len(),
            steps_to_recover,
            max_step_sagittal: self.steps.iter().map(|s| s.landing[0].abs()).fold(0.0, f64::max),
            max_step_lateral: self.steps.iter().map(|s| s.landing[1].abs()).fold(0.0, f64::max),
            capture_count: self.steps.iter().filter(|s| !is_nominal(s)).count(),
            passes: self.cfg.events.ball_pass.len(),
            contacts: self.outcomes.iter().filter(|o| o.contact).count(),
            goals: self.outcomes.iter().filter(|o| o.goal).count(),
        }
    }
}

fn idle_plan() -> StepPlan {
    StepPlan {
        duration: 0.0,
        remaining: 0.0,
        landing_offset: [0.0, 0.0],
        zmp_offset: [0.0, 0.0],
        saturation: Saturation::default(),
    }
}

fn saturation_flags(s: &Saturation) -> Flags {
    let mut flags = Flags::empty();
    if s.duration {
        flags.insert(Flags::DURATION_SAT);
    }
    if s.lateral_reach || s.sagittal_reach {
        flags.insert(Flags::REACH_SAT);
    }
    if s.zmp {
        flags.insert(Flags::ZMP_SAT);
    }
    if s.uncapturable {
        flags.insert(Flags::UNCAPTURABLE);
    }
    flags
}
