//! Balance control and motion generation for a humanoid walking on a
//! linear inverted pendulum (LIP) model.
//!
//! The crate is organised bottom-up:
//!
//! - [`lip`]: closed-form pendulum dynamics, orbital energy, crossing times.
//! - [`estimator`]: gravity removal on trunk IMU data and the per-axis
//!   Kalman filter over CoM position, velocity and acceleration.
//! - [`capture`]: the step planner that picks timing and placement of the
//!   next footstep from the estimated CoM state.
//! - [`gait`]: the phase oscillator and swing-foot trajectories that realise
//!   a [`capture::StepPlan`].
//! - [`kick`]: phase-based in-walk kick swings.
//! - [`behavior`]: force-field gait commands and moving-ball tracking.

pub mod behavior;
pub mod capture;
pub mod error;
pub mod estimator;
pub mod gait;
pub mod kick;
pub mod lip;

pub use error::{Error, Result};

/// Left or right, for support feet and kicking legs alike.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// +1 for left, -1 for right (the robot's y axis points left).
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if angle > -PI && angle <= PI {
        return angle;
    }
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}
