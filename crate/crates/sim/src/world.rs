//! Physical models of the simulated world: pendulum pushes and a rolling ball.

use nalgebra::Vector2;

/// CoM velocity change from a pendulum of mass `pendulum_mass` hitting a
/// robot of mass `robot_mass` at `impact_speed`, as a perfectly plastic
/// collision at CoM height.
pub fn push_delta_v(pendulum_mass: f64, impact_speed: f64, robot_mass: f64) -> f64 {
    pendulum_mass * impact_speed / (pendulum_mass + robot_mass)
}

/// A ball rolling with constant friction deceleration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub pos: Vector2<f64>,
    pub vel: Vector2<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rolling {
    pub mu_roll: f64,
    pub gravity: f64,
    /// Below this speed the ball is put to rest.
    pub stop_speed: f64,
}

impl Ball {
    pub fn at_rest(pos: Vector2<f64>) -> Ball {
        Ball {
            pos,
            vel: Vector2::zeros(),
        }
    }

    /// State after `dt`, integrated exactly.
    pub fn advanced(&self, dt: f64, rolling: &Rolling) -> Ball {
        let speed = self.vel.norm();
        if speed == 0.0 {
            return *self;
        }
        let dir = self.vel / speed;
        let decel = rolling.mu_roll * rolling.gravity;
        let stop_time = if decel > 0.0 { speed / decel } else { f64::INFINITY };
        if dt >= stop_time {
            return Ball::at_rest(self.pos + dir * (0.5 * speed * stop_time));
        }
        let new_speed = speed - decel * dt;
        let pos = self.pos + dir * (speed * dt - 0.5 * decel * dt * dt);
        if new_speed < rolling.stop_speed {
            Ball::at_rest(pos)
        } else {
            Ball {
                pos,
                vel: dir * new_speed,
            }
        }
    }

    pub fn is_moving(&self) -> bool {
        self.vel != Vector2::zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROLL: Rolling = Rolling {
        mu_roll: 0.05,
        gravity: 9.81,
        stop_speed: 0.01,
    };

    #[test]
    fn push_examples() {
        assert_eq!(push_delta_v(0.0, 2.0, 19.0), 0.0);
        assert!((push_delta_v(5.0, 2.0, 19.0) - 10.0 / 24.0).abs() < 1e-15);
        assert!(push_delta_v(3.0, 2.0, 19.0) < push_delta_v(5.0, 2.0, 19.0));
    }

    #[test]
    fn ball_stops_where_kinematics_says() {
        let mut ball = Ball {
            pos: Vector2::zeros(),
            vel: Vector2::new(1.0, 0.0),
        };
        let dt = 0.001;
        let mut t = 0.0;
        while ball.is_moving() {
            ball = ball.advanced(dt, &ROLL);
            t += dt;
        }
        let decel = 0.05 * 9.81;
        // The stop threshold ends the roll a little early.
        assert!((t - 1.0 / decel).abs() < 0.01 / decel + dt, "{t}");
        assert!((ball.pos.x - 1.0 / (2.0 * decel)).abs() < 1e-3, "{}", ball.pos.x);
    }

    #[test]
    fn large_step_stops_exactly() {
        let ball = Ball {
            pos: Vector2::new(1.0, 1.0),
            vel: Vector2::new(0.0, -2.0),
        };
        let rest = ball.advanced(100.0, &ROLL);
        assert!(!rest.is_moving());
        assert!((rest.pos.y - (1.0 - 4.0 / (2.0 * 0.05 * 9.81))).abs() < 1e-12);
    }

    #[test]
    fn split_steps_agree() {
        let ball = Ball {
            pos: Vector2::new(0.3, -0.2),
            vel: Vector2::new(-1.2, 0.5),
        };
        let one = ball.advanced(0.4, &ROLL);
        let two = ball.advanced(0.15, &ROLL).advanced(0.25, &ROLL);
        assert!((one.pos - two.pos).norm() < 1e-12);
        assert!((one.vel - two.vel).norm() < 1e-12);
    }
}
