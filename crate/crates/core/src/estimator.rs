//! CoM state estimation from kinematics and the trunk IMU.
//!
//! Each horizontal axis carries its own Kalman filter over
//! `[c, c_dot, c_ddot]`, driven by white jerk noise and corrected with the
//! kinematic CoM position and the gravity-free world-frame trunk
//! acceleration. The CoM is a fixed point in the trunk frame, so trunk
//! acceleration is CoM acceleration; limb configuration is never consumed.

use nalgebra::{Matrix2, Matrix2x3, Matrix3, Matrix3x2, Vector2, Vector3};

use crate::error::{Error, Result};

const ROTATION_TOLERANCE: f64 = 1e-9;

/// Trunk accelerometer reading together with the trunk attitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrunkImu {
    /// Specific force measured in the trunk frame, m/s^2.
    pub accel: Vector3<f64>,
    /// Rotation taking trunk-frame vectors to the world frame.
    pub orientation: Matrix3<f64>,
}

/// Rotates the trunk acceleration into the world frame and removes gravity.
pub fn remove_gravity(imu: &TrunkImu, gravity: f64) -> Result<Vector3<f64>> {
    check_rotation(&imu.orientation)?;
    if !imu.accel.iter().all(|a| a.is_finite()) || !gravity.is_finite() {
        return Err(Error::NonFinite("trunk acceleration"));
    }
    Ok(imu.orientation * imu.accel - Vector3::new(0.0, 0.0, gravity))
}

fn check_rotation(r: &Matrix3<f64>) -> Result<()> {
    let orthonormality = (r.transpose() * r - Matrix3::identity()).amax();
    let det = r.determinant();
    if !(orthonormality <= ROTATION_TOLERANCE && (det - 1.0).abs() <= ROTATION_TOLERANCE) {
        return Err(Error::InvalidRotation { orthonormality, det });
    }
    Ok(())
}

/// Position, velocity and acceleration of the CoM along one axis.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CoMState {
    pub c: f64,
    pub c_dot: f64,
    pub c_ddot: f64,
}

impl CoMState {
    pub const fn new(c: f64, c_dot: f64, c_ddot: f64) -> Self {
        Self { c, c_dot, c_ddot }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.c, self.c_dot, self.c_ddot)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn is_finite(&self) -> bool {
        self.c.is_finite() && self.c_dot.is_finite() && self.c_ddot.is_finite()
    }
}

/// Noise model. All variances are per sample except the jerk density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterConfig {
    /// White-jerk spectral density, (m/s^3)^2 per Hz.
    pub process_noise_jerk: f64,
    /// Kinematic CoM position variance, m^2.
    pub meas_noise_pos: f64,
    /// Trunk acceleration variance, (m/s^2)^2.
    pub meas_noise_acc: f64,
    pub initial_covariance: Matrix3<f64>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            process_noise_jerk: 50.0,
            meas_noise_pos: 0.002 * 0.002,
            meas_noise_acc: 0.3 * 0.3,
            initial_covariance: Matrix3::from_diagonal(&Vector3::new(1e-4, 1e-2, 1.0)),
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("process_noise_jerk", self.process_noise_jerk),
            ("meas_noise_pos", self.meas_noise_pos),
            ("meas_noise_acc", self.meas_noise_acc),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("variance must be positive, got {value}"),
                });
            }
        }
        let p = &self.initial_covariance;
        let asym = (p - p.transpose()).amax();
        if !p.iter().all(|v| v.is_finite()) || asym > 1e-12 || p.cholesky().is_none() {
            return Err(Error::InvalidParameter {
                name: "initial_covariance",
                reason: "must be symmetric positive definite".into(),
            });
        }
        Ok(())
    }

    /// Discretised white-jerk process noise over `dt`.
    pub fn process_noise(&self, dt: f64) -> Matrix3<f64> {
        let q = self.process_noise_jerk;
        let (dt2, dt3) = (dt * dt, dt * dt * dt);
        let (dt4, dt5) = (dt3 * dt, dt3 * dt2);
        q * Matrix3::new(
            dt5 / 20.0, dt4 / 8.0, dt3 / 6.0,
            dt4 / 8.0, dt3 / 3.0, dt2 / 2.0,
            dt3 / 6.0, dt2 / 2.0, dt,
        )
    }
}

fn transition(dt: f64) -> Matrix3<f64> {
    Matrix3::new(
        1.0, dt, 0.5 * dt * dt,
        0.0, 1.0, dt,
        0.0, 0.0, 1.0,
    )
}

// Selects c and c_ddot.
fn measurement_matrix() -> Matrix2x3<f64> {
    Matrix2x3::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0)
}

/// Kalman filter for a single horizontal axis.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisFilter {
    pub state: CoMState,
    pub covariance: Matrix3<f64>,
}

impl AxisFilter {
    pub fn new(state: CoMState, covariance: Matrix3<f64>) -> Self {
        Self { state, covariance }
    }

    /// Time update with the triple-integrator model.
    pub fn predict(&mut self, dt: f64, config: &FilterConfig) -> Result<()> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("prediction interval must be positive, got {dt}"),
            });
        }
        let f = transition(dt);
        self.state = CoMState::from_vector(&(f * self.state.as_vector()));
        let p = f * self.covariance * f.transpose() + config.process_noise(dt);
        self.covariance = symmetrize(p);
        Ok(())
    }

    /// Measurement update against kinematic position and world acceleration.
    pub fn update(&mut self, meas_pos: f64, meas_acc: f64, config: &FilterConfig) -> Result<()> {
        if !(meas_pos.is_finite() && meas_acc.is_finite()) {
            return Err(Error::NonFinite("measurement"));
        }
        let h = measurement_matrix();
        let r = Matrix2::new(config.meas_noise_pos, 0.0, 0.0, config.meas_noise_acc);
        let p = self.covariance;
        let s = h * p * h.transpose() + r;
        let s_inv = s.try_inverse().ok_or(Error::SingularInnovation)?;
        if !s_inv.iter().all(|v| v.is_finite()) {
            return Err(Error::SingularInnovation);
        }
        let k: Matrix3x2<f64> = p * h.transpose() * s_inv;
        let x = self.state.as_vector();
        let innovation = Vector2::new(meas_pos, meas_acc) - h * x;
        self.state = CoMState::from_vector(&(x + k * innovation));
        // Joseph form keeps the posterior symmetric and PSD.
        let i_kh = Matrix3::identity() - k * h;
        let p = i_kh * p * i_kh.transpose() + k * r * k.transpose();
        self.covariance = symmetrize(p);
        Ok(())
    }
}

fn symmetrize(p: Matrix3<f64>) -> Matrix3<f64> {
    0.5 * (p + p.transpose())
}

/// Sagittal and lateral CoM filters fed from kinematics and the trunk IMU.
#[derive(Clone, Debug)]
pub struct ComEstimator {
    axes: [AxisFilter; 2],
    config: FilterConfig,
    gravity: f64,
}

impl ComEstimator {
    pub fn new(config: FilterConfig, gravity: f64, initial: [CoMState; 2]) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            axes: initial.map(|s| AxisFilter::new(s, config.initial_covariance)),
            config,
            gravity,
        })
    }

    pub fn config(&self) -> &FilterConfig {
        &self.config
    }

    pub fn axis(&self, index: usize) -> &AxisFilter {
        &self.axes[index]
    }

    pub fn states(&self) -> [CoMState; 2] {
        [self.axes[0].state, self.axes[1].state]
    }

    /// Predicts both axes without a measurement (sensor sample missing).
    pub fn predict(&mut self, dt: f64) -> Result<[CoMState; 2]> {
        for axis in &mut self.axes {
            axis.predict(dt, &self.config)?;
        }
        Ok(self.states())
    }

    /// One estimator cycle: gravity removal, then predict and update per axis.
    /// The vertical world acceleration is not used.
    pub fn step(&mut self, kinematic_com: Vector2<f64>, imu: &TrunkImu, dt: f64) -> Result<[CoMState; 2]> {
        let world_acc = remove_gravity(imu, self.gravity)?;
        for (i, axis) in self.axes.iter_mut().enumerate() {
            axis.predict(dt, &self.config)?;
            axis.update(kinematic_com[i], world_acc[i], &self.config)?;
        }
        Ok(self.states())
    }
}
