//! Capture Step planning: timing and placement of the next footstep.
//!
//! The lateral axis owns the step clock. The step ends when the CoM returns
//! to the support-exchange offset, and the landing offset is chosen so the
//! orbital energy about the new support foot equals the energy of the
//! nominal limit cycle. On the sagittal axis the ZMP moves inside the foot
//! to bring the CoM velocity at support exchange back to its nominal value,
//! and the foot is placed so the divergent component of motion (DCM) starts
//! the next step on the nominal cycle. When the ZMP is not saturated the two
//! together restore the full nominal state in one step.
//!
//! All states are relative to the current support foot.

use crate::estimator::CoMState;
use crate::lip::{crossing_times, orbital_energy, propagate, AxisState, PendulumParams};
use crate::Side;

/// The nominal gait the planner returns to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaitNominal {
    /// Nominal step duration T0, s.
    pub step_duration: f64,
    /// Lateral distance between the feet, m.
    pub lateral_step_width: f64,
    /// Sagittal CoM velocity when passing over the support foot, m/s.
    pub apex_velocity_sagittal: f64,
}

impl Default for GaitNominal {
    fn default() -> Self {
        Self {
            step_duration: 0.45,
            lateral_step_width: 0.30,
            apex_velocity_sagittal: 0.0,
        }
    }
}

impl GaitNominal {
    /// Lateral CoM offset from the support foot at support exchange.
    pub fn support_exchange_offset(&self) -> f64 {
        0.5 * self.lateral_step_width
    }

    /// Lateral CoM speed at support exchange on the nominal cycle.
    pub fn lateral_exchange_speed(&self, params: &PendulumParams) -> f64 {
        let tau = params.tau();
        self.support_exchange_offset() / tau * (self.step_duration / (2.0 * tau)).tanh()
    }

    pub fn nominal_orbital_energy_lateral(&self, params: &PendulumParams) -> f64 {
        orbital_energy(
            AxisState::new(self.support_exchange_offset(), self.lateral_exchange_speed(params)),
            params,
        )
    }

    fn half_step_phase(&self, params: &PendulumParams) -> f64 {
        self.step_duration / (2.0 * params.tau())
    }

    /// Sagittal (position, velocity) at the end of a nominal step.
    pub fn sagittal_exchange_state(&self, params: &PendulumParams) -> AxisState {
        let tau = params.tau();
        let h = self.half_step_phase(params);
        let v = self.apex_velocity_sagittal;
        AxisState::new(v * tau * h.sinh(), v * h.cosh())
    }

    pub fn sagittal_step_length(&self, params: &PendulumParams) -> f64 {
        2.0 * self.sagittal_exchange_state(params).x
    }

    /// Sagittal DCM relative to the support foot at the start of a nominal step.
    pub fn sagittal_dcm_at_start(&self, params: &PendulumParams) -> f64 {
        self.apex_velocity_sagittal * params.tau() * (-self.half_step_phase(params)).exp()
    }

    /// Sagittal DCM relative to the support foot at the end of a nominal step.
    pub fn sagittal_dcm_at_end(&self, params: &PendulumParams) -> f64 {
        self.apex_velocity_sagittal * params.tau() * self.half_step_phase(params).exp()
    }

    /// CoM state relative to the support foot at the start of a nominal step,
    /// as (sagittal, lateral).
    pub fn initial_state(&self, params: &PendulumParams, support: Side) -> (AxisState, AxisState) {
        let sag = self.sagittal_exchange_state(params);
        let outward = -support.sign();
        let lat = AxisState::new(
            outward * self.support_exchange_offset(),
            -outward * self.lateral_exchange_speed(params),
        );
        (AxisState::new(-sag.x, sag.v), lat)
    }
}

/// ZMP limits of the support foot along the sagittal axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FootGeometry {
    /// Heel limit, negative.
    pub zmp_min: f64,
    /// Toe limit, positive.
    pub zmp_max: f64,
}

impl Default for FootGeometry {
    fn default() -> Self {
        Self {
            zmp_min: -0.06,
            zmp_max: 0.10,
        }
    }
}

/// Kinematic and timing bounds applied to every plan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepLimits {
    pub duration_min_ratio: f64,
    pub duration_max_ratio: f64,
    /// Symmetric sagittal reach, m.
    pub reach_sagittal: f64,
    pub reach_lateral_min: f64,
    pub reach_lateral_max: f64,
}

impl Default for StepLimits {
    fn default() -> Self {
        Self {
            duration_min_ratio: 0.3,
            duration_max_ratio: 2.5,
            reach_sagittal: 0.5,
            reach_lateral_min: 0.15,
            reach_lateral_max: 0.55,
        }
    }
}

/// Which clamps were active while producing a plan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Saturation {
    pub duration: bool,
    pub lateral_reach: bool,
    pub sagittal_reach: bool,
    pub zmp: bool,
    /// The CoM does not return to the exchange offset at all.
    pub uncapturable: bool,
}

impl Saturation {
    pub fn any(&self) -> bool {
        self.duration || self.lateral_reach || self.sagittal_reach || self.zmp || self.uncapturable
    }

    fn merge(self, other: Saturation) -> Saturation {
        Saturation {
            duration: self.duration || other.duration,
            lateral_reach: self.lateral_reach || other.lateral_reach,
            sagittal_reach: self.sagittal_reach || other.sagittal_reach,
            zmp: self.zmp || other.zmp,
            uncapturable: self.uncapturable || other.uncapturable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LateralPlan {
    /// Total duration of the current step, s.
    pub duration: f64,
    /// Time left until support exchange, s.
    pub remaining: f64,
    /// Signed lateral landing offset of the swing foot.
    pub landing_offset: f64,
    pub saturation: Saturation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SagittalPlan {
    pub zmp_offset: f64,
    pub landing_offset: f64,
    pub saturation: Saturation,
}

/// Output of the balance layer for the current step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPlan {
    /// Total duration of the current step (elapsed plus remaining), s.
    pub duration: f64,
    /// Remaining time until support exchange, s.
    pub remaining: f64,
    /// Swing-foot landing position relative to the support foot, (x, y).
    pub landing_offset: [f64; 2],
    /// ZMP relative to the support foot centre, (x, y).
    pub zmp_offset: [f64; 2],
    pub saturation: Saturation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapturePlanner {
    pub params: PendulumParams,
    pub nominal: GaitNominal,
    pub foot: FootGeometry,
    pub limits: StepLimits,
}

impl CapturePlanner {
    pub fn new(params: PendulumParams, nominal: GaitNominal, foot: FootGeometry, limits: StepLimits) -> Self {
        Self {
            params,
            nominal,
            foot,
            limits,
        }
    }

    fn duration_bounds(&self) -> (f64, f64) {
        let t0 = self.nominal.step_duration;
        (self.limits.duration_min_ratio * t0, self.limits.duration_max_ratio * t0)
    }

    /// The plan produced on the undisturbed nominal cycle at step start.
    pub fn nominal_plan(&self, support: Side) -> StepPlan {
        StepPlan {
            duration: self.nominal.step_duration,
            remaining: self.nominal.step_duration,
            landing_offset: [
                self.nominal.sagittal_step_length(&self.params),
                -support.sign() * self.nominal.lateral_step_width,
            ],
            zmp_offset: [0.0, 0.0],
            saturation: Saturation::default(),
        }
    }

    /// Lateral timing and placement. `elapsed` is the time since the last
    /// support exchange.
    pub fn plan_lateral(&self, com: &CoMState, support: Side, elapsed: f64) -> LateralPlan {
        let tau = self.params.tau();
        // Canonical frame: u points from the support foot toward the swing side.
        let outward = -support.sign();
        let state = AxisState::new(outward * com.c, outward * com.c_dot);
        let exchange = self.nominal.support_exchange_offset();
        let mut saturation = Saturation::default();

        let time_to_exchange = if state.x >= exchange && state.v > 0.0 {
            Some(0.0)
        } else {
            crossing_times(state, exchange, &self.params).into_iter().find(|&t| {
                let v = propagate(state, 0.0, &self.params, t).map(|s| s.v).unwrap_or(f64::NAN);
                v >= 0.0
            })
        };

        let (min, max) = self.duration_bounds();
        let total = match time_to_exchange {
            Some(t) => elapsed + t,
            None => {
                saturation.uncapturable = true;
                max
            }
        };
        let duration = total.clamp(min, max);
        if duration != total {
            saturation.duration = true;
        }
        let remaining = (duration - elapsed).max(0.0);

        let at_exchange = propagate(state, 0.0, &self.params, remaining).unwrap_or(state);
        let e_nominal = self.nominal.nominal_orbital_energy_lateral(&self.params);
        // Outer root of E(f - u, -v) = E_nominal: the feet never cross.
        let spread = (at_exchange.v * at_exchange.v - 2.0 * e_nominal).max(0.0).sqrt();
        let ideal = at_exchange.x + tau * spread;
        let placed = ideal.clamp(self.limits.reach_lateral_min, self.limits.reach_lateral_max);
        if placed != ideal {
            saturation.lateral_reach = true;
        }
        LateralPlan {
            duration,
            remaining,
            landing_offset: outward * placed,
            saturation,
        }
    }

    /// Sagittal ZMP and placement for a step ending in `remaining` seconds.
    pub fn plan_sagittal(&self, com: &CoMState, remaining: f64) -> SagittalPlan {
        let tau = self.params.tau();
        let state = AxisState::new(com.c, com.c_dot);
        let mut saturation = Saturation::default();

        // CoM velocity at exchange is linear in a constant ZMP.
        let coast = propagate(state, 0.0, &self.params, remaining).unwrap_or(state);
        let target = self.nominal.sagittal_exchange_state(&self.params).v;
        let horizon = remaining.max(ZMP_HORIZON_FLOOR * self.nominal.step_duration);
        let gain = (horizon / tau).sinh() / tau;
        let ideal_zmp = (coast.v - target) / gain;
        let zmp = ideal_zmp.clamp(self.foot.zmp_min, self.foot.zmp_max);
        if zmp != ideal_zmp {
            saturation.zmp = true;
        }

        let at_exchange = propagate(state, zmp, &self.params, remaining).unwrap_or(state);
        let ideal = at_exchange.dcm(tau) - self.nominal.sagittal_dcm_at_start(&self.params);
        let reach = self.limits.reach_sagittal;
        let landing = ideal.clamp(-reach, reach);
        if landing != ideal {
            saturation.sagittal_reach = true;
        }
        SagittalPlan {
            zmp_offset: zmp,
            landing_offset: landing,
            saturation,
        }
    }

    /// Full plan: lateral timing first, then sagittal ZMP and placement.
    pub fn plan_step(&self, sagittal: &CoMState, lateral: &CoMState, support: Side, elapsed: f64) -> StepPlan {
        let lat = self.plan_lateral(lateral, support, elapsed);
        let sag = self.plan_sagittal(sagittal, lat.remaining);
        StepPlan {
            duration: lat.duration,
            remaining: lat.remaining,
            landing_offset: [sag.landing_offset, lat.landing_offset],
            zmp_offset: [sag.zmp_offset, 0.0],
            saturation: lat.saturation.merge(sag.saturation),
        }
    }
}

// The ZMP law looks at least this fraction of T0 ahead, which bounds its gain
// as the step runs out.
const ZMP_HORIZON_FLOOR: f64 = 0.2;
