//! Open-loop gait pattern: a per-step phase oscillator whose frequency is
//! modulated to touch down at the planned time, and sinusoidal swing-foot
//! trajectories whose amplitude meets the planned landing offset.

use nalgebra::Vector2;

use crate::capture::StepPlan;
use crate::error::{Error, Result};
use crate::Side;

pub const MIN_FREQUENCY_MULTIPLIER: f64 = 0.3;
pub const MAX_FREQUENCY_MULTIPLIER: f64 = 3.0;
pub const DEFAULT_LIFT_HEIGHT: f64 = 0.04;

/// Phase of the current step. `phi` runs from 0 at lift-off to 1 at touchdown.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaitPhase {
    pub phi: f64,
    pub support_side: Side,
    pub frequency_multiplier: f64,
}

impl GaitPhase {
    pub fn swing_side(&self) -> Side {
        self.support_side.other()
    }
}

/// Swing foot target relative to the support foot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FootTarget {
    pub swing_foot_pos: Vector2<f64>,
    pub lift_height: f64,
}

/// Emitted when the swing foot touches down inside a control tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportExchange {
    /// Time into the tick at which touchdown happens, s.
    pub offset: f64,
    /// The new support side.
    pub support_side: Side,
    /// Landing offset of the foot that just touched down, relative to the old support.
    pub landing_offset: [f64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaitGenerator {
    phase: GaitPhase,
    step_duration: f64,
    elapsed: f64,
    lift_off: Vector2<f64>,
    lift_height: f64,
}

impl GaitGenerator {
    /// Starts a step at lift-off with the swing foot at `lift_off`.
    pub fn new(step_duration: f64, support_side: Side, lift_off: Vector2<f64>, lift_height: f64) -> Result<Self> {
        if !(step_duration.is_finite() && step_duration > 0.0) {
            return Err(Error::InvalidParameter {
                name: "step_duration",
                reason: format!("must be positive, got {step_duration}"),
            });
        }
        if !(lift_height.is_finite() && lift_height >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "lift_height",
                reason: format!("must be non-negative, got {lift_height}"),
            });
        }
        Ok(Self {
            phase: GaitPhase {
                phi: 0.0,
                support_side,
                frequency_multiplier: 1.0,
            },
            step_duration,
            elapsed: 0.0,
            lift_off,
            lift_height,
        })
    }

    pub fn phase(&self) -> &GaitPhase {
        &self.phase
    }

    /// Time since the last support exchange, s.
    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn lift_off(&self) -> Vector2<f64> {
        self.lift_off
    }

    /// Advances the oscillator by `dt`. The multiplier is chosen so that the
    /// phase reaches 1 exactly when the plan says the step ends.
    pub fn advance_phase(&mut self, dt: f64, plan: &StepPlan) -> Result<Option<SupportExchange>> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be positive, got {dt}"),
            });
        }
        let t0 = self.step_duration;
        let left = 1.0 - self.phase.phi;
        let remaining = plan.duration - self.elapsed;
        let multiplier = if remaining > 0.0 {
            (left * t0 / remaining).clamp(MIN_FREQUENCY_MULTIPLIER, MAX_FREQUENCY_MULTIPLIER)
        } else {
            MAX_FREQUENCY_MULTIPLIER
        };
        self.phase.frequency_multiplier = multiplier;

        let time_to_touchdown = left * t0 / multiplier;
        if time_to_touchdown > dt * (1.0 + 1e-9) {
            self.phase.phi += dt * multiplier / t0;
            self.elapsed += dt;
            return Ok(None);
        }

        let offset = time_to_touchdown.clamp(0.0, dt);
        let landing = Vector2::new(plan.landing_offset[0], plan.landing_offset[1]);
        let new_support = self.phase.support_side.other();
        // The old support foot becomes the swing foot.
        self.lift_off = -landing;
        self.phase = GaitPhase {
            phi: (dt - offset) / t0,
            support_side: new_support,
            frequency_multiplier: 1.0,
        };
        self.elapsed = dt - offset;
        Ok(Some(SupportExchange {
            offset,
            support_side: new_support,
            landing_offset: plan.landing_offset,
        }))
    }

    pub fn swing_target(&self, plan: &StepPlan) -> FootTarget {
        swing_target(&self.phase, self.lift_off, plan, self.lift_height)
    }
}

/// Half-cosine horizontal swing from lift-off to the planned landing and a
/// sine bump for the foot height.
pub fn swing_target(phase: &GaitPhase, lift_off: Vector2<f64>, plan: &StepPlan, lift_height: f64) -> FootTarget {
    use std::f64::consts::PI;
    let phi = phase.phi.clamp(0.0, 1.0);
    let landing = Vector2::new(plan.landing_offset[0], plan.landing_offset[1]);
    let blend = 0.5 * (1.0 - (PI * phi).cos());
    FootTarget {
        swing_foot_pos: lift_off + (landing - lift_off) * blend,
        lift_height: lift_height * (PI * phi).sin().max(0.0),
    }
}

/// Superimposes kick offsets (sagittal, lateral) on the swing foot.
pub fn compose_with_kick(swing: FootTarget, kick_leg: Side, phase: &GaitPhase, kick_offsets: Vector2<f64>) -> Result<FootTarget> {
    if kick_leg == phase.support_side {
        return Err(Error::KickOnSupportFoot);
    }
    Ok(FootTarget {
        swing_foot_pos: swing.swing_foot_pos + kick_offsets,
        lift_height: swing.lift_height,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::Saturation;
    use crate::kick::{compose_kick, KickParams};

    const TICK: f64 = 0.01;

    fn plan(duration: f64, landing: [f64; 2]) -> StepPlan {
        StepPlan {
            duration,
            remaining: duration,
            landing_offset: landing,
            zmp_offset: [0.0, 0.0],
            saturation: Saturation::default(),
        }
    }

    fn exchange_time(duration: f64) -> f64 {
        let mut g = GaitGenerator::new(0.45, Side::Left, Vector2::new(0.0, 0.3), 0.04).unwrap();
        let p = plan(duration, [0.0, -0.3]);
        let mut t = 0.0;
        loop {
            if let Some(ex) = g.advance_phase(TICK, &p).unwrap() {
                return t + ex.offset;
            }
            t += TICK;
            assert!(t < 10.0);
        }
    }

    #[test]
    fn nominal_duration_gives_unit_multiplier() {
        let mut g = GaitGenerator::new(0.45, Side::Left, Vector2::zeros(), 0.04).unwrap();
        g.advance_phase(TICK, &plan(0.45, [0.0, -0.3])).unwrap();
        assert!((g.phase().frequency_multiplier - 1.0).abs() < 1e-12);
        assert!((exchange_time(0.45) - 0.45).abs() < 1e-9);
    }

    #[test]
    fn doubled_duration_halves_frequency() {
        let t = exchange_time(0.9);
        assert!((t - 0.9).abs() <= TICK);
    }

    #[test]
    fn exchange_error_within_one_tick_over_multiplier_range() {
        for k in 0..=20 {
            let duration = 0.45 / (MIN_FREQUENCY_MULTIPLIER + k as f64 * 0.1).min(MAX_FREQUENCY_MULTIPLIER);
            assert!((exchange_time(duration) - duration).abs() <= TICK, "{duration}");
        }
    }

    #[test]
    fn exchange_toggles_support_and_resets_lift_off() {
        let mut g = GaitGenerator::new(0.1, Side::Left, Vector2::zeros(), 0.04).unwrap();
        let p = plan(0.1, [0.05, -0.3]);
        let mut events = Vec::new();
        for _ in 0..10 {
            if let Some(ex) = g.advance_phase(TICK, &p).unwrap() {
                events.push(ex);
            }
        }
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].support_side, Side::Right);
        assert_eq!(g.phase().support_side, Side::Right);
        assert_eq!(g.lift_off(), Vector2::new(-0.05, 0.3));
        assert!(g.phase().phi < 1e-6);
    }

    #[test]
    fn swing_endpoints_and_linearity() {
        let phase = |phi| GaitPhase {
            phi,
            support_side: Side::Left,
            frequency_multiplier: 1.0,
        };
        let lift_off = Vector2::new(-0.1, -0.3);
        let p = plan(0.45, [0.1, -0.32]);
        let start = swing_target(&phase(0.0), lift_off, &p, 0.04);
        assert_eq!(start.swing_foot_pos, lift_off);
        assert_eq!(start.lift_height, 0.0);
        let end = swing_target(&phase(1.0 - 1e-12), lift_off, &p, 0.04);
        assert!((end.swing_foot_pos - Vector2::new(0.1, -0.32)).norm() < 1e-9);
        assert!(end.lift_height < 1e-9);
        let mid = swing_target(&phase(0.5), lift_off, &p, 0.04);
        assert!((mid.lift_height - 0.04).abs() < 1e-15);

        let single = swing_target(&phase(0.5), Vector2::zeros(), &plan(0.45, [0.1, -0.3]), 0.04);
        let double = swing_target(&phase(0.5), Vector2::zeros(), &plan(0.45, [0.2, -0.6]), 0.04);
        assert!((double.swing_foot_pos - 2.0 * single.swing_foot_pos).norm() < 1e-15);
    }

    #[test]
    fn swing_is_continuous() {
        let lift_off = Vector2::new(-0.12, 0.3);
        let p = plan(0.45, [0.12, 0.3]);
        let mut prev: Option<FootTarget> = None;
        for k in 0..10_000 {
            let phase = GaitPhase {
                phi: k as f64 * 1e-4,
                support_side: Side::Right,
                frequency_multiplier: 1.0,
            };
            let cur = swing_target(&phase, lift_off, &p, 0.04);
            if let Some(prev) = prev {
                assert!((cur.swing_foot_pos - prev.swing_foot_pos).norm() < 1e-3);
                assert!((cur.lift_height - prev.lift_height).abs() < 1e-3);
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn mirror_symmetry() {
        let phase_l = GaitPhase {
            phi: 0.37,
            support_side: Side::Left,
            frequency_multiplier: 1.0,
        };
        let phase_r = GaitPhase {
            support_side: Side::Right,
            ..phase_l
        };
        let a = swing_target(&phase_l, Vector2::new(-0.05, -0.3), &plan(0.45, [0.05, -0.31]), 0.04);
        let b = swing_target(&phase_r, Vector2::new(-0.05, 0.3), &plan(0.45, [0.05, 0.31]), 0.04);
        assert_eq!(a.swing_foot_pos.x, b.swing_foot_pos.x);
        assert_eq!(a.swing_foot_pos.y, -b.swing_foot_pos.y);
        assert_eq!(a.lift_height, b.lift_height);
    }

    #[test]
    fn kick_composition() {
        let phase = GaitPhase {
            phi: 0.4,
            support_side: Side::Left,
            frequency_multiplier: 1.0,
        };
        let swing = FootTarget {
            swing_foot_pos: Vector2::new(0.01, -0.3),
            lift_height: 0.02,
        };
        assert_eq!(compose_with_kick(swing, Side::Right, &phase, Vector2::zeros()).unwrap(), swing);
        assert_eq!(
            compose_with_kick(swing, Side::Left, &phase, Vector2::new(0.1, 0.0)),
            Err(Error::KickOnSupportFoot)
        );
    }

    #[test]
    fn composed_kick_stays_in_reach_box() {
        let params = KickParams::default();
        let spec = params.swing_spec(&params.amplitudes(Vector2::new(params.optimal_distance, 0.05)));
        let lift_off = Vector2::new(0.0, -0.3);
        let p = plan(0.45, [0.0, -0.3]);
        for k in 0..=1000 {
            let phi = k as f64 * 1e-3;
            let phase = GaitPhase {
                phi,
                support_side: Side::Left,
                frequency_multiplier: 1.0,
            };
            let swing = swing_target(&phase, lift_off, &p, 0.04);
            let kick = compose_kick(phi, &spec).unwrap();
            let foot = compose_with_kick(swing, Side::Right, &phase, kick).unwrap();
            assert!(foot.swing_foot_pos.x.abs() <= 0.5, "phi {phi}");
            let lateral = -foot.swing_foot_pos.y;
            assert!((0.15..=0.55).contains(&lateral), "phi {phi}: {lateral}");
            if k == 0 || k == 1000 {
                assert_eq!(kick, Vector2::zeros());
            }
        }
    }
}
