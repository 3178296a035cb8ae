//! Phase-based in-walk kick.
//!
//! Kick trajectories live in the kick frame: origin at the centre of the
//! kicking foot, x along the kick direction. A kick is the sum of a forward
//! swing and a back swing along x plus an adjust swing along y, each a
//! two-piece quartic Bezier curve of the step phase that starts and ends
//! at zero with zero slope, so the kick never disturbs support exchange.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::{wrap_angle, Side};

fn check_phase(phi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::PhaseOutOfRange(phi));
    }
    Ok(())
}

fn blend_weight(phi: f64, c: f64) -> f64 {
    let one_minus = 1.0 - phi;
    6.0 * one_minus * one_minus * phi * phi * c + 4.0 * one_minus * phi.powi(3) + phi.powi(4)
}

fn blend_weight_rate(phi: f64, c: f64) -> f64 {
    12.0 * phi * (1.0 - phi) * (c + phi * (1.0 - 2.0 * c))
}

/// Quartic Bezier blend from `y0` to `yf`; `c` shapes the curvature.
///
/// For `c` in `[0, 1]` the blend is monotone. Outside that range it
/// overshoots (`c > 1`) or undershoots (`c < 0`) the end values.
pub fn bezier_blend(phi: f64, y0: f64, yf: f64, c: f64) -> Result<f64> {
    check_phase(phi)?;
    let w = blend_weight(phi, c);
    // Same quartic, arranged so both end values come out bit-exact.
    Ok(y0 * (1.0 - w) + yf * w)
}

fn check_peak(phi_p: f64) -> Result<()> {
    if !(phi_p > 0.0 && phi_p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "peak phase",
            reason: format!("must lie strictly inside (0, 1), got {phi_p}"),
        });
    }
    Ok(())
}

/// Swing curve rising from 0 to `alpha` at `phi_p` and returning to 0 at 1.
pub fn swing(phi: f64, alpha: f64, phi_p: f64, c: f64) -> Result<f64> {
    check_phase(phi)?;
    check_peak(phi_p)?;
    if phi < phi_p {
        bezier_blend(phi / phi_p, 0.0, alpha, c)
    } else {
        bezier_blend((phi - phi_p) / (1.0 - phi_p), alpha, 0.0, 1.0 - c)
    }
}

/// Derivative of [`swing`] with respect to the phase.
pub fn swing_rate(phi: f64, alpha: f64, phi_p: f64, c: f64) -> Result<f64> {
    check_phase(phi)?;
    check_peak(phi_p)?;
    Ok(if phi < phi_p {
        alpha * blend_weight_rate(phi / phi_p, c) / phi_p
    } else {
        -alpha * blend_weight_rate((phi - phi_p) / (1.0 - phi_p), 1.0 - c) / (1.0 - phi_p)
    })
}

/// Amplitudes, peak phases and curvature gains of the three component swings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwingSpec {
    pub alpha_fw: f64,
    pub alpha_bw: f64,
    pub alpha_y: f64,
    pub phi_fw: f64,
    pub phi_bw: f64,
    pub phi_adj: f64,
    pub c_fw: f64,
    pub c_bw: f64,
    pub c_adj: f64,
}

/// Kick-frame foot offset `(s_fw + s_bw, s_adj)` at phase `phi`.
pub fn compose_kick(phi: f64, spec: &SwingSpec) -> Result<Vector2<f64>> {
    let parts = kick_components(phi, spec)?;
    Ok(Vector2::new(parts.kick, parts.adjust))
}

/// Individual swings at one phase, for plotting and diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KickComponents {
    pub forward: f64,
    pub backward: f64,
    pub kick: f64,
    pub adjust: f64,
}

pub fn kick_components(phi: f64, spec: &SwingSpec) -> Result<KickComponents> {
    let forward = swing(phi, spec.alpha_fw, spec.phi_fw, spec.c_fw)?;
    let backward = swing(phi, spec.alpha_bw, spec.phi_bw, spec.c_bw)?;
    let adjust = swing(phi, spec.alpha_y, spec.phi_adj, spec.c_adj)?;
    Ok(KickComponents {
        forward,
        backward,
        kick: forward + backward,
        adjust,
    })
}

/// Rate of the kick-frame x offset with respect to phase.
pub fn kick_rate(phi: f64, spec: &SwingSpec) -> Result<f64> {
    Ok(swing_rate(phi, spec.alpha_fw, spec.phi_fw, spec.c_fw)?
        + swing_rate(phi, spec.alpha_bw, spec.phi_bw, spec.c_bw)?)
}

/// Phase of the fastest forward foot motion, searched on a 1e-4 grid.
pub fn strike_phase(spec: &SwingSpec) -> f64 {
    (0..=10_000)
        .map(|k| k as f64 * 1e-4)
        .map(|phi| (phi, kick_rate(phi, spec).unwrap_or(f64::NEG_INFINITY)))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0
}

/// Ball-dependent inputs for one kick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KickRequest {
    /// Ball position in the kick frame, m.
    pub ball_in_kick_frame: Vector2<f64>,
    /// Kick direction in the robot frame, rad.
    pub kick_direction: f64,
    pub leg: Side,
    /// Swing amplitude that gives the strongest kick, m.
    pub alpha_opt: f64,
    /// Ball distance from the foot centre at which `alpha_opt` applies, m.
    pub optimal_distance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KickAmplitudes {
    pub alpha_fw: f64,
    pub alpha_bw: f64,
    pub alpha_y: f64,
}

/// Forward, back and adjust amplitudes for a request.
///
/// The ball-derived amplitude is `alpha_x = ball_x - optimal_distance + alpha_opt`;
/// the forward swing moves `approach_gain` of the way from it to `alpha_opt`
/// and the back swing makes up the difference to `alpha_opt`.
pub fn kick_amplitudes(request: &KickRequest, approach_gain: f64) -> KickAmplitudes {
    let alpha_x = request.ball_in_kick_frame.x - request.optimal_distance + request.alpha_opt;
    amplitudes_from_alpha_x(alpha_x, request.alpha_opt, request.ball_in_kick_frame.y, approach_gain)
}

pub fn amplitudes_from_alpha_x(alpha_x: f64, alpha_opt: f64, alpha_y: f64, approach_gain: f64) -> KickAmplitudes {
    let alpha_fw = alpha_x + approach_gain * (alpha_opt - alpha_x);
    KickAmplitudes {
        alpha_fw,
        alpha_bw: alpha_fw - alpha_opt,
        alpha_y,
    }
}

/// Allowed kick directions for the right leg, counterclockwise from straight
/// ahead. The left leg uses the mirror image.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilitySector {
    pub min_angle: f64,
    pub max_angle: f64,
}

impl Default for FeasibilitySector {
    fn default() -> Self {
        Self {
            min_angle: (-30.0f64).to_radians(),
            max_angle: 100.0f64.to_radians(),
        }
    }
}

impl FeasibilitySector {
    pub fn for_leg(&self, leg: Side) -> (f64, f64) {
        match leg {
            Side::Right => (self.min_angle, self.max_angle),
            Side::Left => (-self.max_angle, -self.min_angle),
        }
    }
}

pub fn feasible(direction: f64, leg: Side, sector: &FeasibilitySector) -> bool {
    let (lo, hi) = sector.for_leg(leg);
    let d = wrap_angle(direction);
    lo <= d && d <= hi
}

/// Rotates a kick-frame offset into the robot frame (sagittal, lateral).
pub fn kick_frame_to_local(traj: Vector2<f64>, kick_direction: f64) -> Vector2<f64> {
    let (s, c) = kick_direction.sin_cos();
    Vector2::new(traj.x * c - traj.y * s, traj.x * s + traj.y * c)
}

/// Tunable kick shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KickParams {
    pub alpha_opt: f64,
    pub optimal_distance: f64,
    pub approach_gain: f64,
    pub phi_fw: f64,
    pub phi_bw: f64,
    pub phi_adj: f64,
    pub c_fw: f64,
    pub c_bw: f64,
    pub c_adj: f64,
    pub sector: FeasibilitySector,
}

impl Default for KickParams {
    fn default() -> Self {
        Self {
            alpha_opt: 0.30,
            optimal_distance: 0.12,
            approach_gain: 0.8,
            phi_fw: 0.60,
            phi_bw: 0.25,
            phi_adj: 0.30,
            c_fw: 0.5,
            c_bw: 0.5,
            c_adj: 0.5,
            sector: FeasibilitySector::default(),
        }
    }
}

impl KickParams {
    pub fn request(&self, ball_in_kick_frame: Vector2<f64>, kick_direction: f64, leg: Side) -> KickRequest {
        KickRequest {
            ball_in_kick_frame,
            kick_direction,
            leg,
            alpha_opt: self.alpha_opt,
            optimal_distance: self.optimal_distance,
        }
    }

    pub fn amplitudes(&self, ball_in_kick_frame: Vector2<f64>) -> KickAmplitudes {
        kick_amplitudes(&self.request(ball_in_kick_frame, 0.0, Side::Right), self.approach_gain)
    }

    pub fn swing_spec(&self, amplitudes: &KickAmplitudes) -> SwingSpec {
        SwingSpec {
            alpha_fw: amplitudes.alpha_fw,
            alpha_bw: amplitudes.alpha_bw,
            alpha_y: amplitudes.alpha_y,
            phi_fw: self.phi_fw,
            phi_bw: self.phi_bw,
            phi_adj: self.phi_adj,
            c_fw: self.c_fw,
            c_bw: self.c_bw,
            c_adj: self.c_adj,
        }
    }
}
