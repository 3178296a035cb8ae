//! Closed-form linear inverted pendulum dynamics.
//!
//! A single horizontal axis of the CoM obeys `x'' = (x - p) / tau^2` with the
//! pivot (ZMP) `p` held constant and `tau = sqrt(com_height / gravity)`.

use crate::error::{ensure_finite, Error, Result};

pub const STANDARD_GRAVITY: f64 = 9.81;
pub const DEFAULT_COM_HEIGHT: f64 = 0.9;

/// Pendulum height and gravity. The time constant is always derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PendulumParams {
    com_height: f64,
    gravity: f64,
}

impl PendulumParams {
    pub fn new(com_height: f64, gravity: f64) -> Result<Self> {
        for (name, value) in [("com_height", com_height), ("gravity", gravity)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and positive, got {value}"),
                });
            }
        }
        Ok(Self { com_height, gravity })
    }

    pub fn com_height(&self) -> f64 {
        self.com_height
    }

    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    pub fn tau(&self) -> f64 {
        (self.com_height / self.gravity).sqrt()
    }
}

impl Default for PendulumParams {
    fn default() -> Self {
        Self {
            com_height: DEFAULT_COM_HEIGHT,
            gravity: STANDARD_GRAVITY,
        }
    }
}

/// Position and velocity of the CoM along one horizontal axis.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AxisState {
    pub x: f64,
    pub v: f64,
}

impl AxisState {
    pub const fn new(x: f64, v: f64) -> Self {
        Self { x, v }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.v.is_finite()
    }

    /// Divergent component of motion `x + v tau` (the instantaneous capture point).
    pub fn dcm(&self, tau: f64) -> f64 {
        self.x + self.v * tau
    }

    pub fn mirrored(&self) -> Self {
        Self::new(-self.x, -self.v)
    }

    /// Same state expressed relative to `origin`.
    pub fn shifted(&self, origin: f64) -> Self {
        Self::new(self.x - origin, self.v)
    }
}

/// Exact LIP solution after `dt` seconds about a fixed pivot.
pub fn propagate(state: AxisState, pivot: f64, params: &PendulumParams, dt: f64) -> Result<AxisState> {
    if !state.is_finite() {
        return Err(Error::NonFinite("pendulum state"));
    }
    ensure_finite(pivot, "pivot")?;
    ensure_finite(dt, "time interval")?;
    if dt < 0.0 {
        return Err(Error::NegativeInterval(dt));
    }
    let tau = params.tau();
    let (sinh, cosh) = {
        let s = dt / tau;
        (s.sinh(), s.cosh())
    };
    let offset = state.x - pivot;
    Ok(AxisState {
        x: pivot + offset * cosh + state.v * tau * sinh,
        v: offset / tau * sinh + state.v * cosh,
    })
}

/// Orbital energy `v^2/2 - x^2/(2 tau^2)` with the pivot at the origin.
///
/// Negative energy means the CoM turns around before reaching the pivot,
/// positive energy means it passes over it.
pub fn orbital_energy(state: AxisState, params: &PendulumParams) -> f64 {
    let tau = params.tau();
    0.5 * state.v * state.v - 0.5 * state.x * state.x / (tau * tau)
}

/// Outcome of a time-to-position query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reach {
    At(f64),
    Unreachable,
}

impl Reach {
    pub fn time(self) -> Option<f64> {
        match self {
            Reach::At(t) => Some(t),
            Reach::Unreachable => None,
        }
    }
}

// Roots within this distance below z = 1 are treated as t = 0.
const UNIT_ROOT_SLACK: f64 = 1e-12;

/// All future times `t >= 0` at which the pendulum (pivot at the origin)
/// passes `target`, in ascending order. There are at most two.
pub fn crossing_times(state: AxisState, target: f64, params: &PendulumParams) -> Vec<f64> {
    let tau = params.tau();
    // x(t) = a e^{t/tau} + b e^{-t/tau}; with z = e^{t/tau}: a z^2 - target z + b = 0.
    let a = 0.5 * (state.x + state.v * tau);
    let b = 0.5 * (state.x - state.v * tau);
    let mut roots: Vec<f64> = Vec::with_capacity(2);
    if a == 0.0 {
        if target != 0.0 {
            roots.push(b / target);
        }
    } else {
        let disc = target * target + (state.v * tau).powi(2) - state.x * state.x;
        if disc < 0.0 {
            return Vec::new();
        }
        let sq = disc.sqrt();
        let q = 0.5 * (target + if target >= 0.0 { sq } else { -sq });
        if q == 0.0 {
            roots.push(target / (2.0 * a));
        } else {
            roots.push(q / a);
            roots.push(b / q);
        }
    }
    let mut times: Vec<f64> = roots
        .into_iter()
        .filter(|z| z.is_finite() && *z >= 1.0 - UNIT_ROOT_SLACK)
        .map(|z| tau * z.max(1.0).ln())
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
}

/// Smallest `t >= 0` at which the pendulum (pivot at the origin) reaches `target_x`.
pub fn time_to_position(state: AxisState, target_x: f64, params: &PendulumParams) -> Reach {
    match crossing_times(state, target_x, params).first() {
        Some(&t) => Reach::At(t),
        None => Reach::Unreachable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent RK4 integration of x'' = (x - p) / tau^2.
    fn rk4(state: AxisState, pivot: f64, tau: f64, dt: f64, h: f64) -> AxisState {
        let f = |x: f64, v: f64| (v, (x - pivot) / (tau * tau));
        let steps = (dt / h).ceil().max(1.0) as usize;
        let h = dt / steps as f64;
        let (mut x, mut v) = (state.x, state.v);
        for _ in 0..steps {
            let (k1x, k1v) = f(x, v);
            let (k2x, k2v) = f(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
            let (k3x, k3v) = f(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
            let (k4x, k4v) = f(x + h * k3x, v + h * k3v);
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        AxisState::new(x, v)
    }

    fn params_with_tau(tau: f64) -> PendulumParams {
        PendulumParams::new(tau * tau * STANDARD_GRAVITY, STANDARD_GRAVITY).unwrap()
    }

    #[test]
    fn equilibrium_is_fixed() {
        let p = PendulumParams::default();
        for dt in [0.0, 0.1, 1.0, 3.0] {
            let s = propagate(AxisState::default(), 0.0, &p, dt).unwrap();
            assert_eq!(s, AxisState::default());
        }
    }

    #[test]
    fn propagate_matches_rk4_reference_value() {
        let p = params_with_tau(0.3);
        let s = propagate(AxisState::new(0.1, 0.0), 0.0, &p, 0.3).unwrap();
        let oracle = rk4(AxisState::new(0.1, 0.0), 0.0, 0.3, 0.3, 1e-5);
        assert!(((s.x - oracle.x) / oracle.x).abs() < 1e-6);
        assert!(((s.v - oracle.v) / oracle.v).abs() < 1e-6);
        // Frozen from the RK4 oracle: 0.1 cosh(1), (0.1/0.3) sinh(1).
        assert!((s.x - 0.154_308_063).abs() < 1e-8);
        assert!((s.v - 0.391_733_731).abs() < 1e-8);
    }

    #[test]
    fn odd_symmetry() {
        let p = PendulumParams::default();
        let s = AxisState::new(0.07, -0.2);
        let a = propagate(s, 0.0, &p, 0.37).unwrap();
        let b = propagate(s.mirrored(), 0.0, &p, 0.37).unwrap();
        assert_eq!(a.mirrored(), b);
    }

    #[test]
    fn rejects_bad_input() {
        let p = PendulumParams::default();
        assert!(matches!(
            propagate(AxisState::new(f64::NAN, 0.0), 0.0, &p, 0.1),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            propagate(AxisState::default(), 0.0, &p, -0.1),
            Err(Error::NegativeInterval(_))
        ));
        assert!(PendulumParams::new(0.0, 9.81).is_err());
        assert!(PendulumParams::new(0.9, -1.0).is_err());
    }

    #[test]
    fn energy_examples() {
        let p = PendulumParams::default();
        assert_eq!(orbital_energy(AxisState::new(0.0, 0.5), &p), 0.125);
        let v = 0.4;
        let on_separatrix = AxisState::new(p.tau() * v, v);
        assert!(orbital_energy(on_separatrix, &p).abs() < 1e-15);
        let s = AxisState::new(0.12, -0.3);
        let e0 = orbital_energy(s, &p);
        let e1 = orbital_energy(propagate(s, 0.0, &p, 0.4).unwrap(), &p);
        assert!((e0 - e1).abs() < 1e-9);
    }

    #[test]
    fn time_to_position_examples() {
        let p = params_with_tau(0.3);
        assert_eq!(
            time_to_position(AxisState::new(0.1, 0.2), 0.1, &p),
            Reach::At(0.0)
        );

        // Bisection oracle on the propagated trajectory.
        let s = AxisState::new(0.05, 0.1);
        let (mut lo, mut hi) = (0.0, 3.0);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if propagate(s, 0.0, &p, mid).unwrap().x < 0.15 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = time_to_position(s, 0.15, &p).time().unwrap();
        assert!((t - 0.5 * (lo + hi)).abs() < 1e-7);
        assert!((t - 0.391_045_301).abs() < 1e-8, "{t}");

        // RK4 rollout for 10 tau never gets near 0.5.
        let s = AxisState::new(0.1, -0.5);
        let mut cur = s;
        let mut max_x = cur.x;
        for _ in 0..300 {
            cur = rk4(cur, 0.0, 0.3, 0.01, 1e-4);
            max_x = max_x.max(cur.x);
        }
        assert!(max_x < 0.5);
        assert_eq!(time_to_position(s, 0.5, &p), Reach::Unreachable);
    }

    #[test]
    fn returning_orbit_has_two_crossings() {
        let p = PendulumParams::default();
        let tau = p.tau();
        let d = 0.15;
        let t0 = 0.45;
        let v0 = d / tau * (t0 / (2.0 * tau)).tanh();
        let times = crossing_times(AxisState::new(d, -v0), d, &p);
        assert_eq!(times.len(), 2);
        assert!(times[0] < 1e-9);
        assert!((times[1] - t0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn group_property(x in -0.5..0.5f64, v in -1.0..1.0f64, pivot in -0.1..0.1f64,
                          t1 in 0.0..0.5f64, t2 in 0.0..0.5f64) {
            let p = PendulumParams::default();
            let s = AxisState::new(x, v);
            let once = propagate(s, pivot, &p, t1 + t2).unwrap();
            let twice = propagate(propagate(s, pivot, &p, t1).unwrap(), pivot, &p, t2).unwrap();
            let scale = once.x.abs().max(once.v.abs()).max(1.0);
            prop_assert!((once.x - twice.x).abs() <= 1e-9 * scale);
            prop_assert!((once.v - twice.v).abs() <= 1e-9 * scale);
        }

        #[test]
        fn energy_conserved(x in -0.5..0.5f64, v in -1.0..1.0f64, dt in 0.0..0.9f64) {
            let p = PendulumParams::default();
            let s = AxisState::new(x, v);
            let e0 = orbital_energy(s, &p);
            let e1 = orbital_energy(propagate(s, 0.0, &p, dt).unwrap(), &p);
            prop_assert!((e0 - e1).abs() <= 1e-9 * e0.abs().max(1.0));
        }

        #[test]
        fn crossing_times_hit_target(x in -0.5..0.5f64, v in -1.0..1.0f64, target in -0.6..0.6f64) {
            let p = PendulumParams::default();
            let s = AxisState::new(x, v);
            for t in crossing_times(s, target, &p) {
                let reached = propagate(s, 0.0, &p, t).unwrap().x;
                prop_assert!((reached - target).abs() < 1e-7, "t={} reached={}", t, reached);
            }
        }
    }
}
