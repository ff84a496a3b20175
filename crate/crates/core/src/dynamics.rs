//! Rotor mechanical dynamics: net torque against a friction/windage load,
//! fixed-step integration of speed-up and spin-down under a voltage
//! schedule, and steady-state operating points where the motor curve
//! crosses the load curve.

use crate::corona::{self, ElectricalParams, RotorBody};
use crate::error::{Error, Result};
use crate::estimation::{SpeedTrace, TraceMeta};
use crate::numeric;

/// Quadratic friction/windage load `sign(w) (c0 + c1 |w| + c2 w^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadModel {
    c0_nm: f64,
    c1_nm_s: f64,
    c2_nm_s2: f64,
}

impl LoadModel {
    pub fn new(c0_nm: f64, c1_nm_s: f64, c2_nm_s2: f64) -> Result<Self> {
        if c0_nm < 0.0 || c1_nm_s < 0.0 || c2_nm_s2 < 0.0 {
            return Err(Error::Domain(format!(
                "load coefficients must be non-negative, got ({c0_nm}, {c1_nm_s}, {c2_nm_s2})"
            )));
        }
        Ok(LoadModel {
            c0_nm,
            c1_nm_s,
            c2_nm_s2,
        })
    }

    pub fn zero() -> Self {
        LoadModel {
            c0_nm: 0.0,
            c1_nm_s: 0.0,
            c2_nm_s2: 0.0,
        }
    }

    pub fn c0(&self) -> f64 {
        self.c0_nm
    }

    pub fn c1(&self) -> f64 {
        self.c1_nm_s
    }

    pub fn c2(&self) -> f64 {
        self.c2_nm_s2
    }

    /// Load torque opposing motion at speed `omega` (signed).
    pub fn torque_at(&self, omega: f64) -> f64 {
        let w = omega.abs();
        omega.signum() * (self.c0_nm + self.c1_nm_s * w + self.c2_nm_s2 * w * w)
    }

    /// Load magnitude at a non-negative speed.
    pub fn magnitude_at(&self, speed: f64) -> f64 {
        let w = speed.abs();
        self.c0_nm + self.c1_nm_s * w + self.c2_nm_s2 * w * w
    }
}

/// Piecewise-constant drive voltage: ordered `(t_start, volts)` steps, the
/// first at `t = 0`. A zero-volt step models power-off.
#[derive(Debug, Clone, PartialEq)]
pub struct VoltageSchedule {
    steps: Vec<(f64, f64)>,
}

impl VoltageSchedule {
    pub fn new(steps: Vec<(f64, f64)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Domain("voltage schedule must have at least one step".into()));
        }
        if steps[0].0 != 0.0 {
            return Err(Error::Domain(format!(
                "schedule must start at t = 0, got {}",
                steps[0].0
            )));
        }
        for i in 1..steps.len() {
            if !(steps[i].0 > steps[i - 1].0) {
                return Err(Error::Domain(format!(
                    "schedule times must increase strictly (step {i})"
                )));
            }
        }
        Ok(VoltageSchedule { steps })
    }

    /// Constant drive voltage.
    pub fn constant(volts: f64) -> Self {
        VoltageSchedule {
            steps: vec![(0.0, volts)],
        }
    }

    /// Drive at `volts`, power off at `t_off`.
    pub fn on_off(volts: f64, t_off: f64) -> Result<Self> {
        VoltageSchedule::new(vec![(0.0, volts), (t_off, 0.0)])
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    pub fn voltage_at(&self, t: f64) -> f64 {
        let idx = self.steps.partition_point(|(start, _)| *start <= t);
        if idx == 0 {
            self.steps[0].1
        } else {
            self.steps[idx - 1].1
        }
    }

    /// First nonzero drive voltage, if any.
    pub fn drive_voltage(&self) -> Option<f64> {
        self.steps.iter().find(|(_, v)| *v != 0.0).map(|(_, v)| *v)
    }

    /// Zero-voltage spans as `(start, end)`; the final span is open-ended.
    pub fn off_spans(&self) -> Vec<(f64, Option<f64>)> {
        let mut spans = Vec::new();
        for (i, (start, volts)) in self.steps.iter().enumerate() {
            if *volts == 0.0 {
                let end = self.steps.get(i + 1).map(|(t, _)| *t);
                spans.push((*start, end));
            }
        }
        spans
    }
}

/// Motor torque minus load torque. At rest the opposing term is capped at
/// the motor torque, so a motor below breakaway stays put.
pub fn net_torque(
    params: &ElectricalParams,
    body: &RotorBody,
    load: &LoadModel,
    volts: f64,
    omega: f64,
) -> f64 {
    let motor = corona::torque(params, body, volts, omega);
    if omega == 0.0 {
        motor - motor.signum() * load.c0().min(motor.abs())
    } else {
        motor - load.torque_at(omega)
    }
}

/// Integrate `I dw/dt = T_net`, `dtheta/dt = w` with classical fourth-order
/// Runge-Kutta at a fixed step, emitting a sample every `dt`. The voltage
/// follows the schedule at each sub-step time. When a step would carry the
/// speed through zero (or into the breakaway band `c0 dt / I`) while the
/// motor torque at rest is below the Coulomb level, the rotor is parked at
/// zero speed.
pub fn simulate(
    params: &ElectricalParams,
    body: &RotorBody,
    load: &LoadModel,
    schedule: &VoltageSchedule,
    dt: f64,
    t_end: f64,
    omega0: f64,
) -> Result<SpeedTrace> {
    if !(dt > 0.0) || !(t_end > 0.0) || dt >= t_end {
        return Err(Error::Domain(format!(
            "need 0 < dt < t_end, got dt={dt}, t_end={t_end}"
        )));
    }
    let steps = (t_end / dt).round() as usize;
    let inertia = body.inertia();
    let band = load.c0() * dt / inertia;

    let mut theta = 0.0f64;
    let mut omega = omega0;
    let mut times = Vec::with_capacity(steps + 1);
    let mut angles = Vec::with_capacity(steps + 1);
    let mut omegas = Vec::with_capacity(steps + 1);
    times.push(0.0);
    angles.push(theta);
    omegas.push(omega);

    for k in 0..steps {
        let t = k as f64 * dt;
        let accel = |t_sub: f64, w: f64| {
            net_torque(params, body, load, schedule.voltage_at(t_sub), w) / inertia
        };
        let k1 = accel(t, omega);
        let k2 = accel(t + 0.5 * dt, omega + 0.5 * dt * k1);
        let k3 = accel(t + 0.5 * dt, omega + 0.5 * dt * k2);
        let k4 = accel(t + dt, omega + dt * k3);
        let mut omega_next = omega + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // Same quadrature for the angle: dtheta/dt = w.
        theta += dt / 6.0
            * (omega
                + 2.0 * (omega + 0.5 * dt * k1)
                + 2.0 * (omega + 0.5 * dt * k2)
                + (omega + dt * k3));

        let t_next = (k + 1) as f64 * dt;
        let crossed_zero = omega_next * omega < 0.0;
        if crossed_zero || omega_next.abs() < band {
            let motor_at_rest =
                corona::torque(params, body, schedule.voltage_at(t_next), 0.0);
            if motor_at_rest.abs() <= load.c0() {
                omega_next = 0.0;
            }
        }
        omega = omega_next;
        times.push(t_next);
        angles.push(theta);
        omegas.push(omega);
    }

    let meta = TraceMeta {
        voltage_volts: schedule.drive_voltage(),
        frame_rate_hz: Some(1.0 / dt),
    };
    SpeedTrace::new(times, angles, meta)?.with_omega(omegas)
}

/// A steady operating point: motor torque equals load torque, with the
/// stability of the balance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub omega_rad_s: f64,
    pub torque_nm: f64,
    /// True when net torque decreases through zero at the point.
    pub stable: bool,
}

const STEADY_STATE_GRID: usize = 2048;

/// Largest positive speed where the motor curve intersects the load curve,
/// found by a sign-change scan over `(0, 10/tau]` refined by bisection.
/// `None` when the curves never cross (the motor cannot run at this drive).
pub fn steady_state(
    params: &ElectricalParams,
    body: &RotorBody,
    load: &LoadModel,
    volts: f64,
) -> Option<OperatingPoint> {
    let omega_hi = 10.0 / corona::time_constant(params);
    let f = |omega: f64| corona::torque(params, body, volts, omega) - load.magnitude_at(omega);
    let grid = |k: usize| omega_hi * k as f64 / STEADY_STATE_GRID as f64;

    let mut bracket = None;
    let mut prev = f(grid(1));
    for k in 2..=STEADY_STATE_GRID {
        let cur = f(grid(k));
        if prev == 0.0 || (prev > 0.0) != (cur > 0.0) {
            bracket = Some((grid(k - 1), grid(k)));
        }
        prev = cur;
    }
    let (lo, hi) = bracket?;
    let omega_star = numeric::bisect(f, lo, hi);

    let h = omega_hi * 1e-7;
    let slope = (f(omega_star + h) - f(omega_star - h)) / (2.0 * h);
    Some(OperatingPoint {
        omega_rad_s: omega_star,
        torque_nm: corona::torque(params, body, volts, omega_star),
        stable: slope < 0.0,
    })
}

/// Steady-state operating points across drive voltages. Voltages with no
/// intersection are reported separately rather than as table rows.
#[derive(Debug, Clone, PartialEq)]
pub struct VoltageSweep {
    pub rows: Vec<(f64, OperatingPoint)>,
    pub skipped_volts: Vec<f64>,
}

fn collect_sweep(volts_list: &[f64], points: Vec<Option<OperatingPoint>>) -> VoltageSweep {
    let mut rows = Vec::new();
    let mut skipped_volts = Vec::new();
    for (v, p) in volts_list.iter().zip(points) {
        match p {
            Some(point) => rows.push((*v, point)),
            None => skipped_volts.push(*v),
        }
    }
    VoltageSweep {
        rows,
        skipped_volts,
    }
}

pub fn voltage_sweep_steady_state(
    params: &ElectricalParams,
    body: &RotorBody,
    load: &LoadModel,
    volts_list: &[f64],
) -> VoltageSweep {
    let points = volts_list
        .iter()
        .map(|v| steady_state(params, body, load, *v))
        .collect();
    collect_sweep(volts_list, points)
}

/// Parallel [`voltage_sweep_steady_state`]; one rayon task per voltage.
#[cfg(feature = "parallel")]
pub fn par_voltage_sweep_steady_state(
    params: &ElectricalParams,
    body: &RotorBody,
    load: &LoadModel,
    volts_list: &[f64],
) -> VoltageSweep {
    use rayon::prelude::*;
    let points = volts_list
        .par_iter()
        .map(|v| steady_state(params, body, load, *v))
        .collect();
    collect_sweep(volts_list, points)
}
