//! Quasi-static electrostatic induction model of a corona-driven rotor.
//!
//! The rotor sits in a uniform background field `E0` and receives charge from
//! stator discharge blades as a surface current `Jc e^{j(phi-alpha)}`. Solving
//! potential continuity and steady-state charge conservation on the rotor
//! surface gives a complex dipole coefficient, the rotor surface charge, and
//! the torque-speed law. A constitutive closure ties both `E0` and `Jc/sigma`
//! to the drive voltage through the electrode gap.
//!
//! All quantities are SI: meters, volts, seconds, newton-meters.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854e-12;

/// Electrical constants of the gap, rotor dielectric, and discharge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalParams {
    sigma_s_per_m: f64,
    eps_g_f_per_m: f64,
    eps_r_f_per_m: f64,
    alpha_rad: f64,
    v_onset_volts: f64,
    gap_m: f64,
}

impl ElectricalParams {
    pub fn new(
        sigma_s_per_m: f64,
        eps_g_f_per_m: f64,
        eps_r_f_per_m: f64,
        alpha_rad: f64,
        v_onset_volts: f64,
        gap_m: f64,
    ) -> Result<Self> {
        if !(sigma_s_per_m > 0.0) {
            return Err(Error::Domain(format!(
                "gap conductivity sigma must be positive, got {sigma_s_per_m} S/m"
            )));
        }
        if !(eps_g_f_per_m > 0.0) || !(eps_r_f_per_m > 0.0) {
            return Err(Error::Domain(format!(
                "permittivities must be positive, got eps_g {eps_g_f_per_m}, eps_r {eps_r_f_per_m} F/m"
            )));
        }
        if !(alpha_rad.abs() < PI / 2.0) {
            return Err(Error::Domain(format!(
                "discharge offset alpha must satisfy |alpha| < pi/2, got {alpha_rad} rad"
            )));
        }
        if !(gap_m > 0.0) {
            return Err(Error::Domain(format!(
                "electrode gap G must be positive, got {gap_m} m"
            )));
        }
        Ok(ElectricalParams {
            sigma_s_per_m,
            eps_g_f_per_m,
            eps_r_f_per_m,
            alpha_rad,
            v_onset_volts,
            gap_m,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_s_per_m
    }

    pub fn eps_g(&self) -> f64 {
        self.eps_g_f_per_m
    }

    pub fn eps_r(&self) -> f64 {
        self.eps_r_f_per_m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_rad
    }

    pub fn v_onset(&self) -> f64 {
        self.v_onset_volts
    }

    pub fn gap(&self) -> f64 {
        self.gap_m
    }
}

/// Rotor extent and inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorBody {
    radius_m: f64,
    length_m: f64,
    inertia_kg_m2: f64,
}

impl RotorBody {
    pub fn new(radius_m: f64, length_m: f64, inertia_kg_m2: f64) -> Result<Self> {
        if !(radius_m > 0.0) || !(length_m > 0.0) || !(inertia_kg_m2 > 0.0) {
            return Err(Error::Domain(format!(
                "rotor radius, length, and inertia must be positive, got R={radius_m} m, L={length_m} m, I={inertia_kg_m2} kg m^2"
            )));
        }
        Ok(RotorBody {
            radius_m,
            length_m,
            inertia_kg_m2,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius_m
    }

    pub fn length(&self) -> f64 {
        self.length_m
    }

    pub fn inertia(&self) -> f64 {
        self.inertia_kg_m2
    }
}

/// Effective drive field from the constitutive closure
/// `E0 = Jc/sigma = (|V| - |V_onset|) / (2R + 2G)`.
///
/// Drive voltages are negative in practice; the magnitude convention keeps
/// the torque sign carried solely by `alpha` and the rotor speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveField {
    /// Field magnitude (V/m); zero at or below onset.
    pub field_v_per_m: f64,
    /// True when `|V| < |V_onset|`: no discharge, no torque.
    pub below_onset: bool,
}

pub fn effective_field(params: &ElectricalParams, radius_m: f64, volts: f64) -> EffectiveField {
    let margin = volts.abs() - params.v_onset().abs();
    if margin < 0.0 {
        return EffectiveField {
            field_v_per_m: 0.0,
            below_onset: true,
        };
    }
    EffectiveField {
        field_v_per_m: margin / (2.0 * radius_m + 2.0 * params.gap()),
        below_onset: false,
    }
}

/// Charge-relaxation time constant `tau = (eps_r + eps_g) / sigma`.
pub fn time_constant(params: &ElectricalParams) -> f64 {
    (params.eps_r() + params.eps_g()) / params.sigma()
}

/// Complex field coefficients on the rotor surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSolution {
    /// Dipole coefficient of the exterior potential (V m).
    pub a_hat: Complex64,
    /// Uniform interior field coefficient (V/m).
    pub b_hat: Complex64,
    /// Background field (V/m).
    pub e0: f64,
    /// Corona drive ratio `Jc/sigma` (V/m).
    pub jc_over_sigma: f64,
    /// Charge-relaxation time constant (s).
    pub tau: f64,
}

/// Solve the steady-state boundary conditions for the dipole coefficient:
///
/// `A = R^2 (-E0 [sigma + j Omega (eps_g - eps_r)] - Jc e^{-j alpha})
///        / (sigma + j Omega (eps_g + eps_r))`
///
/// with `B` recovered from potential continuity `E0 = A/R^2 + B`. This is
/// the unique solution of the charge-conservation boundary condition; it
/// reproduces the surface-charge profile and the torque-speed law exactly.
pub fn dipole_coefficients(
    params: &ElectricalParams,
    radius_m: f64,
    e0: f64,
    jc_over_sigma: f64,
    omega: f64,
) -> FieldSolution {
    let sigma = params.sigma();
    let jc = sigma * jc_over_sigma;
    let numerator = Complex64::new(-e0 * sigma, -e0 * omega * (params.eps_g() - params.eps_r()))
        - jc * Complex64::from_polar(1.0, -params.alpha());
    let denominator = Complex64::new(sigma, omega * (params.eps_g() + params.eps_r()));
    let a_hat = radius_m * radius_m * numerator / denominator;
    let b_hat = Complex64::new(e0, 0.0) - a_hat / (radius_m * radius_m);
    FieldSolution {
        a_hat,
        b_hat,
        e0,
        jc_over_sigma,
        tau: time_constant(params),
    }
}

/// Rotor surface charge density sampled on a uniform azimuthal grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceChargeProfile {
    values: Vec<f64>,
}

impl SurfaceChargeProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    /// Azimuth of sample `k` (rad).
    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.values.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Sample the rotor surface charge
///
/// `rho(phi) = -(eps_g + eps_r)/(1 + (Omega tau)^2) (Jc/sigma)
///                 [cos(phi - alpha) + Omega tau sin(phi - alpha)]
///             - 2 eps_r /(1 + (Omega tau)^2) E0 [cos(phi) + Omega tau sin(phi)]`
///
/// on `grid_size` uniform azimuth points. A pure dipole distribution: the
/// profile mean is zero.
pub fn surface_charge(
    params: &ElectricalParams,
    e0: f64,
    jc_over_sigma: f64,
    omega: f64,
    grid_size: usize,
) -> Result<SurfaceChargeProfile> {
    if grid_size < 8 {
        return Err(Error::Domain(format!(
            "surface charge grid must have at least 8 samples, got {grid_size}"
        )));
    }
    let tau = time_constant(params);
    let x = omega * tau;
    let denom = 1.0 + x * x;
    let drive = -(params.eps_g() + params.eps_r()) / denom * jc_over_sigma;
    let relax = -2.0 * params.eps_r() / denom * e0;
    let alpha = params.alpha();
    let values = (0..grid_size)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / grid_size as f64;
            drive * ((phi - alpha).cos() + x * (phi - alpha).sin())
                + relax * (phi.cos() + x * phi.sin())
        })
        .collect();
    Ok(SurfaceChargeProfile { values })
}

/// Torque from explicit field drives (N m):
///
/// `T = 2 pi L R^2 [ 2 eps_r eps_g / (eps_g + eps_r) E0^2 Omega tau
///      + eps_g E0 (Jc/sigma) (sin(alpha) + Omega tau cos(alpha)) ]
///      / (1 + (Omega tau)^2)`
pub fn torque_from_fields(
    params: &ElectricalParams,
    body: &RotorBody,
    e0: f64,
    jc_over_sigma: f64,
    omega: f64,
) -> f64 {
    let tau = time_constant(params);
    let x = omega * tau;
    let eps_g = params.eps_g();
    let eps_r = params.eps_r();
    let induction = 2.0 * eps_r * eps_g / (eps_g + eps_r) * e0 * e0 * x;
    let discharge =
        eps_g * e0 * jc_over_sigma * (params.alpha().sin() + x * params.alpha().cos());
    2.0 * PI * body.length() * body.radius() * body.radius() * (induction + discharge)
        / (1.0 + x * x)
}

/// Motor torque at a drive voltage and rotor speed (N m). Positive torque is
/// the self-start direction; below onset the torque is zero.
pub fn torque(params: &ElectricalParams, body: &RotorBody, volts: f64, omega: f64) -> f64 {
    let field = effective_field(params, body.radius(), volts);
    if field.field_v_per_m == 0.0 {
        return 0.0;
    }
    torque_from_fields(params, body, field.field_v_per_m, field.field_v_per_m, omega)
}

/// Closed-form maximum torque over speed (N m):
///
/// `T_max = pi L R^2 [ 2 eps_r eps_g E0^2 / (eps_r + eps_g)
///          + eps_g E0 (Jc/sigma) (1 + sin(alpha)) ]`
///
/// Exact for `alpha = 0`; slightly above the true speed-curve maximum
/// otherwise (compare with [`max_torque_numeric`]).
pub fn max_torque(params: &ElectricalParams, body: &RotorBody, volts: f64) -> f64 {
    let field = effective_field(params, body.radius(), volts);
    if field.field_v_per_m == 0.0 {
        return 0.0;
    }
    let e0 = field.field_v_per_m;
    let eps_g = params.eps_g();
    let eps_r = params.eps_r();
    PI * body.length()
        * body.radius()
        * body.radius()
        * (2.0 * eps_r * eps_g * e0 * e0 / (eps_r + eps_g)
            + eps_g * e0 * e0 * (1.0 + params.alpha().sin()))
}

/// Speed at and value of the numeric maximum of the torque-speed curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorquePeak {
    pub omega_rad_s: f64,
    pub torque_nm: f64,
}

/// Locate the maximum of the torque-speed curve on `[0, 10/tau]` by a dense
/// grid scan refined with golden-section search.
pub fn max_torque_numeric(params: &ElectricalParams, body: &RotorBody, volts: f64) -> TorquePeak {
    let field = effective_field(params, body.radius(), volts);
    if field.field_v_per_m == 0.0 {
        return TorquePeak {
            omega_rad_s: 0.0,
            torque_nm: 0.0,
        };
    }
    let omega_hi = 10.0 / time_constant(params);
    const GRID: usize = 4096;
    let f = |omega: f64| torque(params, body, volts, omega);
    let mut best_k = 0;
    let mut best = f(0.0);
    for k in 1..=GRID {
        let t = f(omega_hi * k as f64 / GRID as f64);
        if t > best {
            best = t;
            best_k = k;
        }
    }
    let lo = omega_hi * best_k.saturating_sub(1) as f64 / GRID as f64;
    let hi = omega_hi * (best_k + 1).min(GRID) as f64 / GRID as f64;
    let (omega_rad_s, torque_nm) = crate::numeric::golden_max(f, lo, hi, 1e-10 * omega_hi);
    TorquePeak {
        omega_rad_s,
        torque_nm,
    }
}

/// One row of a torque-speed table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueSpeedPoint {
    pub omega_rad_s: f64,
    pub torque_nm: f64,
}

fn sweep_grid(omega_range: (f64, f64), steps: usize) -> Result<Vec<f64>> {
    let (lo, hi) = omega_range;
    if steps < 2 || !(hi > lo) {
        return Err(Error::Domain(format!(
            "torque-speed sweep needs steps >= 2 and a non-empty range, got {steps} steps on [{lo}, {hi}]"
        )));
    }
    Ok((0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect())
}

/// Tabulate the torque-speed curve on a uniform grid of `steps` speeds.
pub fn torque_speed_sweep(
    params: &ElectricalParams,
    body: &RotorBody,
    volts: f64,
    omega_range: (f64, f64),
    steps: usize,
) -> Result<Vec<TorqueSpeedPoint>> {
    Ok(sweep_grid(omega_range, steps)?
        .into_iter()
        .map(|omega_rad_s| TorqueSpeedPoint {
            omega_rad_s,
            torque_nm: torque(params, body, volts, omega_rad_s),
        })
        .collect())
}

/// Parallel [`torque_speed_sweep`]; identical output, rows computed across
/// the rayon thread pool.
#[cfg(feature = "parallel")]
pub fn par_torque_speed_sweep(
    params: &ElectricalParams,
    body: &RotorBody,
    volts: f64,
    omega_range: (f64, f64),
    steps: usize,
) -> Result<Vec<TorqueSpeedPoint>> {
    use rayon::prelude::*;
    Ok(sweep_grid(omega_range, steps)?
        .into_par_iter()
        .map(|omega_rad_s| TorqueSpeedPoint {
            omega_rad_s,
            torque_nm: torque(params, body, volts, omega_rad_s),
        })
        .collect())
}
