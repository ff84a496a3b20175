//! Regressions: quadratic load curve from spin-down kinematics, motor torque
//! extraction, electrical-parameter identification, and the speed-voltage
//! line fit.

use super::{FitReport, FittedParam, KinematicsTrace};
use crate::corona::{self, ElectricalParams, RotorBody, TorqueSpeedPoint};
use crate::dynamics::LoadModel;
use crate::error::{Error, Result};
use crate::numeric;

/// Pool spin-down kinematics and fit `T_load = c0 + c1 |w| + c2 w^2` by
/// least squares with the coefficients clamped non-negative. During
/// spin-down the measured deceleration gives `T_load = -I alpha_dot`.
pub fn fit_load_quadratic(
    segments: &[KinematicsTrace],
    inertia_kg_m2: f64,
) -> Result<(LoadModel, FitReport)> {
    if !(inertia_kg_m2 > 0.0) {
        return Err(Error::Domain(format!(
            "inertia must be positive, got {inertia_kg_m2} kg m^2"
        )));
    }
    let mut rows: Vec<[f64; 3]> = Vec::new();
    let mut y: Vec<f64> = Vec::new();
    for seg in segments {
        for (om, ad) in seg.omega().iter().zip(seg.alpha_dot()) {
            let w = om.abs();
            rows.push([1.0, w, w * w]);
            y.push(-inertia_kg_m2 * ad * om.signum());
        }
    }
    if rows.len() < 10 {
        return Err(Error::Domain(format!(
            "load fit needs at least 10 pooled samples, got {}",
            rows.len()
        )));
    }

    // Column-scaled rank check on the full design.
    let mut scale = [0.0f64; 3];
    for row in &rows {
        for (s, v) in scale.iter_mut().zip(row) {
            *s = s.max(v.abs());
        }
    }
    if scale.iter().any(|s| *s == 0.0) {
        return Err(Error::Fit("load design has an all-zero column".into()));
    }
    let normal_scaled: Vec<Vec<f64>> = (0..3)
        .map(|r| {
            (0..3)
                .map(|c| {
                    rows.iter().map(|row| row[r] * row[c]).sum::<f64>() / (scale[r] * scale[c])
                })
                .collect()
        })
        .collect();
    let rhs_scaled: Vec<f64> = (0..3)
        .map(|r| rows.iter().zip(&y).map(|(row, yi)| row[r] * yi).sum::<f64>() / scale[r])
        .collect();
    if numeric::solve(normal_scaled.clone(), rhs_scaled.clone()).is_none() {
        return Err(Error::Fit(
            "load design is rank-deficient; spin-down speeds do not vary enough".into(),
        ));
    }

    // Exact non-negative least squares over three coefficients: try every
    // support set, keep the feasible solution with the smallest residual.
    let sse_of = |c: &[f64; 3]| -> f64 {
        rows.iter()
            .zip(&y)
            .map(|(row, yi)| {
                let pred = row[0] * c[0] + row[1] * c[1] + row[2] * c[2];
                (yi - pred) * (yi - pred)
            })
            .sum()
    };
    let mut best: Option<([f64; 3], f64)> = None;
    for mask in 0u8..8 {
        let active: Vec<usize> = (0..3).filter(|k| mask & (1 << k) != 0).collect();
        let mut c = [0.0f64; 3];
        if !active.is_empty() {
            let sub_normal: Vec<Vec<f64>> = active
                .iter()
                .map(|&r| active.iter().map(|&cc| {
                    rows.iter().map(|row| row[r] * row[cc]).sum::<f64>()
                        / (scale[r] * scale[cc])
                }).collect())
                .collect();
            let sub_rhs: Vec<f64> = active
                .iter()
                .map(|&r| {
                    rows.iter().zip(&y).map(|(row, yi)| row[r] * yi).sum::<f64>() / scale[r]
                })
                .collect();
            let Some(sol) = numeric::solve(sub_normal, sub_rhs) else {
                continue;
            };
            if sol.iter().any(|v| *v < 0.0) {
                continue;
            }
            for (k, &idx) in active.iter().enumerate() {
                c[idx] = sol[k] / scale[idx];
            }
        }
        let sse = sse_of(&c);
        if best.map_or(true, |(_, b)| sse < b) {
            best = Some((c, sse));
        }
    }
    let (coeffs, sse) = best.expect("the empty support set always evaluates");

    let n = rows.len();
    let covariance = numeric::invert(&normal_scaled).map(|inv| {
        let s2 = sse / (n.saturating_sub(3).max(1)) as f64;
        let mut cov = vec![0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                cov[r * 3 + c] = s2 * inv[r][c] / (scale[r] * scale[c]);
            }
        }
        cov
    });

    let load = LoadModel::new(coeffs[0], coeffs[1], coeffs[2])?;
    let report = FitReport {
        params: vec![
            FittedParam { name: "c0", value: coeffs[0], unit: "N m" },
            FittedParam { name: "c1", value: coeffs[1], unit: "N m s/rad" },
            FittedParam { name: "c2", value: coeffs[2], unit: "N m s^2/rad^2" },
        ],
        residual_rms: (sse / n as f64).sqrt(),
        iterations: 1,
        converged: true,
        covariance,
        degenerate: false,
    };
    Ok((load, report))
}

/// Motor torque along a powered trace: `T_motor = I alpha_dot + T_load(w)`.
pub fn motor_torque_from_trace(
    kin: &KinematicsTrace,
    inertia_kg_m2: f64,
    load: &LoadModel,
) -> Vec<TorqueSpeedPoint> {
    kin.omega()
        .iter()
        .zip(kin.alpha_dot())
        .map(|(om, ad)| TorqueSpeedPoint {
            omega_rad_s: *om,
            torque_nm: inertia_kg_m2 * ad + load.torque_at(*om),
        })
        .collect()
}

/// One torque-speed observation at a known drive voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorTorqueSample {
    pub omega_rad_s: f64,
    pub torque_nm: f64,
    pub volts: f64,
}

/// Electrical quantities held fixed during the motor fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedFieldParams {
    pub eps_g_f_per_m: f64,
    pub eps_r_f_per_m: f64,
    pub gap_m: f64,
}

/// Knobs for the multi-start motor-parameter search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorFitOptions {
    /// Permutes the start order; 0 keeps the natural order. Selection is by
    /// best residual with ties broken by execution order, so the seed only
    /// matters on exact ties.
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for MotorFitOptions {
    fn default() -> Self {
        MotorFitOptions {
            seed: 0,
            max_iterations: 400,
        }
    }
}

const LOG_SIGMA_LO: f64 = -11.0;
const LOG_SIGMA_HI: f64 = -6.0;
const ALPHA_LIMIT: f64 = 1.55;
const SIGMA_STARTS: [f64; 4] = [-10.0, -9.0, -8.0, -7.0];
const ALPHA_STARTS: [f64; 3] = [0.0, 0.2, 0.4];

#[derive(Debug, Clone, Copy)]
struct NmOutcome {
    x: [f64; 3],
    sse: f64,
    iterations: usize,
    converged: bool,
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// Nelder-Mead on a 3-vector with reflection/expansion/contraction/shrink.
fn nelder_mead(f: &dyn Fn(&[f64; 3]) -> f64, x0: [f64; 3], steps: [f64; 3], max_iter: usize) -> NmOutcome {
    let mut simplex: Vec<[f64; 3]> = vec![x0];
    for i in 0..3 {
        let mut p = x0;
        p[i] += steps[i];
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i]).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let diameter = simplex[1..]
            .iter()
            .map(|p| {
                (0..3)
                    .map(|k| (p[k] - simplex[0][k]).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if (values[3] - values[0]).abs() <= 1e-14 * values[0].abs().max(1e-300) || diameter <= 1e-9
        {
            converged = true;
            break;
        }
        let mut centroid = [0.0; 3];
        for p in &simplex[..3] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / 3.0;
            }
        }
        let worst = simplex[3];
        let dir = |t: f64| {
            let mut p = [0.0; 3];
            for k in 0..3 {
                p[k] = centroid[k] + t * (centroid[k] - worst[k]);
            }
            p
        };
        let reflected = dir(1.0);
        let f_reflected = f(&reflected);
        if f_reflected < values[0] {
            let expanded = dir(2.0);
            let f_expanded = f(&expanded);
            if f_expanded < f_reflected {
                simplex[3] = expanded;
                values[3] = f_expanded;
            } else {
                simplex[3] = reflected;
                values[3] = f_reflected;
            }
        } else if f_reflected < values[2] {
            simplex[3] = reflected;
            values[3] = f_reflected;
        } else {
            let contracted = dir(-0.5);
            let f_contracted = f(&contracted);
            if f_contracted < values[3] {
                simplex[3] = contracted;
                values[3] = f_contracted;
            } else {
                for i in 1..4 {
                    for k in 0..3 {
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..4).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    NmOutcome {
        x: simplex[best],
        sse: values[best],
        iterations,
        converged,
    }
}

struct MotorObjective<'a> {
    points: &'a [MotorTorqueSample],
    body: &'a RotorBody,
    known: FixedFieldParams,
    v_min_abs: f64,
}

impl MotorObjective<'_> {
    fn params_from(&self, x: &[f64; 3]) -> ElectricalParams {
        let sigma = 10f64.powf(clamp(x[0], LOG_SIGMA_LO, LOG_SIGMA_HI));
        let v_onset = -clamp(x[1], 0.0, 1.0) * self.v_min_abs;
        let alpha = clamp(x[2], -ALPHA_LIMIT, ALPHA_LIMIT);
        ElectricalParams::new(
            sigma,
            self.known.eps_g_f_per_m,
            self.known.eps_r_f_per_m,
            alpha,
            v_onset,
            self.known.gap_m,
        )
        .expect("clamped fit parameters are always valid")
    }

    fn sse(&self, x: &[f64; 3]) -> f64 {
        let params = self.params_from(x);
        self.points
            .iter()
            .map(|p| {
                let r = corona::torque(&params, self.body, p.volts, p.omega_rad_s) - p.torque_nm;
                r * r
            })
            .sum()
    }

}

fn starts() -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(SIGMA_STARTS.len() * ALPHA_STARTS.len());
    for s in SIGMA_STARTS {
        for a in ALPHA_STARTS {
            out.push([s, 0.5, a]);
        }
    }
    out
}

fn validate_motor_inputs(
    points: &[MotorTorqueSample],
    known: &FixedFieldParams,
) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "motor fit needs at least 3 torque samples, got {}",
            points.len()
        )));
    }
    if !(known.eps_g_f_per_m > 0.0 && known.eps_r_f_per_m > 0.0 && known.gap_m > 0.0) {
        return Err(Error::Domain(
            "fixed field parameters must be positive".into(),
        ));
    }
    let v_min_abs = points
        .iter()
        .map(|p| p.volts.abs())
        .fold(f64::INFINITY, f64::min);
    if !(v_min_abs > 0.0) {
        return Err(Error::Domain(
            "torque samples must carry a nonzero drive voltage".into(),
        ));
    }
    Ok(v_min_abs)
}

fn finish_motor_fit(
    objective: &MotorObjective<'_>,
    outcomes: Vec<NmOutcome>,
    n: usize,
) -> Result<(ElectricalParams, FitReport)> {
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.sse.total_cmp(&b.sse).then(ia.cmp(ib)))
        .map(|(_, o)| *o)
        .expect("at least one start ran");

    let params = objective.params_from(&best.x);
    let sigma = params.sigma();
    let v_onset = params.v_onset();
    let alpha = params.alpha();

    // Linearized covariance from a central-difference Jacobian in natural
    // units. A near-singular information matrix marks confounded parameters.
    let steps = [sigma * 1e-4, objective.v_min_abs * 1e-5, 1e-5];
    let mut jtj = vec![vec![0.0; 3]; 3];
    let mut jac: Vec<[f64; 3]> = vec![[0.0; 3]; n];
    for (k, h) in steps.iter().enumerate() {
        let mut plus = [sigma, v_onset, alpha];
        let mut minus = plus;
        plus[k] += h;
        minus[k] -= h;
        // Keep sigma positive for the minus probe.
        if k == 0 && minus[0] <= 0.0 {
            minus[0] = sigma * 0.5;
        }
        let p_plus = ElectricalParams::new(
            plus[0], objective.known.eps_g_f_per_m, objective.known.eps_r_f_per_m,
            clamp(plus[2], -ALPHA_LIMIT, ALPHA_LIMIT), plus[1], objective.known.gap_m,
        ).expect("probe parameters valid");
        let p_minus = ElectricalParams::new(
            minus[0], objective.known.eps_g_f_per_m, objective.known.eps_r_f_per_m,
            clamp(minus[2], -ALPHA_LIMIT, ALPHA_LIMIT), minus[1], objective.known.gap_m,
        ).expect("probe parameters valid");
        let span = plus[k] - minus[k];
        for (i, pt) in objective.points.iter().enumerate() {
            let f_plus = corona::torque(&p_plus, objective.body, pt.volts, pt.omega_rad_s);
            let f_minus = corona::torque(&p_minus, objective.body, pt.volts, pt.omega_rad_s);
            jac[i][k] = (f_plus - f_minus) / span;
        }
    }
    for row in &jac {
        for r in 0..3 {
            for c in 0..3 {
                jtj[r][c] += row[r] * row[c];
            }
        }
    }
    let s2 = best.sse / n.saturating_sub(3).max(1) as f64;
    // Normalize the information matrix to correlation form before judging
    // conditioning; the raw parameter scales differ by many decades.
    let diag: Vec<f64> = (0..3).map(|k| jtj[k][k]).collect();
    let (covariance, degenerate) = if diag.iter().any(|d| !(*d > 0.0)) {
        (None, true)
    } else {
        let corr: Vec<Vec<f64>> = (0..3)
            .map(|r| {
                (0..3)
                    .map(|c| jtj[r][c] / (diag[r] * diag[c]).sqrt())
                    .collect()
            })
            .collect();
        match numeric::invert(&corr) {
            None => (None, true),
            Some(inv) => {
                // Variance inflation: entries of the inverse correlation
                // matrix blow up when parameters are confounded.
                let worst = inv.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
                let cov = (0..3)
                    .flat_map(|r| (0..3).map(move |c| (r, c)))
                    .map(|(r, c)| s2 * inv[r][c] / (diag[r] * diag[c]).sqrt())
                    .collect();
                (Some(cov), worst > 30.0)
            }
        }
    };

    let report = FitReport {
        params: vec![
            FittedParam { name: "sigma_S_per_m", value: sigma, unit: "S/m" },
            FittedParam { name: "V_onset_V", value: v_onset, unit: "V" },
            FittedParam { name: "alpha_rad", value: alpha, unit: "rad" },
        ],
        residual_rms: (best.sse / n as f64).sqrt(),
        iterations: best.iterations,
        converged: best.converged,
        covariance,
        degenerate,
    };

    if !outcomes.iter().any(|o| o.converged) {
        return Err(Error::FitNonConvergence {
            message: "no start converged; best residual retained in the report".into(),
            report: Box::new(report),
        });
    }
    Ok((params, report))
}

/// Identify `(sigma, V_onset, alpha)` from torque-speed points spanning one
/// or more drive voltages, holding permittivities and the gap fixed.
/// Multi-start Nelder-Mead over bounded parameters:
/// `sigma in [1e-11, 1e-6] S/m`, `|V_onset| <= min |V|`, `|alpha| < pi/2`.
///
/// Points from a single voltage leave `sigma` and `V_onset` partially
/// confounded; such fits come back flagged `degenerate`.
pub fn fit_motor_params(
    points: &[MotorTorqueSample],
    body: &RotorBody,
    known: &FixedFieldParams,
    options: &MotorFitOptions,
) -> Result<(ElectricalParams, FitReport)> {
    let v_min_abs = validate_motor_inputs(points, known)?;
    let objective = MotorObjective {
        points,
        body,
        known: *known,
        v_min_abs,
    };
    let start_list = starts();
    let order = numeric::seeded_order(start_list.len(), options.seed);
    let f = |x: &[f64; 3]| objective.sse(x);
    let outcomes: Vec<NmOutcome> = order
        .iter()
        .map(|&i| nelder_mead(&f, start_list[i], [0.3, 0.1, 0.15], options.max_iterations))
        .collect();
    finish_motor_fit(&objective, outcomes, points.len())
}

/// Parallel [`fit_motor_params`]: starts run across the rayon pool; the
/// selection rule is unchanged, so the result is identical.
#[cfg(feature = "parallel")]
pub fn par_fit_motor_params(
    points: &[MotorTorqueSample],
    body: &RotorBody,
    known: &FixedFieldParams,
    options: &MotorFitOptions,
) -> Result<(ElectricalParams, FitReport)> {
    use rayon::prelude::*;
    let v_min_abs = validate_motor_inputs(points, known)?;
    let objective = MotorObjective {
        points,
        body,
        known: *known,
        v_min_abs,
    };
    let start_list = starts();
    let order = numeric::seeded_order(start_list.len(), options.seed);
    let f = |x: &[f64; 3]| objective.sse(x);
    let outcomes: Vec<NmOutcome> = order
        .par_iter()
        .map(|&i| nelder_mead(&f, start_list[i], [0.3, 0.1, 0.15], options.max_iterations))
        .collect();
    finish_motor_fit(&objective, outcomes, points.len())
}

/// Ordinary least squares of steady-state speed against drive magnitude:
/// `omega = slope |V| + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub report: FitReport,
}

pub fn linear_fit_speed_voltage(points: &[(f64, f64)]) -> Result<LinearFit> {
    let xs: Vec<f64> = points.iter().map(|(v, _)| v.abs()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, w)| *w).collect();
    let mut distinct = xs.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Fit(format!(
            "speed-voltage fit needs at least two distinct voltages, got {}",
            distinct.len()
        )));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let sst: f64 = ys.iter().map(|y| (y - mean_y) * (y - mean_y)).sum();
    let r_squared = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    let s2 = sse / (points.len().saturating_sub(2).max(1)) as f64;
    let report = FitReport {
        params: vec![
            FittedParam { name: "slope", value: slope, unit: "rad/s/V" },
            FittedParam { name: "intercept", value: intercept, unit: "rad/s" },
        ],
        residual_rms: (sse / n).sqrt(),
        iterations: 1,
        converged: true,
        covariance: Some(vec![
            s2 / sxx,
            -s2 * mean_x / sxx,
            -s2 * mean_x / sxx,
            s2 * (1.0 / n + mean_x * mean_x / sxx),
        ]),
        degenerate: false,
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        report,
    })
}
