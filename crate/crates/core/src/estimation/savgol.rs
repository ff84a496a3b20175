//! Local least-squares polynomial differentiation (Savitzky-Golay style).
//!
//! A degree-`d` polynomial is fitted over a sliding window of samples; its
//! first and second derivatives at the window center give speed and angular
//! acceleration. Exact for polynomials up to the fit degree.

use super::{KinematicsTrace, SpeedTrace};
use crate::error::{Error, Result};
use crate::numeric;

/// Derivative weights for a centered window in sample units.
fn derivative_weights(window: usize, degree: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let half = (window / 2) as f64;
    let cols = degree + 1;
    // Normal matrix of the Vandermonde basis on integer abscissa.
    let mut normal = vec![vec![0.0; cols]; cols];
    for j in 0..window {
        let x = j as f64 - half;
        let mut powers = vec![1.0; cols];
        for k in 1..cols {
            powers[k] = powers[k - 1] * x;
        }
        for r in 0..cols {
            for c in 0..cols {
                normal[r][c] += powers[r] * powers[c];
            }
        }
    }
    let inv = numeric::invert(&normal)?;
    let mut w1 = vec![0.0; window];
    let mut w2 = vec![0.0; window];
    for j in 0..window {
        let x = j as f64 - half;
        let mut powers = vec![1.0; cols];
        for k in 1..cols {
            powers[k] = powers[k - 1] * x;
        }
        for k in 0..cols {
            w1[j] += inv[1][k] * powers[k];
            w2[j] += inv[2][k] * powers[k];
        }
    }
    Some((w1, w2))
}

/// Smoothed first and second derivatives of the angle trace at every
/// interior sample; half a window is trimmed from each end.
pub fn differentiate(trace: &SpeedTrace, window: usize, poly_degree: usize) -> Result<KinematicsTrace> {
    if window % 2 == 0 {
        return Err(Error::Domain(format!("window must be odd, got {window}")));
    }
    if poly_degree < 2 {
        return Err(Error::Domain(format!(
            "polynomial degree must be at least 2 for acceleration, got {poly_degree}"
        )));
    }
    if poly_degree > 8 {
        return Err(Error::Domain(format!(
            "polynomial degree {poly_degree} is too high for a stable local fit"
        )));
    }
    if window < poly_degree + 2 {
        return Err(Error::Domain(format!(
            "window {window} too short for degree {poly_degree}; need at least degree + 2"
        )));
    }
    if trace.len() < window {
        return Err(Error::Domain(format!(
            "trace has {} samples, shorter than the {window}-sample window",
            trace.len()
        )));
    }
    let dt = trace.uniform_dt()?;
    let (w1, w2) = derivative_weights(window, poly_degree)
        .ok_or_else(|| Error::Domain("degenerate smoothing window".into()))?;

    let half = window / 2;
    let n_out = trace.len() - 2 * half;
    let angles = trace.angles();
    let mut omega = Vec::with_capacity(n_out);
    let mut alpha_dot = Vec::with_capacity(n_out);
    for i in 0..n_out {
        let seg = &angles[i..i + window];
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (j, theta) in seg.iter().enumerate() {
            d1 += w1[j] * theta;
            d2 += w2[j] * theta;
        }
        omega.push(d1 / dt);
        alpha_dot.push(2.0 * d2 / (dt * dt));
    }
    Ok(KinematicsTrace {
        times: trace.times()[half..trace.len() - half].to_vec(),
        omega,
        alpha_dot,
        window,
        poly_degree,
    })
}
