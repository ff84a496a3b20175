//! Rotor-angle trace type and its CSV schema.
//!
//! The schema is fixed: optional `#` comment lines carrying `voltage_kV=` and
//! `fps=` metadata, then a header that is either `t_s,theta_rad` (explicit
//! timestamps, radians) or `frame,theta_deg` (frame indices, degrees,
//! timestamps synthesized from the frame rate). Decimal points, no thousands
//! separators, LF or CRLF.

use crate::dynamics::VoltageSchedule;
use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

const TAU: f64 = 2.0 * PI;

/// Speed threshold below which a spin-down segment ends (rad/s).
pub const DEFAULT_SPIN_DOWN_FLOOR: f64 = 5.0;

/// Source metadata carried alongside a trace.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceMeta {
    /// Drive voltage during the powered portion (V).
    pub voltage_volts: Option<f64>,
    /// Camera frame rate (Hz).
    pub frame_rate_hz: Option<f64>,
}

/// Unit of the angle column; `t_s,theta_rad` files default to radians and
/// `frame,theta_deg` files to degrees unless overridden.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleUnit {
    Radians,
    Degrees,
}

/// Time-stamped unwrapped rotor angle, optionally with a precomputed speed
/// column (simulator output carries one).
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedTrace {
    times: Vec<f64>,
    angles: Vec<f64>,
    omega: Option<Vec<f64>>,
    pub meta: TraceMeta,
}

impl SpeedTrace {
    /// Build a trace from already-unwrapped samples. Times must increase
    /// strictly and consecutive angles must differ by less than half a turn.
    pub fn new(times: Vec<f64>, angles: Vec<f64>, meta: TraceMeta) -> Result<Self> {
        if times.len() != angles.len() {
            return Err(Error::Domain(format!(
                "time and angle columns differ in length: {} vs {}",
                times.len(),
                angles.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::Domain("trace has no samples".into()));
        }
        for i in 1..times.len() {
            if !(times[i] > times[i - 1]) {
                return Err(Error::Domain(format!(
                    "timestamps must increase strictly (sample {i})"
                )));
            }
            if (angles[i] - angles[i - 1]).abs() >= PI {
                return Err(Error::Domain(format!(
                    "angle step at sample {i} is {} rad; traces must be unwrapped",
                    angles[i] - angles[i - 1]
                )));
            }
        }
        Ok(SpeedTrace {
            times,
            angles,
            omega: None,
            meta,
        })
    }

    pub fn with_omega(mut self, omega: Vec<f64>) -> Result<Self> {
        if omega.len() != self.times.len() {
            return Err(Error::Domain(format!(
                "omega column length {} does not match {} samples",
                omega.len(),
                self.times.len()
            )));
        }
        self.omega = Some(omega);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn omega(&self) -> Option<&[f64]> {
        self.omega.as_deref()
    }

    /// Sub-trace with `t0 <= t < t1`.
    pub fn window(&self, t0: f64, t1: f64) -> Option<SpeedTrace> {
        let start = self.times.partition_point(|t| *t < t0);
        let end = self.times.partition_point(|t| *t < t1);
        if start >= end {
            return None;
        }
        Some(self.slice(start, end))
    }

    fn slice(&self, start: usize, end: usize) -> SpeedTrace {
        SpeedTrace {
            times: self.times[start..end].to_vec(),
            angles: self.angles[start..end].to_vec(),
            omega: self.omega.as_ref().map(|o| o[start..end].to_vec()),
            meta: self.meta,
        }
    }

    /// Sample spacing, which must be uniform to 1e-9 s.
    pub fn uniform_dt(&self) -> Result<f64> {
        if self.times.len() < 2 {
            return Err(Error::Domain("trace too short for a sample spacing".into()));
        }
        let dt = (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64;
        for i in 1..self.times.len() {
            if ((self.times[i] - self.times[i - 1]) - dt).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "non-uniform sample spacing near sample {i}: expected {dt} s"
                )));
            }
        }
        Ok(dt)
    }

    /// Speed estimate per sample: the precomputed column when present,
    /// otherwise central differences.
    pub(crate) fn omega_estimate(&self) -> Vec<f64> {
        if let Some(om) = &self.omega {
            return om.clone();
        }
        let n = self.times.len();
        if n == 1 {
            return vec![0.0];
        }
        (0..n)
            .map(|i| {
                let (a, b) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                (self.angles[b] - self.angles[a]) / (self.times[b] - self.times[a])
            })
            .collect()
    }
}

fn parse_meta_line(line: &str, meta: &mut TraceMeta) {
    let body = line.trim_start_matches('#').trim();
    if let Some((key, value)) = body.split_once('=') {
        match key.trim() {
            "voltage_kV" => {
                if let Ok(v) = value.trim().parse::<f64>() {
                    meta.voltage_volts = Some(v * 1e3);
                }
            }
            "fps" => {
                if let Ok(v) = value.trim().parse::<f64>() {
                    meta.frame_rate_hz = Some(v);
                }
            }
            _ => {}
        }
    }
}

/// Read a trace CSV. `angle_unit` overrides the unit implied by the header;
/// `frame_rate` overrides (or supplies) the rate used to synthesize
/// timestamps for `frame,theta_deg` files.
pub fn ingest_trace(
    path: &Path,
    angle_unit: Option<AngleUnit>,
    frame_rate: Option<f64>,
) -> Result<SpeedTrace> {
    let text = std::fs::read_to_string(path)?;
    let mut meta = TraceMeta::default();
    let mut header: Option<&str> = None;
    let mut raw: Vec<(f64, f64)> = Vec::new();

    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            parse_meta_line(line, &mut meta);
            continue;
        }
        if header.is_none() {
            if line != "t_s,theta_rad" && line != "frame,theta_deg" {
                return Err(Error::Format(format!(
                    "line {}: expected header `t_s,theta_rad` or `frame,theta_deg`, got `{line}`",
                    line_no + 1
                )));
            }
            header = Some(line);
            continue;
        }
        let mut fields = line.split(',');
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Format(format!(
                    "line {}: expected two comma-separated fields",
                    line_no + 1
                )))
            }
        };
        let a: f64 = a.trim().parse().map_err(|_| {
            Error::Format(format!("line {}: cannot parse `{a}` as a number", line_no + 1))
        })?;
        let b: f64 = b.trim().parse().map_err(|_| {
            Error::Format(format!("line {}: cannot parse `{b}` as a number", line_no + 1))
        })?;
        raw.push((a, b));
    }

    let header = header.ok_or_else(|| Error::Format("file has no header line".into()))?;
    if raw.is_empty() {
        return Err(Error::Format("file has no data rows".into()));
    }

    let frame_based = header == "frame,theta_deg";
    let rate = frame_rate.or(meta.frame_rate_hz);
    let times: Vec<f64> = if frame_based {
        let rate = rate.ok_or_else(|| {
            Error::Format("frame-indexed file needs a frame rate (`# fps=` or an argument)".into())
        })?;
        if !(rate > 0.0) {
            return Err(Error::Format(format!("frame rate must be positive, got {rate}")));
        }
        meta.frame_rate_hz = Some(rate);
        raw.iter().map(|(f, _)| f / rate).collect()
    } else {
        if let Some(r) = rate {
            meta.frame_rate_hz = Some(r);
        }
        raw.iter().map(|(t, _)| *t).collect()
    };

    for i in 1..times.len() {
        if !(times[i] > times[i - 1]) {
            return Err(Error::Format(format!(
                "non-monotonic time at data row {i}: {} after {}",
                times[i],
                times[i - 1]
            )));
        }
    }

    let unit = angle_unit.unwrap_or(if frame_based {
        AngleUnit::Degrees
    } else {
        AngleUnit::Radians
    });
    let to_rad = match unit {
        AngleUnit::Radians => 1.0,
        AngleUnit::Degrees => PI / 180.0,
    };

    // Unwrap: each step may be explained by at most one whole revolution.
    let mut angles = Vec::with_capacity(raw.len());
    angles.push(raw[0].1 * to_rad);
    for i in 1..raw.len() {
        let step = (raw[i].1 - raw[i - 1].1) * to_rad;
        let revs = (step / TAU).round();
        if revs.abs() > 1.0 {
            return Err(Error::DataQuality(format!(
                "data row {i}: angle jump of {step} rad spans more than one revolution"
            )));
        }
        let adjusted = step - revs * TAU;
        if adjusted.abs() >= PI - 1e-12 {
            return Err(Error::DataQuality(format!(
                "data row {i}: half-revolution angle jump of {adjusted} rad is ambiguous"
            )));
        }
        angles.push(angles[i - 1] + adjusted);
    }

    SpeedTrace::new(times, angles, meta)
}

/// Write a trace in the `t_s,theta_rad` schema with metadata comments.
pub fn write_trace_csv<W: Write>(trace: &SpeedTrace, mut out: W) -> std::io::Result<()> {
    if let Some(v) = trace.meta.voltage_volts {
        writeln!(out, "# voltage_kV={}", v / 1e3)?;
    }
    if let Some(r) = trace.meta.frame_rate_hz {
        writeln!(out, "# fps={r}")?;
    }
    writeln!(out, "t_s,theta_rad")?;
    for (t, theta) in trace.times.iter().zip(&trace.angles) {
        writeln!(out, "{t},{theta}")?;
    }
    Ok(())
}

/// Cut the unpowered portions out of a trace: for every zero-voltage span of
/// the schedule, the maximal runs of samples whose speed stays above
/// `omega_floor`. Each run becomes its own sub-trace.
pub fn segment_spin_down(
    trace: &SpeedTrace,
    schedule: &VoltageSchedule,
    omega_floor: f64,
) -> Vec<SpeedTrace> {
    let omega = trace.omega_estimate();
    let mut segments = Vec::new();
    for (t_start, t_end) in schedule.off_spans() {
        let lo = trace.times.partition_point(|t| *t < t_start);
        let hi = match t_end {
            Some(te) => trace.times.partition_point(|t| *t < te),
            None => trace.len(),
        };
        let mut run_start = None;
        for i in lo..=hi {
            let above = i < hi && omega[i].abs() > omega_floor;
            match (above, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(s)) => {
                    if i - s >= 2 {
                        segments.push(trace.slice(s, i));
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    segments
}
