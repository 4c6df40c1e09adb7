//! Periodicity and convergence diagnostics of a trajectory.

use super::Trajectory;
use crate::error::Result;
use crate::model::steady_state;

/// Relative amplitude drift tolerated for a sustained oscillation.
pub const SUSTAINED_DRIFT: f64 = 0.02;
/// Number of trailing cycles used for the amplitude trend.
pub const TREND_CYCLES: usize = 5;
/// Final sup-distance to the steady state counted as convergence.
pub const STEADY_TOL: f64 = 1e-4;
/// Half peak-to-trough heights at or below this are treated as noise.
pub const NOISE_FLOOR: f64 = 1e-10;
/// Fewer detected peaks than this makes the period analysis inconclusive.
pub const MIN_PEAKS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeTrend {
    Growing,
    Decaying,
    Sustained,
}

impl AmplitudeTrend {
    pub fn as_str(&self) -> &'static str {
        match self {
            AmplitudeTrend::Growing => "growing",
            AmplitudeTrend::Decaying => "decaying",
            AmplitudeTrend::Sustained => "sustained",
        }
    }
}

/// Which scalar series the peak detector reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    /// Spatial mean of `u`, every step.
    SpatialMean,
    /// `u` at the probe node, every step.
    Probe,
    /// Cosine coefficient of `u` for wave number `n`, at snapshot times.
    Mode(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub value: f64,
    /// Half the rise from the preceding trough.
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodDiagnostics {
    pub converged_to_steady: bool,
    pub final_distance: f64,
    pub amplitude_trend: Option<AmplitudeTrend>,
    /// Least-squares relative change of peak amplitude over the trailing cycles.
    pub amplitude_drift: Option<f64>,
    pub period_estimate: Option<f64>,
    pub spatial_inhomogeneity: f64,
    pub peaks: Vec<Peak>,
    pub inconclusive: bool,
}

/// Parabolic vertex through three equally spaced samples, as (offset in steps, value).
fn vertex(a: f64, b: f64, c: f64) -> (f64, f64) {
    let den = a - 2.0 * b + c;
    if den == 0.0 {
        return (0.0, b);
    }
    let off = 0.5 * (a - c) / den;
    (off, b - 0.25 * (a - c) * off)
}

fn extrema(t: &[f64], y: &[f64], maxima: bool) -> Vec<(f64, f64)> {
    let s = if maxima { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        let (a, b, c) = (s * y[i - 1], s * y[i], s * y[i + 1]);
        if b > a && b >= c {
            let (off, val) = vertex(a, b, c);
            let h = t[i + 1] - t[i];
            out.push((t[i] + off * h, s * val));
        }
    }
    out
}

/// Local maxima with parabolic refinement, each paired with the rise from
/// the latest earlier minimum. Peaks at the noise floor are dropped.
pub fn find_peaks(t: &[f64], y: &[f64]) -> Vec<Peak> {
    let maxima = extrema(t, y, true);
    let minima = extrema(t, y, false);
    let mut peaks = Vec::new();
    let mut j = 0;
    let mut trough: Option<f64> = None;
    for (tp, vp) in maxima {
        while j < minima.len() && minima[j].0 < tp {
            trough = Some(minima[j].1);
            j += 1;
        }
        if let Some(tr) = trough {
            let amplitude = 0.5 * (vp - tr);
            if amplitude > NOISE_FLOOR {
                peaks.push(Peak {
                    t: tp,
                    value: vp,
                    amplitude,
                });
            }
        }
    }
    peaks
}

/// Slope of the least-squares line through the amplitudes, times the
/// span, relative to their mean.
pub fn relative_drift(amplitudes: &[f64]) -> f64 {
    let n = amplitudes.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = amplitudes.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, a) in amplitudes.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (a - ym);
        sxx += dx * dx;
    }
    if sxx == 0.0 || ym == 0.0 {
        return 0.0;
    }
    sxy / sxx * (n - 1.0) / ym
}

pub fn classify_trend(amplitudes: &[f64]) -> Option<(AmplitudeTrend, f64)> {
    if amplitudes.len() < 2 {
        return None;
    }
    let tail = &amplitudes[amplitudes.len().saturating_sub(TREND_CYCLES)..];
    let drift = relative_drift(tail);
    let trend = if drift.abs() <= SUSTAINED_DRIFT {
        AmplitudeTrend::Sustained
    } else if drift > 0.0 {
        AmplitudeTrend::Growing
    } else {
        AmplitudeTrend::Decaying
    };
    Some((trend, drift))
}

/// `(2/(ℓπ)) ∫ u cos(n x/ℓ) dx` by the trapezoid rule (the mean for `n = 0`).
pub fn mode_coefficient(traj: &Trajectory, u: &[f64], n: u32) -> f64 {
    let g = &traj.grid;
    let ell = traj.params.ell;
    let w: Vec<f64> = traj
        .x
        .iter()
        .zip(u)
        .map(|(x, u)| u * (n as f64 * x / ell).cos())
        .collect();
    let scale = if n == 0 { 1.0 } else { 2.0 };
    scale * g.integrate(&w) / g.length
}

/// Diagnoses the last `window` time units, reading peaks from the spatial mean of `u`.
pub fn diagnose(traj: &Trajectory, window: f64) -> Result<PeriodDiagnostics> {
    diagnose_signal(traj, window, Signal::SpatialMean)
}

pub fn diagnose_signal(
    traj: &Trajectory,
    window: f64,
    signal: Signal,
) -> Result<PeriodDiagnostics> {
    let ss = steady_state(&traj.params)?;
    let t_last = *traj.probe_times.last().unwrap_or(&0.0);
    let t0 = t_last - window;

    let modal;
    let (times, series) = match signal {
        Signal::SpatialMean => (&traj.probe_times, &traj.mean_u),
        Signal::Probe => (&traj.probe_times, &traj.probe_u),
        Signal::Mode(n) => {
            modal = traj
                .u
                .iter()
                .map(|u| mode_coefficient(traj, u, n))
                .collect::<Vec<_>>();
            (&traj.times, &modal)
        }
    };
    let start = times.partition_point(|&t| t < t0).saturating_sub(1);
    let peaks = find_peaks(&times[start..], &series[start..]);

    let final_distance = traj
        .final_u()
        .iter()
        .map(|u| (u - ss.u_star).abs())
        .chain(traj.final_v().iter().map(|v| (v - ss.v_star).abs()))
        .fold(0.0, f64::max);
    let converged_to_steady = final_distance < STEADY_TOL;

    let amps: Vec<f64> = peaks.iter().map(|p| p.amplitude).collect();
    let trend = classify_trend(&amps);
    let period_estimate = if peaks.len() >= 2 {
        Some((peaks[peaks.len() - 1].t - peaks[0].t) / (peaks.len() - 1) as f64)
    } else {
        None
    };

    let g = &traj.grid;
    let mut acc = 0.0;
    let mut count = 0usize;
    for (k, &t) in traj.times.iter().enumerate() {
        if t < t0 {
            continue;
        }
        let (u, v) = (&traj.u[k], &traj.v[k]);
        let um = g.integrate(u) / g.length;
        let vm = g.integrate(v) / g.length;
        let dev: Vec<f64> = u
            .iter()
            .zip(v)
            .map(|(a, b)| (a - um).powi(2) + (b - vm).powi(2))
            .collect();
        acc += g.integrate(&dev).sqrt();
        count += 1;
    }
    let spatial_inhomogeneity = if count > 0 { acc / count as f64 } else { 0.0 };

    Ok(PeriodDiagnostics {
        converged_to_steady,
        final_distance,
        amplitude_trend: trend.map(|t| t.0),
        amplitude_drift: trend.map(|t| t.1),
        period_estimate,
        spatial_inhomogeneity,
        inconclusive: peaks.len() < MIN_PEAKS,
        peaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refined_peaks_of_a_sine() {
        let t: Vec<f64> = (0..4000).map(|i| i as f64 * 0.01).collect();
        let y: Vec<f64> = t.iter().map(|t| 0.3 + 0.1 * (2.0 * t).sin()).collect();
        let p = find_peaks(&t, &y);
        assert!(p.len() >= 5);
        let period = (p[p.len() - 1].t - p[0].t) / (p.len() - 1) as f64;
        assert!((period - std::f64::consts::PI).abs() < 1e-6);
        assert!(p.iter().all(|p| (p.amplitude - 0.1).abs() < 1e-5));
    }

    #[test]
    fn trend_from_amplitudes() {
        assert_eq!(
            classify_trend(&[1.0, 1.0, 1.001, 1.0, 0.999]).unwrap().0,
            AmplitudeTrend::Sustained
        );
        assert_eq!(
            classify_trend(&[1.0, 0.9, 0.8, 0.7, 0.6]).unwrap().0,
            AmplitudeTrend::Decaying
        );
        assert_eq!(
            classify_trend(&[0.5, 0.6, 0.7, 0.8, 0.9]).unwrap().0,
            AmplitudeTrend::Growing
        );
        assert!(classify_trend(&[1.0]).is_none());
    }

    #[test]
    fn flat_series_has_no_peaks() {
        let t: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let y = vec![0.25; 100];
        assert!(find_peaks(&t, &y).is_empty());
    }
}
