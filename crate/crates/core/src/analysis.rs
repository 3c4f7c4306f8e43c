//! Post-processing of computed profiles: shock tracking, power-law fits and
//! error norms.

use crate::gas::{GasModel, PrimitiveState, RadialGrid};

/// Relative pressure rise that marks the foot of the converging shock.
pub const SHOCK_FOOT_THRESHOLD: f64 = 0.01;

/// Cells behind the foot searched for the post-shock peak.
pub const POST_SHOCK_WINDOW: usize = 6;

/// Position and strength of an inward-moving shock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockFront {
    /// Radius where pressure crosses halfway between ambient and peak.
    pub radius: f64,
    /// Largest pressure just behind the front.
    pub peak_pressure: f64,
    /// Largest Mach number of the flow just behind the front.
    pub peak_mach: f64,
}

/// Locates a shock converging into quiescent gas at pressure `ambient_p`.
///
/// Scans outward from the axis for the first cell whose pressure exceeds
/// the ambient value; returns `None` once the axis cell itself is disturbed
/// (the shock has arrived) or if no disturbance exists.
pub fn converging_shock_front(
    prims: &[PrimitiveState],
    grid: &RadialGrid,
    gas: &GasModel,
    ambient_p: f64,
) -> Option<ShockFront> {
    let threshold = ambient_p * (1.0 + SHOCK_FOOT_THRESHOLD);
    let foot = prims.iter().position(|w| w.p > threshold)?;
    if foot == 0 {
        return None;
    }
    let window = &prims[foot..(foot + POST_SHOCK_WINDOW).min(prims.len())];
    let peak_pressure = window.iter().map(|w| w.p).fold(f64::MIN, f64::max);
    let peak_mach = window.iter().map(|w| w.mach(gas)).fold(0.0, f64::max);

    let half = 0.5 * (ambient_p + peak_pressure);
    let mut radius = grid.center(foot);
    for j in (foot - 1)..(foot - 1 + window.len()) {
        let (p0, p1) = (prims[j].p, prims[j + 1].p);
        if p0 < half && p1 >= half {
            radius = grid.center(j) + (half - p0) / (p1 - p0) * grid.dr();
            break;
        }
    }
    Some(ShockFront {
        radius,
        peak_pressure,
        peak_mach,
    })
}

/// Ordinary least squares `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        residual,
    })
}

/// Fit of `R = A (t_c - t)^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub t_c: f64,
    pub residual: f64,
}

/// Fits `R = A (t_c - t)^n` with the focusing time `t_c` given.
pub fn power_law_fit(samples: &[(f64, f64)], t_c: f64) -> Option<PowerLawFit> {
    if samples.iter().any(|&(t, r)| t >= t_c || r <= 0.0) {
        return None;
    }
    let x: Vec<f64> = samples.iter().map(|&(t, _)| (t_c - t).ln()).collect();
    let y: Vec<f64> = samples.iter().map(|&(_, r)| r.ln()).collect();
    let fit = linear_fit(&x, &y)?;
    Some(PowerLawFit {
        exponent: fit.slope,
        prefactor: fit.intercept.exp(),
        t_c,
        residual: fit.residual,
    })
}

/// Fits `R = A (t_c - t)^n` with `t_c` chosen to minimise the log-space
/// residual over `(t_last, t_last + horizon]`.
pub fn power_law_fit_free_tc(samples: &[(f64, f64)], horizon: f64) -> Option<PowerLawFit> {
    let t_last = samples.iter().map(|s| s.0).fold(f64::MIN, f64::max);
    let residual = |t_c: f64| power_law_fit(samples, t_c).map_or(f64::INFINITY, |f| f.residual);

    // coarse scan, then golden-section refinement around the best bracket
    let steps = 400;
    let h = horizon / steps as f64;
    let (mut best_k, mut best) = (1, f64::INFINITY);
    for k in 1..=steps {
        let r = residual(t_last + k as f64 * h);
        if r < best {
            best = r;
            best_k = k;
        }
    }
    let (mut a, mut b) = (
        t_last + (best_k as f64 - 1.0).max(1e-6) * h,
        t_last + (best_k + 1) as f64 * h,
    );
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - inv_phi * (b - a);
        let d = a + inv_phi * (b - a);
        if residual(c) < residual(d) {
            b = d;
        } else {
            a = c;
        }
    }
    power_law_fit(samples, 0.5 * (a + b))
}

/// Cell-averaged L1 distance `sum |a_i - b_i| / n`.
pub fn l1_mean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

/// Observed convergence orders `log2(e_k / e_{k+1})` for successive halvings.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let fit = linear_fit(&x, &y).unwrap();
        assert_relative_eq!(fit.slope, -0.5, max_relative = 1e-14);
        assert_relative_eq!(fit.intercept, 2.0, max_relative = 1e-14);
        assert!(fit.residual < 1e-28);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn power_law_with_unknown_focus_time() {
        let samples: Vec<(f64, f64)> = (0..50)
            .map(|k| {
                let t = 0.3 + 0.004 * k as f64;
                (t, 1.7 * (0.55 - t).powf(0.834))
            })
            .collect();
        let fit = power_law_fit_free_tc(&samples, 0.2).unwrap();
        assert_relative_eq!(fit.t_c, 0.55, max_relative = 1e-6);
        assert_relative_eq!(fit.exponent, 0.834, max_relative = 1e-5);
        let fixed = power_law_fit(&samples, 0.55).unwrap();
        assert_relative_eq!(fixed.prefactor, 1.7, max_relative = 1e-12);
        assert!(power_law_fit(&samples, 0.4).is_none());
    }

    #[test]
    fn shock_front_between_cells() {
        let gas = GasModel::air();
        let grid = RadialGrid::new(0.0, 0.1, 10).unwrap();
        let amb = 1.0 / 1.4;
        let mut prims = vec![PrimitiveState::new(1.0, 0.0, amb); 10];
        for (i, w) in prims.iter_mut().enumerate().skip(4) {
            *w = PrimitiveState::new(2.0, -0.5, if i == 4 { 2.0 * amb } else { 3.0 * amb });
        }
        let front = converging_shock_front(&prims, &grid, &gas, amb).unwrap();
        assert_relative_eq!(front.peak_pressure, 3.0 * amb);
        // halfway value 2 amb is reached exactly at cell 4's centre
        assert_relative_eq!(front.radius, grid.center(4), max_relative = 1e-12);
        assert!(front.peak_mach > 0.0);

        prims[0].p = 5.0;
        assert!(converging_shock_front(&prims, &grid, &gas, amb).is_none());
        let quiet = vec![PrimitiveState::new(1.0, 0.0, amb); 10];
        assert!(converging_shock_front(&quiet, &grid, &gas, amb).is_none());
    }

    #[test]
    fn orders_from_halving() {
        let orders = observed_orders(&[4e-3, 1e-3, 2.5e-4]);
        assert_relative_eq!(orders[0], 2.0);
        assert_relative_eq!(orders[1], 2.0);
    }
}
