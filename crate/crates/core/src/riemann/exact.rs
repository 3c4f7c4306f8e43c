//! Exact solution of the planar Riemann problem for an ideal gas.
//!
//! Only used to verify the scheme; the time loop never calls it. The star
//! pressure is the root of
//!
//! ```text
//! f(p) = f_L(p) + f_R(p) + (u_R - u_L)
//! ```
//!
//! where `f_K` is the shock (Rankine-Hugoniot) branch for `p > p_K` and the
//! isentropic rarefaction branch otherwise.

use crate::error::{Error, Result};
use crate::gas::{GasModel, PrimitiveState};

const MAX_ITERATIONS: usize = 100;
const RELATIVE_TOLERANCE: f64 = 1e-12;
const PRESSURE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavePattern {
    pub left: WaveKind,
    pub right: WaveKind,
}

/// Pressure and velocity between the two nonlinear waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarRegion {
    pub p: f64,
    pub u: f64,
    pub iterations: usize,
}

/// Exact solution evaluated on one ray `x / t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannFanSample {
    pub state: PrimitiveState,
    pub wave_pattern: WavePattern,
    pub star: StarRegion,
}

/// One side's contribution to the pressure function and its derivative.
fn side_function(p: f64, side: &PrimitiveState, gas: &GasModel) -> (f64, f64) {
    let g = gas.gamma();
    if p > side.p {
        let a = 2.0 / ((g + 1.0) * side.rho);
        let b = (g - 1.0) / (g + 1.0) * side.p;
        let q = (a / (p + b)).sqrt();
        let f = (p - side.p) * q;
        let df = q * (1.0 - 0.5 * (p - side.p) / (p + b));
        (f, df)
    } else {
        let c = side.sound_speed(gas);
        let ratio = p / side.p;
        let f = 2.0 * c / (g - 1.0) * (ratio.powf((g - 1.0) / (2.0 * g)) - 1.0);
        let df = ratio.powf(-(g + 1.0) / (2.0 * g)) / (side.rho * c);
        (f, df)
    }
}

/// Value of the star-pressure function; zero at the exact star pressure.
pub fn pressure_function(
    p: f64,
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: &GasModel,
) -> f64 {
    side_function(p, left, gas).0 + side_function(p, right, gas).0 + (right.u - left.u)
}

/// Newton iteration for the star region, started from the linearised (PVRS) guess.
pub fn star_region(
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: &GasModel,
) -> Result<StarRegion> {
    let g = gas.gamma();
    let (cl, cr) = (left.sound_speed(gas), right.sound_speed(gas));
    let du = right.u - left.u;
    let critical = 2.0 * (cl + cr) / (g - 1.0);
    if du >= critical {
        return Err(Error::VacuumFormation {
            velocity_jump: du,
            critical,
        });
    }

    let pvrs = 0.5 * (left.p + right.p) - 0.125 * du * (left.rho + right.rho) * (cl + cr);
    let mut p = pvrs.max(PRESSURE_FLOOR);
    for iteration in 1..=MAX_ITERATIONS {
        let (fl, dfl) = side_function(p, left, gas);
        let (fr, dfr) = side_function(p, right, gas);
        let mut step = (fl + fr + du) / (dfl + dfr);
        while p - step <= 0.0 {
            step *= 0.5;
        }
        let next = p - step;
        let change = 2.0 * (next - p).abs() / (next + p);
        p = next;
        if change < RELATIVE_TOLERANCE {
            let u = 0.5 * (left.u + right.u)
                + 0.5 * (side_function(p, right, gas).0 - side_function(p, left, gas).0);
            return Ok(StarRegion {
                p,
                u,
                iterations: iteration,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Samples the self-similar solution of the Riemann problem on the ray `xi = x / t`.
pub fn exact_riemann_solve(
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: &GasModel,
    xi: f64,
) -> Result<RiemannFanSample> {
    let star = star_region(left, right, gas)?;
    let wave_pattern = WavePattern {
        left: if star.p > left.p {
            WaveKind::Shock
        } else {
            WaveKind::Rarefaction
        },
        right: if star.p > right.p {
            WaveKind::Shock
        } else {
            WaveKind::Rarefaction
        },
    };
    let state = if xi <= star.u {
        sample_side(left, &star, gas, xi, -1.0)
    } else {
        // mirror the right side onto a left-facing problem
        sample_side(&right.mirrored(), &mirrored_star(&star), gas, -xi, -1.0).mirrored()
    };
    Ok(RiemannFanSample {
        state,
        wave_pattern,
        star,
    })
}

fn mirrored_star(star: &StarRegion) -> StarRegion {
    StarRegion {
        u: -star.u,
        ..*star
    }
}

/// Solution left of the contact for a left state facing a wave moving in direction `dir = -1`.
fn sample_side(
    side: &PrimitiveState,
    star: &StarRegion,
    gas: &GasModel,
    xi: f64,
    dir: f64,
) -> PrimitiveState {
    let g = gas.gamma();
    let c = side.sound_speed(gas);
    let pr = star.p / side.p;
    if star.p > side.p {
        let shock_speed =
            side.u + dir * c * ((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g)).sqrt();
        if xi <= shock_speed {
            *side
        } else {
            let gr = (g - 1.0) / (g + 1.0);
            let rho = side.rho * (pr + gr) / (gr * pr + 1.0);
            PrimitiveState::new(rho, star.u, star.p)
        }
    } else {
        let head = side.u + dir * c;
        let c_star = c * pr.powf((g - 1.0) / (2.0 * g));
        let tail = star.u + dir * c_star;
        if xi <= head {
            *side
        } else if xi >= tail {
            PrimitiveState::new(side.rho * pr.powf(1.0 / g), star.u, star.p)
        } else {
            let fan_c = 2.0 / (g + 1.0) * (c - dir * (g - 1.0) / 2.0 * (side.u - xi));
            let u = 2.0 / (g + 1.0) * (-dir * c + (g - 1.0) / 2.0 * side.u + xi);
            let rho = side.rho * (fan_c / c).powf(2.0 / (g - 1.0));
            let p = side.p * (fan_c / c).powf(2.0 * g / (g - 1.0));
            PrimitiveState::new(rho, u, p)
        }
    }
}
