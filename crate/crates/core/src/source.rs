//! Geometric source term of the symmetric Euler equations and its RK2 integrator.
//!
//! With cross-section `A = r^alpha`, moving the area factor out of the
//! divergence leaves the planar system plus
//!
//! ```text
//! dU/dt = -(alpha / r) (rho u, rho u^2, u (rho E + p))
//! ```
//!
//! which the splitting advances cell by cell at a fixed radius.

use crate::error::{Error, Result};
use crate::gas::{ConservedState, GasModel, Geometry};

/// Source rate in conserved-variable layout.
pub type SourceTerm = ConservedState;

/// `-(alpha / r) (rho u, rho u^2, u (rho E + p))`.
pub fn geometric_source(
    cons: &ConservedState,
    r: f64,
    geometry: Geometry,
    gas: &GasModel,
) -> Result<SourceTerm> {
    let alpha = geometry.alpha();
    if alpha == 0 {
        return Ok(SourceTerm::ZERO);
    }
    if !(r > 0.0) {
        return Err(Error::SingularRadius { r });
    }
    let prim = cons.to_primitive(gas)?;
    let k = -(f64::from(alpha)) / r;
    Ok(SourceTerm::new(
        k * cons.momentum,
        k * cons.momentum * prim.u,
        k * prim.u * (cons.energy + prim.p),
    ))
}

/// One Heun (explicit trapezoidal) step of the source ODE.
pub fn rk2_source_step(
    cons: &ConservedState,
    r: f64,
    geometry: Geometry,
    gas: &GasModel,
    dt: f64,
) -> Result<ConservedState> {
    if geometry.alpha() == 0 {
        return Ok(*cons);
    }
    let k1 = geometric_source(cons, r, geometry, gas)?;
    let stage = *cons + dt * k1;
    let k2 = geometric_source(&stage, r, geometry, gas)?;
    let next = *cons + (0.5 * dt) * (k1 + k2);
    next.to_primitive(gas)?;
    Ok(next)
}
