//! Interface fluxes from Riemann problems.
//!
//! [`roe_flux`] is the production flux used by the time loop. The exact
//! solver in [`exact`] is a verification oracle only.

pub mod exact;
mod roe;

pub use exact::{
    exact_riemann_solve, star_region, RiemannFanSample, StarRegion, WaveKind, WavePattern,
};
pub use roe::{roe_average, roe_flux, RoeAverages, ENTROPY_FIX_FRACTION};
