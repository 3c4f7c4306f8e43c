//! Roe's approximate Riemann solver for the ideal-gas Euler equations.
//!
//! The interface flux is
//!
//! ```text
//! F = 1/2 (F(U_L) + F(U_R)) - 1/2 sum_k |lambda_k| a_k r_k
//! ```
//!
//! with eigenvalues `u - c`, `u`, `u + c` of the Jacobian linearised at the
//! Roe-averaged state. Wave strengths come from the primitive jumps:
//!
//! ```text
//! a_1 = (dp - rho c du) / (2 c^2)
//! a_2 = drho - dp / c^2
//! a_3 = (dp + rho c du) / (2 c^2)
//! ```
//!
//! and the right eigenvectors are
//! `r_1 = (1, u - c, H - u c)`, `r_2 = (1, u, u^2 / 2)`, `r_3 = (1, u + c, H + u c)`.
//! All hatted quantities are Roe averages.

use crate::error::{Error, Result};
use crate::gas::{ConservedState, Flux, GasModel, PrimitiveState};

/// Width of the Harten entropy-fix band, as a fraction of the Roe sound speed.
pub const ENTROPY_FIX_FRACTION: f64 = 0.1;

/// Roe-averaged state at an interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoeAverages {
    pub rho_hat: f64,
    pub u_hat: f64,
    pub h_hat: f64,
    pub c_hat: f64,
}

/// Square-root-density weighted averages of velocity and total enthalpy.
pub fn roe_average(
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: &GasModel,
) -> Result<RoeAverages> {
    let sl = left.rho.sqrt();
    let sr = right.rho.sqrt();
    let wl = sl / (sl + sr);
    let wr = sr / (sl + sr);
    let u_hat = wl * left.u + wr * right.u;
    let h_hat = wl * left.total_enthalpy(gas) + wr * right.total_enthalpy(gas);
    let c2 = (gas.gamma() - 1.0) * (h_hat - 0.5 * u_hat * u_hat);
    if !(c2 > 0.0) || !c2.is_finite() {
        return Err(Error::NonPhysicalState {
            mass: sl * sr,
            momentum: sl * sr * u_hat,
            energy: sl * sr * h_hat,
        });
    }
    Ok(RoeAverages {
        rho_hat: sl * sr,
        u_hat,
        h_hat,
        c_hat: c2.sqrt(),
    })
}

/// Harten's smoothed `|lambda|` inside `|lambda| < delta`.
#[inline]
fn harten(lambda: f64, delta: f64) -> f64 {
    let a = lambda.abs();
    if a < delta {
        0.5 * (lambda * lambda / delta + delta)
    } else {
        a
    }
}

/// Roe flux across the interface between `left` and `right`.
///
/// The entropy fix is applied to the two acoustic waves only; the contact
/// wave keeps its raw `|u|` so stationary contacts stay exact.
pub fn roe_flux(left: &PrimitiveState, right: &PrimitiveState, gas: &GasModel) -> Result<Flux> {
    let avg = roe_average(left, right, gas)?;
    let RoeAverages {
        rho_hat: rho,
        u_hat: u,
        h_hat: h,
        c_hat: c,
    } = avg;

    let drho = right.rho - left.rho;
    let du = right.u - left.u;
    let dp = right.p - left.p;
    let c2 = c * c;

    let a1 = (dp - rho * c * du) / (2.0 * c2);
    let a2 = drho - dp / c2;
    let a3 = (dp + rho * c * du) / (2.0 * c2);

    let delta = ENTROPY_FIX_FRACTION * c;
    let l1 = harten(u - c, delta);
    let l2 = u.abs();
    let l3 = harten(u + c, delta);

    let r1 = ConservedState::new(1.0, u - c, h - u * c);
    let r2 = ConservedState::new(1.0, u, 0.5 * u * u);
    let r3 = ConservedState::new(1.0, u + c, h + u * c);

    let central = 0.5 * (left.flux(gas) + right.flux(gas));
    let dissipation = (l1 * a1) * r1 + (l2 * a2) * r2 + (l3 * a3) * r3;
    Ok(central - 0.5 * dissipation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const AIR: GasModel = GasModel::air();
    const SOD_L: PrimitiveState = PrimitiveState::new(1.0, 0.0, 1.0);
    const SOD_R: PrimitiveState = PrimitiveState::new(0.125, 0.0, 0.1);

    #[test]
    fn average_of_identical_states_is_the_state() {
        let s = PrimitiveState::new(1.3, -0.7, 2.1);
        let avg = roe_average(&s, &s, &AIR).unwrap();
        assert_relative_eq!(avg.rho_hat, s.rho, max_relative = 1e-15);
        assert_relative_eq!(avg.u_hat, s.u, max_relative = 1e-15);
        assert_relative_eq!(avg.h_hat, s.total_enthalpy(&AIR), max_relative = 1e-15);
        assert_relative_eq!(avg.c_hat, s.sound_speed(&AIR), max_relative = 1e-14);
    }

    #[test]
    fn sqrt_density_weighting() {
        let l = PrimitiveState::new(1.0, 0.0, 1.0);
        let r = PrimitiveState::new(4.0, 3.0, 1.0);
        let avg = roe_average(&l, &r, &AIR).unwrap();
        assert_relative_eq!(avg.rho_hat, 2.0);
        assert_relative_eq!(avg.u_hat, 2.0);
    }

    #[test]
    fn sod_averages_regression() {
        // independent scripted evaluation of the averaging formulas
        let avg = roe_average(&SOD_L, &SOD_R, &AIR).unwrap();
        assert_relative_eq!(avg.rho_hat, 0.3535533905932738, max_relative = 1e-14);
        assert_eq!(avg.u_hat, 0.0);
        assert_relative_eq!(avg.h_hat, 3.3171572875253816, max_relative = 1e-14);
        assert_relative_eq!(avg.c_hat, 1.1518953576649886, max_relative = 1e-14);
    }

    #[test]
    fn sod_flux_regression() {
        // pinned from a conserved-variable (eigen-projection) evaluation in a separate script
        let f = roe_flux(&SOD_L, &SOD_R, &AIR).unwrap();
        assert_relative_eq!(f.mass, 0.39066048578596285, max_relative = 1e-13);
        assert_relative_eq!(f.momentum, 0.55, max_relative = 1e-13);
        assert_relative_eq!(f.energy, 1.2958822773731125, max_relative = 1e-13);
    }

    #[test]
    fn sod_mass_flux_close_to_godunov_flux() {
        let exact = crate::riemann::exact_riemann_solve(&SOD_L, &SOD_R, &AIR, 0.0)
            .unwrap()
            .state
            .flux(&AIR);
        let roe = roe_flux(&SOD_L, &SOD_R, &AIR).unwrap();
        assert!(((roe.mass - exact.mass) / exact.mass).abs() < 0.05);
        // with u_hat = 0 the acoustic dissipation cancels in the momentum
        // component, leaving the central average (p_L + p_R) / 2
        assert_relative_eq!(
            roe.momentum,
            0.5 * (SOD_L.p + SOD_R.p),
            max_relative = 1e-15
        );
    }

    #[test]
    #[ignore = "Roe flux differs from the Godunov flux by 18% (momentum) and 12% (energy) on Sod data"]
    fn sod_flux_within_five_percent_of_godunov_flux() {
        let exact = crate::riemann::exact_riemann_solve(&SOD_L, &SOD_R, &AIR, 0.0)
            .unwrap()
            .state
            .flux(&AIR);
        let roe = roe_flux(&SOD_L, &SOD_R, &AIR).unwrap();
        for (a, b) in roe.to_array().iter().zip(exact.to_array()) {
            assert!(((a - b) / b).abs() < 0.05, "{a} vs {b}");
        }
    }

    #[test]
    fn stationary_contact_has_no_diffusion() {
        let l = PrimitiveState::new(1.0, 0.0, 1.0);
        let r = PrimitiveState::new(0.125, 0.0, 1.0);
        let f = roe_flux(&l, &r, &AIR).unwrap();
        assert_eq!(f, ConservedState::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn reflected_pair_has_zero_mass_flux() {
        let s = PrimitiveState::new(2.0, -0.8, 1.5);
        let f = roe_flux(&s.mirrored(), &s, &AIR).unwrap();
        assert!(f.mass.abs() < 1e-15);
        assert!(f.energy.abs() < 1e-14);
    }

    fn valid_state() -> impl Strategy<Value = PrimitiveState> {
        (1e-2f64..1e2, -10.0f64..10.0, 1e-2f64..1e2)
            .prop_map(|(rho, u, p)| PrimitiveState::new(rho, u, p))
    }

    fn close(a: Flux, b: Flux, tol: f64) -> bool {
        let scale = b.to_array().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        a.to_array()
            .iter()
            .zip(b.to_array())
            .all(|(x, y)| (x - y).abs() <= tol * scale)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn consistency_with_physical_flux(s in valid_state()) {
            let f = roe_flux(&s, &s, &AIR).unwrap();
            prop_assert!(close(f, s.flux(&AIR), 1e-13));
        }

        #[test]
        fn average_velocity_between_inputs(l in valid_state(), r in valid_state()) {
            let avg = roe_average(&l, &r, &AIR).unwrap();
            prop_assert!(avg.rho_hat > 0.0 && avg.c_hat > 0.0);
            let (lo, hi) = (l.u.min(r.u), l.u.max(r.u));
            prop_assert!(avg.u_hat >= lo - 1e-12 && avg.u_hat <= hi + 1e-12);
        }

        #[test]
        fn supersonic_data_is_fully_upwinded(
            l in valid_state(), r in valid_state(), shift in 1.0f64..5.0, right_moving in any::<bool>()
        ) {
            // push both states well past their sound speeds in one direction
            let push = |s: PrimitiveState, c: f64| {
                let u = shift * c * 3.0 + s.u.abs();
                PrimitiveState::new(s.rho, if right_moving { u } else { -u }, s.p)
            };
            let cmax = l.sound_speed(&AIR).max(r.sound_speed(&AIR));
            let (l, r) = (push(l, cmax), push(r, cmax));
            let avg = roe_average(&l, &r, &AIR).unwrap();
            let delta = ENTROPY_FIX_FRACTION * avg.c_hat;
            let all_clear = [l.u - l.sound_speed(&AIR), l.u + l.sound_speed(&AIR),
                             r.u - r.sound_speed(&AIR), r.u + r.sound_speed(&AIR),
                             avg.u_hat - avg.c_hat, avg.u_hat + avg.c_hat]
                .iter()
                .all(|&lam| (right_moving && lam > delta) || (!right_moving && lam < -delta));
            prop_assume!(all_clear);
            let f = roe_flux(&l, &r, &AIR).unwrap();
            let upwind = if right_moving { l.flux(&AIR) } else { r.flux(&AIR) };
            prop_assert!(close(f, upwind, 1e-12), "{:?} vs {:?}", f, upwind);
        }
    }
}
