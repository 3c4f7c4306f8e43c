//! Ideal-gas model, state vectors and the Euler flux.
//!
//! All quantities are dimensionless: density is scaled by the undisturbed
//! density, velocity by the undisturbed sound speed and pressure by
//! `rho0 * c0^2 = gamma * p0`. Under this scaling the undisturbed gas has
//! `rho = 1`, `p = 1/gamma`, `c = 1` and `T = 1`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Calorically perfect gas with a constant ratio of specific heats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 1.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidParameter(format!(
                "gamma must be finite and > 1, got {gamma}"
            )))
        }
    }

    /// Diatomic gas, gamma = 1.4.
    pub const fn air() -> Self {
        Self { gamma: 1.4 }
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for GasModel {
    fn default() -> Self {
        Self::air()
    }
}

/// Density, velocity and pressure at a point or cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimitiveState {
    /// Builds a state without validation.
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    /// Builds a state, rejecting vacuum or non-finite values.
    pub fn try_new(rho: f64, u: f64, p: f64) -> Result<Self> {
        let state = Self { rho, u, p };
        if state.is_physical() {
            Ok(state)
        } else {
            Err(Error::InvalidParameter(format!(
                "primitive state requires rho > 0, p > 0 and finite u, got ({rho}, {u}, {p})"
            )))
        }
    }

    pub fn is_physical(&self) -> bool {
        self.rho > 0.0
            && self.p > 0.0
            && self.rho.is_finite()
            && self.p.is_finite()
            && self.u.is_finite()
    }

    /// Same state moving in the opposite direction.
    pub fn mirrored(&self) -> Self {
        Self {
            u: -self.u,
            ..*self
        }
    }

    /// Specific total energy `E = p / (rho (gamma - 1)) + u^2 / 2`.
    pub fn total_energy(&self, gas: &GasModel) -> f64 {
        self.p / (self.rho * (gas.gamma - 1.0)) + 0.5 * self.u * self.u
    }

    /// Specific total enthalpy `H = E + p / rho`.
    pub fn total_enthalpy(&self, gas: &GasModel) -> f64 {
        self.total_energy(gas) + self.p / self.rho
    }

    pub fn sound_speed(&self, gas: &GasModel) -> f64 {
        (gas.gamma * self.p / self.rho).sqrt()
    }

    /// Dimensionless temperature `gamma p / rho`, equal to 1 in the undisturbed gas.
    pub fn temperature(&self, gas: &GasModel) -> f64 {
        gas.gamma * self.p / self.rho
    }

    pub fn mach(&self, gas: &GasModel) -> f64 {
        self.u.abs() / self.sound_speed(gas)
    }

    pub fn to_conserved(&self, gas: &GasModel) -> ConservedState {
        ConservedState {
            mass: self.rho,
            momentum: self.rho * self.u,
            energy: self.rho * self.total_energy(gas),
        }
    }

    /// Euler flux `(rho u, rho u^2 + p, u (rho E + p))`.
    pub fn flux(&self, gas: &GasModel) -> ConservedState {
        let energy = self.rho * self.total_energy(gas);
        ConservedState {
            mass: self.rho * self.u,
            momentum: self.rho * self.u * self.u + self.p,
            energy: self.u * (energy + self.p),
        }
    }
}

/// Vector of conserved quantities `(rho, rho u, rho E)`.
///
/// The same three-component layout carries interface fluxes and source
/// rates; the positivity invariants only apply when the vector is read back
/// as a state through [`ConservedState::to_primitive`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

/// Interface flux vector in conserved-variable layout.
pub type Flux = ConservedState;

impl ConservedState {
    pub const ZERO: Self = Self {
        mass: 0.0,
        momentum: 0.0,
        energy: 0.0,
    };

    pub const fn new(mass: f64, momentum: f64, energy: f64) -> Self {
        Self {
            mass,
            momentum,
            energy,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.mass, self.momentum, self.energy]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Recovers `(rho, u, p)`, failing if density or pressure is not positive.
    pub fn to_primitive(&self, gas: &GasModel) -> Result<PrimitiveState> {
        let rho = self.mass;
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(self.non_physical());
        }
        let u = self.momentum / rho;
        let p = (gas.gamma - 1.0) * (self.energy - 0.5 * self.momentum * u);
        if !(p > 0.0) || !p.is_finite() || !u.is_finite() {
            return Err(self.non_physical());
        }
        Ok(PrimitiveState { rho, u, p })
    }

    pub fn flux(&self, gas: &GasModel) -> Result<Flux> {
        Ok(self.to_primitive(gas)?.flux(gas))
    }

    fn non_physical(&self) -> Error {
        Error::NonPhysicalState {
            mass: self.mass,
            momentum: self.momentum,
            energy: self.energy,
        }
    }
}

impl Add for ConservedState {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.mass + rhs.mass,
            self.momentum + rhs.momentum,
            self.energy + rhs.energy,
        )
    }
}

impl AddAssign for ConservedState {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for ConservedState {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.mass - rhs.mass,
            self.momentum - rhs.momentum,
            self.energy - rhs.energy,
        )
    }
}

impl Mul<ConservedState> for f64 {
    type Output = ConservedState;
    fn mul(self, rhs: ConservedState) -> ConservedState {
        ConservedState::new(self * rhs.mass, self * rhs.momentum, self * rhs.energy)
    }
}

impl Neg for ConservedState {
    type Output = Self;
    fn neg(self) -> Self {
        -1.0 * self
    }
}

/// Symmetry of the flow: the cross-section grows as `r^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    Planar,
    Cylindrical,
    Spherical,
}

impl Geometry {
    pub fn from_alpha(alpha: u8) -> Result<Self> {
        match alpha {
            0 => Ok(Geometry::Planar),
            1 => Ok(Geometry::Cylindrical),
            2 => Ok(Geometry::Spherical),
            other => Err(Error::InvalidParameter(format!(
                "symmetry exponent must be 0, 1 or 2, got {other}"
            ))),
        }
    }

    #[inline]
    pub fn alpha(self) -> u8 {
        match self {
            Geometry::Planar => 0,
            Geometry::Cylindrical => 1,
            Geometry::Spherical => 2,
        }
    }

    /// Cross-section weight `r^alpha`.
    #[inline]
    pub fn area(self, r: f64) -> f64 {
        r.powi(self.alpha() as i32)
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Planar => "planar",
            Geometry::Cylindrical => "cylindrical",
            Geometry::Spherical => "spherical",
        }
    }
}

impl std::str::FromStr for Geometry {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "planar" | "0" => Ok(Geometry::Planar),
            "cylindrical" | "1" => Ok(Geometry::Cylindrical),
            "spherical" | "2" => Ok(Geometry::Spherical),
            other => Err(format!(
                "unknown geometry '{other}' (expected planar, cylindrical or spherical)"
            )),
        }
    }
}

/// Uniform cell-centred mesh; cell `i` is centred at `r_min + (i + 1/2) dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    dr: f64,
    n_cells: usize,
}

impl RadialGrid {
    pub const MIN_CELLS: usize = 4;

    pub fn new(r_min: f64, dr: f64, n_cells: usize) -> Result<Self> {
        if !(dr > 0.0) || !dr.is_finite() {
            return Err(Error::InvalidParameter(format!("dr must be > 0, got {dr}")));
        }
        if n_cells < Self::MIN_CELLS {
            return Err(Error::InvalidParameter(format!(
                "need at least {} cells, got {n_cells}",
                Self::MIN_CELLS
            )));
        }
        if !r_min.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r_min must be finite, got {r_min}"
            )));
        }
        Ok(Self { r_min, dr, n_cells })
    }

    /// `n_cells` cells spanning `[r_min, r_max]`.
    pub fn spanning(r_min: f64, r_max: f64, n_cells: usize) -> Result<Self> {
        if !(r_max > r_min) {
            return Err(Error::InvalidParameter(format!(
                "r_max ({r_max}) must exceed r_min ({r_min})"
            )));
        }
        Self::new(r_min, (r_max - r_min) / n_cells as f64, n_cells)
    }

    /// Checks that every cell centre is off the axis when the geometry needs it.
    pub fn check_geometry(&self, geometry: Geometry) -> Result<()> {
        if geometry.alpha() > 0 && self.center(0) <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{} geometry requires all cell centres at r > 0 (first centre {})",
                geometry.name(),
                self.center(0)
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn dr(&self) -> f64 {
        self.dr
    }

    #[inline]
    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_min + self.dr * self.n_cells as f64
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.r_min + (i as f64 + 0.5) * self.dr
    }

    /// Position of face `i` (face 0 is `r_min`, face `n_cells` is `r_max`).
    #[inline]
    pub fn face(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.dr
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(move |i| self.center(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const AIR: GasModel = GasModel::air();

    #[test]
    fn gamma_must_exceed_one() {
        assert!(GasModel::new(1.0).is_err());
        assert!(GasModel::new(0.5).is_err());
        assert!(GasModel::new(f64::NAN).is_err());
        assert_eq!(GasModel::new(5.0 / 3.0).unwrap().gamma(), 5.0 / 3.0);
    }

    #[test]
    fn total_energy_examples() {
        assert_relative_eq!(PrimitiveState::new(1.0, 0.0, 1.0).total_energy(&AIR), 2.5);
        assert_relative_eq!(PrimitiveState::new(2.0, 3.0, 4.0).total_energy(&AIR), 9.5);
        let e = PrimitiveState::new(1.0, 0.0, 1e-300).total_energy(&AIR);
        assert!(e > 0.0 && e < 1e-299);
    }

    #[test]
    fn conversion_examples() {
        let u = PrimitiveState::new(1.0, 0.0, 1.0).to_conserved(&AIR);
        assert_eq!(u.mass, 1.0);
        assert_eq!(u.momentum, 0.0);
        assert_relative_eq!(u.energy, 2.5);

        let u = PrimitiveState::new(2.0, 3.0, 4.0).to_conserved(&AIR);
        assert_relative_eq!(u.mass, 2.0);
        assert_relative_eq!(u.momentum, 6.0);
        assert_relative_eq!(u.energy, 19.0);

        let w = ConservedState::new(1.0, 0.0, 2.5)
            .to_primitive(&AIR)
            .unwrap();
        assert_relative_eq!(w.p, 1.0, max_relative = 1e-15);
        let w = ConservedState::new(2.0, 6.0, 19.0)
            .to_primitive(&AIR)
            .unwrap();
        assert_relative_eq!(w.rho, 2.0);
        assert_relative_eq!(w.u, 3.0);
        assert_relative_eq!(w.p, 4.0, max_relative = 1e-15);
    }

    #[test]
    fn negative_energy_is_non_physical() {
        let err = ConservedState::new(1.0, 0.0, -1.0)
            .to_primitive(&AIR)
            .unwrap_err();
        assert!(matches!(err, Error::NonPhysicalState { .. }));
        let err = ConservedState::new(0.0, 0.0, 1.0)
            .to_primitive(&AIR)
            .unwrap_err();
        assert!(err.is_non_physical());
        // kinetic energy exceeds total energy
        assert!(ConservedState::new(1.0, 3.0, 4.0)
            .to_primitive(&AIR)
            .is_err());
    }

    #[test]
    fn sound_speed_examples() {
        let g = AIR.gamma();
        assert_relative_eq!(
            PrimitiveState::new(1.0, 0.0, 1.0 / g).sound_speed(&AIR),
            1.0
        );
        assert_relative_eq!(PrimitiveState::new(1.0, 0.0, 1.4).sound_speed(&AIR), 1.4);
        assert_relative_eq!(
            PrimitiveState::new(4.0, 0.0, 4.0 / g).sound_speed(&AIR),
            1.0
        );
    }

    #[test]
    fn temperature_examples() {
        let g = AIR.gamma();
        assert_relative_eq!(
            PrimitiveState::new(1.0, 0.0, 1.0 / g).temperature(&AIR),
            1.0
        );
        assert_relative_eq!(
            PrimitiveState::new(4.0, 0.0, 4.0 / g).temperature(&AIR),
            1.0
        );
        assert_relative_eq!(
            PrimitiveState::new(1.0, 0.0, 2.0 / g).temperature(&AIR),
            2.0
        );
    }

    #[test]
    fn flux_examples() {
        let f = PrimitiveState::new(1.0, 0.0, 1.0).flux(&AIR);
        assert_eq!(f, ConservedState::new(0.0, 1.0, 0.0));
        let f = PrimitiveState::new(1.0, 2.0, 1.0).flux(&AIR);
        assert_relative_eq!(f.mass, 2.0);
        assert_relative_eq!(f.momentum, 5.0);
        assert_relative_eq!(f.energy, 11.0);
        let cons = PrimitiveState::new(1.0, 2.0, 1.0).to_conserved(&AIR);
        assert_eq!(cons.flux(&AIR).unwrap(), f);
    }

    #[test]
    fn geometry_alpha_round_trip() {
        for alpha in 0..3 {
            assert_eq!(Geometry::from_alpha(alpha).unwrap().alpha(), alpha);
        }
        assert!(Geometry::from_alpha(3).is_err());
        assert_eq!(
            "cylindrical".parse::<Geometry>().unwrap(),
            Geometry::Cylindrical
        );
        assert!("cylinder".parse::<Geometry>().is_err());
    }

    #[test]
    fn grid_layout() {
        let grid = RadialGrid::spanning(0.0, 2.0, 400).unwrap();
        assert_relative_eq!(grid.dr(), 0.005);
        assert_relative_eq!(grid.center(0), 0.0025);
        assert_relative_eq!(grid.center(199), 0.9975);
        assert_relative_eq!(grid.face(200), 1.0);
        assert_relative_eq!(grid.r_max(), 2.0);
        assert!(grid.check_geometry(Geometry::Cylindrical).is_ok());
        assert!(RadialGrid::new(0.0, 0.1, 3).is_err());
        assert!(RadialGrid::new(0.0, 0.0, 10).is_err());
        let behind_axis = RadialGrid::new(-1.0, 0.1, 10).unwrap();
        assert!(behind_axis.check_geometry(Geometry::Spherical).is_err());
        assert!(behind_axis.check_geometry(Geometry::Planar).is_ok());
    }

    fn valid_state() -> impl Strategy<Value = PrimitiveState> {
        (1e-3f64..1e3, -50.0f64..50.0, 1e-3f64..1e3)
            .prop_map(|(rho, u, p)| PrimitiveState::new(rho, u, p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn prim_cons_round_trip(s in valid_state()) {
            let back = s.to_conserved(&AIR).to_primitive(&AIR).unwrap();
            prop_assert!((back.rho - s.rho).abs() <= 1e-14 * s.rho);
            prop_assert!((back.u - s.u).abs() <= 1e-14 * s.u.abs().max(f64::MIN_POSITIVE));
            // pressure is recovered as a difference E - u^2/2; cancellation scales with Mach^2
            let scale = 1.0 + s.rho * s.u * s.u / s.p;
            prop_assert!((back.p - s.p).abs() <= 1e-14 * s.p * scale,
                "p {} vs {}", back.p, s.p);
        }

        #[test]
        fn flux_at_rest_has_no_mass_or_energy(rho in 1e-3f64..1e3, p in 1e-3f64..1e3) {
            let f = PrimitiveState::new(rho, 0.0, p).flux(&AIR);
            prop_assert_eq!(f.mass, 0.0);
            prop_assert_eq!(f.energy, 0.0);
            prop_assert_eq!(f.momentum, p);
        }

        #[test]
        fn flux_mirror_parity(s in valid_state()) {
            let f = s.flux(&AIR);
            let g = s.mirrored().flux(&AIR);
            prop_assert_eq!(g.mass, -f.mass);
            prop_assert_eq!(g.momentum, f.momentum);
            prop_assert_eq!(g.energy, -f.energy);
        }

        #[test]
        fn sound_speed_and_temperature_are_homogeneous(s in valid_state(), k in 1e-3f64..1e3) {
            let scaled = PrimitiveState::new(k * s.rho, s.u, k * s.p);
            let (c0, c1) = (s.sound_speed(&AIR), scaled.sound_speed(&AIR));
            let (t0, t1) = (s.temperature(&AIR), scaled.temperature(&AIR));
            prop_assert!((c0 - c1).abs() <= 1e-14 * c0);
            prop_assert!((t0 - t1).abs() <= 1e-14 * t0);
        }
    }
}
