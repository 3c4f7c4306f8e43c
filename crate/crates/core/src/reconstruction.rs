//! Piecewise-linear (MUSCL) reconstruction of primitive variables with TVD limiting.

use std::fmt;
use std::str::FromStr;

use crate::gas::PrimitiveState;

/// Slope limiter applied to the ratio of consecutive jumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LimiterKind {
    #[default]
    Superbee,
    Minmod,
    /// Zero slope: first-order Godunov reconstruction.
    None,
}

impl LimiterKind {
    pub const ALL: [LimiterKind; 3] = [
        LimiterKind::Superbee,
        LimiterKind::Minmod,
        LimiterKind::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimiterKind::Superbee => "superbee",
            LimiterKind::Minmod => "minmod",
            LimiterKind::None => "none",
        }
    }

    /// Limiter value `phi(r)`.
    #[inline]
    pub fn phi(self, r: f64) -> f64 {
        match self {
            LimiterKind::Superbee => limiter_superbee(r),
            LimiterKind::Minmod => limiter_minmod(r),
            LimiterKind::None => 0.0,
        }
    }
}

impl fmt::Display for LimiterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimiterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "superbee" => Ok(LimiterKind::Superbee),
            "minmod" => Ok(LimiterKind::Minmod),
            "none" => Ok(LimiterKind::None),
            other => {
                let hint = LimiterKind::ALL.iter().map(|k| k.name()).find(|name| {
                    name.starts_with(other)
                        || other.starts_with(name)
                        || edit_distance(name, other) <= 2
                });
                Err(match hint {
                    Some(name) => format!("unknown limiter '{other}' (did you mean '{name}'?)"),
                    None => {
                        format!("unknown limiter '{other}' (expected superbee, minmod or none)")
                    }
                })
            }
        }
    }
}

pub(crate) fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut row = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != *cb);
            row[j + 1] = sub.min(prev[j + 1] + 1).min(row[j] + 1);
        }
        prev = row;
    }
    prev[b.len()]
}

/// Roe's superbee limiter, `max(0, min(2r, 1), min(r, 2))`.
#[inline]
pub fn limiter_superbee(r: f64) -> f64 {
    0.0f64.max((2.0 * r).min(1.0)).max(r.min(2.0))
}

/// `max(0, min(r, 1))`.
#[inline]
pub fn limiter_minmod(r: f64) -> f64 {
    0.0f64.max(r.min(1.0))
}

/// Reconstructed values at the inner (`minus`) and outer (`plus`) faces of a cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePair {
    pub minus: PrimitiveState,
    pub plus: PrimitiveState,
}

impl FacePair {
    pub fn flat(state: PrimitiveState) -> Self {
        Self {
            minus: state,
            plus: state,
        }
    }
}

/// Jumps below this fraction of the cell value count as flat.
const FLAT_JUMP: f64 = 1e-12;

/// Limited slope `phi(r) * forward` for one scalar component.
#[inline]
fn limited_slope(prev: f64, cur: f64, next: f64, limiter: LimiterKind) -> f64 {
    let forward = next - cur;
    if forward.abs() < FLAT_JUMP * cur.abs().max(1.0) {
        return 0.0;
    }
    let backward = cur - prev;
    limiter.phi(backward / forward) * forward
}

/// Face values of the middle cell of a three-cell stencil.
///
/// Falls back to the cell average on both faces when the limited
/// reconstruction would produce non-positive density or pressure.
pub fn muscl_reconstruct(stencil: [&PrimitiveState; 3], limiter: LimiterKind) -> FacePair {
    let [prev, cur, next] = stencil;
    if limiter == LimiterKind::None {
        return FacePair::flat(*cur);
    }
    let d_rho = limited_slope(prev.rho, cur.rho, next.rho, limiter);
    let d_u = limited_slope(prev.u, cur.u, next.u, limiter);
    let d_p = limited_slope(prev.p, cur.p, next.p, limiter);
    let minus = PrimitiveState::new(cur.rho - 0.5 * d_rho, cur.u - 0.5 * d_u, cur.p - 0.5 * d_p);
    let plus = PrimitiveState::new(cur.rho + 0.5 * d_rho, cur.u + 0.5 * d_u, cur.p + 0.5 * d_p);
    if minus.rho > 0.0 && minus.p > 0.0 && plus.rho > 0.0 && plus.p > 0.0 {
        FacePair { minus, plus }
    } else {
        FacePair::flat(*cur)
    }
}
