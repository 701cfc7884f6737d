//! Phase-space realization of the conserved quantities of the perturbed
//! 2-D Kepler Hamiltonian
//!
//! ```text
//! H = (p_r^2 + p_phi^2 / r^2) / (2m) - alpha / r - beta r^(-1/2) cos(phi / 2)
//! ```
//!
//! in canonical polar coordinates, plus a finite-difference Poisson bracket
//! used to certify the bracket identities of the abstract algebras.

mod poisson;
mod suite;

pub use poisson::{gradient, poisson, poisson_fn, FiniteDifference, Stencil};
pub use suite::{
    cross_check_loop_spec, identity_suite, run_cross_check, run_identity_suite, sample_points,
    IdentityFailure, IdentityResult, OracleReport, RadialCoefficientCheck, SuiteConfig,
};

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("invalid phase point: {0}")]
    InvalidPoint(String),
    #[error("finite-difference stencil at {0} reaches outside r > 0, |phi| < pi")]
    BoundaryTooClose(PhasePoint),
    #[error("identity {name} fails at {point}: relative residual {residual:e}")]
    IdentityFailed {
        name: String,
        point: PhasePoint,
        residual: f64,
    },
    #[error("need at least one sample")]
    NoSamples,
    #[error("binding has {found} observables for {expected} generators")]
    BindingLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeplerParams {
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl KeplerParams {
    pub fn new(m: f64, alpha: f64, beta: f64) -> Result<Self, OracleError> {
        if m.is_nan() || m <= 0.0 {
            return Err(OracleError::NonPositiveMass(m));
        }
        Ok(Self { m, alpha, beta })
    }
}

impl Default for KeplerParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            alpha: 1.0,
            beta: 0.5,
        }
    }
}

/// Canonical point `(r, phi, p_r, p_phi)` with `r > 0` and `-pi < phi < pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub r: f64,
    pub phi: f64,
    pub pr: f64,
    pub pphi: f64,
}

impl PhasePoint {
    pub fn new(r: f64, phi: f64, pr: f64, pphi: f64) -> Result<Self, OracleError> {
        let x = Self { r, phi, pr, pphi };
        let phi_ok = phi > -PI && phi < PI;
        if r.is_nan() || r <= 0.0 || !phi_ok || !pr.is_finite() || !pphi.is_finite() {
            return Err(OracleError::InvalidPoint(x.to_string()));
        }
        Ok(x)
    }

    pub(crate) fn coords(&self) -> [f64; 4] {
        [self.r, self.phi, self.pr, self.pphi]
    }

    pub(crate) fn from_coords(c: [f64; 4]) -> Self {
        Self {
            r: c[0],
            phi: c[1],
            pr: c[2],
            pphi: c[3],
        }
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(r={}, phi={}, p_r={}, p_phi={})",
            self.r, self.phi, self.pr, self.pphi
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Observable {
    H0,
    H,
    L,
    A1,
    A2,
    M1,
    M2,
    S,
    N1,
    N2,
    /// `h = -2 m H`
    #[serde(rename = "h")]
    SmallH,
}

impl Observable {
    pub const ALL: [Observable; 11] = [
        Observable::H0,
        Observable::H,
        Observable::L,
        Observable::A1,
        Observable::A2,
        Observable::M1,
        Observable::M2,
        Observable::S,
        Observable::N1,
        Observable::N2,
        Observable::SmallH,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::H0 => "H0",
            Observable::H => "H",
            Observable::L => "L",
            Observable::A1 => "A1",
            Observable::A2 => "A2",
            Observable::M1 => "M1",
            Observable::M2 => "M2",
            Observable::S => "S",
            Observable::N1 => "N1",
            Observable::N2 => "N2",
            Observable::SmallH => "h",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == name)
    }

    pub fn eval(self, p: &KeplerParams, x: &PhasePoint) -> f64 {
        eval(self, p, x)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficient of `r_hat` in the deformed Runge-Lenz vector: `p_phi^2 / r - c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadialCoefficient {
    #[serde(rename = "m*alpha")]
    MAlpha,
    #[serde(rename = "m*beta")]
    MBeta,
}

impl fmt::Display for RadialCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RadialCoefficient::MAlpha => "m*alpha",
            RadialCoefficient::MBeta => "m*beta",
        })
    }
}

pub fn h0(p: &KeplerParams, x: &PhasePoint) -> f64 {
    (x.pr * x.pr + x.pphi * x.pphi / (x.r * x.r)) / (2.0 * p.m) - p.alpha / x.r
}

pub fn hamiltonian(p: &KeplerParams, x: &PhasePoint) -> f64 {
    h0(p, x) - p.beta * (x.phi / 2.0).cos() / x.r.sqrt()
}

/// Components of `M = (p_phi^2/r - c) r_hat - (p_r p_phi + m beta sqrt(r) sin(phi/2)) phi_hat`.
pub fn deformed_runge_lenz(
    p: &KeplerParams,
    x: &PhasePoint,
    radial: RadialCoefficient,
) -> (f64, f64) {
    let c = match radial {
        RadialCoefficient::MAlpha => p.m * p.alpha,
        RadialCoefficient::MBeta => p.m * p.beta,
    };
    let radial_part = x.pphi * x.pphi / x.r - c;
    let angular_part = x.pr * x.pphi + p.m * p.beta * x.r.sqrt() * (x.phi / 2.0).sin();
    let (s, co) = x.phi.sin_cos();
    // r_hat = (cos, sin), phi_hat = (-sin, cos)
    (
        radial_part * co + angular_part * s,
        radial_part * s - angular_part * co,
    )
}

pub fn eval(obs: Observable, p: &KeplerParams, x: &PhasePoint) -> f64 {
    let h = || -2.0 * p.m * hamiltonian(p, x);
    let m = || deformed_runge_lenz(p, x, RadialCoefficient::MAlpha);
    match obs {
        Observable::H0 => h0(p, x),
        Observable::H => hamiltonian(p, x),
        Observable::SmallH => h(),
        Observable::L => x.pphi,
        Observable::A1 | Observable::A2 => {
            let undeformed = KeplerParams { beta: 0.0, ..*p };
            let (a1, a2) = deformed_runge_lenz(&undeformed, x, RadialCoefficient::MAlpha);
            if obs == Observable::A1 {
                a1
            } else {
                a2
            }
        }
        Observable::M1 => m().0,
        Observable::M2 => m().1,
        Observable::S => {
            let half = x.phi / 2.0;
            let sq = x.r.sqrt();
            h() * x.pphi - p.m * p.beta * (x.pr * sq * half.sin() + x.pphi * half.cos() / sq)
        }
        Observable::N1 => h() * m().0 - p.m * p.m * p.beta * p.beta / 2.0,
        Observable::N2 => h() * m().1,
    }
}
