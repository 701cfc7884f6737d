use serde::Serialize;

use super::{eval, KeplerParams, Observable, OracleError, PhasePoint};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    /// `(f(x+h) - f(x-h)) / 2h`
    Central2,
    /// `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`
    Central4,
}

impl Stencil {
    fn reach(self) -> f64 {
        match self {
            Stencil::Central2 => 1.0,
            Stencil::Central4 => 2.0,
        }
    }
}

/// Step along coordinate `c` is `delta * max(1, |c|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteDifference {
    pub delta: f64,
    pub stencil: Stencil,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            stencil: Stencil::Central2,
        }
    }
}

impl FiniteDifference {
    fn steps(&self, x: &PhasePoint) -> [f64; 4] {
        x.coords().map(|c| self.delta * c.abs().max(1.0))
    }

    fn check_domain(&self, x: &PhasePoint) -> Result<[f64; 4], OracleError> {
        let steps = self.steps(x);
        let reach = self.stencil.reach();
        if x.r - reach * steps[0] <= 0.0 || x.phi.abs() + reach * steps[1] >= PI {
            return Err(OracleError::BoundaryTooClose(*x));
        }
        Ok(steps)
    }
}

/// Partial derivatives in the order `(r, phi, p_r, p_phi)`.
pub fn gradient<F>(f: F, x: &PhasePoint, fd: &FiniteDifference) -> Result<[f64; 4], OracleError>
where
    F: Fn(&PhasePoint) -> f64,
{
    let steps = fd.check_domain(x)?;
    let base = x.coords();
    let at = |i: usize, k: f64| {
        let mut c = base;
        c[i] += k * steps[i];
        f(&PhasePoint::from_coords(c))
    };
    let mut out = [0.0; 4];
    for (i, d) in out.iter_mut().enumerate() {
        let h = steps[i];
        *d = match fd.stencil {
            Stencil::Central2 => (at(i, 1.0) - at(i, -1.0)) / (2.0 * h),
            Stencil::Central4 => {
                (-at(i, 2.0) + 8.0 * at(i, 1.0) - 8.0 * at(i, -1.0) + at(i, -2.0)) / (12.0 * h)
            }
        };
    }
    Ok(out)
}

/// `{f, g} = sum_q (df/dq dg/dp - df/dp dg/dq)`, so `{r, p_r} = 1`.
pub fn poisson_fn<F, G>(
    f: F,
    g: G,
    x: &PhasePoint,
    fd: &FiniteDifference,
) -> Result<f64, OracleError>
where
    F: Fn(&PhasePoint) -> f64,
    G: Fn(&PhasePoint) -> f64,
{
    let df = gradient(f, x, fd)?;
    let dg = gradient(g, x, fd)?;
    Ok(df[0] * dg[2] - df[2] * dg[0] + df[1] * dg[3] - df[3] * dg[1])
}

pub fn poisson(
    f: Observable,
    g: Observable,
    p: &KeplerParams,
    x: &PhasePoint,
) -> Result<f64, OracleError> {
    poisson_fn(
        |y| eval(f, p, y),
        |y| eval(g, p, y),
        x,
        &FiniteDifference::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(r: f64, phi: f64, pr: f64, pphi: f64) -> PhasePoint {
        PhasePoint::new(r, phi, pr, pphi).unwrap()
    }

    #[test]
    fn canonical_pairs() {
        let fd = FiniteDifference::default();
        let x = pt(1.3, 0.4, -0.2, 0.8);
        let b = |f: fn(&PhasePoint) -> f64, g: fn(&PhasePoint) -> f64| {
            poisson_fn(f, g, &x, &fd).unwrap()
        };
        assert!((b(|y| y.r, |y| y.pr) - 1.0).abs() < 1e-9);
        assert!((b(|y| y.phi, |y| y.pphi) - 1.0).abs() < 1e-9);
        assert!(b(|y| y.r, |y| y.pphi).abs() < 1e-9);
        assert!(b(|y| y.pr, |y| y.pphi).abs() < 1e-9);
    }

    #[test]
    fn angular_momentum_rotates_runge_lenz() {
        let p = KeplerParams::new(1.0, 1.0, 0.0).unwrap();
        for x in [pt(1.0, 0.3, 0.5, 1.2), pt(2.4, -1.1, -0.7, 0.4)] {
            let lhs = poisson(Observable::L, Observable::A1, &p, &x).unwrap();
            let rhs = eval(Observable::A2, &p, &x);
            assert!(
                (lhs - rhs).abs() < 1e-6 * rhs.abs().max(1.0),
                "{lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn antisymmetric() {
        let p = KeplerParams::default();
        let x = pt(1.6, 0.7, 0.3, -1.4);
        for f in Observable::ALL {
            for g in Observable::ALL {
                let a = poisson(f, g, &p, &x).unwrap();
                let b = poisson(g, f, &p, &x).unwrap();
                assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0), "{f},{g}");
            }
        }
    }

    #[test]
    fn boundary_detection() {
        let p = KeplerParams::default();
        let near_origin = pt(5e-7, 0.0, 0.0, 1.0);
        assert!(matches!(
            poisson(Observable::H, Observable::L, &p, &near_origin),
            Err(OracleError::BoundaryTooClose(_))
        ));
        let near_cut = pt(1.0, PI - 5e-7, 0.0, 1.0);
        assert!(matches!(
            poisson(Observable::H, Observable::L, &p, &near_cut),
            Err(OracleError::BoundaryTooClose(_))
        ));
    }

    #[test]
    fn higher_order_stencil_is_more_accurate() {
        let x = pt(1.2, 0.5, 0.1, 0.9);
        let f = |y: &PhasePoint| y.r.powi(3) * y.phi.sin();
        let exact = 3.0 * 1.2f64.powi(2) * 0.5f64.sin();
        let coarse = |stencil| FiniteDifference {
            delta: 1e-3,
            stencil,
        };
        let e2 = (gradient(f, &x, &coarse(Stencil::Central2)).unwrap()[0] - exact).abs();
        let e4 = (gradient(f, &x, &coarse(Stencil::Central4)).unwrap()[0] - exact).abs();
        assert!(e4 < e2 / 100.0, "{e4} vs {e2}");
    }
}
