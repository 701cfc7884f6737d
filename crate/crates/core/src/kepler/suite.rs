use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use super::{
    deformed_runge_lenz, eval, poisson_fn, FiniteDifference, KeplerParams, Observable, OracleError,
    PhasePoint, RadialCoefficient,
};
use crate::exact::rational::to_f64;
use crate::loop_alg::LoopSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub fd: FiniteDifference,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 0,
            tol: 1e-5,
            fd: FiniteDifference::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub samples: usize,
    pub max_rel_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityFailure {
    pub name: String,
    pub point: PhasePoint,
    pub residual: f64,
}

/// Conservation of both candidate radial coefficients of `M` under `H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialCoefficientCheck {
    pub m_alpha_max_rel_residual: f64,
    pub m_beta_max_rel_residual: f64,
    pub resolved: Option<RadialCoefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub params: KeplerParams,
    pub config: SuiteConfig,
    pub identities: Vec<IdentityResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial_coefficient: Option<RadialCoefficientCheck>,
    pub first_failure: Option<IdentityFailure>,
    pub all_pass: bool,
}

impl OracleReport {
    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|r| r.name == name)
    }

    fn into_result(self) -> Result<Self, OracleError> {
        match &self.first_failure {
            Some(f) => Err(OracleError::IdentityFailed {
                name: f.name.clone(),
                point: f.point,
                residual: f.residual,
            }),
            None => Ok(self),
        }
    }
}

type Fun<'a> = Box<dyn Fn(&PhasePoint) -> f64 + 'a>;

enum Kind<'a> {
    /// `{f, g} = rhs`, residual scaled by `max(1, |lhs|, |rhs|)`
    Equals(Fun<'a>),
    /// `{f, g} = 0`, residual scaled by `max(1, |f|, |g|)`
    Conserved,
}

struct Check<'a> {
    name: String,
    f: Fun<'a>,
    g: Fun<'a>,
    kind: Kind<'a>,
}

impl<'a> Check<'a> {
    fn residual(&self, x: &PhasePoint, fd: &FiniteDifference) -> Result<f64, OracleError> {
        let lhs = poisson_fn(&self.f, &self.g, x, fd)?;
        Ok(match &self.kind {
            Kind::Equals(rhs) => {
                let rhs = rhs(x);
                (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
            }
            Kind::Conserved => lhs.abs() / 1f64.max((self.f)(x).abs()).max((self.g)(x).abs()),
        })
    }
}

fn obs<'a>(o: Observable, p: &'a KeplerParams) -> Fun<'a> {
    Box::new(move |x| eval(o, p, x))
}

fn equals<'a>(
    p: &'a KeplerParams,
    f: Observable,
    g: Observable,
    rhs_name: &str,
    rhs: impl Fn(&PhasePoint) -> f64 + 'a,
) -> Check<'a> {
    Check {
        name: format!("{{{f},{g}}}={rhs_name}"),
        f: obs(f, p),
        g: obs(g, p),
        kind: Kind::Equals(Box::new(rhs)),
    }
}

fn conserved<'a>(p: &'a KeplerParams, f: Observable, g: Observable) -> Check<'a> {
    Check {
        name: format!("{{{f},{g}}}=0"),
        f: obs(f, p),
        g: obs(g, p),
        kind: Kind::Conserved,
    }
}

/// Uniform draws with `r in [0.5, 3]`, `|phi| <= pi - 0.2`, `p_r, p_phi in [-2, 2]`,
/// rejecting `|p_phi| < 0.1`.
pub fn sample_points(n: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let r = rng.gen_range(0.5..=3.0);
        let phi = rng.gen_range(-PI + 0.2..=PI - 0.2);
        let pr = rng.gen_range(-2.0..=2.0);
        let pphi: f64 = rng.gen_range(-2.0..=2.0);
        if pphi.abs() < 0.1 {
            continue;
        }
        out.push(PhasePoint { r, phi, pr, pphi });
    }
    out
}

fn run_checks(
    checks: &[Check<'_>],
    points: &[PhasePoint],
    cfg: &SuiteConfig,
) -> Result<(Vec<IdentityResult>, Option<IdentityFailure>), OracleError> {
    let mut results = Vec::with_capacity(checks.len());
    let mut first: Option<IdentityFailure> = None;
    for c in checks {
        let mut worst = 0.0f64;
        for x in points {
            let res = c.residual(x, &cfg.fd)?;
            if (res.is_nan() || res > cfg.tol) && first.is_none() {
                first = Some(IdentityFailure {
                    name: c.name.clone(),
                    point: *x,
                    residual: res,
                });
            }
            worst = if res.is_nan() {
                f64::NAN
            } else {
                worst.max(res)
            };
        }
        results.push(IdentityResult {
            name: c.name.clone(),
            samples: points.len(),
            max_rel_residual: worst,
            pass: worst <= cfg.tol,
        });
    }
    Ok((results, first))
}

fn identity_checks(p: &KeplerParams) -> Vec<Check<'_>> {
    use Observable::*;
    let v = move |o: Observable| move |x: &PhasePoint| eval(o, p, x);
    let h = move |x: &PhasePoint| eval(SmallH, p, x);
    let h0 = move |x: &PhasePoint| -2.0 * p.m * eval(H0, p, x);
    let beta_term = p.m * p.m * p.beta * p.beta / 2.0;
    let mut checks = vec![
        equals(p, L, A1, "A2", v(A2)),
        equals(p, A2, L, "A1", v(A1)),
        equals(p, A1, A2, "h0*L", move |x| h0(x) * x.pphi),
        equals(p, M1, M2, "S", v(S)),
        equals(p, S, M1, "h*M2", move |x| h(x) * eval(M2, p, x)),
        equals(p, M2, S, "h*M1-m^2*beta^2/2", move |x| {
            h(x) * eval(M1, p, x) - beta_term
        }),
        equals(p, M2, S, "N1", v(N1)),
        equals(p, N1, M2, "h*S", move |x| h(x) * eval(S, p, x)),
        equals(p, S, N1, "h^2*M2", move |x| h(x).powi(2) * eval(M2, p, x)),
        equals(p, N1, N2, "h^2*S", move |x| h(x).powi(2) * eval(S, p, x)),
        equals(p, N2, S, "h*N1", move |x| h(x) * eval(N1, p, x)),
        equals(p, S, N1, "h*N2", move |x| h(x) * eval(N2, p, x)),
    ];
    for x in [M1, M2, S, N1, N2] {
        checks.push(conserved(p, H, x));
    }
    if p.beta == 0.0 {
        checks.push(conserved(p, H, L));
    }
    for x in [L, A1, A2] {
        checks.push(conserved(p, H0, x));
    }
    checks
}

fn radial_checks(p: &KeplerParams) -> Vec<Check<'_>> {
    [RadialCoefficient::MAlpha, RadialCoefficient::MBeta]
        .into_iter()
        .flat_map(|c| {
            [0usize, 1].map(move |k| Check {
                name: format!("{c:?}.{k}"),
                f: obs(Observable::H, p),
                g: Box::new(move |x: &PhasePoint| {
                    let m = deformed_runge_lenz(p, x, c);
                    if k == 0 {
                        m.0
                    } else {
                        m.1
                    }
                }),
                kind: Kind::Conserved,
            })
        })
        .collect()
}

/// Evaluates every identity and conservation law; failures are reported, not raised.
pub fn run_identity_suite(
    p: &KeplerParams,
    cfg: &SuiteConfig,
) -> Result<OracleReport, OracleError> {
    if cfg.samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let points = sample_points(cfg.samples, cfg.seed);
    let (identities, first_failure) = run_checks(&identity_checks(p), &points, cfg)?;
    let (radial, _) = run_checks(&radial_checks(p), &points, cfg)?;
    let worst = |a: &IdentityResult, b: &IdentityResult| a.max_rel_residual.max(b.max_rel_residual);
    let m_alpha = worst(&radial[0], &radial[1]);
    let m_beta = worst(&radial[2], &radial[3]);
    let resolved = if m_alpha <= cfg.tol {
        Some(RadialCoefficient::MAlpha)
    } else if m_beta <= cfg.tol {
        Some(RadialCoefficient::MBeta)
    } else {
        None
    };
    Ok(OracleReport {
        params: *p,
        config: *cfg,
        all_pass: first_failure.is_none(),
        identities,
        radial_coefficient: Some(RadialCoefficientCheck {
            m_alpha_max_rel_residual: m_alpha,
            m_beta_max_rel_residual: m_beta,
            resolved,
        }),
        first_failure,
    })
}

/// Like [`run_identity_suite`] but fails on the first identity that misses `tol`.
pub fn identity_suite(p: &KeplerParams, cfg: &SuiteConfig) -> Result<OracleReport, OracleError> {
    run_identity_suite(p, cfg)?.into_result()
}

/// Checks every bracket of `spec` with generator `i` realized by `binding[i]`
/// and the loop parameter by `h = -2mH`.
pub fn run_cross_check(
    spec: &LoopSpec,
    binding: &[Observable],
    p: &KeplerParams,
    cfg: &SuiteConfig,
) -> Result<OracleReport, OracleError> {
    if binding.len() != spec.len() {
        return Err(OracleError::BindingLength {
            expected: spec.len(),
            found: binding.len(),
        });
    }
    if cfg.samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let mut checks = Vec::new();
    for i in 0..spec.len() {
        for j in i + 1..spec.len() {
            let terms: Vec<(f64, i32, Observable)> = spec
                .base_bracket(i, j)
                .iter()
                .map(|t| (to_f64(&t.coeff), t.hpow as i32, binding[t.k]))
                .collect();
            let rhs_name = if terms.is_empty() {
                "0".to_string()
            } else {
                spec.base_bracket(i, j)
                    .iter()
                    .map(|t| {
                        let h = match t.hpow {
                            0 => String::new(),
                            1 => "h*".into(),
                            n => format!("h^{n}*"),
                        };
                        format!(
                            "({})*{h}{}",
                            crate::exact::rational::format(&t.coeff),
                            spec.name(t.k)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("+")
            };
            checks.push(Check {
                name: format!("{{{},{}}}={rhs_name}", spec.name(i), spec.name(j)),
                f: obs(binding[i], p),
                g: obs(binding[j], p),
                kind: Kind::Equals(Box::new(move |x| {
                    let h = eval(Observable::SmallH, p, x);
                    terms
                        .iter()
                        .map(|(c, n, o)| c * h.powi(*n) * eval(*o, p, x))
                        .sum()
                })),
            });
        }
    }
    let points = sample_points(cfg.samples, cfg.seed);
    let (identities, first_failure) = run_checks(&checks, &points, cfg)?;
    Ok(OracleReport {
        params: *p,
        config: *cfg,
        all_pass: first_failure.is_none(),
        identities,
        radial_coefficient: None,
        first_failure,
    })
}

pub fn cross_check_loop_spec(
    spec: &LoopSpec,
    binding: &[Observable],
    p: &KeplerParams,
    cfg: &SuiteConfig,
) -> Result<OracleReport, OracleError> {
    run_cross_check(spec, binding, p, cfg)?.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::kepler::Stencil;
    use proptest::prelude::*;

    fn quick(samples: usize) -> SuiteConfig {
        SuiteConfig {
            samples,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suite_passes_at_default_params() {
        let rep = identity_suite(&KeplerParams::default(), &quick(200)).unwrap();
        assert!(rep.all_pass);
        assert_eq!(rep.identities.len(), 12 + 5 + 3);
        let radial = rep.radial_coefficient.unwrap();
        assert_eq!(radial.resolved, Some(RadialCoefficient::MAlpha));
        assert!(radial.m_beta_max_rel_residual > 1e-2);
    }

    #[test]
    fn angular_momentum_conserved_only_without_perturbation() {
        let p0 = KeplerParams::new(1.0, 1.0, 0.0).unwrap();
        let rep = identity_suite(&p0, &quick(100)).unwrap();
        assert!(rep.get("{H,L}=0").unwrap().pass);
        let mut p = p0;
        p.beta = 0.5;
        let rep = run_identity_suite(&p, &quick(100)).unwrap();
        assert!(rep.get("{H,L}=0").is_none());
        let cfg = quick(50);
        let points = sample_points(cfg.samples, cfg.seed);
        let (res, fail) = run_checks(
            &[conserved(&p, Observable::H, Observable::L)],
            &points,
            &cfg,
        )
        .unwrap();
        assert!(!res[0].pass);
        assert!(fail.is_some());
    }

    #[test]
    fn failures_are_reported_with_point() {
        let p = KeplerParams::default();
        let cfg = quick(20);
        let points = sample_points(cfg.samples, cfg.seed);
        let wrong = equals(&p, Observable::M1, Observable::M2, "L", move |x| x.pphi);
        let (res, fail) = run_checks(&[wrong], &points, &cfg).unwrap();
        assert!(!res[0].pass);
        let fail = fail.unwrap();
        assert_eq!(fail.name, "{M1,M2}=L");
        assert!(points.contains(&fail.point));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = KeplerParams::default();
        let a = run_identity_suite(&p, &quick(50)).unwrap();
        let b = run_identity_suite(&p, &quick(50)).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_ne!(sample_points(5, 1), sample_points(5, 2));
    }

    #[test]
    fn samples_respect_domain() {
        for x in sample_points(2000, 7) {
            assert!((0.5..=3.0).contains(&x.r));
            assert!(x.phi.abs() <= PI - 0.2);
            assert!(x.pr.abs() <= 2.0 && x.pphi.abs() <= 2.0 && x.pphi.abs() >= 0.1);
        }
    }

    #[test]
    fn zero_samples_rejected() {
        assert_eq!(
            run_identity_suite(&KeplerParams::default(), &quick(0)),
            Err(OracleError::NoSamples)
        );
    }

    #[test]
    fn bundled_specs_are_realized() {
        use Observable::*;
        let p = KeplerParams::default();
        let cfg = quick(200);
        cross_check_loop_spec(&bundled::l1(), &[M2, S, N1], &p, &cfg).unwrap();
        cross_check_loop_spec(&bundled::l2(), &[N1, N2, S], &p, &cfg).unwrap();
        let p0 = KeplerParams::new(1.0, 1.0, 0.0).unwrap();
        cross_check_loop_spec(&bundled::h2(), &[A1, A2, L], &p0, &cfg).unwrap();
        // h2 is not realized by the deformed vector once beta != 0.
        assert!(matches!(
            cross_check_loop_spec(&bundled::h2(), &[M1, M2, S], &p, &cfg),
            Err(OracleError::IdentityFailed { .. })
        ));
        assert!(matches!(
            run_cross_check(&bundled::h2(), &[M1], &p, &cfg),
            Err(OracleError::BindingLength {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn continuity_in_beta() {
        // The deformed brackets approach the undeformed ones as beta -> 0.
        let cfg = quick(30);
        let points = sample_points(cfg.samples, cfg.seed);
        let mut prev = f64::INFINITY;
        for k in 1..=4 {
            let p = KeplerParams::new(1.0, 1.0, 10f64.powi(-k)).unwrap();
            let mut gap = 0.0f64;
            for x in &points {
                let m = poisson_fn(obs(Observable::M1, &p), obs(Observable::M2, &p), x, &cfg.fd)
                    .unwrap();
                let a = poisson_fn(obs(Observable::A1, &p), obs(Observable::A2, &p), x, &cfg.fd)
                    .unwrap();
                gap = gap.max((m - a).abs());
            }
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn numerical_jacobi(i in 0usize..11, j in 0usize..11, k in 0usize..11, seed in 0u64..1000) {
            let p = KeplerParams::default();
            let fd = FiniteDifference { delta: 1e-3, stencil: Stencil::Central4 };
            let x = sample_points(1, seed)[0];
            let [a, b, c] = [i, j, k].map(|n| Observable::ALL[n]);
            let inner = |f: Observable, g: Observable| {
                move |y: &PhasePoint| poisson_fn(obs(f, &p), obs(g, &p), y, &fd).unwrap()
            };
            let outer = |f: Observable, g: Observable, h: Observable| {
                poisson_fn(obs(f, &p), inner(g, h), &x, &fd).unwrap()
            };
            let terms = [outer(a, b, c), outer(b, c, a), outer(c, a, b)];
            let scale = terms.iter().fold(1f64, |m, t| m.max(t.abs()));
            let tol = 10.0 * SuiteConfig::default().tol;
            prop_assert!((terms.iter().sum::<f64>()).abs() / scale < tol, "{terms:?}");
        }
    }
}
