//! Norms and semi-norms: L_p by radial reduction, the spectral
//! fractional-Laplacian norm, the Gagliardo double-integral seminorms,
//! and the boundary-distance weighted norms on convex domains.

mod double;
mod fraclap;

pub use double::{delta_seminorm, slobodetskii_norm};
pub use fraclap::{apply_frac_laplacian, frac_sobolev_norm, frac_sobolev_norm_tol, norm_of_fraclap, FracLaplacian};

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_1d, integrate_halfline_with, sphere_area, Endpoint, QuadResult, SingularityHint,
};
use crate::testfuncs::{Decay, TestFunction};

/// How a norm value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    RadialQuadrature,
    Qmc,
    Spectral,
}

impl std::fmt::Display for NormMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormMethod::RadialQuadrature => write!(f, "radial-quadrature"),
            NormMethod::Qmc => write!(f, "qmc"),
            NormMethod::Spectral => write!(f, "spectral"),
        }
    }
}

/// A computed norm. Infinite norms are a first-class value (`value` is
/// `f64::INFINITY`), not an error.
#[derive(Debug, Clone, Copy)]
pub struct NormResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method: NormMethod,
}

impl NormResult {
    pub fn infinite(method: NormMethod) -> Self {
        NormResult { value: f64::INFINITY, error_estimate: 0.0, method }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// The supported open convex domains with closed-form boundary distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexDomain {
    /// (0, infinity) in dimension 1
    HalfLine,
    /// { x_1 > 0 } in dimension n (2 or 3)
    HalfSpace { n: u32 },
    /// open unit ball in dimension n (1, 2 or 3)
    Ball { n: u32 },
}

impl ConvexDomain {
    pub fn half_line() -> Self {
        ConvexDomain::HalfLine
    }

    pub fn half_space(n: u32) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(ConvexDomain::HalfSpace { n })
    }

    pub fn ball(n: u32) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(ConvexDomain::Ball { n })
    }

    pub fn dim(&self) -> u32 {
        match self {
            ConvexDomain::HalfLine => 1,
            ConvexDomain::HalfSpace { n } | ConvexDomain::Ball { n } => *n,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConvexDomain::HalfLine => "half-line",
            ConvexDomain::HalfSpace { .. } => "half-space",
            ConvexDomain::Ball { .. } => "ball",
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexDomain::HalfLine | ConvexDomain::HalfSpace { .. } => x[0] > 0.0,
            ConvexDomain::Ball { .. } => x.iter().map(|v| v * v).sum::<f64>() < 1.0,
        }
    }

    /// Distance from an interior point to the complement.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match self {
            ConvexDomain::HalfLine | ConvexDomain::HalfSpace { .. } => x[0],
            ConvexDomain::Ball { .. } => 1.0 - x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }
}

/// d_alpha(x) = (distance from x to the complement of the domain)^alpha.
pub fn dist_alpha(x: &[f64], domain: &ConvexDomain, alpha: f64) -> Result<f64> {
    if x.len() != domain.dim() as usize {
        return Err(Error::Domain(format!(
            "point dimension {} does not match domain dimension {}",
            x.len(),
            domain.dim()
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if !domain.contains(x) {
        return Err(Error::Domain(format!("point {x:?} lies outside the {}", domain.kind_name())));
    }
    Ok(domain.boundary_distance(x).powf(alpha))
}

/// L_p norm by radial reduction: (omega_n int_0^inf |u(r)|^p r^{n-1} dr)^{1/p}.
///
/// A power tail with beta p <= n is reported as an infinite norm.
pub fn lp_norm(u: &TestFunction, p: f64) -> Result<NormResult> {
    lp_norm_tol(u, p, crate::numerics::DEFAULT_TOL)
}

pub fn lp_norm_tol(u: &TestFunction, p: f64, tol: f64) -> Result<NormResult> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("exponent p must be >= 1, got {p}")));
    }
    let n = u.dim();
    let nf = n as f64;
    if u.is_zero() {
        return Ok(NormResult { value: 0.0, error_estimate: 0.0, method: NormMethod::RadialQuadrature });
    }
    if let Decay::Power(beta) = u.decay() {
        if beta * p <= nf {
            return Ok(NormResult::infinite(NormMethod::RadialQuadrature));
        }
    }
    let integrand = |r: f64| -> Result<f64> { Ok(u.evaluate(r).abs().powf(p) * r.powf(nf - 1.0)) };
    let integral = match u.decay() {
        Decay::Compact(radius) => integrate_1d(integrand, 0.0, radius, tol, None)?,
        Decay::Power(beta) => {
            let head = integrate_1d(integrand, 0.0, 1.0, tol, None)?;
            // envelope r^{n-1-beta p}: compactified tail power n+1-beta p
            let tail_pow = nf + 1.0 - beta * p;
            let tail = integrate_halfline_with(integrand, 1.0, tol, 1.0, Some(tail_pow))?;
            head.merge(tail)
        }
        _ => {
            let cut = u.effective_radius();
            integrate_1d(integrand, 0.0, cut, tol, None)?
        }
    };
    Ok(norm_from_power_integral(integral.scaled(sphere_area(n)?), p, NormMethod::RadialQuadrature))
}

/// Turn int |.|^p (with its error) into the norm (I)^{1/p} with first-order
/// error propagation.
pub(crate) fn norm_from_power_integral(i: QuadResult, p: f64, method: NormMethod) -> NormResult {
    if i.value <= 0.0 {
        return NormResult { value: 0.0, error_estimate: i.error_estimate.powf(1.0 / p), method };
    }
    let value = i.value.powf(1.0 / p);
    let error = value * i.error_estimate / (p * i.value);
    NormResult { value, error_estimate: error, method }
}

/// Complete norm (|u|_p^p + ||u||_{W_p^s}^p)^{1/p}.
pub fn complete_norm(u: &TestFunction, s: f64, p: f64) -> Result<NormResult> {
    let lp = lp_norm(u, p)?;
    let w = frac_sobolev_norm(u, s, p)?;
    if lp.is_infinite() || w.is_infinite() {
        return Ok(NormResult::infinite(NormMethod::Spectral));
    }
    let value = (lp.value.powf(p) + w.value.powf(p)).powf(1.0 / p);
    // d value / d component = (component/value)^{p-1}
    let error = if value > 0.0 {
        (lp.value / value).powf(p - 1.0) * lp.error_estimate
            + (w.value / value).powf(p - 1.0) * w.error_estimate
    } else {
        lp.error_estimate + w.error_estimate
    };
    Ok(NormResult { value, error_estimate: error, method: NormMethod::Spectral })
}

/// Estimated vanishing order of f at a boundary point: f(d) ~ c d^k as the
/// distance d to the boundary goes to 0. Sampled logarithmically.
fn boundary_vanishing_order(f: impl Fn(f64) -> f64) -> f64 {
    let f1 = f(1e-6).abs();
    let f2 = f(1e-8).abs();
    if f1 < 1e-280 || f2 < 1e-280 {
        return f64::INFINITY; // vanishes identically near the boundary
    }
    ((f1 / f2).ln() / (1e-6_f64 / 1e-8_f64).ln()).max(0.0)
}

/// Weighted norm |f|_{L_p(Omega, mu_alpha)} = (int_Omega |f|^p / d_alpha)^{1/p}.
///
/// Divergence at the boundary (f not vanishing fast enough against the
/// d^{-alpha} weight) is reported as an infinite norm.
pub fn weighted_lp_norm(
    f: &TestFunction,
    p: f64,
    domain: &ConvexDomain,
    alpha: f64,
) -> Result<NormResult> {
    weighted_lp_norm_tol(f, p, domain, alpha, crate::numerics::DEFAULT_TOL)
}

pub fn weighted_lp_norm_tol(
    f: &TestFunction,
    p: f64,
    domain: &ConvexDomain,
    alpha: f64,
    tol: f64,
) -> Result<NormResult> {
    if !(alpha > 1.0 && alpha < p) {
        return Err(Error::Domain(format!("alpha must lie in (1, p) = (1, {p}), got {alpha}")));
    }
    if f.dim() != domain.dim() {
        return Err(Error::Domain(format!(
            "function dimension {} does not match domain dimension {}",
            f.dim(),
            domain.dim()
        )));
    }
    if f.is_zero() {
        return Ok(NormResult { value: 0.0, error_estimate: 0.0, method: NormMethod::RadialQuadrature });
    }
    match domain {
        ConvexDomain::HalfLine => {
            let g = |x: f64| f.value_at(&[x]);
            // boundary admissibility: |f|^p x^{-alpha} ~ x^{p k - alpha}
            let k = boundary_vanishing_order(&g);
            if p * k - alpha <= -1.0 {
                return Ok(NormResult::infinite(NormMethod::RadialQuadrature));
            }
            let integrand = |x: f64| -> Result<f64> { Ok(g(x).abs().powf(p) * x.powf(-alpha)) };
            let hint_pow = (alpha - p * k.min(4.0)).min(0.95);
            let hint = (hint_pow > 0.0)
                .then_some(SingularityHint { endpoint: Endpoint::Lower, power: hint_pow });
            let head = integrate_1d(integrand, 0.0, 1.0, tol, hint)?;
            let scale = match f.decay() {
                Decay::Compact(r) => (f.center() + r + 1.0).max(1.0),
                Decay::Exponential(s) | Decay::GaussianLike(s) => s.max(1.0),
                Decay::Power(_) => 1.0,
            };
            let tail = integrate_halfline_with(integrand, 1.0, tol, scale, None)?;
            Ok(norm_from_power_integral(head.merge(tail), p, NormMethod::RadialQuadrature))
        }
        ConvexDomain::Ball { n } => weighted_ball(f, p, *n, alpha, tol),
        ConvexDomain::HalfSpace { n } => weighted_halfspace(f, p, *n, alpha, tol),
    }
}

fn weighted_ball(f: &TestFunction, p: f64, n: u32, alpha: f64, tol: f64) -> Result<NormResult> {
    let nf = n as f64;
    if f.center() == 0.0 {
        // radial reduction: omega_n int_0^1 |f(r)|^p (1-r)^{-alpha} r^{n-1} dr
        let k = boundary_vanishing_order(|d| f.evaluate(1.0 - d));
        if p * k - alpha <= -1.0 {
            return Ok(NormResult::infinite(NormMethod::RadialQuadrature));
        }
        let integrand =
            |r: f64| -> Result<f64> { Ok(f.evaluate(r).abs().powf(p) * (1.0 - r).powf(-alpha) * r.powf(nf - 1.0)) };
        let hint_pow = (alpha - p * k.min(4.0)).min(0.95);
        let hint =
            (hint_pow > 0.0).then_some(SingularityHint { endpoint: Endpoint::Upper, power: hint_pow });
        let i = integrate_1d(integrand, 0.0, 1.0, tol, hint)?.scaled(sphere_area(n)?);
        Ok(norm_from_power_integral(i, p, NormMethod::RadialQuadrature))
    } else if n == 1 {
        // interval (-1, 1) with weight (1-|x|)^{-alpha}
        let g = |x: f64| f.value_at(&[x]);
        for endpoint in [-1.0_f64, 1.0] {
            let k = boundary_vanishing_order(|d| g(endpoint - endpoint.signum() * d));
            if p * k - alpha <= -1.0 {
                return Ok(NormResult::infinite(NormMethod::RadialQuadrature));
            }
        }
        let integrand = |x: f64| -> Result<f64> { Ok(g(x).abs().powf(p) * (1.0 - x.abs()).powf(-alpha)) };
        let hint = SingularityHint { endpoint: Endpoint::Upper, power: alpha.min(0.95) };
        let right = integrate_1d(integrand, 0.0, 1.0, tol, Some(hint))?;
        let hint = SingularityHint { endpoint: Endpoint::Lower, power: alpha.min(0.95) };
        let left = integrate_1d(integrand, -1.0, 0.0, tol, Some(hint))?;
        Ok(norm_from_power_integral(left.merge(right), p, NormMethod::RadialQuadrature))
    } else {
        Err(Error::Domain(
            "weighted norms on balls support centered radial functions for n >= 2".into(),
        ))
    }
}

fn weighted_halfspace(f: &TestFunction, p: f64, n: u32, alpha: f64, tol: f64) -> Result<NormResult> {
    let c = f.center();
    let support = match f.decay() {
        Decay::Compact(r) => r,
        _ => {
            return Err(Error::Domain(
                "weighted half-space norms require a compactly supported function \
                 placed inside the domain"
                    .into(),
            ))
        }
    };
    if c - support <= 0.0 {
        // the d^{-alpha} weight is non-integrable across the support
        return Ok(NormResult::infinite(NormMethod::RadialQuadrature));
    }
    let nf = n as f64;
    // spherical reduction about the center: the angular weight integral
    // A(rho) = int_{S^{n-1}} (c + rho w_1)^{-alpha} d sigma(w)
    let angular = |rho: f64| -> Result<f64> {
        if n == 3 {
            // closed form: 2 pi [(c-rho)^{1-alpha} - (c+rho)^{1-alpha}] / (rho (alpha-1))
            Ok(2.0 * std::f64::consts::PI * ((c - rho).powf(1.0 - alpha) - (c + rho).powf(1.0 - alpha))
                / (rho * (alpha - 1.0)))
        } else {
            // n = 2: trapezoid over the circle (smooth periodic integrand)
            let m = 64;
            let mut s = 0.0;
            for i in 0..m {
                let th = 2.0 * std::f64::consts::PI * (i as f64) / (m as f64);
                s += (c + rho * th.cos()).powf(-alpha);
            }
            Ok(s * 2.0 * std::f64::consts::PI / m as f64)
        }
    };
    let integrand = |rho: f64| -> Result<f64> {
        if rho == 0.0 {
            return Ok(0.0);
        }
        Ok(f.evaluate(rho).abs().powf(p) * rho.powf(nf - 1.0) * angular(rho)?)
    };
    let i = integrate_1d(integrand, 0.0, support, tol, None)?;
    Ok(norm_from_power_integral(i, p, NormMethod::RadialQuadrature))
}
