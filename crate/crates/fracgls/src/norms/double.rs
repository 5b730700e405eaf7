//! Gagliardo-type double-integral seminorms
//! ( iint |f(x)-f(y)|^p / |x-y|^{n+sigma} dx dy )^{1/p}
//! over R^n or a convex domain: deterministic (x, h) product quadrature in
//! dimension 1, quasi-Monte Carlo with a radial power map for the h
//! variable in dimensions 2 and 3.

use super::{norm_from_power_integral, NormMethod, NormResult};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_1d, integrate_halfline_with, integrate_qmc, sphere_area, Endpoint, QuadResult,
    SingularityHint,
};
use crate::norms::ConvexDomain;
use crate::testfuncs::TestFunction;

const H_SPLIT: f64 = 0.1;

/// Slobodetskii seminorm over R^n (domain None) or over a convex domain.
/// sigma = s p with s in (0,1), p >= 1.
pub fn slobodetskii_norm(
    u: &TestFunction,
    s: f64,
    p: f64,
    domain: Option<&ConvexDomain>,
) -> Result<NormResult> {
    slobodetskii_norm_seeded(u, s, p, domain, 0x5105_0d15)
}

pub fn slobodetskii_norm_seeded(
    u: &TestFunction,
    s: f64,
    p: f64,
    domain: Option<&ConvexDomain>,
    seed: u64,
) -> Result<NormResult> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("order s must lie in (0,1), got {s}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("exponent p must be >= 1, got {p}")));
    }
    gagliardo_double(u, p, s * p, domain, seed)
}

/// delta-seminorm of section-4 type: same kernel with exponent alpha in
/// place of sp; requires alpha in (1, p).
pub fn delta_seminorm(
    f: &TestFunction,
    p: f64,
    domain: &ConvexDomain,
    alpha: f64,
) -> Result<NormResult> {
    delta_seminorm_seeded(f, p, domain, alpha, 0x5105_0d15)
}

pub fn delta_seminorm_seeded(
    f: &TestFunction,
    p: f64,
    domain: &ConvexDomain,
    alpha: f64,
    seed: u64,
) -> Result<NormResult> {
    if !(alpha > 1.0 && alpha < p) {
        return Err(Error::Domain(format!("alpha must lie in (1, p) = (1, {p}), got {alpha}")));
    }
    gagliardo_double(f, p, alpha, Some(domain), seed)
}

fn gagliardo_double(
    u: &TestFunction,
    p: f64,
    sigma: f64,
    domain: Option<&ConvexDomain>,
    seed: u64,
) -> Result<NormResult> {
    if u.is_zero() {
        return Ok(NormResult { value: 0.0, error_estimate: 0.0, method: NormMethod::RadialQuadrature });
    }
    if let Some(d) = domain {
        if d.dim() != u.dim() {
            return Err(Error::Domain(format!(
                "function dimension {} does not match domain dimension {}",
                u.dim(),
                d.dim()
            )));
        }
    }
    match (domain, u.dim()) {
        (None, 1) => double_r1(u, p, sigma),
        (Some(ConvexDomain::HalfLine), 1) => double_interval(u, p, sigma, 0.0, f64::INFINITY),
        (Some(ConvexDomain::Ball { n: 1 }), 1) => double_interval(u, p, sigma, -1.0, 1.0),
        (None, n @ (2 | 3)) => double_qmc_rn(u, p, sigma, n, seed),
        (Some(d), 2 | 3) => double_qmc_domain(u, p, sigma, d, seed),
        (_, n) => Err(Error::UnsupportedDimension(n)),
    }
}

// tolerances for the nested deterministic quadratures
const TOL_OUTER: f64 = 1e-8;
const TOL_INNER: f64 = 1e-9;

/// Window beyond which the function (and its translates) are negligible.
fn core_radius(u: &TestFunction) -> f64 {
    let r = u.effective_radius();
    if r.is_finite() {
        r + u.center().abs()
    } else {
        f64::INFINITY
    }
}

// inner integral over h in (0, hmax): |f(x+h)-f(x)|^p h^{-1-sigma},
// split at H_SPLIT where the difference-quotient regime turns into the
// tail regime
fn inner_h(
    fx: &impl Fn(f64) -> f64,
    x: f64,
    p: f64,
    sigma: f64,
    hmax: f64,
    decay_scale: f64,
) -> Result<QuadResult> {
    let f_at_x = fx(x);
    let integrand =
        |h: f64| -> Result<f64> { Ok((fx(x + h) - f_at_x).abs().powf(p) * h.powf(-1.0 - sigma)) };
    // |f(x+h)-f(x)|^p ~ |f'(x) h|^p: integrand ~ h^{p-1-sigma}
    let near_pow = sigma + 1.0 - p;
    let hint =
        (near_pow > 0.0).then_some(SingularityHint { endpoint: Endpoint::Lower, power: near_pow });
    let split = H_SPLIT.min(hmax);
    let near = integrate_1d(integrand, 0.0, split, TOL_INNER, hint)?;
    if split >= hmax {
        return Ok(near);
    }
    let far = if hmax.is_finite() {
        integrate_1d(integrand, split, hmax, TOL_INNER, None)?
    } else {
        // integrand -> |f(x)|^p h^{-1-sigma}: power tail
        integrate_halfline_with(integrand, split, TOL_INNER, decay_scale, Some(1.0 - sigma))?
    };
    Ok(near.merge(far))
}

// inner integral for far-left x over R (the function's mass sits at
// y = x + h in the core window): parametrized by y directly
fn inner_far(
    fx: &impl Fn(f64) -> f64,
    x: f64,
    p: f64,
    sigma: f64,
    core: f64,
) -> Result<QuadResult> {
    let f_at_x = fx(x);
    let integrand =
        |y: f64| -> Result<f64> { Ok((fx(y) - f_at_x).abs().powf(p) * (y - x).powf(-1.0 - sigma)) };
    integrate_1d(integrand, -core, core, TOL_INNER, None)
}

fn double_r1(u: &TestFunction, p: f64, sigma: f64) -> Result<QmcFree> {
    let core = core_radius(u);
    if !core.is_finite() {
        return Err(Error::Domain(
            "double integrals over R^n need better-than-power decay; \
             restrict to a domain instead"
                .into(),
        ));
    }
    let fx = |x: f64| u.value_at(&[x]);
    let far_cut = -(2.0 * core + H_SPLIT);
    let mut inner_acc: f64 = 0.0;
    let mut outer = |x: f64| -> Result<f64> {
        let i = if x < far_cut {
            inner_far(&fx, x, p, sigma, core)?
        } else {
            inner_h(&fx, x, p, sigma, f64::INFINITY, core.max(1.0))?
        };
        inner_acc += i.error_estimate;
        Ok(i.value)
    };
    // central window, then both power tails: the inner integral decays
    // like |x|^{-1-sigma} to the left (mass reachable at h ~ |x|) and
    // exponentially fast to the right
    let center = integrate_1d(&mut outer, -core, core, TOL_OUTER, None)?;
    let left = integrate_halfline_with(
        |t: f64| outer(-t),
        core,
        TOL_OUTER,
        core.max(1.0),
        Some(1.0 - sigma),
    )?;
    let right = integrate_halfline_with(&mut outer, core, TOL_OUTER, core.max(1.0), None)?;
    let mut i = center.merge(left).merge(right).scaled(2.0);
    i.error_estimate += 2.0 * TOL_INNER * i.value.abs().max(1.0);
    Ok(norm_from_power_integral(i, p, NormMethod::RadialQuadrature))
}

type QmcFree = NormResult;

fn double_interval(u: &TestFunction, p: f64, sigma: f64, a: f64, b: f64) -> Result<NormResult> {
    let fx = |x: f64| u.value_at(&[x]);
    let mut inner_acc: f64 = 0.0;
    let mut outer = |x: f64| -> Result<f64> {
        let hmax = if b.is_finite() { b - x } else { f64::INFINITY };
        if hmax <= 0.0 {
            return Ok(0.0);
        }
        let i = inner_h(&fx, x, p, sigma, hmax, core_radius(u).min(50.0).max(1.0))?;
        inner_acc += i.error_estimate;
        Ok(i.value)
    };
    let i = if b.is_finite() {
        integrate_1d(&mut outer, a, b, TOL_OUTER, None)?
    } else {
        let core = core_radius(u);
        if !core.is_finite() {
            return Err(Error::Domain("unbounded-domain double integral needs decay".into()));
        }
        let head = integrate_1d(&mut outer, a, a + core, TOL_OUTER, None)?;
        let tail = integrate_halfline_with(&mut outer, a + core, TOL_OUTER, core.max(1.0), None)?;
        head.merge(tail)
    };
    let mut i = i.scaled(2.0);
    i.error_estimate += 2.0 * TOL_INNER * i.value.abs().max(1.0);
    Ok(norm_from_power_integral(i, p, NormMethod::RadialQuadrature))
}

// QMC over (x, h-polar) for R^n, n in {2,3}: x in the core box, h mapped
// radially with a power map that flattens the h -> 0 kernel; the far-field
// x and large-h regions are closed with the analytic |u|_p^p tail terms.
fn double_qmc_rn(u: &TestFunction, p: f64, sigma: f64, n: u32, seed: u64) -> Result<NormResult> {
    let core = core_radius(u);
    if !core.is_finite() {
        return Err(Error::Domain(
            "double integrals over R^n need better-than-power decay for the QMC window".into(),
        ));
    }
    let x_cut = 50.0_f64.max(4.0 * core);
    let h_cut = 2.0 * x_cut;
    let inner = qmc_core_piece(u, p, sigma, n, (-x_cut, x_cut), h_cut, None, seed)?;
    // closure terms: {|x| <= X, |h| > H} and {|x| > X}
    let lp = super::lp_norm(u, p)?;
    let om = sphere_area(n)?;
    let closure = lp.value.powf(p) * om / sigma * (h_cut.powf(-sigma) + x_cut.powf(-sigma));
    let closure_err = closure * (n as f64 + sigma) * core / x_cut + closure * 1e-2;
    let total = QuadResult {
        value: inner.value + closure,
        error_estimate: inner.error_estimate + closure_err,
        evaluations: inner.evaluations,
    };
    Ok(norm_from_power_integral(total, p, NormMethod::Qmc))
}

fn double_qmc_domain(
    u: &TestFunction,
    p: f64,
    sigma: f64,
    domain: &ConvexDomain,
    seed: u64,
) -> Result<NormResult> {
    let n = domain.dim();
    let core = core_radius(u);
    let (x_range, h_cut) = match domain {
        ConvexDomain::Ball { .. } => ((-1.0, 1.0), 2.0),
        ConvexDomain::HalfSpace { .. } => {
            if !core.is_finite() {
                return Err(Error::Domain(
                    "half-space double integrals need a decaying function".into(),
                ));
            }
            ((0.0, 2.0 * core + 2.0), 4.0 * core + 4.0)
        }
        ConvexDomain::HalfLine => unreachable!("dimension 1 handled deterministically"),
    };
    let inner = qmc_core_piece(u, p, sigma, n, x_range, h_cut, Some(domain), seed)?;
    let mut total = inner;
    if matches!(domain, ConvexDomain::HalfSpace { .. }) {
        // mass escaping the finite window: bounded by the free-space tails
        let lp_ball = super::lp_norm(u, p)?;
        let om = sphere_area(n)?;
        let closure = lp_ball.value.powf(p) * om / sigma * h_cut.powf(-sigma);
        total.value += closure;
        total.error_estimate += closure;
    }
    Ok(norm_from_power_integral(total, p, NormMethod::Qmc))
}

fn qmc_core_piece(
    u: &TestFunction,
    p: f64,
    sigma: f64,
    n: u32,
    x_range: (f64, f64),
    h_cut: f64,
    domain: Option<&ConvexDomain>,
    seed: u64,
) -> Result<QuadResult> {
    // h in polar coordinates with radius rho = h_cut * v^m,
    // m = 1/(p - sigma) flattening the rho^{p-1-sigma} small-h behaviour
    let m = 1.0 / (p - sigma).max(0.25);
    let nf = n as f64;
    let dim = 2 * n as usize;
    let boxx: Vec<(f64, f64)> = (0..dim)
        .map(|j| {
            if j < n as usize {
                if domain.map_or(false, |d| matches!(d, ConvexDomain::HalfSpace { .. })) && j == 0 {
                    (0.0, x_range.1)
                } else {
                    x_range
                }
            } else {
                (0.0, 1.0)
            }
        })
        .collect();
    let budget: u64 = if n == 2 { 1 << 15 } else { 1 << 16 };
    let integrand = |z: &[f64]| -> f64 {
        let x = &z[..n as usize];
        if let Some(d) = domain {
            if !d.contains(x) {
                return 0.0;
            }
        }
        let uv = &z[n as usize..];
        let v = uv[0];
        if v <= 0.0 {
            return 0.0;
        }
        let rho = h_cut * v.powf(m);
        let jac_rho = h_cut * m * v.powf(m - 1.0);
        let h: [f64; 3] = match n {
            2 => {
                let th = 2.0 * std::f64::consts::PI * uv[1];
                [rho * th.cos(), rho * th.sin(), 0.0]
            }
            _ => {
                let cph = 2.0 * uv[2] - 1.0;
                let sph = (1.0 - cph * cph).max(0.0).sqrt();
                let th = 2.0 * std::f64::consts::PI * uv[1];
                [rho * sph * th.cos(), rho * sph * th.sin(), rho * cph]
            }
        };
        let ang_jac = match n {
            2 => 2.0 * std::f64::consts::PI,
            _ => 4.0 * std::f64::consts::PI,
        };
        let mut y = [0.0_f64; 3];
        for i in 0..n as usize {
            y[i] = x[i] + h[i];
        }
        if let Some(d) = domain {
            if !d.contains(&y[..n as usize]) {
                return 0.0;
            }
        }
        let du = u.value_at(&y[..n as usize]) - u.value_at(x);
        if du == 0.0 {
            return 0.0;
        }
        du.abs().powf(p) * rho.powf(-nf - sigma) * rho.powf(nf - 1.0) * ang_jac * jac_rho
    };
    // the (x,h) and (y,-h) halves are both covered by the full h sphere:
    // no factor 2 here
    integrate_qmc(integrand, &boxx, budget, seed)
}
