//! Closed-form and integral-defined constants: the embedding constant
//! K(n,s) and its blow-up asymptote, the Sobolev exponent maps, the
//! boundary-weight integrals L_alpha / D_{alpha,n} / g_{alpha,n} with
//! their small- and large-p asymptotes and non-asymptotic bounds, and the
//! two-sided bounds on the set-complement kernel constant Z(n,s,p).
//!
//! Every Gamma-ratio expression is evaluated in the log domain so that
//! large-p regimes (Gamma(p+1) at p up to ~65) stay representable.

use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, integrate_halfline_with, log_gamma, sphere_area, QuadResult};

/// An admissible exponent pair for the fractional embedding: q = pn/(n-sp).
#[derive(Debug, Clone, Copy)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
    pub n: u32,
    pub s: f64,
}

fn check_ns(n: u32, s: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    let nf = n as f64;
    if !(s > 0.0 && s < nf) {
        return Err(Error::Domain(format!("order s must lie in (0, n) = (0, {nf}), got {s}")));
    }
    Ok(nf)
}

/// Sharp embedding constant
/// K(n,s) = pi^{s/2} Gamma((n-s)/2)/Gamma((n+s)/2) * (Gamma(n)/Gamma(n/2))^{s/n}.
pub fn sharp_constant_k(n: u32, s: f64) -> Result<f64> {
    let nf = check_ns(n, s)?;
    let log_k = 0.5 * s * std::f64::consts::PI.ln() + log_gamma((nf - s) / 2.0)?
        - log_gamma((nf + s) / 2.0)?
        + (s / nf) * (log_gamma(nf)? - log_gamma(nf / 2.0)?);
    Ok(log_k.exp())
}

/// Blow-up asymptote of K as s -> n: omega_n / (n - s).
pub fn k_asymptote(n: u32, s: f64) -> Result<f64> {
    let nf = check_ns(n, s)?;
    Ok(sphere_area(n)? / (nf - s))
}

/// Sobolev conjugate q = pn/(n - sp); requires 1 < p < n/s.
pub fn sobolev_q(p: f64, n: u32, s: f64) -> Result<f64> {
    let nf = check_ns(n, s)?;
    if !(p > 1.0 && p < nf / s) {
        return Err(Error::Domain(format!(
            "exponent p must lie in (1, n/s) = (1, {}), got {p}",
            nf / s
        )));
    }
    Ok(p * nf / (nf - s * p))
}

/// Inverse map p = qn/(n + qs); requires q > n/(n-s).
pub fn inverse_p(q: f64, n: u32, s: f64) -> Result<f64> {
    let nf = check_ns(n, s)?;
    if !(q > nf / (nf - s)) {
        return Err(Error::Domain(format!(
            "exponent q must exceed n/(n-s) = {}, got {q}",
            nf / (nf - s)
        )));
    }
    Ok(q * nf / (nf + q * s))
}

/// The conformal exponent p = 2n/(n+s) (its conjugate is q = 2n/(n-s)).
pub fn conformal_p(n: u32, s: f64) -> Result<f64> {
    let nf = check_ns(n, s)?;
    Ok(2.0 * nf / (nf + s))
}

/// Both exponents of an admissible pair.
pub fn exponent_pair(p: f64, n: u32, s: f64) -> Result<ExponentPair> {
    Ok(ExponentPair { p, q: sobolev_q(p, n, s)?, n, s })
}

fn check_alpha_p(alpha: f64, p: f64) -> Result<()> {
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(p > alpha) {
        return Err(Error::Domain(format!(
            "p must exceed alpha (p={p}, alpha={alpha}); the weight integral diverges otherwise"
        )));
    }
    Ok(())
}

/// L_alpha(p) = int_0^1 |1 - r^{(alpha-1)/p}|^p / (1-r)^{1+alpha} dr.
///
/// Computed in the log substitution r = exp(-v): the integrand's
/// (1-r)^{p-1-alpha} endpoint behaviour is captured by an analytic
/// leading term (exact as p -> alpha), and the large-p mass at
/// v ~ p sits on a plain exponential tail. This keeps the *relative*
/// accuracy uniform over the whole range p in (alpha, alpha+64].
pub fn l_alpha(alpha: f64, p: f64, tol: f64) -> Result<QuadResult> {
    check_alpha_p(alpha, p)?;
    let eps = (alpha - 1.0) / p;
    let eta = p - alpha;
    // I(v) = (1-e^{-eps v})^p (1-e^{-v})^{-1-alpha} e^{-v}
    //      = eps^p v^{eta-1} phi(v),  phi(0) = 1
    let log_phi = |v: f64| -> f64 {
        let a = if eps * v < 1e-8 {
            // log((1-e^{-x})/x) = -x/2 + x^2/24 + O(x^4)
            -eps * v / 2.0 + eps * v * eps * v / 24.0
        } else {
            ((-(-eps * v).exp_m1()) / (eps * v)).ln()
        };
        let b = if v < 1e-8 {
            v / 2.0 - v * v / 24.0
        } else {
            (v / (-(-v).exp_m1())).ln()
        };
        p * a + (1.0 + alpha) * b - v
    };
    let log_eps_p = p * eps.ln();
    // leading analytic piece: eps^p * delta^eta / eta with delta = 1
    let lead = (log_eps_p - eta.ln()).exp();
    // regular remainder on [0, 1]: eps^p v^{eta-1} (phi(v) - 1), which
    // extends continuously by 0 at v = 0 since phi(v) - 1 = O(v)
    let reg = integrate_1d(
        |v: f64| Ok(v.powf(eta - 1.0) * log_phi(v).exp_m1()),
        0.0,
        1.0,
        tol,
        None,
    )?
    .scaled(log_eps_p.exp());
    // exponential tail on [1, inf): scale tracks the v ~ p mass
    let tail = integrate_halfline_with(
        |v: f64| Ok((log_eps_p + (eta - 1.0) * v.ln() + log_phi(v)).exp()),
        1.0,
        tol,
        (0.5 * p).max(1.0),
        None,
    )?;
    let mut out = reg.merge(tail);
    out.value += lead;
    // the analytic term is exact up to rounding
    out.error_estimate += lead * 1e-15;
    Ok(out)
}

/// Small-p blow-up: L ~ ((alpha-1)^p / p^p) / (p - alpha) as p -> alpha+.
pub fn case_a_asymptote(alpha: f64, p: f64) -> Result<f64> {
    check_alpha_p(alpha, p)?;
    Ok((p * ((alpha - 1.0) / p).ln() - (p - alpha).ln()).exp())
}

/// Large-p growth: L ~ ((alpha-1)^p / p^p) Gamma(p+1) as p -> infinity.
pub fn case_b_asymptote(alpha: f64, p: f64) -> Result<f64> {
    check_alpha_p(alpha, p)?;
    Ok((p * ((alpha - 1.0) / p).ln() + log_gamma(p + 1.0)?).exp())
}

/// Non-asymptotic two-sided information on L_alpha(p) at a split point
/// Delta in (0,1).
///
/// `upper` is a rigorous upper bound. `lower_shape` is the bracket
/// ((alpha-1)^p/p^p) [Gamma(p+1) + 1/(p-alpha)] *without* the
/// multiplicative C(alpha)^p factor, whose value is not specified; only
/// positivity and the upper bound are testable.
#[derive(Debug, Clone, Copy)]
pub struct CaseCBounds {
    pub delta: f64,
    pub upper: f64,
    pub lower_shape: f64,
}

pub fn case_c_bounds(alpha: f64, p: f64, delta: f64) -> Result<CaseCBounds> {
    check_alpha_p(alpha, p)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("split point Delta must lie in (0,1), got {delta}")));
    }
    let log_pref = p * ((alpha - 1.0) / p).ln();
    let om = 1.0 - delta;
    let term1 = (log_pref + log_gamma(p + 1.0)? - (1.0 + alpha) * om.ln()).exp();
    let term2 = (log_pref + p * (delta.ln().abs().ln() - om.ln()) - (p - alpha).ln()).exp();
    let lower1 = (log_pref + log_gamma(p + 1.0)?).exp();
    let lower2 = (log_pref - (p - alpha).ln()).exp();
    Ok(CaseCBounds { delta, upper: term1 + term2, lower_shape: lower1 + lower2 })
}

/// D_{alpha,n}(p) = 2 pi^{(n-1)/2} Gamma((1+alpha)/2)/Gamma((n+alpha)/2) * L_alpha(p).
pub fn d_alpha_n(alpha: f64, n: u32, p: f64, tol: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    let nf = n as f64;
    let log_pref = std::f64::consts::LN_2
        + 0.5 * (nf - 1.0) * std::f64::consts::PI.ln()
        + log_gamma((1.0 + alpha) / 2.0)?
        - log_gamma((nf + alpha) / 2.0)?;
    Ok(log_pref.exp() * l_alpha(alpha, p, tol)?.value)
}

/// g_{alpha,n}(p) = D_{alpha,n}(p)^{-1/p}.
pub fn g_alpha_n(alpha: f64, n: u32, p: f64, tol: f64) -> Result<f64> {
    Ok(d_alpha_n(alpha, n, p, tol)?.powf(-1.0 / p))
}

/// Two-sided bounds on the set-complement kernel constant:
/// (sp)^{-1} omega_n^{1+sp/n} n^{-1-sp/n} <= Z(n,s,p) <= (sp)^{-1} omega_n^{1+sp/n} n^{-sp/n}.
pub fn z_bounds(n: u32, s: f64, p: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("order s must lie in (0,1), got {s}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("exponent p must be >= 1, got {p}")));
    }
    let nf = n as f64;
    let om = sphere_area(n)?;
    let sp = s * p;
    let upper = om.powf(1.0 + sp / nf) * nf.powf(-sp / nf) / sp;
    Ok((upper / nf, upper))
}

/// Empirical fit of the unspecified case-C lower-bound factor:
/// c_hat(alpha) = inf_p (L_alpha(p) / lower_shape(p))^{1/p} over the grid.
/// This is an *empirical* diagnostic, not a proven constant.
pub fn empirical_lower_c(alpha: f64, p_grid: &[f64], tol: f64) -> Result<f64> {
    if p_grid.is_empty() {
        return Err(Error::EmptyGrid("empirical_lower_c needs a p grid".into()));
    }
    let mut best = f64::INFINITY;
    for &p in p_grid {
        let l = l_alpha(alpha, p, tol)?.value;
        let shape = case_c_bounds(alpha, p, 0.5)?.lower_shape;
        best = best.min((l / shape).powf(1.0 / p));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn k_reference_values() {
        // K(1, 0.5) = Gamma(1/4)/Gamma(3/4)
        assert!(rel(sharp_constant_k(1, 0.5).unwrap(), 2.9586751191886389) < 1e-12);
        assert!(rel(sharp_constant_k(3, 1.0).unwrap(), 2.3248947030192530) < 1e-12);
    }

    #[test]
    fn k_endpoints() {
        for n in 1..=5u32 {
            let k = sharp_constant_k(n, 1e-8).unwrap();
            assert!((k - 1.0).abs() < 1e-6, "n={n}: K(n,0+)={k}");
        }
        for n in 1..=3u32 {
            let nf = n as f64;
            let s = nf - 1e-3;
            let lhs = (nf - s) * sharp_constant_k(n, s).unwrap();
            let om = sphere_area(n).unwrap();
            assert!(rel(lhs, om) < 0.01, "n={n}: {lhs} vs {om}");
        }
    }

    #[test]
    fn k_domain_errors() {
        assert!(sharp_constant_k(3, 0.0).is_err());
        assert!(sharp_constant_k(3, 3.0).is_err());
        assert!(k_asymptote(2, 2.5).is_err());
    }

    #[test]
    fn asymptote_values() {
        assert!(rel(k_asymptote(1, 0.5).unwrap(), 4.0) < 1e-14);
        let v = k_asymptote(2, 2.0 - 1e-4).unwrap();
        assert!(rel(v, 2.0 * std::f64::consts::PI * 1e4) < 1e-10);
        let r = sharp_constant_k(3, 2.999).unwrap() / k_asymptote(3, 2.999).unwrap();
        assert!((r - 1.0).abs() < 0.01, "ratio {r}");
    }

    #[test]
    fn exponent_maps() {
        assert!(rel(sobolev_q(2.0, 3, 1.0).unwrap(), 6.0) < 1e-14);
        assert!(rel(inverse_p(6.0, 3, 1.0).unwrap(), 2.0) < 1e-14);
        // conformal pair n=1, s=0.5: p=4/3 -> q=4
        let p = conformal_p(1, 0.5).unwrap();
        assert!(rel(p, 4.0 / 3.0) < 1e-14);
        assert!(rel(sobolev_q(p, 1, 0.5).unwrap(), 4.0) < 1e-14);
        assert!(sobolev_q(4.0, 1, 0.5).is_err(), "p beyond n/s");
        assert!(inverse_p(1.9, 1, 0.5).is_err(), "q below n/(n-s)");
    }

    #[test]
    fn l_alpha_reference_value() {
        // frozen from a 40-digit evaluation of the same decomposition
        let l = l_alpha(1.5, 3.0, 1e-10).unwrap();
        assert!(rel(l.value, 0.0176456950414182) < 1e-9, "got {}", l.value);
    }

    #[test]
    fn l_alpha_coarse_fine_oracle() {
        // independent oracle: midpoint rule on the r-domain integrand with
        // two mesh sizes, Richardson-style agreement check
        let (alpha, p) = (1.5, 3.0);
        let integrand = |r: f64| (1.0 - r.powf((alpha - 1.0) / p)).abs().powf(p) / (1.0 - r).powf(1.0 + alpha);
        let mid = |m: usize| -> f64 {
            let h = 1.0 / m as f64;
            (0..m).map(|i| integrand((i as f64 + 0.5) * h) * h).sum()
        };
        let coarse = mid(40_000);
        let fine = mid(80_000);
        assert!((coarse - fine).abs() < 2e-5, "mesh not converged: {coarse} vs {fine}");
        let l = l_alpha(alpha, p, 1e-10).unwrap().value;
        assert!((l - fine).abs() < 5e-5, "adaptive {l} vs midpoint {fine}");
    }

    #[test]
    fn l_alpha_tiny_alpha_minus_one() {
        // (alpha-1)/p -> 0 makes the numerator vanish
        let l = l_alpha(1.0 + 1e-9, 3.0, 1e-8).unwrap();
        assert!(l.value >= 0.0 && l.value < 1e-20, "got {}", l.value);
    }

    #[test]
    fn l_alpha_blows_up_near_alpha() {
        let near = l_alpha(1.5, 1.51, 1e-9).unwrap().value;
        let a = case_a_asymptote(1.5, 1.51).unwrap();
        assert!(near > 10.0, "should be large, got {near}");
        assert!(rel(near, a) < 0.2, "case-A shape: {near} vs {a}");
    }

    #[test]
    fn case_a_reference() {
        let v = case_a_asymptote(1.5, 1.6).unwrap();
        assert!(rel(v, 1.5551061349746) < 1e-9, "got {v}");
    }

    #[test]
    fn case_b_log_domain() {
        let v = case_b_asymptote(1.5, 30.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // exp(30 ln(0.5/30) + lgamma(31))
        let want = (30.0 * (0.5_f64 / 30.0).ln() + log_gamma(31.0).unwrap()).exp();
        assert!(rel(v, want) < 1e-12);
    }

    #[test]
    fn case_a_monotone_approach() {
        for &alpha in &[1.2, 1.5, 2.0] {
            let mut last = f64::INFINITY;
            for &d in &[0.1, 0.01, 0.001] {
                let p = alpha + d;
                let ratio = l_alpha(alpha, p, 1e-10).unwrap().value
                    / case_a_asymptote(alpha, p).unwrap();
                let gap = (ratio - 1.0).abs();
                assert!(gap < last, "alpha={alpha} d={d}: gap {gap} vs {last}");
                last = gap;
            }
        }
    }

    #[test]
    fn case_c_example_and_dominance() {
        let b = case_c_bounds(1.5, 3.0, 0.5).unwrap();
        let want = (0.5_f64.powi(3) / 27.0)
            * (2.0_f64.powf(2.5) * 6.0 + (2.0 * std::f64::consts::LN_2).powi(3) / 1.5);
        assert!(rel(b.upper, want) < 1e-12, "upper {} vs {want}", b.upper);
        assert!(b.lower_shape > 0.0);
        for &alpha in &[1.2, 1.5, 2.0] {
            for &d in &[0.5, 1.0, 2.0, 4.0, 8.0] {
                let p = alpha + d;
                let l = l_alpha(alpha, p, 1e-9).unwrap().value;
                let ub = case_c_bounds(alpha, p, 0.5).unwrap().upper;
                assert!(ub >= l, "alpha={alpha} p={p}: upper {ub} < L {l}");
            }
        }
        assert!(case_c_bounds(1.5, 3.0, 1.0).is_err());
    }

    #[test]
    fn d_and_g() {
        // n=1 prefactor collapses to 2
        let l = l_alpha(1.5, 3.0, 1e-10).unwrap().value;
        let d = d_alpha_n(1.5, 1, 3.0, 1e-10).unwrap();
        assert!(rel(d, 2.0 * l) < 1e-12);
        let g = g_alpha_n(1.5, 1, 3.0, 1e-10).unwrap();
        assert!(rel(g * d.powf(1.0 / 3.0), 1.0) < 1e-12);
        assert!(l_alpha(1.5, 1.4, 1e-8).is_err(), "p <= alpha rejected");
    }

    #[test]
    fn z_bounds_examples() {
        let (lo, hi) = z_bounds(1, 0.5, 2.0).unwrap();
        assert!(rel(lo, 4.0) < 1e-14 && rel(hi, 4.0) < 1e-14);
        for n in 1..=4u32 {
            let (lo, hi) = z_bounds(n, 0.3, 1.7).unwrap();
            assert!(lo <= hi);
            assert!(rel(hi / lo, n as f64) < 1e-12);
        }
    }

    #[test]
    fn empirical_c_is_labeled_diagnostic() {
        let c = empirical_lower_c(1.5, &[2.0, 2.5, 3.5, 5.0, 9.0], 1e-8).unwrap();
        assert!(c > 0.0 && c < 1.0, "got {c}");
    }
}
