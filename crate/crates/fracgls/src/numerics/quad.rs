//! Adaptive 1D quadrature: Gauss-Kronrod 7/15 panels with worst-first
//! bisection, endpoint-singularity substitutions, and a compactifying
//! substitution for half-line integrals.

use super::QuadResult;
use crate::error::{Error, Result};
use std::collections::BinaryHeap;

// 15-point Kronrod nodes (non-negative half), embedded 7-point Gauss rule.
// QUADPACK dqk15 constants.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Which end of the interval carries the singular behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// Endpoint hint: the integrand behaves like (distance to endpoint)^{-power}
/// near the named endpoint. Requires power < 1 for integrability.
#[derive(Debug, Clone, Copy)]
pub struct SingularityHint {
    pub endpoint: Endpoint,
    pub power: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // worst error first; sequence number breaks ties deterministically
        self.error
            .total_cmp(&other.error)
            .then(self.seq.cmp(&other.seq))
    }
}

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fk = [0.0_f64; 15];
    for (j, &x) in XGK.iter().enumerate() {
        let lo = center - half * x;
        let flo = f(lo)?;
        if !flo.is_finite() {
            return Err(Error::NonFinite(format!("x={lo:.17e}")));
        }
        fk[j] = flo;
        if j < 7 {
            let hi = center + half * x;
            let fhi = f(hi)?;
            if !fhi.is_finite() {
                return Err(Error::NonFinite(format!("x={hi:.17e}")));
            }
            fk[14 - j] = fhi;
        }
    }
    let mut kron = 0.0;
    for j in 0..7 {
        kron += WGK[j] * (fk[j] + fk[14 - j]);
    }
    kron += WGK[7] * fk[7];
    // Gauss-7 nodes are the odd-index Kronrod nodes
    let mut gauss = 0.0;
    for j in 0..3 {
        gauss += WG[j] * (fk[2 * j + 1] + fk[13 - 2 * j]);
    }
    gauss += WG[3] * fk[7];

    let value = kron * half;
    let raw_err = ((kron - gauss) * half).abs();
    // QUADPACK-style rescale against the deviation integral
    let mean = kron / 2.0;
    let mut resasc = WGK[7] * (fk[7] - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fk[j] - mean).abs() + (fk[14 - j] - mean).abs());
    }
    resasc *= half.abs();
    let err = if resasc != 0.0 && raw_err != 0.0 {
        let scale = (200.0 * raw_err / resasc).powf(1.5);
        if scale < 1.0 {
            resasc * scale
        } else {
            resasc
        }
    } else {
        raw_err
    };
    Ok((value, err))
}

const MAX_PANELS: usize = 30_000;

fn adaptive<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let (v0, e0) = gk15(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v0, error: e0, seq: 0 });
    let mut total_value = v0;
    let mut total_error = e0;
    let mut evals: u64 = 15;
    let mut seq: u64 = 0;
    while total_error > tol * total_value.abs().max(1.0) {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval at floating-point resolution; cannot refine further
            return Err(Error::NoConvergence {
                reason: format!(
                    "panel [{:.17e}, {:.17e}] at floating-point resolution",
                    worst.a, worst.b
                ),
                partial: total_value,
                error_estimate: total_error,
                evaluations: evals,
            });
        }
        let (vl, el) = gk15(f, worst.a, mid)?;
        let (vr, er) = gk15(f, mid, worst.b)?;
        evals += 30;
        total_value += vl + vr - worst.value;
        total_error += el + er - worst.error;
        seq += 1;
        heap.push(Panel { a: worst.a, b: mid, value: vl, error: el, seq });
        seq += 1;
        heap.push(Panel { a: mid, b: worst.b, value: vr, error: er, seq });
        if heap.len() >= MAX_PANELS && total_error > tol * total_value.abs().max(1.0) {
            return Err(Error::NoConvergence {
                reason: format!("panel budget exhausted on [{a:.6e}, {b:.6e}]"),
                partial: total_value,
                error_estimate: total_error,
                evaluations: evals,
            });
        }
    }
    Ok(QuadResult {
        value: total_value,
        error_estimate: total_error.abs(),
        evaluations: evals.max(1),
    })
}

/// Adaptive integral of `f` over [a, b] with a relative tolerance.
///
/// The reported `error_estimate` satisfies `error <= tol * max(1, |value|)`
/// on success. An optional endpoint hint declares integrable singular
/// behaviour (distance)^{-power}; the engine then flattens it with a
/// power substitution of the distance variable before subdividing.
pub fn integrate_1d<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    hint: Option<SingularityHint>,
) -> Result<QuadResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    match hint {
        Some(h) if h.power >= 1.0 => Err(Error::Domain(format!(
            "endpoint power {} is not integrable",
            h.power
        ))),
        // a non-positive power is not singular; integrate directly
        Some(h) if h.power > 0.0 => {
            let m = 1.0 / (1.0 - h.power);
            let span = b - a;
            let upper = span.powf(1.0 / m);
            match h.endpoint {
                Endpoint::Upper => adaptive(
                    &mut |t: f64| {
                        let d = t.powf(m);
                        Ok(f(b - d)? * m * t.powf(m - 1.0))
                    },
                    0.0,
                    upper,
                    tol,
                ),
                Endpoint::Lower => adaptive(
                    &mut |t: f64| {
                        let d = t.powf(m);
                        Ok(f(a + d)? * m * t.powf(m - 1.0))
                    },
                    0.0,
                    upper,
                    tol,
                ),
            }
        }
        _ => adaptive(&mut f, a, b, tol),
    }
}

/// Infallible-integrand convenience wrapper around [`integrate_1d`].
pub fn integrate_1d_fn<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    hint: Option<SingularityHint>,
) -> Result<QuadResult> {
    integrate_1d(|x| Ok(f(x)), a, b, tol, hint)
}

/// Integral of `f` over (a, infinity) by the compactifying substitution
/// r = a + scale * t/(1-t).
///
/// `scale` sets the decay length of the integrand. `tail_power`, when known,
/// declares that the compactified integrand behaves like (1-t)^{-tail_power}
/// near t = 1 (for f ~ r^{-beta} this is 2 - beta) and routes through the
/// endpoint substitution.
pub fn integrate_halfline_with<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    tol: f64,
    scale: f64,
    tail_power: Option<f64>,
) -> Result<QuadResult> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!("decay scale must be positive, got {scale}")));
    }
    // decay pre-probe: |f(r)| * r must head to zero along geometric radii,
    // otherwise the integral has no detectable convergent tail
    let mut probe = |mult: f64| -> Result<f64> {
        let r = a + scale * mult;
        Ok(f(r)?.abs() * (r - a).max(scale))
    };
    let p6 = probe(1e6)?;
    let p9 = probe(1e9)?;
    if p9.is_finite() && p6.is_finite() && p9 > 0.9 * p6 && p9 > tol * 1e-3 {
        return Err(Error::DecayDetection(format!(
            "integrand tail decays like 1/r or slower: |f|*r = {p6:.3e} at r-a=1e6*scale, \
             {p9:.3e} at r-a=1e9*scale"
        )));
    }
    let g = |t: f64| -> Result<f64> {
        let om = 1.0 - t;
        let r = a + scale * t / om;
        if !r.is_finite() {
            return Ok(0.0);
        }
        Ok(f(r)? * scale / (om * om))
    };
    let hint = tail_power.filter(|p| *p > 0.0).map(|p| SingularityHint {
        endpoint: Endpoint::Upper,
        power: p,
    });
    let mut out = integrate_1d(g, 0.0, 1.0, tol, hint)?;
    out.evaluations += 2;
    Ok(out)
}

/// [`integrate_halfline_with`] using unit decay scale and no tail hint.
pub fn integrate_halfline<F: FnMut(f64) -> Result<f64>>(f: F, a: f64, tol: f64) -> Result<QuadResult> {
    integrate_halfline_with(f, a, tol, 1.0, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_function() {
        let r = integrate_1d_fn(|x| x, 0.0, 1.0, 1e-10, None).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert!(r.error_estimate >= 0.0);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn inverse_sqrt_with_hint() {
        let hint = SingularityHint { endpoint: Endpoint::Upper, power: 0.5 };
        let r = integrate_1d_fn(|x| (1.0 - x).powf(-0.5), 0.0, 1.0, 1e-10, Some(hint)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn lower_endpoint_hint() {
        // int_0^1 x^{-1/3} dx = 3/2
        let hint = SingularityHint { endpoint: Endpoint::Lower, power: 1.0 / 3.0 };
        let r = integrate_1d_fn(|x| x.powf(-1.0 / 3.0), 0.0, 1.0, 1e-10, Some(hint)).unwrap();
        assert!((r.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate_1d_fn(|x| (-x * x).exp(), -8.0, 8.0, 1e-10, None).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn non_integrable_hint_rejected() {
        let hint = SingularityHint { endpoint: Endpoint::Upper, power: 1.0 };
        assert!(matches!(
            integrate_1d_fn(|x| x, 0.0, 1.0, 1e-8, Some(hint)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn negative_power_hint_is_direct() {
        let hint = SingularityHint { endpoint: Endpoint::Upper, power: -1.5 };
        let r = integrate_1d_fn(|x| (1.0 - x).powf(1.5), 0.0, 1.0, 1e-10, Some(hint)).unwrap();
        assert!((r.value - 0.4).abs() < 1e-10);
    }

    #[test]
    fn nan_fails_immediately() {
        let r = integrate_1d_fn(|x| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1e-8, None);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn halfline_exponential() {
        let r = integrate_halfline(|x| Ok((-x).exp()), 0.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn halfline_gaussian_flank() {
        let r = integrate_halfline(|x| Ok(x * (-x * x / 2.0).exp()), 0.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn halfline_power_decay() {
        let r = integrate_halfline(|x| Ok(x.powi(-2)), 1.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn halfline_power_decay_with_tail_hint() {
        // f ~ r^{-1.5}: compactified integrand ~ (1-t)^{-0.5}
        let r = integrate_halfline_with(|x| Ok(x.powf(-1.5)), 1.0, 1e-10, 1.0, Some(0.5)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn halfline_divergent_fails() {
        let r = integrate_halfline(|x| Ok(1.0 / x), 1.0, 1e-8);
        assert!(matches!(r, Err(Error::DecayDetection(_))), "1/x on (1,inf) must be rejected");
    }

    #[test]
    fn linearity() {
        let f = |x: f64| (x * 1.3).sin();
        let g = |x: f64| (-x).exp();
        let (a, b) = (0.25, 3.0);
        let rf = integrate_1d_fn(f, a, b, 1e-11, None).unwrap();
        let rg = integrate_1d_fn(g, a, b, 1e-11, None).unwrap();
        let rc = integrate_1d_fn(|x| 2.0 * f(x) - 3.5 * g(x), a, b, 1e-11, None).unwrap();
        let expect = 2.0 * rf.value - 3.5 * rg.value;
        let tol = 2.0 * rf.error_estimate + 3.5 * rg.error_estimate + rc.error_estimate + 1e-12;
        assert!((rc.value - expect).abs() <= tol);
    }

    #[test]
    fn high_degree_polynomial_is_exact() {
        // GK15 integrates degree-22 polynomials exactly; catches node/weight typos
        let r = integrate_1d_fn(|x| x.powi(20), 0.0, 1.0, 1e-13, None).unwrap();
        assert!((r.value - 1.0 / 21.0).abs() < 1e-14, "got {}", r.value);
    }
}
