//! Quasi-Monte Carlo integration over boxes: a Kronecker (generalized
//! golden ratio) low-discrepancy sequence with randomly shifted replicates.
//! The shift replicates give an unbiased error bar; the reduction order
//! over replicates is fixed so results are reproducible for a given seed.

use super::QuadResult;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHIFTS: usize = 8;

/// Generalized golden ratio: the root of x^{d+1} = x + 1.
fn phi_d(d: usize) -> f64 {
    let mut x = 1.5_f64;
    for _ in 0..64 {
        let fp = (d as f64 + 1.0) * x.powi(d as i32);
        x -= (x.powi(d as i32 + 1) - x - 1.0) / fp;
    }
    x
}

fn kronecker_alphas(dim: usize) -> Vec<f64> {
    let phi = phi_d(dim);
    (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect()
}

/// Low-discrepancy estimate of the integral of `f` over the box, with an
/// error bar from 8 independently shifted replicates of `budget` points each.
/// Deterministic for a fixed seed.
pub fn integrate_qmc<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    boxx: &[(f64, f64)],
    budget: u64,
    seed: u64,
) -> Result<QuadResult> {
    let dim = boxx.len();
    if !(2..=6).contains(&dim) {
        return Err(Error::Domain(format!("qmc dimension must be in 2..=6, got {dim}")));
    }
    if budget < 16 {
        return Err(Error::Domain(format!("qmc budget too small: {budget}")));
    }
    let mut volume = 1.0;
    for &(lo, hi) in boxx {
        if !(lo < hi) {
            return Err(Error::Domain(format!("degenerate box side [{lo}, {hi}]")));
        }
        volume *= hi - lo;
    }
    let alphas = kronecker_alphas(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<Vec<f64>> = (0..SHIFTS)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();

    let mut means = [0.0_f64; SHIFTS];
    let mut point = vec![0.0_f64; dim];
    for (si, shift) in shifts.iter().enumerate() {
        let mut acc = 0.0;
        for k in 0..budget {
            let kf = (k + 1) as f64;
            for j in 0..dim {
                let u = (kf * alphas[j] + shift[j]).fract();
                point[j] = boxx[j].0 + u * (boxx[j].1 - boxx[j].0);
            }
            let v = f(&point);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("qmc sample at {point:?}")));
            }
            acc += v;
        }
        means[si] = acc / budget as f64 * volume;
    }
    let mean = means.iter().sum::<f64>() / SHIFTS as f64;
    let var = means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (SHIFTS as f64 - 1.0);
    let se = (var / SHIFTS as f64).sqrt();
    Ok(QuadResult {
        value: mean,
        error_estimate: se,
        evaluations: budget * SHIFTS as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_on_unit_square() {
        let r = integrate_qmc(|_| 1.0, &[(0.0, 1.0), (0.0, 1.0)], 1 << 12, 7).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_xy() {
        let r = integrate_qmc(|x| x[0] * x[1], &[(0.0, 1.0), (0.0, 1.0)], 1 << 14, 7).unwrap();
        assert!((r.value - 0.25).abs() < 5e-4, "got {} +- {}", r.value, r.error_estimate);
    }

    #[test]
    fn gaussian_product() {
        let r = integrate_qmc(
            |x| (-x[0] * x[0] - x[1] * x[1]).exp(),
            &[(-6.0, 6.0), (-6.0, 6.0)],
            1 << 15,
            42,
        )
        .unwrap();
        let err = (r.value - std::f64::consts::PI).abs();
        assert!(err < (3.0 * r.error_estimate).max(2e-3), "err {err} vs se {}", r.error_estimate);
    }

    #[test]
    fn two_seeds_agree_within_error_bars() {
        let f = |x: &[f64]| (x[0] + 2.0 * x[1]).sin().abs();
        let a = integrate_qmc(f, &[(0.0, 2.0), (0.0, 2.0)], 1 << 14, 1).unwrap();
        let b = integrate_qmc(f, &[(0.0, 2.0), (0.0, 2.0)], 1 << 14, 99).unwrap();
        let tol = 3.0 * (a.error_estimate + b.error_estimate);
        assert!((a.value - b.value).abs() <= tol.max(1e-9));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = |x: &[f64]| x[0].cos() * x[1];
        let a = integrate_qmc(f, &[(0.0, 1.0), (0.0, 1.0)], 4096, 5).unwrap();
        let b = integrate_qmc(f, &[(0.0, 1.0), (0.0, 1.0)], 4096, 5).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn infinite_sample_is_reported() {
        let r = integrate_qmc(
            |x| 1.0 / (x[0] - x[0]),
            &[(0.0, 1.0), (0.0, 1.0)],
            64,
            3,
        );
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }
}
