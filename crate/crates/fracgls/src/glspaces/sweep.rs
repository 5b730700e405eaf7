//! Grid sweeps with golden-section refinement and endpoint-approach
//! reporting, realizing suprema and infima over open exponent intervals.

use crate::error::{Error, Result};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// A finite exponent grid inside an open interval, with a schedule of
/// offsets probing the open endpoints and golden-section refinement
/// around the running extremum.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub points: Vec<f64>,
    pub eps_schedule: Vec<f64>,
    pub refine_passes: u32,
}

impl SweepGrid {
    /// Log-spaced points strictly inside (lo, hi); hi may be infinite, in
    /// which case the grid tops out at `hi_cap`.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<SweepGrid> {
        SweepGrid::log_spaced_capped(lo, hi, count, 64.0)
    }

    pub fn log_spaced_capped(lo: f64, hi: f64, count: usize, hi_cap: f64) -> Result<SweepGrid> {
        if !(lo > 0.0) || !(hi > lo) {
            return Err(Error::Domain(format!("invalid sweep interval ({lo}, {hi})")));
        }
        if count < 2 {
            return Err(Error::EmptyGrid("sweep grid needs at least 2 points".into()));
        }
        let top = if hi.is_finite() { hi } else { lo.max(1.0) * hi_cap };
        // shift strictly inside the open interval
        let margin = 1e-3 * (top - lo).min(lo);
        let (a, b) = (lo + margin, top - if hi.is_finite() { margin } else { 0.0 });
        let points = (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                (a.ln() + t * (b.ln() - a.ln())).exp()
            })
            .collect();
        Ok(SweepGrid { points, eps_schedule: vec![1e-1, 1e-2, 1e-3, 1e-4], refine_passes: 3 })
    }

    /// Explicit points (must be strictly increasing).
    pub fn from_points(points: Vec<f64>) -> Result<SweepGrid> {
        if points.len() <

1 {
            return Err(Error::EmptyGrid("sweep grid needs points".into()));
        }
        if !points.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain("sweep points must be strictly increasing".into()));
        }
        Ok(SweepGrid { points, eps_schedule: vec![1e-1, 1e-2, 1e-3, 1e-4], refine_passes: 3 })
    }

    pub fn validate_inside(&self, support: (f64, f64)) -> Result<()> {
        for &p in &self.points {
            if !(p > support.0 && p < support.1) {
                return Err(Error::Support(format!(
                    "grid point {p} outside the open support ({}, {})",
                    support.0, support.1
                )));
            }
        }
        Ok(())
    }
}

/// One endpoint-approach probe.
#[derive(Debug, Clone, Copy)]
pub struct EndpointProbe {
    pub offset: f64,
    pub point: f64,
    pub value: f64,
}

/// Outcome of a sup (or inf) sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub value: f64,
    pub arg: f64,
    pub lower_trend: Vec<EndpointProbe>,
    pub upper_trend: Vec<EndpointProbe>,
    /// the extremum kept improving at the smallest endpoint offset
    pub possibly_unbounded: bool,
    pub evaluations: usize,
}

fn golden_refine(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    passes: u32,
    best: &mut (f64, f64),
    evals: &mut usize,
) -> Result<()> {
    // golden-section maximization; each pass shrinks the bracket to ~11%
    for _ in 0..passes {
        for _ in 0..5 {
            let x1 = hi - GOLDEN * (hi - lo);
            let x2 = lo + GOLDEN * (hi - lo);
            let f1 = f(x1)?;
            let f2 = f(x2)?;
            *evals += 2;
            if f1 > best.1 {
                *best = (x1, f1);
            }
            if f2 > best.1 {
                *best = (x2, f2);
            }
            if f1 < f2 {
                lo = x1;
            } else {
                hi = x2;
            }
        }
    }
    Ok(())
}

/// Maximize f over the grid (plus endpoint probes and refinement) inside
/// the open support. Infinite f values are allowed and dominate.
pub fn sweep_sup(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    grid: &SweepGrid,
    support: (f64, f64),
) -> Result<SweepOutcome> {
    let pts: Vec<f64> =
        grid.points.iter().copied().filter(|p| *p > support.0 && *p < support.1).collect();
    if pts.is_empty() {
        return Err(Error::EmptyGrid(format!(
            "no sweep points inside the support ({}, {})",
            support.0, support.1
        )));
    }
    let mut evals = 0usize;
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(pts.len());
    for &p in &pts {
        let v = f(p)?;
        evals += 1;
        values.push(v);
        if v > best.1 {
            best = (p, v);
        }
    }
    if best.1.is_infinite() {
        return Ok(SweepOutcome {
            value: f64::INFINITY,
            arg: best.0,
            lower_trend: vec![],
            upper_trend: vec![],
            possibly_unbounded: true,
            evaluations: evals,
        });
    }
    // refine around the best grid point
    let idx = pts.iter().position(|&p| p == best.0).unwrap_or(0);
    let lo = if idx == 0 { (support.0 + pts[0]) / 2.0 } else { pts[idx - 1] };
    let hi = if idx + 1 == pts.len() {
        if support.1.is_finite() {
            (pts[idx] + support.1) / 2.0
        } else {
            pts[idx] * 2.0
        }
    } else {
        pts[idx + 1]
    };
    golden_refine(f, lo, hi, grid.refine_passes, &mut best, &mut evals)?;

    // endpoint approach: offsets shrink toward each open endpoint
    let span = if support.1.is_finite() { support.1 - support.0 } else { 1.0 };
    let mut lower_trend = Vec::new();
    let mut upper_trend = Vec::new();
    for &eps in &grid.eps_schedule {
        let p = support.0 + eps * span.min(1.0);
        if p < pts[0] {
            let v = f(p)?;
            evals += 1;
            lower_trend.push(EndpointProbe { offset: eps, point: p, value: v });
            if v > best.1 {
                best = (p, v);
            }
        }
        let p = if support.1.is_finite() {
            support.1 - eps * span.min(1.0)
        } else {
            pts[pts.len() - 1].max(1.0) / eps
        };
        if p > pts[pts.len() - 1] {
            let v = f(p)?;
            evals += 1;
            upper_trend.push(EndpointProbe { offset: eps, point: p, value: v });
            if v > best.1 {
                best = (p, v);
            }
        }
    }
    let growing = |trend: &[EndpointProbe]| -> bool {
        trend.len() >= 2
            && trend.windows(2).all(|w| w[1].value > w[0].value)
            && trend.last().map_or(false, |e| e.value >= best.1 * (1.0 - 1e-9))
    };
    let possibly_unbounded = growing(&lower_trend) || growing(&upper_trend);
    Ok(SweepOutcome {
        value: best.1,
        arg: best.0,
        lower_trend,
        upper_trend,
        possibly_unbounded,
        evaluations: evals,
    })
}

/// Minimize f over the grid inside the open support (no endpoint probes;
/// infima of the transforms are interior or reported by the trend of the
/// sup machinery on the negated function when needed).
pub fn sweep_inf(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    grid: &SweepGrid,
    support: (f64, f64),
) -> Result<SweepOutcome> {
    let mut neg = |x: f64| -> Result<f64> { Ok(-f(x)?) };
    let out = sweep_sup(&mut neg, grid, support)?;
    Ok(SweepOutcome {
        value: -out.value,
        arg: out.arg,
        lower_trend: out
            .lower_trend
            .into_iter()
            .map(|e| EndpointProbe { value: -e.value, ..e })
            .collect(),
        upper_trend: out
            .upper_trend
            .into_iter()
            .map(|e| EndpointProbe { value: -e.value, ..e })
            .collect(),
        possibly_unbounded: out.possibly_unbounded,
        evaluations: out.evaluations,
    })
}
