//! Certified check that a protrusive ordering of six planar points is not
//! realisable: the outer triangle's distance sum never drops below the
//! inner one's.
//!
//! The outer points are `2e(θ)` and the inner ones `−1.1e(θ)` for
//! `θ ∈ {π/2, 7π/6, 11π/6}`. Every coordinate has the form `r√3` or `r`
//! with `r` rational.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::ser_rational;
use crate::scalar::{int, rat, BigInterval, Interval, Rational};

/// `(x / √3, y)` for the outer points followed by the inner points.
fn coefficients() -> [(Rational, Rational); 6] {
    [
        (int(0), int(2)),
        (int(-1), int(-1)),
        (int(1), int(-1)),
        (int(0), rat(-11, 10)),
        (rat(11, 20), rat(11, 20)),
        (rat(-11, 20), rat(11, 20)),
    ]
}

/// Enclosures of the six points, outer triangle first.
pub fn six_point_config() -> [[Interval; 2]; 6] {
    let s3 = Interval::from_rational(&int(3)).sqrt().expect("positive");
    coefficients().map(|(xr, y)| [Interval::from_rational(&xr) * s3, Interval::from_rational(&y)])
}

fn f_f64(cfg: &[[Interval; 2]; 6], x: Interval, y: Interval) -> Interval {
    let mut f = Interval::point(0.0);
    for (i, [cx, cy]) in cfg.iter().enumerate() {
        let d = ((x - *cx).square() + (y - *cy).square()).sqrt().expect("nonnegative");
        f = if i < 3 { f + d } else { f - d };
    }
    f
}

fn f_big(x: &Rational, y: &Rational, bits: u32) -> Result<BigInterval> {
    let s3 = BigInterval::sqrt_rational(&int(3), bits)?;
    let vx = BigInterval::from_rational(x, bits);
    let vy = BigInterval::from_rational(y, bits);
    let mut f = BigInterval::zero(bits);
    for (i, (xr, yr)) in coefficients().iter().enumerate() {
        let dx = vx.clone() - s3.scale(xr);
        let dy = vy.clone() - BigInterval::from_rational(yr, bits);
        let d = (dx.clone() * dx + dy.clone() * dy).sqrt()?;
        f = if i < 3 { f + d } else { f - d };
    }
    Ok(f)
}

/// Enclosure of `Σ‖v − cᵢ‖ − Σ‖v − c′ᵢ‖` at `v = (x, y)`.
pub fn six_point_f(x: &Rational, y: &Rational) -> Interval {
    f_f64(&six_point_config(), Interval::from_rational(x), Interval::from_rational(y))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SixPointReport {
    /// Radius beyond which the far-field estimate is used.
    #[serde(serialize_with = "ser_rational")]
    pub far_threshold: Rational,
    /// Smallest radius for which the far-field inequality holds beyond it.
    #[serde(serialize_with = "ser_rational")]
    pub far_cutoff: Rational,
    pub far_field_ok: bool,
    #[serde(serialize_with = "ser_rational")]
    pub grid_step: Rational,
    pub grid_side: usize,
    #[serde(serialize_with = "ser_rational")]
    pub grid_threshold: Rational,
    pub grid_min: [f64; 2],
    pub grid_min_at: [f64; 2],
    pub escalated_cells: usize,
    pub grid_ok: bool,
    pub lipschitz: u32,
    /// Certified lower bound on `f` over the disc inside the threshold.
    pub bound: f64,
    #[serde(serialize_with = "ser_rational")]
    pub required_bound: Rational,
    pub lipschitz_ok: bool,
    pub pass: bool,
    pub failure: Option<String>,
}

const HALF_WIDTH: (i64, i64) = (5, 2);

/// Runs the three stages. The grid covers `[−5/2, 5/2]²`, so
/// `far_threshold` may not exceed `5/2`.
pub fn verify_six_point(grid_step: &Rational, far_threshold: &Rational) -> Result<SixPointReport> {
    let half = rat(HALF_WIDTH.0, HALF_WIDTH.1);
    if grid_step <= &int(0) {
        return Err(Error::Domain("grid step must be positive".into()));
    }
    let cells = &(&half * int(2)) / grid_step;
    if !cells.is_integer() {
        return Err(Error::Domain(format!("grid step must divide 5, got {grid_step}")));
    }
    let n = usize::try_from(cells.to_integer()).map_err(|_| Error::Guard("grid too large".into()))?;
    if n > 20_000 {
        return Err(Error::Guard(format!("{} grid points per side", n + 1)));
    }
    if far_threshold > &half {
        return Err(Error::Domain(format!("far threshold {far_threshold} exceeds the grid half-width 5/2")));
    }
    let mut failure = None;

    // (‖v‖ + 2)/(‖v‖ − 11/10) decreases for ‖v‖ > 11/10 and equals 4/1.21
    // at ‖v‖ = 22/9.
    let far_cutoff = rat(22, 9);
    let ratio_ok = |t: &Rational| t > &rat(11, 10) && (t + int(2)) / (t - rat(11, 10)) <= int(4) / rat(121, 100);
    let far_field_ok = ratio_ok(far_threshold);
    if !far_field_ok {
        failure = Some(format!("far-field inequality fails at radius {far_threshold}"));
    }

    let threshold = rat(35, 100);
    let thr_f64 = Interval::from_rational(&threshold).hi();
    let cfg = six_point_config();
    let coord = |i: usize| -&half + grid_step * Rational::from_integer(i.into());
    let xs: Vec<Rational> = (0..=n).map(coord).collect();
    let xi: Vec<Interval> = xs.iter().map(Interval::from_rational).collect();

    // Per row: (min enclosure, its column, escalations, first failing column).
    let rows: Vec<Result<(Interval, usize, usize, Option<usize>)>> = (0..=n)
        .into_par_iter()
        .map(|r| {
            let mut best: Option<(Interval, usize)> = None;
            let mut escalated = 0;
            let mut bad = None;
            for c in 0..=n {
                let mut v = f_f64(&cfg, xi[c], xi[r]);
                if v.lo() <= thr_f64 {
                    escalated += 1;
                    let big = [128u32, 256]
                        .iter()
                        .map(|&b| f_big(&xs[c], &xs[r], b))
                        .find(|e| e.as_ref().map_or(true, |e| e.lo_rational() > threshold));
                    match big {
                        Some(Ok(e)) => v = e.to_interval(),
                        Some(Err(e)) => return Err(e),
                        None => {
                            bad.get_or_insert(c);
                        }
                    }
                }
                if best.is_none_or(|(b, _)| v.lo() < b.lo()) {
                    best = Some((v, c));
                }
            }
            let (b, c) = best.unwrap();
            Ok((b, c, escalated, bad))
        })
        .collect();
    let mut grid_min = Interval::point(f64::INFINITY);
    let mut grid_min_at = [0.0; 2];
    let mut escalated_cells = 0;
    let mut grid_ok = true;
    for (r, row) in rows.into_iter().enumerate() {
        let (v, c, esc, bad) = row?;
        escalated_cells += esc;
        if v.lo() < grid_min.lo() {
            grid_min = v;
            grid_min_at = [xi[c].mid(), xi[r].mid()];
        }
        if let Some(c) = bad {
            if grid_ok {
                grid_ok = false;
                failure.get_or_insert_with(|| {
                    format!("f ≤ 0.35 not excluded at ({}, {})", xs[c], xs[r])
                });
            }
        }
    }

    // Every point of the square is within step/√2 of the grid; f is
    // 6-Lipschitz, so f > 0.35 − 6·step/√2 = 0.35 − 3√2·step.
    let required_bound = rat(26, 100);
    let sqrt2_hi = BigInterval::sqrt_rational(&int(2), 64)?.hi_rational();
    let bound_lo = &threshold - int(3) * grid_step * sqrt2_hi;
    let lipschitz_ok = bound_lo > required_bound;
    if !lipschitz_ok {
        failure.get_or_insert_with(|| "Lipschitz slack exceeds the grid margin".into());
    }
    Ok(SixPointReport {
        far_threshold: far_threshold.clone(),
        far_cutoff,
        far_field_ok,
        grid_step: grid_step.clone(),
        grid_side: n + 1,
        grid_threshold: threshold,
        grid_min: [grid_min.lo(), grid_min.hi()],
        grid_min_at,
        escalated_cells,
        grid_ok,
        lipschitz: 6,
        bound: Interval::from_rational(&bound_lo).lo(),
        required_bound,
        lipschitz_ok,
        pass: far_field_ok && grid_ok && lipschitz_ok,
        failure,
    })
}
