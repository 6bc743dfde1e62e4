//! Dyadic Carleson-box estimate for measures given by point samples.
//!
//! Used when `φ` is not affine: the axis is sampled, each sample `y` is
//! pushed to `φ(iy)` with weight `|h(iy)|²·Δy`, and the weights are summed
//! into boxes `[0, 2ᵏ] × [j·2ᵏ, (j+1)·2ᵏ)`. This is only an estimate; it
//! carries no convergence guarantee.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadicEstimate {
    /// Largest `mass/side` over all boxes.
    pub sup_ratio: f64,
    /// Level `k` and column `j` of the maximizing box.
    pub level: i32,
    pub column: i64,
    pub boxes: usize,
}

/// Samples `(φ(iy), |h(iy)|²·Δy)` at midpoints of `n` equal cells of
/// `[y_min, y_max]`. Fails on the first point mapped to `Re < 0`.
pub fn pushforward_samples(
    phi: impl Fn(f64) -> Complex64,
    density: impl Fn(f64) -> f64,
    y_min: f64,
    y_max: f64,
    n: usize,
) -> Result<Vec<(Complex64, f64)>> {
    let dy = (y_max - y_min) / n as f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let y = y_min + (i as f64 + 0.5) * dy;
        let z = phi(y);
        if z.re < 0.0 {
            return Err(Error::NotSelfMap { y, re: z.re });
        }
        out.push((z, density(y) * dy));
    }
    Ok(out)
}

/// Box sums for levels `top − depth ..= top`.
pub fn dyadic_box_estimate(samples: &[(Complex64, f64)], top: i32, depth: u32) -> Result<DyadicEstimate> {
    if let Some((z, _)) = samples.iter().find(|(z, _)| z.re < 0.0) {
        return Err(Error::NotSelfMap { y: z.im, re: z.re });
    }
    let mut best = DyadicEstimate {
        sup_ratio: 0.0,
        level: top,
        column: 0,
        boxes: 0,
    };
    for k in (top - depth as i32)..=top {
        let side = 2f64.powi(k);
        let mut boxes: BTreeMap<i64, f64> = BTreeMap::new();
        for (z, w) in samples {
            if z.re <= side {
                *boxes.entry((z.im / side).floor() as i64).or_insert(0.0) += w;
            }
        }
        best.boxes += boxes.len();
        for (j, mass) in boxes {
            let ratio = mass / side;
            if ratio > best.sup_ratio {
                best.sup_ratio = ratio;
                best.level = k;
                best.column = j;
            }
        }
    }
    Ok(best)
}
