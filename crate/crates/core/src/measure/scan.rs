//! Window scans over `(t, L)`: Carleson suprema, unit-band suprema and the
//! naive and true vanishing tests.
//!
//! Grids are fixed (linear near the origin, geometric with a power-of-two
//! number of points per octave beyond), windows are evaluated in parallel
//! and reduced by max in grid order, so results do not depend on the
//! number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LineMeasure, Mass};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub t_max: f64,
    pub l_min: f64,
    pub l_max: f64,
    /// Half-width of the linearly spaced part of the `t` grid.
    pub linear_span: f64,
    pub linear_step: f64,
    /// Geometric grid density in points per octave.
    pub per_octave: u32,
    /// Density of the coarser grid used for CSV window profiles.
    pub profile_per_octave: u32,
    /// Alternating golden-section passes around the best grid window.
    pub refine_rounds: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            t_max: 65536.0,
            l_min: 2f64.powi(-20),
            l_max: 65536.0,
            linear_span: 4.0,
            linear_step: 1.0 / 32.0,
            per_octave: 8,
            profile_per_octave: 2,
            refine_rounds: 2,
        }
    }
}

/// Carleson window with centre `L + i·t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub t: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

fn geometric(start: f64, end: f64, per_octave: u32) -> Vec<f64> {
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let v = start * 2f64.powf(j as f64 / per_octave as f64);
        if v > end * (1.0 + 1e-12) {
            break;
        }
        out.push(v);
        j += 1;
    }
    out
}

pub(crate) fn t_grid(search: &SearchConfig, step: f64, per_octave: u32) -> Vec<f64> {
    let span = search.linear_span.min(search.t_max);
    let n = (span / step).round() as i64;
    let mut out: Vec<f64> = (-n..=n).map(|k| k as f64 * step).collect();
    let far: Vec<f64> = geometric(span, search.t_max, per_octave).into_iter().skip(1).collect();
    out.extend(far.iter().copied());
    out.extend(far.iter().map(|v| -v));
    out.sort_by(f64::total_cmp);
    out
}

pub(crate) fn l_grid(m: &LineMeasure, search: &SearchConfig, per_octave: u32) -> Vec<f64> {
    let lo = (m.abscissa() / 2.0).max(search.l_min);
    geometric(lo, search.l_max, per_octave)
}

/// `Ψ` on the full scan grid.
#[derive(Clone, Debug)]
pub struct WindowTable {
    pub ts: Vec<f64>,
    pub ls: Vec<f64>,
    /// Row-major: index `i·ls.len() + j` holds window `(ts[i], ls[j])`.
    pub masses: Vec<Mass>,
}

impl WindowTable {
    pub fn scan(m: &LineMeasure, search: &SearchConfig) -> Self {
        Self::scan_grid(
            m,
            t_grid(search, search.linear_step, search.per_octave),
            l_grid(m, search, search.per_octave),
        )
    }

    fn scan_grid(m: &LineMeasure, ts: Vec<f64>, ls: Vec<f64>) -> Self {
        let nl = ls.len();
        let masses = (0..ts.len() * nl)
            .into_par_iter()
            .map(|k| m.window_mass(ts[k / nl], ls[k % nl]))
            .collect();
        WindowTable { ts, ls, masses }
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn window(&self, k: usize) -> Window {
        let nl = self.ls.len();
        Window {
            t: self.ts[k / nl],
            l: self.ls[k % nl],
        }
    }

    pub fn ratio(&self, k: usize) -> f64 {
        self.masses[k].value() / (2.0 * self.window(k).l)
    }

    /// First divergent window in grid order.
    pub fn first_divergent(&self) -> Option<(Window, Option<f64>)> {
        self.masses.iter().enumerate().find_map(|(k, m)| match m {
            Mass::Divergent { near } => Some((self.window(k), *near)),
            _ => None,
        })
    }

    /// Largest ratio among windows accepted by `keep`, first index on ties.
    fn argmax(&self, keep: impl Fn(Window) -> bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for k in 0..self.len() {
            if !keep(self.window(k)) {
                continue;
            }
            let r = self.ratio(k);
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((k, r));
            }
        }
        best
    }

    pub fn sup_estimate(&self, m: &LineMeasure, search: &SearchConfig) -> SupEstimate {
        let tail_limit = m.axis_limit().map(|l| l * l / m.slope());
        if let Some((w, near)) = self.first_divergent() {
            return SupEstimate {
                sup: f64::INFINITY,
                argmax: w,
                grid_sup: f64::INFINITY,
                divergent_near: near,
                tail_limit,
                windows: self.len(),
            };
        }
        let (k, grid_sup) = self.argmax(|_| true).unwrap_or((0, 0.0));
        let mut best = (self.window(k), grid_sup);
        if grid_sup > 0.0 && search.refine_rounds > 0 {
            best = refine(m, self, k, search.refine_rounds);
        }
        let mut sup = best.1.max(grid_sup);
        if let Some(tl) = tail_limit {
            sup = sup.max(tl);
        }
        SupEstimate {
            sup,
            argmax: best.0,
            grid_sup,
            divergent_near: None,
            tail_limit,
            windows: self.len(),
        }
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn neighbours(grid: &[f64], v: f64) -> (f64, f64) {
    let i = grid.partition_point(|&g| g < v);
    let lo = if i > 0 { grid[i - 1] } else { v };
    let hi = grid.get(i + 1).copied().unwrap_or(v);
    (lo, hi)
}

fn refine(m: &LineMeasure, table: &WindowTable, k: usize, rounds: u32) -> (Window, f64) {
    let start = table.window(k);
    let mut best = (start, table.ratio(k));
    let (t_lo, t_hi) = neighbours(&table.ts, start.t);
    let (l_lo, l_hi) = neighbours(&table.ls, start.l);
    for _ in 0..rounds {
        let l = best.0.l;
        let (t, v) = golden_max(|t| m.window_ratio(t, l), t_lo, t_hi);
        if v > best.1 {
            best = (Window { t, l }, v);
        }
        let t = best.0.t;
        let (ll, v) = golden_max(|x| m.window_ratio(t, x.exp()), l_lo.ln(), l_hi.ln());
        if v > best.1 {
            best = (Window { t, l: ll.exp() }, v);
        }
    }
    best
}

/// Estimate of `sup Ψ` over the search box and the analytic tails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupEstimate {
    /// `+∞` (serialized as `null`) when some window is divergent.
    pub sup: f64,
    pub argmax: Window,
    pub grid_sup: f64,
    pub divergent_near: Option<f64>,
    /// `ℓ²/a` with `ℓ = lim |h(iy)|`, for rational `h`.
    pub tail_limit: Option<f64>,
    pub windows: usize,
}

impl SupEstimate {
    pub fn is_finite(&self) -> bool {
        self.sup.is_finite()
    }
}

pub fn carleson_sup_estimate(m: &LineMeasure, search: &SearchConfig) -> SupEstimate {
    WindowTable::scan(m, search).sup_estimate(m, search)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailSummary {
    /// Largest band value with `|t| ∈ [T/4, T/2]`.
    pub inner_max: f64,
    /// Largest band value with `|t| ∈ [T/2, T]`.
    pub outer_max: f64,
    pub growth_ratio: f64,
}

/// `sup_t ∫_t^{t+1} |h(iy)|² dy` over `|t| ≤ T_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandSup {
    pub sup: f64,
    pub argmax_t: f64,
    pub divergent_near: Option<f64>,
    pub tail: TailSummary,
}

pub fn band_sup(m: &LineMeasure, search: &SearchConfig) -> BandSup {
    let ts = t_grid(search, search.linear_step, search.per_octave);
    let values: Vec<Mass> = ts.par_iter().map(|&t| m.axis_mass(t, t + 1.0)).collect();
    let tmax = search.t_max;
    let band_max = |lo: f64, hi: f64| {
        ts.iter()
            .zip(&values)
            .filter(|(t, _)| t.abs() >= lo && t.abs() <= hi)
            .map(|(_, v)| v.value())
            .fold(0.0, f64::max)
    };
    let inner = band_max(tmax / 4.0, tmax / 2.0);
    let outer = band_max(tmax / 2.0, tmax);
    let growth_ratio = if inner > 0.0 {
        outer / inner
    } else if outer > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    let tail = TailSummary {
        inner_max: inner,
        outer_max: outer,
        growth_ratio,
    };
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_divergent()) {
        let near = match v {
            Mass::Divergent { near } => *near,
            _ => None,
        };
        return BandSup {
            sup: f64::INFINITY,
            argmax_t: ts[i],
            divergent_near: near,
            tail,
        };
    }
    let mut k = 0;
    for (i, v) in values.iter().enumerate() {
        if v.value() > values[k].value() {
            k = i;
        }
    }
    let mut best = (ts[k], values[k].value());
    if best.1 > 0.0 && search.refine_rounds > 0 {
        let (lo, hi) = neighbours(&ts, ts[k]);
        let (t, v) = golden_max(|t| m.axis_mass(t, t + 1.0).value(), lo, hi);
        if v > best.1 {
            best = (t, v);
        }
    }
    BandSup {
        sup: best.1,
        argmax_t: best.0,
        divergent_near: None,
        tail,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LevelSup {
    #[serde(rename = "L")]
    pub l: f64,
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaiveVanishing {
    pub vanishing: bool,
    pub trace: Vec<LevelSup>,
}

/// `sup_t Ψ(t, L)` for `L = 2⁻¹, 2⁻², …` down to the grid's `L_min`.
/// Small squares alone do not decide compactness; this test exists to
/// show exactly that.
pub fn naive_vanishing_test(m: &LineMeasure, search: &SearchConfig, tol: f64) -> NaiveVanishing {
    let ts = t_grid(search, search.linear_step, search.per_octave);
    let mut trace = Vec::new();
    let mut l = 0.5;
    while l >= search.l_min {
        let sup = ts
            .par_iter()
            .map(|&t| m.window_ratio(t, l))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max);
        trace.push(LevelSup { l, sup });
        l *= 0.5;
    }
    let vanishing = trace.last().is_some_and(|s| s.sup <= tol);
    NaiveVanishing { vanishing, trace }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Centre in the strip `0 < Re z < r`.
    Strip,
    /// Centre outside the semicircle `|z| > 1/r`.
    Far,
    /// The limit `|t| → ∞` of `Ψ`, which lies in every far region.
    FarTail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub branch: Branch,
    /// Absent for [`Branch::FarTail`].
    pub window: Option<Window>,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingStep {
    pub r: f64,
    pub sup: f64,
    pub strip_sup: f64,
    pub far_sup: f64,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingOutcome {
    Vanishing,
    NotVanishing,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrueVanishing {
    pub outcome: VanishingOutcome,
    pub trace: Vec<VanishingStep>,
    pub witness: Option<Witness>,
    pub tol: f64,
}

/// Sup of `Ψ` over windows centred in `S_r = {0 < Re z < r} ∪ {|z| > 1/r}`
/// for `r = 2⁻¹, …, 2^{-r_min_exponent}`.
///
/// Vanishing: the last sup is below `tol` and the sequence never increases.
/// Not vanishing: the last sup is at least `tol` and has not halved over the
/// last two halvings of `r`. Anything else is undetermined.
pub fn true_vanishing_test(m: &LineMeasure, table: &WindowTable, tol: f64, r_min_exponent: u32) -> TrueVanishing {
    let tail = m.axis_limit().map(|l| l * l / m.slope());
    let ratios: Vec<f64> = (0..table.len()).map(|k| table.ratio(k)).collect();
    let mut trace = Vec::new();
    for e in 1..=r_min_exponent.max(1) {
        let r = 2f64.powi(-(e as i32));
        let mut strip: Option<(usize, f64)> = None;
        let mut far: Option<(usize, f64)> = None;
        for (k, &v) in ratios.iter().enumerate() {
            let w = table.window(k);
            if w.l < r && strip.is_none_or(|(_, b)| v > b) {
                strip = Some((k, v));
            }
            if w.l.hypot(w.t) > 1.0 / r && far.is_none_or(|(_, b)| v > b) {
                far = Some((k, v));
            }
        }
        let mk = |branch, hit: Option<(usize, f64)>| {
            hit.map(|(k, v)| Witness {
                branch,
                window: Some(table.window(k)),
                ratio: v,
            })
        };
        let mut far_w = mk(Branch::Far, far);
        if let Some(tl) = tail {
            if far_w.is_none_or(|w| tl > w.ratio) {
                far_w = Some(Witness {
                    branch: Branch::FarTail,
                    window: None,
                    ratio: tl,
                });
            }
        }
        let strip_w = mk(Branch::Strip, strip);
        let strip_sup = strip_w.map_or(0.0, |w| w.ratio);
        let far_sup = far_w.map_or(0.0, |w| w.ratio);
        let witness = if strip_sup >= far_sup && strip_w.is_some() {
            strip_w
        } else {
            far_w
        };
        trace.push(VanishingStep {
            r,
            sup: strip_sup.max(far_sup),
            strip_sup,
            far_sup,
            witness,
        });
    }
    let sups: Vec<f64> = trace.iter().map(|s| s.sup).collect();
    let last = *sups.last().unwrap();
    let monotone = sups.windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-9) + 1e-15);
    let earlier = sups[sups.len().saturating_sub(3)];
    let outcome = if !last.is_finite() {
        VanishingOutcome::NotVanishing
    } else if last < tol && monotone {
        VanishingOutcome::Vanishing
    } else if last >= tol && last >= 0.5 * earlier {
        VanishingOutcome::NotVanishing
    } else {
        VanishingOutcome::Undetermined
    };
    let witness = match outcome {
        VanishingOutcome::Vanishing => None,
        _ => trace.last().and_then(|s| s.witness),
    };
    TrueVanishing {
        outcome,
        trace,
        witness,
        tol,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowRow {
    pub t: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub mass: f64,
    pub ratio: f64,
}

/// `(t, L) ↦ (μ(Q), Ψ)` on the coarse profile grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowProfile {
    pub rows: Vec<WindowRow>,
}

impl WindowProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,L,mass,ratio\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.t, r.l, r.mass, r.ratio));
        }
        out
    }
}

pub fn window_profile(m: &LineMeasure, search: &SearchConfig) -> WindowProfile {
    let per = search.profile_per_octave.max(1);
    let ts = t_grid(
        search,
        (search.linear_step * 8.0).min(search.linear_span.max(1e-3)),
        per,
    );
    let ls = l_grid(m, search, per);
    let table = WindowTable::scan_grid(m, ts, ls);
    let rows = (0..table.len())
        .map(|k| {
            let w = table.window(k);
            WindowRow {
                t: w.t,
                l: w.l,
                mass: table.masses[k].value(),
                ratio: table.ratio(k),
            }
        })
        .collect();
    WindowProfile { rows }
}
