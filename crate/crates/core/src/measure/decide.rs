//! Final classification: closed-form fast path first, then the Carleson
//! scans, with `Inconclusive` whenever the numeric evidence disagrees with
//! itself or with the thresholds.

use serde::{Deserialize, Serialize};

use super::scan::{
    band_sup, true_vanishing_test, BandSup, SearchConfig, SupEstimate, TrueVanishing, VanishingOutcome, WindowTable,
};
use super::{LineMeasure, Mass};
use crate::symbols::{
    classify_fast_path, interpolation_worst_node, self_map_check, Classification, FastPath, FastPathTag, MonomialSpec,
    SymbolPair,
};

/// Interpolation nodes `n < INTERPOLATION_NODES` checked against `h(n+½)`.
pub const INTERPOLATION_NODES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// `sup Ψ` above this counts as unbounded evidence.
    pub bounded_max: f64,
    /// Band values over `|t| ∈ [T/2, T]` versus `[T/4, T/2]` above this ratio
    /// count as growth.
    pub tail_growth_max: f64,
    pub vanish_tol: f64,
    /// The vanishing test runs `r = 2⁻¹ … 2^{-r_min_exponent}`.
    pub r_min_exponent: u32,
    /// Relative tolerance on `|h(n+½) − conj(cₙ)|`.
    pub interpolation_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            bounded_max: 1e6,
            tail_growth_max: 1.5,
            vanish_tol: 1e-3,
            r_min_exponent: 12,
            interpolation_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    pub search: SearchConfig,
    pub thresholds: Thresholds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub fast_path: FastPath,
    /// Worst relative `|h(n+½) − conj(cₙ)|` and its node.
    pub interpolation: Option<(usize, f64)>,
    pub total_mass: Option<Mass>,
    pub carleson: Option<SupEstimate>,
    pub band: Option<BandSup>,
    pub vanishing: Option<TrueVanishing>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub class: Classification,
    pub evidence: Evidence,
}

const VANISHING_POLICY: &str = "vanishing is declared when the S_r suprema fall below vanish_tol by the smallest r and never increase; this decay rule is a policy choice";

pub fn decide(spec: &MonomialSpec, sym: &SymbolPair, settings: &Settings) -> Verdict {
    let th = &settings.thresholds;
    let fast = classify_fast_path(spec, sym);
    let mut ev = Evidence {
        fast_path: fast.clone(),
        interpolation: interpolation_worst_node(sym, spec, INTERPOLATION_NODES),
        total_mass: None,
        carleson: None,
        band: None,
        vanishing: None,
        notes: Vec::new(),
    };
    let verdict = |class, ev| Verdict { class, evidence: ev };

    if let Some((n, dev)) = ev.interpolation {
        if dev.is_nan() || dev > th.interpolation_tol {
            ev.notes.push(format!(
                "h does not interpolate the coefficients: relative deviation {dev:e} at n = {n}"
            ));
            return verdict(Classification::Inconclusive, ev);
        }
    }

    let measure = if self_map_check(sym) && sym.slope() > 0.0 {
        LineMeasure::from_symbols(sym).ok()
    } else {
        None
    };
    if let Some(m) = &measure {
        ev.total_mass = Some(m.total_mass());
        ev.band = Some(band_sup(m, &settings.search));
        let table = WindowTable::scan(m, &settings.search);
        let sup = table.sup_estimate(m, &settings.search);
        if sup.is_finite() {
            ev.vanishing = Some(true_vanishing_test(m, &table, th.vanish_tol, th.r_min_exponent));
            ev.notes.push(VANISHING_POLICY.into());
        }
        ev.carleson = Some(sup);
    }

    match fast {
        FastPath::Decided { class, .. } => {
            if class == Classification::Compact {
                if let Some(v) = &ev.vanishing {
                    if v.outcome == VanishingOutcome::NotVanishing {
                        ev.notes
                            .push("closed-form compactness contradicts the vanishing scan".into());
                        return verdict(Classification::Inconclusive, ev);
                    }
                }
            }
            verdict(class, ev)
        }
        FastPath::Defer {
            tag: FastPathTag::InterpolationOnly,
            ..
        } => {
            ev.notes
                .push("no closed-form weight h; the line measure cannot be formed".into());
            verdict(Classification::Inconclusive, ev)
        }
        FastPath::Defer {
            tag: FastPathTag::RankOneNumeric,
            ..
        } => {
            // W f = h·f(β): bounded iff compact iff h ∈ H², read off ∫|h(iy)|².
            let h = sym.closed_weight().expect("closed weight");
            let mass = LineMeasure::new(1.0, 0.0, h).map(|m| m.total_mass_quadrature());
            let class = match mass {
                Ok(Mass::Finite { value }) if value.is_finite() => Classification::Compact,
                Ok(Mass::Divergent { .. }) => Classification::Unbounded,
                _ => Classification::Inconclusive,
            };
            ev.total_mass = mass.ok();
            verdict(class, ev)
        }
        FastPath::Defer { compact_excluded, .. } => {
            let (Some(sup), Some(band)) = (&ev.carleson, &ev.band) else {
                ev.notes.push("line measure unavailable".into());
                return verdict(Classification::Inconclusive, ev);
            };
            let divergent = !sup.is_finite() || !band.sup.is_finite();
            let large = sup.sup > th.bounded_max || band.sup > th.bounded_max;
            let growing = band.tail.growth_ratio > th.tail_growth_max;
            if divergent || (large && growing) {
                return verdict(Classification::Unbounded, ev);
            }
            if large || growing {
                ev.notes.push(format!(
                    "boundedness evidence conflicts: sup {} vs bound {}, tail growth {} vs {}",
                    sup.sup, th.bounded_max, band.tail.growth_ratio, th.tail_growth_max
                ));
                return verdict(Classification::Inconclusive, ev);
            }
            let outcome = ev.vanishing.as_ref().map(|v| v.outcome);
            let class = match (compact_excluded, outcome) {
                (true, Some(VanishingOutcome::Vanishing)) => {
                    ev.notes
                        .push("a measure on the boundary axis cannot vanish, yet the scan says it does".into());
                    Classification::Inconclusive
                }
                (true, _) => Classification::BoundedNotCompact,
                (false, Some(VanishingOutcome::Vanishing)) => Classification::Compact,
                (false, Some(VanishingOutcome::NotVanishing)) => Classification::BoundedNotCompact,
                (false, _) => Classification::Inconclusive,
            };
            verdict(class, ev)
        }
    }
}
