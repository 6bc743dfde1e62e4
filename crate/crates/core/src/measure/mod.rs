//! The pull-back measure of an affine weighted composition operator and the
//! Carleson tests run on it.
//!
//! With `φ(s) = a·s + β` the measure `μ(E) = ∫_{φ⁻¹(E)∩iℝ} |h|² |ds|` lives
//! on the line `Re z = β`: the point `β + i·a·y` carries density `|h(iy)|²`.
//! A Carleson square `Q = [0, 2L] × [t−L, t+L]` therefore has mass
//! `∫_{(t−L)/a}^{(t+L)/a} |h(iy)|² dy` when `2L ≥ β` and none otherwise.

mod closed_form;
mod decide;
mod dyadic;
mod scan;

use std::cell::Cell;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{ComplexExpr, EvalError, RationalSymbol};
use crate::poly::{roots, Poly};
use crate::quad::{Integrator, QuadError};
use crate::symbols::SymbolPair;
use crate::Complex64;

use closed_form::ClosedForm;

pub use decide::{decide, Evidence, Settings, Thresholds, Verdict};
pub use dyadic::{dyadic_box_estimate, pushforward_samples, DyadicEstimate};
pub use scan::{
    band_sup, carleson_sup_estimate, naive_vanishing_test, true_vanishing_test, window_profile, BandSup, Branch,
    NaiveVanishing, SearchConfig, SupEstimate, TailSummary, TrueVanishing, VanishingOutcome, VanishingStep, Window,
    WindowProfile, WindowRow, WindowTable, Witness,
};

/// Distance below which a pole next to an integration range counts as inside it.
pub const POLE_PROXIMITY: f64 = 1e-6;

/// Mass of a window: finite, or divergent because of a pole of `h` on the
/// axis (`near` is `None` when the divergence comes from the tails).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mass {
    Finite { value: f64 },
    Divergent { near: Option<f64> },
}

impl Mass {
    pub fn zero() -> Self {
        Mass::Finite { value: 0.0 }
    }

    /// Numeric value, `+∞` when divergent.
    pub fn value(&self) -> f64 {
        match self {
            Mass::Finite { value } => *value,
            Mass::Divergent { .. } => f64::INFINITY,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Mass::Divergent { .. })
    }
}

#[derive(Clone, Debug)]
enum Density {
    Zero,
    Rational {
        p: Poly<Complex64>,
        q: Poly<Complex64>,
        closed: Option<ClosedForm>,
        /// `y` with `Q(iy) = 0`.
        axis_poles: Vec<f64>,
        /// `lim |h(iy)|` as `|y| → ∞`, `None` if unbounded.
        limit: Option<f64>,
    },
    General(ComplexExpr),
}

/// `μ` for `φ(s) = a·s + β`, `a > 0`, `β ≥ 0`.
#[derive(Clone, Debug)]
pub struct LineMeasure {
    slope: f64,
    abscissa: f64,
    weight: ComplexExpr,
    density: Density,
    quad: Integrator<f64>,
}

fn rational_density(r: &RationalSymbol) -> Density {
    if r.is_zero() {
        return Density::Zero;
    }
    let p = r.numerator_f64();
    let q = r.denominator_f64();
    let axis_poles = if r.denominator().has_root_on_imaginary_axis() {
        roots(&q)
            .into_iter()
            .filter(|z| z.re.abs() <= 1e-7 * (1.0 + z.norm()))
            .map(|z| z.im)
            .collect()
    } else {
        Vec::new()
    };
    let closed = if axis_poles.is_empty() {
        ClosedForm::new(&p, &q)
    } else {
        None
    };
    let (dp, dq) = (p.degree().unwrap_or(0), q.degree().unwrap_or(0));
    let limit = if dp < dq {
        Some(0.0)
    } else if dp == dq {
        Some((p.leading().unwrap() / q.leading().unwrap()).norm())
    } else {
        None
    };
    Density::Rational {
        p,
        q,
        closed,
        axis_poles,
        limit,
    }
}

impl LineMeasure {
    pub fn new(slope: f64, abscissa: f64, weight: &ComplexExpr) -> Result<Self> {
        if !(slope > 0.0 && slope.is_finite()) {
            return Err(Error::InvalidSpec(format!("line measure needs a > 0, got {slope}")));
        }
        if !(abscissa >= 0.0 && abscissa.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "line measure needs beta >= 0, got {abscissa}"
            )));
        }
        let density = match weight.as_rational() {
            Ok(r) => rational_density(&r),
            Err(_) => Density::General(weight.clone()),
        };
        Ok(LineMeasure {
            slope,
            abscissa,
            weight: weight.clone(),
            density,
            quad: Integrator::default(),
        })
    }

    pub fn from_symbols(sym: &SymbolPair) -> Result<Self> {
        let h = sym
            .closed_weight()
            .ok_or_else(|| Error::InvalidSpec("no closed-form weight h".into()))?;
        Self::new(sym.slope(), sym.intercept(), h)
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    pub fn weight(&self) -> &ComplexExpr {
        &self.weight
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self.density, Density::General(_))
    }

    pub fn has_closed_form(&self) -> bool {
        match &self.density {
            Density::Zero => true,
            Density::Rational { closed, .. } => closed.is_some(),
            Density::General(_) => false,
        }
    }

    /// Poles of `h` on the imaginary axis, as `y` with `s = iy`.
    pub fn axis_poles(&self) -> &[f64] {
        match &self.density {
            Density::Rational { axis_poles, .. } => axis_poles,
            _ => &[],
        }
    }

    /// `lim_{|y|→∞} |h(iy)|` for rational `h`.
    pub fn axis_limit(&self) -> Option<f64> {
        match &self.density {
            Density::Zero => Some(0.0),
            Density::Rational { limit, .. } => *limit,
            Density::General(_) => None,
        }
    }

    /// `|h(iy)|²`.
    pub fn density(&self, y: f64) -> std::result::Result<f64, EvalError> {
        let s = Complex64::new(0.0, y);
        match &self.density {
            Density::Zero => Ok(0.0),
            Density::Rational { p, q, .. } => {
                let den = q.eval(&s);
                if den.norm() < crate::expr::POLE_MODULUS {
                    return Err(EvalError::Pole { point: Some(s) });
                }
                Ok((p.eval(&s) / den).norm_sqr())
            }
            Density::General(e) => e.eval(s).map(|v| v.norm_sqr()),
        }
    }

    fn pole_near(&self, y1: f64, y2: f64) -> Option<f64> {
        self.axis_poles()
            .iter()
            .copied()
            .find(|&y| y >= y1 - POLE_PROXIMITY && y <= y2 + POLE_PROXIMITY)
    }

    /// `∫_{y1}^{y2} |h(iy)|² dy` by the closed form when available.
    pub fn axis_mass(&self, y1: f64, y2: f64) -> Mass {
        self.axis_mass_with_width(y1, y2, y2 - y1)
    }

    fn axis_mass_with_width(&self, y1: f64, y2: f64, width: f64) -> Mass {
        if let Density::Zero = self.density {
            return Mass::zero();
        }
        if let Some(y) = self.pole_near(y1, y2) {
            return Mass::Divergent { near: Some(y) };
        }
        match self.closed(y1, y2, width) {
            Some(m) => m,
            None => self.axis_mass_quadrature(y1, y2),
        }
    }

    fn closed(&self, y1: f64, y2: f64, width: f64) -> Option<Mass> {
        match &self.density {
            Density::Zero => Some(Mass::zero()),
            Density::Rational { closed: Some(cf), .. } => Some(Mass::Finite {
                value: cf.window(y1, y2, width),
            }),
            _ => None,
        }
    }

    /// Closed-form route, `None` when `h` is not rational of denominator degree ≤ 2.
    pub fn axis_mass_closed(&self, y1: f64, y2: f64) -> Option<Mass> {
        self.closed(y1, y2, y2 - y1)
    }

    /// Adaptive quadrature route.
    pub fn axis_mass_quadrature(&self, y1: f64, y2: f64) -> Mass {
        if let Some(y) = self.pole_near(y1, y2) {
            return Mass::Divergent { near: Some(y) };
        }
        let pole = Cell::new(None);
        let r = self.quad.integrate(
            |y: f64| match self.density(y) {
                Ok(v) => v,
                Err(_) => {
                    if pole.get().is_none() {
                        pole.set(Some(y));
                    }
                    0.0
                }
            },
            y1,
            y2,
        );
        self.finish(r, pole.get())
    }

    fn finish(
        &self,
        r: std::result::Result<crate::quad::QuadResult<f64, f64>, QuadError<f64>>,
        pole: Option<f64>,
    ) -> Mass {
        if let Some(y) = pole {
            return Mass::Divergent { near: Some(y) };
        }
        match r {
            Ok(res) => Mass::Finite { value: res.value },
            Err(QuadError::NonFinite { at }) => Mass::Divergent { near: Some(at) },
        }
    }

    /// `μ(Q)` for the Carleson square with centre `L + i·t`.
    pub fn window_mass(&self, t: f64, half_length: f64) -> Mass {
        if half_length.is_nan() || half_length <= 0.0 || 2.0 * half_length < self.abscissa {
            return Mass::zero();
        }
        let a = self.slope;
        self.axis_mass_with_width((t - half_length) / a, (t + half_length) / a, 2.0 * half_length / a)
    }

    /// `Ψ(t, L) = μ(Q)/(2L)`.
    pub fn window_ratio(&self, t: f64, half_length: f64) -> f64 {
        self.window_mass(t, half_length).value() / (2.0 * half_length)
    }

    /// `∫_ℝ |h(iy)|² dy`.
    pub fn total_mass(&self) -> Mass {
        match &self.density {
            Density::Zero => Mass::zero(),
            Density::Rational {
                axis_poles,
                limit,
                closed,
                ..
            } => {
                if let Some(y) = axis_poles.first() {
                    return Mass::Divergent { near: Some(*y) };
                }
                if *limit != Some(0.0) {
                    return Mass::Divergent { near: None };
                }
                match closed.as_ref().and_then(|c| c.total()) {
                    Some(v) => Mass::Finite { value: v },
                    None => self.total_mass_quadrature(),
                }
            }
            Density::General(_) => self.total_mass_quadrature(),
        }
    }

    /// `∫_ℝ |h(iy)|² dy` by quadrature over the compactified line.
    pub fn total_mass_quadrature(&self) -> Mass {
        if let Some(y) = self.axis_poles().first() {
            return Mass::Divergent { near: Some(*y) };
        }
        let pole = Cell::new(None);
        let r = self.quad.integrate_real_line(|y: f64| match self.density(y) {
            Ok(v) => v,
            Err(_) => {
                if pole.get().is_none() {
                    pole.set(Some(y));
                }
                0.0
            }
        });
        match r {
            Ok(res) if !res.converged && res.value > 1e12 => Mass::Divergent { near: None },
            _ => self.finish(r, pole.get()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn line(a: f64, beta: f64, h: &str) -> LineMeasure {
        LineMeasure::new(a, beta, &ComplexExpr::parse(h, "s").unwrap()).unwrap()
    }

    #[test]
    fn shift_windows() {
        let m = line(1.0, 1.0, "1");
        assert_eq!(m.window_mass(0.0, 0.4), Mass::zero());
        assert_relative_eq!(m.window_mass(0.0, 1.0).value(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(m.window_ratio(17.0, 3.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn volterra_windows() {
        let m = line(1.0, 1.0, "1/(s+1/2)");
        assert!(m.has_closed_form());
        let w = m.window_mass(0.0, 1.0).value();
        assert!((w - 4.0 * 2f64.atan()).abs() < 1e-12);
        assert!((m.total_mass().value() - 2.0 * PI).abs() < 1e-12);
        assert!((m.total_mass_quadrature().value() - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn axis_pole_is_a_sentinel() {
        let m = line(2.0, 0.5, "1/(2*s)");
        assert_eq!(m.window_mass(0.0, 1.0), Mass::Divergent { near: Some(0.0) });
        // Window ending 1e-7 short of the pole still counts.
        assert!(m.axis_mass(-1.0, -1e-7).is_divergent());
        assert!(!m.axis_mass(-1.0, -1e-3).is_divergent());
        assert!(m.total_mass().is_divergent());
    }

    #[test]
    fn general_weight_uses_quadrature() {
        let m = line(1.0, 1.0, "s*exp(-s)");
        assert!(!m.is_rational());
        // |h(iy)|² = y².
        assert_relative_eq!(m.axis_mass(0.0, 3.0).value(), 9.0, max_relative = 1e-12);
    }

    #[test]
    fn double_pole_closed_form() {
        let m = line(1.0, 1.0, "1/(s+1)^2");
        // ∫ dy/(1+y²)² = π/2.
        assert!((m.total_mass().value() - PI / 2.0).abs() < 1e-12);
        let q = m.axis_mass_quadrature(-0.3, 2.5).value();
        let c = m.axis_mass_closed(-0.3, 2.5).unwrap().value();
        assert!((q - c).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_lines() {
        let h = ComplexExpr::parse("1", "s").unwrap();
        assert!(LineMeasure::new(0.0, 1.0, &h).is_err());
        assert!(LineMeasure::new(1.0, -0.5, &h).is_err());
    }

    const RATIONAL: &[&str] = &[
        "1/(s+1/2)",
        "1/(2*s+1)",
        "1",
        "(s+2)/(s+1)",
        "1/(s^2+s+1)",
        "(s-3*i)/(s^2 + 2*s + 5)",
        "1/(s+1)^2",
        "(3*s+i)/(s+2+i)",
    ];

    proptest! {
        #[test]
        fn closed_form_matches_quadrature(idx in 0..RATIONAL.len(), t in -50.0f64..50.0, l in 0.01f64..40.0) {
            let m = line(1.0, 0.0, RATIONAL[idx]);
            prop_assume!(m.has_closed_form());
            let q = m.axis_mass_quadrature(t - l, t + l).value();
            let c = m.axis_mass_closed(t - l, t + l).unwrap().value();
            prop_assert!((q - c).abs() <= 1e-8 * q.max(1e-3), "{} vs {}", q, c);
        }

        #[test]
        fn windows_grow_with_length(idx in 0..RATIONAL.len(), t in -20.0f64..20.0, l in 0.01f64..20.0, dl in 0.0f64..5.0) {
            let m = line(1.5, 0.25, RATIONAL[idx]);
            let small = m.window_mass(t, l).value();
            let big = m.window_mass(t, l + dl).value();
            prop_assert!(big >= small * (1.0 - 1e-12) - 1e-15);
        }

        #[test]
        fn zero_miss_rule(t in -100.0f64..100.0, frac in 0.0f64..0.999) {
            let m = line(1.0, 2.0, "1/(s+1)");
            prop_assert_eq!(m.window_mass(t, frac), Mass::zero());
        }
    }
}
