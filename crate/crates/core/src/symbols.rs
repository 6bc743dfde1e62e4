//! Monomial-operator specs, their half-plane symbols `(h, φ)`, and the
//! closed-form classifications that settle a verdict without numerics.
//!
//! For `T xⁿ = cₙ x^{pₙ}` the adjoint of the transferred operator acts on
//! `H²(ℂ₊)` as `G ↦ h·(G∘φ)` with `φ(n+½) = pₙ + ½` and `h(n+½) = conj(cₙ)`.
//! With `pₙ = a·n + b` this forces `φ(s) = a·s + b + (1−a)/2`.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{ComplexExpr, EvalError, RationalSymbol, WideComplex};
use crate::poly::{cluster_roots, roots, ExactComplex};
use crate::Complex64;

/// Default number of coefficient probes, `n = 0..=DEFAULT_PROBE`.
pub const DEFAULT_PROBE: usize = 64;

/// Affine map `s ↦ slope·s + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineMap<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Clone + Num> AffineMap<T> {
    pub fn apply(&self, s: &T) -> T {
        self.slope.clone() * s.clone() + self.intercept.clone()
    }

    pub fn apply_complex(&self, s: &Complex<T>) -> Complex<T> {
        s.clone() * self.slope.clone() + Complex::new(self.intercept.clone(), T::zero())
    }
}

impl AffineMap<BigRational> {
    pub fn to_f64(&self) -> AffineMap<f64> {
        AffineMap {
            slope: crate::scalar::rational_to_f64(&self.slope),
            intercept: crate::scalar::rational_to_f64(&self.intercept),
        }
    }
}

/// Coefficient rule `n ↦ cₙ`.
#[derive(Clone, Debug)]
pub enum CoeffRule {
    Closed(ComplexExpr),
    /// Explicit leading values followed by a closed-form tail.
    Listed {
        head: Vec<ComplexExpr>,
        tail: ComplexExpr,
    },
}

impl CoeffRule {
    fn expr(&self, n: usize) -> &ComplexExpr {
        match self {
            CoeffRule::Closed(e) => e,
            CoeffRule::Listed { head, tail } => head.get(n).unwrap_or(tail),
        }
    }

    pub fn eval(&self, n: usize) -> std::result::Result<Complex64, EvalError> {
        self.expr(n).eval(Complex64::new(n as f64, 0.0))
    }

    /// Exact Gaussian-rational value; fails with `Unsupported` when the rule
    /// leaves the rationals.
    pub fn eval_exact(&self, n: usize) -> std::result::Result<ExactComplex, EvalError> {
        let z = Complex::new(BigRational::from_integer(n.into()), BigRational::zero());
        self.expr(n).eval_in(&z)
    }

    pub fn eval_wide<const BITS: usize>(&self, n: usize) -> std::result::Result<WideComplex<BITS>, EvalError> {
        self.expr(n).eval_in(&WideComplex::<BITS>::from_i64(n as i64))
    }

    pub fn describe(&self) -> String {
        match self {
            CoeffRule::Closed(e) => e.source().to_string(),
            CoeffRule::Listed { head, tail } => {
                let h: Vec<&str> = head.iter().map(|e| e.source()).collect();
                format!("[{}] then {}", h.join(", "), tail.source())
            }
        }
    }
}

/// JSON form of an operator spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    #[serde(default)]
    pub name: Option<String>,
    pub coeff_expr: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeff_head: Vec<String>,
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub h_expr: Option<String>,
}

/// `T xⁿ = cₙ x^{a·n+b}`.
#[derive(Clone, Debug)]
pub struct MonomialSpec {
    name: Option<String>,
    coeff: CoeffRule,
    slope: f64,
    intercept: f64,
    weight: Option<ComplexExpr>,
}

impl MonomialSpec {
    pub fn new(
        name: Option<String>,
        coeff: CoeffRule,
        a: f64,
        b: f64,
        weight: Option<ComplexExpr>,
        probe: usize,
    ) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "exponent slope a = {a} must be finite and >= 0"
            )));
        }
        if !b.is_finite() {
            return Err(Error::InvalidSpec(format!("exponent intercept b = {b} must be finite")));
        }
        if b <= -0.5 {
            return Err(Error::InvalidSpec(format!(
                "Re p_0 = {b} must exceed -1/2 for x^p_0 to lie in L2(0,1)"
            )));
        }
        for n in 0..=probe {
            match coeff.eval(n) {
                Ok(c) if c.re.is_finite() && c.im.is_finite() => {}
                Ok(_) => return Err(Error::InvalidSpec(format!("c_{n} is not finite"))),
                Err(e) => return Err(Error::InvalidSpec(format!("c_{n} cannot be evaluated: {e}"))),
            }
        }
        Ok(MonomialSpec {
            name,
            coeff,
            slope: a,
            intercept: b,
            weight,
        })
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        if doc.coeff_expr.trim().is_empty() {
            return Err(Error::InvalidSpec("empty coefficient rule".into()));
        }
        let tail = ComplexExpr::parse(&doc.coeff_expr, "n")?;
        let coeff = if doc.coeff_head.is_empty() {
            CoeffRule::Closed(tail)
        } else {
            let head = doc
                .coeff_head
                .iter()
                .map(|t| ComplexExpr::parse(t, "n"))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            CoeffRule::Listed { head, tail }
        };
        let weight = match &doc.h_expr {
            Some(t) if !t.trim().is_empty() => Some(ComplexExpr::parse(t, "s")?),
            _ => None,
        };
        Self::new(doc.name.clone(), coeff, doc.a, doc.b, weight, DEFAULT_PROBE)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn coeff_rule(&self) -> &CoeffRule {
        &self.coeff
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn weight(&self) -> Option<&ComplexExpr> {
        self.weight.as_ref()
    }

    pub fn is_flat(&self) -> bool {
        self.slope == 1.0
    }

    pub fn coefficient(&self, n: usize) -> std::result::Result<Complex64, EvalError> {
        self.coeff.eval(n)
    }

    /// `pₙ = a·n + b`.
    pub fn exponent(&self, n: usize) -> f64 {
        self.slope * n as f64 + self.intercept
    }

    /// `pₙ` exactly, from the binary values of `a` and `b`.
    pub fn exponent_exact(&self, n: usize) -> BigRational {
        exact(self.slope) * BigRational::from_integer(n.into()) + exact(self.intercept)
    }
}

pub(crate) fn exact(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite")
}

/// Half-plane weight: a closed form, or only its values at the nodes `n+½`.
#[derive(Clone, Debug)]
pub enum Weight {
    Closed(ComplexExpr),
    InterpolationOnly,
}

/// Symbols `(h, φ)` of the weighted composition operator.
#[derive(Clone, Debug)]
pub struct SymbolPair {
    pub map: AffineMap<BigRational>,
    pub weight: Weight,
}

impl SymbolPair {
    pub fn slope(&self) -> f64 {
        self.map.to_f64().slope
    }

    pub fn intercept(&self) -> f64 {
        self.map.to_f64().intercept
    }

    pub fn phi(&self, s: Complex64) -> Complex64 {
        let m = self.map.to_f64();
        s * m.slope + m.intercept
    }

    pub fn closed_weight(&self) -> Option<&ComplexExpr> {
        match &self.weight {
            Weight::Closed(e) => Some(e),
            Weight::InterpolationOnly => None,
        }
    }

    pub fn describe_phi(&self) -> String {
        let m = self.map.to_f64();
        if m.intercept >= 0.0 {
            format!("{}*s + {}", m.slope, m.intercept)
        } else {
            format!("{}*s - {}", m.slope, -m.intercept)
        }
    }
}

/// `φ(s) = a·s + b + (1−a)/2`, and `h` from the registered closed form.
pub fn affine_symbols(spec: &MonomialSpec) -> SymbolPair {
    let a = exact(spec.slope);
    let b = exact(spec.intercept);
    let half = BigRational::new(1.into(), 2.into());
    let intercept = b + (BigRational::one() - a.clone()) * half;
    SymbolPair {
        map: AffineMap { slope: a, intercept },
        weight: match &spec.weight {
            Some(e) => Weight::Closed(e.clone()),
            None => Weight::InterpolationOnly,
        },
    }
}

/// Whether `φ` maps the right half-plane into its closure as a bounded
/// composition symbol.
pub fn self_map_check(sym: &SymbolPair) -> bool {
    let a = &sym.map.slope;
    let beta = &sym.map.intercept;
    (a.is_positive() && !beta.is_negative()) || (a.is_zero() && beta.is_positive())
}

/// `max_{n<N} |h(n+½) − conj(cₙ)|`, or `None` when `h` has no closed form.
pub fn interpolation_consistency(sym: &SymbolPair, spec: &MonomialSpec, nodes: usize) -> Option<f64> {
    let h = sym.closed_weight()?;
    let mut worst: f64 = 0.0;
    for n in 0..nodes {
        let dev = match (h.eval(Complex64::new(n as f64 + 0.5, 0.0)), spec.coefficient(n)) {
            (Ok(hv), Ok(c)) => (hv - c.conj()).norm(),
            _ => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    Some(worst)
}

/// Largest relative interpolation deviation and the node where it occurs.
pub(crate) fn interpolation_worst_node(sym: &SymbolPair, spec: &MonomialSpec, nodes: usize) -> Option<(usize, f64)> {
    let h = sym.closed_weight()?;
    let mut worst = (0, 0.0f64);
    for n in 0..nodes {
        let dev = match (h.eval(Complex64::new(n as f64 + 0.5, 0.0)), spec.coefficient(n)) {
            (Ok(hv), Ok(c)) => (hv - c.conj()).norm() / c.norm().max(1.0),
            _ => f64::INFINITY,
        };
        if dev > worst.1 || dev.is_nan() {
            worst = (n, dev);
        }
    }
    Some(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesOutcome {
    Converges,
    Diverges,
    Inconclusive,
}

/// Node sequences for the Blaschke condition `Σ Re zₙ/(1+|zₙ|²) < ∞`.
#[derive(Clone, Debug)]
pub enum NodeRule {
    /// `zₙ = step·n + start`.
    Affine { start: Complex64, step: Complex64 },
    /// `zₙ = start·ratioⁿ`.
    Geometric { start: Complex64, ratio: Complex64 },
    /// Explicit values; `tail_bound` bounds the sum of all later terms.
    Listed {
        values: Vec<Complex64>,
        tail_bound: Option<f64>,
    },
}

impl NodeRule {
    pub fn node(&self, n: usize) -> Option<Complex64> {
        match self {
            NodeRule::Affine { start, step } => Some(start + step * n as f64),
            NodeRule::Geometric { start, ratio } => Some(start * ratio.powi(n as i32)),
            NodeRule::Listed { values, .. } => values.get(n).copied(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlaschkeOutcome {
    Blaschke,
    NotBlaschke,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlaschkeReport {
    pub outcome: BlaschkeOutcome,
    pub partial_sum: f64,
    pub terms: usize,
}

/// Decides whether a node sequence is a zero sequence for `H²(ℂ₊)`.
pub fn blaschke_test(rule: &NodeRule, n_probe: usize) -> BlaschkeReport {
    let term = |z: Complex64| z.re / (1.0 + z.norm_sqr());
    let mut partial = 0.0;
    let mut terms = 0;
    for n in 0..n_probe {
        if let Some(z) = rule.node(n) {
            partial += term(z);
            terms += 1;
        }
    }
    let outcome = match rule {
        NodeRule::Affine { start, step } => {
            if step.re > 0.0 {
                BlaschkeOutcome::NotBlaschke
            } else if step.norm() == 0.0 {
                // A repeated node with Re > 0 contributes a fixed positive term forever.
                if start.re > 0.0 {
                    BlaschkeOutcome::NotBlaschke
                } else {
                    BlaschkeOutcome::Blaschke
                }
            } else {
                // Re zₙ stays at Re start while |zₙ|² grows quadratically.
                BlaschkeOutcome::Blaschke
            }
        }
        NodeRule::Geometric { start, ratio } => {
            let r = ratio.norm();
            if start.re == 0.0 && ratio.im == 0.0 {
                BlaschkeOutcome::Blaschke
            } else if r != 1.0 {
                // Terms are O(r^{-n}) for r > 1 and O(rⁿ) for r < 1.
                BlaschkeOutcome::Blaschke
            } else if *ratio == Complex64::new(1.0, 0.0) {
                if start.re > 0.0 {
                    BlaschkeOutcome::NotBlaschke
                } else {
                    BlaschkeOutcome::Blaschke
                }
            } else {
                BlaschkeOutcome::Inconclusive
            }
        }
        NodeRule::Listed { tail_bound, .. } => {
            if tail_bound.is_some_and(f64::is_finite) {
                BlaschkeOutcome::Blaschke
            } else {
                BlaschkeOutcome::Inconclusive
            }
        }
    };
    BlaschkeReport {
        outcome,
        partial_sum: partial,
        terms,
    }
}

/// Index sets `S ⊆ ℕ` for the Müntz–Szász condition `Σ_{n∈S} 1/(n+1) = ∞`.
#[derive(Clone, Debug)]
pub enum IndexRule {
    /// `start + step·k`, `step ≥ 1`.
    Arithmetic { start: u64, step: u64 },
    /// `start·ratioᵏ`, `start ≥ 1`.
    Geometric { start: u64, ratio: u64 },
    /// `coefficient·kᵈ` for `k ≥ 1`.
    Power { coefficient: u64, degree: u32 },
    /// Finitely many explicit indices followed by an optional rule.
    Listed {
        head: Vec<u64>,
        tail: Option<Box<IndexRule>>,
    },
    /// No declared structure.
    Unknown { head: Vec<u64> },
}

impl IndexRule {
    pub fn all() -> Self {
        IndexRule::Arithmetic { start: 0, step: 1 }
    }

    fn members(&self, count: usize) -> Vec<u64> {
        match self {
            IndexRule::Arithmetic { start, step } => (0..count as u64).map(|k| start + step * k).collect(),
            IndexRule::Geometric { start, ratio } => {
                let mut out = Vec::new();
                let mut v = *start;
                for _ in 0..count {
                    out.push(v);
                    match v.checked_mul(*ratio) {
                        Some(next) if next != v => v = next,
                        _ => break,
                    }
                }
                out
            }
            IndexRule::Power { coefficient, degree } => (1..=count as u64)
                .map_while(|k| k.checked_pow(*degree).and_then(|p| p.checked_mul(*coefficient)))
                .collect(),
            IndexRule::Listed { head, tail } => {
                let mut out = head.clone();
                if let Some(t) = tail {
                    out.extend(t.members(count.saturating_sub(head.len())));
                }
                out.truncate(count.max(head.len()));
                out
            }
            IndexRule::Unknown { head } => head.clone(),
        }
    }

    fn outcome(&self) -> SeriesOutcome {
        match self {
            IndexRule::Arithmetic { step, .. } => {
                if *step == 0 {
                    SeriesOutcome::Converges
                } else {
                    SeriesOutcome::Diverges
                }
            }
            IndexRule::Geometric { ratio, .. } => {
                if *ratio >= 2 {
                    SeriesOutcome::Converges
                } else {
                    // ratio 0 or 1: finitely many distinct members.
                    SeriesOutcome::Converges
                }
            }
            IndexRule::Power { coefficient, degree } => {
                if *coefficient == 0 || *degree >= 2 {
                    SeriesOutcome::Converges
                } else if *degree == 1 {
                    SeriesOutcome::Diverges
                } else {
                    SeriesOutcome::Converges
                }
            }
            IndexRule::Listed { tail, .. } => match tail {
                None => SeriesOutcome::Converges,
                Some(t) => t.outcome(),
            },
            IndexRule::Unknown { .. } => SeriesOutcome::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuntzOutcome {
    Dense,
    NotDense,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct MuntzReport {
    pub outcome: MuntzOutcome,
    pub partial_sum: f64,
    pub terms: usize,
}

/// Density of `span{xⁿ : n ∈ S}` in `L²(0,1)`.
pub fn muntz_density(rule: &IndexRule, n_probe: usize) -> MuntzReport {
    let mut members = rule.members(n_probe);
    members.sort_unstable();
    members.dedup();
    let partial: f64 = members.iter().map(|&n| 1.0 / (n as f64 + 1.0)).sum();
    let outcome = match rule.outcome() {
        SeriesOutcome::Diverges => MuntzOutcome::Dense,
        SeriesOutcome::Converges => MuntzOutcome::NotDense,
        SeriesOutcome::Inconclusive => MuntzOutcome::Inconclusive,
    };
    MuntzReport {
        outcome,
        partial_sum: partial,
        terms: members.len(),
    }
}

/// Behaviour of a rational weight on the imaginary axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RationalClass {
    /// `Q` vanishes at `s = i·y`.
    AxisPole {
        y: f64,
    },
    SquareIntegrableOnAxis,
    /// `|h(iy)| → limit` as `|y| → ∞`.
    BoundedOnAxis {
        limit: f64,
    },
    /// `deg P − deg Q = excess > 0`.
    GrowingOnAxis {
        excess: usize,
    },
}

pub fn rational_symbol_classify(h: &RationalSymbol) -> RationalClass {
    if h.is_zero() {
        return RationalClass::SquareIntegrableOnAxis;
    }
    if h.denominator().has_root_on_imaginary_axis() {
        let rs = roots(&h.denominator_f64());
        let y = rs
            .iter()
            .min_by(|a, b| a.re.abs().total_cmp(&b.re.abs()))
            .map(|r| r.im)
            .unwrap_or(0.0);
        return RationalClass::AxisPole { y };
    }
    let dp = h.numerator().degree().unwrap_or(0);
    let dq = h.denominator().degree().unwrap_or(0);
    if dq > dp {
        RationalClass::SquareIntegrableOnAxis
    } else if dq == dp {
        let l = crate::poly::exact_to_f64(h.numerator().leading().unwrap())
            / crate::poly::exact_to_f64(h.denominator().leading().unwrap());
        RationalClass::BoundedOnAxis { limit: l.norm() }
    } else {
        RationalClass::GrowingOnAxis { excess: dp - dq }
    }
}

/// Poles of `h` in the open right half-plane.
pub fn right_half_plane_poles(h: &RationalSymbol) -> Vec<Complex64> {
    let rs = roots(&h.denominator_f64());
    cluster_roots(&rs, 1e-9)
        .into_iter()
        .map(|(r, _)| r)
        .filter(|r| r.re > 1e-12 * (1.0 + r.norm()))
        .collect()
}

/// `φ'(∞) = lim z/φ(z)`: `1/a` for `a > 0`, `+∞` for `a = 0`.
pub fn angular_derivative(sym: &SymbolPair) -> f64 {
    let a = sym.slope();
    if a > 0.0 {
        1.0 / a
    } else {
        f64::INFINITY
    }
}

/// Unweighted composition by `φ` is bounded iff `0 < φ'(∞) < ∞`.
pub fn composition_bounded(sym: &SymbolPair) -> bool {
    let d = angular_derivative(sym);
    d > 0.0 && d.is_finite()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Unbounded,
    BoundedNotCompact,
    Compact,
    Inconclusive,
}

impl Classification {
    pub fn is_bounded(self) -> bool {
        matches!(self, Classification::BoundedNotCompact | Classification::Compact)
    }
}

/// Why the fast path decided or deferred.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum FastPathTag {
    NotSelfMap,
    ZeroWeight,
    AxisPole {
        y: f64,
    },
    GrowingWeight {
        excess: usize,
    },
    WeightPoleInHalfPlane {
        re: f64,
        im: f64,
    },
    SquareIntegrableWeight,
    /// `a = 0`: `W f = h·f(β)` has rank one.
    RankOne {
        weight_in_h2: bool,
    },
    /// `a = 0` with a non-rational weight; settled numerically.
    RankOneNumeric,
    /// `β = 0`: the measure lives on the boundary axis, which rules out
    /// compactness for a nonzero weight.
    BoundaryLine,
    InterpolationOnly,
    Deferred,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FastPath {
    Decided { class: Classification, tag: FastPathTag },
    Defer { compact_excluded: bool, tag: FastPathTag },
}

pub fn classify_fast_path(spec: &MonomialSpec, sym: &SymbolPair) -> FastPath {
    // Re p₀ > −½ is enforced when a MonomialSpec is built.
    debug_assert!(spec.intercept() > -0.5);
    let decided = |class, tag| FastPath::Decided { class, tag };
    if !self_map_check(sym) {
        return decided(Classification::Unbounded, FastPathTag::NotSelfMap);
    }
    let h = match sym.closed_weight() {
        Some(h) => h,
        None => {
            return FastPath::Defer {
                compact_excluded: false,
                tag: FastPathTag::InterpolationOnly,
            }
        }
    };
    let a_zero = sym.map.slope.is_zero();
    let beta_zero = sym.map.intercept.is_zero();
    match h.as_rational() {
        Ok(r) => {
            if r.is_zero() {
                return decided(Classification::Compact, FastPathTag::ZeroWeight);
            }
            let class = rational_symbol_classify(&r);
            match class {
                RationalClass::AxisPole { y } => {
                    return decided(Classification::Unbounded, FastPathTag::AxisPole { y })
                }
                RationalClass::GrowingOnAxis { excess } => {
                    return decided(Classification::Unbounded, FastPathTag::GrowingWeight { excess })
                }
                _ => {}
            }
            if let Some(p) = right_half_plane_poles(&r).first() {
                return decided(
                    Classification::Unbounded,
                    FastPathTag::WeightPoleInHalfPlane { re: p.re, im: p.im },
                );
            }
            if a_zero {
                let in_h2 = class == RationalClass::SquareIntegrableOnAxis;
                let class = if in_h2 {
                    Classification::Compact
                } else {
                    Classification::Unbounded
                };
                return decided(class, FastPathTag::RankOne { weight_in_h2: in_h2 });
            }
            if beta_zero {
                return FastPath::Defer {
                    compact_excluded: true,
                    tag: FastPathTag::BoundaryLine,
                };
            }
            if class == RationalClass::SquareIntegrableOnAxis {
                return decided(Classification::Compact, FastPathTag::SquareIntegrableWeight);
            }
            FastPath::Defer {
                compact_excluded: false,
                tag: FastPathTag::Deferred,
            }
        }
        Err(_) => {
            if a_zero {
                FastPath::Defer {
                    compact_excluded: false,
                    tag: FastPathTag::RankOneNumeric,
                }
            } else if beta_zero {
                FastPath::Defer {
                    compact_excluded: true,
                    tag: FastPathTag::BoundaryLine,
                }
            } else {
                FastPath::Defer {
                    compact_excluded: false,
                    tag: FastPathTag::Deferred,
                }
            }
        }
    }
}

/// Exact check that `φ(n+½) = pₙ + ½`.
pub fn node_map_exact(sym: &SymbolPair, spec: &MonomialSpec, n: usize) -> bool {
    let half = BigRational::new(1.into(), 2.into());
    let node = BigRational::from_integer(n.into()) + half.clone();
    sym.map.apply(&node) == spec.exponent_exact(n) + half
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(c: &str, a: f64, b: f64, h: Option<&str>) -> MonomialSpec {
        MonomialSpec::from_document(&SpecDocument {
            name: None,
            coeff_expr: c.into(),
            coeff_head: vec![],
            a,
            b,
            h_expr: h.map(String::from),
        })
        .unwrap()
    }

    fn phi_of(a: f64, b: f64) -> (f64, f64) {
        let s = affine_symbols(&spec("1", a, b, None));
        (s.slope(), s.intercept())
    }

    #[test]
    fn affine_symbol_examples() {
        assert_eq!(phi_of(1.0, 1.0), (1.0, 1.0));
        assert_eq!(phi_of(2.0, 0.0), (2.0, -0.5));
        assert_eq!(phi_of(1.0, 0.0), (1.0, 0.0));
        assert_eq!(phi_of(2.0, 2.0), (2.0, 1.5));
    }

    #[test]
    fn self_map_examples() {
        assert!(self_map_check(&affine_symbols(&spec("1/(n+1)", 1.0, 1.0, None))));
        assert!(!self_map_check(&affine_symbols(&spec("1", 2.0, 0.0, None))));
        let degenerate = SymbolPair {
            map: AffineMap {
                slope: BigRational::zero(),
                intercept: BigRational::zero(),
            },
            weight: Weight::InterpolationOnly,
        };
        assert!(!self_map_check(&degenerate));
    }

    #[test]
    fn interpolation_examples() {
        let v = spec("1/(n+1)", 1.0, 1.0, Some("1/(s+1/2)"));
        assert!(interpolation_consistency(&affine_symbols(&v), &v, 50).unwrap() < 1e-14);
        let t3 = spec("1/(2*n+2)", 2.0, 2.0, Some("1/(2*s+1)"));
        assert!(interpolation_consistency(&affine_symbols(&t3), &t3, 50).unwrap() < 1e-14);
        let shift = spec("1", 1.0, 1.0, Some("1"));
        assert_eq!(
            interpolation_consistency(&affine_symbols(&shift), &shift, 10),
            Some(0.0)
        );
        let bare = spec("1", 1.0, 1.0, None);
        assert_eq!(interpolation_consistency(&affine_symbols(&bare), &bare, 10), None);
    }

    #[test]
    fn invalid_specs() {
        let doc = |c: &str, a: f64, b: f64| SpecDocument {
            name: None,
            coeff_expr: c.into(),
            coeff_head: vec![],
            a,
            b,
            h_expr: None,
        };
        assert!(matches!(
            MonomialSpec::from_document(&doc("", 1.0, 0.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            MonomialSpec::from_document(&doc("1", 1.0, -0.5)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            MonomialSpec::from_document(&doc("1", -1.0, 0.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            MonomialSpec::from_document(&doc("1/(n-3)", 1.0, 0.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            MonomialSpec::from_document(&doc("1/(s+1)", 1.0, 0.0)),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn listed_coefficients() {
        let s = MonomialSpec::from_document(&SpecDocument {
            name: None,
            coeff_expr: "1/(n+1)".into(),
            coeff_head: vec!["5".into(), "i".into()],
            a: 1.0,
            b: 0.0,
            h_expr: None,
        })
        .unwrap();
        assert_eq!(s.coefficient(0).unwrap(), Complex64::new(5.0, 0.0));
        assert_eq!(s.coefficient(1).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(s.coefficient(3).unwrap(), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn blaschke_examples() {
        let halves = NodeRule::Affine {
            start: Complex64::new(0.5, 0.0),
            step: Complex64::new(1.0, 0.0),
        };
        assert_eq!(blaschke_test(&halves, 64).outcome, BlaschkeOutcome::NotBlaschke);

        let boundary = NodeRule::Affine {
            start: Complex64::new(0.0, 1.0),
            step: Complex64::new(0.0, 3.0),
        };
        let r = blaschke_test(&boundary, 64);
        assert_eq!(r.outcome, BlaschkeOutcome::Blaschke);
        assert_eq!(r.partial_sum, 0.0);

        let dyadic = NodeRule::Geometric {
            start: Complex64::new(1.0, 0.0),
            ratio: Complex64::new(2.0, 0.0),
        };
        let r = blaschke_test(&dyadic, 60);
        assert_eq!(r.outcome, BlaschkeOutcome::Blaschke);
        // Σ 2ⁿ/(1+4ⁿ) < Σ 2⁻ⁿ⁺¹ except for the first term, so partial sums stay below 2.
        assert!(r.partial_sum < 2.0);
        let r2 = blaschke_test(&dyadic, 30);
        assert!((r.partial_sum - r2.partial_sum).abs() < 2f64.powi(-29));

        let listed = NodeRule::Listed {
            values: vec![Complex64::new(1.0, 0.0)],
            tail_bound: None,
        };
        assert_eq!(blaschke_test(&listed, 8).outcome, BlaschkeOutcome::Inconclusive);
    }

    #[test]
    fn muntz_examples() {
        assert_eq!(muntz_density(&IndexRule::all(), 64).outcome, MuntzOutcome::Dense);

        let powers = IndexRule::Geometric { start: 1, ratio: 2 };
        let r = muntz_density(&powers, 60);
        assert_eq!(r.outcome, MuntzOutcome::NotDense);
        assert!(r.partial_sum < 2.0);

        let evens = IndexRule::Arithmetic { start: 0, step: 2 };
        let r = muntz_density(&evens, 4096);
        assert_eq!(r.outcome, MuntzOutcome::Dense);
        // Partial sums grow like ½·log N.
        let small = muntz_density(&evens, 64).partial_sum;
        assert!((r.partial_sum - small - 0.5 * (4096f64 / 64.0).ln()).abs() < 0.05);

        let unknown = IndexRule::Unknown { head: vec![1, 4, 9] };
        assert_eq!(muntz_density(&unknown, 10).outcome, MuntzOutcome::Inconclusive);
        let squares = IndexRule::Power {
            coefficient: 1,
            degree: 2,
        };
        assert_eq!(muntz_density(&squares, 10).outcome, MuntzOutcome::NotDense);
        let finite = IndexRule::Listed {
            head: vec![0, 1, 2],
            tail: None,
        };
        assert_eq!(muntz_density(&finite, 10).outcome, MuntzOutcome::NotDense);
    }

    fn rat(text: &str) -> RationalSymbol {
        ComplexExpr::parse(text, "s").unwrap().as_rational().unwrap()
    }

    #[test]
    fn rational_classification_examples() {
        assert_eq!(
            rational_symbol_classify(&rat("1/(2*s)")),
            RationalClass::AxisPole { y: 0.0 }
        );
        assert_eq!(
            rational_symbol_classify(&rat("1/(2*s+1)")),
            RationalClass::SquareIntegrableOnAxis
        );
        assert_eq!(
            rational_symbol_classify(&rat("1")),
            RationalClass::BoundedOnAxis { limit: 1.0 }
        );
        assert_eq!(
            rational_symbol_classify(&rat("s^2/(s+1)")),
            RationalClass::GrowingOnAxis { excess: 1 }
        );
        match rational_symbol_classify(&rat("1/(s^2+4)")) {
            RationalClass::AxisPole { y } => assert!((y.abs() - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(right_half_plane_poles(&rat("1/(s-1)")).len(), 1);
        assert!(right_half_plane_poles(&rat("1/(s+1)")).is_empty());
    }

    #[test]
    fn angular_derivative_examples() {
        let s1 = affine_symbols(&spec("1", 1.0, 1.0, None));
        assert_eq!(angular_derivative(&s1), 1.0);
        assert!(composition_bounded(&s1));
        let s2 = affine_symbols(&spec("1", 2.0, 1.0, None));
        assert_eq!(angular_derivative(&s2), 0.5);
        // Along the reals z/(2z+β) → 1/2.
        let z = 1e9;
        assert!((z / s2.phi(Complex64::new(z, 0.0)).re - 0.5).abs() < 1e-9);
        let s0 = affine_symbols(&spec("1", 0.0, 1.0, None));
        assert_eq!(angular_derivative(&s0), f64::INFINITY);
        assert!(!composition_bounded(&s0));
    }

    #[test]
    fn fast_path_examples() {
        let t1 = spec("1", 2.0, 0.0, Some("1"));
        assert_eq!(
            classify_fast_path(&t1, &affine_symbols(&t1)),
            FastPath::Decided {
                class: Classification::Unbounded,
                tag: FastPathTag::NotSelfMap
            }
        );
        let t2 = spec("1/(2*n+1)", 2.0, 1.0, Some("1/(2*s)"));
        assert!(matches!(
            classify_fast_path(&t2, &affine_symbols(&t2)),
            FastPath::Decided {
                class: Classification::Unbounded,
                tag: FastPathTag::AxisPole { .. }
            }
        ));
        let t3 = spec("1/(2*n+2)", 2.0, 2.0, Some("1/(2*s+1)"));
        assert_eq!(
            classify_fast_path(&t3, &affine_symbols(&t3)),
            FastPath::Decided {
                class: Classification::Compact,
                tag: FastPathTag::SquareIntegrableWeight
            }
        );
        let hardy = spec("1/(n+1)", 1.0, 0.0, Some("1/(s+1/2)"));
        assert_eq!(
            classify_fast_path(&hardy, &affine_symbols(&hardy)),
            FastPath::Defer {
                compact_excluded: true,
                tag: FastPathTag::BoundaryLine
            }
        );
        let rank_one = spec("1/(n+1)", 0.0, 0.5, Some("1/(s+1)"));
        assert!(matches!(
            classify_fast_path(&rank_one, &affine_symbols(&rank_one)),
            FastPath::Decided {
                class: Classification::Compact,
                tag: FastPathTag::RankOne { weight_in_h2: true }
            }
        ));
    }

    proptest! {
        #[test]
        fn node_map_is_exact(a_num in 0u32..64, a_den_pow in 0u32..4, b_num in -7i32..64, b_den_pow in 0u32..4) {
            let a = a_num as f64 / 2f64.powi(a_den_pow as i32);
            let b = b_num as f64 / 2f64.powi(b_den_pow as i32 + 4);
            prop_assume!(b > -0.5);
            let s = spec("1", a, b, None);
            let sym = affine_symbols(&s);
            for n in 0..=100 {
                prop_assert!(node_map_exact(&sym, &s, n));
            }
        }

        #[test]
        fn classification_invariant_under_common_scale(re in -5i64..5, im in -5i64..5, idx in 0usize..4) {
            prop_assume!(re != 0 || im != 0);
            let texts = ["1/(2*s)", "1/(2*s+1)", "(s+3)/(s-2*i+1)", "s^2/(s+1)"];
            let r = rat(texts[idx]);
            let k = Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()));
            let scaled = RationalSymbol::new(r.numerator().scale(&k), r.denominator().scale(&k)).unwrap();
            prop_assert_eq!(rational_symbol_classify(&scaled), rational_symbol_classify(&r));
        }

        #[test]
        fn blaschke_and_muntz_agree_on_progressions(start in 0u64..50, step in 1u64..20) {
            let nodes = NodeRule::Affine {
                start: Complex64::new(start as f64 + 0.5, 0.0),
                step: Complex64::new(step as f64, 0.0),
            };
            let not_blaschke = blaschke_test(&nodes, 64).outcome == BlaschkeOutcome::NotBlaschke;
            let dense = muntz_density(&IndexRule::Arithmetic { start, step }, 64).outcome == MuntzOutcome::Dense;
            prop_assert_eq!(not_blaschke, dense);
        }
    }
}
