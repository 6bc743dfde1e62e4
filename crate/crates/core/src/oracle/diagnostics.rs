//! Singular-value scans and the closed-form necessary conditions built on
//! `‖T xⁿ‖/‖xⁿ‖`.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::galerkin::{galerkin_matrix, Arithmetic, GalerkinResult};
use crate::scalar::rational_to_f64;
use crate::symbols::MonomialSpec;
use crate::{Error, ExactComplex, Result};

/// Relative step between the last two sizes below which `σ_max` counts as
/// settled.
pub const SETTLE_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaTrend {
    /// `σ_max` settled between the last two sizes.
    Bounded,
    /// `σ_max` at least doubled across the scanned sizes.
    Growing,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    #[serde(rename = "N")]
    pub n: usize,
    /// `σ_16`, which is also `min_{k≤16} σ_k`.
    pub sigma_16: Option<f64>,
    pub sigma_24: Option<f64>,
    /// `σ_16/σ_1`.
    pub relative_16: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvSummary {
    /// `(N, σ_max(N))` pairs.
    pub sigma_max: Vec<(usize, f64)>,
    pub trend: SigmaTrend,
    /// `σ_max(last)/σ_max(first)`.
    pub growth: f64,
    /// `|σ_max(last) − σ_max(previous)|`.
    pub cauchy_step: Option<f64>,
    pub decay: Option<DecayProfile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvScan {
    pub results: Vec<GalerkinResult>,
    pub summary: SvSummary,
}

/// Size at which the decay profile is read: 32 when scanned, else the
/// largest size.
pub const DECAY_N: usize = 32;

pub fn sv_scan(spec: &MonomialSpec, sizes: &[usize], arithmetic: Arithmetic) -> Result<SvScan> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "sizes must be strictly increasing, got {sizes:?}"
        )));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n == 0) {
        return Err(Error::Config(format!("size {n} is empty")));
    }
    let results = sizes
        .iter()
        .map(|&n| galerkin_matrix(spec, n, arithmetic).map(|m| m.result()))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&results);
    Ok(SvScan { results, summary })
}

pub fn summarize(results: &[GalerkinResult]) -> SvSummary {
    let sigma_max: Vec<(usize, f64)> = results
        .iter()
        .map(|r| (r.n, r.singular_values.first().copied().unwrap_or(0.0)))
        .collect();
    let first = sigma_max.first().map_or(0.0, |p| p.1);
    let last = sigma_max.last().map_or(0.0, |p| p.1);
    let growth = if first > 0.0 {
        last / first
    } else if last > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    let cauchy_step = (sigma_max.len() >= 2).then(|| (last - sigma_max[sigma_max.len() - 2].1).abs());
    let trend = if growth >= 2.0 {
        SigmaTrend::Growing
    } else if cauchy_step.is_some_and(|d| d <= SETTLE_TOL * last.max(f64::MIN_POSITIVE)) || last == 0.0 {
        SigmaTrend::Bounded
    } else {
        SigmaTrend::Undetermined
    };
    let decay = results.iter().find(|r| r.n == DECAY_N).or(results.last()).map(|r| {
        let s = &r.singular_values;
        let at = |k: usize| s.get(k - 1).copied();
        DecayProfile {
            n: r.n,
            sigma_16: at(16),
            sigma_24: at(24),
            relative_16: at(16).zip(at(1)).and_then(|(a, b)| (b > 0.0).then(|| a / b)),
        }
    });
    SvSummary {
        sigma_max,
        trend,
        growth,
        cauchy_step,
        decay,
    }
}

/// `‖T xⁿ‖/‖xⁿ‖ = |cₙ|·√((2n+1)/(2 Re pₙ + 1))`.
pub fn txn_ratio(spec: &MonomialSpec, n: usize) -> Result<f64> {
    let c = spec.coefficient(n)?;
    let p = spec.exponent(n);
    Ok(c.norm() * ((2 * n + 1) as f64 / (2.0 * p + 1.0)).sqrt())
}

/// `‖c x^p‖²/‖xⁿ‖²` from the exact integrals `∫₀¹ x^{2p} dx = 1/(2p+1)` and
/// `∫₀¹ x^{2n} dx = 1/(2n+1)`, for rational `c` and `p > −1/2`.
pub fn txn_ratio_sq_exact(c: &ExactComplex, p: &BigRational, n: usize) -> BigRational {
    let one = BigRational::one();
    let integral = |q: &BigRational| one.clone() / (q.clone() + q.clone() + one.clone());
    let c_sq = c.re.clone() * c.re.clone() + c.im.clone() * c.im.clone();
    let xn = BigRational::from_integer(n.into());
    c_sq * integral(p) / integral(&xn)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TxnCheck {
    pub n: usize,
    pub closed: f64,
    pub exact: f64,
    pub residual: f64,
}

/// Closed form against the exact-integral recomputation; `None` when `cₙ`
/// is not rational.
pub fn txn_ratio_check(spec: &MonomialSpec, n: usize) -> Result<Option<TxnCheck>> {
    let closed = txn_ratio(spec, n)?;
    let Ok(c) = spec.coeff_rule().eval_exact(n) else {
        return Ok(None);
    };
    let exact = rational_to_f64(&txn_ratio_sq_exact(&c, &spec.exponent_exact(n), n)).sqrt();
    Ok(Some(TxnCheck {
        n,
        closed,
        exact,
        residual: (closed - exact).abs(),
    }))
}

/// `⟨e_m, e_n⟩ = √((2m+1)(2n+1))/(m+n+1)` for `e_n = √(2n+1)·xⁿ`.
pub fn weak_gram(m: usize, n: usize) -> f64 {
    (((2 * m + 1) * (2 * n + 1)) as f64).sqrt() / (m + n + 1) as f64
}

/// Ratios above this fail boundedness outright.
pub const RATIO_BOUND: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessaryScan {
    pub ratios: Vec<f64>,
    pub pass_bounded: bool,
    pub pass_compact_necessary: bool,
    /// Max over the first and last quarters of the probe range.
    pub head_max: f64,
    pub tail_max: f64,
    pub rule: String,
}

/// Evaluates `‖T xⁿ‖/‖xⁿ‖` for `n < N` and applies the tail rule: bounded
/// fails if any ratio exceeds [`RATIO_BOUND`] or the last quarter's max
/// exceeds twice the max of the quarter before it; the compactness necessary
/// condition fails unless the last quarter's max is at most a quarter of the
/// first quarter's.
pub fn necessary_condition_scan(spec: &MonomialSpec, n: usize) -> Result<NecessaryScan> {
    if n < 4 {
        return Err(Error::Config(format!("necessary-condition scan needs N >= 4, got {n}")));
    }
    let ratios = (0..n).map(|k| txn_ratio(spec, k)).collect::<Result<Vec<_>>>()?;
    let q = n / 4;
    let max = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    let head_max = max(&ratios[..q]);
    let prev_max = max(&ratios[n - 2 * q..n - q]);
    let tail_max = max(&ratios[n - q..]);
    let pass_bounded =
        ratios.iter().all(|r| r.is_finite() && *r <= RATIO_BOUND) && tail_max <= 2.0 * prev_max.max(f64::MIN_POSITIVE);
    let pass_compact_necessary = tail_max <= 0.25 * head_max || tail_max == 0.0;
    Ok(NecessaryScan {
        ratios,
        pass_bounded,
        pass_compact_necessary,
        head_max,
        tail_max,
        rule: "bounded: all ratios <= 1e6 and last-quarter max <= 2x previous quarter; \
               compact necessary: last-quarter max <= 1/4 of first-quarter max"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn spec(name: &str) -> MonomialSpec {
        catalog::entry(name).unwrap().spec().unwrap()
    }

    #[test]
    fn txn_examples() {
        let v = spec("volterra");
        assert!((txn_ratio(&v, 0).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let h = spec("hardy");
        for n in 0..10 {
            assert!((txn_ratio(&h, n).unwrap() - 1.0 / (n + 1) as f64).abs() < 1e-15);
        }
        let z = MonomialSpec::from_document(&crate::symbols::SpecDocument {
            name: None,
            coeff_expr: "0".into(),
            coeff_head: Vec::new(),
            a: 1.0,
            b: 1.0,
            h_expr: None,
        })
        .unwrap();
        assert_eq!(txn_ratio(&z, 3).unwrap(), 0.0);
    }

    #[test]
    fn exact_ratio_is_rational() {
        let c = ExactComplex::new(BigRational::new(1.into(), 2.into()), BigRational::zero());
        let p = BigRational::from_integer(BigInt::from(2));
        // (1/4)·(1/5)/(1/1)
        assert_eq!(txn_ratio_sq_exact(&c, &p, 0), BigRational::new(1.into(), 20.into()));
    }

    #[test]
    fn weak_gram_values() {
        assert_eq!(weak_gram(5, 5), 1.0);
        assert!((weak_gram(0, 1) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        for n in [10, 100, 1000] {
            assert!(weak_gram(0, n) <= 2.0 / ((2 * n + 1) as f64).sqrt());
        }
    }

    #[test]
    fn necessary_scan_examples() {
        let v = necessary_condition_scan(&spec("volterra"), 64).unwrap();
        assert!(v.pass_bounded && v.pass_compact_necessary);
        let s = necessary_condition_scan(&spec("shift"), 64).unwrap();
        assert!(s.pass_bounded && !s.pass_compact_necessary);
        let e = necessary_condition_scan(&spec("se_minus_s"), 64).unwrap();
        assert!(e.pass_bounded && e.pass_compact_necessary);
    }

    #[test]
    fn scan_rejects_unsorted_sizes() {
        assert!(sv_scan(&spec("shift"), &[8, 4], Arithmetic::Exact).is_err());
    }
}
