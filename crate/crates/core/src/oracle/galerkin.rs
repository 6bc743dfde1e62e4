//! Galerkin truncations `M[j][k] = ⟨T φ_k, φ_j⟩` in the orthonormal shifted
//! Legendre basis.
//!
//! With `φ_k = √(2k+1)·Σ_m a_{k,m} xᵐ` and `T xᵐ = c_m x^{p_m}`,
//!
//! `M[j][k] = √((2j+1)(2k+1))·Σ_m a_{k,m}·c_m·Y[m][j]`, where
//! `Y[m][j] = ∫₀¹ x^{p_m}·Σ_l a_{j,l} xˡ dx`.
//!
//! The Legendre coefficients grow like `(1+√2)^{2k}` with alternating signs,
//! so the sums cancel almost all of their leading bits. Entries are formed in
//! exact rationals or wide binary floats and rounded to `f64` only at the end.
//!
//! Two routes compute `Y`: the exact mode sums `a_{j,l}/(p_m+l+1)` directly,
//! while the float modes use the cancellation-free product
//! `Y[m][j] = Π_{i<j}(p_m − i) / Π_{i≤j}(p_m + i + 1)`.

use nalgebra::DMatrix;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::legendre::{legendre_coeffs, LegendreCoeffs};
use crate::expr::EvalError;
use crate::scalar::{FieldScalar, WideFloat};
use crate::symbols::MonomialSpec;
use crate::{Complex64, Error, Result};

pub const EXACT_CAP: usize = 64;
pub const FLOAT_CAP: usize = 128;
/// Widths available to the float mode.
pub const FLOAT_WIDTHS: [usize; 4] = [128, 256, 512, 1024];
pub const DEFAULT_FLOAT_BITS: usize = 256;

/// Guard bits kept above the estimated cancellation loss.
const GUARD_BITS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Arithmetic {
    Exact,
    Float {
        bits: usize,
    },
    /// Plain `f64` formation; only useful to exhibit the cancellation.
    Double,
}

impl Arithmetic {
    pub fn float() -> Self {
        Arithmetic::Float {
            bits: DEFAULT_FLOAT_BITS,
        }
    }

    pub fn cap(&self) -> usize {
        match self {
            Arithmetic::Exact => EXACT_CAP,
            Arithmetic::Float { .. } | Arithmetic::Double => FLOAT_CAP,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Arithmetic::Exact => "exact".into(),
            Arithmetic::Float { bits } => format!("float({bits})"),
            Arithmetic::Double => "double".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GalerkinMatrix {
    pub n: usize,
    /// Arithmetic actually used, after any fallback or widening.
    pub arithmetic: Arithmetic,
    pub entries: DMatrix<Complex64>,
    pub notes: Vec<String>,
}

/// JSON form of one truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalerkinResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub mode: String,
    pub singular_values: Vec<f64>,
    pub checksum: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl GalerkinMatrix {
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = if self.n == 0 {
            Vec::new()
        } else if self.is_real() {
            let re = self.entries.map(|z| z.re);
            re.svd(false, false).singular_values.iter().copied().collect()
        } else {
            self.entries
                .clone()
                .svd(false, false)
                .singular_values
                .iter()
                .copied()
                .collect()
        };
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// SHA-256 over the entries in row-major order, `re` then `im`, as
    /// little-endian `f64` bytes.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for j in 0..self.n {
            for k in 0..self.n {
                let z = self.entries[(j, k)];
                h.update(z.re.to_le_bytes());
                h.update(z.im.to_le_bytes());
            }
        }
        hex_digest(&h.finalize())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,re,im\n");
        for j in 0..self.n {
            for k in 0..self.n {
                let z = self.entries[(j, k)];
                out.push_str(&format!("{j},{k},{:e},{:e}\n", z.re, z.im));
            }
        }
        out
    }

    pub fn result(&self) -> GalerkinResult {
        GalerkinResult {
            n: self.n,
            mode: self.arithmetic.label(),
            singular_values: self.singular_values(),
            checksum: self.checksum(),
            notes: self.notes.clone(),
        }
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Bits lost to cancellation in the basis sums, estimated from the largest
/// absolute coefficient sum of the top basis vector.
pub fn cancellation_bits(n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let top = legendre_coeffs(n - 1);
    let s: num_bigint::BigUint = top.ints.iter().map(|a| a.magnitude()).sum();
    s.bits()
}

/// Smallest float width that is at least `requested` and covers the loss at
/// size `n` with guard bits.
pub fn float_width_for(n: usize, requested: usize) -> usize {
    let need = (cancellation_bits(n) + GUARD_BITS) as usize;
    FLOAT_WIDTHS
        .iter()
        .copied()
        .find(|&w| w >= requested && w >= need)
        .unwrap_or(*FLOAT_WIDTHS.last().unwrap())
}

pub fn galerkin_matrix(spec: &MonomialSpec, n: usize, arithmetic: Arithmetic) -> Result<GalerkinMatrix> {
    let cap = arithmetic.cap();
    if n > cap {
        return Err(Error::OracleCap {
            requested: n,
            cap,
            mode: arithmetic.label(),
        });
    }
    if let Arithmetic::Float { bits } = arithmetic {
        if !FLOAT_WIDTHS.contains(&bits) {
            return Err(Error::Config(format!(
                "precision_bits must be one of {FLOAT_WIDTHS:?}, got {bits}"
            )));
        }
    }
    let basis: Vec<LegendreCoeffs> = (0..n).map(legendre_coeffs).collect();
    let mut notes = Vec::new();
    match arithmetic {
        Arithmetic::Exact => match exact_inputs(spec, n) {
            Ok((c, p)) => {
                let y = y_by_sums(&basis, &p);
                Ok(GalerkinMatrix {
                    n,
                    arithmetic,
                    entries: assemble(&basis, &c, &y),
                    notes,
                })
            }
            Err(EvalError::Unsupported(what)) => {
                notes.push(format!(
                    "coefficients are not rational ({what}); formed in float mode instead"
                ));
                float_matrix(spec, &basis, DEFAULT_FLOAT_BITS, notes)
            }
            Err(e) => Err(e.into()),
        },
        Arithmetic::Float { bits } => float_matrix(spec, &basis, bits, notes),
        Arithmetic::Double => {
            let c: Vec<(f64, f64)> = (0..n)
                .map(|m| spec.coefficient(m).map(|z| (z.re, z.im)))
                .collect::<std::result::Result<_, _>>()?;
            let p: Vec<f64> = (0..n).map(|m| spec.exponent(m)).collect();
            let y = y_by_sums(&basis, &p);
            Ok(GalerkinMatrix {
                n,
                arithmetic,
                entries: assemble(&basis, &c, &y),
                notes,
            })
        }
    }
}

type RationalParts = (Vec<(BigRational, BigRational)>, Vec<BigRational>);

fn exact_inputs(spec: &MonomialSpec, n: usize) -> std::result::Result<RationalParts, EvalError> {
    let c = (0..n)
        .map(|m| spec.coeff_rule().eval_exact(m).map(|z| (z.re, z.im)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let p = (0..n).map(|m| spec.exponent_exact(m)).collect();
    Ok((c, p))
}

fn float_matrix(
    spec: &MonomialSpec,
    basis: &[LegendreCoeffs],
    requested: usize,
    mut notes: Vec<String>,
) -> Result<GalerkinMatrix> {
    let n = basis.len();
    let bits = float_width_for(n, requested);
    if bits != requested {
        notes.push(format!(
            "precision raised from {requested} to {bits} bits: about {} bits cancel at N = {n}",
            cancellation_bits(n)
        ));
    }
    let entries = match bits {
        128 => wide_entries::<128>(spec, basis)?,
        256 => wide_entries::<256>(spec, basis)?,
        512 => wide_entries::<512>(spec, basis)?,
        _ => wide_entries::<1024>(spec, basis)?,
    };
    Ok(GalerkinMatrix {
        n,
        arithmetic: Arithmetic::Float { bits },
        entries,
        notes,
    })
}

fn wide_entries<const BITS: usize>(spec: &MonomialSpec, basis: &[LegendreCoeffs]) -> Result<DMatrix<Complex64>> {
    let n = basis.len();
    let c = (0..n)
        .map(|m| spec.coeff_rule().eval_wide::<BITS>(m).map(|z| (z.re, z.im)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let p: Vec<WideFloat<BITS>> = (0..n)
        .map(|m| WideFloat::from_rational(&spec.exponent_exact(m)))
        .collect();
    let y = y_by_products(n, &p);
    Ok(assemble(basis, &c, &y))
}

/// `Y[m][j] = Σ_l a_{j,l}/(p_m + l + 1)`.
pub(crate) fn y_by_sums<S: FieldScalar>(basis: &[LegendreCoeffs], p: &[S]) -> Vec<Vec<S>> {
    let n = basis.len();
    let a: Vec<Vec<S>> = basis
        .iter()
        .map(|b| b.ints.iter().map(S::field_bigint).collect())
        .collect();
    p.par_iter()
        .map(|pm| {
            let inv: Vec<S> = (0..n)
                .map(|l| S::field_int(1) / (pm.clone() + S::field_int(l as i64 + 1)))
                .collect();
            (0..n)
                .map(|j| {
                    a[j].iter()
                        .zip(&inv)
                        .fold(S::field_zero(), |acc, (x, y)| acc + x.clone() * y.clone())
                })
                .collect()
        })
        .collect()
}

/// `Y[m][j] = Π_{i<j}(p_m − i) / Π_{i≤j}(p_m + i + 1)`.
pub(crate) fn y_by_products<S: FieldScalar>(n: usize, p: &[S]) -> Vec<Vec<S>> {
    p.par_iter()
        .map(|pm| {
            let mut row = Vec::with_capacity(n);
            let mut num = S::field_int(1);
            let mut den = pm.clone() + S::field_int(1);
            for j in 0..n {
                row.push(num.clone() / den.clone());
                num = num * (pm.clone() - S::field_int(j as i64));
                den = den * (pm.clone() + S::field_int(j as i64 + 2));
            }
            row
        })
        .collect()
}

fn assemble<S: FieldScalar>(basis: &[LegendreCoeffs], c: &[(S, S)], y: &[Vec<S>]) -> DMatrix<Complex64> {
    let n = basis.len();
    let complex = c.iter().any(|(_, im)| im.to_double() != 0.0);
    let a: Vec<Vec<S>> = basis
        .iter()
        .map(|b| b.ints.iter().map(S::field_bigint).collect())
        .collect();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            // c_m·Y[m][j], reused across k.
            let cy: Vec<(S, S)> = (0..n)
                .map(|m| {
                    let re = c[m].0.clone() * y[m][j].clone();
                    let im = if complex {
                        c[m].1.clone() * y[m][j].clone()
                    } else {
                        S::field_zero()
                    };
                    (re, im)
                })
                .collect();
            (0..n)
                .map(|k| {
                    let mut re = S::field_zero();
                    let mut im = S::field_zero();
                    for (m, akm) in a[k].iter().enumerate() {
                        re = re + akm.clone() * cy[m].0.clone();
                        if complex {
                            im = im + akm.clone() * cy[m].1.clone();
                        }
                    }
                    let scale = (((2 * j + 1) * (2 * k + 1)) as f64).sqrt();
                    Complex64::new(re.to_double() * scale, im.to_double() * scale)
                })
                .collect()
        })
        .collect();
    DMatrix::from_fn(n, n, |j, k| rows[j][k])
}
