//! Orthonormal shifted Legendre polynomials on `(0, 1)`:
//! `φ_k(x) = √(2k+1)·Σ_m (−1)^{k−m} C(k,m) C(k+m,m) xᵐ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::poly::binomial;

/// Integer monomial coefficients of `φ_k/√(2k+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreCoeffs {
    pub k: usize,
    pub ints: Vec<BigInt>,
}

impl LegendreCoeffs {
    /// `(2k+1)`, the square of the shared normalization factor.
    pub fn factor_sq(&self) -> u64 {
        2 * self.k as u64 + 1
    }
}

pub fn legendre_coeffs(k: usize) -> LegendreCoeffs {
    let ints = (0..=k)
        .map(|m| {
            let v = binomial(k as u64, m as u64) * binomial((k + m) as u64, m as u64);
            if (k - m) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    LegendreCoeffs { k, ints }
}

/// Gram matrix of the basis under `⟨xᵖ, x^q⟩ = 1/(p+q+1)`, kept rational by
/// leaving out the irrational factor `√((2j+1)(2k+1))` off the diagonal. It is
/// the identity exactly when the basis is orthonormal.
pub fn scaled_gram(n: usize) -> Vec<Vec<BigRational>> {
    let basis: Vec<LegendreCoeffs> = (0..n).map(legendre_coeffs).collect();
    (0..n)
        .into_par_iter()
        .map(|j| {
            (0..n)
                .map(|k| {
                    let mut s = BigRational::zero();
                    for (l, a) in basis[j].ints.iter().enumerate() {
                        for (m, b) in basis[k].ints.iter().enumerate() {
                            s += BigRational::new(a * b, BigInt::from(l + m + 1));
                        }
                    }
                    if j == k {
                        s * BigRational::from_integer(basis[k].factor_sq().into())
                    } else {
                        s
                    }
                })
                .collect()
        })
        .collect()
}

pub fn gram_is_identity(n: usize) -> bool {
    scaled_gram(n).iter().enumerate().all(|(j, row)| {
        row.iter()
            .enumerate()
            .all(|(k, v)| if j == k { v.is_one() } else { v.is_zero() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn low_degrees() {
        assert_eq!(legendre_coeffs(0).ints, ints(&[1]));
        assert_eq!(legendre_coeffs(1).ints, ints(&[-1, 2]));
        assert_eq!(legendre_coeffs(1).factor_sq(), 3);
        assert_eq!(legendre_coeffs(2).ints, ints(&[1, -6, 6]));
        assert_eq!(legendre_coeffs(3).ints, ints(&[-1, 12, -30, 20]));
    }

    #[test]
    fn gram_small() {
        assert!(gram_is_identity(8));
    }
}
