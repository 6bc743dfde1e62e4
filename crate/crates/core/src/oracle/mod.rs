//! Brute-force cross-checks: Galerkin truncations of `T` on `L²(0,1)`,
//! singular-value trends and the closed-form `‖T xⁿ‖/‖xⁿ‖` conditions.

mod diagnostics;
mod galerkin;
mod legendre;

pub use diagnostics::{
    necessary_condition_scan, summarize, sv_scan, txn_ratio, txn_ratio_check, txn_ratio_sq_exact, weak_gram,
    DecayProfile, NecessaryScan, SigmaTrend, SvScan, SvSummary, TxnCheck, DECAY_N, RATIO_BOUND, SETTLE_TOL,
};
pub use galerkin::{
    cancellation_bits, float_width_for, galerkin_matrix, hex_digest, Arithmetic, GalerkinMatrix, GalerkinResult,
    DEFAULT_FLOAT_BITS, EXACT_CAP, FLOAT_CAP, FLOAT_WIDTHS,
};
pub use legendre::{gram_is_identity, legendre_coeffs, scaled_gram, LegendreCoeffs};
