//! Closed forms for `n = 2`, read off the digit expansion alone.
//!
//! Throughout, a classical digit `d` is *critical* when `d_1 = p-1` or
//! `d_2 = 0`; `I(lambda_bar)` is critical exactly when all its digits are.

use crate::error::{Error, Result};
use crate::weights::{DigitExpansion, Weight};

fn digit_is_critical(d: &Weight, p: i64) -> bool {
    d.get(0) == p - 1 || d.get(1) == 0
}

/// Criticality and divisibility index of the barred injective
/// `I_bar(lambda_bar)`, by the layer recursion run over the classical digits
/// (base `p`). In characteristic 0 the barred layer is semisimple and the
/// answer is `(lambda_bar_2, lambda_bar_2 == 0)`.
pub fn barred_divind(exp: &DigitExpansion) -> (i64, bool) {
    let p = exp.params.p();
    if p == 0 {
        let bar2 = exp.classical_digits[0].get(1);
        return (bar2, bar2 == 0);
    }
    layer_recursion(&exp.classical_digits, p, (0, true))
}

/// One step of the divisibility recursion per digit, from the top digit
/// down. `tail` is `(divind, critical)` for everything above the digits.
fn layer_recursion(digits: &[Weight], base: i64, tail: (i64, bool)) -> (i64, bool) {
    digits.iter().rev().fold(tail, |(next_divind, next_critical), d| step(d, base, next_divind, next_critical))
}

fn step(d: &Weight, base: i64, next_divind: i64, next_critical: bool) -> (i64, bool) {
    let (d1, d2) = (d.get(0), d.get(1));
    let critical = next_critical && (d1 == base - 1 || d2 == 0);
    let divind = if d1 < base - 1 && next_critical { d2 } else { d1 - (base - 1) + base * next_divind };
    (divind, critical)
}

/// Divisibility index of `I(lambda)` by the layer recursion: `lambda0_2` if
/// `lambda0_1 < e-1` and `I_bar(lambda_bar)` is critical, otherwise
/// `lambda0_1 - (e-1) + e * divind I_bar(lambda_bar)`.
pub fn divind_layer_recursion(exp: &DigitExpansion) -> i64 {
    let (bar_divind, bar_critical) = barred_divind(exp);
    step(&exp.quantum_digit, exp.params.e(), bar_divind, bar_critical).0
}

/// Digit-wise criticality of `I(lambda)`.
pub fn is_critical_closed(exp: &DigitExpansion) -> bool {
    let e = exp.params.e();
    let q = &exp.quantum_digit;
    let top = q.get(0) == e - 1 || q.get(1) == 0;
    let p = exp.params.p();
    let rest = if p == 0 {
        exp.classical_digits[0].get(1) == 0
    } else {
        exp.classical_digits.iter().all(|d| digit_is_critical(d, p))
    };
    top && rest
}

/// `I(lambda)` is infinitesimally injective iff `lambda0_1 >= e-1` or the
/// barred injective is not critical (some digit with `d_1 != p-1` and
/// `d_2 != 0`; in characteristic 0, `lambda_bar_2 != 0`).
pub fn is_inf_injective_closed(exp: &DigitExpansion) -> bool {
    let e = exp.params.e();
    if exp.quantum_digit.get(0) >= e - 1 {
        return true;
    }
    let p = exp.params.p();
    if p == 0 {
        exp.classical_digits[0].get(1) != 0
    } else {
        exp.classical_digits.iter().any(|d| !digit_is_critical(d, p))
    }
}

/// The explicit divisibility index in each of the three parameter regimes.
pub fn divind_explicit(exp: &DigitExpansion) -> i64 {
    divind_explicit_eval(exp, false)
}

/// `swap_branches` exchanges the two cases of the final formula. It exists
/// only so the self-check can prove it notices a transcription error.
pub(crate) fn divind_explicit_eval(exp: &DigitExpansion, swap_branches: bool) -> i64 {
    let params = exp.params;
    let e = params.e();
    let p = params.p();
    let q = &exp.quantum_digit;
    let (q1, q2) = (q.get(0), q.get(1));

    if p == 0 {
        let bar2 = exp.classical_digits[0].get(1);
        return if q1 < e - 1 && bar2 == 0 { q2 } else { q1 + 1 + e * (bar2 - 1) };
    }

    // l = 1: all p-digits of lambda; l >= 2: the digits of lambda_bar, with
    // lambda0 and the factor e prepended.
    let (digits, scale, offset): (Vec<&Weight>, i64, i64) = if params.is_quantum() {
        (exp.classical_digits.iter().collect(), e, q1)
    } else {
        (std::iter::once(q).chain(&exp.classical_digits).collect(), 1, 0)
    };

    let m = match digits.iter().rposition(|d| !digit_is_critical(d, p)) {
        Some(m) => m,
        None => {
            if !params.is_quantum() || q1 == e - 1 || q2 == 0 {
                return 0;
            }
            return if q1 < e - 1 { q2 } else { q1 - (e - 1) };
        }
    };

    // alpha_1 = offset + scale * sum_{i<m} p^i d^i_1
    let alpha1 = offset + scale * digits[..m].iter().enumerate().map(|(i, d)| p.pow(i as u32) * d.get(0)).sum::<i64>();
    let pm = scale * p.pow(m as u32);
    let d = digits[m];
    let small = (d.get(0) < p - 1) != swap_branches;
    if small {
        alpha1 + pm * d.get(1) - (pm - 1)
    } else {
        alpha1 + pm * d.get(0) - (pm * p - 1)
    }
}

/// The closed-form divisibility index, computed by both the layer recursion
/// and the explicit formulas, which must agree.
pub fn divind_injective_closed(exp: &DigitExpansion) -> Result<i64> {
    divind_closed_checked(exp, false)
}

pub(crate) fn divind_closed_checked(exp: &DigitExpansion, swap_branches: bool) -> Result<i64> {
    let recursive = divind_layer_recursion(exp);
    let explicit = divind_explicit_eval(exp, swap_branches);
    if recursive != explicit {
        return Err(Error::Disagreement {
            what: "divind closed form (layer recursion vs explicit formula)",
            lam: exp.reconstruct(),
            params: exp.params,
            left: recursive.to_string(),
            right: explicit.to_string(),
        });
    }
    Ok(recursive)
}
