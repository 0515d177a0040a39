//! The criterion layer for arbitrary rank `n`.
//!
//! Decomposition numbers `[nabla(tau) : L(lambda)]` are only computed for
//! `n = 2`; everything here takes them through [`CompFactorOracle`], so the
//! general-`n` tests run as soon as someone supplies such numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gl2::Gl2Engine;
use crate::schur::h_product_schur_expansion;
use crate::weights::{compositions, digit_expansion, is_column_regular, partitions, GroupParams, Weight};

/// `lambda0_1 + e * divind_bar >= (n-1)(e-1)`.
pub fn injectivity_criterion(lambda0_first: i64, divind_bar: i64, n: usize, e: i64) -> bool {
    lambda0_first + e * divind_bar >= (n as i64 - 1) * (e - 1)
}

/// The Steinberg range `lambda0_1 >= (n-1)(e-1)`, where injectivity needs no
/// further information.
pub fn steinberg_range_condition(lambda0: &Weight, e: i64) -> Result<bool> {
    if !is_column_regular(lambda0, e) {
        return Err(Error::NotColumnRegular { weight: lambda0.clone(), e });
    }
    Ok(injectivity_criterion(lambda0.first(), 0, lambda0.rank(), e))
}

/// `[nabla(tau) : L(lambda)]`.
pub trait CompFactorOracle: Sync {
    fn multiplicity(&self, tau: &Weight, lambda: &Weight) -> Result<u64>;
}

/// Every `nabla(tau)` is simple: `[nabla(tau) : L(lambda)] = delta`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SemisimpleOracle;

impl CompFactorOracle for SemisimpleOracle {
    fn multiplicity(&self, tau: &Weight, lambda: &Weight) -> Result<u64> {
        Ok(u64::from(tau == lambda))
    }
}

impl CompFactorOracle for Gl2Engine {
    fn multiplicity(&self, tau: &Weight, lambda: &Weight) -> Result<u64> {
        self.decomposition_number(tau, lambda)
    }
}

/// Necessary condition for infinitesimal injectivity of `I(lambda0 + e lambda_bar)`:
/// every `tau` with `[nabla_bar(tau) : L_bar(lambda_bar)] != 0` satisfies
/// `lambda0_1 + e tau_n >= (n-1)(e-1)`. `oracle` answers for the barred layer.
pub fn necessary_condition_check(
    lambda0: &Weight,
    lambda_bar: &Weight,
    e: i64,
    oracle: &dyn CompFactorOracle,
) -> Result<bool> {
    let n = lambda0.rank();
    if lambda_bar.rank() != n {
        return Err(Error::RankMismatch { left: n, right: lambda_bar.rank() });
    }
    for tau in partitions(lambda_bar.degree(), n) {
        if oracle.multiplicity(&tau, lambda_bar)? != 0 && !injectivity_criterion(lambda0.first(), tau.last(), n, e) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[S^alpha E : L(lambda)]`, from the good filtration of `S^alpha E` (Pieri)
/// and the decomposition numbers of each `nabla(tau)`.
pub fn sym_tensor_simple_mult(alpha: &[u64], lambda: &Weight, oracle: &dyn CompFactorOracle) -> Result<u64> {
    let mut total: u64 = 0;
    for (tau, k) in h_product_schur_expansion(alpha, lambda.rank()) {
        if tau.degree() != lambda.degree() {
            return Err(Error::DegreeMismatch { left: tau.degree(), right: lambda.degree() });
        }
        let d = oracle.multiplicity(&tau, lambda)?;
        total = k.checked_mul(d).and_then(|x| total.checked_add(x)).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// `I(lambda)` is critical iff `L(lambda)` occurs in `S(E)^{(n-1)}`, i.e. iff
/// `sum_{alpha in Lambda(n-1, deg lambda)} [S^alpha E : L(lambda)] != 0`.
pub fn criticality_via_sym_powers(lambda: &Weight, oracle: &dyn Fn(&[u64], &Weight) -> Result<u64>) -> Result<bool> {
    if !lambda.is_partition() {
        return Err(Error::NotDominantPolynomial(lambda.clone()));
    }
    let r = u64::try_from(lambda.degree()).map_err(|_| Error::Overflow)?;
    for alpha in compositions(r, lambda.rank() - 1) {
        if oracle(&alpha, lambda)? != 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// [`criticality_via_sym_powers`] with the built-in oracle; only rank 2 has one.
pub fn criticality_via_sym_powers_gl2(lambda: &Weight, params: GroupParams) -> Result<bool> {
    if lambda.rank() != 2 {
        return Err(Error::NoOracle(lambda.rank()));
    }
    let engine = Gl2Engine::shared(params);
    criticality_via_sym_powers(lambda, &|alpha, lam| sym_tensor_simple_mult(alpha, lam, &*engine))
}

/// `min lambda_n` over the composition factors `L(lambda)` of a module.
pub fn divind_from_factors(factors: &[(Weight, u64)]) -> Result<i64> {
    factors.iter().filter(|(_, m)| *m > 0).map(|(w, _)| w.last()).min().ok_or(Error::ZeroCharacter)
}

/// `mu = w0(lambda0 - (e-1) delta)`, so that `lambda0 = (e-1) delta + w0 mu`;
/// `None` outside the Steinberg range.
pub fn steinberg_complement(lambda0: &Weight, e: i64) -> Option<Weight> {
    if !matches!(steinberg_range_condition(lambda0, e), Ok(true)) {
        return None;
    }
    let n = lambda0.rank();
    Some((lambda0 - &(&Weight::delta(n) * (e - 1))).w0())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Injective,
    NotInjective,
    /// Needs `divind I_bar(lambda_bar)`, which no oracle supplies at this rank.
    Conditional,
}

/// What the criterion layer can say about infinitesimal injectivity in any
/// rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub lam: Weight,
    pub params: GroupParams,
    pub lambda0: Weight,
    pub lambda_bar: Weight,
    pub steinberg_range: bool,
    pub divind_bar: Option<i64>,
    pub verdict: Verdict,
}

/// Rank 2 uses the barred decomposition oracle; in characteristic 0 the
/// barred layer is semisimple so `divind I_bar = lambda_bar_n` in any rank;
/// otherwise only the Steinberg range decides.
pub fn criterion_report(lambda: &Weight, params: GroupParams) -> Result<CriterionReport> {
    if !lambda.is_partition() {
        return Err(Error::NotDominantPolynomial(lambda.clone()));
    }
    let exp = digit_expansion(lambda, params)?;
    let (lambda0, lambda_bar) = (exp.quantum_digit.clone(), exp.bar());
    let e = params.e();
    let n = lambda.rank();
    let steinberg_range = steinberg_range_condition(&lambda0, e)?;
    let divind_bar = if n == 2 {
        Some(Gl2Engine::shared(params).barred_divind_oracle(&lambda_bar)?)
    } else if params.p() == 0 {
        Some(lambda_bar.last())
    } else {
        None
    };
    let verdict = match divind_bar {
        Some(d) if injectivity_criterion(lambda0.first(), d, n, e) => Verdict::Injective,
        Some(_) => Verdict::NotInjective,
        None if steinberg_range => Verdict::Injective,
        None => Verdict::Conditional,
    };
    Ok(CriterionReport { lam: lambda.clone(), params, lambda0, lambda_bar, steinberg_range, divind_bar, verdict })
}
