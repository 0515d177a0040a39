use std::fmt;

use serde::{Deserialize, Serialize};

use super::{closed, Gl2Engine};
use crate::charring::Character;
use crate::error::{Error, Result};
use crate::weights::{digit_expansion, GroupParams, Weight};

/// Below this degree [`Gl2Engine::classify`] runs the character oracles next
/// to the closed forms.
pub const DEFAULT_ORACLE_THRESHOLD: i64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `lambda0_1 >= e - 1`
    TopDigitLarge,
    /// `lambda0_1 < e - 1`
    TopDigitSmall,
}

/// `I(lambda) = Q(q_weight) (x) D^{det_power} (x) I_bar(bar_weight)^F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationDescriptor {
    pub q_weight: Weight,
    pub det_power: i64,
    pub bar_weight: Weight,
    pub branch: Branch,
}

impl FactorizationDescriptor {
    /// `(m0, m_bar)` with `det_power = m0 + e m_bar`, `0 <= m0 < e`.
    pub fn split_det_power(&self, e: i64) -> (i64, i64) {
        (self.det_power % e, self.det_power / e)
    }

    /// `q_weight + m omega + e bar_weight`, which must be `lambda`.
    pub fn reconstruct(&self, e: i64) -> Weight {
        let n = self.q_weight.rank();
        &(&self.q_weight + &(&Weight::omega(n) * self.det_power)) + &(&self.bar_weight * e)
    }
}

impl fmt::Display for FactorizationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{} * D^{} * I{}^F", self.q_weight, self.det_power, self.bar_weight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub lam: Weight,
    pub params: GroupParams,
    pub critical: bool,
    pub divind: i64,
    pub inf_injective: bool,
    pub standard_form: Option<FactorizationDescriptor>,
    /// Whether the character oracles were run and agreed.
    pub oracle_checked: bool,
}

impl Gl2Engine {
    /// The tensor factorisation of an infinitesimally injective `I(lambda)`.
    pub fn standard_form(&self, lambda: &Weight) -> Result<FactorizationDescriptor> {
        let exp = self.expand(lambda)?;
        let params = self.params;
        if !closed::is_inf_injective_closed(&exp) {
            return Err(Error::NotInfinitesimallyInjective { lam: lambda.clone(), params });
        }
        let e = params.e();
        let m = closed::divind_injective_closed(&exp)?;
        let (m0, mbar) = (m % e, m / e);
        let omega = Weight::omega(2);
        let lam0 = &exp.quantum_digit;
        let bar = exp.bar();
        let (q_weight, bar_weight, branch) = if lam0.first() >= e - 1 {
            (lam0 - &(&omega * m0), &bar - &(&omega * mbar), Branch::TopDigitLarge)
        } else {
            (&(lam0 - &(&omega * m0)) + &(&omega * e), &bar - &(&omega * (mbar + 1)), Branch::TopDigitSmall)
        };
        if !q_weight.is_partition() || !bar_weight.is_partition() {
            return Err(Error::Disagreement {
                what: "standard form weights",
                lam: lambda.clone(),
                params,
                left: q_weight.to_string(),
                right: bar_weight.to_string(),
            });
        }
        Ok(FactorizationDescriptor { q_weight, det_power: m, bar_weight, branch })
    }

    /// `ch Q(q) * (xy)^m * (ch I_bar(bar))^F`, the character the standard
    /// form predicts for `I(lambda)`.
    pub fn standard_form_character(&self, form: &FactorizationDescriptor) -> Result<Character> {
        let q = self.injective_character(&form.q_weight)?;
        let bar = self.barred_injective_character(&form.bar_weight)?.frobenius_twist(self.params.e());
        q.try_mul(&Character::det_power(2, form.det_power))?.try_mul(&bar)
    }

    /// Injectivity of `I(lambda)` over the `m`-th Frobenius kernel.
    ///
    /// Classical: `I(lambda)` restricted to `G_m` is injective iff every
    /// truncated shift `sum_{j >= r} p^{j-r} lambda^j`, `0 <= r < m`, gives a
    /// `G_1`-injective. Quantum: `G_inf`-injectivity of `I(lambda)` and
    /// `G_bar_m`-injectivity of `I_bar(lambda_bar)`. In characteristic 0 only
    /// `m = 1` (the infinitesimal kernel) exists.
    pub fn is_gm_injective(&self, lambda: &Weight, m: u32) -> Result<bool> {
        if m == 0 {
            return Err(Error::InvalidParams("Frobenius kernel index m must be >= 1".into()));
        }
        let exp = self.expand(lambda)?;
        let params = self.params;
        if params.p() == 0 {
            if m == 1 {
                return Ok(closed::is_inf_injective_closed(&exp));
            }
            return Err(Error::Unsupported(format!(
                "G_{m} needs positive characteristic; at {params} only the infinitesimal kernel exists"
            )));
        }
        if params.is_quantum() {
            if !closed::is_inf_injective_closed(&exp) {
                return Ok(false);
            }
            let bar_params = params.barred().expect("p > 0");
            return Gl2Engine::shared(bar_params).is_gm_injective(&exp.bar(), m);
        }
        let p = params.p();
        let digits: Vec<&Weight> = std::iter::once(&exp.quantum_digit).chain(&exp.classical_digits).collect();
        for r in 0..m as usize {
            let shifted = digits.iter().skip(r).rev().fold(Weight::zero(2), |acc, d| &(&acc * p) + d);
            if !closed::is_inf_injective_closed(&digit_expansion(&shifted, params)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The largest `m <= bound` with `G_m`-injectivity, or 0. In
    /// characteristic 0 the bound is capped at 1.
    pub fn gm_injective_up_to(&self, lambda: &Weight, bound: u32) -> Result<u32> {
        let bound = if self.params.p() == 0 { bound.min(1) } else { bound };
        let mut best = 0;
        for m in 1..=bound {
            if !self.is_gm_injective(lambda, m)? {
                break;
            }
            best = m;
        }
        Ok(best)
    }

    pub fn classify(&self, lambda: &Weight) -> Result<Classification> {
        self.classify_with_threshold(lambda, DEFAULT_ORACLE_THRESHOLD)
    }

    /// Closed forms always; for `deg lambda <= threshold` also the oracles,
    /// failing with [`Error::Disagreement`] if any pair differs.
    pub fn classify_with_threshold(&self, lambda: &Weight, threshold: i64) -> Result<Classification> {
        let exp = self.expand(lambda)?;
        let params = self.params;
        let critical = closed::is_critical_closed(&exp);
        let divind = closed::divind_injective_closed(&exp)?;
        let inf_injective = closed::is_inf_injective_closed(&exp);

        let disagree = |what: &'static str, left: String, right: String| Error::Disagreement {
            what,
            lam: lambda.clone(),
            params,
            left,
            right,
        };
        if critical != (divind == 0) {
            return Err(disagree("criticality vs divind = 0", critical.to_string(), divind.to_string()));
        }
        let oracle_checked = lambda.degree() <= threshold;
        if oracle_checked {
            let d = self.divind_injective_oracle(lambda)?;
            if d != divind {
                return Err(disagree("divind closed vs oracle", divind.to_string(), d.to_string()));
            }
            let c = self.is_critical_oracle(lambda)?;
            if c != critical {
                return Err(disagree("criticality closed vs oracle", critical.to_string(), c.to_string()));
            }
            let i = self.is_inf_injective_criterion(lambda)?;
            if i != inf_injective {
                return Err(disagree("injectivity closed vs criterion", inf_injective.to_string(), i.to_string()));
            }
        }
        let standard_form = if inf_injective { Some(self.standard_form(lambda)?) } else { None };
        Ok(Classification {
            lam: lambda.clone(),
            params,
            critical,
            divind,
            inf_injective,
            standard_form,
            oracle_checked,
        })
    }
}
