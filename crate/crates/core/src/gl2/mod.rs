//! The rank-two theory: simple, induced and injective characters of
//! `GL_2` (classical or quantum), decomposition numbers by peeling, and the
//! digit-wise closed forms together with the brute-force character oracles
//! that check them.
//!
//! [`Gl2Engine`] caches one decomposition block per degree. The cache only
//! ever stores values that are pure functions of `(params, degree)`, so
//! concurrent callers may race to fill an entry without changing results.

mod classify;
pub mod closed;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::charring::{peel_into_basis, to_u64, Character};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::injectivity::injectivity_criterion;
use crate::schur::{h_character, schur_character};
use crate::weights::{digit_expansion, partitions, DigitExpansion, GroupParams, Weight};

pub use classify::{Branch, Classification, FactorizationDescriptor, DEFAULT_ORACLE_THRESHOLD};
pub use closed::{divind_injective_closed, is_critical_closed, is_inf_injective_closed};

/// Checks that `lambda` lies in `Lambda^+(2)`.
pub fn check_gl2(lambda: &Weight) -> Result<()> {
    if lambda.rank() != 2 {
        return Err(Error::RankMismatch { left: 2, right: lambda.rank() });
    }
    if !lambda.is_partition() {
        return Err(Error::NotDominantPolynomial(lambda.clone()));
    }
    Ok(())
}

/// `ch L(d)` for a column-regular digit: `(xy)^{d_2} h_{d_1 - d_2}`.
fn restricted_simple(d: &Weight) -> Character {
    Character::det_power(2, d.get(1)).try_mul(&h_character(d.get(0) - d.get(1), 2)).expect("rank 2")
}

/// Decomposition data for one degree `r`.
#[derive(Debug)]
struct DegreeBlock {
    /// Partitions of `r` into at most two parts, lex descending.
    taus: Vec<Weight>,
    /// `[nabla(tau) : L(lambda)]` for each `tau`, nonzero entries only.
    nabla_factors: Vec<BTreeMap<Weight, BigInt>>,
    /// `[S^r E : L(lambda)]`, peeled from `h_r`.
    sympow_factors: BTreeMap<Weight, BigInt>,
}

pub struct Gl2Engine {
    params: GroupParams,
    blocks: Mutex<HashMap<i64, Arc<DegreeBlock>>>,
}

impl std::fmt::Debug for Gl2Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gl2Engine").field("params", &self.params).finish()
    }
}

impl Gl2Engine {
    pub fn new(params: GroupParams) -> Self {
        Gl2Engine { params, blocks: Mutex::new(HashMap::new()) }
    }

    /// A process-wide engine per parameter set, so caches are shared between
    /// callers.
    pub fn shared(params: GroupParams) -> Arc<Gl2Engine> {
        static REGISTRY: OnceLock<Mutex<HashMap<GroupParams, Arc<Gl2Engine>>>> = OnceLock::new();
        let mut map = REGISTRY.get_or_init(Default::default).lock().expect("registry lock");
        map.entry(params).or_insert_with(|| Arc::new(Gl2Engine::new(params))).clone()
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// Engine for the Frobenius-twisted layer, or `None` when that layer is
    /// semisimple (characteristic 0).
    pub fn barred(&self) -> Option<Arc<Gl2Engine>> {
        self.params.barred().map(Gl2Engine::shared)
    }

    pub fn expand(&self, lambda: &Weight) -> Result<DigitExpansion> {
        check_gl2(lambda)?;
        digit_expansion(lambda, self.params)
    }

    /// `ch L(lambda)` by Steinberg's tensor product theorem: one restricted
    /// factor per digit, each twisted by the Frobenius factor of its layer.
    /// In characteristic 0 the classical layer is the Schur character of
    /// `lambda_bar`.
    pub fn simple_character(&self, lambda: &Weight) -> Result<Character> {
        let exp = self.expand(lambda)?;
        let mut acc = restricted_simple(&exp.quantum_digit);
        if self.params.p() == 0 {
            let bar = schur_character(&exp.classical_digits[0]).frobenius_twist(self.params.e());
            return acc.try_mul(&bar);
        }
        for (factor, d) in exp.layers().into_iter().skip(1) {
            acc = acc.try_mul(&restricted_simple(d).frobenius_twist(factor))?;
        }
        Ok(acc)
    }

    /// `ch S^r E` by the layer recursion `r = r0 + e r_bar`:
    /// `L(e-1,0) (S^{r_bar})^F` when `r0 = e-1`, else
    /// `L(r0,0) (S^{r_bar})^F + L(e-1,r0+1) (S^{r_bar-1})^F`.
    pub fn sympow_character_recursive(&self, r: i64) -> Character {
        sympow_recursive(r, self.params)
    }

    /// Builds the decomposition blocks of every degree up to `deg_max`, one
    /// degree per task, so a following scan never builds a block twice.
    pub fn warm(&self, deg_max: i64, exec: Execution) -> Result<()> {
        let degrees: Vec<i64> = (0..=deg_max).collect();
        exec.try_map(&degrees, |&r| self.block(r).map(drop))?;
        // A classical engine is its own barred layer.
        if let Some(bar) = self.barred().filter(|b| b.params != self.params) {
            bar.warm(deg_max / self.params.e(), exec)?;
        }
        Ok(())
    }

    fn block(&self, r: i64) -> Result<Arc<DegreeBlock>> {
        if let Some(b) = self.blocks.lock().expect("block cache lock").get(&r) {
            return Ok(b.clone());
        }
        let built = Arc::new(self.build_block(r)?);
        let mut cache = self.blocks.lock().expect("block cache lock");
        Ok(cache.entry(r).or_insert(built).clone())
    }

    fn build_block(&self, r: i64) -> Result<DegreeBlock> {
        let taus = partitions(r, 2);
        let mut simples: HashMap<Weight, Character> = HashMap::new();
        let mut basis = |w: &Weight| -> Result<Character> {
            if let Some(c) = simples.get(w) {
                return Ok(c.clone());
            }
            let c = self.simple_character(w)?;
            simples.insert(w.clone(), c.clone());
            Ok(c)
        };
        let nabla_factors =
            taus.iter().map(|tau| peel_into_basis(&schur_character(tau), &mut basis)).collect::<Result<Vec<_>>>()?;
        let sympow_factors = peel_into_basis(&h_character(r, 2), &mut basis)?;
        Ok(DegreeBlock { taus, nabla_factors, sympow_factors })
    }

    /// The composition factors of `nabla(tau)` with multiplicities.
    pub fn nabla_composition_factors(&self, tau: &Weight) -> Result<BTreeMap<Weight, u64>> {
        check_gl2(tau)?;
        let block = self.block(tau.degree())?;
        let idx = block.taus.iter().position(|t| t == tau).expect("tau is a partition of its degree");
        block.nabla_factors[idx].iter().map(|(w, m)| Ok((w.clone(), to_u64(m)?))).collect()
    }

    /// `[nabla(tau) : L(lambda)]`; zero when the degrees differ.
    pub fn decomposition_number(&self, tau: &Weight, lambda: &Weight) -> Result<u64> {
        check_gl2(tau)?;
        check_gl2(lambda)?;
        if tau.degree() != lambda.degree() {
            return Ok(0);
        }
        Ok(self.nabla_composition_factors(tau)?.get(lambda).copied().unwrap_or(0))
    }

    /// The `tau` with `[nabla(tau) : L(lambda)] != 0`, with that multiplicity.
    /// These are also the good-filtration multiplicities `(I(lambda) : nabla(tau))`.
    pub fn nabla_column(&self, lambda: &Weight) -> Result<Vec<(Weight, u64)>> {
        check_gl2(lambda)?;
        let block = self.block(lambda.degree())?;
        block
            .taus
            .iter()
            .zip(&block.nabla_factors)
            .filter_map(|(tau, factors)| factors.get(lambda).map(|m| (tau, m)))
            .map(|(tau, m)| Ok((tau.clone(), to_u64(m)?)))
            .collect()
    }

    /// `ch I(lambda) = sum_tau [nabla(tau) : L(lambda)] s_tau`.
    pub fn injective_character(&self, lambda: &Weight) -> Result<Character> {
        let mut acc = Character::zero(2);
        for (tau, m) in self.nabla_column(lambda)? {
            acc = acc.try_add(&schur_character(&tau).scale(&BigInt::from(m)))?;
        }
        Ok(acc)
    }

    /// `[S^r E : L(lambda)]` with `r = deg(lambda)`.
    pub fn sympow_multiplicity(&self, lambda: &Weight) -> Result<u64> {
        check_gl2(lambda)?;
        let block = self.block(lambda.degree())?;
        block.sympow_factors.get(lambda).map(to_u64).unwrap_or(Ok(0))
    }

    /// `I(lambda)` is critical iff `L(lambda)` is a composition factor of
    /// `S^{deg lambda} E`.
    pub fn is_critical_oracle(&self, lambda: &Weight) -> Result<bool> {
        Ok(self.sympow_multiplicity(lambda)? != 0)
    }

    /// `min tau_2` over `tau` with `[nabla(tau) : L(lambda)] != 0`.
    pub fn divind_injective_oracle(&self, lambda: &Weight) -> Result<i64> {
        Ok(self.nabla_column(lambda)?.iter().map(|(tau, _)| tau.get(1)).min().expect("tau = lambda always contributes"))
    }

    /// Divisibility index of the barred injective `I_bar(lambda_bar)` by the
    /// oracle (semisimple layer: `lambda_bar_2`).
    pub fn barred_divind_oracle(&self, lambda_bar: &Weight) -> Result<i64> {
        match self.barred() {
            Some(bar) => bar.divind_injective_oracle(lambda_bar),
            None => {
                check_gl2(lambda_bar)?;
                Ok(lambda_bar.get(1))
            }
        }
    }

    /// `ch I_bar(lambda_bar)` on the barred layer (semisimple: `s_lambda_bar`).
    pub fn barred_injective_character(&self, lambda_bar: &Weight) -> Result<Character> {
        match self.barred() {
            Some(bar) => bar.injective_character(lambda_bar),
            None => {
                check_gl2(lambda_bar)?;
                Ok(schur_character(lambda_bar))
            }
        }
    }

    /// The main criterion `lambda0_1 + e divind I_bar(lambda_bar) >= e - 1`,
    /// with the barred divisibility index taken from the oracle.
    pub fn is_inf_injective_criterion(&self, lambda: &Weight) -> Result<bool> {
        let exp = self.expand(lambda)?;
        let d = self.barred_divind_oracle(&exp.bar())?;
        Ok(injectivity_criterion(exp.quantum_digit.first(), d, 2, self.params.e()))
    }

    pub fn is_critical_closed(&self, lambda: &Weight) -> Result<bool> {
        Ok(closed::is_critical_closed(&self.expand(lambda)?))
    }

    pub fn divind_injective_closed(&self, lambda: &Weight) -> Result<i64> {
        closed::divind_injective_closed(&self.expand(lambda)?)
    }

    pub fn is_inf_injective_closed(&self, lambda: &Weight) -> Result<bool> {
        Ok(closed::is_inf_injective_closed(&self.expand(lambda)?))
    }
}

fn sympow_recursive(r: i64, params: GroupParams) -> Character {
    if r < 0 {
        return Character::zero(2);
    }
    if r == 0 {
        return Character::one(2);
    }
    let e = params.e();
    let (r0, rbar) = (r % e, r / e);
    let barred = |k: i64| -> Character {
        match params.barred() {
            Some(bp) => sympow_recursive(k, bp),
            None => h_character(k, 2),
        }
        .frobenius_twist(e)
    };
    let top = restricted_simple(&Weight::from([e - 1, 0]));
    if r0 == e - 1 {
        return top.try_mul(&barred(rbar)).expect("rank 2");
    }
    let first = restricted_simple(&Weight::from([r0, 0])).try_mul(&barred(rbar)).expect("rank 2");
    let second = restricted_simple(&Weight::from([e - 1, r0 + 1])).try_mul(&barred(rbar - 1)).expect("rank 2");
    first.try_add(&second).expect("rank 2")
}
