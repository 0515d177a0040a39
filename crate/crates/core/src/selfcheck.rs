//! Every invariant of the library as an exhaustive scan over a parameter
//! grid, reporting the first counterexample per suite.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::charring::recombine;
use crate::error::Error;
use crate::exec::Execution;
use crate::gl2::{closed, Gl2Engine};
use crate::injectivity::{
    criticality_via_sym_powers_gl2, divind_from_factors, injectivity_criterion, necessary_condition_check,
    steinberg_complement, steinberg_range_condition, SemisimpleOracle,
};
use crate::schur::{h_character, schur_character, schur_character_jt, sym_tensor_nabla_mult};
use crate::weights::{compositions, dominance_leq, is_column_regular, partitions_up_to, GroupParams, Weight};

/// A deliberate bug, so the self-check can show that it notices one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Exchange the two cases of the explicit divisibility-index formula.
    ExplicitFormulaBranch,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "explicit-branch" => Ok(Fault::ExplicitFormulaBranch),
            other => Err(Error::Parse(format!("unknown fault {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SelfCheckConfig {
    pub grid: Vec<GroupParams>,
    pub deg_max: i64,
    pub exec: Execution,
    pub fault: Option<Fault>,
}

impl SelfCheckConfig {
    pub fn new(deg_max: i64) -> Self {
        SelfCheckConfig { grid: GroupParams::default_grid(), deg_max, exec: Execution::default(), fault: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Weights (or degrees) checked per parameter set.
    pub instances: usize,
    /// 0 for suites that do not depend on the parameters.
    pub param_sets: usize,
    pub counterexample: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub deg_max: i64,
    pub grid: Vec<GroupParams>,
    pub suites: Vec<SuiteReport>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteReport> {
        self.suites.iter().filter(|s| !s.passed())
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grid: Vec<String> = self.grid.iter().map(|p| format!("({},{})", p.l(), p.p())).collect();
        writeln!(f, "selfcheck deg_max={} grid (l,p)={}", self.deg_max, grid.join(" "))?;
        for s in &self.suites {
            let scope = if s.param_sets == 0 {
                format!("{} instances", s.instances)
            } else {
                format!("{} instances x {} parameter sets", s.instances, s.param_sets)
            };
            match &s.counterexample {
                None => writeln!(f, "PASS  {:<36} {scope}", s.name)?,
                Some(c) => writeln!(f, "FAIL  {:<36} {scope}; first counterexample: {c}", s.name)?,
            }
        }
        let failed = self.failures().count();
        if failed == 0 {
            writeln!(f, "all {} suites passed", self.suites.len())
        } else {
            writeln!(f, "{failed} of {} suites failed", self.suites.len())
        }
    }
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Failure(format!($($msg)+)));
        }
    };
}

struct Runner<'a> {
    config: &'a SelfCheckConfig,
    suites: Vec<SuiteReport>,
}

impl Runner<'_> {
    /// Runs `check` for every item under every parameter set in the grid
    /// (filtered by `applies`), keeping the first failure in grid and item
    /// order.
    fn per_params<T, F>(&mut self, name: &'static str, items: &[T], applies: fn(GroupParams) -> bool, check: F)
    where
        T: Sync + fmt::Display,
        F: Fn(&Gl2Engine, &T) -> Outcome + Sync + Send,
    {
        let grid: Vec<GroupParams> = self.config.grid.iter().copied().filter(|p| applies(*p)).collect();
        let mut counterexample = None;
        for &params in &grid {
            let engine = Gl2Engine::shared(params);
            if let Err(e) = engine.warm(self.config.deg_max, self.config.exec) {
                counterexample = Some(format!("{params}: {e}"));
                break;
            }
            let results = self.config.exec.map(items, |it| check(&engine, it));
            if let Some((it, Err(Failure(msg)))) = items.iter().zip(results).find(|(_, r)| r.is_err()) {
                counterexample = Some(format!("lambda={it} {params}: {msg}"));
                break;
            }
        }
        self.suites.push(SuiteReport { name, instances: items.len(), param_sets: grid.len(), counterexample });
    }

    fn independent<T, F>(&mut self, name: &'static str, items: &[T], check: F)
    where
        T: Sync + fmt::Display,
        F: Fn(&T) -> Outcome + Sync + Send,
    {
        let results = self.config.exec.map(items, |it| check(it));
        let counterexample =
            items.iter().zip(results).find_map(|(it, r)| r.err().map(|Failure(msg)| format!("lambda={it}: {msg}")));
        self.suites.push(SuiteReport { name, instances: items.len(), param_sets: 0, counterexample });
    }
}

fn always(_: GroupParams) -> bool {
    true
}

fn positive_characteristic(p: GroupParams) -> bool {
    p.p() > 0
}

/// A degree, displayed as such in counterexamples.
struct Degree(i64);

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}", self.0)
    }
}

pub fn run_selfcheck(config: &SelfCheckConfig) -> SelfCheckReport {
    let deg_max = config.deg_max.max(0);
    let weights = partitions_up_to(deg_max, 2);
    let degrees: Vec<Degree> = (0..=deg_max).map(Degree).collect();
    let swap = config.fault == Some(Fault::ExplicitFormulaBranch);
    let mut run = Runner { config, suites: Vec::new() };

    run.per_params("divind equivalence", &weights, always, |g, lam| {
        let exp = g.expand(lam)?;
        let recursive = closed::divind_layer_recursion(&exp);
        let explicit = closed::divind_explicit_eval(&exp, swap);
        let oracle = g.divind_injective_oracle(lam)?;
        ensure!(
            recursive == oracle && explicit == oracle,
            "recursion {recursive}, explicit formula {explicit}, oracle {oracle}"
        );
        Ok(())
    });

    run.per_params("criticality equivalence", &weights, always, |g, lam| {
        let closed = g.is_critical_closed(lam)?;
        let oracle = g.is_critical_oracle(lam)?;
        let sym = criticality_via_sym_powers_gl2(lam, g.params())?;
        let divind = g.divind_injective_oracle(lam)?;
        ensure!(
            closed == oracle && oracle == sym && sym == (divind == 0),
            "closed {closed}, symmetric power {oracle}, tensor of symmetric powers {sym}, divind {divind}"
        );
        Ok(())
    });

    run.per_params("injectivity equivalence", &weights, always, |g, lam| {
        let closed = g.is_inf_injective_closed(lam)?;
        let criterion = g.is_inf_injective_criterion(lam)?;
        ensure!(closed == criterion, "closed {closed}, criterion {criterion}");
        Ok(())
    });

    run.per_params("symmetric-power recursion", &degrees, always, |g, r| {
        ensure!(g.sympow_character_recursive(r.0) == h_character(r.0, 2), "recursion differs from h_r");
        Ok(())
    });

    run.per_params("peeling soundness", &weights, always, |g, tau| {
        let factors = g.nabla_composition_factors(tau)?;
        let coeffs = factors.iter().map(|(k, v)| (k.clone(), BigInt::from(*v))).collect();
        ensure!(
            recombine(2, &coeffs, |x| g.simple_character(x))? == schur_character(tau),
            "factors do not reconstruct s_tau"
        );
        ensure!(factors.get(tau) == Some(&1), "[nabla(tau):L(tau)] = {:?}", factors.get(tau));
        if let Some(bad) = factors.keys().find(|l| !dominance_leq(l, tau)) {
            return Err(Failure(format!("factor {bad} not dominated by tau")));
        }
        Ok(())
    });

    run.per_params("simple and induced divind", &weights, always, |g, lam| {
        let s = g.simple_character(lam)?;
        ensure!(s.is_symmetric() && s.has_positive_multiplicities(), "simple character malformed");
        ensure!(s.min_last_entry()? == lam.get(1), "divind L(lambda) != lambda_2");
        ensure!(schur_character(lam).min_last_entry()? == lam.get(1), "divind nabla(lambda) != lambda_2");
        let factors: Vec<_> = g.nabla_composition_factors(lam)?.into_iter().collect();
        ensure!(divind_from_factors(&factors)? == lam.get(1), "divind from composition factors != lambda_2");
        Ok(())
    });

    run.per_params("divind bound and determinant factor", &weights, always, |g, lam| {
        let m = g.divind_injective_oracle(lam)?;
        ensure!(2 * m <= lam.degree(), "divind {m} exceeds deg/2");
        let ch = g.injective_character(lam)?;
        ensure!(ch.min_last_entry()? == m, "min last entry of ch I differs from divind {m}");
        let lower = lam - &(&Weight::omega(2) * m);
        let rhs = crate::charring::Character::det_power(2, m).try_mul(&g.injective_character(&lower)?)?;
        ensure!(ch == rhs, "ch I(lambda) != (xy)^{m} ch I(lambda - {m} omega)");
        Ok(())
    });

    run.per_params("necessary condition", &weights, always, |g, lam| {
        if !g.is_inf_injective_closed(lam)? {
            return Ok(());
        }
        let exp = g.expand(lam)?;
        let e = g.params().e();
        let ok = match g.barred() {
            Some(bar) => necessary_condition_check(&exp.quantum_digit, &exp.bar(), e, &*bar)?,
            None => necessary_condition_check(&exp.quantum_digit, &exp.bar(), e, &SemisimpleOracle)?,
        };
        ensure!(ok, "injective but some contributing tau violates lambda0_1 + e tau_2 >= e - 1");
        Ok(())
    });

    run.per_params("standard form factorisation", &weights, always, |g, lam| {
        let injective = g.is_inf_injective_closed(lam)?;
        let form = g.standard_form(lam);
        ensure!(form.is_ok() == injective, "standard form present = {}, injective = {injective}", form.is_ok());
        if let Ok(form) = form {
            let e = g.params().e();
            ensure!(form.reconstruct(e) == *lam, "{form} reconstructs {}", form.reconstruct(e));
            ensure!(g.standard_form_character(&form)? == g.injective_character(lam)?, "{form}: character differs");
        }
        Ok(())
    });

    run.per_params("higher kernel monotonicity", &weights, positive_characteristic, |g, lam| {
        let mut prev = true;
        for m in 1..=3 {
            let cur = g.is_gm_injective(lam, m)?;
            ensure!(prev || !cur, "G_{m}-injective but not G_{}-injective", m - 1);
            prev = cur;
        }
        Ok(())
    });

    run.per_params("criterion layer", &weights, always, |g, lam| {
        let e = g.params().e();
        let lam0 = g.expand(lam)?.quantum_digit;
        ensure!(is_column_regular(&lam0, e), "digit {lam0} not column regular");
        let in_range = steinberg_range_condition(&lam0, e)?;
        if in_range {
            ensure!((0..4).all(|d| injectivity_criterion(lam0.first(), d, 2, e)), "criterion not monotone");
            ensure!(g.is_inf_injective_closed(lam)?, "Steinberg range but not injective");
        }
        match steinberg_complement(&lam0, e) {
            Some(mu) => {
                ensure!(is_column_regular(&mu, e), "complement {mu} not column regular");
                ensure!(&(&Weight::delta(2) * (e - 1)) + &mu.w0() == lam0, "complement {mu} does not reconstruct");
            }
            None => ensure!(!in_range, "no complement in the Steinberg range"),
        }
        Ok(())
    });

    let small: Vec<Weight> = (1..=4).flat_map(|n| partitions_up_to(deg_max.min(12), n)).collect();
    run.independent("schur oracle agreement", &small, |lam| {
        ensure!(schur_character(lam) == schur_character_jt(lam), "tableaux and Jacobi-Trudi differ");
        Ok(())
    });

    let tiny: Vec<Weight> = (1..=4).flat_map(|n| partitions_up_to(deg_max.min(8), n)).collect();
    run.independent("symmetric tensor support", &tiny, |lam| {
        let n = lam.rank();
        let r = lam.degree() as u64;
        for m in 1..=n {
            let mut total = 0u64;
            for alpha in compositions(r, m) {
                total += sym_tensor_nabla_mult(&alpha, lam)?;
            }
            let short = lam.entries()[m..].iter().all(|&x| x == 0);
            ensure!((total != 0) == short, "m={m}: multiplicity sum {total}, at most m parts {short}");
        }
        Ok(())
    });

    SelfCheckReport { deg_max: config.deg_max, grid: config.grid.clone(), suites: run.suites }
}
