//! The character ring `Z X(n)`: sparse Laurent polynomials in `n` variables
//! with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weights::Weight;

/// A formal sum `sum_a m_a exp(a)`. Zero multiplicities are never stored,
/// so equality is map equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Character {
    rank: usize,
    terms: BTreeMap<Weight, BigInt>,
}

impl Character {
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1);
        Character { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Character::monomial(Weight::zero(rank), 1)
    }

    /// `coeff * exp(exponent)`.
    pub fn monomial(exponent: Weight, coeff: impl Into<BigInt>) -> Self {
        let mut c = Character::zero(exponent.rank());
        c.add_term(exponent, coeff.into());
        c
    }

    /// Sums repeated exponents. Panics if an exponent has the wrong rank.
    pub fn from_terms<I, C>(rank: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Weight, C)>,
        C: Into<BigInt>,
    {
        let mut c = Character::zero(rank);
        for (w, m) in terms {
            c.add_term(w, m.into());
        }
        c
    }

    /// `(x_1 ... x_n)^k`, the character of `D^{k}`.
    pub fn det_power(rank: usize, k: i64) -> Self {
        Character::monomial(&Weight::omega(rank) * k, 1)
    }

    pub(crate) fn add_term(&mut self, exponent: Weight, coeff: BigInt) {
        assert_eq!(exponent.rank(), self.rank, "exponent {exponent} has the wrong rank");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographically ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &Weight) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    fn check_rank(&self, other: &Character) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Character) -> Result<Character> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (w, m) in &other.terms {
            out.add_term(w.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Character) -> Result<Character> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Character) -> Result<Character> {
        self.check_rank(other)?;
        let mut acc: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                *acc.entry(a + b).or_default() += ma * mb;
            }
        }
        acc.retain(|_, m| !m.is_zero());
        Ok(Character { rank: self.rank, terms: acc })
    }

    /// Product of a list of characters of rank `rank` (empty product is 1).
    pub fn product<'a, I>(rank: usize, factors: I) -> Result<Character>
    where
        I: IntoIterator<Item = &'a Character>,
    {
        factors.into_iter().try_fold(Character::one(rank), |acc, f| acc.try_mul(f))
    }

    pub fn neg(&self) -> Character {
        Character { rank: self.rank, terms: self.terms.iter().map(|(w, m)| (w.clone(), -m)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Character {
        if k.is_zero() {
            return Character::zero(self.rank);
        }
        Character { rank: self.rank, terms: self.terms.iter().map(|(w, m)| (w.clone(), m * k)).collect() }
    }

    /// Multiplies by `exp(shift)`.
    pub fn shift(&self, shift: &Weight) -> Character {
        Character { rank: self.rank, terms: self.terms.iter().map(|(w, m)| (w + shift, m.clone())).collect() }
    }

    /// `chi^F`: scales every exponent by `factor`, keeping multiplicities.
    pub fn frobenius_twist(&self, factor: i64) -> Character {
        assert!(factor >= 1, "twist factor must be >= 1");
        Character { rank: self.rank, terms: self.terms.iter().map(|(w, m)| (w * factor, m.clone())).collect() }
    }

    /// Substitutes `x_n = 0` and forgets the last variable.
    pub fn drop_last_variable(&self) -> Character {
        assert!(self.rank >= 2);
        let mut out = Character::zero(self.rank - 1);
        for (w, m) in &self.terms {
            if w.last() == 0 {
                out.add_term(w.drop_last(), m.clone());
            }
        }
        out
    }

    /// Invariance of the term map under all permutations of coordinates,
    /// checked on the adjacent transpositions that generate `Sym(n)`.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.rank.saturating_sub(1) {
            for (w, m) in &self.terms {
                let mut v = w.entries().to_vec();
                v.swap(i, i + 1);
                if self.terms.get(&Weight::new(v)) != Some(m) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_positive_multiplicities(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// The minimal last entry over all exponents, which for the character of
    /// a polynomial module is its divisibility index.
    pub fn min_last_entry(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        let mut best = i64::MAX;
        for (w, m) in &self.terms {
            if !m.is_positive() {
                return Err(Error::NegativeMultiplicity(w.clone()));
            }
            if !w.is_polynomial() {
                return Err(Error::NonPolynomialExponent(w.clone()));
            }
            best = best.min(w.last());
        }
        Ok(best)
    }

    /// The lexicographically largest dominant exponent, if any.
    pub fn max_dominant_exponent(&self) -> Option<(&Weight, &BigInt)> {
        self.terms.iter().rev().find(|(w, _)| w.is_dominant())
    }

    pub fn to_json_terms(&self) -> Vec<CharTerm> {
        self.terms.iter().rev().map(|(w, m)| CharTerm { exponent: w.entries().to_vec(), mult: m.clone() }).collect()
    }

    pub fn from_json_terms(rank: usize, terms: &[CharTerm]) -> Result<Character> {
        let mut c = Character::zero(rank);
        for t in terms {
            if t.exponent.len() != rank {
                return Err(Error::RankMismatch { left: rank, right: t.exponent.len() });
            }
            c.add_term(Weight::new(t.exponent.clone()), t.mult.clone());
        }
        Ok(c)
    }
}

/// The JSON form of one term: `{"exponent": [..], "mult": ..}`. The
/// multiplicity is a JSON integer when it fits in 64 bits and a decimal
/// string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTerm {
    pub exponent: Vec<i64>,
    #[serde(with = "bigint_json")]
    pub mult: BigInt,
}

mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match m.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&m.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl fmt::Display for Character {
    /// `coeff * (a,b,...)` terms in lexicographically descending order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, m)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m} * {w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Expresses `chi` as `sum m_lambda basis(lambda)` with `m_lambda >= 0`, by
/// repeatedly subtracting the basis element at the lexicographically largest
/// dominant exponent of the remainder. Lex order refines dominance, so that
/// exponent is a highest weight whenever `chi` is a nonnegative combination
/// of elements with unique highest weight.
pub fn peel_into_basis<F>(chi: &Character, mut basis: F) -> Result<BTreeMap<Weight, BigInt>>
where
    F: FnMut(&Weight) -> Result<Character>,
{
    let mut remainder = chi.clone();
    let mut out = BTreeMap::new();
    while !remainder.is_zero() {
        let (top, coeff) = match remainder.max_dominant_exponent() {
            Some((w, m)) => (w.clone(), m.clone()),
            None => return Err(Error::NotExpressible(format!("remainder {remainder} has no dominant exponent"))),
        };
        if coeff.is_negative() {
            return Err(Error::NotExpressible(format!(
                "negative coefficient {coeff} at highest remaining weight {top}"
            )));
        }
        if out.contains_key(&top) {
            return Err(Error::NotExpressible(format!(
                "weight {top} reappeared; basis elements lack a unique highest weight"
            )));
        }
        let b = basis(&top)?;
        if !b.coefficient(&top).is_one() {
            return Err(Error::NotExpressible(format!(
                "basis element at {top} does not have its highest weight with multiplicity 1"
            )));
        }
        remainder = remainder.try_sub(&b.scale(&coeff))?;
        out.insert(top, coeff);
    }
    Ok(out)
}

/// `sum m_lambda basis(lambda)`, the inverse of [`peel_into_basis`].
pub fn recombine<F>(rank: usize, coeffs: &BTreeMap<Weight, BigInt>, mut basis: F) -> Result<Character>
where
    F: FnMut(&Weight) -> Result<Character>,
{
    let mut acc = Character::zero(rank);
    for (w, m) in coeffs {
        acc = acc.try_add(&basis(w)?.scale(m))?;
    }
    Ok(acc)
}

/// Converts a multiplicity known to be small and nonnegative.
pub(crate) fn to_u64(m: &BigInt) -> Result<u64> {
    m.to_u64().ok_or(Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::{h_character, schur_character};
    use crate::weights::partitions;
    use proptest::prelude::*;

    fn ch(terms: &[(&[i64], i64)]) -> Character {
        let rank = terms[0].0.len();
        Character::from_terms(rank, terms.iter().map(|(w, m)| (Weight::new(w.to_vec()), *m)))
    }

    fn x_plus_y() -> Character {
        ch(&[(&[1, 0], 1), (&[0, 1], 1)])
    }

    #[test]
    fn add_examples() {
        let s = x_plus_y().try_add(&x_plus_y()).unwrap();
        assert_eq!(s, ch(&[(&[1, 0], 2), (&[0, 1], 2)]));
        assert_eq!(x_plus_y().try_add(&Character::zero(2)).unwrap(), x_plus_y());
        let s20 = schur_character(&Weight::from([2, 0]));
        assert!(s20.try_add(&s20.neg()).unwrap().is_zero());
        assert!(matches!(x_plus_y().try_add(&Character::one(3)), Err(Error::RankMismatch { left: 2, right: 3 })));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(x_plus_y().try_mul(&x_plus_y()).unwrap(), ch(&[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]));
        let xy = Character::det_power(2, 1);
        assert_eq!(xy.try_mul(&x_plus_y()).unwrap(), schur_character(&Weight::from([2, 1])));
        let h1 = h_character(1, 2);
        let lhs = h1.try_mul(&h1).unwrap();
        let rhs = schur_character(&Weight::from([2, 0])).try_add(&schur_character(&Weight::from([1, 1]))).unwrap();
        assert_eq!(lhs, rhs);
        assert!(x_plus_y().try_mul(&Character::one(1)).is_err());
    }

    #[test]
    fn twist_examples() {
        assert_eq!(x_plus_y().frobenius_twist(3), ch(&[(&[3, 0], 1), (&[0, 3], 1)]));
        assert_eq!(Character::det_power(2, 1).frobenius_twist(2), ch(&[(&[2, 2], 1)]));
        let c = ch(&[(&[2, 1], 1), (&[1, 2], 1)]).frobenius_twist(2);
        assert_eq!(c, ch(&[(&[4, 2], 1), (&[2, 4], 1)]));
    }

    #[test]
    fn min_last_entry_examples() {
        let c = ch(&[(&[5, 2], 1), (&[4, 3], 1), (&[3, 4], 1), (&[2, 5], 1)]);
        assert_eq!(c.min_last_entry().unwrap(), 2);
        assert_eq!(Character::det_power(2, 1).min_last_entry().unwrap(), 1);
        for r in 0..6 {
            assert_eq!(h_character(r, 3).min_last_entry().unwrap(), 0);
        }
        assert!(matches!(Character::zero(2).min_last_entry(), Err(Error::ZeroCharacter)));
        assert!(matches!(ch(&[(&[1, 0], -1)]).min_last_entry(), Err(Error::NegativeMultiplicity(_))));
        assert!(matches!(ch(&[(&[2, -1], 1)]).min_last_entry(), Err(Error::NonPolynomialExponent(_))));
    }

    #[test]
    fn peel_examples() {
        let schur = |w: &Weight| Ok(schur_character(w));
        let m = peel_into_basis(&schur_character(&Weight::from([2, 1])), schur).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[&Weight::from([2, 1])], BigInt::from(1));

        let h2h1 = h_character(2, 3).try_mul(&h_character(1, 3)).unwrap();
        let m = peel_into_basis(&h2h1, schur).unwrap();
        let expected: BTreeMap<Weight, BigInt> =
            [(Weight::from([3, 0, 0]), 1.into()), (Weight::from([2, 1, 0]), 1.into())].into();
        assert_eq!(m, expected);
        assert_eq!(recombine(3, &m, schur).unwrap(), h2h1);
    }

    #[test]
    fn peel_rejects_illegitimate_characters() {
        let schur = |w: &Weight| Ok(schur_character(w));
        // x^2 alone is not symmetric: after subtracting s_(2,0) the remainder goes negative
        let err = peel_into_basis(&ch(&[(&[2, 0], 1)]), schur).unwrap_err();
        assert!(matches!(err, Error::NotExpressible(_)));
        let err = peel_into_basis(&schur_character(&Weight::from([1, 1])).neg(), schur).unwrap_err();
        assert!(matches!(err, Error::NotExpressible(_)));
        // a single non-dominant exponent
        let err = peel_into_basis(&ch(&[(&[0, 1], 1)]), schur).unwrap_err();
        assert!(matches!(err, Error::NotExpressible(_)));
    }

    #[test]
    fn display_and_json() {
        let c = ch(&[(&[0, 1], 1), (&[1, 0], 3)]);
        assert_eq!(c.to_string(), "3 * (1,0) + 1 * (0,1)");
        assert_eq!(Character::zero(2).to_string(), "0");
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"[{"exponent":[1,0],"mult":3},{"exponent":[0,1],"mult":1}]"#);
        let big = Character::monomial(Weight::from([1, 1]), BigInt::from(u64::MAX) * 4);
        let json = serde_json::to_string(&big).unwrap();
        let terms: Vec<CharTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(Character::from_json_terms(2, &terms).unwrap(), big);
    }

    fn arb_partition(n: usize, max_deg: i64) -> impl Strategy<Value = Weight> {
        (0..=max_deg).prop_flat_map(move |r| {
            let ps = partitions(r, n);
            (0..ps.len()).prop_map(move |i| ps[i].clone())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws_and_twist_homomorphism(
            n in 1usize..=3,
            a in 0i64..=4, b in 0i64..=4, c in 0i64..=3, k in 1i64..=3,
        ) {
            let (x, y, z) = (h_character(a, n), h_character(b, n), h_character(c, n).shift(&Weight::unit(n, 0)));
            prop_assert_eq!(x.try_mul(&y).unwrap(), y.try_mul(&x).unwrap());
            prop_assert_eq!(
                x.try_mul(&y).unwrap().try_mul(&z).unwrap(),
                x.try_mul(&y.try_mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.try_mul(&z).unwrap().frobenius_twist(k),
                x.frobenius_twist(k).try_mul(&z.frobenius_twist(k)).unwrap()
            );
        }

        #[test]
        fn divisibility_is_additive(
            (n, lam, mu) in (1usize..=4).prop_flat_map(|n| (Just(n), arb_partition(n, 5), arb_partition(n, 5)))
        ) {
            let (x, y) = (schur_character(&lam), schur_character(&mu));
            let prod = x.try_mul(&y).unwrap();
            prop_assert_eq!(
                prod.min_last_entry().unwrap(),
                x.min_last_entry().unwrap() + y.min_last_entry().unwrap()
            );
            let _ = n;
        }

        #[test]
        fn peeling_reconstructs_nonnegative_sums(
            (n, parts) in (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec((arb_partition(n, 5), 1i64..=3), 1..4)))
        ) {
            let mut chi = Character::zero(n);
            for (w, m) in &parts {
                chi = chi.try_add(&schur_character(w).scale(&BigInt::from(*m))).unwrap();
            }
            let schur = |w: &Weight| Ok(schur_character(w));
            let coeffs = peel_into_basis(&chi, schur).unwrap();
            prop_assert!(coeffs.values().all(|m| m.is_positive()));
            prop_assert_eq!(recombine(n, &coeffs, schur).unwrap(), chi);
        }
    }
}
