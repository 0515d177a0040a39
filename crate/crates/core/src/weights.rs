//! Integer weights of GL_n: the lattice `X(n) = Z^n`, dominance, column
//! e-regularity and the mixed-base digit expansion used by Steinberg's tensor
//! product theorem.
//!
//! A [`Weight`] is an immutable vector of `n` integers. Operations between
//! weights of different rank are programming errors and panic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `X(n) = Z^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    /// Panics if `entries` is empty: the rank must be positive.
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(!entries.is_empty(), "a weight needs rank n >= 1");
        Weight(entries)
    }

    pub fn zero(n: usize) -> Self {
        Weight::new(vec![0; n])
    }

    /// `omega = (1, ..., 1)`, the weight of the determinant.
    pub fn omega(n: usize) -> Self {
        Weight::new(vec![1; n])
    }

    /// `delta = (n-1, ..., 1, 0)`.
    pub fn delta(n: usize) -> Self {
        Weight::new((0..n as i64).rev().collect())
    }

    /// `2 rho = 2 delta - (n-1) omega`. Only the doubled form is exposed so
    /// no half-integers are needed.
    pub fn two_rho(n: usize) -> Self {
        &(&Weight::delta(n) * 2) - &(&Weight::omega(n) * (n as i64 - 1))
    }

    /// `epsilon_i`, the i-th coordinate vector (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight::new(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    /// Entry `i`, 0-based.
    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn last(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Dominant and polynomial, i.e. a partition with at most `n` parts.
    pub fn is_partition(&self) -> bool {
        self.is_dominant() && self.is_polynomial()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// The action of the longest Weyl group element: entry reversal.
    pub fn w0(&self) -> Weight {
        let mut v = self.0.clone();
        v.reverse();
        Weight(v)
    }

    /// Entries sorted into weakly decreasing order (the dominant conjugate).
    pub fn sorted_desc(&self) -> Weight {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Weight(v)
    }

    /// Drops the last coordinate. Panics on rank 1.
    pub fn drop_last(&self) -> Weight {
        Weight::new(self.0[..self.0.len() - 1].to_vec())
    }

    /// Number of nonzero entries.
    pub fn num_nonzero(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }

    fn check_rank(&self, other: &Weight) {
        assert_eq!(self.rank(), other.rank(), "rank mismatch between weights {self} and {other}");
    }

    /// Divides every entry by `d`, returning `None` unless all are divisible.
    pub fn exact_div(&self, d: i64) -> Option<Weight> {
        if self.0.iter().all(|x| x % d == 0) {
            Some(Weight(self.0.iter().map(|x| x / d).collect()))
        } else {
            None
        }
    }

    /// Parses the command-line form `a,b,...`.
    pub fn parse_list(s: &str) -> Result<Weight> {
        s.parse()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `5,2` and, leniently, `(5,2)`.
    fn from_str(s: &str) -> Result<Weight> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        if t.trim().is_empty() {
            return Err(Error::Parse(format!("empty weight '{s}'")));
        }
        let entries = t
            .split(',')
            .map(|part| {
                part.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad weight entry '{part}' in '{s}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Weight::new(entries))
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight::new(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight::new(v.to_vec())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.check_rank(rhs);
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self.check_rank(rhs);
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// The arithmetic context: `l = 1` means `q = 1`, `l >= 2` means `q` is a
/// primitive `l`-th root of unity; `p` is the field characteristic (0 or a
/// prime). The quantum characteristic `e` is `l` when `l >= 2`, else `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GroupParams {
    l: i64,
    p: i64,
    e: i64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    l: i64,
    p: i64,
}

impl TryFrom<RawParams> for GroupParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        GroupParams::new(raw.l, raw.p)
    }
}

impl From<GroupParams> for RawParams {
    fn from(g: GroupParams) -> Self {
        RawParams { l: g.l, p: g.p }
    }
}

pub(crate) fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupParams {
    pub fn new(l: i64, p: i64) -> Result<Self> {
        if l < 1 {
            return Err(Error::InvalidParams(format!("l must be >= 1, got {l}")));
        }
        if p != 0 && !is_prime(p) {
            return Err(Error::InvalidParams(format!("p must be 0 or a prime, got {p}")));
        }
        if l == 1 && p == 0 {
            return Err(Error::InvalidParams(
                "l=1 with p=0 is the semisimple case; every polynomial injective is trivially \
                 infinitesimally injective there and nothing is computed"
                    .into(),
            ));
        }
        let e = if l >= 2 { l } else { p };
        Ok(GroupParams { l, p, e })
    }

    /// The classical group in characteristic `p`.
    pub fn classical(p: i64) -> Result<Self> {
        GroupParams::new(1, p)
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn is_quantum(&self) -> bool {
        self.l >= 2
    }

    /// Parameters of the Frobenius-twisted (barred) layer: the classical
    /// group in characteristic `p`, or `None` in characteristic zero where
    /// that layer is semisimple.
    pub fn barred(&self) -> Option<GroupParams> {
        if self.p > 0 {
            Some(GroupParams { l: 1, p: self.p, e: self.p })
        } else {
            None
        }
    }

    /// The grid every exhaustive suite runs over, as `(l, p)`.
    pub fn default_grid() -> Vec<GroupParams> {
        [(1, 2), (1, 3), (1, 5), (2, 3), (3, 2), (2, 0), (3, 0)]
            .into_iter()
            .map(|(l, p)| GroupParams::new(l, p).expect("grid entries are valid"))
            .collect()
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={},p={}", self.l, self.p)
    }
}

/// `0 <= l_1-l_2, ..., l_{n-1}-l_n, l_n < e`.
pub fn is_column_regular(lambda: &Weight, e: i64) -> bool {
    let v = lambda.entries();
    v.windows(2).all(|w| (0..e).contains(&(w[0] - w[1]))) && (0..e).contains(&lambda.last())
}

/// The unique decomposition `lambda = lambda0 + e * lambda_bar` with
/// `lambda0` column e-regular. This is not entrywise reduction mod e: the
/// digit is solved from the last entry upward.
pub fn eadic_split(lambda: &Weight, e: i64) -> (Weight, Weight) {
    assert!(e >= 2, "base must be >= 2, got {e}");
    let v = lambda.entries();
    let n = v.len();
    let mut digit = vec![0i64; n];
    digit[n - 1] = v[n - 1].rem_euclid(e);
    for i in (0..n - 1).rev() {
        digit[i] = digit[i + 1] + (v[i] - digit[i + 1]).rem_euclid(e);
    }
    let lambda0 = Weight::new(digit);
    let bar = (lambda - &lambda0).exact_div(e).expect("lambda - lambda0 is divisible by e by construction");
    (lambda0, bar)
}

/// `lambda <= mu` in the dominance order: equal degree and every prefix sum
/// of `mu - lambda` nonnegative.
pub fn dominance_leq(lambda: &Weight, mu: &Weight) -> bool {
    let diff = mu - lambda;
    if diff.degree() != 0 {
        return false;
    }
    let mut acc = 0;
    for &d in diff.entries() {
        acc += d;
        if acc < 0 {
            return false;
        }
    }
    true
}

/// The digits of a dominant polynomial weight: the quantum digit in base `e`
/// followed by the classical digits of `lambda_bar` in base `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitExpansion {
    pub quantum_digit: Weight,
    /// In characteristic `p > 0` these are the base-`p` digits of
    /// `lambda_bar` with trailing zero digits dropped (so the list is empty
    /// when `lambda_bar = 0`). In characteristic 0 it is the single,
    /// unrefined weight `lambda_bar`.
    pub classical_digits: Vec<Weight>,
    pub params: GroupParams,
}

impl DigitExpansion {
    pub fn rank(&self) -> usize {
        self.quantum_digit.rank()
    }

    /// `lambda_bar = sum_i p^i * digit_i` (or the single weight when p = 0).
    pub fn bar(&self) -> Weight {
        let n = self.rank();
        if self.params.p() == 0 {
            return self.classical_digits[0].clone();
        }
        let p = self.params.p();
        self.classical_digits.iter().rev().fold(Weight::zero(n), |acc, d| &(&acc * p) + d)
    }

    pub fn reconstruct(&self) -> Weight {
        &self.quantum_digit + &(&self.bar() * self.params.e())
    }

    /// Every digit together with the Frobenius factor of its layer:
    /// `1, e, e p, e p^2, ...` (characteristic 0: `1, e`).
    pub fn layers(&self) -> Vec<(i64, &Weight)> {
        let e = self.params.e();
        let p = self.params.p();
        let mut out = vec![(1, &self.quantum_digit)];
        let mut factor = e;
        for d in &self.classical_digits {
            out.push((factor, d));
            factor *= p.max(1);
        }
        out
    }
}

/// Splits `lambda` in base `e` and then (for `p > 0`) repeatedly splits the
/// remainder in base `p`.
pub fn digit_expansion(lambda: &Weight, params: GroupParams) -> Result<DigitExpansion> {
    if !lambda.is_partition() {
        return Err(Error::NotDominantPolynomial(lambda.clone()));
    }
    let (quantum_digit, mut rest) = eadic_split(lambda, params.e());
    let classical_digits = if params.p() == 0 {
        vec![rest]
    } else {
        let mut digits = Vec::new();
        while !rest.is_zero() {
            let (d, r) = eadic_split(&rest, params.p());
            digits.push(d);
            rest = r;
        }
        digits
    };
    Ok(DigitExpansion { quantum_digit, classical_digits, params })
}

/// Partitions of `r` into at most `n` parts (as rank-`n` weights), in
/// lexicographically descending order.
pub fn partitions(r: i64, n: usize) -> Vec<Weight> {
    fn go(remaining: i64, max_part: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Weight::new(cur.clone()));
            }
            return;
        }
        // the largest remaining part must be able to absorb the rest
        let lo = (remaining + slots as i64 - 1) / slots as i64;
        let hi = remaining.min(max_part);
        for part in (lo..=hi).rev() {
            cur.push(part);
            go(remaining - part, part, slots - 1, cur, out);
            cur.pop();
        }
    }
    assert!(n >= 1);
    let mut out = Vec::new();
    if r < 0 {
        return out;
    }
    go(r, r, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All dominant polynomial weights of rank `n` and degree `<= deg_max`,
/// ordered by degree and then lexicographically descending.
pub fn partitions_up_to(deg_max: i64, n: usize) -> Vec<Weight> {
    (0..=deg_max).flat_map(|r| partitions(r, n)).collect()
}

/// `Lambda(m, r)`: compositions of `r` into exactly `m` nonnegative parts, in
/// lexicographically descending order.
pub fn compositions(r: u64, m: usize) -> Vec<Vec<u64>> {
    fn go(remaining: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 1 {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for part in (0..=remaining).rev() {
            cur.push(part);
            go(remaining - part, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if r == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(r, m, &mut Vec::with_capacity(m), &mut out);
    out
}
