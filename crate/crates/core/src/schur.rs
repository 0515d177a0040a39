//! Characters of induced modules `nabla(lambda)` (Schur polynomials) and of
//! symmetric powers (complete homogeneous polynomials), plus the Pieri rule.
//!
//! Schur polynomials are built two independent ways, from semistandard
//! tableaux and from the Jacobi-Trudi determinant, so either can check the
//! other.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use crate::charring::Character;
use crate::error::{Error, Result};
use crate::weights::Weight;

/// `h_r` in `n` variables: every degree-`r` monomial once. Zero for `r < 0`.
pub fn h_character(r: i64, n: usize) -> Character {
    let mut c = Character::zero(n);
    if r < 0 {
        return c;
    }
    for comp in crate::weights::compositions(r as u64, n) {
        c.add_term(Weight::new(comp.into_iter().map(|x| x as i64).collect()), 1.into());
    }
    c
}

/// `s_lambda` in `n = rank(lambda)` variables, summed over semistandard
/// tableaux of shape `lambda` with entries in `1..=n`.
///
/// Panics unless `lambda` is a partition.
pub fn schur_character(lambda: &Weight) -> Character {
    assert!(lambda.is_partition(), "schur_character needs a partition, got {lambda}");
    let n = lambda.rank();
    let shape: Vec<usize> = lambda.entries().iter().map(|&x| x as usize).collect();
    let rows = shape.iter().take_while(|&&x| x > 0).count();
    let col_len: Vec<usize> =
        (0..shape.first().copied().unwrap_or(0)).map(|j| shape.iter().filter(|&&len| len > j).count()).collect();

    let mut grid: Vec<Vec<usize>> = shape.iter().take(rows).map(|&len| vec![0; len]).collect();
    let mut content = vec![0i64; n];
    let mut counts: HashMap<Vec<i64>, u64> = HashMap::new();

    struct Ctx<'a> {
        n: usize,
        shape: &'a [usize],
        rows: usize,
        col_len: &'a [usize],
    }

    fn fill(
        ctx: &Ctx<'_>,
        i: usize,
        j: usize,
        grid: &mut Vec<Vec<usize>>,
        content: &mut Vec<i64>,
        counts: &mut HashMap<Vec<i64>, u64>,
    ) {
        if i == ctx.rows {
            *counts.entry(content.clone()).or_default() += 1;
            return;
        }
        if j == ctx.shape[i] {
            fill(ctx, i + 1, 0, grid, content, counts);
            return;
        }
        let left = if j > 0 { grid[i][j - 1] } else { 0 };
        let above = if i > 0 { grid[i - 1][j] + 1 } else { 0 };
        // entries are 0-based here; row i needs entry >= i, and the cells
        // below in this column still need room to increase strictly
        let lo = left.max(above).max(i);
        let below = ctx.col_len[j] - 1 - i;
        if ctx.n < below + 1 {
            return;
        }
        let hi = ctx.n - 1 - below;
        for v in lo..=hi {
            grid[i][j] = v;
            content[v] += 1;
            fill(ctx, i, j + 1, grid, content, counts);
            content[v] -= 1;
        }
    }

    let ctx = Ctx { n, shape: &shape, rows, col_len: &col_len };
    fill(&ctx, 0, 0, &mut grid, &mut content, &mut counts);
    Character::from_terms(n, counts.into_iter().map(|(w, m)| (Weight::new(w), m)))
}

/// `s_lambda = det(h_{lambda_i - i + j})`, expanded over permutations. The
/// determinant has size equal to the number of nonzero parts.
pub fn schur_character_jt(lambda: &Weight) -> Character {
    assert!(lambda.is_partition(), "schur_character_jt needs a partition, got {lambda}");
    let n = lambda.rank();
    let parts: Vec<i64> = lambda.entries().iter().copied().take_while(|&x| x > 0).collect();
    let k = parts.len();
    if k == 0 {
        return Character::one(n);
    }
    let max_index = parts[0] + k as i64;
    let hs: Vec<Character> = (0..=max_index).map(|r| h_character(r, n)).collect();
    let h = |idx: i64| -> Option<&Character> {
        if idx < 0 {
            None
        } else {
            Some(&hs[idx as usize])
        }
    };

    let mut total = Character::zero(n);
    'perm: for perm in (0..k).permutations(k) {
        let mut factors = Vec::with_capacity(k);
        for (i, &j) in perm.iter().enumerate() {
            match h(parts[i] - i as i64 + j as i64) {
                Some(f) => factors.push(f),
                None => continue 'perm,
            }
        }
        let inversions =
            (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        let term = Character::product(n, factors).expect("same rank");
        total = if inversions % 2 == 0 { total.try_add(&term) } else { total.try_sub(&term) }.expect("same rank");
    }
    total
}

/// The partitions `mu` with `s_lambda h_r = sum s_mu`: `lambda` plus a
/// horizontal strip of size `r`, at most `n` rows. Lexicographically
/// descending.
pub fn pieri_expand(lambda: &Weight, r: i64) -> Vec<Weight> {
    assert!(lambda.is_partition(), "pieri_expand needs a partition, got {lambda}");
    let lam = lambda.entries();
    let n = lam.len();
    let mut out = Vec::new();
    if r < 0 {
        return out;
    }

    fn go(i: usize, remaining: i64, lam: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == lam.len() {
            if remaining == 0 {
                out.push(Weight::new(cur.clone()));
            }
            return;
        }
        // mu_i <= lambda_{i-1} (interlacing), unbounded in the first row
        let cap = if i == 0 { remaining } else { (lam[i - 1] - lam[i]).min(remaining) };
        for add in (0..=cap).rev() {
            cur.push(lam[i] + add);
            go(i + 1, remaining - add, lam, cur, out);
            cur.pop();
        }
    }

    go(0, r, lam, &mut Vec::with_capacity(n), &mut out);
    out
}

/// The Schur expansion of `h_{alpha_1} h_{alpha_2} ...` in `n` variables,
/// by iterated Pieri. Zero parts of `alpha` are ignored.
pub fn h_product_schur_expansion(alpha: &[u64], n: usize) -> BTreeMap<Weight, u64> {
    let mut current: BTreeMap<Weight, u64> = BTreeMap::from([(Weight::zero(n), 1)]);
    for &a in alpha.iter().filter(|&&a| a > 0) {
        let mut next: BTreeMap<Weight, u64> = BTreeMap::new();
        for (lam, m) in &current {
            for mu in pieri_expand(lam, a as i64) {
                *next.entry(mu).or_default() += m;
            }
        }
        current = next;
    }
    current
}

/// The good-filtration multiplicity `(S^alpha E : nabla(lambda))`.
pub fn sym_tensor_nabla_mult(alpha: &[u64], lambda: &Weight) -> Result<u64> {
    let deg: u64 = alpha.iter().sum();
    if deg as i64 != lambda.degree() {
        return Err(Error::DegreeMismatch { left: deg as i64, right: lambda.degree() });
    }
    if !lambda.is_partition() {
        return Err(Error::NotDominantPolynomial(lambda.clone()));
    }
    Ok(h_product_schur_expansion(alpha, lambda.rank()).get(lambda).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charring::{peel_into_basis, recombine};
    use crate::weights::{compositions, partitions, partitions_up_to};

    #[test]
    fn h_examples() {
        let h2 = h_character(2, 2);
        assert_eq!(h2.to_string(), "1 * (2,0) + 1 * (1,1) + 1 * (0,2)");
        for n in 1..=4 {
            assert_eq!(h_character(0, n), Character::one(n));
        }
        let h3 = h_character(3, 3);
        assert_eq!(h3.len(), 10);
        assert!(h3.terms().all(|(_, m)| *m == 1.into()));
        assert!(h_character(-1, 2).is_zero());
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_character(&Weight::from([2, 1])).to_string(), "1 * (2,1) + 1 * (1,2)");
        for n in 1..=4 {
            assert_eq!(schur_character(&Weight::omega(n)), Character::det_power(n, 1));
        }
        for r in 0..8 {
            assert_eq!(schur_character(&Weight::from([r, 0])), h_character(r, 2));
        }
        // more rows than variables cannot occur for a rank-n weight; a
        // partition using all n rows still works
        assert_eq!(schur_character(&Weight::from([2, 2])).to_string(), "1 * (2,2)");
    }

    #[test]
    fn jacobi_trudi_examples() {
        let h = |r| h_character(r, 2);
        let expect = h(2).try_mul(&h(1)).unwrap().try_sub(&h(3)).unwrap();
        assert_eq!(schur_character_jt(&Weight::from([2, 1])), expect);
        assert_eq!(expect.to_string(), "1 * (2,1) + 1 * (1,2)");
        for r in 0..6 {
            assert_eq!(schur_character_jt(&Weight::from([r, 0])), h(r));
        }
        let expect = h(2).try_mul(&h(2)).unwrap().try_sub(&h(3).try_mul(&h(1)).unwrap()).unwrap();
        assert_eq!(schur_character_jt(&Weight::from([2, 2])), expect);
        assert_eq!(expect.to_string(), "1 * (2,2)");
    }

    #[test]
    fn schur_is_symmetric_with_positive_terms() {
        for n in 1..=4 {
            for lam in partitions_up_to(8, n) {
                let s = schur_character(&lam);
                assert!(s.is_symmetric(), "{lam}");
                assert!(s.has_positive_multiplicities());
                assert_eq!(s.coefficient(&lam), 1.into());
            }
        }
    }

    #[test]
    fn stability_under_deleting_a_variable() {
        for n in 2..=4 {
            for lam in partitions_up_to(8, n) {
                if lam.last() != 0 {
                    continue;
                }
                assert_eq!(schur_character(&lam).drop_last_variable(), schur_character(&lam.drop_last()), "{lam}");
            }
        }
    }

    #[test]
    fn pieri_examples() {
        assert_eq!(pieri_expand(&Weight::from([1, 0]), 1), vec![Weight::from([2, 0]), Weight::from([1, 1])]);
        for n in 1..=3 {
            assert_eq!(pieri_expand(&Weight::zero(n), 4), vec![&Weight::unit(n, 0) * 4]);
        }
        assert_eq!(pieri_expand(&Weight::from([2, 1]), 2), vec![Weight::from([4, 1]), Weight::from([3, 2])]);
        // checked against character peeling
        let prod = schur_character(&Weight::from([2, 1])).try_mul(&h_character(2, 2)).unwrap();
        let peeled = peel_into_basis(&prod, |w| Ok(schur_character(w))).unwrap();
        assert_eq!(peeled.keys().rev().cloned().collect::<Vec<_>>(), pieri_expand(&Weight::from([2, 1]), 2));
    }

    #[test]
    fn pieri_matches_character_products() {
        for n in 1..=4 {
            for lam in partitions_up_to(7, n) {
                for r in 0..=(10 - lam.degree()).min(4) {
                    let mus = pieri_expand(&lam, r);
                    let mut sum = Character::zero(n);
                    for mu in &mus {
                        sum = sum.try_add(&schur_character(mu)).unwrap();
                    }
                    let prod = schur_character(&lam).try_mul(&h_character(r, n)).unwrap();
                    assert_eq!(sum, prod, "{lam} * h_{r}");
                    let distinct: std::collections::BTreeSet<_> = mus.iter().collect();
                    assert_eq!(distinct.len(), mus.len());
                }
            }
        }
    }

    #[test]
    fn sym_tensor_examples() {
        assert_eq!(sym_tensor_nabla_mult(&[1, 1], &Weight::from([1, 1])).unwrap(), 1);
        assert_eq!(sym_tensor_nabla_mult(&[2, 1], &Weight::from([2, 1])).unwrap(), 1);
        assert_eq!(sym_tensor_nabla_mult(&[3], &Weight::from([2, 1])).unwrap(), 0);
        assert!(matches!(sym_tensor_nabla_mult(&[2], &Weight::from([2, 1])), Err(Error::DegreeMismatch { .. })));
        // trailing zeros are ignored
        assert_eq!(sym_tensor_nabla_mult(&[2, 1, 0, 0], &Weight::from([2, 1])).unwrap(), 1);
    }

    #[test]
    fn sym_tensor_matches_character_peeling() {
        for n in 1..=3 {
            for r in 0..=6u64 {
                for alpha in compositions(r, 3) {
                    let prod = Character::product(
                        n,
                        alpha.iter().map(|&a| h_character(a as i64, n)).collect::<Vec<_>>().iter(),
                    )
                    .unwrap();
                    let schur = |w: &Weight| Ok(schur_character(w));
                    let peeled = peel_into_basis(&prod, schur).unwrap();
                    assert_eq!(recombine(n, &peeled, schur).unwrap(), prod);
                    for lam in partitions(r as i64, n) {
                        let via_peel = peeled.get(&lam).map(|m| crate::charring::to_u64(m).unwrap()).unwrap_or(0);
                        assert_eq!(sym_tensor_nabla_mult(&alpha, &lam).unwrap(), via_peel, "{alpha:?} {lam}");
                    }
                }
            }
        }
    }
}
