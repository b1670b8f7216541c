//! Exact irreducible characters of symmetric groups.
//!
//! `character(a, mu)` evaluates the character of the irreducible
//! representation labeled by the partition `a` on the conjugacy class of
//! cycle type `mu`, by recursive border-strip removal on beta-numbers with
//! global memoization. Values are exact integers.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use thiserror::Error;

use crate::partition::{Partition, PartitionVector};

/// Errors from character evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CharacterError {
    /// The representation label and the cycle type have different sizes.
    #[error("partition sizes differ: row {row} vs class {class}")]
    SizeMismatch { row: u32, class: u32 },
}

type CacheKey = (Vec<u32>, Vec<u32>);

static CACHE: LazyLock<Mutex<HashMap<CacheKey, i64>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// The symmetric-group character `chi_a` at the class of cycle type `mu`.
pub fn character(a: &Partition, mu: &Partition) -> Result<i64, CharacterError> {
    if a.size() != mu.size() {
        return Err(CharacterError::SizeMismatch {
            row: a.size(),
            class: mu.size(),
        });
    }
    Ok(chi(a.parts(), mu.parts()))
}

/// Product of componentwise characters for partition vectors.
///
/// Panics if the component counts differ (fixed per table); fails if any
/// componentwise sizes differ.
pub fn character_vector(
    a: &PartitionVector,
    mu: &PartitionVector,
) -> Result<i64, CharacterError> {
    assert_eq!(
        a.num_components(),
        mu.num_components(),
        "component count mismatch"
    );
    let mut out = 1i64;
    for (ac, mc) in a.components().iter().zip(mu.components()) {
        out *= character(ac, mc)?;
    }
    Ok(out)
}

fn chi(a: &[u32], mu: &[u32]) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (a.to_vec(), mu.to_vec());
    if let Some(&v) = CACHE.lock().unwrap().get(&key) {
        return v;
    }
    let r = mu[0] as i64;
    let rest = &mu[1..];

    // Beta-numbers: strictly decreasing shifted parts.
    let l = a.len();
    let betas: Vec<i64> = a
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 + (l - 1 - i) as i64)
        .collect();

    let mut total = 0i64;
    for i in 0..l {
        let target = betas[i] - r;
        if target < 0 || betas.contains(&target) {
            continue;
        }
        // Removing the strip moves beta_i down past every beta strictly
        // between; each crossing contributes a sign.
        let crossings = betas
            .iter()
            .filter(|&&b| target < b && b < betas[i])
            .count();
        let sign = if crossings % 2 == 0 { 1 } else { -1 };

        let mut new_betas = betas.clone();
        new_betas[i] = target;
        new_betas.sort_unstable_by(|x, y| y.cmp(x));
        let new_parts: Vec<u32> = new_betas
            .iter()
            .enumerate()
            .map(|(k, &b)| (b - (l - 1 - k) as i64) as u32)
            .filter(|&p| p > 0)
            .collect();
        total += sign * chi(&new_parts, rest);
    }

    CACHE.lock().unwrap().insert(key, total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn trivial_and_sign_characters() {
        for n in 1..=6u32 {
            let triv = Partition::new([n]);
            let sgn = Partition::new(vec![1; n as usize]);
            for mu in Partition::enumerate(n) {
                assert_eq!(character(&triv, &mu).unwrap(), 1);
                let parity = (n as usize - mu.len()) % 2;
                assert_eq!(
                    character(&sgn, &mu).unwrap(),
                    if parity == 0 { 1 } else { -1 }
                );
            }
        }
    }

    #[test]
    fn small_frozen_values() {
        let chi21 = |mu: &[u32]| {
            character(&Partition::new([2, 1]), &Partition::new(mu.to_vec())).unwrap()
        };
        assert_eq!(chi21(&[1, 1, 1]), 2);
        assert_eq!(chi21(&[2, 1]), 0);
        assert_eq!(chi21(&[3]), -1);
        assert_eq!(
            character(&Partition::new([1, 1]), &Partition::new([2])).unwrap(),
            -1
        );
        assert_eq!(
            character(&Partition::empty(), &Partition::empty()).unwrap(),
            1
        );
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let err = character(&Partition::new([2]), &Partition::new([3])).unwrap_err();
        assert_eq!(err, CharacterError::SizeMismatch { row: 2, class: 3 });
    }

    #[test]
    fn vector_characters_multiply() {
        let a: PartitionVector = "2|1,1".parse().unwrap();
        let mu: PartitionVector = "1,1|2".parse().unwrap();
        assert_eq!(character_vector(&a, &mu).unwrap(), -1);
    }

    // Independent oracle: the Jacobi bialternant form. chi_a(C_mu) is the
    // coefficient of x^{a + delta} in p_mu(x) * a_delta(x) over len(a)
    // variables, where a_delta is the Vandermonde alternant.
    type MPoly = BTreeMap<Vec<i64>, i64>;

    fn mpoly_mul(p: &MPoly, q: &MPoly) -> MPoly {
        let mut out = MPoly::new();
        for (ea, ca) in p {
            for (eb, cb) in q {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert(0) += ca * cb;
            }
        }
        out
    }

    fn power_sum(r: u32, m: usize) -> MPoly {
        let mut out = MPoly::new();
        for i in 0..m {
            let mut e = vec![0i64; m];
            e[i] = r as i64;
            out.insert(e, 1);
        }
        out
    }

    fn permutations_with_sign(m: usize) -> Vec<(Vec<usize>, i64)> {
        fn rec(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                prefix.push(x);
                rec(rest, prefix, out);
                prefix.pop();
                rest.insert(i, x);
            }
        }
        let mut perms = Vec::new();
        rec(&mut (0..m).collect(), &mut Vec::new(), &mut perms);
        perms
            .into_iter()
            .map(|p| {
                let mut inv = 0;
                for i in 0..p.len() {
                    for j in i + 1..p.len() {
                        if p[i] > p[j] {
                            inv += 1;
                        }
                    }
                }
                let sign = if inv % 2 == 0 { 1 } else { -1 };
                (p, sign)
            })
            .collect()
    }

    fn oracle_character(a: &Partition, mu: &Partition) -> i64 {
        let m = a.len().max(1);
        let mut pmu = MPoly::new();
        pmu.insert(vec![0; m], 1);
        for &r in mu.parts() {
            pmu = mpoly_mul(&pmu, &power_sum(r, m));
        }
        let mut alternant = MPoly::new();
        for (perm, sign) in permutations_with_sign(m) {
            let mut e = vec![0i64; m];
            for (pos, &img) in perm.iter().enumerate() {
                e[pos] = (m - 1 - img) as i64;
            }
            *alternant.entry(e).or_insert(0) += sign;
        }
        let product = mpoly_mul(&pmu, &alternant);
        let mut target = vec![0i64; m];
        for (i, t) in target.iter_mut().enumerate() {
            *t = a.parts().get(i).copied().unwrap_or(0) as i64 + (m - 1 - i) as i64;
        }
        product.get(&target).copied().unwrap_or(0)
    }

    #[test]
    fn matches_bialternant_oracle_up_to_degree_five() {
        for n in 0..=5u32 {
            for a in Partition::enumerate(n) {
                for mu in Partition::enumerate(n) {
                    assert_eq!(
                        character(&a, &mu).unwrap(),
                        oracle_character(&a, &mu),
                        "chi_{a}(C_{mu})"
                    );
                }
            }
        }
    }

    #[test]
    fn row_orthogonality() {
        for n in 1..=6u32 {
            let factorial: i128 = (1..=n as i128).product();
            let rows = Partition::enumerate(n);
            let classes = Partition::enumerate(n);
            for a in &rows {
                for b in &rows {
                    let mut acc: i128 = 0;
                    for mu in &classes {
                        let class_size = factorial / mu.z_order() as i128;
                        acc += class_size
                            * character(a, mu).unwrap() as i128
                            * character(b, mu).unwrap() as i128;
                    }
                    let expect = if a == b { factorial } else { 0 };
                    assert_eq!(acc, expect, "rows {a}, {b}");
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=6u32 {
            let rows = Partition::enumerate(n);
            for mu in Partition::enumerate(n) {
                for nu in Partition::enumerate(n) {
                    let acc: i128 = rows
                        .iter()
                        .map(|a| {
                            character(a, &mu).unwrap() as i128
                                * character(a, &nu).unwrap() as i128
                        })
                        .sum();
                    let expect = if mu == nu { mu.z_order() as i128 } else { 0 };
                    assert_eq!(acc, expect, "classes {mu}, {nu}");
                }
            }
        }
    }

    #[test]
    fn transpose_rule() {
        for n in 1..=6u32 {
            for a in Partition::enumerate(n) {
                for mu in Partition::enumerate(n) {
                    let sign = if (mu.size() as usize - mu.len()).is_multiple_of(2) {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(
                        character(&a.conjugate(), &mu).unwrap(),
                        sign * character(&a, &mu).unwrap()
                    );
                }
            }
        }
    }
}
