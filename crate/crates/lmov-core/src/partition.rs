//! Integer partitions and fixed-length vectors of partitions.
//!
//! Partitions are stored as weakly decreasing vectors of positive parts.
//! Partition vectors index multi-component (link) tables; the number of
//! components is fixed per table and mixing lengths is a usage error.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::Integer;

/// An integer partition with weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from arbitrary parts: zeros are dropped and the
    /// rest is sorted into weakly decreasing order.
    pub fn new<I: IntoIterator<Item = u32>>(parts: I) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The conjugate (transposed Young diagram) partition.
    pub fn conjugate(&self) -> Self {
        let cols = self.parts.first().copied().unwrap_or(0) as usize;
        let mut parts = Vec::with_capacity(cols);
        for c in 1..=cols as u32 {
            parts.push(self.parts.iter().filter(|&&p| p >= c).count() as u32);
        }
        Self { parts }
    }

    /// Multiplies every part by `d >= 1`.
    pub fn scale(&self, d: u32) -> Self {
        assert!(d >= 1);
        Self {
            parts: self.parts.iter().map(|p| p * d).collect(),
        }
    }

    /// Divides every part by `d` if all parts are divisible.
    pub fn divide(&self, d: u32) -> Option<Self> {
        assert!(d >= 1);
        let parts = self
            .parts
            .iter()
            .map(|p| (p % d == 0).then_some(p / d))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { parts })
    }

    /// Greatest common divisor of the parts (0 for the empty partition).
    pub fn gcd_parts(&self) -> u32 {
        self.parts.iter().fold(0u32, |g, &p| g.gcd(&p))
    }

    /// Positive integers `d` with `self = d * nu` for some partition `nu`,
    /// in increasing order. Empty for the empty partition.
    pub fn divisors(&self) -> Vec<u32> {
        divisors_of(self.gcd_parts())
    }

    /// The centralizer order `prod_j j^{m_j} m_j!` where `m_j` counts parts
    /// equal to `j`.
    pub fn z_order(&self) -> u128 {
        let mut z: u128 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let j = self.parts[i];
            let mut m = 0u128;
            while i < self.parts.len() && self.parts[i] == j {
                m += 1;
                i += 1;
            }
            for k in 1..=m {
                z *= j as u128 * k;
            }
        }
        z
    }

    /// All partitions of `n` in increasing [`Ord`] order.
    pub fn enumerate(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for p in 1..=n.min(max) {
                prefix.push(p);
                rec(n - p, p, prefix, out);
                prefix.pop();
            }
        }
        // The leading (largest) part runs in ascending order, which yields
        // the Ord order within fixed size.
        let mut out = Vec::new();
        rec(n, n.max(1), &mut Vec::new(), &mut out);
        out
    }
}

/// Divisors of `n` in increasing order; empty for `n = 0`.
pub fn divisors_of(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let strs: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl FromStr for Partition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let p: u32 = piece
                .trim()
                .parse()
                .map_err(|_| format!("invalid partition part `{piece}`"))?;
            if p == 0 {
                return Err("partition parts must be positive".into());
            }
            parts.push(p);
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(format!("parts not weakly decreasing in `{s}`"));
            }
        }
        Ok(Self { parts })
    }
}

/// A fixed-length vector of partitions (one per link component).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartitionVector {
    components: Vec<Partition>,
}

impl PartitionVector {
    pub fn new(components: Vec<Partition>) -> Self {
        Self { components }
    }

    /// `l` empty partitions.
    pub fn empty(l: usize) -> Self {
        Self {
            components: vec![Partition::empty(); l],
        }
    }

    /// Single-component vector.
    pub fn single(p: Partition) -> Self {
        Self {
            components: vec![p],
        }
    }

    pub fn components(&self) -> &[Partition] {
        &self.components
    }

    /// Number of components `L`.
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Sum of the component sizes.
    pub fn total_size(&self) -> u32 {
        self.components.iter().map(Partition::size).sum()
    }

    /// Sum of the component lengths.
    pub fn total_length(&self) -> usize {
        self.components.iter().map(Partition::len).sum()
    }

    pub fn is_all_empty(&self) -> bool {
        self.components.iter().all(Partition::is_empty)
    }

    /// Product of the component centralizer orders.
    pub fn z_order(&self) -> u128 {
        self.components.iter().map(Partition::z_order).product()
    }

    /// Componentwise conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            components: self.components.iter().map(Partition::conjugate).collect(),
        }
    }

    pub fn scale(&self, d: u32) -> Self {
        Self {
            components: self.components.iter().map(|p| p.scale(d)).collect(),
        }
    }

    pub fn divide(&self, d: u32) -> Option<Self> {
        let components = self
            .components
            .iter()
            .map(|p| p.divide(d))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { components })
    }

    /// Gcd of all parts across all components (0 when all empty).
    pub fn gcd_parts(&self) -> u32 {
        self.components
            .iter()
            .fold(0u32, |g, p| g.gcd(&p.gcd_parts()))
    }

    /// Common divisors across all components; empty when all are empty.
    pub fn divisors(&self) -> Vec<u32> {
        divisors_of(self.gcd_parts())
    }

    /// Componentwise multiset union (concatenation of parts).
    ///
    /// Panics if the component counts differ.
    pub fn merge(&self, other: &Self) -> Self {
        assert_eq!(
            self.num_components(),
            other.num_components(),
            "component count mismatch"
        );
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| Partition::new(a.parts.iter().chain(&b.parts).copied()))
            .collect();
        Self { components }
    }

    /// All `l`-component vectors of total size exactly `n`.
    pub fn enumerate(l: usize, n: u32) -> Vec<PartitionVector> {
        fn rec(l: usize, n: u32, prefix: &mut Vec<Partition>, out: &mut Vec<PartitionVector>) {
            if l == 0 {
                if n == 0 {
                    out.push(PartitionVector {
                        components: prefix.clone(),
                    });
                }
                return;
            }
            if l == 1 {
                for p in Partition::enumerate(n) {
                    prefix.push(p);
                    rec(0, 0, prefix, out);
                    prefix.pop();
                }
                return;
            }
            for k in 0..=n {
                for p in Partition::enumerate(k) {
                    prefix.push(p);
                    rec(l - 1, n - k, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(l, n, &mut Vec::new(), &mut out);
        out
    }

    /// All `l`-component vectors of total size `1..=d`, lowest degree first.
    pub fn enumerate_up_to(l: usize, d: u32) -> Vec<PartitionVector> {
        (1..=d).flat_map(|n| Self::enumerate(l, n)).collect()
    }
}

impl Ord for PartitionVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_size()
            .cmp(&other.total_size())
            .then_with(|| self.components.cmp(&other.components))
    }
}

impl PartialOrd for PartitionVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.components.iter().map(Partition::to_string).collect();
        write!(f, "{}", strs.join("|"))
    }
}

impl FromStr for PartitionVector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let components = s
            .split('|')
            .map(Partition::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { components })
    }
}

impl From<Partition> for PartitionVector {
    fn from(p: Partition) -> Self {
        Self::single(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent partition counter (part-size dynamic program).
    fn count_partitions(n: usize) -> usize {
        let mut table = vec![vec![0usize; n + 1]; n + 1];
        for row in table.iter_mut() {
            row[0] = 1;
        }
        for k in 1..=n {
            for m in 1..=n {
                table[k][m] = table[k - 1][m] + if m >= k { table[k][m - k] } else { 0 };
            }
        }
        table[n][n]
    }

    #[test]
    fn enumeration_counts_match_oracle() {
        let expected: Vec<usize> = (0..=8).map(count_partitions).collect();
        assert_eq!(expected[4], 5);
        assert_eq!(expected[6], 11);
        for n in 0..=8u32 {
            let all = Partition::enumerate(n);
            assert_eq!(all.len(), expected[n as usize], "p({n})");
            for p in &all {
                assert_eq!(p.size(), n);
                assert!(p.parts.windows(2).all(|w| w[0] >= w[1]));
                assert!(p.parts.iter().all(|&x| x > 0));
            }
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, all, "enumeration is sorted and duplicate-free");
        }
    }

    #[test]
    fn centralizer_orders() {
        let z = |parts: &[u32]| Partition::new(parts.iter().copied()).z_order();
        assert_eq!(Partition::empty().z_order(), 1);
        assert_eq!(z(&[1]), 1);
        assert_eq!(z(&[2]), 2);
        assert_eq!(z(&[1, 1]), 2);
        assert_eq!(z(&[1, 1, 1]), 6);
        assert_eq!(z(&[2, 2]), 8);
        assert_eq!(z(&[3, 1]), 3);
    }

    #[test]
    fn conjugacy_class_sizes_sum_to_group_order() {
        let factorial = |n: u128| (1..=n).product::<u128>();
        for n in 1..=6u32 {
            let total: u128 = Partition::enumerate(n)
                .iter()
                .map(|mu| factorial(n as u128) / mu.z_order())
                .sum();
            assert_eq!(total, factorial(n as u128));
        }
    }

    #[test]
    fn z_order_scaling() {
        // z(d*mu) = d^{len(mu)} * z(mu)
        for mu in Partition::enumerate(5) {
            for d in 1..=3u32 {
                assert_eq!(
                    mu.scale(d).z_order(),
                    (d as u128).pow(mu.len() as u32) * mu.z_order()
                );
            }
        }
    }

    #[test]
    fn conjugation() {
        let p = Partition::new([5, 4, 2, 1]);
        assert_eq!(p.conjugate(), Partition::new([4, 3, 2, 2, 1]));
        assert_eq!(Partition::new([4]).conjugate(), Partition::new([1, 1, 1, 1]));
        for n in 0..=6 {
            for p in Partition::enumerate(n) {
                assert_eq!(p.conjugate().conjugate(), p);
                assert_eq!(p.conjugate().size(), p.size());
            }
        }
    }

    #[test]
    fn scaling_and_divisors() {
        let p = Partition::new([4, 2]);
        assert_eq!(p.divisors(), vec![1, 2]);
        assert_eq!(p.divide(2), Some(Partition::new([2, 1])));
        assert_eq!(p.divide(3), None);
        assert_eq!(Partition::new([3, 2]).divisors(), vec![1]);
        assert_eq!(Partition::new([2, 1]).scale(3), Partition::new([6, 3]));
        assert!(Partition::empty().divisors().is_empty());
    }

    #[test]
    fn order_matches_enumeration() {
        let all = Partition::enumerate(6);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(Partition::new([4]) < Partition::new([1, 1, 1, 1, 1]));
    }

    #[test]
    fn parse_display_roundtrip() {
        for text in ["-", "1", "5,4,2,1", "2,2,1"] {
            let p: Partition = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        assert!("3,4".parse::<Partition>().is_err());
        assert!("0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());

        let v: PartitionVector = "2,1|-".parse().unwrap();
        assert_eq!(v.num_components(), 2);
        assert_eq!(v.total_size(), 3);
        assert_eq!(v.to_string(), "2,1|-");
    }

    #[test]
    fn vector_enumeration() {
        // Two components, total 2: p(0)p(2) + p(1)p(1) + p(2)p(0) = 5.
        let vecs = PartitionVector::enumerate(2, 2);
        assert_eq!(vecs.len(), 5);
        for v in &vecs {
            assert_eq!(v.total_size(), 2);
            assert_eq!(v.num_components(), 2);
        }
        let upto = PartitionVector::enumerate_up_to(2, 2);
        assert_eq!(upto.len(), 2 + 5);
        assert!(upto.iter().all(|v| !v.is_all_empty()));
    }

    #[test]
    fn vector_merge_and_scale() {
        let a: PartitionVector = "2,1|3".parse().unwrap();
        let b: PartitionVector = "2|1,1".parse().unwrap();
        assert_eq!(a.merge(&b).to_string(), "2,2,1|3,1,1");
        assert_eq!(a.scale(2).to_string(), "4,2|6");
        assert_eq!(a.scale(2).divide(2), Some(a.clone()));
        assert_eq!(a.z_order(), 2 * 3);
        assert_eq!(a.gcd_parts(), 1);
        assert_eq!("4,2|6".parse::<PartitionVector>().unwrap().divisors(), vec![1, 2]);
    }
}
