//! Formal symmetric-function series in the power-sum and Schur bases.
//!
//! A [`PSeries`] is a degree-truncated series in power sums `p_mu` of `L`
//! variable families, one per link component. Coefficients are stored in
//! the normalized convention used by all pipeline tables: the stored value
//! `c` at key `mu` represents the term `(c / z_mu) p_mu`, where `z_mu` is
//! the centralizer order. The constant term sits at the all-empty key.
//!
//! A [`SchurCoeffs`] stores plain coefficients of Schur functions `s_A`.
//! The two bases convert into each other through symmetric-group
//! characters, and the diagonal specialization operator acts on either.

use std::collections::BTreeMap;
use std::fmt;

use num::One;
use thiserror::Error;

use crate::character::character_vector;
use crate::partition::PartitionVector;
use crate::ratfunc::RatFunc;
use crate::{Int, Rational};

/// Errors from series-level operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    /// `log` needs constant term 1; `exp` needs constant term 0.
    #[error("{op} requires constant term {required}, found {found}")]
    BadConstantTerm {
        op: &'static str,
        required: i64,
        found: Box<RatFunc>,
    },
}

/// Degree-truncated series in power sums with normalized coefficients.
#[derive(Clone, Debug)]
pub struct PSeries {
    components: usize,
    degree: u32,
    truncated: bool,
    coeffs: BTreeMap<PartitionVector, RatFunc>,
}

/// Equality ignores the truncation flag.
impl PartialEq for PSeries {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && self.degree == other.degree
            && self.coeffs == other.coeffs
    }
}

impl Eq for PSeries {}

impl PSeries {
    /// The zero series on `components` variable families up to `degree`.
    pub fn new(components: usize, degree: u32) -> Self {
        assert!(components >= 1, "at least one component required");
        Self {
            components,
            degree,
            truncated: false,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series 1.
    pub fn one(components: usize, degree: u32) -> Self {
        let mut s = Self::new(components, degree);
        s.set_coeff(PartitionVector::empty(components), RatFunc::one());
        s
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// True when keys above the degree bound have been dropped somewhere in
    /// the history of this series.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Normalized coefficient at `key` (zero when absent).
    pub fn coeff(&self, key: &PartitionVector) -> RatFunc {
        self.coeffs.get(key).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// The coefficient of the all-empty key.
    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&PartitionVector::empty(self.components))
    }

    /// Sets the normalized coefficient at `key`, dropping zeros.
    ///
    /// Panics if the key has the wrong component count or exceeds the
    /// degree bound; both are usage errors.
    pub fn set_coeff(&mut self, key: PartitionVector, value: RatFunc) {
        assert_eq!(
            key.num_components(),
            self.components,
            "component count mismatch"
        );
        assert!(
            key.total_size() <= self.degree,
            "key degree {} exceeds bound {}",
            key.total_size(),
            self.degree
        );
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    /// Raw power-sum coefficient: stored value divided by `z_mu`.
    pub fn raw_coeff(&self, key: &PartitionVector) -> RatFunc {
        self.coeff(key).scale(&z_inverse(key))
    }

    /// Sets the raw power-sum coefficient at `key`.
    pub fn set_raw_coeff(&mut self, key: PartitionVector, value: RatFunc) {
        let z = Rational::from(Int::from(key.z_order()));
        self.set_coeff(key, value.scale(&z));
    }

    /// Iterates stored (nonzero) coefficients in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&PartitionVector, &RatFunc)> {
        self.coeffs.iter()
    }

    /// The stored coefficient map.
    pub fn coeffs(&self) -> &BTreeMap<PartitionVector, RatFunc> {
        &self.coeffs
    }

    fn mark_truncated(&mut self) {
        self.truncated = true;
    }

    /// Restricts to a lower degree bound, dropping higher keys.
    pub fn truncate_to(&self, degree: u32) -> Self {
        let mut out = Self::new(self.components, degree);
        out.truncated = self.truncated;
        for (k, v) in &self.coeffs {
            if k.total_size() <= degree {
                out.coeffs.insert(k.clone(), v.clone());
            } else {
                out.truncated = true;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        assert_eq!(self.components, rhs.components, "component count mismatch");
        assert_eq!(self.degree, rhs.degree, "degree bound mismatch");
        let mut out = self.clone();
        out.truncated = self.truncated || rhs.truncated;
        for (k, v) in &rhs.coeffs {
            let v = if negate { -v } else { v.clone() };
            let sum = &out.coeff(k) + &v;
            out.set_coeff(k.clone(), sum);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = -&*v;
        }
        out
    }

    /// Multiplies every coefficient by a scalar rational function.
    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = Self::new(self.components, self.degree);
        out.truncated = self.truncated;
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.coeffs {
            out.coeffs.insert(k.clone(), v * c);
        }
        out
    }

    /// Product of series; power sums multiply by multiset union of keys.
    ///
    /// Keys above the degree bound are dropped and flagged.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.components, rhs.components, "component count mismatch");
        assert_eq!(self.degree, rhs.degree, "degree bound mismatch");
        let mut raw: BTreeMap<PartitionVector, RatFunc> = BTreeMap::new();
        let mut out = Self::new(self.components, self.degree);
        out.truncated = self.truncated || rhs.truncated;
        for (ka, va) in &self.coeffs {
            let ra = va.scale(&z_inverse(ka));
            for (kb, vb) in &rhs.coeffs {
                if ka.total_size() + kb.total_size() > self.degree {
                    out.mark_truncated();
                    continue;
                }
                let key = ka.merge(kb);
                let term = &ra * &vb.scale(&z_inverse(kb));
                match raw.get_mut(&key) {
                    Some(acc) => *acc = &*acc + &term,
                    None => {
                        raw.insert(key, term);
                    }
                }
            }
        }
        for (k, v) in raw {
            out.set_raw_coeff(k, v);
        }
        out
    }

    /// Series logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_polynomial()
            || self.constant_term() != RatFunc::one()
        {
            return Err(SeriesError::BadConstantTerm {
                op: "log",
                required: 1,
                found: Box::new(self.constant_term()),
            });
        }
        let mut u = self.clone();
        u.set_coeff(PartitionVector::empty(self.components), RatFunc::zero());
        let mut acc = Self::new(self.components, self.degree);
        acc.truncated = self.truncated;
        let mut upow = u.clone();
        for k in 1..=self.degree {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = RatFunc::constant(Rational::new(Int::from(sign), Int::from(k)));
            acc = acc.add(&upow.scale(&c));
            if k < self.degree {
                upow = upow.mul(&u);
            }
        }
        acc.truncated = self.truncated;
        Ok(acc)
    }

    /// Series exponential; requires constant term 0.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::BadConstantTerm {
                op: "exp",
                required: 0,
                found: Box::new(self.constant_term()),
            });
        }
        let mut acc = Self::one(self.components, self.degree);
        let mut upow = self.clone();
        let mut factorial = Rational::one();
        for k in 1..=self.degree {
            factorial *= Rational::from(Int::from(k));
            acc = acc.add(&upow.scale(&RatFunc::constant(factorial.recip())));
            if k < self.degree {
                upow = upow.mul(self);
            }
        }
        acc.truncated = self.truncated;
        Ok(acc)
    }

    /// Adams operation on the variable side: `p_mu -> p_{d mu}` with raw
    /// coefficients transported. Keys pushed past the degree bound are
    /// dropped and flagged.
    pub fn adams_x(&self, d: u32) -> Self {
        assert!(d >= 1);
        let mut out = Self::new(self.components, self.degree);
        out.truncated = self.truncated;
        for (k, v) in &self.coeffs {
            let scaled = k.scale(d);
            if scaled.total_size() > self.degree {
                out.mark_truncated();
                continue;
            }
            let raw = v.scale(&z_inverse(k));
            out.set_raw_coeff(scaled, raw);
        }
        out
    }

    /// Adams operation on coefficients: `(s, v) -> (s^d, v^d)` per entry.
    pub fn adams_qt(&self, d: u32) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.adams(d as i64);
        }
        out
    }

    /// Diagonal specialization: the coefficient of `p_mu` picks up
    /// `prod_j 1/[mu_j]` over all parts of all components.
    pub fn specialize_qrho(&self) -> Self {
        self.qrho_twist(false)
    }

    /// Inverse of [`specialize_qrho`]: multiplies by `prod_j [mu_j]`.
    ///
    /// [`specialize_qrho`]: PSeries::specialize_qrho
    pub fn specialize_qrho_inverse(&self) -> Self {
        self.qrho_twist(true)
    }

    fn qrho_twist(&self, invert: bool) -> Self {
        let mut out = self.clone();
        for (k, v) in out.coeffs.iter_mut() {
            let factor = qnum_product(k);
            *v = if invert {
                &*v * &RatFunc::from_poly(factor)
            } else {
                v.checked_div(&RatFunc::from_poly(factor))
                    .expect("[m] is nonzero")
            };
        }
        out
    }

    /// Re-expresses the series over the Schur basis.
    pub fn to_schur_basis(&self) -> SchurCoeffs {
        let mut out = SchurCoeffs::new(self.components, self.degree);
        out.truncated = self.truncated;
        // c_A = sum over mu of chi_A(C_mu) raw_mu, blockwise in the
        // componentwise sizes.
        let mut blocks: BTreeMap<Vec<u32>, Vec<&PartitionVector>> = BTreeMap::new();
        for k in self.coeffs.keys() {
            let sizes: Vec<u32> = k.components().iter().map(|p| p.size()).collect();
            blocks.entry(sizes).or_default().push(k);
        }
        for keys in blocks.values() {
            for a in enumerate_same_shape(keys[0]) {
                let mut acc = RatFunc::zero();
                for &mu in keys {
                    let chi = character_vector(&a, mu).expect("sizes match within block");
                    if chi != 0 {
                        acc = &acc + &self.raw_coeff(mu).scale(&Rational::from(Int::from(chi)));
                    }
                }
                if !acc.is_zero() {
                    out.coeffs.insert(a, acc);
                }
            }
        }
        out
    }
}

/// `1 / z_mu` as an exact rational.
fn z_inverse(key: &PartitionVector) -> Rational {
    Rational::new(Int::one(), Int::from(key.z_order()))
}

/// `prod_j [mu_j]` over all parts of all components of `key`.
fn qnum_product(key: &PartitionVector) -> crate::laurent::LaurentPoly {
    let mut out = crate::laurent::LaurentPoly::one();
    for p in key.components() {
        for &part in p.parts() {
            out = &out * &crate::laurent::LaurentPoly::qnum(part as i64);
        }
    }
    out
}

/// All partition vectors with the same componentwise sizes as `shape`.
fn enumerate_same_shape(shape: &PartitionVector) -> Vec<PartitionVector> {
    let mut out = vec![Vec::new()];
    for comp in shape.components() {
        let choices = crate::partition::Partition::enumerate(comp.size());
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in &choices {
                let mut p: Vec<crate::partition::Partition> = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(PartitionVector::new).collect()
}

/// Coefficients of a series over the Schur basis.
#[derive(Clone, Debug)]
pub struct SchurCoeffs {
    components: usize,
    degree: u32,
    truncated: bool,
    coeffs: BTreeMap<PartitionVector, RatFunc>,
}

/// Equality ignores the truncation flag.
impl PartialEq for SchurCoeffs {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && self.degree == other.degree
            && self.coeffs == other.coeffs
    }
}

impl Eq for SchurCoeffs {}

impl SchurCoeffs {
    pub fn new(components: usize, degree: u32) -> Self {
        assert!(components >= 1, "at least one component required");
        Self {
            components,
            degree,
            truncated: false,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn coeff(&self, key: &PartitionVector) -> RatFunc {
        self.coeffs.get(key).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn set_coeff(&mut self, key: PartitionVector, value: RatFunc) {
        assert_eq!(
            key.num_components(),
            self.components,
            "component count mismatch"
        );
        assert!(key.total_size() <= self.degree, "key exceeds degree bound");
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PartitionVector, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn coeffs(&self) -> &BTreeMap<PartitionVector, RatFunc> {
        &self.coeffs
    }

    /// Re-expresses the coefficients over the power-sum basis.
    pub fn to_power_basis(&self) -> PSeries {
        let mut out = PSeries::new(self.components, self.degree);
        out.truncated = self.truncated;
        let mut blocks: BTreeMap<Vec<u32>, Vec<&PartitionVector>> = BTreeMap::new();
        for k in self.coeffs.keys() {
            let sizes: Vec<u32> = k.components().iter().map(|p| p.size()).collect();
            blocks.entry(sizes).or_default().push(k);
        }
        // Normalized coefficient at mu: sum over A of chi_A(C_mu) c_A.
        for keys in blocks.values() {
            for mu in enumerate_same_shape(keys[0]) {
                let mut acc = RatFunc::zero();
                for &a in keys {
                    let chi = character_vector(a, &mu).expect("sizes match within block");
                    if chi != 0 {
                        acc = &acc + &self.coeffs[a].scale(&Rational::from(Int::from(chi)));
                    }
                }
                if !acc.is_zero() {
                    out.coeffs.insert(mu, acc);
                }
            }
        }
        out
    }

    /// Applies the diagonal-specialization transfer matrix (or its inverse)
    /// in the Schur basis. Entries are blockwise in componentwise sizes:
    /// the scalar block entry for partitions `a, b` of `n` is
    /// `sum_mu chi_a(C_mu) chi_b(C_mu) / z_mu * prod_j [mu_j]^{\pm 1}`.
    pub fn transform_qrho(&self, inverse: bool) -> SchurCoeffs {
        let mut out = SchurCoeffs::new(self.components, self.degree);
        out.truncated = self.truncated;
        let mut blocks: BTreeMap<Vec<u32>, Vec<&PartitionVector>> = BTreeMap::new();
        for k in self.coeffs.keys() {
            let sizes: Vec<u32> = k.components().iter().map(|p| p.size()).collect();
            blocks.entry(sizes).or_default().push(k);
        }
        let mut scalar_cache: BTreeMap<(crate::partition::Partition, crate::partition::Partition), RatFunc> =
            BTreeMap::new();
        for keys in blocks.values() {
            for a in enumerate_same_shape(keys[0]) {
                let mut acc = RatFunc::zero();
                for &b in keys {
                    let mut entry = RatFunc::one();
                    for (ac, bc) in a.components().iter().zip(b.components()) {
                        let key = (ac.clone(), bc.clone());
                        let scalar = scalar_cache
                            .entry(key)
                            .or_insert_with(|| transfer_entry(ac, bc, inverse));
                        entry = &entry * scalar;
                        if entry.is_zero() {
                            break;
                        }
                    }
                    if !entry.is_zero() {
                        acc = &acc + &(&entry * &self.coeffs[b]);
                    }
                }
                if !acc.is_zero() {
                    out.coeffs.insert(a, acc);
                }
            }
        }
        out
    }
}

/// Scalar transfer-matrix entry between single partitions of the same size.
fn transfer_entry(
    a: &crate::partition::Partition,
    b: &crate::partition::Partition,
    inverse: bool,
) -> RatFunc {
    use crate::character::character;
    use crate::laurent::LaurentPoly;
    let mut acc = RatFunc::zero();
    for mu in crate::partition::Partition::enumerate(a.size()) {
        let chi = character(a, &mu).unwrap() * character(b, &mu).unwrap();
        if chi == 0 {
            continue;
        }
        let mut prod = LaurentPoly::one();
        for &part in mu.parts() {
            prod = &prod * &LaurentPoly::qnum(part as i64);
        }
        let c = Rational::new(Int::from(chi), Int::from(mu.z_order()));
        let term = if inverse {
            RatFunc::from_poly(prod).scale(&c)
        } else {
            RatFunc::new(LaurentPoly::constant(c), prod).unwrap()
        };
        acc = &acc + &term;
    }
    acc
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "[{k}]({v})")?;
            first = false;
        }
        Ok(())
    }
}
