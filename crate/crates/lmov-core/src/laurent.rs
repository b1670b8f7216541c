//! Sparse Laurent polynomials in `s = q^{1/2}` and `v = t^{1/2}`.
//!
//! Exponents are stored for `s` and `v`, so a monomial `q^a t^b` has key
//! `(2a, 2b)`. Coefficients are exact rationals and zero coefficients are
//! never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{Integer, One, Signed, Zero};

use crate::{rat_int, Int, Rational};

/// Sparse bivariate Laurent polynomial over the rationals.
///
/// Keys are `(s_exponent, v_exponent)` ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c);
        p
    }

    /// The single term `c * s^a * v^b`.
    pub fn term(a: i64, b: i64, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term((a, b), c);
        p
    }

    /// The monomial `s^a * v^b`.
    pub fn monomial(a: i64, b: i64) -> Self {
        Self::term(a, b, Rational::one())
    }

    /// Builds a polynomial from `(s_exp, v_exp, numerator, denominator)` tuples.
    ///
    /// Repeated keys accumulate. Panics if a denominator is zero.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64, i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (a, b, num, den) in terms {
            p.add_term((a, b), Rational::new(Int::from(num), Int::from(den)));
        }
        p
    }

    /// The quantum integer `[n] = q^{-n/2} - q^{n/2} = s^{-n} - s^n`.
    ///
    /// `[0] = 0` and `[-n] = -[n]`.
    pub fn qnum(n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut p = Self::zero();
        p.add_term((-n, 0), Rational::one());
        p.add_term((n, 0), -Rational::one());
        p
    }

    /// The `t`-analogue `v^{-n} - v^n = t^{-n/2} - t^{n/2}`.
    pub fn vnum(n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut p = Self::zero();
        p.add_term((0, -n), Rational::one());
        p.add_term((0, n), -Rational::one());
        p
    }

    /// Adds `c` to the coefficient at `key`, dropping the term if it cancels.
    pub fn add_term(&mut self, key: (i64, i64), c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Number of stored (nonzero) terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient at `s^a v^b` (zero if absent).
    pub fn coeff(&self, a: i64, b: i64) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_s(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_s(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn min_v(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_v(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// True if no term involves `v`.
    pub fn is_v_free(&self) -> bool {
        self.terms.keys().all(|k| k.1 == 0)
    }

    /// True if no term involves `s`.
    pub fn is_s_free(&self) -> bool {
        self.terms.keys().all(|k| k.0 == 0)
    }

    /// Returns the constant value if the polynomial is constant (including 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Returns `(key, coeff)` if the polynomial has exactly one term.
    pub fn as_monomial(&self) -> Option<((i64, i64), Rational)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((*k, c.clone()))
        } else {
            None
        }
    }

    /// The lexicographically largest term.
    pub fn lex_leading(&self) -> Option<((i64, i64), &Rational)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    /// True if all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut p = Self::zero();
        for (k, a) in &self.terms {
            p.terms.insert(*k, a * c);
        }
        p
    }

    /// Multiplies by the monomial `s^a v^b`.
    pub fn mul_monomial(&self, a: i64, b: i64) -> Self {
        let mut p = Self::zero();
        for (k, c) in &self.terms {
            p.terms.insert((k.0 + a, k.1 + b), c.clone());
        }
        p
    }

    /// `self^e` by square-and-multiply.
    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes `s -> s^{-1}` (equivalently `q -> q^{-1}`).
    pub fn subst_s_inv(&self) -> Self {
        let mut p = Self::zero();
        for (k, c) in &self.terms {
            p.terms.insert((-k.0, k.1), c.clone());
        }
        p
    }

    /// Substitutes `v -> v^{-1}` (equivalently `t -> t^{-1}`).
    pub fn subst_v_inv(&self) -> Self {
        let mut p = Self::zero();
        for (k, c) in &self.terms {
            p.terms.insert((k.0, -k.1), c.clone());
        }
        p
    }

    /// Substitutes `v -> -v`: the coefficient at `v^b` picks up `(-1)^b`.
    pub fn subst_v_neg(&self) -> Self {
        let mut p = Self::zero();
        for (k, c) in &self.terms {
            let c = if k.1.rem_euclid(2) == 1 { -c } else { c.clone() };
            p.terms.insert(*k, c);
        }
        p
    }

    /// Substitutes `(s, v) -> (s^d, v^d)` for `d >= 1`.
    pub fn adams(&self, d: i64) -> Self {
        assert!(d >= 1, "adams degree must be positive");
        let mut p = Self::zero();
        for (k, c) in &self.terms {
            p.terms.insert((k.0 * d, k.1 * d), c.clone());
        }
        p
    }

    /// Swaps the roles of `s` and `v`.
    pub fn swap_vars(&self) -> Self {
        let mut p = Self::zero();
        for (k, c) in &self.terms {
            p.terms.insert((k.1, k.0), c.clone());
        }
        p
    }

    /// Splits into slices of fixed `v`-exponent; each slice is `v`-free.
    pub fn v_slices(&self) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.1).or_default().add_term((k.0, 0), c.clone());
        }
        out
    }

    /// Splits into slices of fixed `s`-exponent; each slice is `s`-free.
    pub fn s_slices(&self) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.0).or_default().add_term((0, k.1), c.clone());
        }
        out
    }

    /// Reassembles a polynomial from `v`-slices produced by [`v_slices`].
    ///
    /// [`v_slices`]: LaurentPoly::v_slices
    pub fn from_v_slices(slices: &BTreeMap<i64, LaurentPoly>) -> Self {
        let mut p = Self::zero();
        for (b, slice) in slices {
            for (k, c) in &slice.terms {
                p.add_term((k.0, *b), c.clone());
            }
        }
        p
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Returns 1 for the zero polynomial.
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut num_gcd = Int::zero();
        let mut den_lcm = Int::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Polynomial division in `s`, treating coefficients as Laurent in `v`.
    ///
    /// Requires the top `s`-slice of `den` to be a single `v`-monomial.
    /// Returns `(quot, rem)` with `num = quot * den + rem` and either
    /// `rem = 0` or `max_s(rem) < max_s(den)`. Returns `None` when `den`
    /// is zero or its top slice is not a monomial.
    pub fn divrem_s(&self, den: &Self) -> Option<(Self, Self)> {
        let den_top = den.max_s()?;
        let top_slice = den
            .terms
            .iter()
            .filter(|(k, _)| k.0 == den_top)
            .collect::<Vec<_>>();
        if top_slice.len() != 1 {
            return None;
        }
        let (&(_, lead_v), lead_c) = top_slice[0];
        let lead_inv = Rational::one() / lead_c;

        let mut quot = Self::zero();
        let mut rem = self.clone();
        while let Some(rem_top) = rem.max_s() {
            if rem_top < den_top {
                break;
            }
            let shift = rem_top - den_top;
            let mut step = Self::zero();
            for (k, c) in rem.terms.range((rem_top, i64::MIN)..) {
                step.add_term((shift, k.1 - lead_v), c * &lead_inv);
            }
            rem -= &(&step * den);
            debug_assert!(rem.max_s().is_none_or(|m| m < rem_top));
            quot += &step;
        }
        Some((quot, rem))
    }

    /// Monic-free polynomial gcd of two `v`-free polynomials, normalized to
    /// coprime integer coefficients with positive leading coefficient.
    ///
    /// `gcd(0, 0) = 0`. Panics if either input involves `v`.
    pub fn gcd_v_free(a: &Self, b: &Self) -> Self {
        assert!(a.is_v_free() && b.is_v_free(), "gcd inputs must be v-free");
        let mut a = a.clone();
        let mut b = b.clone();
        // Strip s-units so both are genuine polynomials in s.
        if let Some(m) = a.min_s() {
            a = a.mul_monomial(-m, 0);
        }
        if let Some(m) = b.min_s() {
            b = b.mul_monomial(-m, 0);
        }
        while !b.is_zero() {
            let (_, r) = a.divrem_s(&b).expect("v-free division cannot fail");
            a = b;
            b = r;
        }
        a.normalize_primitive()
    }

    /// Divides by a positive-content normalization: coprime integer
    /// coefficients, lexicographically leading coefficient positive.
    pub fn normalize_primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.rational_content();
        if self.lex_leading().unwrap().1.is_negative() {
            c = -c;
        }
        self.scale(&(Rational::one() / c))
    }

    /// Exact division by a `v`-free divisor, if possible.
    ///
    /// Handles arbitrary Laurent numerators by working slice by slice in `v`
    /// and stripping `s`-units before each polynomial division.
    pub fn div_exact_v_free(&self, den: &Self) -> Option<Self> {
        assert!(den.is_v_free() && !den.is_zero());
        if self.is_zero() {
            return Some(Self::zero());
        }
        let den_min = den.min_s().unwrap();
        let den = den.mul_monomial(-den_min, 0);
        let mut out = Self::zero();
        for (b, slice) in self.v_slices() {
            let m = slice.min_s().unwrap();
            let shifted = slice.mul_monomial(-m, 0);
            let (q, r) = shifted.divrem_s(&den)?;
            if !r.is_zero() {
                return None;
            }
            out += &q.mul_monomial(m - den_min, b);
        }
        Some(out)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms.iter().map(|(k, c)| (*k, c)) {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const_key = a == 0 && b == 0;
            if !mag.is_one() || is_const_key {
                write!(f, "{mag}")?;
                if !is_const_key {
                    write!(f, "*")?;
                }
            }
            if a != 0 {
                write!(f, "s^{a}")?;
                if b != 0 {
                    write!(f, "*")?;
                }
            }
            if b != 0 {
                write!(f, "v^{b}")?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, -c.clone());
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term((ka.0 + kb.0, ka.1 + kb.1), ca * cb);
            }
        }
        out
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (k, c) in &self.terms {
            p.terms.insert(*k, -c.clone());
        }
        p
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(rat_int(c))
    }
}
