//! Canonical rational functions over the Laurent ring in `s` and `v`.
//!
//! A [`RatFunc`] is a fraction of two [`LaurentPoly`]s kept in a canonical
//! form so that structural equality coincides with mathematical equality for
//! every value the pipeline produces:
//!
//! * the denominator is unit-free (no overall `s^a v^b` factor), has coprime
//!   integer coefficients, and its lexicographically leading coefficient is
//!   positive; all monomial units live in the numerator;
//! * when the denominator involves only `s` (or only `v`), the univariate
//!   gcd with the numerator is cancelled.
//!
//! Denominators mixing `s` and `v` are left unreduced apart from unit and
//! scalar normalization; none of the pipeline stages produce them (every
//! denominator there is a product of quantum integers `[k]`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::{rat_int, Rational};

/// Errors from rational-function arithmetic and conversions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    /// A denominator (or divisor) was zero.
    #[error("division by zero")]
    DivisionByZero,
    /// `as_laurent` failed; the remainder witnesses the failed division.
    #[error("not a Laurent polynomial (remainder {remainder})")]
    NotPolynomial { remainder: LaurentPoly },
    /// The denominator slice needed to start a power-series expansion is not
    /// a single monomial, so no expansion in the requested direction exists.
    #[error("denominator not expandable in the requested direction")]
    NotExpandable,
}

/// A rational function `num / den` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    /// Builds and canonicalizes `num / den`. Fails when `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(num: LaurentPoly) -> Self {
        Self {
            num,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `1 / [n]` for `n != 0`.
    pub fn inv_qnum(n: i64) -> Self {
        Self::new(LaurentPoly::one(), LaurentPoly::qnum(n)).expect("[n] != 0")
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the canonical denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        // Pull all monomial units onto the numerator side.
        let (na, nb) = (num.min_s().unwrap(), num.min_v().unwrap());
        let (da, db) = (den.min_s().unwrap(), den.min_v().unwrap());
        let mut n = num.mul_monomial(-na, -nb);
        let mut d = den.mul_monomial(-da, -db);
        let shift = (na - da, nb - db);

        // Univariate gcd reduction when the denominator lives in one variable.
        let swapped = !d.is_v_free() && d.is_s_free();
        if swapped {
            n = n.swap_vars();
            d = d.swap_vars();
        }
        if d.is_v_free() {
            let mut g = d.clone();
            for slice in n.v_slices().values() {
                if g.as_constant().is_some() {
                    break;
                }
                g = LaurentPoly::gcd_v_free(&g, slice);
            }
            if g.as_constant().is_none() {
                n = n.div_exact_v_free(&g).expect("gcd divides numerator");
                d = d.div_exact_v_free(&g).expect("gcd divides denominator");
                // The gcd has a nonzero constant term, so quotients stay unit-free.
                debug_assert_eq!(d.min_s(), Some(0));
                debug_assert_eq!(n.min_s(), Some(0));
            }
        }
        if swapped {
            n = n.swap_vars();
            d = d.swap_vars();
        }

        // Scalar normalization of the denominator.
        let mut c = d.rational_content();
        if d.lex_leading().unwrap().1 < &Rational::zero() {
            c = -c;
        }
        let inv = Rational::one() / c;
        d = d.scale(&inv);
        n = n.scale(&inv);

        let n = n.mul_monomial(shift.0, shift.1);
        Self { num: n, den: d }
    }

    /// Multiplicative inverse. Fails on zero.
    pub fn recip(&self) -> Result<Self, RatFuncError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Checked division.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RatFuncError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitutes `s -> s^{-1}` and re-canonicalizes.
    pub fn subst_s_inv(&self) -> Self {
        Self::canonical(self.num.subst_s_inv(), self.den.subst_s_inv())
    }

    /// Substitutes `v -> v^{-1}` and re-canonicalizes.
    pub fn subst_v_inv(&self) -> Self {
        Self::canonical(self.num.subst_v_inv(), self.den.subst_v_inv())
    }

    /// Substitutes `v -> -v` and re-canonicalizes.
    pub fn subst_v_neg(&self) -> Self {
        Self::canonical(self.num.subst_v_neg(), self.den.subst_v_neg())
    }

    /// Substitutes `(s, v) -> (s^d, v^d)` for `d >= 1`.
    pub fn adams(&self, d: i64) -> Self {
        Self::canonical(self.num.adams(d), self.den.adams(d))
    }

    /// Converts to a Laurent polynomial, or reports the failed division.
    ///
    /// The remainder in the error is a nonzero witness of non-divisibility;
    /// for denominators mixing `s` and `v` it is the whole numerator.
    pub fn as_laurent(&self) -> Result<LaurentPoly, RatFuncError> {
        if self.den.is_one() {
            return Ok(self.num.clone());
        }
        let remainder = if self.den.is_v_free() {
            Self::division_witness(&self.num, &self.den)
        } else if self.den.is_s_free() {
            Self::division_witness(&self.num.swap_vars(), &self.den.swap_vars()).swap_vars()
        } else {
            self.num.clone()
        };
        debug_assert!(!remainder.is_zero(), "canonical form is fully reduced");
        Err(RatFuncError::NotPolynomial { remainder })
    }

    fn division_witness(num: &LaurentPoly, den: &LaurentPoly) -> LaurentPoly {
        let mut witness = LaurentPoly::zero();
        for (b, slice) in num.v_slices() {
            let m = slice.min_s().unwrap();
            let shifted = slice.mul_monomial(-m, 0);
            match shifted.divrem_s(den) {
                Some((_, r)) if r.is_zero() => {}
                Some((_, r)) => witness += &r.mul_monomial(m, b),
                None => witness += &slice.mul_monomial(0, b),
            }
        }
        witness
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        Self::constant(rat_int(c))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::canonical(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::canonical(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
