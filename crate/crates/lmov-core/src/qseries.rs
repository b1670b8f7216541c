//! Truncated power-series expansions of rational functions in `s`.
//!
//! A [`QSeries`] is the expansion of a rational function around `s = 0`
//! (ascending mode, valid for `|q| < 1`) or around `s = infinity`
//! (descending mode, valid for `|q| > 1`). Coefficients are `v`-Laurent
//! polynomials. Every coefficient inside the series window is exact; the
//! window endpoint is the only truncation.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use crate::laurent::LaurentPoly;
use crate::ratfunc::{RatFunc, RatFuncError};
use crate::Rational;

/// Direction of a power-series expansion in `s`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ExpandMode {
    /// Ascending powers of `s` (expansion around `q = 0`).
    Q,
    /// Descending powers of `s` (expansion around `q = infinity`).
    QInverse,
}

impl fmt::Display for ExpandMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpandMode::Q => write!(f, "q"),
            ExpandMode::QInverse => write!(f, "qinv"),
        }
    }
}

impl FromStr for ExpandMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" => Ok(ExpandMode::Q),
            "qinv" => Ok(ExpandMode::QInverse),
            other => Err(format!("unknown expansion mode `{other}`")),
        }
    }
}

/// A truncated Laurent series in `s` with `v`-polynomial coefficients.
///
/// In mode [`ExpandMode::Q`] the `k`-th stored coefficient belongs to
/// `s^{start + k}` and all exponents below `start` are exactly zero; in
/// [`ExpandMode::QInverse`] it belongs to `s^{start - k}` and all exponents
/// above `start` are exactly zero. An empty coefficient vector represents
/// the exact zero series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    mode: ExpandMode,
    start: i64,
    coeffs: Vec<LaurentPoly>,
}

impl QSeries {
    /// The exact zero series.
    pub fn zero(mode: ExpandMode) -> Self {
        Self {
            mode,
            start: 0,
            coeffs: Vec::new(),
        }
    }

    /// Expands `f` to the given order (number of terms minus one).
    ///
    /// Fails with [`RatFuncError::NotExpandable`] when the denominator slice
    /// at the approach side is not a single `v`-monomial.
    pub fn expand(f: &RatFunc, order: usize, mode: ExpandMode) -> Result<Self, RatFuncError> {
        match mode {
            ExpandMode::Q => Self::expand_ascending(f, order),
            ExpandMode::QInverse => {
                Ok(Self::expand_ascending(&f.subst_s_inv(), order)?.mirror())
            }
        }
    }

    fn expand_ascending(f: &RatFunc, order: usize) -> Result<Self, RatFuncError> {
        if f.is_zero() {
            return Ok(Self::zero(ExpandMode::Q));
        }
        let nslices = f.numerator().s_slices();
        let dslices = f.denominator().s_slices();
        let alpha = f.numerator().min_s().unwrap();
        let beta = f.denominator().min_s().unwrap();
        let ((_, d0v), d0c) = dslices[&beta]
            .as_monomial()
            .ok_or(RatFuncError::NotExpandable)?;
        let d0c_inv = d0c.recip();

        let mut coeffs: Vec<LaurentPoly> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = nslices
                .get(&(alpha + k as i64))
                .cloned()
                .unwrap_or_default();
            for j in 1..=k {
                if let Some(dj) = dslices.get(&(beta + j as i64)) {
                    acc -= &(dj * &coeffs[k - j]);
                }
            }
            coeffs.push(acc.mul_monomial(0, -d0v).scale(&d0c_inv));
        }
        Ok(Self {
            mode: ExpandMode::Q,
            start: alpha - beta,
            coeffs,
        }
        .canon())
    }

    fn canon(mut self) -> Self {
        let leading_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if leading_zeros == self.coeffs.len() {
            // All-zero window: keep the window length as knowledge of zeros.
            return self;
        }
        self.coeffs.drain(..leading_zeros);
        self.start += self.dir() * leading_zeros as i64;
        self
    }

    fn dir(&self) -> i64 {
        match self.mode {
            ExpandMode::Q => 1,
            ExpandMode::QInverse => -1,
        }
    }

    pub fn mode(&self) -> ExpandMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    /// Exponent of the first stored term, if any term is stored.
    pub fn start(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Frontier exponent up to which coefficients are known.
    ///
    /// Mode `Q`: all exponents `<= bound` are known. Mode `QInverse`: all
    /// exponents `>= bound` are known. `None` means every coefficient is
    /// known (the series is exactly zero).
    pub fn known_bound(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.dir() * (self.coeffs.len() as i64 - 1))
        }
    }

    /// Coefficient of `s^e` if it lies in the known region.
    pub fn coeff_at(&self, e: i64) -> Option<LaurentPoly> {
        let Some(bound) = self.known_bound() else {
            return Some(LaurentPoly::zero());
        };
        let known = match self.mode {
            ExpandMode::Q => e <= bound,
            ExpandMode::QInverse => e >= bound,
        };
        if !known {
            return None;
        }
        let idx = (e - self.start) * self.dir();
        if idx < 0 {
            Some(LaurentPoly::zero())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// First nonzero term `(exponent, coefficient)`.
    pub fn leading(&self) -> Option<(i64, &LaurentPoly)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| (self.start + self.dir() * i as i64, &self.coeffs[i]))
    }

    /// Reinterprets the series under `s -> s^{-1}`, flipping the mode.
    pub fn mirror(&self) -> Self {
        Self {
            mode: match self.mode {
                ExpandMode::Q => ExpandMode::QInverse,
                ExpandMode::QInverse => ExpandMode::Q,
            },
            start: -self.start,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.mode);
        }
        Self {
            mode: self.mode,
            start: self.start,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Adds two series of the same mode; the result window is the
    /// intersection of the known regions.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.mode, rhs.mode, "mode mismatch in series addition");
        if self.mode == ExpandMode::QInverse {
            return self.mirror().add(&rhs.mirror()).mirror();
        }
        let (b1, b2) = (self.known_bound(), rhs.known_bound());
        let bound = match (b1, b2) {
            (None, None) => return Self::zero(self.mode),
            (None, _) => return rhs.clone(),
            (_, None) => return self.clone(),
            (Some(a), Some(b)) => a.min(b),
        };
        let start = self.start.min(rhs.start);
        let coeffs = (start..=bound)
            .map(|e| &self.coeff_at(e).unwrap() + &rhs.coeff_at(e).unwrap())
            .collect();
        Self {
            mode: self.mode,
            start,
            coeffs,
        }
        .canon()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Multiplies two series of the same mode.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.mode, rhs.mode, "mode mismatch in series product");
        if self.mode == ExpandMode::QInverse {
            return self.mirror().mul(&rhs.mirror()).mirror();
        }
        let (b1, b2) = (self.known_bound(), rhs.known_bound());
        let (Some(b1), Some(b2)) = (b1, b2) else {
            return Self::zero(self.mode);
        };
        let start = self.start + rhs.start;
        let bound = (b1 + rhs.start).min(b2 + self.start);
        let len = (bound - start + 1) as usize;
        let mut coeffs = vec![LaurentPoly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                let prod = a * b;
                coeffs[i + j] += &prod;
            }
        }
        Self {
            mode: self.mode,
            start,
            coeffs,
        }
        .canon()
    }

    /// Lists exponents where the two series disagree on the window where
    /// both are known, with both coefficients.
    pub fn diff(&self, rhs: &Self) -> Vec<(i64, LaurentPoly, LaurentPoly)> {
        assert_eq!(self.mode, rhs.mode, "mode mismatch in series comparison");
        if self.mode == ExpandMode::QInverse {
            return self
                .mirror()
                .diff(&rhs.mirror())
                .into_iter()
                .map(|(e, a, b)| (-e, a, b))
                .collect();
        }
        let bound = match (self.known_bound(), rhs.known_bound()) {
            (None, None) => return Vec::new(),
            (None, Some(b)) | (Some(b), None) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        let starts = [self, rhs]
            .iter()
            .filter_map(|x| x.start())
            .min()
            .unwrap_or(bound);
        let mut out = Vec::new();
        for e in starts..=bound {
            let a = self.coeff_at(e).unwrap_or_default();
            let b = rhs.coeff_at(e).unwrap_or_default();
            if a != b {
                out.push((e, a, b));
            }
        }
        out
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.start + self.dir() * i as i64;
            if wrote {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*s^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        let next = self.start + self.dir() * self.coeffs.len() as i64;
        write!(f, " + O(s^{next})")
    }
}
