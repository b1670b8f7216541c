//! The infinite-product form of the partition function and its exact
//! verification against the direct expansion.
//!
//! A product representation is a finite list of factors
//! `(mu, g, 2Q, ncheck)`. Its free energy, exact up to a color-degree
//! bound `D`, is
//!
//! ```text
//! F = sum over factors, sum over d with d*|mu| <= D of
//!     ncheck * (1/d) * h_g(q^d) * v^{2 d Q} / [d]^2 * p_{d*mu}
//! ```
//!
//! where `h_g(q) = q^g + q^{g-2} + ... + q^{-g}`. Exponentiating gives the
//! partition function in the diagonal specialization, which must agree
//! with the specialized direct series `1 + sum_A W_A s_A` coefficient by
//! coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::character::character;
use crate::laurent::LaurentPoly;
use crate::partition::{Partition, PartitionVector};
use crate::pipeline::{
    assemble_partition_series, balanced_poly, reformulate_z, run_pipeline, CheckNTable, Pipeline,
    PipelineError, WTable,
};
use crate::pseries::{PSeries, SeriesError};
use crate::qseries::{ExpandMode, QSeries};
use crate::ratfunc::{RatFunc, RatFuncError};
use crate::{Int, Rational};

/// Errors from building, expanding, or verifying product forms.
#[derive(Debug, Clone, Error)]
pub enum ProductError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("requested degree {requested} exceeds source degree {available}")]
    DegreeTooLarge { requested: u32, available: u32 },
}

/// One factor of the product form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductFactor {
    pub key: PartitionVector,
    pub genus: u32,
    pub charge2: i64,
    pub multiplicity: Rational,
}

/// A finite product representation, valid up to color degree `degree`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductRep {
    components: usize,
    degree: u32,
    factors: Vec<ProductFactor>,
}

impl ProductRep {
    /// Assembles a representation from explicit factors.
    pub fn from_factors(
        components: usize,
        degree: u32,
        mut factors: Vec<ProductFactor>,
    ) -> Self {
        assert!(components >= 1);
        for f in &factors {
            assert_eq!(f.key.num_components(), components);
            assert!(!f.key.is_all_empty() && f.key.total_size() <= degree);
            assert!(!f.multiplicity.is_zero());
        }
        factors.sort_by(|a, b| {
            (&a.key, a.genus, a.charge2).cmp(&(&b.key, b.genus, b.charge2))
        });
        Self {
            components,
            degree,
            factors,
        }
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[ProductFactor] {
        &self.factors
    }

    /// The free energy of the product, exact for all keys up to the
    /// degree bound.
    pub fn free_energy_series(&self) -> PSeries {
        let mut f = PSeries::new(self.components, self.degree);
        for factor in &self.factors {
            let size = factor.key.total_size();
            debug_assert!(size >= 1);
            let mut d = 1u32;
            while d * size <= self.degree {
                let poly = balanced_poly(factor.genus)
                    .adams(d as i64)
                    .mul_monomial(0, d as i64 * factor.charge2);
                let den = LaurentPoly::qnum(d as i64).pow(2);
                let weight =
                    &factor.multiplicity / Rational::from(Int::from(d));
                let term = RatFunc::new(poly, den)
                    .expect("[d] is nonzero")
                    .scale(&weight);
                let key = factor.key.scale(d);
                let prev = f.raw_coeff(&key);
                f.set_raw_coeff(key, &prev + &term);
                d += 1;
            }
        }
        f
    }

    /// The partition function of the product as a power-sum series.
    pub fn partition_series(&self) -> Result<PSeries, SeriesError> {
        self.free_energy_series().exp()
    }
}

/// Collects the nonzero class-label multiplicities up to `degree` into a
/// product representation.
pub fn build_product(cn: &CheckNTable, degree: u32) -> Result<ProductRep, ProductError> {
    if degree > cn.degree() {
        return Err(ProductError::DegreeTooLarge {
            requested: degree,
            available: cn.degree(),
        });
    }
    let mut factors = Vec::new();
    for (key, row) in cn.iter() {
        if key.total_size() > degree {
            continue;
        }
        for (&(genus, charge2), value) in row.iter() {
            factors.push(ProductFactor {
                key: key.clone(),
                genus,
                charge2,
                multiplicity: value.clone(),
            });
        }
    }
    Ok(ProductRep::from_factors(cn.num_components(), degree, factors))
}

/// Coefficientwise one-variable expansions of a power-sum series, one
/// [`QSeries`] per key (including the constant key).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpandedSeries {
    components: usize,
    degree: u32,
    q_order: usize,
    mode: ExpandMode,
    coeffs: BTreeMap<PartitionVector, QSeries>,
}

/// One coefficient disagreement between two expansions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mismatch {
    pub key: PartitionVector,
    pub exponent: i64,
    pub left: LaurentPoly,
    pub right: LaurentPoly,
}

impl ExpandedSeries {
    pub fn num_components(&self) -> usize {
        self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    pub fn mode(&self) -> ExpandMode {
        self.mode
    }

    pub fn coeff(&self, key: &PartitionVector) -> Option<&QSeries> {
        self.coeffs.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PartitionVector, &QSeries)> {
        self.coeffs.iter()
    }

    /// All coefficient disagreements against another expansion over the
    /// shared key set and known exponent windows.
    pub fn diff(&self, other: &ExpandedSeries) -> Vec<Mismatch> {
        assert_eq!(self.components, other.components);
        assert_eq!(self.mode, other.mode);
        let mut out = Vec::new();
        for (key, left) in &self.coeffs {
            let Some(right) = other.coeffs.get(key) else {
                continue;
            };
            for (exponent, l, r) in left.diff(right) {
                out.push(Mismatch {
                    key: key.clone(),
                    exponent,
                    left: l,
                    right: r,
                });
            }
        }
        out
    }
}

/// Expands every coefficient of a power-sum series to `q_order` terms.
pub fn expand_partition_series(
    ps: &PSeries,
    q_order: usize,
    mode: ExpandMode,
) -> Result<ExpandedSeries, ProductError> {
    let mut coeffs = BTreeMap::new();
    let mut keys = vec![PartitionVector::empty(ps.num_components())];
    keys.extend(PartitionVector::enumerate_up_to(
        ps.num_components(),
        ps.degree(),
    ));
    for key in keys {
        let value = ps.coeff(&key);
        coeffs.insert(key, QSeries::expand(&value, q_order, mode)?);
    }
    Ok(ExpandedSeries {
        components: ps.num_components(),
        degree: ps.degree(),
        q_order,
        mode,
        coeffs,
    })
}

/// Expands the product form itself.
pub fn expand_product(
    rep: &ProductRep,
    q_order: usize,
    mode: ExpandMode,
) -> Result<ExpandedSeries, ProductError> {
    let ps = rep.partition_series()?;
    expand_partition_series(&ps, q_order, mode)
}

/// Expands the specialized direct series `1 + sum_A W_A s_A`.
pub fn direct_expansion(
    w: &WTable,
    q_order: usize,
    mode: ExpandMode,
) -> Result<ExpandedSeries, ProductError> {
    let ps = assemble_partition_series(&reformulate_z(w)).specialize_qrho();
    expand_partition_series(&ps, q_order, mode)
}

/// Outcome of comparing the product-form expansion against the direct
/// expansion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoundtripReport {
    pub mode: ExpandMode,
    pub q_order: usize,
    pub degree: u32,
    pub keys_compared: usize,
    pub mismatches: Vec<Mismatch>,
}

impl RoundtripReport {
    pub fn is_pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            writeln!(
                f,
                "roundtrip (mode {}, order {}, degree {}): all {} keys match",
                self.mode, self.q_order, self.degree, self.keys_compared
            )
        } else {
            writeln!(
                f,
                "roundtrip (mode {}, order {}, degree {}): {} mismatches",
                self.mode,
                self.q_order,
                self.degree,
                self.mismatches.len()
            )?;
            for m in &self.mismatches {
                writeln!(
                    f,
                    "  key {} at s^{}: product {} vs direct {}",
                    m.key, m.exponent, m.left, m.right
                )?;
            }
            Ok(())
        }
    }
}

/// Compares two expansions and wraps the result in a report.
pub fn compare_expansions(
    product: &ExpandedSeries,
    direct: &ExpandedSeries,
) -> RoundtripReport {
    RoundtripReport {
        mode: product.mode(),
        q_order: product.q_order(),
        degree: product.degree(),
        keys_compared: product.iter().count(),
        mismatches: product.diff(direct),
    }
}

/// Full roundtrip: pipeline, product form, expansion, comparison against
/// the direct expansion.
pub fn roundtrip_verify(
    pl: &Pipeline,
    q_order: usize,
    mode: ExpandMode,
) -> Result<RoundtripReport, ProductError> {
    let rep = build_product(&pl.check_n, pl.check_n.degree())?;
    let product = expand_product(&rep, q_order, mode)?;
    let direct = direct_expansion(&pl.w, q_order, mode)?;
    Ok(compare_expansions(&product, &direct))
}

/// Colored invariants of the unknot up to total color degree `degree`:
/// `W_A = sum over partitions mu of |A| of
///  chi_A(C_mu)/z_mu * prod_j (v^{-mu_j} - v^{mu_j})/[mu_j]`.
pub fn unknot_table(degree: u32) -> WTable {
    let mut w = WTable::new(1, degree);
    for n in 1..=degree {
        for a in Partition::enumerate(n) {
            let mut acc = RatFunc::zero();
            for mu in Partition::enumerate(n) {
                let chi = character(&a, &mu).expect("equal sizes");
                if chi == 0 {
                    continue;
                }
                let c = Rational::new(Int::from(chi), Int::from(mu.z_order()));
                let mut term = RatFunc::one();
                for &part in mu.parts() {
                    let factor = RatFunc::new(
                        LaurentPoly::vnum(part as i64),
                        LaurentPoly::qnum(part as i64),
                    )
                    .expect("[m] is nonzero");
                    term = &term * &factor;
                }
                acc = &acc + &term.scale(&c);
            }
            w.set(PartitionVector::from(a), acc);
        }
    }
    w
}

/// Colored invariants of the split unlink with `components` unknotted
/// components: `W_{A_1,...,A_L} = prod_i W_{A_i}` with unknot factors.
pub fn unlink_table(components: usize, degree: u32) -> WTable {
    let unknot = unknot_table(degree);
    let single = |a: &Partition| -> RatFunc {
        if a.is_empty() {
            RatFunc::one()
        } else {
            unknot.get(&PartitionVector::from(a.clone()))
        }
    };
    let mut w = WTable::new(components, degree);
    for key in PartitionVector::enumerate_up_to(components, degree) {
        let mut acc = RatFunc::one();
        for a in key.components() {
            acc = &acc * &single(a);
        }
        w.set(key, acc);
    }
    w
}

/// The closed-form product representation of the unknot: exactly two
/// factors, `(mu=(1), g=0, 2Q=-1, +1)` and `(mu=(1), g=0, 2Q=1, -1)`,
/// whose free energy is `sum_d (1/d) (v^{-d} - v^d)/[d]^2 p_d`.
pub fn unknot_closed_product(degree: u32) -> ProductRep {
    let key: PartitionVector = Partition::new([1]).into();
    ProductRep::from_factors(
        1,
        degree,
        vec![
            ProductFactor {
                key: key.clone(),
                genus: 0,
                charge2: -1,
                multiplicity: Rational::one(),
            },
            ProductFactor {
                key,
                genus: 0,
                charge2: 1,
                multiplicity: -Rational::one(),
            },
        ],
    )
}

/// One named symmetry check with an optional counterexample.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetryCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Results of the symmetry suite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetryReport {
    checks: Vec<SymmetryCheck>,
}

impl SymmetryReport {
    pub fn is_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn checks(&self) -> &[SymmetryCheck] {
        &self.checks
    }
}

impl fmt::Display for SymmetryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.pass {
                writeln!(f, "symmetry {}: pass", c.name)?;
            } else {
                writeln!(
                    f,
                    "symmetry {}: FAIL {}",
                    c.name,
                    c.detail.as_deref().unwrap_or("")
                )?;
            }
        }
        Ok(())
    }
}

fn sign_for(size: u32) -> Rational {
    if size.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Runs the symmetry suite on an invariant table and its pipeline:
/// expansion-mode duality of the specialized series, the conjugation and
/// sign flips of the table itself, and the charge reflections of the
/// multiplicity tables.
pub fn symmetry_checks(
    w: &WTable,
    pl: &Pipeline,
    q_order: usize,
) -> Result<SymmetryReport, ProductError> {
    let mut checks = Vec::new();

    // (a) The specialized series is invariant under q -> 1/q, so the
    // descending expansion is the mirror of the ascending one.
    {
        let asc = direct_expansion(w, q_order, ExpandMode::Q)?;
        let desc = direct_expansion(w, q_order, ExpandMode::QInverse)?;
        let mut detail = None;
        for (key, series) in asc.iter() {
            let mirrored = series.mirror();
            let Some(other) = desc.coeff(key) else {
                continue;
            };
            if let Some((e, l, r)) = other.diff(&mirrored).into_iter().next() {
                detail = Some(format!("key {key} at s^{e}: {l} vs {r}"));
                break;
            }
        }
        checks.push(SymmetryCheck {
            name: "expansion-mode-duality",
            pass: detail.is_none(),
            detail,
        });
    }

    // (b) W_{A^t}(1/s, -v) = W_A(s, v).
    checks.push(table_check(
        w,
        "conjugate-flip",
        |value| value.subst_s_inv().subst_v_neg(),
        |_| Rational::one(),
    ));

    // (c) W_{A^t}(1/s, v) = (-1)^{|A|} W_A(s, v).
    checks.push(table_check(
        w,
        "conjugate-q-inversion",
        |value| value.subst_s_inv(),
        sign_for,
    ));

    // (c') W_A(s, -v) = (-1)^{|A|} W_A(s, v), keys untouched.
    {
        let mut detail = None;
        for key in w.all_keys() {
            let lhs = w.get(&key).subst_v_neg();
            let rhs = w.get(&key).scale(&sign_for(key.total_size()));
            if lhs != rhs {
                detail = Some(format!("key {key}"));
                break;
            }
        }
        checks.push(SymmetryCheck {
            name: "v-negation-sign",
            pass: detail.is_none(),
            detail,
        });
    }

    // (d) N_{A^t; g, Q} = (-1)^{|A|} N_{A; g, -Q}.
    {
        let mut detail = None;
        'outer_n: for key in pl.n.all_keys() {
            let sign = sign_for(key.total_size());
            let conj = key.conjugate();
            for (g, qq) in row_support(&pl.n, &key, &conj) {
                let lhs = Rational::from(
                    pl.n.row(&conj)
                        .map(|r| r.get(g, qq))
                        .unwrap_or_else(Int::zero),
                );
                let rhs = Rational::from(
                    pl.n.row(&key)
                        .map(|r| r.get(g, -qq))
                        .unwrap_or_else(Int::zero),
                ) * &sign;
                if lhs != rhs {
                    detail = Some(format!("color {key} at g={g} 2Q={qq}"));
                    break 'outer_n;
                }
            }
        }
        checks.push(SymmetryCheck {
            name: "conjugate-charge-reflection",
            pass: detail.is_none(),
            detail,
        });
    }

    // (e) ncheck_{mu; g, -Q} = (-1)^{len(mu)} ncheck_{mu; g, Q}.
    {
        let mut detail = None;
        'outer_c: for (key, row) in pl.check_n.iter() {
            let sign = sign_for(key.total_length() as u32);
            for (&(g, qq), value) in row.iter() {
                let reflected = row.get(g, -qq);
                if reflected != value * &sign {
                    detail = Some(format!("class {key} at g={g} 2Q={qq}"));
                    break 'outer_c;
                }
            }
        }
        checks.push(SymmetryCheck {
            name: "charge-reflection",
            pass: detail.is_none(),
            detail,
        });
    }

    Ok(SymmetryReport { checks })
}

/// Shared shape of the two conjugation checks on a [`WTable`].
fn table_check(
    w: &WTable,
    name: &'static str,
    transform: impl Fn(&RatFunc) -> RatFunc,
    sign: impl Fn(u32) -> Rational,
) -> SymmetryCheck {
    let mut detail = None;
    for key in w.all_keys() {
        let lhs = transform(&w.get(&key.conjugate()));
        let rhs = w.get(&key).scale(&sign(key.total_size()));
        if lhs != rhs {
            detail = Some(format!("key {key}"));
            break;
        }
    }
    SymmetryCheck {
        name,
        pass: detail.is_none(),
        detail,
    }
}

/// Union of `(g, 2Q)` supports of a key's row and its conjugate's row,
/// with charges from both orientations.
fn row_support(
    n: &crate::pipeline::NTable,
    key: &PartitionVector,
    conj: &PartitionVector,
) -> Vec<(u32, i64)> {
    let mut out = std::collections::BTreeSet::new();
    if let Some(r) = n.row(conj) {
        for (&(g, qq), _) in r.iter() {
            out.insert((g, qq));
        }
    }
    if let Some(r) = n.row(key) {
        for (&(g, qq), _) in r.iter() {
            out.insert((g, -qq));
        }
    }
    out.into_iter().collect()
}

/// Convenience wrapper: pipeline plus symmetry suite for a table.
pub fn run_symmetries(
    w: &WTable,
    q_order: usize,
) -> Result<SymmetryReport, ProductError> {
    let pl = run_pipeline(w, crate::pipeline::PConvention::InverseBracketWeights)?;
    symmetry_checks(w, &pl, q_order)
}
