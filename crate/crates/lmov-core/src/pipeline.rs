//! The reformulation pipeline from colored invariant tables to integer
//! multiplicity tables.
//!
//! Stages, each exact:
//!
//! 1. [`reformulate_z`]: change the color basis from Schur labels to power
//!    sums (class labels).
//! 2. [`free_energy`]: logarithm of the partition series.
//! 3. [`extract_fhat`]: Moebius inversion over simultaneous part rescalings,
//!    isolating the primitive part of the free energy.
//! 4. [`compute_p`]: character transform back to color labels with the
//!    diagonal-specialization weight per class row.
//! 5. [`check_integrality`] / [`extract_n`]: decompose `[1]^2 P_B` over the
//!    genus basis `[1]^{2g}` per power of `t`, demanding integers.
//! 6. [`n_to_small`]: change of genus basis to the balanced one
//!    `h_g(q) = q^g + q^{g-2} + ... + q^{-g}`.
//! 7. [`compute_checkn`]: class-label (power-sum) side of the multiplicity
//!    table, the input of the infinite-product form.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::character::{character_vector, CharacterError};
use crate::laurent::LaurentPoly;
use crate::partition::PartitionVector;
use crate::pseries::{PSeries, SeriesError};
use crate::ratfunc::{RatFunc, RatFuncError};
use crate::{Int, Rational};

/// Errors from pipeline stages.
#[derive(Debug, Clone, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error("integrality check failed for {} of {} colors", .0.failure_count(), .0.total_count())]
    IntegralityFailed(Box<IntegralityReport>),
}

/// Convention for the per-class weight in [`compute_p`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PConvention {
    /// Weight the class `mu` by `prod_j 1/[mu_j]`. This is the diagonal
    /// specialization weight under which integrality holds; the default.
    InverseBracketWeights,
    /// Weight the class `mu` by `prod_j [mu_j]` instead; kept for
    /// comparison runs. Integrality is not expected to hold.
    BracketWeights,
}

impl fmt::Display for PConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PConvention::InverseBracketWeights => write!(f, "inv-bracket"),
            PConvention::BracketWeights => write!(f, "bracket"),
        }
    }
}

impl std::str::FromStr for PConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inv-bracket" => Ok(PConvention::InverseBracketWeights),
            "bracket" => Ok(PConvention::BracketWeights),
            other => Err(format!("unknown convention `{other}`")),
        }
    }
}

fn check_key(key: &PartitionVector, components: usize, degree: u32) {
    assert_eq!(
        key.num_components(),
        components,
        "component count mismatch"
    );
    assert!(
        !key.is_all_empty() && key.total_size() <= degree,
        "key {key} out of table range"
    );
}

macro_rules! ratfunc_table {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Debug)]
        pub struct $name {
            components: usize,
            degree: u32,
            entries: BTreeMap<PartitionVector, RatFunc>,
        }

        impl $name {
            /// Empty table for `components` link components up to total
            /// color degree `degree`.
            pub fn new(components: usize, degree: u32) -> Self {
                assert!(components >= 1);
                Self {
                    components,
                    degree,
                    entries: BTreeMap::new(),
                }
            }

            pub fn num_components(&self) -> usize {
                self.components
            }

            pub fn degree(&self) -> u32 {
                self.degree
            }

            /// Value at `key`; absent keys read as zero.
            pub fn get(&self, key: &PartitionVector) -> RatFunc {
                self.entries.get(key).cloned().unwrap_or_else(RatFunc::zero)
            }

            /// Sets the value at `key` (nonempty, within the degree bound).
            pub fn set(&mut self, key: PartitionVector, value: RatFunc) {
                check_key(&key, self.components, self.degree);
                if value.is_zero() {
                    self.entries.remove(&key);
                } else {
                    self.entries.insert(key, value);
                }
            }

            /// Iterates stored (nonzero) entries in key order.
            pub fn iter(&self) -> impl Iterator<Item = (&PartitionVector, &RatFunc)> {
                self.entries.iter()
            }

            /// All keys the table covers, in order.
            pub fn all_keys(&self) -> Vec<PartitionVector> {
                PartitionVector::enumerate_up_to(self.components, self.degree)
            }

            /// Restriction to a lower degree bound.
            pub fn truncate_to(&self, degree: u32) -> Self {
                assert!(degree <= self.degree, "cannot extend a table");
                let mut out = Self::new(self.components, degree);
                for (k, v) in &self.entries {
                    if k.total_size() <= degree {
                        out.entries.insert(k.clone(), v.clone());
                    }
                }
                out
            }
        }
    };
}

ratfunc_table! {
    /// Colored invariants keyed by Schur labels (one partition per
    /// component).
    WTable
}

ratfunc_table! {
    /// The partition series in class (power-sum) labels: normalized
    /// coefficients of `p_mu / z_mu`.
    ZTable
}

ratfunc_table! {
    /// Free-energy coefficients in class labels (same normalization as
    /// [`ZTable`]).
    FTable
}

ratfunc_table! {
    /// Primitive part of the free energy after Moebius inversion over
    /// simultaneous rescalings of all parts.
    FhatTable
}

ratfunc_table! {
    /// Color-label table `P_B` whose `[1]^2`-multiple is tested for
    /// integrality.
    PTable
}

/// Moebius function on positive integers.
pub fn moebius(n: u32) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Change of color basis from Schur labels to class labels.
pub fn reformulate_z(w: &WTable) -> ZTable {
    let mut sc = crate::pseries::SchurCoeffs::new(w.num_components(), w.degree());
    for (k, v) in w.iter() {
        sc.set_coeff(k.clone(), v.clone());
    }
    let ps = sc.to_power_basis();
    let mut z = ZTable::new(w.num_components(), w.degree());
    for (k, v) in ps.iter() {
        if !k.is_all_empty() {
            z.set(k.clone(), v.clone());
        }
    }
    z
}

/// Inverse of [`reformulate_z`].
pub fn z_to_w(z: &ZTable) -> WTable {
    let mut ps = PSeries::new(z.num_components(), z.degree());
    for (k, v) in z.iter() {
        ps.set_coeff(k.clone(), v.clone());
    }
    let sc = ps.to_schur_basis();
    let mut w = WTable::new(z.num_components(), z.degree());
    for (k, v) in sc.iter() {
        if !k.is_all_empty() {
            w.set(k.clone(), v.clone());
        }
    }
    w
}

/// The partition series `1 + sum_mu (Z_mu / z_mu) p_mu` as a [`PSeries`].
pub fn assemble_partition_series(z: &ZTable) -> PSeries {
    let mut ps = PSeries::one(z.num_components(), z.degree());
    for (k, v) in z.iter() {
        ps.set_coeff(k.clone(), v.clone());
    }
    ps
}

/// Free energy: logarithm of the partition series in class labels.
pub fn free_energy(z: &ZTable) -> Result<FTable, PipelineError> {
    let ps = assemble_partition_series(z).log()?;
    let mut f = FTable::new(z.num_components(), z.degree());
    for (k, v) in ps.iter() {
        if !k.is_all_empty() {
            f.set(k.clone(), v.clone());
        }
    }
    Ok(f)
}

/// Inverse of [`free_energy`].
pub fn free_energy_to_z(f: &FTable) -> Result<ZTable, PipelineError> {
    let mut ps = PSeries::new(f.num_components(), f.degree());
    for (k, v) in f.iter() {
        ps.set_coeff(k.clone(), v.clone());
    }
    let z_ps = ps.exp()?;
    let mut z = ZTable::new(f.num_components(), f.degree());
    for (k, v) in z_ps.iter() {
        if !k.is_all_empty() {
            z.set(k.clone(), v.clone());
        }
    }
    Ok(z)
}

/// Moebius inversion isolating the primitive free-energy coefficients:
/// `fhat_mu = sum over common divisors d of moebius(d) d^{len(mu)-1}
/// F_{mu/d}(s^d, v^d)`.
pub fn extract_fhat(f: &FTable) -> FhatTable {
    let mut out = FhatTable::new(f.num_components(), f.degree());
    for key in f.all_keys() {
        let l = key.total_length() as u32;
        let mut acc = RatFunc::zero();
        for d in key.divisors() {
            let mu = moebius(d);
            if mu == 0 {
                continue;
            }
            let base = f.get(&key.divide(d).expect("d divides all parts"));
            if base.is_zero() {
                continue;
            }
            let weight = Rational::from(Int::from(mu))
                * Rational::from(Int::from(d as i64).pow(l.saturating_sub(1)));
            acc = &acc + &base.adams(d as i64).scale(&weight);
        }
        out.set(key, acc);
    }
    out
}

/// Forward rescaling sum, the inverse of [`extract_fhat`]:
/// `F_mu = sum over common divisors d of d^{len(mu)-1} fhat_{mu/d}(s^d, v^d)`.
pub fn fhat_to_free_energy(fh: &FhatTable) -> FTable {
    let mut out = FTable::new(fh.num_components(), fh.degree());
    for key in fh.all_keys() {
        let l = key.total_length() as u32;
        let mut acc = RatFunc::zero();
        for d in key.divisors() {
            let base = fh.get(&key.divide(d).expect("d divides all parts"));
            if base.is_zero() {
                continue;
            }
            let weight = Rational::from(Int::from(d as i64).pow(l.saturating_sub(1)));
            acc = &acc + &base.adams(d as i64).scale(&weight);
        }
        out.set(key, acc);
    }
    out
}

/// Character transform back to color labels with the per-class weight:
/// `P_B = sum_mu chi_B(C_mu) / z_mu * w(mu) * fhat_mu` where `w(mu)` is
/// `prod_j 1/[mu_j]` or `prod_j [mu_j]` depending on the convention.
pub fn compute_p(fh: &FhatTable, convention: PConvention) -> PTable {
    let mut out = PTable::new(fh.num_components(), fh.degree());
    for key in fh.all_keys() {
        let sizes: Vec<u32> = key.components().iter().map(|p| p.size()).collect();
        let mut acc = RatFunc::zero();
        for mu in same_shape(&sizes, fh.num_components()) {
            let value = fh.get(&mu);
            if value.is_zero() {
                continue;
            }
            let chi = character_vector(&key, &mu).expect("sizes match by construction");
            if chi == 0 {
                continue;
            }
            let c = Rational::new(Int::from(chi), Int::from(mu.z_order()));
            let brackets = bracket_product(&mu);
            let weighted = match convention {
                PConvention::InverseBracketWeights => value
                    .checked_div(&RatFunc::from_poly(brackets))
                    .expect("[m] is nonzero"),
                PConvention::BracketWeights => &value * &RatFunc::from_poly(brackets),
            };
            acc = &acc + &weighted.scale(&c);
        }
        out.set(key, acc);
    }
    out
}

/// All partition vectors with the given componentwise sizes.
fn same_shape(sizes: &[u32], components: usize) -> Vec<PartitionVector> {
    assert_eq!(sizes.len(), components);
    let mut acc: Vec<Vec<crate::partition::Partition>> = vec![Vec::new()];
    for &n in sizes {
        let choices = crate::partition::Partition::enumerate(n);
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for prefix in &acc {
            for c in &choices {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        acc = next;
    }
    acc.into_iter().map(PartitionVector::new).collect()
}

/// `prod_j [mu_j]` over all parts of all components.
fn bracket_product(mu: &PartitionVector) -> LaurentPoly {
    let mut out = LaurentPoly::one();
    for p in mu.components() {
        for &part in p.parts() {
            out = &out * &LaurentPoly::qnum(part as i64);
        }
    }
    out
}

/// Genus-basis polynomial `[1]^{2g}`.
pub fn genus_poly(g: u32) -> LaurentPoly {
    LaurentPoly::qnum(1).pow(2 * g)
}

/// Balanced-basis polynomial `h_g(q) = q^g + q^{g-2} + ... + q^{-g}`
/// (in `s`-exponents: steps of 4 from `-2g` to `2g`).
pub fn balanced_poly(g: u32) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    let g = g as i64;
    for k in 0..=g {
        out.add_term((2 * (g - 2 * k), 0), Rational::one());
    }
    out
}

/// Per-color outcome of the integrality check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntegralityOutcome {
    Pass,
    /// `[1]^2 P_B` is not a Laurent polynomial.
    NotLaurent { remainder: LaurentPoly },
    /// An odd power of `s` appears: not a series in integer powers of `q`.
    FractionalPower,
    /// A fixed power of `t` fails `q <-> 1/q` invariance.
    NotSymmetric,
    /// The genus decomposition produced a non-integer multiplicity.
    NonIntegerMultiplicity {
        genus: u32,
        charge2: i64,
        value: Rational,
    },
}

impl IntegralityOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, IntegralityOutcome::Pass)
    }
}

impl fmt::Display for IntegralityOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralityOutcome::Pass => write!(f, "pass"),
            IntegralityOutcome::NotLaurent { remainder } => {
                write!(f, "FAIL not-laurent remainder={remainder}")
            }
            IntegralityOutcome::FractionalPower => write!(f, "FAIL fractional-q-power"),
            IntegralityOutcome::NotSymmetric => write!(f, "FAIL q-inversion-asymmetric"),
            IntegralityOutcome::NonIntegerMultiplicity {
                genus,
                charge2,
                value,
            } => write!(
                f,
                "FAIL non-integer multiplicity {value} at g={genus} 2Q={charge2}"
            ),
        }
    }
}

/// Per-color outcomes of the integrality check over a whole table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegralityReport {
    convention: PConvention,
    outcomes: BTreeMap<PartitionVector, IntegralityOutcome>,
}

impl IntegralityReport {
    pub fn convention(&self) -> PConvention {
        self.convention
    }

    pub fn is_pass(&self) -> bool {
        self.outcomes.values().all(IntegralityOutcome::is_pass)
    }

    pub fn total_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn failure_count(&self) -> usize {
        self.outcomes.values().filter(|o| !o.is_pass()).count()
    }

    pub fn outcome(&self, key: &PartitionVector) -> Option<&IntegralityOutcome> {
        self.outcomes.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PartitionVector, &IntegralityOutcome)> {
        self.outcomes.iter()
    }
}

impl fmt::Display for IntegralityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "integrality ({}): {}/{} colors pass",
            self.convention,
            self.total_count() - self.failure_count(),
            self.total_count()
        )?;
        for (k, o) in &self.outcomes {
            writeln!(f, "  color {k}: {o}")?;
        }
        Ok(())
    }
}

/// Decomposes one `v`-slice over a triangular genus basis by repeatedly
/// stripping the top `s`-degree. `basis(g)` must have top degree `2g`
/// with unit top coefficient.
fn decompose_slice(
    slice: &LaurentPoly,
    basis: fn(u32) -> LaurentPoly,
) -> Result<BTreeMap<u32, Rational>, IntegralityOutcome> {
    let mut rem = slice.clone();
    let mut out = BTreeMap::new();
    while let Some(top) = rem.max_s() {
        if top < 0 || top % 2 != 0 {
            return Err(IntegralityOutcome::NotSymmetric);
        }
        let g = (top / 2) as u32;
        let c = rem.coeff(top, 0);
        rem -= &basis(g).scale(&c);
        out.insert(g, c);
        if rem.max_s().is_some_and(|m| m >= top) {
            return Err(IntegralityOutcome::NotSymmetric);
        }
    }
    Ok(out)
}

/// Checks the full integrality decomposition of a key's value; on success
/// returns the integer multiplicities keyed by `(genus, 2Q)`.
fn decompose_value(p: &RatFunc) -> Result<BTreeMap<(u32, i64), Int>, IntegralityOutcome> {
    let g = &RatFunc::from_poly(genus_poly(1)) * p;
    let poly = match g.as_laurent() {
        Ok(poly) => poly,
        Err(RatFuncError::NotPolynomial { remainder }) => {
            return Err(IntegralityOutcome::NotLaurent { remainder })
        }
        Err(_) => unreachable!("as_laurent only fails with NotPolynomial"),
    };
    if poly.iter().any(|((a, _), _)| a % 2 != 0) {
        return Err(IntegralityOutcome::FractionalPower);
    }
    let mut out = BTreeMap::new();
    for (charge2, slice) in poly.v_slices() {
        if slice.subst_s_inv() != slice {
            return Err(IntegralityOutcome::NotSymmetric);
        }
        for (genus, value) in decompose_slice(&slice, genus_poly)? {
            if !value.denom().is_one() {
                return Err(IntegralityOutcome::NonIntegerMultiplicity {
                    genus,
                    charge2,
                    value,
                });
            }
            out.insert((genus, charge2), value.numer().clone());
        }
    }
    Ok(out)
}

/// Runs the integrality check on every color of a [`PTable`]. The
/// convention is recorded in the report verbatim.
pub fn check_integrality(p: &PTable, convention: PConvention) -> IntegralityReport {
    let mut outcomes = BTreeMap::new();
    for key in p.all_keys() {
        let outcome = match decompose_value(&p.get(&key)) {
            Ok(_) => IntegralityOutcome::Pass,
            Err(o) => o,
        };
        outcomes.insert(key, outcome);
    }
    IntegralityReport {
        convention,
        outcomes,
    }
}

/// A sparse row of integer multiplicities keyed by `(genus, 2Q)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NRow {
    entries: BTreeMap<(u32, i64), Int>,
}

impl NRow {
    pub fn get(&self, genus: u32, charge2: i64) -> Int {
        self.entries
            .get(&(genus, charge2))
            .cloned()
            .unwrap_or_else(Int::zero)
    }

    pub fn set(&mut self, genus: u32, charge2: i64, value: Int) {
        if value.is_zero() {
            self.entries.remove(&(genus, charge2));
        } else {
            self.entries.insert((genus, charge2), value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, i64), &Int)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_genus(&self) -> Option<u32> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn max_abs_charge2(&self) -> Option<i64> {
        self.entries.keys().map(|k| k.1.abs()).max()
    }
}

/// Row type of [`SmallNTable`]; same shape as [`NRow`].
pub type SmallNRow = NRow;

macro_rules! n_style_table {
    ($(#[$doc:meta])* $name:ident, $row:ty) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Debug)]
        pub struct $name {
            components: usize,
            degree: u32,
            rows: BTreeMap<PartitionVector, $row>,
        }

        impl $name {
            pub fn new(components: usize, degree: u32) -> Self {
                assert!(components >= 1);
                Self {
                    components,
                    degree,
                    rows: BTreeMap::new(),
                }
            }

            pub fn num_components(&self) -> usize {
                self.components
            }

            pub fn degree(&self) -> u32 {
                self.degree
            }

            pub fn row(&self, key: &PartitionVector) -> Option<&$row> {
                self.rows.get(key)
            }

            pub fn row_mut(&mut self, key: &PartitionVector) -> &mut $row {
                check_key(key, self.components, self.degree);
                self.rows.entry(key.clone()).or_default()
            }

            pub fn iter(&self) -> impl Iterator<Item = (&PartitionVector, &$row)> {
                self.rows.iter()
            }

            pub fn all_keys(&self) -> Vec<PartitionVector> {
                PartitionVector::enumerate_up_to(self.components, self.degree)
            }

            /// Largest genus appearing in any row.
            pub fn max_genus(&self) -> Option<u32> {
                self.rows.values().filter_map(|r| r.max_genus()).max()
            }

            /// Largest `|2Q|` appearing in any row.
            pub fn max_abs_charge2(&self) -> Option<i64> {
                self.rows.values().filter_map(|r| r.max_abs_charge2()).max()
            }

            /// Drops rows that became empty.
            fn prune(&mut self) {
                self.rows.retain(|_, r| !r.is_empty());
            }
        }
    };
}

n_style_table! {
    /// Integer multiplicities over the genus basis `[1]^{2g}`, keyed by
    /// color labels.
    NTable, NRow
}

n_style_table! {
    /// Integer multiplicities over the balanced basis `h_g`, keyed by
    /// color labels.
    SmallNTable, NRow
}

/// Extracts the integer multiplicity table, or reports all failures.
pub fn extract_n(p: &PTable, convention: PConvention) -> Result<NTable, PipelineError> {
    let mut table = NTable::new(p.num_components(), p.degree());
    let mut outcomes = BTreeMap::new();
    let mut failed = false;
    for key in p.all_keys() {
        match decompose_value(&p.get(&key)) {
            Ok(entries) => {
                outcomes.insert(key.clone(), IntegralityOutcome::Pass);
                if !entries.is_empty() {
                    let row = table.row_mut(&key);
                    for ((g, qq), v) in entries {
                        row.set(g, qq, v);
                    }
                }
            }
            Err(o) => {
                failed = true;
                outcomes.insert(key.clone(), o);
            }
        }
    }
    if failed {
        return Err(PipelineError::IntegralityFailed(Box::new(
            IntegralityReport {
                convention,
                outcomes,
            },
        )));
    }
    table.prune();
    Ok(table)
}

/// Rewrites rows from the genus basis to the balanced basis. Exact and
/// always integer (the two bases are related by a unitriangular integer
/// matrix).
pub fn n_to_small(n: &NTable) -> SmallNTable {
    let mut out = SmallNTable::new(n.num_components(), n.degree());
    for (key, row) in n.iter() {
        *out.row_mut(key) = convert_row(row, genus_poly, balanced_poly);
    }
    out.prune();
    out
}

/// Inverse of [`n_to_small`].
pub fn small_to_n(n: &SmallNTable) -> NTable {
    let mut out = NTable::new(n.num_components(), n.degree());
    for (key, row) in n.iter() {
        *out.row_mut(key) = convert_row(row, balanced_poly, genus_poly);
    }
    out.prune();
    out
}

/// Rewrites one row between two triangular genus bases by rebuilding each
/// charge slice and re-decomposing it.
fn convert_row(row: &NRow, from: fn(u32) -> LaurentPoly, to: fn(u32) -> LaurentPoly) -> NRow {
    let mut slices: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (&(g, qq), v) in row.iter() {
        let poly = from(g).scale(&Rational::from(v.clone()));
        *slices.entry(qq).or_default() += &poly;
    }
    let mut out = NRow::default();
    for (qq, slice) in slices {
        let decomposition =
            decompose_slice(&slice, to).expect("triangular basis change is closed");
        for (g, c) in decomposition {
            assert!(c.denom().is_one(), "basis change stays integral");
            out.set(g, qq, c.numer().clone());
        }
    }
    out
}

/// Class-label (power-sum) side of the multiplicity table:
/// `ncheck_{mu; g, Q} = sum_B chi_B(C_mu) n_{B; g, Q} / z_mu`.
pub fn compute_checkn(n: &SmallNTable) -> CheckNTable {
    let mut out = CheckNTable::new(n.num_components(), n.degree());
    for key in n.all_keys() {
        let sizes: Vec<u32> = key.components().iter().map(|p| p.size()).collect();
        let z = Rational::from(Int::from(key.z_order()));
        let mut acc: BTreeMap<(u32, i64), Rational> = BTreeMap::new();
        for b in same_shape(&sizes, n.num_components()) {
            let Some(row) = n.row(&b) else { continue };
            let chi = character_vector(&b, &key).expect("sizes match by construction");
            if chi == 0 {
                continue;
            }
            let weight = Rational::from(Int::from(chi)) / &z;
            for (&(g, qq), v) in row.iter() {
                let term = Rational::from(v.clone()) * &weight;
                *acc.entry((g, qq)).or_insert_with(Rational::zero) += term;
            }
        }
        let row = out.row_mut(&key);
        for ((g, qq), v) in acc {
            row.set(g, qq, v);
        }
    }
    out.prune();
    out
}

/// A sparse row of exact rational multiplicities keyed by `(genus, 2Q)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CheckNRow {
    entries: BTreeMap<(u32, i64), Rational>,
}

impl CheckNRow {
    pub fn get(&self, genus: u32, charge2: i64) -> Rational {
        self.entries
            .get(&(genus, charge2))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, genus: u32, charge2: i64, value: Rational) {
        if value.is_zero() {
            self.entries.remove(&(genus, charge2));
        } else {
            self.entries.insert((genus, charge2), value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, i64), &Rational)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_genus(&self) -> Option<u32> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn max_abs_charge2(&self) -> Option<i64> {
        self.entries.keys().map(|k| k.1.abs()).max()
    }
}

n_style_table! {
    /// Exact rational multiplicities on the class-label side; the direct
    /// input of the infinite-product form.
    CheckNTable, CheckNRow
}

/// All pipeline stages bundled, as produced by [`run_pipeline`].
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub w: WTable,
    pub z: ZTable,
    pub f: FTable,
    pub fhat: FhatTable,
    pub p: PTable,
    pub integrality: IntegralityReport,
    pub n: NTable,
    pub small_n: SmallNTable,
    pub check_n: CheckNTable,
}

/// Runs every stage from a colored invariant table through the
/// class-label multiplicities. Fails if `log` preconditions break or the
/// integrality check fails.
pub fn run_pipeline(w: &WTable, convention: PConvention) -> Result<Pipeline, PipelineError> {
    let z = reformulate_z(w);
    let f = free_energy(&z)?;
    let fhat = extract_fhat(&f);
    let p = compute_p(&fhat, convention);
    let integrality = check_integrality(&p, convention);
    let n = extract_n(&p, convention)?;
    let small_n = n_to_small(&n);
    let check_n = compute_checkn(&small_n);
    Ok(Pipeline {
        w: w.clone(),
        z,
        f,
        fhat,
        p,
        integrality,
        n,
        small_n,
        check_n,
    })
}
