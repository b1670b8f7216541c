//! Randomized algebraic laws: ring axioms and canonicalization for the
//! exact arithmetic layers, inverse pairs for every reversible pipeline
//! stage, and the serialization roundtrip.

use proptest::prelude::*;

use lmov_core::laurent::LaurentPoly;
use lmov_core::partition::PartitionVector;
use lmov_core::pipeline::{
    extract_fhat, fhat_to_free_energy, free_energy, free_energy_to_z, n_to_small, reformulate_z,
    small_to_n, z_to_w, FhatTable, NRow, NTable, WTable, ZTable,
};
use lmov_core::pseries::{PSeries, SchurCoeffs};
use lmov_core::qseries::{ExpandMode, QSeries};
use lmov_core::ratfunc::RatFunc;
use lmov_core::tablefile::{read_w_table, write_w_table};
use lmov_core::{rat, Int, Rational};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn arb_nonzero_rational() -> impl Strategy<Value = Rational> {
    arb_rational().prop_filter("nonzero", |r| !num::Zero::is_zero(r))
}

fn arb_laurent(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec(((-4i64..=4, -4i64..=4), arb_rational()), 0..=max_terms).prop_map(
        |terms| {
            let mut p = LaurentPoly::zero();
            for ((a, b), c) in terms {
                p.add_term((a, b), c);
            }
            p
        },
    )
}

/// Denominators from the canonical-domain family: a unit times a product
/// of quantum integers, which are `v`-free.
fn arb_vfree_den() -> impl Strategy<Value = LaurentPoly> {
    (
        proptest::collection::vec(1i64..=3, 0..=2),
        -2i64..=2,
        -2i64..=2,
        arb_nonzero_rational(),
    )
        .prop_map(|(ks, a, b, c)| {
            let mut den = LaurentPoly::monomial(a, b).scale(&c);
            for k in ks {
                den = &den * &LaurentPoly::qnum(k);
            }
            den
        })
}

fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
    (arb_laurent(4), arb_vfree_den())
        .prop_map(|(num, den)| RatFunc::new(num, den).expect("den is nonzero"))
}

fn arb_small_ratfunc() -> impl Strategy<Value = RatFunc> {
    (arb_laurent(2), 1i64..=2).prop_map(|(num, k)| {
        RatFunc::new(num, LaurentPoly::qnum(k)).expect("den is nonzero")
    })
}

fn table_from_values<T>(
    degree: u32,
    values: Vec<RatFunc>,
    mut make: impl FnMut(u32) -> T,
    mut set: impl FnMut(&mut T, PartitionVector, RatFunc),
) -> T {
    let keys = PartitionVector::enumerate_up_to(1, degree);
    let mut t = make(degree);
    for (k, v) in keys.into_iter().zip(values) {
        set(&mut t, k, v);
    }
    t
}

fn arb_wtable(degree: u32) -> impl Strategy<Value = WTable> {
    let n = PartitionVector::enumerate_up_to(1, degree).len();
    proptest::collection::vec(arb_small_ratfunc(), n).prop_map(move |vals| {
        table_from_values(degree, vals, |d| WTable::new(1, d), |t, k, v| t.set(k, v))
    })
}

fn arb_fhat_table(degree: u32) -> impl Strategy<Value = FhatTable> {
    let n = PartitionVector::enumerate_up_to(1, degree).len();
    proptest::collection::vec(arb_small_ratfunc(), n).prop_map(move |vals| {
        table_from_values(degree, vals, |d| FhatTable::new(1, d), |t, k, v| t.set(k, v))
    })
}

fn arb_nrow() -> impl Strategy<Value = NRow> {
    proptest::collection::vec((0u32..=6, -9i64..=9, -50i64..=50), 1..=8).prop_map(|entries| {
        let mut row = NRow::default();
        for (g, qq, v) in entries {
            row.set(g, qq, Int::from(v));
        }
        row
    })
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in arb_laurent(5), b in arb_laurent(5), c in arb_laurent(5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, LaurentPoly::zero());
    }

    #[test]
    fn laurent_substitution_involutions(a in arb_laurent(5)) {
        prop_assert_eq!(a.subst_s_inv().subst_s_inv(), a.clone());
        prop_assert_eq!(a.subst_v_inv().subst_v_inv(), a.clone());
        prop_assert_eq!(a.subst_v_neg().subst_v_neg(), a.clone());
        prop_assert_eq!(a.swap_vars().swap_vars(), a.clone());
        prop_assert_eq!(a.adams(1), a.clone());
    }

    #[test]
    fn laurent_adams_composes(a in arb_laurent(4), d in 1i64..=3, e in 1i64..=3) {
        prop_assert_eq!(a.adams(d).adams(e), a.adams(d * e));
    }

    #[test]
    fn ratfunc_common_factors_cancel(
        num in arb_laurent(4),
        den in arb_vfree_den(),
        extra in arb_vfree_den(),
    ) {
        let plain = RatFunc::new(num.clone(), den.clone()).unwrap();
        let padded = RatFunc::new(&num * &extra, &den * &extra).unwrap();
        prop_assert_eq!(plain, padded);
    }

    #[test]
    fn ratfunc_ring_laws(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, RatFunc::zero());
    }

    #[test]
    fn ratfunc_substitutions_commute_with_sum(a in arb_ratfunc(), b in arb_ratfunc()) {
        let sum = &a + &b;
        prop_assert_eq!(sum.subst_s_inv(), &a.subst_s_inv() + &b.subst_s_inv());
        prop_assert_eq!(sum.subst_v_neg(), &a.subst_v_neg() + &b.subst_v_neg());
        prop_assert_eq!(sum.adams(2), &a.adams(2) + &b.adams(2));
    }

    #[test]
    fn exact_division_roundtrips(num in arb_laurent(4), den in arb_vfree_den()) {
        let product = RatFunc::from_poly(&num * &den);
        let back = product
            .checked_div(&RatFunc::from_poly(den))
            .unwrap()
            .as_laurent()
            .unwrap();
        prop_assert_eq!(back, num);
    }

    #[test]
    fn expansion_is_a_ring_homomorphism(
        a in arb_ratfunc(),
        b in arb_ratfunc(),
        mode in prop_oneof![Just(ExpandMode::Q), Just(ExpandMode::QInverse)],
    ) {
        let order = 8;
        let ea = QSeries::expand(&a, order, mode).unwrap();
        let eb = QSeries::expand(&b, order, mode).unwrap();
        let sum = QSeries::expand(&(&a + &b), order, mode).unwrap();
        let prod = QSeries::expand(&(&a * &b), order, mode).unwrap();
        prop_assert!(sum.diff(&ea.add(&eb)).is_empty());
        prop_assert!(prod.diff(&ea.mul(&eb)).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn log_exp_are_mutually_inverse(w in arb_wtable(3)) {
        // Through the table API: z -> F -> z and the other composition.
        let z = reformulate_z(&w);
        let f = free_energy(&z).unwrap();
        prop_assert_eq!(free_energy_to_z(&f).unwrap(), z);
    }

    #[test]
    fn moebius_pair_is_inverse(fh in arb_fhat_table(4)) {
        let f = fhat_to_free_energy(&fh);
        prop_assert_eq!(extract_fhat(&f), fh);
    }

    #[test]
    fn moebius_pair_other_direction(fh in arb_fhat_table(4)) {
        // Treat the random table as a free energy instead.
        let mut f = lmov_core::pipeline::FTable::new(1, 4);
        for (k, v) in fh.iter() {
            f.set(k.clone(), v.clone());
        }
        let primitive = extract_fhat(&f);
        prop_assert_eq!(fhat_to_free_energy(&primitive), f);
    }

    #[test]
    fn schur_power_bases_are_inverse(w in arb_wtable(4)) {
        let z = reformulate_z(&w);
        prop_assert_eq!(z_to_w(&z), w.clone());
        let mut back = ZTable::new(1, 4);
        for (k, v) in reformulate_z(&z_to_w(&z)).iter() {
            back.set(k.clone(), v.clone());
        }
        prop_assert_eq!(back, z);
    }

    #[test]
    fn specialization_pair_is_inverse(w in arb_wtable(3)) {
        let mut ps = PSeries::new(1, 3);
        for (k, v) in w.iter() {
            ps.set_coeff(k.clone(), v.clone());
        }
        prop_assert_eq!(ps.specialize_qrho().specialize_qrho_inverse(), ps);
    }

    #[test]
    fn qrho_transform_pair_is_inverse(w in arb_wtable(3)) {
        let mut sc = SchurCoeffs::new(1, 3);
        for (k, v) in w.iter() {
            sc.set_coeff(k.clone(), v.clone());
        }
        let t = sc.transform_qrho(false);
        prop_assert_eq!(t.transform_qrho(true), sc);
    }

    #[test]
    fn w_table_serialization_roundtrips(w in arb_wtable(2)) {
        let text = write_w_table(&w, "random");
        let (back, name) = read_w_table(&text).unwrap();
        prop_assert_eq!(back, w);
        prop_assert_eq!(name, "random");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn genus_basis_change_roundtrips(row in arb_nrow()) {
        let mut n = NTable::new(1, 1);
        *n.row_mut(&"1".parse().unwrap()) = row;
        let small = n_to_small(&n);
        prop_assert_eq!(small_to_n(&small), n);
    }

    #[test]
    fn genus_basis_change_other_direction(row in arb_nrow()) {
        let mut small = lmov_core::pipeline::SmallNTable::new(1, 1);
        *small.row_mut(&"1".parse().unwrap()) = row;
        let n = small_to_n(&small);
        prop_assert_eq!(n_to_small(&n), small);
    }
}
