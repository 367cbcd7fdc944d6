//! Randomised invariants checked against brute-force oracles.

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;
use ltheory_core::abelian::{ext_group, hom_group, smith_normal_form, FgAbGroup, IntMatrix};
use ltheory_core::forms::{arf, brown_kervaire, signature, F2QuadForm, LinkingForm, SymForm};
use ltheory_core::graded::{double_dual_check, GradedGroup};
use ltheory_core::ltables;
use ltheory_core::poincare;

/// Unimodular integer matrix built from elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, c, swap) in ops {
            let mut e = IntMatrix::identity(n);
            if swap {
                e.set(i, i, 0.into());
                e.set(j, j, 0.into());
                e.set(i, j, 1.into());
                e.set(j, i, 1.into());
            } else if i != j {
                e.set(i, j, c.into());
            }
            u = u.mul(&e).unwrap();
        }
        u
    })
}

fn symmetric(n: usize) -> impl Strategy<Value = SymForm> {
    prop::collection::vec(-4i64..=4, n * n)
        .prop_map(move |v| {
            let mut g = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    g.set(i, j, v[i * n + j].into());
                    g.set(j, i, v[i * n + j].into());
                }
            }
            SymForm::new(g).unwrap()
        })
        .prop_filter("signature needs a nonsingular form", |f| f.gram().det().unwrap() != BigInt::from(0))
}

/// Invertible matrix over F2 from elementary operations.
fn f2_invertible(n: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec((0..n, 0..n), 0..16).prop_map(move |ops| {
        let mut a: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
        for (i, j) in ops {
            if i != j {
                for row in a.iter_mut() {
                    row[j] ^= row[i];
                }
            }
        }
        a
    })
}

fn f2_form() -> impl Strategy<Value = F2QuadForm> {
    prop::collection::vec(any::<bool>(), 1..=3).prop_map(|planes| {
        let mut f = if planes[0] { F2QuadForm::arf_one_plane() } else { F2QuadForm::hyperbolic() };
        for &p in &planes[1..] {
            f = f.orthogonal_sum(&if p { F2QuadForm::arf_one_plane() } else { F2QuadForm::hyperbolic() });
        }
        f
    })
}

/// Majority-of-values Arf invariant by enumeration.
fn arf_oracle(f: &F2QuadForm) -> u8 {
    let n = f.dim();
    let ones = (0u32..1 << n)
        .filter(|bits| {
            let v: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            f.eval(&v) == 1
        })
        .count();
    u8::from(ones > 1 << (n - 1))
}

fn linking_block() -> impl Strategy<Value = LinkingForm> {
    (0..3u8, 1..=3u32, prop::sample::select(vec![1i64, 3, 5, 7])).prop_map(|(kind, k, u)| {
        match kind {
            0 => LinkingForm::cyclic(k, u),
            1 => LinkingForm::hyperbolic(k),
            _ => LinkingForm::arf_block(k),
        }
        .unwrap()
    })
}

fn finite_orders() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..=8, 0..=2).prop_filter("order at most 64", |v| v.iter().product::<u64>() <= 64)
}

fn bigints(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn snf_diagonalises(rows in 1usize..=6, cols in 1usize..=6, seed in prop::collection::vec(-50i64..=50, 36)) {
        let a = IntMatrix::from_vec(rows, cols, seed[..rows * cols].iter().map(|&x| x.into()).collect()).unwrap();
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        let f = s.invariant_factors();
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
    }

    #[test]
    fn signature_is_a_congruence_invariant((g, u) in (1usize..=4).prop_flat_map(|n| (symmetric(n), unimodular(n)))) {
        prop_assert_eq!(signature(&g).unwrap(), signature(&g.congruent(&u).unwrap()).unwrap());
    }

    #[test]
    fn signature_of_diagonal(entries in prop::collection::vec(prop::sample::select(vec![-5i64, -2, -1, 1, 3, 4]), 1..=5)) {
        let want = entries.iter().map(|&x| x.signum()).sum::<i64>();
        prop_assert_eq!(signature(&SymForm::diagonal(&entries)).unwrap(), want);
    }

    #[test]
    fn arf_is_a_basis_invariant((f, a) in f2_form().prop_flat_map(|f| { let n = f.dim(); (Just(f), f2_invertible(n)) })) {
        let g = f.change_basis(&a).unwrap();
        prop_assert_eq!(arf(&f).unwrap(), arf(&g).unwrap());
        prop_assert_eq!(arf(&g).unwrap(), arf_oracle(&g));
    }

    #[test]
    fn brown_kervaire_is_additive(a in linking_block(), b in linking_block()) {
        let s = a.orthogonal_sum(&b).unwrap();
        let (ba, bb) = (brown_kervaire(&a).unwrap(), brown_kervaire(&b).unwrap());
        prop_assert_eq!(brown_kervaire(&s).unwrap(), (ba + bb) % 8);
    }

    #[test]
    fn hom_and_ext_match_enumeration(a in finite_orders(), b in finite_orders()) {
        let (ga, gb) = (FgAbGroup::from_orders(&bigints(&a)), FgAbGroup::from_orders(&bigints(&b)));
        prop_assert_eq!(group_histogram(&hom_group(&ga, &gb)), hom_oracle(&a, &b));
        prop_assert_eq!(group_histogram(&ext_group(&ga, &gb)), ext_oracle(&a, 0, &b));
    }

    #[test]
    fn ext_into_free_groups(a in finite_orders(), free in 0usize..=2) {
        let ga = FgAbGroup::from_orders(&bigints(&a));
        prop_assert_eq!(group_histogram(&ext_group(&ga, &FgAbGroup::free(free))), ext_oracle(&a, free, &[]));
    }

    #[test]
    fn localisation_agrees_with_classical_tables(lo in -20i64..=0, len in 0i64..=20) {
        let w = (lo, lo + len);
        let (gs, s) = (ltables::table("Lgs", w).unwrap(), ltables::table("Ls", w).unwrap());
        let (q, gq) = (ltables::table("Lq", w).unwrap(), ltables::table("Lgq", w).unwrap());
        for n in lo..=lo + len {
            if n >= 0 {
                prop_assert_eq!(gs.at(n), s.at(n));
            }
            if n < 2 {
                prop_assert_eq!(q.at(n), gq.at(n));
            }
        }
    }

    #[test]
    fn builtin_tables_are_double_dual(idx in 0usize..ltables::BASE_NAMES.len(), lo in -12i64..=-4, len in 8i64..=16) {
        let name = ltables::BASE_NAMES[idx];
        let t = ltables::table(name, (lo, lo + len)).unwrap();
        prop_assert!(double_dual_check(&t).unwrap(), "{}", name);
    }

    #[test]
    fn random_windows_are_double_dual(lo in -8i64..=4, groups in prop::collection::vec(prop::sample::select(vec!["0", "Z", "Z/2", "Z/4", "Z + Z/3", "Z/2 + Z/2"]), 3..=10)) {
        let g = GradedGroup::new(lo, lo + groups.len() as i64 - 1, groups.iter().map(|s| group(s)).collect(), None).unwrap();
        prop_assert!(double_dual_check(&g).unwrap());
    }
}

#[test]
fn tensor_preserves_structure_relations() {
    for s in ["E", "unit"] {
        for q in ["F", "hyperbolic", "Z4"] {
            let t =
                poincare::tensor_structured(&poincare::builtin(s).unwrap(), &poincare::builtin(q).unwrap()).unwrap();
            assert!(t.complex().is_square_zero(), "{s} (x) {q}");
            assert!(t.structure().relation_failures(t.complex()).is_empty(), "{s} (x) {q}");
            assert!(poincare::poincare_check(&t).unwrap(), "{s} (x) {q}");
        }
    }
}
