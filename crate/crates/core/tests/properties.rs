use std::collections::BTreeSet;

use proptest::prelude::*;

use mrs_core::array::{Entry, MrsParams};
use mrs_core::construct::{zero_sum_blocks, OmegaSet};
use mrs_core::diagonal::diagonal_n2c;
use mrs_core::existence::{admissible_params, decide_with, DecideOptions};
use mrs_core::group::{all_abelian_groups, isomorphism, quotient_with_iso};
use mrs_core::integer::build_mrs_2_b_c;
use mrs_core::FiniteAbelianGroup;

/// A random group of order at most 64 in invariant-factor form.
fn any_group() -> impl Strategy<Value = FiniteAbelianGroup> {
    (1u64..=64).prop_flat_map(|order| {
        let groups = all_abelian_groups(order);
        proptest::sample::select(groups)
    })
}

fn group_and_elements(count: usize) -> impl Strategy<Value = (FiniteAbelianGroup, Vec<usize>)> {
    any_group().prop_flat_map(move |g| {
        let n = g.order() as usize;
        (Just(g), proptest::collection::vec(0..n, count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_an_abelian_group_law((g, idx) in group_and_elements(3)) {
        let [a, b, c] = [0, 1, 2].map(|i| g.element_at(idx[i]));
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert_eq!(a.try_add(&b).unwrap().try_add(&c).unwrap(), a.try_add(&b.try_add(&c).unwrap()).unwrap());
        prop_assert!(a.try_add(&a.neg()).unwrap().is_zero());
        prop_assert_eq!(g.index_of(&a), idx[0]);
        prop_assert_eq!(a.scalar_mul(a.order() as i64), g.zero());
    }

    #[test]
    fn isomorphism_to_canonical_form_preserves_sums((g, idx) in group_and_elements(2)) {
        let target = FiniteAbelianGroup::new(&g.primary_factors().iter().map(|&(_, pe)| pe).collect::<Vec<_>>()).unwrap();
        let f = isomorphism(&g, &target).expect("same invariants");
        prop_assert!(f.is_injective() && f.is_surjective());
        let (a, b) = (g.element_at(idx[0]), g.element_at(idx[1]));
        let lhs = f.apply(&a.try_add(&b).unwrap()).unwrap();
        let rhs = f.apply(&a).unwrap().try_add(&f.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_section_is_a_right_inverse((g, idx) in group_and_elements(1)) {
        let sub = g.cyclic_subgroup(&g.element_at(idx[0]));
        let q = quotient_with_iso(&g, &sub).unwrap();
        prop_assert_eq!(q.group.order() * sub.len() as u64, g.order());
        let kernel: BTreeSet<_> = q.proj.kernel().into_iter().collect();
        prop_assert_eq!(kernel, sub.iter().cloned().collect::<BTreeSet<_>>());
        for x in q.group.elements() {
            prop_assert_eq!(q.proj.apply(&q.section.apply(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn zero_sum_blocks_cover_their_product(half in 3u64..=12, mask in 1u32..2048, psi in prop_oneof![Just(vec![4u64]), Just(vec![2, 2]), Just(vec![2, 4]), Just(vec![8])]) {
        let order = 2 * half;
        let cyc = FiniteAbelianGroup::cyclic(order).unwrap();
        let reps: Vec<u64> = (1..half).filter(|x| mask & (1 << (x - 1)) != 0).collect();
        prop_assume!(!reps.is_empty());
        let elems = reps.iter().flat_map(|&x| [x as i64, -(x as i64)]).map(|x| cyc.element(&[x]).unwrap()).collect();
        let omega = OmegaSet::new(cyc, elems).unwrap();
        let psi = FiniteAbelianGroup::new(&psi).unwrap();
        let blocks = zero_sum_blocks(&omega, &psi).unwrap();
        prop_assert_eq!(blocks.len(), reps.len());
        let mut seen = BTreeSet::new();
        for b in &blocks {
            prop_assert!(b.is_zero_sum().unwrap());
            for e in b.entries() {
                prop_assert!(seen.insert(e.clone()));
            }
        }
        prop_assert_eq!(seen.len() as u64, 2 * reps.len() as u64 * psi.order());
    }

    #[test]
    fn two_row_sets_have_the_closed_form_constants(half_b in 2usize..=10, c in 1usize..=6) {
        let b = 2 * half_b;
        let inst = build_mrs_2_b_c(b, c).unwrap();
        let r = inst.verify();
        prop_assert!(r.passed());
        let delta = (2 * b * c + 1) as i64;
        prop_assert_eq!(r.delta, Some(Entry::Int(delta)));
        prop_assert_eq!(r.omega, Some(Entry::Int(b as i64 * delta / 2)));
    }

    #[test]
    fn diagonal_sets_transpose_cleanly(n in 2usize..=8, c in 1usize..=4, pick in any::<prop::sample::Index>()) {
        let groups: Vec<_> = all_abelian_groups((2 * n * c) as u64)
            .into_iter()
            .filter(|g| g.element_of_order(n as u64).is_some())
            .collect();
        let g = pick.get(&groups);
        let inst = diagonal_n2c(n, c, g).unwrap();
        let t = inst.transpose();
        let (r, rt) = (inst.verify(), t.verify());
        prop_assert!(r.passed() && rt.passed());
        prop_assert_eq!(rt.omega, r.delta);
        prop_assert_eq!(t.transpose(), inst);
    }

    #[test]
    fn decisions_are_invariant_under_transposition(order in 4usize..=40, pick in any::<prop::sample::Index>(), gpick in any::<prop::sample::Index>()) {
        let params = admissible_params(order);
        prop_assume!(!params.is_empty());
        let p: MrsParams = *pick.get(&params);
        let groups = all_abelian_groups(order as u64);
        let g = gpick.get(&groups);
        let opts = DecideOptions { witnesses: false, ..DecideOptions::default() };
        let a = decide_with(p, g, &opts).unwrap();
        let b = decide_with(p.transpose(), g, &opts).unwrap();
        prop_assert_eq!(a.status, b.status, "{} over {}", p, g);
    }
}
