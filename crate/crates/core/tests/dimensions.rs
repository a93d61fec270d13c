use bredon_core::characters::{all_characters, Character, GroupRank, LinearAutomorphism};
use bredon_core::oracle::Oracle;
use bredon_core::presentation::{dimension_linear, is_in_ideal, normal_form, Caps, QuotientPiece};
use bredon_core::ring::{count_monomials, RepDegree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_degree(max_rank: u32, max_total: u32) -> impl Strategy<Value = (GroupRank, RepDegree)> {
    (2..=max_rank).prop_flat_map(move |r| {
        let n = (1u32 << r) - 1;
        (prop::collection::vec(1..=n, 0..=max_total as usize), 0i64..=max_total as i64).prop_map(move |(masks, m)| {
            let chars: Vec<Character> = masks.into_iter().map(|x| Character::new(x).unwrap()).collect();
            (GroupRank::new(r).unwrap(), RepDegree::from_characters(m, &chars))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linear_algebra_agrees_with_oracle((rank, d) in arb_degree(4, 7)) {
        let lin = dimension_linear(rank, &d, &Caps::default()).unwrap();
        prop_assert_eq!(lin.dim, Oracle::new().dimension(rank, &d).unwrap());
        prop_assert_eq!(u128::from(lin.monomials), count_monomials(&d));
    }

    #[test]
    fn dimension_is_invariant_under_automorphisms((rank, d) in arb_degree(4, 6), seed in any::<u64>()) {
        let g = LinearAutomorphism::random(rank, &mut ChaCha8Rng::seed_from_u64(seed));
        let moved = RepDegree::new(d.m(), d.rep().iter().map(|&(c, k)| (g.apply(c), k)));
        let caps = Caps::default();
        prop_assert_eq!(dimension_linear(rank, &d, &caps).unwrap().dim, dimension_linear(rank, &moved, &caps).unwrap().dim);
    }

    #[test]
    fn normal_form_is_a_canonical_representative((rank, d) in arb_degree(3, 6), bits in any::<u64>()) {
        let caps = Caps::default();
        let piece = QuotientPiece::new(rank, &d, &caps).unwrap();
        let n = piece.monomials.len().min(64);
        let f = bredon_core::ring::AtPolynomial::from_terms(
            (0..n).filter(|i| bits >> i & 1 == 1).map(|i| piece.monomials[i].clone()),
        );
        let nf = normal_form(&f, rank, &caps).unwrap();
        prop_assert!(is_in_ideal(&f.add(&nf), rank, &caps).unwrap());
        prop_assert_eq!(normal_form(&nf, rank, &caps).unwrap(), nf.clone());
        prop_assert_eq!(nf.is_zero(), piece.is_zero(&f).unwrap());
    }
}

#[test]
fn vanishing_outside_the_range() {
    let caps = Caps::default();
    for r in 1..=3 {
        let rank = GroupRank::new(r).unwrap();
        let chars = all_characters(rank);
        for len in 0..=5 {
            let w = RepDegree::from_characters(0, &chars.iter().cycle().take(len).copied().collect::<Vec<_>>());
            let top = i64::from(w.dim());
            assert_eq!(dimension_linear(rank, &w, &caps).unwrap().dim, 1);
            assert_eq!(dimension_linear(rank, &w.with_m(top), &caps).unwrap().dim, 1);
            assert_eq!(dimension_linear(rank, &w.with_m(top + 1), &caps).unwrap().dim, 0);
            assert_eq!(dimension_linear(rank, &w.with_m(-1), &caps).unwrap().dim, 0);
        }
    }
}
