use proptest::prelude::*;

use schurci::group::make_group;
use schurci::perm::{PermGroup, Permutation};
use schurci::ring::RingElement;
use schurci::schur::generated_sring;

fn factors() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(prop::sample::select(vec![2u32, 3, 4, 5, 7, 9]), 1..=3)
        .prop_filter("small", |f| f.iter().product::<u32>() <= 64)
}

fn group_and_elements(k: usize) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    factors().prop_flat_map(move |f| {
        let n = f.iter().product::<u32>();
        (Just(f), prop::collection::vec(0..n, k))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation::from_images)
}

proptest! {
    #[test]
    fn rank_exponent_roundtrip((f, xs) in group_and_elements(4)) {
        let g = make_group(&f).unwrap();
        for x in xs {
            let e = g.exponents(x);
            prop_assert_eq!(e.len(), f.len());
            prop_assert!(e.iter().zip(&f).all(|(a, m)| a < m));
            prop_assert_eq!(g.rank_of(&e).unwrap(), x);
        }
    }

    #[test]
    fn arithmetic_matches_exponents((f, xs) in group_and_elements(3), m in -20i64..20) {
        let g = make_group(&f).unwrap();
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        let (ea, eb) = (g.exponents(a), g.exponents(b));
        let sum: Vec<u32> = ea.iter().zip(&eb).zip(&f).map(|((x, y), k)| (x + y) % k).collect();
        prop_assert_eq!(g.add(a, b), g.rank_of(&sum).unwrap());
        let neg: Vec<u32> = ea.iter().zip(&f).map(|(x, k)| (k - x) % k).collect();
        prop_assert_eq!(g.neg(a), g.rank_of(&neg).unwrap());
        let scaled: Vec<u32> = ea.iter().zip(&f).map(|(&x, &k)| (x as i64 * m).rem_euclid(k as i64) as u32).collect();
        prop_assert_eq!(g.scale(a, m), g.rank_of(&scaled).unwrap());
        prop_assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
        prop_assert_eq!(g.sub(g.add(a, b), b), a);
        prop_assert_eq!(g.add(a, g.neg(a)), 0);
    }

    #[test]
    fn generated_rings_are_srings((f, seed) in group_and_elements(6)) {
        let g = make_group(&f).unwrap();
        let p = generated_sring(&g, &[seed.clone()]);
        prop_assert!(p.is_valid());
        // the seed is a union of basic sets
        let labels = p.block_labels();
        for &x in &seed {
            for y in g.elements() {
                if labels[y as usize] == labels[x as usize] {
                    prop_assert!(seed.contains(&y));
                }
            }
        }
    }

    #[test]
    fn ring_laws((f, xs) in group_and_elements(9), k in -4i64..5) {
        let g = make_group(&f).unwrap();
        let term = |i: usize| RingElement::from_coefficients(&g, [(xs[i], 1 + i as i64), (xs[i + 1], k), (xs[i + 2], -2)]);
        let (a, b, c) = (term(0), term(3), term(6));
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
        let rhs = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.multiply(&RingElement::one(&g)).unwrap(), a.clone());
        prop_assert_eq!(a.pow(2), a.multiply(&a).unwrap());
    }

    #[test]
    fn permutation_laws(a in permutation(9), b in permutation(9), x in 0u32..9) {
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.inverse().then(&a).is_identity());
        prop_assert_eq!(a.then(&b).apply(x), b.apply(a.apply(x)));
        prop_assert_eq!(a.then(&b).inverse(), b.inverse().then(&a.inverse()));
    }

    #[test]
    fn generated_group_contains_generators(a in permutation(7), b in permutation(7)) {
        let g = PermGroup::new(7, vec![a.clone(), b.clone()]);
        prop_assert!(g.contains(&a));
        prop_assert!(g.contains(&a.then(&b).inverse()));
        let order = g.order_u128().unwrap();
        prop_assert_eq!(5040 % order, 0);
    }
}
