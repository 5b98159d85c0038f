use std::collections::BTreeSet;

use circulant_ci::keyspace::{enumerate_key_rows, enumerate_keys, key_partition, refines, KeyTable};
use circulant_ci::multiplier::SolvingSet;
use circulant_ci::zn::{
    crt_decode, crt_encode, element_order, generated_subgroup, p_adic_digits, subgroup_of_order, units,
};
use circulant_ci::{Factorization, Key, Residue};
use proptest::prelude::*;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn catalan(t: usize) -> usize {
    let mut c = vec![1usize; t + 1];
    for i in 1..=t {
        c[i] = (0..i).map(|j| c[j] * c[i - 1 - j]).sum();
    }
    c[t]
}

fn prime_power() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        (1u32..=8).prop_map(|t| (2u64, t)),
        (1u32..=5).prop_map(|t| (3u64, t)),
        (1u32..=3).prop_map(|t| (5u64, t)),
        (1u32..=2).prop_map(|t| (7u64, t)),
        Just((11u64, 2)),
        Just((13u64, 2)),
    ]
}

/// A random key of `Z_n` together with the modulus.
fn key_in(max_n: u64) -> impl Strategy<Value = Key> {
    (2..=max_n).prop_flat_map(|n| {
        let keys = enumerate_keys(&Factorization::new(n).unwrap());
        let len = keys.len();
        (0..len).prop_map(move |i| keys[i].clone())
    })
}

fn key_pair(max_n: u64) -> impl Strategy<Value = (Key, Key)> {
    (2..=max_n).prop_flat_map(|n| {
        let keys = enumerate_keys(&Factorization::new(n).unwrap());
        let len = keys.len();
        (0..len, 0..len).prop_map(move |(i, j)| (keys[i].clone(), keys[j].clone()))
    })
}

proptest! {
    #[test]
    fn crt_round_trip(n in 2u64..=200, x in 0u64..200) {
        let f = Factorization::new(n).unwrap();
        let r = Residue::new(x % n, n).unwrap();
        let parts = crt_encode(r, &f).unwrap();
        prop_assert_eq!(parts.len(), f.parts().len());
        for (c, part) in parts.iter().zip(f.parts()) {
            prop_assert_eq!(c.value(), x % n % part.value());
        }
        prop_assert_eq!(crt_decode(&parts, &f).unwrap(), r);
    }

    #[test]
    fn p_adic_reconstruction((p, t) in prime_power(), x in 0u64..=1 << 20) {
        let q = p.pow(t);
        prop_assume!(q <= 256);
        let r = Residue::new(x % q, q).unwrap();
        let d = p_adic_digits(r).unwrap();
        prop_assert_eq!(d.digits.len(), t as usize);
        prop_assert!(d.digits.iter().all(|&digit| digit < p));
        let value: u64 = d.digits.iter().rev().fold(0, |acc, &digit| acc * p + digit);
        prop_assert_eq!(value, x % q);
        prop_assert_eq!(d.value(), x % q);
    }

    #[test]
    fn element_order_divides_and_is_unit_invariant(n in 2u64..=200, x in 0u64..200) {
        let x = x % n;
        let order = element_order(Residue::new(x, n).unwrap());
        prop_assert_eq!(n % order, 0);
        // smallest positive k with k·x ≡ 0
        let naive = (1..=n).find(|k| k * x % n == 0).unwrap();
        prop_assert_eq!(order, naive);
        for u in units(n).unwrap() {
            prop_assert_eq!(element_order(Residue::new(u * x % n, n).unwrap()), order);
        }
    }

    #[test]
    fn subgroups_are_closed(n in 2u64..=200) {
        for d in (1..=n).filter(|d| n % d == 0) {
            let h = subgroup_of_order(n, d).unwrap();
            prop_assert_eq!(h.len() as u64, d);
            let set: BTreeSet<u64> = h.iter().copied().collect();
            for &a in &h {
                for &b in &h {
                    prop_assert!(set.contains(&((a + b) % n)));
                }
            }
        }
        let phi = (1..=n).filter(|&x| gcd(x, n) == 1).count();
        prop_assert_eq!(units(n).unwrap().len(), phi);
    }

    #[test]
    fn generated_subgroup_matches_closure(n in 2u64..=60, members in prop::collection::vec(0u64..60, 0..4)) {
        let members: Vec<u64> = members.into_iter().map(|x| x % n).collect();
        let mut closure: BTreeSet<u64> = [0].into();
        loop {
            let next: BTreeSet<u64> = closure
                .iter()
                .flat_map(|&a| members.iter().map(move |&s| (a + s) % n))
                .chain(closure.iter().copied())
                .collect();
            if next == closure {
                break;
            }
            closure = next;
        }
        let h = generated_subgroup(n, &members).unwrap();
        prop_assert_eq!(h.into_iter().collect::<BTreeSet<_>>(), closure);
    }

    #[test]
    fn key_order_is_antitone_on_partitions((a, b) in key_pair(100)) {
        if a.leq(&b).unwrap() {
            prop_assert!(refines(&key_partition(&a), &key_partition(&b)).unwrap());
        }
        let meet = a.meet(&b).unwrap();
        let join = a.join(&b).unwrap();
        prop_assert!(meet.leq(&a).unwrap() && meet.leq(&b).unwrap());
        prop_assert!(a.leq(&join).unwrap() && b.leq(&join).unwrap());
        // meet and join stay inside the key space
        prop_assert!(Key::new(meet.factorization().clone(), meet.rows().to_vec()).is_ok());
        prop_assert!(Key::new(join.factorization().clone(), join.rows().to_vec()).is_ok());
    }

    #[test]
    fn key_partition_round_trip(key in key_in(72)) {
        let table = KeyTable::new(key.factorization());
        prop_assert_eq!(table.key_of_partition(&key_partition(&key)).unwrap(), key);
    }

    #[test]
    fn key_class_sizes_are_unit_invariant(key in key_in(72)) {
        let n = key.n();
        let sigma = key_partition(&key);
        let labels = sigma.labels();
        let size = |x: u64| sigma.classes()[labels[x as usize]].len();
        for u in units(n).unwrap() {
            for x in 0..n {
                prop_assert_eq!(size(x), size(u * x % n));
            }
        }
    }

    #[test]
    fn genuine_multipliers_permute_classes(key in key_in(72)) {
        let n = key.n();
        let sigma = key_partition(&key);
        let labels = sigma.labels();
        let solving = SolvingSet::new(&key);
        prop_assert!(!solving.is_empty());
        for i in 0..solving.len() {
            let perm = solving.permutation(i);
            prop_assert_eq!(perm.iter().copied().collect::<BTreeSet<_>>().len() as u64, n);
            for class in sigma.classes() {
                let target = &sigma.classes()[labels[perm[class[0] as usize] as usize]];
                let mut image: Vec<u64> = class.iter().map(|&x| perm[x as usize]).collect();
                image.sort_unstable();
                prop_assert_eq!(&image, target);
            }
            for x in 0..n {
                prop_assert_eq!(
                    element_order(Residue::new(perm[x as usize], n).unwrap()),
                    element_order(Residue::new(x, n).unwrap())
                );
            }
        }
    }

    #[test]
    fn multipliers_preserve_keys(n in 2u64..=16, mask in any::<u16>()) {
        let members: Vec<u64> = (1..n).filter(|x| mask & (1 << x) != 0).collect();
        prop_assume!(!members.is_empty());
        let table = KeyTable::new(&Factorization::new(n).unwrap());
        let key = table.key_of_members(&members).unwrap();
        let solving = SolvingSet::new(&key);
        for g in solving.iter() {
            prop_assert_eq!(table.key_of_members(&g.apply_set(&members)).unwrap(), key.clone());
        }
    }
}

#[test]
fn key_space_sizes_are_catalan() {
    for t in 0..=8u32 {
        assert_eq!(enumerate_key_rows(t).len(), catalan(t as usize), "t = {t}");
    }
    let f = Factorization::new(72).unwrap();
    assert_eq!(enumerate_keys(&f).len(), catalan(3) * catalan(2));
}

#[test]
fn zero_key_gives_unit_maps() {
    for q in [4u64, 8, 16, 9, 27, 25] {
        let f = Factorization::new(q).unwrap();
        let solving = SolvingSet::new(&Key::zero(&f));
        let maps: BTreeSet<Vec<u64>> = (0..solving.len()).map(|i| solving.permutation(i)).collect();
        let units: BTreeSet<Vec<u64>> = units(q)
            .unwrap()
            .into_iter()
            .map(|u| (0..q).map(|x| u * x % q).collect())
            .collect();
        assert_eq!(maps, units, "q = {q}");
    }
}
