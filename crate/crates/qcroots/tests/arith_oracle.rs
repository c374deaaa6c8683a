//! Root enumeration against brute force over all residues.

use proptest::prelude::*;
use qcroots::arith::{
    enumerate_roots, first_n_roots, roots_mod_m, sqrt_mod_prime_power, CongruenceFilter, Discriminant,
    FactorTable, Root, RootEnumerator,
};
use qcroots::error::{DiscriminantReason, Error};

fn brute(d: i64, m: u64) -> Vec<u64> {
    (0..m)
        .filter(|&mu| ((mu as i128 * mu as i128 - d as i128).rem_euclid(m as i128)) == 0)
        .collect()
}

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

#[test]
fn discriminant_validation() {
    assert!(Discriminant::new(2).is_ok());
    assert!(Discriminant::new(-1).is_ok());
    assert!(Discriminant::new(-5).is_ok());
    let reason = |d| match Discriminant::new(d) {
        Err(Error::InvalidDiscriminant { reason, .. }) => reason,
        other => panic!("{d} accepted: {other:?}"),
    };
    assert_eq!(reason(5), DiscriminantReason::OneModFour);
    assert_eq!(reason(12), DiscriminantReason::SquareFactor(2));
    assert_eq!(reason(9), DiscriminantReason::PerfectSquare);
    assert_eq!(reason(0), DiscriminantReason::Zero);
    assert_eq!(reason(-3), DiscriminantReason::OneModFour);
    assert!(Discriminant::new(5).unwrap_err().to_string().contains("≡ 1 mod 4"));
}

#[test]
fn prime_power_examples() {
    assert_eq!(sqrt_mod_prime_power(disc(2), 7, 1), vec![3, 4]);
    assert_eq!(sqrt_mod_prime_power(disc(3), 11, 1), vec![5, 6]);
    assert_eq!(sqrt_mod_prime_power(disc(2), 2, 2), Vec::<u64>::new());
    assert_eq!(sqrt_mod_prime_power(disc(2), 2, 1), vec![0]);
}

#[test]
fn prime_powers_match_brute_force() {
    for d in [2, 3, 6, 7, 10, -1, -2, -5, 14, 15] {
        for (p, max_e) in [(2u64, 10u32), (3, 6), (5, 5), (7, 4), (11, 3), (13, 3), (97, 2)] {
            for e in 1..=max_e {
                let pe = p.pow(e);
                assert_eq!(sqrt_mod_prime_power(disc(d), p, e), brute(d, pe), "D={d} p^e={p}^{e}");
            }
        }
    }
}

#[test]
fn roots_mod_m_examples() {
    let table = FactorTable::new(100);
    assert_eq!(roots_mod_m(disc(2), 1, &table).unwrap(), vec![0]);
    assert_eq!(roots_mod_m(disc(2), 7, &table).unwrap(), vec![3, 4]);
    assert_eq!(roots_mod_m(disc(10), 13, &table).unwrap(), vec![6, 7]);
    assert_eq!(roots_mod_m(disc(2), 4, &table).unwrap(), Vec::<u64>::new());
    assert_eq!(
        roots_mod_m(disc(2), 101, &table),
        Err(Error::ModulusOutOfRange { m: 101, bound: 100 })
    );
}

#[test]
fn brute_force_equivalence_up_to_5000() {
    let table = FactorTable::new(5000);
    for d in [2, 3, 10, -1, -5] {
        for m in 1..=5000 {
            assert_eq!(roots_mod_m(disc(d), m, &table).unwrap(), brute(d, m), "D={d} m={m}");
        }
    }
}

#[test]
fn factor_table_is_smallest_prime_factor() {
    let table = FactorTable::new(10_000);
    for k in 2..=10_000u64 {
        let f = table.factor(k).unwrap();
        let least = (2..=k).find(|p| k % p == 0).unwrap();
        assert_eq!(f[0].0, least, "k={k}");
        assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), k);
    }
}

#[test]
fn enumerate_examples() {
    assert_eq!(
        enumerate_roots(disc(2), 2, CongruenceFilter::TRIVIAL).unwrap(),
        vec![Root { m: 1, mu: 0 }, Root { m: 2, mu: 0 }]
    );
    let f = CongruenceFilter::new(2, 1).validate(disc(3)).unwrap();
    assert_eq!(enumerate_roots(disc(3), 2, f).unwrap(), vec![Root { m: 2, mu: 1 }]);
}

/// The count of roots with `m ≤ 10` for D = 2 is fixed by brute force.
#[test]
fn count_up_to_ten_matches_brute_force() {
    let expected: usize = (1..=10).map(|m| brute(2, m).len()).sum();
    let got = enumerate_roots(disc(2), 10, CongruenceFilter::TRIVIAL).unwrap();
    assert_eq!(got.len(), expected);
    assert_eq!(expected, 4);
    assert_eq!(
        got,
        vec![Root { m: 1, mu: 0 }, Root { m: 2, mu: 0 }, Root { m: 7, mu: 3 }, Root { m: 7, mu: 4 }]
    );
}

#[test]
fn invalid_filter_is_rejected() {
    assert_eq!(
        CongruenceFilter::new(3, 1).validate(disc(2)),
        Err(Error::InvalidFilter { n: 3, nu: 1 })
    );
}

#[test]
fn multiplicativity() {
    let table = FactorTable::new(1_000_000);
    let count = |d: i64, m: u64| roots_mod_m(disc(d), m, &table).unwrap().len();
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    for d in [2, 3, 10, -1] {
        for m1 in (1..=1000u64).step_by(7) {
            for m2 in (1..=1000u64).step_by(13) {
                if gcd(m1, m2) == 1 {
                    assert_eq!(count(d, m1 * m2), count(d, m1) * count(d, m2), "D={d} {m1}·{m2}");
                }
            }
        }
    }
}

#[test]
fn prime_root_counts() {
    let table = FactorTable::new(200_000);
    let primes: Vec<u64> = (3..2000u64).filter(|&p| (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0)).collect();
    for d in [2i64, 3, 10, 30, -5] {
        for &p in &primes {
            let c = roots_mod_m(disc(d), p, &table).unwrap().len();
            if d.rem_euclid(p as i64) == 0 {
                assert_eq!(c, 1);
                assert_eq!(roots_mod_m(disc(d), p * p, &table).unwrap().len(), 0);
            } else {
                assert!(c == 0 || c == 2, "D={d} p={p} count={c}");
            }
        }
    }
}

#[test]
fn stream_is_deterministic_and_chunkable() {
    let d = disc(10);
    let table = FactorTable::new(50_000);
    let stream = RootEnumerator::new(d, &table, CongruenceFilter::TRIVIAL);
    let a = stream.range(1, 50_000).unwrap();
    let b = stream.par_range(1, 50_000).unwrap();
    let c = [stream.range(1, 12_345).unwrap(), stream.range(12_346, 50_000).unwrap()].concat();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(a.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn first_n_truncates_exactly() {
    let (roots, last) = first_n_roots(disc(2), 1000, CongruenceFilter::TRIVIAL).unwrap();
    assert_eq!(roots.len(), 1000);
    assert_eq!(roots.last().unwrap().m, last);
    let all = enumerate_roots(disc(2), last, CongruenceFilter::TRIVIAL).unwrap();
    assert_eq!(&all[..1000], &roots[..]);
}

proptest! {
    #[test]
    fn every_root_solves_the_congruence(d in prop::sample::select(vec![2i64, 3, 6, 10, 11, -1, -2, -5]), m in 1u64..200_000) {
        let table = FactorTable::new(m);
        let roots = roots_mod_m(disc(d), m, &table).unwrap();
        for &mu in &roots {
            prop_assert!(mu < m);
            prop_assert_eq!((mu as i128 * mu as i128 - d as i128).rem_euclid(m as i128), 0);
        }
        prop_assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn filter_keeps_exactly_matching_roots(n in 1u64..30, max_m in 1u64..3000) {
        let d = disc(2);
        let Some(nu) = (0..n).find(|nu| (nu * nu) % n == d.residue(n)) else { return Ok(()); };
        let f = CongruenceFilter::new(n, nu);
        let all = enumerate_roots(d, max_m, CongruenceFilter::TRIVIAL).unwrap();
        let filtered = enumerate_roots(d, max_m, f).unwrap();
        let expected: Vec<Root> = all.into_iter().filter(|r| r.m % n == 0 && r.mu % n == nu).collect();
        prop_assert_eq!(filtered, expected);
    }
}
