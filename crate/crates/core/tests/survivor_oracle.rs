use betashift::expansions::{is_in_q, lex_compare_ep, EpSequence};
use betashift::survivor::{
    count_prefix_valid, count_words_brute, entropy, entropy_by_counting, reduce_upper,
    LexSubshift, SubshiftAutomaton,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn random_ep(rng: &mut ChaCha8Rng, max_pre: usize, max_per: usize) -> EpSequence {
    let pre: Vec<u8> = (0..rng.gen_range(0..=max_pre)).map(|_| rng.gen_range(0..2)).collect();
    let per: Vec<u8> = (0..rng.gen_range(1..=max_per)).map(|_| rng.gen_range(0..2)).collect();
    EpSequence::new(&pre, &per)
}

/// Random pairs with `lower ≺ upper`; half of them use an upper bound from
/// the set of quasi-greedy expansions of 1, as survivor sets do.
fn random_shift(rng: &mut ChaCha8Rng) -> LexSubshift {
    loop {
        let lower = random_ep(rng, 4, 6);
        let upper = random_ep(rng, 4, 6);
        if lex_compare_ep(&lower, &upper) != Ordering::Less {
            continue;
        }
        if rng.gen_bool(0.5) && !is_in_q(&upper) {
            continue;
        }
        let mut s = LexSubshift::new(lower, upper);
        s.strict_lower = rng.gen_bool(0.2);
        s.strict_upper = rng.gen_bool(0.8);
        return s;
    }
}

#[test]
fn automaton_matches_brute_force_on_random_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..300 {
        let s = random_shift(&mut rng);
        let a = SubshiftAutomaton::compile(&s).unwrap();
        for n in 1..=10 {
            let fast = a.count_words(n);
            let slow = count_words_brute(&s, n).unwrap();
            assert_eq!(fast, BigUint::from(slow), "case {case}, n = {n}: {s:?}");
        }
    }
}

#[test]
fn counts_are_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let s = random_shift(&mut rng);
        let a = SubshiftAutomaton::compile(&s).unwrap();
        let counts: Vec<BigUint> = (0..=12).map(|n| a.count_words(n)).collect();
        for m in 1..=6 {
            for n in 1..=6 {
                assert!(counts[m + n] <= &counts[m] * &counts[n], "{s:?}");
            }
        }
    }
}

#[test]
fn reduction_preserves_counts_where_it_fires() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fired = 0;
    while fired < 10 {
        let mut s = random_shift(&mut rng);
        s.strict_upper = true;
        s.strict_lower = false;
        let r = reduce_upper(&s);
        if r == s {
            continue;
        }
        fired += 1;
        let a = SubshiftAutomaton::compile(&s).unwrap();
        let b = SubshiftAutomaton::compile(&r).unwrap();
        for n in 1..=12 {
            assert_eq!(a.count_words(n), b.count_words(n), "{s:?} -> {r:?}");
        }
    }
}

#[test]
fn counting_upper_bound_only_tightens() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let s = random_shift(&mut rng);
        let mut last = f64::INFINITY;
        for depth in 1..=14 {
            let c = entropy_by_counting(&s, depth);
            assert!(c.upper <= last);
            last = c.upper;
        }
        let exact = entropy(&s);
        assert!(last >= exact.lower - 1e-12);
        assert!(count_prefix_valid(&s, 8).unwrap() >= count_words_brute(&s, 8).unwrap());
    }
}
