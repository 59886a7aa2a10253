//! The ten acceptance criteria. Each test prints one `PASS`/`FAIL` line
//! before asserting, so `cargo test -- --nocapture` doubles as a report.

use std::cmp::Ordering;
use std::time::Instant;

use betashift::bifurcation::{
    atlas, doubling_interval, farey_interval, nesting_relation, phi, IntervalKind, Nesting,
};
use betashift::critical::{
    bracket_chain, t_n_family, tau_report, verify_empty_at_left_endpoint, z_set,
};
use betashift::expansions::{
    beta_from_alpha, ep, lex_compare_ep, one_minus_inverse_expansion, BetaSpec, EpSequence,
    PointSpec,
};
use betashift::interval::Real;
use betashift::survivor::{
    count_words_brute, dimension_with, staircase, uniform_grid, DimensionOptions, LexSubshift,
    SubshiftAutomaton,
};
use betashift::words::{
    check_palindrome_property, farey_level, farey_words_up_to, is_lyndon, lex_compare,
    max_rotation, reflect, standard_factorization, w, Word,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, what: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n} PASS: {what}");
    } else {
        println!("criterion {n} FAIL: {what}");
        for f in failures {
            println!("    {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn words(s: &[&str]) -> Vec<Word> {
    s.iter().map(|x| w(x)).collect()
}

#[test]
fn criterion_01_farey_levels() {
    let mut f = vec![];
    let l1 = farey_level(1).unwrap().entries;
    let l2 = farey_level(2).unwrap().entries;
    check(&mut f, l1 == words(&["0", "01", "1"]), || format!("F_1 = {l1:?}"));
    check(&mut f, l2 == words(&["0", "001", "01", "011", "1"]), || {
        format!("F_2 = {l2:?}")
    });
    verdict(1, "Farey levels 1 and 2 match exactly", &f);
}

#[test]
fn criterion_02_root_solving() {
    let mut f = vec![];
    for (alpha, expected) in [("(10)", 1.618033988749895), ("(110)", 1.839286755214161)] {
        let b = beta_from_alpha(&ep(alpha)).unwrap().value;
        let err = (b.mid_f64() - expected).abs() + b.width_f64();
        check(&mut f, err < 1e-9, || format!("β({alpha}) = {} ± {}", b.mid_f64(), b.width_f64()));
    }
    let two = beta_from_alpha(&ep("(1)")).unwrap();
    let exact = two.value.is_exact() && two.value.lo_ratio() == BigRational::from_integer(2.into());
    check(&mut f, exact, || format!("β((1)) = {:?}", two.value));
    verdict(2, "bases recovered from periodic α", &f);
}

#[test]
fn criterion_03_doubling_map() {
    let mut f = vec![];
    let beta = BetaSpec::parse("2").unwrap();
    let opts = DimensionOptions {
        counting_depth: 20,
        ..DimensionOptions::default()
    };
    let at_zero = dimension_with(&beta, &PointSpec::symbolic(EpSequence::zeros(), &beta).unwrap(), opts);
    check(
        &mut f,
        at_zero.dim_lower >= 1.0 - 1e-6 && at_zero.dim_upper <= 1.0 + 1e-6,
        || format!("η₂(0) in [{}, {}]", at_zero.dim_lower, at_zero.dim_upper),
    );
    let at_half = dimension_with(&beta, &PointSpec::from_decimal("0.5").unwrap(), opts);
    check(&mut f, at_half.dim_upper < 0.02, || {
        format!("η₂(1/2) ≤ {}", at_half.dim_upper)
    });
    let tau = tau_report(&beta, 8).unwrap();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let exact = tau.tau_lower.is_exact()
        && tau.tau_upper.is_exact()
        && tau.tau_lower.lo_ratio() == half
        && tau.tau_upper.hi_ratio() == half;
    check(&mut f, exact, || format!("τ₂ = [{:?}, {:?}]", tau.tau_lower, tau.tau_upper));
    verdict(3, "doubling-map endpoints and τ₂ = 1/2", &f);
}

fn staircase_failures(label: &str, beta: &BetaSpec, f: &mut Vec<String>) {
    let ceiling = 1.0 - 1.0 / beta.value.mid_f64();
    let exact_end = one_minus_inverse_expansion(beta);
    let grid = uniform_grid(beta, 0.0, ceiling, 64, exact_end);
    let rows = staircase(beta, &grid, DimensionOptions::default());
    let first = &rows[0];
    check(f, first.dim_lower >= 1.0 - 1e-6 && first.dim_upper <= 1.0 + 1e-6, || {
        format!("{label}: row at 0 is [{}, {}]", first.dim_lower, first.dim_upper)
    });
    for pair in rows.windows(2) {
        let width = (pair[0].dim_upper - pair[0].dim_lower).max(pair[1].dim_upper - pair[1].dim_lower);
        check(f, pair[1].dim_upper <= pair[0].dim_upper + 2.0 * width, || {
            format!("{label}: dim_upper rises from {} to {} at t = {}", pair[0].dim_upper, pair[1].dim_upper, pair[1].t)
        });
    }
    for (p, row) in grid.iter().zip(&rows) {
        let at_or_past = p.expansion.is_some() && p.value.lo_f64() > 0.0 || row.t >= ceiling;
        if at_or_past {
            check(f, row.dim_upper < 0.02, || {
                format!("{label}: dim_upper {} at t = {}", row.dim_upper, row.t)
            });
        }
    }
}

#[test]
fn criterion_04_staircases() {
    let start = Instant::now();
    let mut f = vec![];
    staircase_failures("golden", &BetaSpec::parse("@(10)").unwrap(), &mut f);
    staircase_failures("tribonacci", &BetaSpec::parse("@(110)").unwrap(), &mut f);
    let secs = start.elapsed().as_secs_f64();
    check(&mut f, secs < 60.0, || format!("took {secs:.1} s"));
    verdict(4, &format!("golden and tribonacci staircases ({secs:.1} s)"), &f);
}

fn random_ep(rng: &mut ChaCha8Rng) -> EpSequence {
    let pre: Vec<u8> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(0..2)).collect();
    let per: Vec<u8> = (0..rng.gen_range(1..=5)).map(|_| rng.gen_range(0..2)).collect();
    EpSequence::new(&pre, &per)
}

#[test]
fn criterion_05_oracle_equivalence() {
    let mut f = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut cases = 0;
    while cases < 20 {
        let (lower, upper) = (random_ep(&mut rng), random_ep(&mut rng));
        if lex_compare_ep(&lower, &upper) != Ordering::Less {
            continue;
        }
        cases += 1;
        let shift = LexSubshift::new(lower, upper);
        let automaton = SubshiftAutomaton::compile(&shift).unwrap();
        for n in 1..=12 {
            let fast = automaton.count_words(n);
            let slow = BigUint::from(count_words_brute(&shift, n).unwrap());
            check(&mut f, fast == slow, || format!("{shift:?}, n = {n}: {fast} vs {slow}"));
        }
    }
    verdict(5, "automaton counts equal brute-force counts, 20 cases, n ≤ 12", &f);
}

#[test]
fn criterion_06_z_sets() {
    let mut f = vec![];
    match z_set(&w("10")) {
        Ok(z) => check(&mut f, z.members == vec![ep("(01)"), ep("(10)")], || {
            format!("Z(10) = {:?}", z.members)
        }),
        Err(e) => f.push(format!("Z(10): {e}")),
    }
    for fw in farey_words_up_to(8) {
        let a = reflect(&fw);
        if let Err(e) = z_set(&a) {
            f.push(format!("Z({a}): {e}"));
        }
    }
    verdict(6, "Z(10) = {(01)^∞, (10)^∞}; finite for all generators up to length 8", &f);
}

#[test]
fn criterion_07_interval_structure() {
    let mut f = vec![];
    let records: Vec<_> = atlas(8, false).unwrap().into_iter().map(|e| e.record).collect();
    for (i, x) in records.iter().enumerate() {
        for y in &records[i + 1..] {
            match nesting_relation(x, y) {
                Ok(n) => {
                    let both_farey = x.kind == IntervalKind::Farey && y.kind == IntervalKind::Farey;
                    check(&mut f, !both_farey || n == Nesting::Disjoint, || {
                        format!("Farey intervals {} and {} are {n}", x.generator, y.generator)
                    });
                }
                Err(e) => f.push(format!("{} vs {}: {e}", x.generator, y.generator)),
            }
        }
    }
    for fw in farey_words_up_to(8) {
        let rec = farey_interval(&reflect(&fw)).unwrap();
        let d = doubling_interval(&fw).unwrap();
        let one = BigRational::from_integer(1.into());
        for (beta, target) in [(&rec.beta_left, &one - &d.q_right), (&rec.beta_right, &one - &d.q_left)] {
            let p = phi(beta);
            let err = [&p.lower - &target, &p.upper - &target]
                .iter()
                .map(|e| e.to_f64().unwrap().abs())
                .fold(0.0, f64::max);
            check(&mut f, err < 1e-9, || format!("φ at an endpoint of {fw} off by {err:e}"));
        }
    }
    verdict(7, "basic intervals nest or are disjoint; Farey ones are disjoint; φ endpoints", &f);
}

#[test]
fn criterion_08_critical_bracket() {
    let mut f = vec![];
    let beta = BetaSpec::parse("1.7").unwrap();
    let a = w("10");
    let rec = farey_interval(&a).unwrap();
    check(
        &mut f,
        rec.beta_left.value.certainly_lt(&beta.value) && beta.value.certainly_le(&rec.beta_right.value),
        || "1.7 is not inside the golden Farey interval".into(),
    );
    let c = bracket_chain(&beta, &a).unwrap();
    check(&mut f, c.floor_below_star(), || {
        format!(
            "1 - 1/β - 1/β² + 1/(β(β²-1)) ≈ {:.9} exceeds t* ≈ {:.9}",
            c.floor.mid_f64(),
            c.t_star.mid_f64()
        )
    });
    check(&mut f, c.star_below_diamond(), || "t* ≤ t⋄ not certified".into());
    check(&mut f, c.diamond_below_ceiling(), || "t⋄ < 1 - 1/β not certified".into());
    let below = PointSpec::numeric(c.t_star.sub(&Real::from_f64(0.01, 128)));
    let d_below = dimension_with(&beta, &below, DimensionOptions::default());
    check(&mut f, d_below.dim_lower > 0.0, || {
        format!("dimension lower bound at t* - 0.01 is {}", d_below.dim_lower)
    });
    let at = PointSpec::numeric(c.t_diamond.clone());
    let d_at = dimension_with(&beta, &at, DimensionOptions::default());
    check(&mut f, d_at.dim_upper < 0.02, || {
        format!("dimension upper bound at t⋄ is {}", d_at.dim_upper)
    });
    verdict(8, "critical-point bracket at β = 1.7", &f);
}

#[test]
fn criterion_09_left_endpoints() {
    let mut f = vec![];
    for fw in farey_words_up_to(6) {
        let a = reflect(&fw);
        match verify_empty_at_left_endpoint(&a) {
            Ok(true) => {}
            Ok(false) => f.push(format!("survivor set at the left endpoint of {a} is nonempty")),
            Err(e) => f.push(format!("{a}: {e}")),
        }
        for n in 1..=5 {
            if let Err(e) = t_n_family(&a, n) {
                f.push(format!("t_{n} for {a}: {e}"));
            }
        }
    }
    verdict(9, "empty survivor sets at Farey left endpoints; t_N shift checks", &f);
}

/// Every proper suffix strictly exceeds the prefix of the same length.
fn lyndon_by_definition(s: &[u8]) -> bool {
    (1..s.len()).all(|i| s[i..] > s[..s.len() - i])
}

#[test]
fn criterion_10_word_combinatorics() {
    let mut f = vec![];
    for len in 1..=12usize {
        for m in 0u32..(1 << len) {
            let d: Vec<u8> = (0..len).rev().map(|i| ((m >> i) & 1) as u8).collect();
            let word = Word::from_digits(&d);
            check(&mut f, is_lyndon(&word) == lyndon_by_definition(&d), || {
                format!("is_lyndon({word}) disagrees with the definition")
            });
        }
    }
    for fw in farey_words_up_to(20) {
        let m = fw.len();
        check(&mut f, check_palindrome_property(&fw) == Ok(true), || format!("interior of {fw} is not a palindrome"));
        check(&mut f, max_rotation(&fw).unwrap() == fw.reversed(), || {
            format!("maximal rotation of {fw} is not its reversal")
        });
        let (u, v) = standard_factorization(&fw).unwrap();
        let mut rotations: Vec<Word> = (0..m).map(|k| fw.rotate(k)).collect();
        rotations.sort_by(lex_compare);
        check(&mut f, is_lyndon(&fw) && rotations[1] == v.concat(&u), || {
            format!("{fw} is not Lyndon or vu is not its second-least rotation")
        });
    }
    verdict(10, "Lyndon oracle up to length 12; Farey word structure up to length 20", &f);
}
