use betashift::critical::{
    bracket_chain, farey_atlas, one_minus_inverse, t_n_family, tau_report_in, z_set,
    verify_empty_at_left_endpoint, TauRegime,
};
use betashift::expansions::{is_admissible, BetaSpec, PointSpec};
use betashift::survivor::dimension;
use betashift::words::{farey_words_up_to, reflect};
use num_rational::BigRational;
use num_traits::FromPrimitive;

fn generators(max_len: usize) -> Vec<betashift::words::Word> {
    farey_words_up_to(max_len).iter().map(reflect).collect()
}

/// Bases a quarter and half way into the interval, plus its right endpoint.
fn samples(a: &betashift::words::Word) -> Vec<BetaSpec> {
    let rec = betashift::bifurcation::farey_interval(a).unwrap();
    let l = rec.beta_left.value.mid_ratio();
    let r = rec.beta_right.value.mid_ratio();
    let at = |f: f64| {
        let f = BigRational::from_f64(f).unwrap();
        BetaSpec::from_ratio(&l + (&r - &l) * f).unwrap()
    };
    vec![at(0.25), at(0.5), rec.beta_right.clone()]
}

#[test]
fn z_sets_are_finite_up_to_length_8() {
    for a in generators(8) {
        let z = z_set(&a).unwrap_or_else(|e| panic!("{a}: {e}"));
        assert!(z.cardinality() >= a.len(), "{a}");
    }
}

#[test]
fn left_endpoints_have_empty_survivor_sets() {
    for a in generators(7) {
        assert!(verify_empty_at_left_endpoint(&a).unwrap(), "{a}");
    }
}

#[test]
fn upper_part_of_bracket_chain_holds() {
    for a in generators(8) {
        for beta in samples(&a) {
            let c = bracket_chain(&beta, &a).unwrap();
            assert!(c.star_below_diamond(), "{a} at {:?}", beta);
            assert!(c.diamond_below_ceiling(), "{a} at {:?}", beta);
        }
    }
}

#[test]
fn floor_of_bracket_chain_fails_for_known_cases() {
    // Frozen counterexamples to the claimed lower bound on t*.
    for (a, f) in [("10", 0.5), ("110", 0.99), ("100", 0.5)] {
        let a = betashift::words::w(a);
        let rec = betashift::bifurcation::farey_interval(&a).unwrap();
        let l = rec.beta_left.value.mid_ratio();
        let r = rec.beta_right.value.mid_ratio();
        let beta = BetaSpec::from_ratio(&l + (&r - &l) * BigRational::from_f64(f).unwrap()).unwrap();
        let c = bracket_chain(&beta, &a).unwrap();
        assert!(c.floor.certainly_gt(&c.t_star), "{a} at {f}");
    }
}

#[test]
fn t_n_members_admissible_above_left_endpoint() {
    for a in generators(6) {
        let beta = samples(&a).remove(0);
        let alpha = betashift::expansions::alpha_bounds(&beta, 128).0;
        for n in 1..=5 {
            let t = t_n_family(&a, n).unwrap();
            assert!(is_admissible(&t, &alpha), "{a} N={n}");
        }
    }
}

#[test]
fn dimension_changes_sign_around_the_bracket() {
    let beta = BetaSpec::parse("1.7").unwrap();
    let c = bracket_chain(&beta, &betashift::words::w("10")).unwrap();
    let below = PointSpec::numeric(c.t_star.sub(&betashift::interval::Real::from_f64(0.01, 128)));
    assert!(dimension(&beta, &below).dim_lower > 0.0);
    let at = PointSpec::numeric(c.t_diamond.midpoint());
    assert!(dimension(&beta, &at).dim_upper < 0.02);
}

#[test]
fn tau_never_exceeds_one_minus_inverse() {
    let atlas = farey_atlas(8).unwrap();
    for i in 0..32 {
        let b = 1.5 + 0.5 * (i as f64 + 0.5) / 32.0;
        let beta = BetaSpec::from_f64(b).unwrap();
        let r = tau_report_in(&beta, &atlas, 8).unwrap();
        let ceiling = one_minus_inverse(&beta);
        assert!(!r.tau_upper.certainly_gt(&ceiling), "β={b}");
        assert!(!r.tau_lower.certainly_gt(&r.tau_upper), "β={b}");
        if r.regime == TauRegime::OutsideClosure {
            assert_eq!(r.tau_lower, r.tau_upper);
        }
    }
}
