//! Bifurcation sets of the survivor-set map, basic and Farey parameter
//! intervals, isolated points, and the correspondence `φ(β) = π₂(α(β))`
//! with the doubling map.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::expansions::{
    alpha_bounds, alpha_of_beta, beta_from_alpha, is_in_q, lex_compare_ep, AlphaOfBeta, BetaSpec,
    EpSequence, ExpansionError,
};
use crate::interval::Real;
use crate::words::{
    is_farey, is_lyndon, lyndon_rotation, max_rotation, plus, reflect, Word, WordError,
};

/// Largest generator length accepted by [`atlas`].
pub const MAX_ATLAS_LEN: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BifurcationError {
    #[error("{0} is not its own maximal rotation")]
    NotMaximalRotation(String),
    #[error("({0})^∞ is not the quasi-greedy expansion of 1 for any base")]
    NotInQ(String),
    #[error("generator {0} has no right endpoint")]
    DegenerateGenerator(String),
    #[error("reflection of {0} is not a non-degenerate Farey word")]
    NotFareyReflection(String),
    #[error("{0} is not a Lyndon word")]
    NotLyndon(String),
    #[error("{0} is not a non-degenerate Farey word")]
    NotFarey(String),
    #[error("intervals {0} and {1} overlap without nesting")]
    PartialOverlap(String, String),
    #[error("cannot order the base against {0} at available precision")]
    UndecidableAtPrecision(String),
    #[error("atlas generator length {0} exceeds {MAX_ATLAS_LEN}")]
    AtlasTooLarge(usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

/// `t ≼ σⁿ(t) ≺ α` for every `n`.
pub fn in_e_plus(t: &EpSequence, alpha: &EpSequence) -> bool {
    t.shifts().all(|s| {
        lex_compare_ep(t, &s) != Ordering::Greater && lex_compare_ep(&s, alpha) == Ordering::Less
    })
}

/// `t = u0^∞` with `t ≼ σᵏ(t) ≺ α` for every shift before the zero tail.
pub fn in_e_zero(t: &EpSequence, alpha: &EpSequence) -> bool {
    t.ends_in_zeros()
        && (0..t.preperiod().len()).all(|k| {
            let s = t.shift(k);
            lex_compare_ep(t, &s) != Ordering::Greater && lex_compare_ep(&s, alpha) == Ordering::Less
        })
}

/// Membership of a point with expansion `t` in the bifurcation sets at β.
/// `None` means undecided because `α(β)` is known only to a horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub in_e_plus: Option<bool>,
    pub in_e_zero: Option<bool>,
}

impl Classification {
    pub fn in_e(&self) -> Option<bool> {
        match (self.in_e_plus, self.in_e_zero) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        }
    }
}

pub fn classify_point(t: &EpSequence, beta: &BetaSpec) -> Classification {
    let (lo, hi) = alpha_bounds(beta, beta.digit_horizon.max(64));
    // Membership is monotone in α: certain with the lower bound, ruled out
    // only if it fails with the upper one.
    let decide = |f: fn(&EpSequence, &EpSequence) -> bool| {
        if f(t, &lo) {
            Some(true)
        } else if !f(t, &hi) {
            Some(false)
        } else {
            None
        }
    };
    Classification {
        in_e_plus: decide(in_e_plus),
        in_e_zero: decide(in_e_zero),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    Basic,
    Farey,
}

impl fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalKind::Basic => "basic",
            IntervalKind::Farey => "farey",
        })
    }
}

/// A parameter interval `(β_L, β_R]` with `α(β_L) = a^∞` and
/// `α(β_R) = a⁺ s^∞`, where `a` is the generator and `s` its Lyndon rotation.
#[derive(Debug, Clone)]
pub struct IntervalRecord {
    pub generator: Word,
    pub lyndon: Word,
    pub alpha_left: EpSequence,
    pub alpha_right: EpSequence,
    pub beta_left: BetaSpec,
    pub beta_right: BetaSpec,
    pub kind: IntervalKind,
}

fn reflects_to_farey(a: &Word) -> bool {
    a.len() >= 2 && is_farey(&reflect(a))
}

/// The basic interval generated by `a`, which must be primitive and its own
/// maximal rotation.
pub fn basic_interval(a: &Word) -> Result<IntervalRecord, BifurcationError> {
    if a.len() == 1 {
        return Err(if a.first() == 1 {
            BifurcationError::DegenerateGenerator(a.to_string())
        } else {
            BifurcationError::NotInQ(a.to_string())
        });
    }
    if max_rotation(a)? != *a {
        return Err(BifurcationError::NotMaximalRotation(a.to_string()));
    }
    let alpha_left = EpSequence::periodic(a);
    if !is_in_q(&alpha_left) {
        return Err(BifurcationError::NotInQ(a.to_string()));
    }
    let (lyndon, _) = lyndon_rotation(a)?;
    let alpha_right = EpSequence::from_words(&plus(a)?, &lyndon);
    assert!(is_in_q(&alpha_right), "right endpoint of {a} must lie in Q");
    Ok(IntervalRecord {
        beta_left: beta_from_alpha(&alpha_left)?,
        beta_right: beta_from_alpha(&alpha_right)?,
        kind: if reflects_to_farey(a) {
            IntervalKind::Farey
        } else {
            IntervalKind::Basic
        },
        generator: a.clone(),
        lyndon,
        alpha_left,
        alpha_right,
    })
}

/// The Farey interval generated by `a`; `reflect(a)` must be a
/// non-degenerate Farey word.
pub fn farey_interval(a: &Word) -> Result<IntervalRecord, BifurcationError> {
    if !reflects_to_farey(a) {
        return Err(BifurcationError::NotFareyReflection(a.to_string()));
    }
    let rec = basic_interval(a)?;
    debug_assert_eq!(rec.lyndon, a.reversed());
    Ok(rec)
}

/// Where β sits relative to one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// `β < β_L`.
    Below,
    /// `β = β_L`.
    AtLeft,
    /// `β_L < β ≤ β_R`.
    Inside,
    /// `β > β_R`.
    Above,
}

/// Orders β against one endpoint. Symbolic bases compare through `α`,
/// which is exact by monotonicity of `β ↦ α(β)`; numeric ones through
/// certified values refined as needed.
fn compare_to_endpoint(
    beta: &BetaSpec,
    endpoint_alpha: &EpSequence,
    endpoint: &BetaSpec,
) -> Result<Ordering, BifurcationError> {
    if let Some(a) = &beta.alpha {
        return Ok(lex_compare_ep(a, endpoint_alpha));
    }
    for bits in [64u32, 128, 256, 512, 1024] {
        if let Some(o) = beta.value_at(bits).cmp_certain(&endpoint.value_at(bits)) {
            if o != Ordering::Equal || (beta.value.is_exact() && endpoint.value.is_exact()) {
                return Ok(o);
            }
        }
    }
    Err(BifurcationError::UndecidableAtPrecision(endpoint_alpha.to_string()))
}

pub fn locate(beta: &BetaSpec, rec: &IntervalRecord) -> Result<Position, BifurcationError> {
    match compare_to_endpoint(beta, &rec.alpha_left, &rec.beta_left)? {
        Ordering::Less => Ok(Position::Below),
        Ordering::Equal => Ok(Position::AtLeft),
        Ordering::Greater => match compare_to_endpoint(beta, &rec.alpha_right, &rec.beta_right)? {
            Ordering::Greater => Ok(Position::Above),
            _ => Ok(Position::Inside),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Isolation {
    Isolated,
    NotIsolated,
    NotInEPlus,
}

impl fmt::Display for Isolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Isolation::Isolated => "isolated",
            Isolation::NotIsolated => "not_isolated",
            Isolation::NotInEPlus => "not_in_E_plus",
        })
    }
}

/// Whether the point with expansion `(t_period)^∞` is isolated in the
/// bifurcation set at β: isolated exactly on the basic interval of its
/// maximal rotation, absent from the set below it.
pub fn classify_isolated(t_period: &Word, beta: &BetaSpec) -> Result<Isolation, BifurcationError> {
    if !is_lyndon(t_period) {
        return Err(BifurcationError::NotLyndon(t_period.to_string()));
    }
    if t_period.len() == 1 {
        // 0^∞ is a limit of bifurcation points; 1^∞ is never admissible.
        return Ok(if t_period.first() == 0 {
            Isolation::NotIsolated
        } else {
            Isolation::NotInEPlus
        });
    }
    let rec = basic_interval(&max_rotation(t_period)?)?;
    Ok(match locate(beta, &rec)? {
        Position::Below | Position::AtLeft => Isolation::NotInEPlus,
        Position::Inside => Isolation::Isolated,
        Position::Above => Isolation::NotIsolated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nesting {
    Disjoint,
    FirstInsideSecond,
    SecondInsideFirst,
    Equal,
}

impl fmt::Display for Nesting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Nesting::Disjoint => "disjoint",
            Nesting::FirstInsideSecond => "first_inside_second",
            Nesting::SecondInsideFirst => "second_inside_first",
            Nesting::Equal => "equal",
        })
    }
}

/// Relation between two half-open intervals, decided exactly on the `α`
/// sequences of their endpoints.
pub fn nesting_relation(
    i1: &IntervalRecord,
    i2: &IntervalRecord,
) -> Result<Nesting, BifurcationError> {
    let cmp = lex_compare_ep;
    let (l1, r1, l2, r2) = (&i1.alpha_left, &i1.alpha_right, &i2.alpha_left, &i2.alpha_right);
    if cmp(l1, l2) == Ordering::Equal && cmp(r1, r2) == Ordering::Equal {
        return Ok(Nesting::Equal);
    }
    if cmp(r1, l2) != Ordering::Greater || cmp(r2, l1) != Ordering::Greater {
        return Ok(Nesting::Disjoint);
    }
    if cmp(l2, l1) != Ordering::Greater && cmp(r1, r2) != Ordering::Greater {
        return Ok(Nesting::FirstInsideSecond);
    }
    if cmp(l1, l2) != Ordering::Greater && cmp(r2, r1) != Ordering::Greater {
        return Ok(Nesting::SecondInsideFirst);
    }
    Err(BifurcationError::PartialOverlap(
        i1.generator.to_string(),
        i2.generator.to_string(),
    ))
}

/// Exact value of an eventually periodic sequence in base 2.
pub fn binary_value(x: &EpSequence) -> BigRational {
    let int = |d: &[u8]| -> BigInt {
        d.iter()
            .fold(BigInt::zero(), |acc, &b| (acc << 1) + BigInt::from(b))
    };
    let p = x.preperiod().len();
    let q = x.period().len();
    let head = BigRational::new(int(x.preperiod()), BigInt::one() << p);
    let tail = BigRational::new(
        int(x.period()),
        (BigInt::one() << p) * ((BigInt::one() << q) - BigInt::one()),
    );
    head + tail
}

/// The doubling-map interval `(q_L, q_R)` of a Farey word `w`, with
/// `q_L = π₂((w_m…w_1)^∞) - 1/2` and `q_R = π₂(w^∞)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublingInterval {
    pub word: Word,
    pub q_left: BigRational,
    pub q_right: BigRational,
}

pub fn doubling_interval(w: &Word) -> Result<DoublingInterval, BifurcationError> {
    if w.len() < 2 || !is_farey(w) {
        return Err(BifurcationError::NotFarey(w.to_string()));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    Ok(DoublingInterval {
        word: w.clone(),
        q_left: binary_value(&EpSequence::periodic(&w.reversed())) - half,
        q_right: binary_value(&EpSequence::periodic(w)),
    })
}

/// `φ(β) = π₂(α(β))`, exact when `α(β)` is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiBracket {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl PhiBracket {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

pub fn phi(beta: &BetaSpec) -> PhiBracket {
    if let AlphaOfBeta::Periodic {
        alpha,
        heuristic: false,
    } = alpha_of_beta(beta)
    {
        let v = binary_value(&alpha);
        return PhiBracket {
            lower: v.clone(),
            upper: v,
        };
    }
    let (lo, hi) = alpha_bounds(beta, beta.digit_horizon.max(64));
    PhiBracket {
        lower: binary_value(&lo),
        upper: binary_value(&hi),
    }
}

/// Longest run of zeros in the first `horizon` digits of `α(β)`, and whether
/// the record was already reached in the first half. A run that stops
/// growing hints that zero runs are bounded; it is never a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroRunReport {
    pub horizon: usize,
    pub max_zero_run: usize,
    pub appears_bounded: bool,
}

pub fn zero_run_diagnostic(beta: &BetaSpec, horizon: usize) -> ZeroRunReport {
    let digits = match alpha_of_beta(beta) {
        AlphaOfBeta::Periodic { alpha, .. } => alpha.prefix(horizon),
        AlphaOfBeta::Prefix(run) => {
            let (lo, _) = alpha_bounds(beta, horizon);
            if run.certified >= horizon {
                run.digits
            } else {
                lo.prefix(horizon)
            }
        }
    };
    let longest = |d: &[u8]| {
        d.split(|&x| x == 1).map(|r| r.len()).max().unwrap_or(0)
    };
    let full = longest(&digits);
    let half = longest(&digits[..horizon / 2]);
    ZeroRunReport {
        horizon,
        max_zero_run: full,
        appears_bounded: half == full,
    }
}

/// Checks whether the orbit of `β - 1` falls into the hole `(0, t)`, which
/// makes a point of the zero-tail bifurcation set isolated. Exact when β is
/// symbolic; otherwise only the first `horizon` certified digits are used.
/// Returns the first step at which the orbit is inside the hole.
pub fn orbit_of_beta_minus_one_enters_hole(
    t: &EpSequence,
    beta: &BetaSpec,
    horizon: usize,
) -> Option<usize> {
    let zero = EpSequence::zeros();
    let inside = |s: &EpSequence| {
        lex_compare_ep(&zero, s) == Ordering::Less && lex_compare_ep(s, t) == Ordering::Less
    };
    if let Some(a) = &beta.alpha {
        let greedy_one = if a.preperiod().is_empty() && a.period() != [1] {
            let mut d = a.period().to_vec();
            let last = d.len() - 1;
            d[last] = 1;
            EpSequence::new(&d, &[0])
        } else {
            a.clone()
        };
        let orbit = greedy_one.shift(1);
        return (0..orbit.window()).find(|&k| inside(&orbit.shift(k)));
    }
    let value = beta.value_at(64).sub(&Real::one());
    let run = crate::expansions::greedy_digits(&value, beta, horizon).ok()?;
    let trusted = &run.digits[..run.certified];
    (0..trusted.len()).find(|&k| {
        let rest = &trusted[k..];
        // A prefix strictly below b(t) and not all zeros decides membership.
        let tprefix = t.prefix(rest.len());
        rest.contains(&1) && {
            let first_diff = rest.iter().zip(&tprefix).position(|(x, y)| x != y);
            matches!(first_diff, Some(i) if rest[i] < tprefix[i] && rest[..=i].contains(&1))
        }
    })
}

/// One atlas entry together with the smallest interval containing it.
#[derive(Debug, Clone)]
pub struct AtlasEntry {
    pub record: IntervalRecord,
    /// Index of the immediately enclosing interval within the atlas.
    pub parent: Option<usize>,
}

/// Words of length `2..=max_len` that are primitive and maximal among their
/// rotations, i.e. all basic-interval generators, in increasing order.
pub fn generators_up_to(max_len: usize) -> Vec<Word> {
    let mut out = vec![];
    for len in 2..=max_len {
        for m in 0u64..(1 << len) {
            let digits: Vec<u8> = (0..len).rev().map(|i| ((m >> i) & 1) as u8).collect();
            let w = Word::from_digits(&digits);
            if w.is_primitive() && max_rotation(&w).ok().as_ref() == Some(&w) && w.first() == 1 {
                out.push(w);
            }
        }
    }
    out
}

/// All basic (or only Farey) intervals with generators of length at most
/// `max_len`, sorted by left endpoint, with nesting parents.
pub fn atlas(max_len: usize, farey_only: bool) -> Result<Vec<AtlasEntry>, BifurcationError> {
    if max_len > MAX_ATLAS_LEN {
        return Err(BifurcationError::AtlasTooLarge(max_len));
    }
    let gens: Vec<Word> = generators_up_to(max_len)
        .into_iter()
        .filter(|a| !farey_only || reflects_to_farey(a))
        .collect();
    let mut records = gens
        .par_iter()
        .map(basic_interval)
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|x, y| {
        lex_compare_ep(&x.alpha_left, &y.alpha_left)
            .then_with(|| lex_compare_ep(&y.alpha_right, &x.alpha_right))
    });
    let parents = (0..records.len())
        .into_par_iter()
        .map(|i| -> Result<Option<usize>, BifurcationError> {
            let mut best: Option<usize> = None;
            for j in 0..records.len() {
                if i == j || nesting_relation(&records[i], &records[j])? != Nesting::FirstInsideSecond {
                    continue;
                }
                best = match best {
                    Some(b) if nesting_relation(&records[j], &records[b])? != Nesting::FirstInsideSecond => Some(b),
                    _ => Some(j),
                };
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(records
        .into_iter()
        .zip(parents)
        .map(|(record, parent)| AtlasEntry { record, parent })
        .collect())
}
