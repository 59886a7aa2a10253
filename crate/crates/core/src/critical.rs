//! The critical hole size `τ_β`, past which the survivor set has zero
//! dimension: exact values at Farey left endpoints and off the Farey
//! intervals, the `[t*, t⋄]` bracket inside them, the finite sets `𝒵`
//! that make the upper bound work, and the approximants `t_N` that make the
//! lower bound work.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::bifurcation::{farey_interval, locate, BifurcationError, IntervalRecord, Position};
use crate::expansions::{
    alpha_bounds, beta_from_alpha, is_in_q, lex_compare_ep, project, BetaSpec, EpSequence,
};
use crate::interval::Real;
use crate::survivor::{LexSubshift, SubshiftAutomaton, SurvivorError};
use crate::words::{farey_words_up_to, is_farey, lyndon_rotation, plus, reflect, Word};

/// Gap between neighbouring atlas intervals below which a base outside all
/// of them is treated as lying outside their closure.
pub const ATLAS_GAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriticalError {
    #[error("atlas depth must be at least 2, got {0}")]
    AtlasDepthTooSmall(usize),
    #[error("cannot place the base relative to the interval of {0}")]
    AtlasInconclusive(String),
    #[error("reflection of {0} is not a non-degenerate Farey word")]
    NotFareyReflection(String),
    #[error("the set bounded by {0} is not a finite union of transients into its cycle")]
    FinitenessCertificateFailed(String),
    #[error("{0} fails its shift bounds")]
    ShiftCheckFailed(String),
    #[error(transparent)]
    Survivor(#[from] SurvivorError),
    #[error(transparent)]
    Bifurcation(#[from] BifurcationError),
}

fn lift(e: BifurcationError) -> CriticalError {
    match e {
        BifurcationError::UndecidableAtPrecision(s) => CriticalError::AtlasInconclusive(s),
        e => CriticalError::Bifurcation(e),
    }
}

fn require_farey_generator(a: &Word) -> Result<(), CriticalError> {
    if a.len() >= 2 && is_farey(&reflect(a)) {
        Ok(())
    } else {
        Err(CriticalError::NotFareyReflection(a.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauRegime {
    /// β is the left endpoint of a Farey interval, `τ = 1 - 1/β`.
    LeftEndpoint,
    /// Inside a Farey interval, below the threshold where `τ = t*`.
    InsideFareyLow,
    /// Inside a Farey interval above the threshold; only `[t*, t⋄]` is known.
    InsideFareyHigh,
    /// Outside every atlas interval with gaps below tolerance, `τ = 1 - 1/β`.
    OutsideClosure,
    /// Outside every atlas interval but in a wide gap; the atlas is too
    /// shallow to decide.
    Unresolved,
}

impl fmt::Display for TauRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauRegime::LeftEndpoint => "left_endpoint",
            TauRegime::InsideFareyLow => "inside_farey_low",
            TauRegime::InsideFareyHigh => "inside_farey_high",
            TauRegime::OutsideClosure => "outside_closure",
            TauRegime::Unresolved => "unresolved",
        })
    }
}

/// A sequence backing one of the reported bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub role: &'static str,
    pub sequence: EpSequence,
}

#[derive(Debug, Clone)]
pub struct TauReport {
    pub beta: BetaSpec,
    pub regime: TauRegime,
    pub tau_lower: Real,
    pub tau_upper: Real,
    /// Farey generator whose interval decided the regime, if any.
    pub generator: Option<Word>,
    pub witnesses: Vec<Witness>,
    pub atlas_depth: usize,
    /// False when the answer rests on the finite atlas rather than a proof.
    pub certified: bool,
}

/// `0a₂…a_m(a)^∞`, the expansion of `t*`.
pub fn t_star_sequence(a: &Word) -> EpSequence {
    let mut pre = a.digits();
    pre[0] = 0;
    EpSequence::new(&pre, &a.digits())
}

/// `0a₂…a_m⁺0^∞`, the expansion of `t⋄`. Needs `a_m = 0`, which holds for
/// every generator of length at least 2.
pub fn t_diamond_sequence(a: &Word) -> EpSequence {
    let mut pre = plus(a).expect("generator ends in 0").digits();
    pre[0] = 0;
    EpSequence::new(&pre, &[0])
}

/// `a⁺(0a₂…a_m)(a)^∞`: below this `α(β)`, the lower bound `t*` is exact.
pub fn low_threshold(a: &Word) -> EpSequence {
    let mut pre = plus(a).expect("generator ends in 0").digits();
    let mut tail = a.digits();
    tail[0] = 0;
    pre.extend(tail);
    EpSequence::new(&pre, &a.digits())
}

/// `1 - 1/β`.
pub fn one_minus_inverse(beta: &BetaSpec) -> Real {
    if beta.is_two() {
        return Real::from_ratio(&BigRational::new(BigInt::from(1), BigInt::from(2)), 128);
    }
    Real::one().sub(&beta.value_at(128).recip())
}

/// Whether `α(β) ≺ threshold`, deciding through digits first and the
/// threshold's own base when digits are not enough.
fn alpha_below(beta: &BetaSpec, threshold: &EpSequence) -> Result<bool, CriticalError> {
    if let Some(a) = &beta.alpha {
        return Ok(lex_compare_ep(a, threshold) == Ordering::Less);
    }
    for horizon in [64, 256] {
        let (lo, hi) = alpha_bounds(beta, horizon);
        if lex_compare_ep(&hi, threshold) == Ordering::Less {
            return Ok(true);
        }
        if lex_compare_ep(&lo, threshold) != Ordering::Less {
            return Ok(false);
        }
    }
    if !is_in_q(threshold) {
        return Err(CriticalError::AtlasInconclusive(threshold.to_string()));
    }
    let other = beta_from_alpha(threshold)
        .map_err(|_| CriticalError::AtlasInconclusive(threshold.to_string()))?;
    for bits in [128u32, 256, 512, 1024] {
        match beta.value_at(bits).cmp_certain(&other.value_at(bits)) {
            Some(Ordering::Less) => return Ok(true),
            Some(Ordering::Greater) => return Ok(false),
            _ => {}
        }
    }
    Err(CriticalError::AtlasInconclusive(threshold.to_string()))
}

/// Farey intervals for all non-degenerate Farey words up to `depth`.
pub fn farey_atlas(depth: usize) -> Result<Vec<IntervalRecord>, CriticalError> {
    farey_words_up_to(depth)
        .iter()
        .map(|f| farey_interval(&reflect(f)).map_err(CriticalError::from))
        .collect()
}

/// Locates β among the Farey intervals of generators up to `atlas_depth` and
/// reports what is known about `τ_β` there.
pub fn tau_report(beta: &BetaSpec, atlas_depth: usize) -> Result<TauReport, CriticalError> {
    tau_report_in(beta, &farey_atlas(atlas_depth.max(2))?, atlas_depth)
}

/// As [`tau_report`] against a precomputed atlas, for callers sweeping many bases.
pub fn tau_report_in(
    beta: &BetaSpec,
    atlas: &[IntervalRecord],
    atlas_depth: usize,
) -> Result<TauReport, CriticalError> {
    if atlas_depth < 2 {
        return Err(CriticalError::AtlasDepthTooSmall(atlas_depth));
    }
    let ceiling = one_minus_inverse(beta);
    let report = |regime, lower: Real, upper: Real, generator, witnesses, certified| TauReport {
        beta: beta.clone(),
        regime,
        tau_lower: lower,
        tau_upper: upper,
        generator,
        witnesses,
        atlas_depth,
        certified,
    };
    if beta.is_two() {
        // The doubling map: 1 - 1/2 = 1/2 = π₂(01^∞).
        let w = vec![Witness {
            role: "tau",
            sequence: EpSequence::new(&[0], &[1]),
        }];
        return Ok(report(TauRegime::LeftEndpoint, ceiling.clone(), ceiling, None, w, true));
    }

    let mut positions = Vec::with_capacity(atlas.len());
    for rec in atlas {
        let pos = locate(beta, rec).map_err(lift)?;
        match pos {
            Position::AtLeft => {
                let w = vec![Witness {
                    role: "tau",
                    sequence: EpSequence::new(&rec.generator.reversed().digits(), &[0]),
                }];
                let g = Some(rec.generator.clone());
                return Ok(report(TauRegime::LeftEndpoint, ceiling.clone(), ceiling, g, w, true));
            }
            Position::Inside => return inside_report(beta, rec, atlas_depth, ceiling),
            _ => positions.push(pos),
        }
    }

    // Every generator with γ_L < β contributes t*_a(β) ≤ τ_β.
    let mut lower = Real::zero();
    let mut best: Option<&IntervalRecord> = None;
    let mut left_gap_end = 1.0f64;
    let mut right_gap_end = 2.0f64;
    for (rec, pos) in atlas.iter().zip(&positions) {
        match pos {
            Position::Above => {
                let t = project(&t_star_sequence(&rec.generator), beta);
                if t.lo_f64() > lower.lo_f64() {
                    lower = t;
                    best = Some(rec);
                }
                left_gap_end = left_gap_end.max(rec.beta_right.value.hi_f64());
            }
            Position::Below => right_gap_end = right_gap_end.min(rec.beta_left.value.lo_f64()),
            _ => unreachable!(),
        }
    }
    let lower = lower.clamp_hi(&ceiling);
    if right_gap_end - left_gap_end < ATLAS_GAP_TOLERANCE {
        let w = vec![Witness {
            role: "tau",
            sequence: EpSequence::new(&[0], &[1]),
        }];
        return Ok(report(TauRegime::OutsideClosure, ceiling.clone(), ceiling, None, w, false));
    }
    let w = best
        .map(|rec| Witness {
            role: "lower",
            sequence: t_star_sequence(&rec.generator),
        })
        .into_iter()
        .collect();
    let g = best.map(|rec| rec.generator.clone());
    Ok(report(TauRegime::Unresolved, lower, ceiling, g, w, false))
}

fn inside_report(
    beta: &BetaSpec,
    rec: &IntervalRecord,
    atlas_depth: usize,
    ceiling: Real,
) -> Result<TauReport, CriticalError> {
    let a = &rec.generator;
    let star = t_star_sequence(a);
    let diamond = t_diamond_sequence(a);
    let threshold = low_threshold(a);
    let t_star = project(&star, beta).clamp_hi(&ceiling);
    let low = alpha_below(beta, &threshold)?;
    let (regime, upper, mut witnesses) = if low {
        (TauRegime::InsideFareyLow, t_star.clone(), vec![])
    } else {
        let t_diamond = project(&diamond, beta).clamp_hi(&ceiling);
        let w = vec![Witness {
            role: "upper",
            sequence: diamond,
        }];
        (TauRegime::InsideFareyHigh, t_diamond, w)
    };
    witnesses.insert(
        0,
        Witness {
            role: "lower",
            sequence: star,
        },
    );
    witnesses.push(Witness {
        role: "threshold",
        sequence: threshold,
    });
    Ok(TauReport {
        beta: beta.clone(),
        regime,
        tau_lower: t_star,
        tau_upper: upper,
        generator: Some(a.clone()),
        witnesses,
        atlas_depth,
        certified: true,
    })
}

/// The four quantities of the inequality chain
/// `floor ≤ t* ≤ t⋄ < 1 - 1/β` at a base inside the interval of `a`,
/// where `floor = 1 - 1/β - 1/β^m + 1/(β(β^m - 1))`.
#[derive(Debug, Clone)]
pub struct BracketChain {
    pub floor: Real,
    pub t_star: Real,
    pub t_diamond: Real,
    pub ceiling: Real,
}

impl BracketChain {
    pub fn floor_below_star(&self) -> bool {
        self.floor.certainly_le(&self.t_star)
    }

    pub fn star_below_diamond(&self) -> bool {
        self.t_star.certainly_le(&self.t_diamond)
    }

    pub fn diamond_below_ceiling(&self) -> bool {
        self.t_diamond.certainly_lt(&self.ceiling)
    }

    pub fn holds(&self) -> bool {
        self.floor_below_star() && self.star_below_diamond() && self.diamond_below_ceiling()
    }
}

pub fn bracket_chain(beta: &BetaSpec, a: &Word) -> Result<BracketChain, CriticalError> {
    require_farey_generator(a)?;
    let b = beta.value_at(192);
    let one = Real::one();
    let bm = b.powi(a.len() as u32);
    let ceiling = one.sub(&b.recip());
    let floor = ceiling
        .sub(&bm.recip())
        .add(&b.mul(&bm.sub(&one)).recip());
    Ok(BracketChain {
        floor,
        t_star: project(&t_star_sequence(a), beta),
        t_diamond: project(&t_diamond_sequence(a), beta),
        ceiling,
    })
}

/// The finite set `{x : s0^∞ ≼ σⁿx ≼ (a)^∞ ∀n}` for a Farey generator `a`
/// with Lyndon rotation `s`.
#[derive(Debug, Clone)]
pub struct ZSet {
    pub generator: Word,
    pub members: Vec<EpSequence>,
}

impl ZSet {
    pub fn cardinality(&self) -> usize {
        self.members.len()
    }
}

fn is_rotation_of(cycle: &[u8], a: &Word) -> bool {
    let d = a.digits();
    cycle.len() == d.len() && (0..d.len()).any(|k| d[k..].iter().chain(&d[..k]).eq(cycle.iter()))
}

pub fn z_set(a: &Word) -> Result<ZSet, CriticalError> {
    require_farey_generator(a)?;
    let (s, _) = lyndon_rotation(a).expect("Farey generators are primitive");
    let shift = LexSubshift::closed(
        EpSequence::new(&s.digits(), &[0]),
        EpSequence::periodic(a),
    );
    let fail = || CriticalError::FinitenessCertificateFailed(a.to_string());
    let automaton = SubshiftAutomaton::compile(&shift)?;
    let members = automaton.enumerate_if_finite().ok_or_else(fail)?;
    let cycles_ok = automaton
        .live_cycle_words()
        .iter()
        .all(|c| is_rotation_of(c, a));
    let tails_ok = members.iter().all(|x| is_rotation_of(x.period(), a));
    if !cycles_ok || !tails_ok || members.is_empty() {
        return Err(fail());
    }
    Ok(ZSet {
        generator: a.clone(),
        members,
    })
}

/// `t_N = (0a₂…a_m (a)^N a₁…a_j)^∞`, where `a_{j+1}…a_m a₁…a_j` is the
/// Lyndon rotation of `a`. Checked to satisfy `t_N ≼ σⁿ(t_N) ≺ (a)^∞`.
pub fn t_n_family(a: &Word, n: usize) -> Result<EpSequence, CriticalError> {
    require_farey_generator(a)?;
    let (_, j) = lyndon_rotation(a).expect("Farey generators are primitive");
    let d = a.digits();
    let mut block = d.clone();
    block[0] = 0;
    for _ in 0..n {
        block.extend_from_slice(&d);
    }
    block.extend_from_slice(&d[..j]);
    let t = EpSequence::new(&[], &block);
    let upper = EpSequence::periodic(a);
    let ok = t.shifts().all(|x| {
        lex_compare_ep(&t, &x) != Ordering::Greater && lex_compare_ep(&x, &upper) == Ordering::Less
    });
    if !ok {
        return Err(CriticalError::ShiftCheckFailed(t.to_string()));
    }
    Ok(t)
}

/// The symbolic survivor set at `β = γ_L`, `t = 1 - 1/β`:
/// `{x : a_m…a₁0^∞ ≼ σⁿx ≺ (a)^∞ ∀n}`.
pub fn left_endpoint_survivor(a: &Word) -> Result<LexSubshift, CriticalError> {
    require_farey_generator(a)?;
    Ok(LexSubshift::new(
        EpSequence::new(&a.reversed().digits(), &[0]),
        EpSequence::periodic(a),
    ))
}

/// True iff the survivor set at the left endpoint of `a`, with hole
/// `1 - 1/γ_L`, has no infinite sequences.
pub fn verify_empty_at_left_endpoint(a: &Word) -> Result<bool, CriticalError> {
    let shift = left_endpoint_survivor(a)?;
    Ok(SubshiftAutomaton::compile(&shift)?.is_empty())
}
