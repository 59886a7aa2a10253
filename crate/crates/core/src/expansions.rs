//! Greedy and quasi-greedy β-expansions, eventually periodic sequences,
//! Parry admissibility, and conversion between β and its expansion of 1.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::interval::{parse_decimal, Real, DEFAULT_BITS};
use crate::words::{smallest_period, Word};

/// Digits requested from numeric expansions when the caller does not say.
pub const DEFAULT_DIGIT_HORIZON: usize = 64;

/// Default certified radius of a root found by [`beta_from_alpha`], as a
/// power of two.
pub const DEFAULT_ROOT_BITS: u32 = 60;

/// Extra slack when deciding that two orbit points coincide.
const ORBIT_MATCH_BITS: u32 = 80;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("point {0} lies outside the domain of the map")]
    OutOfRange(String),
    #[error("{0} is not the quasi-greedy expansion of 1 for any base in (1,2]")]
    NotInQ(String),
    #[error("base {0} is not in (1,2]")]
    BaseOutOfRange(String),
    #[error("{0} is not admissible for this base")]
    NotAdmissible(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// An eventually periodic 0/1 sequence `pre · per^∞`, kept canonical: the
/// period is primitive and the preperiod as short as possible, so two
/// sequences are equal iff their representations are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpSequence {
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl EpSequence {
    /// Panics if `per` is empty or a digit is not binary.
    pub fn new(pre: &[u8], per: &[u8]) -> EpSequence {
        assert!(!per.is_empty(), "period must be nonempty");
        assert!(pre.iter().chain(per).all(|&d| d <= 1), "digits must be 0 or 1");
        let p = smallest_period(per);
        let mut per: Vec<u8> = if per.len().is_multiple_of(p) {
            per[..p].to_vec()
        } else {
            per.to_vec()
        };
        let mut pre = pre.to_vec();
        while let Some(&last) = pre.last() {
            if last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        EpSequence { pre, per }
    }

    /// `w^∞`.
    pub fn periodic(w: &Word) -> EpSequence {
        EpSequence::new(&[], &w.digits())
    }

    /// `pre · per^∞`.
    pub fn from_words(pre: &Word, per: &Word) -> EpSequence {
        EpSequence::new(&pre.digits(), &per.digits())
    }

    /// `w 0^∞`.
    pub fn finite(w: &Word) -> EpSequence {
        EpSequence::new(&w.digits(), &[0])
    }

    pub fn zeros() -> EpSequence {
        EpSequence::new(&[], &[0])
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    /// Number of distinct shifts; `σ^n` for `n ≥ window()` repeats earlier ones.
    pub fn window(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    pub fn ends_in_zeros(&self) -> bool {
        self.per == [0]
    }

    /// Digit at 0-based position `i`.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.digit(i)).collect()
    }

    /// `σ^k`.
    pub fn shift(&self, k: usize) -> EpSequence {
        if k <= self.pre.len() {
            EpSequence {
                pre: self.pre[k..].to_vec(),
                per: self.per.clone(),
            }
        } else {
            let mut per = self.per.clone();
            per.rotate_left((k - self.pre.len()) % self.per.len());
            EpSequence { pre: vec![], per }
        }
    }

    /// `digits · self`.
    pub fn prepend(&self, digits: &[u8]) -> EpSequence {
        let mut pre = digits.to_vec();
        pre.extend_from_slice(&self.pre);
        EpSequence::new(&pre, &self.per)
    }

    /// All shifts `σ^0, …, σ^{window-1}`.
    pub fn shifts(&self) -> impl Iterator<Item = EpSequence> + '_ {
        (0..self.window()).map(move |k| self.shift(k))
    }
}

impl fmt::Display for EpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.pre {
            write!(f, "{d}")?;
        }
        f.write_str("(")?;
        for d in &self.per {
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for EpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ep({self})")
    }
}

impl FromStr for EpSequence {
    type Err = ExpansionError;

    /// Reads `PRE(PER)`, e.g. `11(01)`, `(10)`, `(0)`.
    fn from_str(s: &str) -> Result<EpSequence, ExpansionError> {
        let bad = || ExpansionError::Parse(s.to_string());
        let s = s.trim();
        let (pre, rest) = s.split_once('(').ok_or_else(bad)?;
        let per = rest.strip_suffix(')').ok_or_else(bad)?;
        let digits = |t: &str| -> Option<Vec<u8>> {
            t.bytes()
                .map(|c| match c {
                    b'0' => Some(0),
                    b'1' => Some(1),
                    _ => None,
                })
                .collect()
        };
        let pre = digits(pre).ok_or_else(bad)?;
        let per = digits(per).ok_or_else(bad)?;
        if per.is_empty() {
            return Err(bad());
        }
        Ok(EpSequence::new(&pre, &per))
    }
}

/// Parses a sequence, panicking on bad input. Handy for literals in tests.
pub fn ep(s: &str) -> EpSequence {
    s.parse().expect("valid PRE(PER) sequence")
}

/// Exact lexicographic order. Past both preperiods the two sequences are
/// periodic, and periodic sequences agreeing on `p + q` digits agree forever.
pub fn lex_compare_ep(u: &EpSequence, v: &EpSequence) -> Ordering {
    if u == v {
        return Ordering::Equal;
    }
    let window = u.pre.len().max(v.pre.len()) + u.per.len() + v.per.len();
    for i in 0..window {
        match u.digit(i).cmp(&v.digit(i)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// Membership in the set of quasi-greedy expansions of 1: the sequence does
/// not end in `0^∞` and dominates all of its shifts.
pub fn is_in_q(a: &EpSequence) -> bool {
    !a.ends_in_zeros() && a.shifts().skip(1).all(|s| lex_compare_ep(&s, a) != Ordering::Greater)
}

/// Parry's criterion: every shift of `x` is strictly below `alpha`.
pub fn is_admissible(x: &EpSequence, alpha: &EpSequence) -> bool {
    x.shifts().all(|s| lex_compare_ep(&s, alpha) == Ordering::Less)
}

/// `π_β(x)` for an interval-valued base, in closed form.
pub fn project_at(x: &EpSequence, beta: &Real) -> Real {
    let r = beta.recip();
    let partial = |digits: &[u8]| -> (Real, Real) {
        let mut sum = Real::zero().rescaled(r.bits());
        let mut power = Real::one().rescaled(r.bits());
        for &d in digits {
            power = power.mul(&r);
            if d == 1 {
                sum = sum.add(&power);
            }
        }
        (sum, power)
    };
    let (head, head_power) = partial(&x.pre);
    if x.ends_in_zeros() {
        return head;
    }
    let (cycle, cycle_power) = partial(&x.per);
    let tail = cycle.div(&Real::one().sub(&cycle_power));
    head.add(&head_power.mul(&tail))
}

/// A base β ∈ (1,2], known through `α(β)`, a decimal literal, or both.
#[derive(Clone)]
pub struct BetaSpec {
    /// `α(β)` when β was built from it.
    pub alpha: Option<EpSequence>,
    /// Enclosure of β.
    pub value: Real,
    /// Digits to generate for numeric expansions.
    pub digit_horizon: usize,
    /// Half a unit in the last place of the literal β was parsed from.
    pub literal_tolerance: Option<BigRational>,
    exact: Option<BigRational>,
    refined: Arc<Mutex<Vec<Real>>>,
}

impl fmt::Debug for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alpha {
            Some(a) => write!(f, "BetaSpec(@{a} ≈ {:?})", self.value),
            None => write!(f, "BetaSpec({:?})", self.value),
        }
    }
}

impl BetaSpec {
    /// An exactly known rational base.
    pub fn from_ratio(r: BigRational) -> Result<BetaSpec, ExpansionError> {
        let one = BigRational::one();
        let two = BigRational::from_integer(BigInt::from(2));
        if r <= one || r > two {
            return Err(ExpansionError::BaseOutOfRange(r.to_string()));
        }
        Ok(BetaSpec {
            alpha: None,
            value: Real::from_ratio(&r, DEFAULT_BITS),
            digit_horizon: DEFAULT_DIGIT_HORIZON,
            literal_tolerance: None,
            exact: Some(r),
            refined: Arc::default(),
        })
    }

    pub fn from_f64(x: f64) -> Result<BetaSpec, ExpansionError> {
        let r = BigRational::from_float(x).ok_or_else(|| ExpansionError::Parse(x.to_string()))?;
        BetaSpec::from_ratio(r)
    }

    /// A decimal literal such as `1.7`. The value is taken exactly; the
    /// literal's precision is remembered for period detection.
    pub fn from_decimal(s: &str) -> Result<BetaSpec, ExpansionError> {
        let (r, places) = parse_decimal(s).ok_or_else(|| ExpansionError::Parse(s.to_string()))?;
        let mut spec = BetaSpec::from_ratio(r)?;
        spec.literal_tolerance = Some(BigRational::new(
            BigInt::from(5),
            num_traits::pow(BigInt::from(10), places as usize + 1),
        ));
        Ok(spec)
    }

    /// `@PRE(PER)` for a base given by its expansion of 1, otherwise a decimal.
    pub fn parse(s: &str) -> Result<BetaSpec, ExpansionError> {
        match s.trim().strip_prefix('@') {
            Some(rest) => beta_from_alpha(&rest.trim().parse()?),
            None => BetaSpec::from_decimal(s),
        }
    }

    /// β itself when it is a known rational.
    pub fn exact_value(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_symbolic(&self) -> bool {
        self.alpha.is_some()
    }

    /// True iff β is exactly 2.
    pub fn is_two(&self) -> bool {
        let two = Real::from_int(2);
        self.value.cmp_certain(&two) == Some(Ordering::Equal)
    }

    /// Enclosure of β with radius at most `2^-bits`.
    pub fn value_at(&self, bits: u32) -> Real {
        if self.value.is_exact() {
            return self.value.rescaled(self.value.bits().max(bits + 8));
        }
        if let Some(r) = &self.exact {
            return Real::from_ratio(r, bits + 8);
        }
        let Some(alpha) = &self.alpha else {
            return self.value.clone();
        };
        if self.value.log2_width() <= -(bits as f64) {
            return self.value.clone();
        }
        let mut cache = self.refined.lock().unwrap();
        if let Some(hit) = cache.iter().find(|r| r.log2_width() <= -(bits as f64)) {
            return hit.clone();
        }
        let fresh = solve_for_base(alpha, bits);
        cache.push(fresh.clone());
        fresh
    }

    /// Bounds on `log2 β`.
    pub fn log2_bounds(&self) -> (f64, f64) {
        let v = self.value_at(64);
        let lo = v.lo_f64().log2();
        let hi = v.hi_f64().log2();
        (lo.next_down(), hi.next_up())
    }

    pub fn with_horizon(mut self, digit_horizon: usize) -> BetaSpec {
        self.digit_horizon = digit_horizon;
        self
    }
}

/// A point of [0,1), known through its greedy expansion, numerically, or both.
#[derive(Debug, Clone)]
pub struct PointSpec {
    pub expansion: Option<EpSequence>,
    pub value: Real,
}

impl PointSpec {
    /// The point whose greedy expansion is `x`. Fails if `x` is certainly not
    /// admissible at β.
    pub fn symbolic(x: EpSequence, beta: &BetaSpec) -> Result<PointSpec, ExpansionError> {
        let admissible = match &beta.alpha {
            Some(a) => is_admissible(&x, a),
            None => {
                let (_, upper) = alpha_bounds(beta, beta.digit_horizon.max(DEFAULT_DIGIT_HORIZON));
                is_admissible(&x, &upper)
            }
        };
        if !admissible {
            return Err(ExpansionError::NotAdmissible(x.to_string()));
        }
        let value = project(&x, beta);
        Ok(PointSpec {
            expansion: Some(x),
            value,
        })
    }

    pub fn numeric(value: Real) -> PointSpec {
        PointSpec {
            expansion: None,
            value,
        }
    }

    pub fn from_f64(t: f64) -> PointSpec {
        PointSpec::numeric(Real::from_f64(t, DEFAULT_BITS))
    }

    /// A decimal literal, taken exactly.
    pub fn from_decimal(s: &str) -> Result<PointSpec, ExpansionError> {
        let (r, _) = parse_decimal(s).ok_or_else(|| ExpansionError::Parse(s.to_string()))?;
        Ok(PointSpec::numeric(Real::from_ratio(&r, DEFAULT_BITS)))
    }
}

/// Bisection on (1,2] for `π_β(a) = 1`, returning an enclosure of radius at
/// most `2^-bits`. `π_β(a)` is strictly decreasing in β, so the sign of
/// `π_β(a) - 1` at the midpoint says which half holds the root.
fn solve_for_base(a: &EpSequence, bits: u32) -> Real {
    let work = bits + 24;
    let one = Real::one();
    if a == &EpSequence::new(&[], &[1]) {
        return Real::from_int(2).rescaled(work);
    }
    let mut lo = Real::one().rescaled(work);
    let mut hi = Real::from_int(2).rescaled(work);
    let sign_at = |b: &Real, extra: u32| -> Option<Ordering> {
        project_at(a, &b.rescaled(work + extra)).cmp_certain(&one)
    };
    while hi.sub(&lo).log2_width_of_point() > -(bits as f64) {
        let mid = lo.add(&hi).mul(&Real::from_ratio(
            &BigRational::new(BigInt::one(), BigInt::from(2)),
            work,
        ));
        let mid = mid.midpoint();
        let mut extra = 0;
        let side = loop {
            match sign_at(&mid, extra) {
                Some(o) => break Some(o),
                None if extra < 512 => extra += 64,
                None => break None,
            }
        };
        match side {
            Some(Ordering::Greater) => lo = mid,
            Some(Ordering::Less) => hi = mid,
            _ => {
                // The root sits within rounding of `mid`; bracket it tightly.
                let eps = Real::from_ratio(
                    &BigRational::new(BigInt::one(), BigInt::one() << (bits as usize + 2)),
                    work,
                );
                let left = mid.sub(&eps);
                let right = mid.add(&eps);
                if sign_at(&left, 512) == Some(Ordering::Greater)
                    && sign_at(&right, 512) == Some(Ordering::Less)
                {
                    lo = left;
                    hi = right;
                }
                break;
            }
        }
    }
    Real::hull(&lo, &hi)
}

impl Real {
    /// For a point interval (difference of two points), `log2 |value|`.
    fn log2_width_of_point(&self) -> f64 {
        Real::hull(&self.midpoint(), &Real::zero()).log2_width()
    }
}

/// The base β with `α(β) = a`.
pub fn beta_from_alpha(a: &EpSequence) -> Result<BetaSpec, ExpansionError> {
    beta_from_alpha_with_radius(a, DEFAULT_ROOT_BITS)
}

/// As [`beta_from_alpha`] with a certified radius of `2^-bits`.
pub fn beta_from_alpha_with_radius(a: &EpSequence, bits: u32) -> Result<BetaSpec, ExpansionError> {
    if !is_in_q(a) {
        return Err(ExpansionError::NotInQ(a.to_string()));
    }
    let value = solve_for_base(a, bits);
    Ok(BetaSpec {
        alpha: Some(a.clone()),
        value,
        digit_horizon: DEFAULT_DIGIT_HORIZON,
        literal_tolerance: None,
        exact: None,
        refined: Arc::default(),
    })
}

/// `π_β(x)` with the default working precision.
pub fn project(x: &EpSequence, beta: &BetaSpec) -> Real {
    project_with_bits(x, beta, DEFAULT_BITS)
}

pub fn project_with_bits(x: &EpSequence, beta: &BetaSpec, bits: u32) -> Real {
    project_at(x, &beta.value_at(bits))
}

/// Digits of an expansion together with how many leading digits are
/// certified by interval arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitRun {
    pub digits: Vec<u8>,
    pub certified: usize,
}

impl DigitRun {
    pub fn as_string(&self) -> String {
        self.digits.iter().map(|d| char::from(b'0' + d)).collect()
    }
}

fn working_bits(n: usize) -> u32 {
    DEFAULT_BITS.max(n as u32 + 64)
}

fn prepare_point(x: &Real, bits: u32, greedy: bool) -> Result<Real, ExpansionError> {
    let zero = Real::zero();
    let one = Real::one();
    let out_of_range = if greedy {
        x.certainly_lt(&zero) || x.certainly_ge(&one)
    } else {
        x.certainly_le(&zero) || x.certainly_gt(&one)
    };
    if out_of_range {
        return Err(ExpansionError::OutOfRange(format!("{x:?}")));
    }
    Ok(x.rescaled(bits.max(x.bits())).clamp_lo(&zero).clamp_hi(&one))
}

/// First `n` digits of the greedy expansion `b(x, β)`: digit 1 iff the orbit
/// point lies in `[1/β, 1)`. Past the first step whose image straddles the
/// cut the digits follow the midpoint and are no longer certified.
pub fn greedy_digits(x: &Real, beta: &BetaSpec, n: usize) -> Result<DigitRun, ExpansionError> {
    let bits = working_bits(n);
    let b = beta.value_at(bits);
    let mut x = prepare_point(x, bits, true)?;
    let one = Real::one();
    let zero = Real::zero();
    let mut digits = Vec::with_capacity(n);
    let mut certified = None;
    for i in 0..n {
        let y = b.mul(&x);
        let d = if y.certainly_ge(&one) {
            1
        } else if y.certainly_lt(&one) {
            0
        } else {
            // Undecided orbits are most often exactly on the cut, where the
            // greedy branch takes digit 1.
            certified.get_or_insert(i);
            1
        };
        x = if d == 1 { y.sub(&one) } else { y };
        x = x.clamp_lo(&zero);
        if d == 0 {
            x = x.clamp_hi(&one);
        }
        digits.push(d);
    }
    Ok(DigitRun {
        digits,
        certified: certified.unwrap_or(n),
    })
}

/// First `n` digits of the quasi-greedy expansion: digit 0 iff the orbit
/// point lies in `(0, 1/β]`.
pub fn quasi_greedy_digits(x: &Real, beta: &BetaSpec, n: usize) -> Result<DigitRun, ExpansionError> {
    let bits = working_bits(n);
    let x = prepare_point(x, bits, false)?;
    if let Some(a) = &beta.alpha {
        if x.cmp_certain(&Real::one()) == Some(Ordering::Equal) {
            return Ok(DigitRun {
                digits: a.prefix(n),
                certified: n,
            });
        }
    }
    let b = beta.value_at(bits);
    Ok(quasi_greedy_orbit(&b, x, n).0)
}

fn quasi_greedy_orbit(b: &Real, mut x: Real, n: usize) -> (DigitRun, Vec<Real>) {
    let one = Real::one();
    let zero = Real::zero();
    let mut digits = Vec::with_capacity(n);
    let mut orbit = vec![x.clone()];
    let mut certified = None;
    for i in 0..n {
        let y = b.mul(&x);
        let d = if y.certainly_le(&one) {
            0
        } else if y.certainly_gt(&one) {
            1
        } else {
            certified.get_or_insert(i);
            0
        };
        x = if d == 1 { y.sub(&one) } else { y.clamp_hi(&one) };
        x = x.clamp_lo(&zero);
        digits.push(d);
        orbit.push(x.clone());
    }
    let run = DigitRun {
        digits,
        certified: certified.unwrap_or(n),
    };
    (run, orbit)
}

/// Certified bounds `lower ≼ b(x, β) ≼ upper` from `n` steps of the greedy
/// map. Where a step is undecided the lower run takes digit 0 and the upper
/// run digit 1, each keeping only the part of the orbit interval consistent
/// with its choice; the runs end in `0^∞` and `1^∞` respectively.
pub fn greedy_bounds(
    x: &Real,
    beta: &BetaSpec,
    n: usize,
) -> Result<(EpSequence, EpSequence), ExpansionError> {
    let bits = working_bits(n);
    let b = beta.value_at(bits);
    let start = prepare_point(x, bits, true)?;
    let one = Real::one();
    let zero = Real::zero();
    let run = |prefer_one: bool| -> EpSequence {
        let mut x = start.clone();
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            if x.cmp_certain(&zero) == Some(Ordering::Equal) {
                return EpSequence::new(&digits, &[0]);
            }
            let y = b.mul(&x);
            let d = if y.certainly_ge(&one) {
                1
            } else if y.certainly_lt(&one) {
                0
            } else {
                u8::from(prefer_one)
            };
            x = if d == 1 {
                y.sub(&one).clamp_lo(&zero)
            } else {
                y.clamp_hi(&one)
            };
            digits.push(d);
        }
        EpSequence::new(&digits, &[u8::from(prefer_one)])
    };
    Ok((run(false), run(true)))
}

/// Certified bounds `lower ≼ α(β) ≼ upper`. Exact for a base given by `α`.
pub fn alpha_bounds(beta: &BetaSpec, n: usize) -> (EpSequence, EpSequence) {
    if let Some(a) = &beta.alpha {
        return (a.clone(), a.clone());
    }
    if beta.is_two() {
        let a = EpSequence::new(&[], &[1]);
        return (a.clone(), a);
    }
    let bits = working_bits(n);
    let b = beta.value_at(bits);
    let one = Real::one();
    let zero = Real::zero();
    let run = |prefer_one: bool| -> EpSequence {
        let mut x = one.rescaled(b.bits());
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let y = b.mul(&x);
            let d = if y.certainly_le(&one) {
                0
            } else if y.certainly_gt(&one) {
                1
            } else {
                u8::from(prefer_one)
            };
            x = if d == 1 {
                y.sub(&one).clamp_lo(&zero)
            } else {
                y.clamp_hi(&one)
            };
            digits.push(d);
        }
        EpSequence::new(&digits, &[u8::from(prefer_one)])
    };
    (run(false), run(true))
}

/// Result of [`alpha_of_beta`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaOfBeta {
    /// An eventually periodic `α(β)`. `heuristic` is set when the base was
    /// numeric, so the period was recognised rather than proved.
    Periodic { alpha: EpSequence, heuristic: bool },
    /// No period found within the horizon.
    Prefix(DigitRun),
}

/// `α(β)`, the quasi-greedy expansion of 1.
pub fn alpha_of_beta(beta: &BetaSpec) -> AlphaOfBeta {
    if let Some(a) = &beta.alpha {
        return AlphaOfBeta::Periodic {
            alpha: a.clone(),
            heuristic: false,
        };
    }
    alpha_from_orbit(beta)
}

/// Recovers `α(β)` from the numeric orbit of 1 alone, ignoring any stored
/// symbolic `α`.
///
/// The orbit is followed twice: once at the stored value of β (these digits
/// are reported) and once with β widened by the literal's tolerance. A period
/// is proposed when the widened orbit of 1 hits the cut at `1/β` (the orbit
/// returns to 1) or when two of its points overlap. A proposal is accepted
/// only if it lies in the set of quasi-greedy expansions, agrees with the
/// reported digits for `2·|period|` places past the revisit, and its own
/// base falls inside the widened enclosure of β.
pub fn alpha_from_orbit(beta: &BetaSpec) -> AlphaOfBeta {
    let horizon = beta.digit_horizon.max(1);
    let bits = working_bits(2 * horizon);
    let value = beta.value_at(bits);
    let (run, _) = quasi_greedy_orbit(&value, Real::one().rescaled(value.bits()), 2 * horizon);
    let widened = match &beta.literal_tolerance {
        Some(tol) => value.widen(&Real::from_ratio(tol, bits)),
        None => value.clone(),
    };
    let slack = Real::from_ratio(
        &BigRational::new(BigInt::one(), BigInt::one() << ORBIT_MATCH_BITS as usize),
        bits,
    );
    let one = Real::one();
    let zero = Real::zero();
    let accept = |pre: &[u8], per: &[u8]| -> Option<EpSequence> {
        let cand = EpSequence::new(pre, per);
        if !is_in_q(&cand) {
            return None;
        }
        let check = (pre.len() + 3 * per.len()).min(run.digits.len());
        if cand.prefix(check) != run.digits[..check] {
            return None;
        }
        let root = solve_for_base(&cand, bits.min(400));
        root.overlaps(&widened).then_some(cand)
    };
    let heuristic = beta.alpha.is_none();
    let mut orbit = vec![one.rescaled(bits)];
    let mut x = orbit[0].clone();
    let mut digits: Vec<u8> = Vec::new();
    for k in 1..=horizon {
        let y = widened.mul(&x);
        let d = if y.certainly_le(&one) {
            0
        } else if y.certainly_gt(&one) {
            1
        } else {
            let mut per = digits.clone();
            per.push(0);
            if let Some(alpha) = accept(&[], &per) {
                return AlphaOfBeta::Periodic { alpha, heuristic };
            }
            break;
        };
        x = if d == 1 { y.sub(&one) } else { y };
        x = x.clamp_lo(&zero).clamp_hi(&one);
        digits.push(d);
        let probe = x.widen(&slack);
        for j in 0..k {
            if orbit[j].overlaps(&probe) {
                if let Some(alpha) = accept(&digits[..j], &digits[j..]) {
                    return AlphaOfBeta::Periodic { alpha, heuristic };
                }
            }
        }
        orbit.push(x.clone());
    }
    let mut run = run;
    run.digits.truncate(horizon);
    run.certified = run.certified.min(horizon);
    AlphaOfBeta::Prefix(run)
}

/// Greedy expansion of `1 - 1/β` when it can be written down exactly.
///
/// For β < 2 the first digit is 0 and the rest is the greedy expansion of
/// `β - 1`, which is `b(1, β)` with its first digit dropped; `b(1, β)` is
/// `a⁺0^∞` when `α(β) = a^∞` and `α(β)` otherwise.
pub fn one_minus_inverse_expansion(beta: &BetaSpec) -> Option<EpSequence> {
    if beta.is_two() {
        return Some(EpSequence::new(&[1], &[0]));
    }
    let a = beta.alpha.as_ref()?;
    let greedy_one = if a.preperiod().is_empty() {
        let mut d = a.period().to_vec();
        let last = d.len() - 1;
        if d[last] != 0 {
            return None;
        }
        d[last] = 1;
        EpSequence::new(&d, &[0])
    } else {
        a.clone()
    };
    Some(greedy_one.shift(1).prepend(&[0]))
}
