//! Survivor sets as lexicographically bounded subshifts: compilation to a
//! finite automaton, word counts, entropy brackets, and Hausdorff dimension
//! through the Bowen formula `dim = h / log2 β`.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::expansions::{
    alpha_bounds, greedy_bounds, lex_compare_ep, BetaSpec, EpSequence, PointSpec,
};
use crate::interval::Real;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Largest word length accepted by the brute-force counters.
pub const MAX_BRUTE_FORCE_LEN: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurvivorError {
    #[error("automaton exceeds {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("word length {n} is too large for brute force (max {max})")]
    TooLarge { n: usize, max: usize },
}

/// `{x : lower ≼ σⁿx ≺ upper for all n}`, with either inequality optionally
/// flipped between strict and non-strict.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexSubshift {
    pub lower: EpSequence,
    pub upper: EpSequence,
    pub strict_lower: bool,
    pub strict_upper: bool,
}

impl LexSubshift {
    /// The survivor-set convention: non-strict below, strict above.
    pub fn new(lower: EpSequence, upper: EpSequence) -> LexSubshift {
        LexSubshift {
            lower,
            upper,
            strict_lower: false,
            strict_upper: true,
        }
    }

    /// Both bounds non-strict.
    pub fn closed(lower: EpSequence, upper: EpSequence) -> LexSubshift {
        LexSubshift {
            lower,
            upper,
            strict_lower: false,
            strict_upper: false,
        }
    }

    fn admits(&self, y: &EpSequence) -> bool {
        let lo = lex_compare_ep(&self.lower, y);
        let hi = lex_compare_ep(y, &self.upper);
        let lo_ok = if self.strict_lower {
            lo == Ordering::Less
        } else {
            lo != Ordering::Greater
        };
        let hi_ok = if self.strict_upper {
            hi == Ordering::Less
        } else {
            hi != Ordering::Greater
        };
        lo_ok && hi_ok
    }
}

/// True iff every shift of `x` respects both bounds.
pub fn membership(x: &EpSequence, shift: &LexSubshift) -> bool {
    x.shifts().all(|y| shift.admits(&y))
}

/// Replaces a strict upper bound `α` by the non-strict `(α_1…α_m⁻)^∞` for the
/// smallest `m` with `α_m = 1` and `σ^m α ≼ lower`. Both describe the same set.
pub fn reduce_upper(shift: &LexSubshift) -> LexSubshift {
    if !shift.strict_upper {
        return shift.clone();
    }
    let alpha = &shift.upper;
    for m in 1..=alpha.window() {
        if alpha.digit(m - 1) == 1
            && lex_compare_ep(&alpha.shift(m), &shift.lower) != Ordering::Greater
        {
            let mut block = alpha.prefix(m);
            block[m - 1] = 0;
            return LexSubshift {
                lower: shift.lower.clone(),
                upper: EpSequence::new(&[], &block),
                strict_lower: shift.strict_lower,
                strict_upper: false,
            };
        }
    }
    shift.clone()
}

/// Positions into a bound that the current suffix still ties with; positions
/// past the preperiod wrap around the period.
type Pointers = Vec<u32>;

fn advance(ptrs: &[u32], bound: &EpSequence, digit: u8, is_lower: bool) -> Option<Pointers> {
    let wrap = |p: usize| -> u32 {
        let pre = bound.preperiod().len();
        let per = bound.period().len();
        (if p >= pre + per { pre + (p - pre) % per } else { p }) as u32
    };
    let mut out = Vec::with_capacity(ptrs.len() + 1);
    for p in std::iter::once(0).chain(ptrs.iter().copied()) {
        let b = bound.digit(p as usize);
        match digit.cmp(&b) {
            Ordering::Equal => out.push(wrap(p as usize + 1)),
            Ordering::Less if is_lower => return None,
            Ordering::Greater if !is_lower => return None,
            _ => {}
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// Deterministic automaton reading one-sided sequences of a [`LexSubshift`].
/// A state records which suffixes of the input are still tied with a prefix
/// of each bound; a transition is missing when it would violate a bound.
#[derive(Debug, Clone)]
pub struct SubshiftAutomaton {
    shift: LexSubshift,
    states: Vec<(Pointers, Pointers)>,
    next: Vec<[Option<usize>; 2]>,
    scc_of: Vec<usize>,
    sccs: Vec<Vec<usize>>,
    scc_good: Vec<bool>,
    live: Vec<bool>,
}

impl SubshiftAutomaton {
    pub fn compile(shift: &LexSubshift) -> Result<SubshiftAutomaton, SurvivorError> {
        SubshiftAutomaton::compile_with_cap(shift, DEFAULT_STATE_CAP)
    }

    pub fn compile_with_cap(
        shift: &LexSubshift,
        cap: usize,
    ) -> Result<SubshiftAutomaton, SurvivorError> {
        let mut index: HashMap<(Pointers, Pointers), usize> = HashMap::new();
        let mut states = vec![(vec![], vec![])];
        let mut next = vec![[None, None]];
        index.insert(states[0].clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for d in 0..2u8 {
                let (lp, up) = &states[s];
                let Some(nl) = advance(lp, &shift.lower, d, true) else {
                    continue;
                };
                let Some(nu) = advance(up, &shift.upper, d, false) else {
                    continue;
                };
                let key = (nl, nu);
                let t = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        if states.len() >= cap {
                            return Err(SurvivorError::StateCapExceeded { cap });
                        }
                        let t = states.len();
                        index.insert(key.clone(), t);
                        states.push(key);
                        next.push([None, None]);
                        queue.push_back(t);
                        t
                    }
                };
                next[s][d as usize] = Some(t);
            }
        }
        let mut automaton = SubshiftAutomaton {
            shift: shift.clone(),
            states,
            next,
            scc_of: vec![],
            sccs: vec![],
            scc_good: vec![],
            live: vec![],
        };
        automaton.analyse();
        Ok(automaton)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition(&self, state: usize, digit: u8) -> Option<usize> {
        self.next[state][digit as usize]
    }

    /// True iff no one-sided sequence satisfies the bounds.
    pub fn is_empty(&self) -> bool {
        !self.live[0]
    }

    /// Number of words of length `n` occurring in the subshift.
    pub fn count_words(&self, n: usize) -> BigUint {
        if self.is_empty() {
            return BigUint::zero();
        }
        let mut ways = vec![BigUint::zero(); self.states.len()];
        ways[0] = BigUint::one();
        for _ in 0..n {
            let mut fresh = vec![BigUint::zero(); self.states.len()];
            for (s, w) in ways.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                for t in self.next[s].iter().flatten() {
                    if self.live[*t] {
                        fresh[*t] += w;
                    }
                }
            }
            ways = fresh;
        }
        ways.iter().sum()
    }

    fn in_scc_successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.scc_of[s];
        self.next[s]
            .iter()
            .flatten()
            .copied()
            .filter(move |&t| self.scc_of[t] == c)
    }

    fn is_nontrivial(&self, c: usize) -> bool {
        let comp = &self.sccs[c];
        comp.len() > 1 || self.in_scc_successors(comp[0]).next().is_some()
    }

    fn is_simple_cycle(&self, c: usize) -> bool {
        self.sccs[c]
            .iter()
            .all(|&s| self.in_scc_successors(s).count() == 1)
    }

    /// Digits read going once around a simple cycle starting at `s`.
    fn cycle_word(&self, s: usize) -> Vec<u8> {
        let mut word = vec![];
        let mut cur = s;
        loop {
            let c = self.scc_of[cur];
            let d = (0..2u8)
                .find(|&d| matches!(self.next[cur][d as usize], Some(t) if self.scc_of[t] == c))
                .expect("state on a cycle");
            word.push(d);
            cur = self.next[cur][d as usize].unwrap();
            if cur == s {
                return word;
            }
        }
    }

    /// Whether the single infinite path around a simple cycle is legal: a
    /// suffix tied forever with a strict bound is a violation.
    fn cycle_is_legal(&self, s: usize) -> bool {
        let path = EpSequence::new(&[], &self.cycle_word(s));
        let (lp, up) = &self.states[s];
        let lower_ok = lp.iter().all(|&p| {
            let o = lex_compare_ep(&self.shift.lower.shift(p as usize), &path);
            if self.shift.strict_lower {
                o == Ordering::Less
            } else {
                o != Ordering::Greater
            }
        });
        let upper_ok = up.iter().all(|&p| {
            let o = lex_compare_ep(&path, &self.shift.upper.shift(p as usize));
            if self.shift.strict_upper {
                o == Ordering::Less
            } else {
                o != Ordering::Greater
            }
        });
        lower_ok && upper_ok && membership(&path, &self.shift)
    }

    fn analyse(&mut self) {
        let n = self.states.len();
        let (scc_of, sccs) = tarjan(n, |s| self.next[s].iter().flatten().copied().collect());
        self.scc_of = scc_of;
        self.sccs = sccs;
        self.scc_good = (0..self.sccs.len())
            .map(|c| {
                self.is_nontrivial(c)
                    && (!self.is_simple_cycle(c) || self.cycle_is_legal(self.sccs[c][0]))
            })
            .collect();
        let mut preds = vec![vec![]; n];
        for s in 0..n {
            for t in self.next[s].iter().flatten() {
                preds[*t].push(s);
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&s| self.scc_good[self.scc_of[s]]).collect();
        for &s in &stack {
            live[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        self.live = live;
    }

    /// Bracket on `log2` of the spectral radius of the live part.
    pub fn entropy(&self) -> (f64, f64) {
        let mut best = (0.0f64, 0.0f64);
        for (c, comp) in self.sccs.iter().enumerate() {
            if !self.live[comp[0]] || !self.is_nontrivial(c) || self.is_simple_cycle(c) {
                continue;
            }
            let (lo, hi) = self.scc_spectral_radius(c);
            let h = (log2_floor(lo), log2_ceil(hi));
            best = (best.0.max(h.0), best.1.max(h.1));
        }
        (best.0.clamp(0.0, 1.0), best.1.clamp(0.0, 1.0))
    }

    /// Collatz–Wielandt bracket on the spectral radius of one SCC, via power
    /// iteration on `A + I` so that periodic components still converge.
    fn scc_spectral_radius(&self, c: usize) -> (f64, f64) {
        let comp = &self.sccs[c];
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let edges: Vec<Vec<usize>> = comp
            .iter()
            .map(|&s| {
                self.next[s]
                    .iter()
                    .flatten()
                    .filter_map(|t| local.get(t).copied())
                    .collect()
            })
            .collect();
        let k = comp.len();
        let max_iters = (400_000_000 / (k + 1)).clamp(2_000, 200_000);
        let mut v = vec![1.0f64; k];
        let mut bracket = (1.0, 3.0);
        for iter in 0.. {
            let w: Vec<f64> = (0..k)
                .map(|i| v[i] + edges[i].iter().map(|&j| v[j]).sum::<f64>())
                .collect();
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for i in 0..k {
                let r = w[i] / v[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
            bracket = (lo - 1.0, hi - 1.0);
            let top = w.iter().cloned().fold(0.0, f64::max);
            v = w.into_iter().map(|x| (x / top).max(f64::MIN_POSITIVE)).collect();
            if iter >= 200 && (log2_ceil(bracket.1) - log2_floor(bracket.0) <= 1e-9 || iter >= max_iters) {
                break;
            }
        }
        // Each ratio carries a few roundings; pad generously relative to them.
        let pad = 1e-12 * (1.0 + bracket.1);
        ((bracket.0 - pad).max(1.0), bracket.1 + pad)
    }

    /// All one-sided sequences in the subshift when there are finitely many,
    /// `None` otherwise. The set is finite iff every live recurrent class is
    /// a single cycle that no live path leaves.
    pub fn enumerate_if_finite(&self) -> Option<Vec<EpSequence>> {
        if self.is_empty() {
            return Some(vec![]);
        }
        for (c, comp) in self.sccs.iter().enumerate() {
            if !self.live[comp[0]] || !self.is_nontrivial(c) {
                continue;
            }
            if !self.is_simple_cycle(c) {
                return None;
            }
            let exits = comp.iter().any(|&s| {
                self.next[s]
                    .iter()
                    .flatten()
                    .any(|&t| self.live[t] && self.scc_of[t] != c)
            });
            if exits {
                return None;
            }
        }
        let mut out = vec![];
        let mut stack = vec![(0usize, vec![])];
        while let Some((s, prefix)) = stack.pop() {
            if self.is_nontrivial(self.scc_of[s]) {
                out.push(EpSequence::new(&prefix, &self.cycle_word(s)));
                continue;
            }
            for d in 0..2u8 {
                if let Some(t) = self.next[s][d as usize] {
                    if self.live[t] {
                        let mut p = prefix.clone();
                        p.push(d);
                        stack.push((t, p));
                    }
                }
            }
        }
        out.sort_by(lex_compare_ep);
        Some(out)
    }

    /// Periods of the live recurrent cycles, for callers that certify finiteness.
    pub fn live_cycle_words(&self) -> Vec<Vec<u8>> {
        (0..self.sccs.len())
            .filter(|&c| self.live[self.sccs[c][0]] && self.is_nontrivial(c) && self.is_simple_cycle(c))
            .map(|c| self.cycle_word(self.sccs[c][0]))
            .collect()
    }
}

fn log2_floor(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.log2().next_down()
    }
}

fn log2_ceil(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.log2().next_up()
    }
}

/// Iterative Tarjan; returns the component of each node and the components.
fn tarjan(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = vec![];
    let mut comp = vec![UNSEEN; n];
    let mut comps: Vec<Vec<usize>> = vec![];
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut work: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, children, i)) = work.last_mut() {
            let v = *v;
            if *i < children.len() {
                let w = children[*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some((parent, _, _)) = work.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = comps.len();
                    let mut members = vec![];
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = id;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(members);
                }
            }
        }
    }
    (comp, comps)
}

/// Incremental record of how each suffix of a finite word compares with the
/// bounds. Used by the brute-force counters; independent of the automaton.
#[derive(Clone)]
struct WindowCheck<'a> {
    shift: &'a LexSubshift,
    len: usize,
    digits: Vec<u8>,
    /// Starts still equal to a prefix of `lower` / `upper`.
    tied_lower: Vec<usize>,
    tied_upper: Vec<usize>,
}

impl<'a> WindowCheck<'a> {
    fn new(shift: &'a LexSubshift) -> WindowCheck<'a> {
        WindowCheck {
            shift,
            len: 0,
            digits: vec![],
            tied_lower: vec![],
            tied_upper: vec![],
        }
    }

    /// Appends a digit; `false` if some suffix now violates a bound.
    fn push(&mut self, d: u8) -> bool {
        let pos = self.len;
        self.tied_lower.push(pos);
        self.tied_upper.push(pos);
        let lower = &self.shift.lower;
        let upper = &self.shift.upper;
        let mut ok = true;
        self.tied_lower.retain(|&k| match d.cmp(&lower.digit(pos - k)) {
            Ordering::Equal => true,
            Ordering::Greater => false,
            Ordering::Less => {
                ok = false;
                false
            }
        });
        self.tied_upper.retain(|&k| match d.cmp(&upper.digit(pos - k)) {
            Ordering::Equal => true,
            Ordering::Less => false,
            Ordering::Greater => {
                ok = false;
                false
            }
        });
        self.len += 1;
        self.digits.push(d);
        ok
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>) {
        let rel = |v: &[usize]| v.iter().map(|&k| self.len - k).collect();
        (rel(&self.tied_lower), rel(&self.tied_upper))
    }
}

/// Words of length `n` that pass every internal bound check, with no
/// extendability requirement. Their number bounds `#ℬ_n` from above.
pub fn count_prefix_valid(shift: &LexSubshift, n: usize) -> Result<u64, SurvivorError> {
    if n > MAX_BRUTE_FORCE_LEN {
        return Err(SurvivorError::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_LEN,
        });
    }
    fn go(c: &WindowCheck<'_>, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for d in 0..2 {
            let mut c2 = c.clone();
            if c2.push(d) {
                total += go(&c2, left - 1);
            }
        }
        total
    }
    Ok(go(&WindowCheck::new(shift), n))
}

/// Search depth used by [`count_words_brute`] for both the bridge `u` and
/// the period `v` of a witness `w u v^∞`.
pub fn default_witness_len(shift: &LexSubshift) -> usize {
    (shift.lower.window() + shift.upper.window() + 2).min(11)
}

/// Brute-force `#ℬ_n`: a word `w` counts iff some eventually periodic
/// sequence `w u v^∞` with `|u|, |v| ≤ witness_len` lies in the subshift,
/// checked by exact comparison of every shift.
pub fn count_words_brute(shift: &LexSubshift, n: usize) -> Result<u64, SurvivorError> {
    count_words_brute_with(shift, n, default_witness_len(shift))
}

pub fn count_words_brute_with(
    shift: &LexSubshift,
    n: usize,
    witness_len: usize,
) -> Result<u64, SurvivorError> {
    if n > MAX_BRUTE_FORCE_LEN {
        return Err(SurvivorError::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_LEN,
        });
    }
    let periods: Vec<Vec<u8>> = (1..=witness_len)
        .flat_map(|len| {
            (0u32..(1 << len)).map(move |m| (0..len).rev().map(|i| ((m >> i) & 1) as u8).collect())
        })
        .filter(|v: &Vec<u8>| membership(&EpSequence::new(&[], v), shift))
        .collect();
    // Only suffixes still tied with a bound can be affected by the tail, so
    // the answer depends on the tie pattern and remaining budget alone.
    type Memo = HashMap<(usize, (Vec<usize>, Vec<usize>)), bool>;
    fn closes(c: &WindowCheck<'_>, v: &[u8]) -> bool {
        c.tied_lower
            .iter()
            .chain(&c.tied_upper)
            .all(|&k| c.shift.admits(&EpSequence::new(&c.digits[k..], v)))
    }
    fn extends(c: &WindowCheck<'_>, budget: usize, periods: &[Vec<u8>], memo: &mut Memo) -> bool {
        let key = (budget, c.key());
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let mut ok = periods.iter().any(|v| closes(c, v));
        if !ok && budget > 0 {
            ok = (0..2).any(|d| {
                let mut c2 = c.clone();
                c2.push(d) && extends(&c2, budget - 1, periods, memo)
            });
        }
        memo.insert(key, ok);
        ok
    }
    fn words(
        c: &WindowCheck<'_>,
        left: usize,
        budget: usize,
        periods: &[Vec<u8>],
        memo: &mut Memo,
    ) -> u64 {
        if left == 0 {
            return u64::from(extends(c, budget, periods, memo));
        }
        (0..2)
            .map(|d| {
                let mut c2 = c.clone();
                if c2.push(d) {
                    words(&c2, left - 1, budget, periods, memo)
                } else {
                    0
                }
            })
            .sum()
    }
    let mut memo = Memo::new();
    Ok(words(&WindowCheck::new(shift), n, witness_len, &periods, &mut memo))
}

/// `#ℬ_n` through the automaton, or by brute force when the automaton is too big.
pub fn count_words(shift: &LexSubshift, n: usize) -> Result<BigUint, SurvivorError> {
    match SubshiftAutomaton::compile(shift) {
        Ok(a) => Ok(a.count_words(n)),
        Err(SurvivorError::StateCapExceeded { .. }) => count_words_brute(shift, n).map(BigUint::from),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyMethod {
    /// Spectral radius of an automaton for the exact subshift.
    AutomatonExact,
    /// Spectral radii of automata for an inner and an outer subshift, used
    /// when a bound is known only to finitely many digits.
    AutomatonBracket,
    /// Word counts and block families.
    Counting,
}

impl fmt::Display for EntropyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyMethod::AutomatonExact => "automaton_exact",
            EntropyMethod::AutomatonBracket => "automaton_bracket",
            EntropyMethod::Counting => "counting",
        })
    }
}

/// Bracket on topological entropy in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBracket {
    pub lower: f64,
    pub upper: f64,
    pub method: EntropyMethod,
    /// Set when the subshift is certainly empty.
    pub empty: bool,
}

/// Entropy of the subshift; counting is the fallback when the automaton
/// exceeds `state_cap`.
pub fn entropy(shift: &LexSubshift) -> EntropyBracket {
    entropy_with(shift, DEFAULT_STATE_CAP, 20)
}

pub fn entropy_with(shift: &LexSubshift, state_cap: usize, counting_depth: usize) -> EntropyBracket {
    match SubshiftAutomaton::compile_with_cap(shift, state_cap) {
        Ok(a) => automaton_entropy(&a, EntropyMethod::AutomatonExact),
        Err(_) => entropy_by_counting(shift, counting_depth),
    }
}

fn automaton_entropy(a: &SubshiftAutomaton, method: EntropyMethod) -> EntropyBracket {
    if a.is_empty() {
        return EntropyBracket {
            lower: 0.0,
            upper: 0.0,
            method,
            empty: true,
        };
    }
    let (lower, upper) = a.entropy();
    EntropyBracket {
        lower,
        upper,
        method,
        empty: false,
    }
}

/// Upper bound `min_{n ≤ depth} log2 #(prefix-valid words of length n) / n`.
pub fn counting_upper_bound(shift: &LexSubshift, depth: usize) -> f64 {
    let mut best = 1.0f64;
    for n in 1..=depth.min(MAX_BRUTE_FORCE_LEN) {
        let c = count_prefix_valid(shift, n).unwrap_or(u64::MAX);
        if c == 0 {
            return 0.0;
        }
        best = best.min(((c as f64).log2() / n as f64).next_up());
    }
    best.clamp(0.0, 1.0)
}

/// Lower bound from a family `W` of equal-length blocks whose free
/// concatenations all lie in the subshift: `h ≥ log2 |W| / p`.
///
/// Any concatenation of blocks of length `p` lies between `w_min^∞` and
/// `w_max^∞`, so it suffices that `w[j..] w_min^∞` clears the lower bound and
/// `w[j..] w_max^∞` the upper bound for every block `w` and offset `j`.
pub fn block_family_lower_bound(shift: &LexSubshift, max_block: usize) -> (f64, Vec<Vec<u8>>) {
    let mut best = (0.0f64, vec![]);
    for p in 1..=max_block {
        let mut family: Vec<Vec<u8>> = (0u32..(1 << p))
            .map(|m| (0..p).rev().map(|i| ((m >> i) & 1) as u8).collect::<Vec<u8>>())
            .filter(|w| membership(&EpSequence::new(&[], w), shift))
            .collect();
        loop {
            if family.len() < 2 {
                break;
            }
            let lo = family.iter().min().unwrap().clone();
            let hi = family.iter().max().unwrap().clone();
            let lo_tail = EpSequence::new(&[], &lo);
            let hi_tail = EpSequence::new(&[], &hi);
            let before = family.len();
            family.retain(|w| {
                (0..p).all(|j| {
                    shift.admits(&lo_tail.prepend(&w[j..])) && shift.admits(&hi_tail.prepend(&w[j..]))
                })
            });
            if family.len() == before {
                break;
            }
        }
        if family.len() >= 2 {
            let h = ((family.len() as f64).log2() / p as f64).next_down();
            if h > best.0 {
                best = (h, family);
            }
        }
    }
    best
}

pub fn entropy_by_counting(shift: &LexSubshift, depth: usize) -> EntropyBracket {
    let upper = counting_upper_bound(shift, depth);
    let (lower, _) = block_family_lower_bound(shift, depth.min(12));
    EntropyBracket {
        lower: lower.min(upper),
        upper,
        method: EntropyMethod::Counting,
        empty: upper == 0.0 && count_prefix_valid(shift, depth.min(MAX_BRUTE_FORCE_LEN)) == Ok(0),
    }
}

/// Tuning for [`dimension_with`].
#[derive(Debug, Clone, Copy)]
pub struct DimensionOptions {
    /// Digits of numeric expansions used to build bound sequences.
    pub horizon: usize,
    pub state_cap: usize,
    /// Word length for the counting fallback.
    pub counting_depth: usize,
}

impl Default for DimensionOptions {
    fn default() -> DimensionOptions {
        DimensionOptions {
            horizon: 64,
            state_cap: DEFAULT_STATE_CAP,
            counting_depth: 20,
        }
    }
}

/// Entropy and Hausdorff dimension of the survivor set `K_β(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionBracket {
    pub entropy: EntropyBracket,
    pub dim_lower: f64,
    pub dim_upper: f64,
}

impl DimensionBracket {
    pub fn method(&self) -> EntropyMethod {
        self.entropy.method
    }
}

/// The inner and outer subshifts bracketing `{b(t,β) ≼ σⁿx ≺ α(β)}`; they
/// coincide when both sequences are known exactly.
pub fn survivor_bounds(beta: &BetaSpec, t: &PointSpec, horizon: usize) -> (LexSubshift, LexSubshift) {
    let (l_min, l_max) = match &t.expansion {
        Some(x) => (x.clone(), x.clone()),
        None => greedy_bounds(&t.value, beta, horizon).expect("t in [0,1)"),
    };
    let (a_min, a_max) = alpha_bounds(beta, horizon);
    (LexSubshift::new(l_max, a_min), LexSubshift::new(l_min, a_max))
}

pub fn dimension(beta: &BetaSpec, t: &PointSpec) -> DimensionBracket {
    dimension_with(beta, t, DimensionOptions::default())
}

pub fn dimension_with(beta: &BetaSpec, t: &PointSpec, opts: DimensionOptions) -> DimensionBracket {
    let (inner, outer) = survivor_bounds(beta, t, opts.horizon);
    let entropy = if inner == outer {
        entropy_with(&inner, opts.state_cap, opts.counting_depth)
    } else {
        let lo = entropy_with(&inner, opts.state_cap, opts.counting_depth);
        let hi = entropy_with(&outer, opts.state_cap, opts.counting_depth);
        let counting = lo.method == EntropyMethod::Counting || hi.method == EntropyMethod::Counting;
        EntropyBracket {
            lower: lo.lower,
            upper: hi.upper,
            method: if counting {
                EntropyMethod::Counting
            } else {
                EntropyMethod::AutomatonBracket
            },
            empty: hi.empty,
        }
    };
    let (log_lo, log_hi) = beta.log2_bounds();
    let dim_lower = (entropy.lower / log_hi).next_down().clamp(0.0, 1.0);
    let dim_upper = (entropy.upper / log_lo).next_up().clamp(0.0, 1.0);
    let dim_lower = if entropy.lower == 0.0 { 0.0 } else { dim_lower };
    let dim_upper = if entropy.upper == 0.0 { 0.0 } else { dim_upper };
    DimensionBracket {
        entropy,
        dim_lower,
        dim_upper: dim_upper.max(dim_lower),
    }
}

/// One sample of the dimension function `t ↦ dim_H K_β(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseRow {
    pub t: f64,
    pub h_lower: f64,
    pub h_upper: f64,
    pub dim_lower: f64,
    pub dim_upper: f64,
    pub method: EntropyMethod,
}

/// `samples` equally spaced points from `t_min` to `t_max`. An endpoint at 0
/// becomes the exact point `0^∞`, and an endpoint at `1 - 1/β` (given by
/// `t_max_exact`) its exact expansion.
pub fn uniform_grid(
    beta: &BetaSpec,
    t_min: f64,
    t_max: f64,
    samples: usize,
    t_max_exact: Option<EpSequence>,
) -> Vec<PointSpec> {
    assert!(samples >= 2);
    (0..samples)
        .map(|i| {
            if i == 0 && t_min == 0.0 {
                return PointSpec {
                    expansion: Some(EpSequence::zeros()),
                    value: Real::zero(),
                };
            }
            if i + 1 == samples {
                if let Some(x) = &t_max_exact {
                    return PointSpec::symbolic(x.clone(), beta).expect("admissible endpoint");
                }
            }
            let t = t_min + (t_max - t_min) * i as f64 / (samples - 1) as f64;
            PointSpec::from_f64(t)
        })
        .collect()
}

/// Dimension brackets over a grid of points, computed in parallel and
/// returned in input order.
pub fn staircase(beta: &BetaSpec, points: &[PointSpec], opts: DimensionOptions) -> Vec<StaircaseRow> {
    points
        .par_iter()
        .map(|t| {
            let d = dimension_with(beta, t, opts);
            StaircaseRow {
                t: t.value.mid_f64(),
                h_lower: d.entropy.lower,
                h_upper: d.entropy.upper,
                dim_lower: d.dim_lower,
                dim_upper: d.dim_upper,
                method: d.entropy.method,
            }
        })
        .collect()
}

/// Exact `#ℬ_n` as `u64`, for tests and small reports.
pub fn count_words_u64(shift: &LexSubshift, n: usize) -> Option<u64> {
    count_words(shift, n).ok()?.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::{beta_from_alpha, ep};

    fn golden_mean() -> LexSubshift {
        LexSubshift::new(ep("(0)"), ep("(10)"))
    }

    #[test]
    fn full_shift() {
        let s = LexSubshift::new(ep("(0)"), ep("(1)"));
        let a = SubshiftAutomaton::compile(&s).unwrap();
        assert_eq!(a.count_words(5), BigUint::from(32u32));
        let h = entropy(&s);
        assert!(h.lower > 1.0 - 1e-9 && h.upper == 1.0);
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let a = SubshiftAutomaton::compile(&golden_mean()).unwrap();
        let fib = [2u32, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377];
        for (n, f) in (1..=12).zip(fib) {
            assert_eq!(a.count_words(n), BigUint::from(f), "n = {n}");
            assert_eq!(count_words_brute(&golden_mean(), n).unwrap(), f as u64);
        }
        let h = entropy(&golden_mean());
        let want = ((1.0 + 5f64.sqrt()) / 2.0).log2();
        assert!(h.lower <= want && want <= h.upper && h.upper - h.lower < 1e-8);
        assert!(h.lower > 0.6942 && h.upper < 0.6943);
    }

    #[test]
    fn tight_pair_is_a_single_cycle() {
        let s = LexSubshift::closed(ep("(01)"), ep("(10)"));
        let a = SubshiftAutomaton::compile(&s).unwrap();
        assert_eq!(a.enumerate_if_finite().unwrap(), vec![ep("(01)"), ep("(10)")]);
        assert_eq!(entropy(&s).upper, 0.0);
        // With the usual strict upper bound nothing survives.
        assert!(SubshiftAutomaton::compile(&LexSubshift::new(ep("(01)"), ep("(10)")))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn empty_when_bounds_cross() {
        let s = LexSubshift::new(ep("(10)"), ep("(01)"));
        assert_eq!(count_words(&s, 5).unwrap(), BigUint::zero());
        assert!(entropy(&s).empty);
        let half = LexSubshift::new(ep("1(0)"), ep("(1)"));
        assert!(entropy(&half).empty);
    }

    #[test]
    fn membership_examples() {
        assert!(!membership(&ep("(011)"), &golden_mean()));
        assert!(!membership(&ep("(0)"), &LexSubshift::new(ep("(001)"), ep("(1)"))));
        let lower = ep("(01)");
        assert!(membership(&lower, &LexSubshift::new(lower.clone(), ep("(110)"))));
    }

    #[test]
    fn reduction_examples() {
        let untouched = LexSubshift::new(ep("(0)"), ep("(110)"));
        assert_eq!(reduce_upper(&untouched), untouched);
        let two = LexSubshift::new(ep("(10)"), ep("(1)"));
        assert_eq!(reduce_upper(&two), two);
        // σ²((110)^∞) = (011)^∞ ≼ (011)^∞, so the bound becomes (10)^∞.
        let s = LexSubshift::new(ep("(011)"), ep("(110)"));
        let r = reduce_upper(&s);
        assert_eq!(r.upper, ep("(10)"));
        assert!(!r.strict_upper);
        for n in 1..=12 {
            assert_eq!(count_words(&s, n).unwrap(), count_words(&r, n).unwrap());
        }
    }

    #[test]
    fn counting_fallback_brackets_the_exact_value() {
        for s in [
            golden_mean(),
            LexSubshift::new(ep("(001)"), ep("(110)")),
            LexSubshift::new(ep("01(0)"), ep("(1)")),
        ] {
            let exact = entropy(&s);
            let counted = entropy_by_counting(&s, 16);
            assert!(counted.lower <= exact.upper + 1e-12, "{s:?}");
            assert!(counted.upper >= exact.lower - 1e-12, "{s:?}");
        }
    }

    #[test]
    fn dimension_endpoints_at_base_two() {
        let two = BetaSpec::from_decimal("2").unwrap();
        let d0 = dimension(&two, &PointSpec::from_decimal("0").unwrap());
        assert!((d0.dim_lower - 1.0).abs() < 1e-6 && (d0.dim_upper - 1.0).abs() < 1e-6);
        let half = dimension(&two, &PointSpec::from_decimal("0.5").unwrap());
        assert_eq!(half.dim_upper, 0.0);
        let quarter = dimension(&two, &PointSpec::from_decimal("0.25").unwrap());
        assert!(quarter.dim_lower > 0.0 && quarter.dim_upper < 1.0);
    }

    #[test]
    fn symbolic_dimension_is_exact() {
        let g = beta_from_alpha(&ep("(10)")).unwrap();
        let t = PointSpec::symbolic(ep("(0)"), &g).unwrap();
        let d = dimension(&g, &t);
        assert_eq!(d.method(), EntropyMethod::AutomatonExact);
        assert!(d.dim_lower > 1.0 - 1e-6);
    }
}
